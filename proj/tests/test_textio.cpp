#include "doctest.h"
#include "dpn/textio.hpp"
#include "support/generators.hpp"

using namespace dpn;
using namespace dpn::testsupport;

TEST_CASE("the 8-line pair source parses to two tasks, one channel, two loops") {
    ParseResult result = parse(kE1Source);
    REQUIRE(result.ok());
    const Network& net = *result.network;
    CHECK(net.name == "e1");
    CHECK(net.tasks.size() == 2);
    CHECK(net.channels.size() == 1);
    const Task* a = net.find_task("A");
    REQUIRE(a);
    CHECK(a->transitions.size() == 1);
    CHECK(a->transitions[0].id == "t1");
    CHECK(a->transitions[0].source == "s0");
    CHECK(a->transitions[0].target == "s0");
    CHECK(a->transitions[0].produce.at("f") == 1);
    CHECK(a->initial_transition.target == "s0");
    CHECK(validate(net).ok());
    CHECK(structurally_equal(net, e1_network()));
}

TEST_CASE("initial tokens land on the producer's initial transition") {
    ParseResult result = parse(kE3Source);
    REQUIRE(result.ok());
    const Task* b = result.network->find_task("B");
    REQUIRE(b);
    CHECK(b->initial_transition.produce.at("f2") == 1);
    CHECK(result.network->initial_tokens("f2") == 1);
    CHECK(structurally_equal(*result.network, e3_network()));
}

TEST_CASE("an undeclared channel in a consume clause is an unknown reference") {
    std::string source =
        "network n\n"
        "channel f A -> B\n"
        "task A mode=nondeterministic\n"
        "init -> s0\n"
        "s0 -> s0 produce f:1\n"
        "task B mode=nondeterministic\n"
        "init -> t0\n"
        "t0 -> t0 consume g:1\n";
    ParseResult result = parse(source);
    REQUIRE(result.errors.size() == 1);
    const ParseError& e = result.errors[0];
    CHECK(e.kind == ParseErrorKind::UnknownReference);
    CHECK(e.span.line == 8);
    CHECK(e.span.column == 18);  // the `g:1` item
    CHECK(e.message.find("'g'") != std::string::npos);
}

TEST_CASE("error kinds and spans for the malformed fixtures") {
    SUBCASE("syntax: malformed channel line") {
        ParseResult r = parse("network n\nchannel f A B\n");
        REQUIRE(r.errors.size() >= 1);
        CHECK(r.errors[0].kind == ParseErrorKind::Syntax);
        CHECK(r.errors[0].span.line == 2);
    }
    SUBCASE("syntax: zero quantity") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\ntask A mode=nondeterministic\ninit -> s0\n"
            "s0 -> s0 produce f:0\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::Syntax);
        CHECK(r.errors[0].span.line == 5);
        CHECK(r.errors[0].span.column == 18);
    }
    SUBCASE("syntax: missing init") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\ntask A mode=nondeterministic\n"
            "task B mode=nondeterministic\ninit -> t0\nt0 -> t0 consume f:1\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::Syntax);
        CHECK(r.errors[0].message.find("no init") != std::string::npos);
        CHECK(r.errors[0].span.line == 3);
    }
    SUBCASE("duplicate definitions") {
        ParseResult r = parse("network n\nchannel f A -> B\nchannel f B -> A\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::DuplicateDefinition);
        CHECK(r.errors[0].span.line == 3);
        CHECK(r.errors[0].span.column == 9);
    }
    SUBCASE("duplicate init") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\ntask A mode=nondeterministic\n"
            "init -> s0\ninit -> s1\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::DuplicateDefinition);
        CHECK(r.errors[0].span.line == 5);
    }
    SUBCASE("role violation: producing on a channel the task does not own") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\ntask A mode=nondeterministic\ninit -> s0\n"
            "s0 -> s0 produce f:1\ntask B mode=nondeterministic\ninit -> t0\n"
            "t0 -> t0 produce f:1\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::RoleViolation);
        CHECK(r.errors[0].span.line == 8);
    }
    SUBCASE("role violation: ineffective transition") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\ntask A mode=nondeterministic\ninit -> s0\n"
            "s0 -> s1\ns1 -> s0 produce f:1\ntask B mode=nondeterministic\ninit -> t0\n"
            "t0 -> t0 consume f:1\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::RoleViolation);
        CHECK(r.errors[0].span.line == 5);
        CHECK(r.errors[0].message.find("no effect") != std::string::npos);
    }
    SUBCASE("role violation: disconnected network") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\nchannel g C -> D\n"
            "task A mode=nondeterministic\ninit -> s0\ns0 -> s0 produce f:1\n"
            "task B mode=nondeterministic\ninit -> t0\nt0 -> t0 consume f:1\n"
            "task C mode=nondeterministic\ninit -> u0\nu0 -> u0 produce g:1\n"
            "task D mode=nondeterministic\ninit -> v0\nv0 -> v0 consume g:1\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::RoleViolation);
        CHECK(r.errors[0].message.find("not connected") != std::string::npos);
    }
    SUBCASE("unknown task in a channel line") {
        ParseResult r = parse(
            "network n\nchannel f A -> Z\ntask A mode=nondeterministic\ninit -> s0\n"
            "s0 -> s0 produce f:1\n");
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].kind == ParseErrorKind::UnknownReference);
        CHECK(r.errors[0].span.line == 2);
        CHECK(r.errors[0].span.column == 16);
    }
    SUBCASE("multiple errors are collected in one pass") {
        ParseResult r = parse(
            "network n\nchannel f A -> B\ntask A mode=bogus\ninit -> s0\n"
            "s0 -> s0 produce f:0\n");
        CHECK(r.errors.size() >= 2);
    }
}

TEST_CASE("comments and blank lines are ignored") {
    std::string source =
        "# a pair\nnetwork e1\n\nchannel f A -> B   # the only channel\n"
        "task A mode=nondeterministic\ninit -> s0\ns0 -> s0 produce f:1\n"
        "task B mode=nondeterministic\ninit -> t0\nt0 -> t0 consume f:1\n";
    ParseResult result = parse(source);
    REQUIRE(result.ok());
    CHECK(structurally_equal(*result.network, e1_network()));
}

TEST_CASE("every error span points inside the input") {
    const char* sources[] = {
        "network n\nchannel f A B\n",
        "task A mode=nondeterministic\n",
        "network n\nchannel f A -> B\nbogus line here\n",
        "network n\nnetwork m\n",
    };
    for (const char* source : sources) {
        ParseResult r = parse(source);
        REQUIRE(!r.errors.empty());
        std::string text(source);
        long lines = static_cast<long>(std::count(text.begin(), text.end(), '\n'));
        for (const auto& e : r.errors) {
            CHECK(e.span.line >= 1);
            CHECK(e.span.line <= lines);
            CHECK(e.span.column >= 1);
            CHECK(!e.message.empty());
        }
    }
}

TEST_CASE("emit then parse is the identity up to canonical ordering") {
    for (const Network& net : {e1_network(), e2_network(), e3_network()}) {
        ParseResult round = parse(emit_network(net));
        REQUIRE(round.ok());
        CHECK(structurally_equal(net, *round.network));
    }
}

TEST_CASE("emitted text is a fixpoint of parse-emit") {
    const char* sources[] = {kE1Source, kE2Source, kE3Source};
    for (const char* source : sources) {
        ParseResult first = parse(source);
        REQUIRE(first.ok());
        std::string once = emit_network(*first.network);
        ParseResult second = parse(once);
        REQUIRE(second.ok());
        CHECK(emit_network(*second.network) == once);
    }
}

TEST_CASE("round trip holds on random networks") {
    Rng rng(99);
    for (int i = 0; i < 40; ++i) {
        Network net = random_network(rng);
        ParseResult round = parse(emit_network(net));
        REQUIRE(round.ok());
        CHECK(structurally_equal(net, *round.network));
        std::string once = emit_network(*round.network);
        ParseResult again = parse(once);
        REQUIRE(again.ok());
        CHECK(emit_network(*again.network) == once);
    }
}

TEST_CASE("the mirror of the pair emits both channel declarations") {
    Network m = mirror_transform(e1_network(), Dimensioning{{{"f", 1}}});
    std::string text = emit_network(m);
    CHECK(text.find("channel f A -> B") != std::string::npos);
    CHECK(text.find("channel f_mirror B -> A") != std::string::npos);
}
