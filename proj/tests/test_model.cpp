#include "doctest.h"
#include "dpn/model.hpp"
#include "support/generators.hpp"

using namespace dpn;
using namespace dpn::testsupport;

TEST_CASE("the worked fixtures validate cleanly") {
    CHECK(validate(e1_network()).ok());
    CHECK(validate(e2_network()).ok());
    CHECK(validate(e3_network()).ok());
}

TEST_CASE("a transition with no effect is reported") {
    Network net = e1_network();
    net.tasks[0].transitions.push_back(Transition{"t2", "s0", "s0", {}, {}});
    ValidationReport report = validate(net);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].entity == "A.t2");
    CHECK(report.violations[0].message.find("no effect") != std::string::npos);
}

TEST_CASE("an isolated task breaks connectivity") {
    Network net = e1_network();
    Task c;
    c.id = "C";
    c.initial_state = "_v0";
    c.states = {"u0"};
    c.initial_transition.target = "u0";
    net.tasks.push_back(c);
    ValidationReport report = validate(net);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].entity == "C");
    CHECK(report.violations[0].message.find("not connected") != std::string::npos);
}

TEST_CASE("role violations are caught") {
    Network net = e1_network();
    SUBCASE("consumer producing") {
        net.tasks[1].transitions[0].produce["f"] = 1;  // B is f's consumer
        CHECK_FALSE(validate(net).ok());
    }
    SUBCASE("self channel") {
        net.channels.push_back(Channel{"g", "A", "A"});
        CHECK_FALSE(validate(net).ok());
    }
    SUBCASE("initial transition consuming is unrepresentable by type, producing off-role") {
        net.tasks[1].initial_transition.produce["f"] = 1;  // B does not produce f
        CHECK_FALSE(validate(net).ok());
    }
}

TEST_CASE("validate is idempotent and side-effect free") {
    Network net = e2_network();
    ValidationReport first = validate(net);
    ValidationReport second = validate(net);
    CHECK(first.violations.size() == second.violations.size());
    CHECK(structurally_equal(net, e2_network()));
}

TEST_CASE("dimensioning validity: capacities must hold the initial tokens") {
    Network net = e3_network();
    Dimensioning ok;
    ok.capacities = {{"f1", 1}, {"f2", 1}};
    CHECK_NOTHROW(require_valid_dimensioning(net, ok));
    Dimensioning bad;
    bad.capacities = {{"f1", 1}, {"f2", 0}};  // f2 starts with one token
    CHECK_THROWS_AS(require_valid_dimensioning(net, bad), InvalidDimensioning);
    Dimensioning missing;
    missing.capacities = {{"f1", 1}};
    CHECK_THROWS_AS(require_valid_dimensioning(net, missing), InvalidDimensioning);
}

TEST_CASE("mirror transform on the pair network at capacity 1") {
    Network net = e1_network();
    Network m = mirror_transform(net, Dimensioning{{{"f", 1}}});

    CHECK(m.tasks.size() == net.tasks.size());
    CHECK(m.channels.size() == net.channels.size() + 1);
    const Channel* mirror = m.find_channel("f_mirror");
    REQUIRE(mirror);
    CHECK(mirror->producer == "B");
    CHECK(mirror->consumer == "A");

    const Task* a = m.find_task("A");
    const Task* b = m.find_task("B");
    CHECK(a->transitions[0].consume.at("f_mirror") == 1);
    CHECK(a->transitions[0].produce.at("f") == 1);
    CHECK(b->transitions[0].consume.at("f") == 1);
    CHECK(b->transitions[0].produce.at("f_mirror") == 1);
    CHECK(b->initial_transition.produce.at("f_mirror") == 1);

    CHECK(validate(m).ok());
}

TEST_CASE("mirror at capacity 0 leaves the mirror channel empty") {
    Network m = mirror_transform(e1_network(), Dimensioning{{{"f", 0}}});
    const Task* b = m.find_task("B");
    CHECK(b->initial_transition.produce.count("f_mirror") == 0);
    // A's production on f now requires a token from the empty mirror channel.
    const Task* a = m.find_task("A");
    CHECK(a->transitions[0].consume.at("f_mirror") == 1);
}

TEST_CASE("mirror seeds capacity minus initial tokens") {
    Network m = mirror_transform(e3_network(), Dimensioning{{{"f1", 2}, {"f2", 3}}});
    const Task* a = m.find_task("A");  // consumer of f2
    CHECK(a->initial_transition.produce.at("f2_mirror") == 2);  // 3 - 1 initial token
    const Task* b = m.find_task("B");  // consumer of f1
    CHECK(b->initial_transition.produce.at("f1_mirror") == 2);
    CHECK_THROWS_AS(mirror_transform(e3_network(), Dimensioning{{{"f1", 0}, {"f2", 0}}}),
                    InvalidDimensioning);
}

TEST_CASE("mirror output of random networks passes validation") {
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        Network net = random_network(rng);
        Dimensioning dims;
        for (const auto& ch : net.channels)
            dims.capacities[ch.id] = net.initial_tokens(ch.id) + rng.range(0, 2);
        Network m = mirror_transform(net, dims);
        CHECK(validate(m).ok());
        CHECK(m.tasks.size() == net.tasks.size());
        CHECK(m.channels.size() == 2 * net.channels.size());
    }
}

TEST_CASE("structural equality ignores transition ids and declaration order") {
    Network a = e1_network();
    Network b = e1_network();
    b.tasks[0].transitions[0].id = "zz";
    std::swap(b.tasks[0], b.tasks[1]);
    CHECK(structurally_equal(a, b));
    b.tasks[0].transitions[0].consume["f"] = 2;
    CHECK_FALSE(structurally_equal(a, b));
}
