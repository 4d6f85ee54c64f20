#include "dpn/textio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace dpn {

namespace {

struct Token {
    std::string text;
    int column = 1;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        out.push_back(Token{line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    ParseResult run() {
        std::istringstream in(text_);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            lineno_ = lineno;
            auto tokens = tokenize(line);
            if (tokens.empty()) continue;
            parse_line(tokens);
        }
        finish();
        ParseResult result;
        result.errors = std::move(errors_);
        if (result.errors.empty()) result.network = std::move(net_);
        return result;
    }

private:
    void error(const Token& tok, ParseErrorKind kind, const std::string& msg) {
        errors_.push_back(ParseError{
            SourceSpan{lineno_, tok.column, static_cast<int>(tok.text.size())}, kind, msg});
    }
    void error_at(SourceSpan span, ParseErrorKind kind, const std::string& msg) {
        errors_.push_back(ParseError{span, kind, msg});
    }
    SourceSpan line_span(const std::vector<Token>& tokens) const {
        const Token& first = tokens.front();
        const Token& last = tokens.back();
        return SourceSpan{lineno_, first.column,
                          last.column + static_cast<int>(last.text.size()) - first.column};
    }

    void parse_line(const std::vector<Token>& tokens) {
        const std::string& head = tokens[0].text;
        if (head == "network") parse_network(tokens);
        else if (head == "channel") parse_channel(tokens);
        else if (head == "task") parse_task(tokens);
        else if (head == "init") parse_init(tokens);
        else parse_transition(tokens);
    }

    void parse_network(const std::vector<Token>& tokens) {
        if (seen_network_) {
            error(tokens[0], ParseErrorKind::DuplicateDefinition,
                  "network already declared");
            return;
        }
        if (tokens.size() != 2 || !is_identifier(tokens[1].text)) {
            error(tokens[0], ParseErrorKind::Syntax, "expected: network <id>");
            return;
        }
        seen_network_ = true;
        net_.name = tokens[1].text;
    }

    void parse_channel(const std::vector<Token>& tokens) {
        if (tokens.size() != 5 || tokens[3].text != "->" ||
            !is_identifier(tokens[1].text) || !is_identifier(tokens[2].text) ||
            !is_identifier(tokens[4].text)) {
            error(tokens[0], ParseErrorKind::Syntax,
                  "expected: channel <id> <producer> -> <consumer>");
            return;
        }
        const std::string& id = tokens[1].text;
        if (net_.find_channel(id)) {
            error(tokens[1], ParseErrorKind::DuplicateDefinition,
                  "channel '" + id + "' already declared");
            return;
        }
        if (tokens[2].text == tokens[4].text)
            error(tokens[4], ParseErrorKind::RoleViolation,
                  "channel '" + id + "' must connect two distinct tasks");
        net_.channels.push_back(Channel{id, tokens[2].text, tokens[4].text});
        channel_spans_[id] = line_span(tokens);
        channel_task_refs_.push_back({tokens[2], lineno_});
        channel_task_refs_.push_back({tokens[4], lineno_});
    }

    void parse_task(const std::vector<Token>& tokens) {
        close_current_task();
        if (tokens.size() != 3 || !is_identifier(tokens[1].text) ||
            (tokens[2].text != "mode=deterministic" &&
             tokens[2].text != "mode=nondeterministic")) {
            error(tokens[0], ParseErrorKind::Syntax,
                  "expected: task <id> mode=<deterministic|nondeterministic>");
            return;
        }
        const std::string& id = tokens[1].text;
        if (net_.find_task(id)) {
            error(tokens[1], ParseErrorKind::DuplicateDefinition,
                  "task '" + id + "' already declared");
            return;
        }
        Task t;
        t.id = id;
        t.mode = tokens[2].text == "mode=deterministic" ? TaskMode::Deterministic
                                                        : TaskMode::Nondeterministic;
        net_.tasks.push_back(std::move(t));
        current_task_ = static_cast<int>(net_.tasks.size()) - 1;
        task_spans_[id] = line_span(tokens);
        saw_init_ = false;
    }

    // `init -> <state> [produce <list>]`
    void parse_init(const std::vector<Token>& tokens) {
        if (current_task_ < 0) {
            error(tokens[0], ParseErrorKind::Syntax, "init line outside any task");
            return;
        }
        Task& task = net_.tasks[static_cast<size_t>(current_task_)];
        if (saw_init_) {
            error(tokens[0], ParseErrorKind::DuplicateDefinition,
                  "task '" + task.id + "' already has an init line");
            return;
        }
        if (tokens.size() < 3 || tokens[1].text != "->" || !is_identifier(tokens[2].text)) {
            error(tokens[0], ParseErrorKind::Syntax,
                  "expected: init -> <state-id> [produce <ch>:<qty>,...]");
            return;
        }
        saw_init_ = true;
        task.initial_transition.target = tokens[2].text;
        declare_state(task, tokens[2].text);
        size_t pos = 3;
        if (pos < tokens.size()) {
            if (tokens[pos].text != "produce") {
                error(tokens[pos], ParseErrorKind::Syntax,
                      "only a produce clause may follow init");
                return;
            }
            if (!parse_rates(tokens, pos, task, /*producing=*/true,
                             task.initial_transition.produce, "initial transition"))
                return;
        }
        if (pos != tokens.size())
            error(tokens[pos], ParseErrorKind::Syntax, "trailing input after init line");
    }

    // `<src> -> <tgt> [consume <list>] [produce <list>]`
    void parse_transition(const std::vector<Token>& tokens) {
        if (current_task_ < 0) {
            error(tokens[0], ParseErrorKind::Syntax,
                  "transition line outside any task");
            return;
        }
        if (tokens.size() < 3 || tokens[1].text != "->" ||
            !is_identifier(tokens[0].text) || !is_identifier(tokens[2].text)) {
            error(tokens[0], ParseErrorKind::Syntax,
                  "expected: <state-id> -> <state-id> [consume ...] [produce ...]");
            return;
        }
        Task& task = net_.tasks[static_cast<size_t>(current_task_)];
        Transition tr;
        tr.id = "t" + std::to_string(task.transitions.size() + 1);
        tr.source = tokens[0].text;
        tr.target = tokens[2].text;
        declare_state(task, tr.source);
        declare_state(task, tr.target);

        size_t pos = 3;
        std::string label = "transition " + tr.id;
        if (pos < tokens.size() && tokens[pos].text == "consume")
            if (!parse_rates(tokens, pos, task, /*producing=*/false, tr.consume, label))
                return;
        if (pos < tokens.size() && tokens[pos].text == "produce")
            if (!parse_rates(tokens, pos, task, /*producing=*/true, tr.produce, label))
                return;
        if (pos != tokens.size()) {
            error(tokens[pos], ParseErrorKind::Syntax,
                  "expected consume/produce clauses, got '" + tokens[pos].text + "'");
            return;
        }
        if (tr.consume.empty() && tr.produce.empty()) {
            error_at(line_span(tokens), ParseErrorKind::RoleViolation,
                     "transition has no effect on any channel");
            return;
        }
        task.transitions.push_back(std::move(tr));
        transition_spans_[task.id + "." + task.transitions.back().id] = line_span(tokens);
    }

    // Parses `consume|produce <ch>:<qty>[,<ch>:<qty>]*` starting at tokens[pos]
    // (the keyword). Advances pos past the list. Returns false on hard error.
    bool parse_rates(const std::vector<Token>& tokens, size_t& pos, const Task& task,
                     bool producing, std::map<ChannelId, Quantity>& out,
                     const std::string& what) {
        const Token& kw = tokens[pos];
        if (pos + 1 >= tokens.size()) {
            error(kw, ParseErrorKind::Syntax, "expected <ch>:<qty> list after '" + kw.text + "'");
            return false;
        }
        const Token& list = tokens[pos + 1];
        pos += 2;

        size_t start = 0;
        bool ok = true;
        while (start <= list.text.size()) {
            size_t comma = list.text.find(',', start);
            std::string item = list.text.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            Token item_tok{item, list.column + static_cast<int>(start)};
            ok &= parse_rate_item(item_tok, task, producing, out, what);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return ok;
    }

    bool parse_rate_item(const Token& item, const Task& task, bool producing,
                         std::map<ChannelId, Quantity>& out, const std::string& what) {
        size_t colon = item.text.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= item.text.size()) {
            error(item, ParseErrorKind::Syntax, "expected <channel>:<quantity>");
            return false;
        }
        std::string ch = item.text.substr(0, colon);
        std::string qty_text = item.text.substr(colon + 1);
        if (!is_identifier(ch)) {
            error(item, ParseErrorKind::Syntax, "'" + ch + "' is not a valid channel id");
            return false;
        }
        const Channel* channel = net_.find_channel(ch);
        if (!channel) {
            error(item, ParseErrorKind::UnknownReference,
                  "channel '" + ch + "' is not declared");
            return false;
        }
        Quantity qty = 0;
        for (char c : qty_text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                error(item, ParseErrorKind::Syntax,
                      "'" + qty_text + "' is not a nonnegative integer");
                return false;
            }
            if (qty > (INT64_MAX - 9) / 10) {
                error(item, ParseErrorKind::Syntax, "quantity exceeds 64-bit range");
                return false;
            }
            qty = qty * 10 + (c - '0');
        }
        if (qty == 0) {
            error(item, ParseErrorKind::Syntax, "quantity must be >= 1");
            return false;
        }
        const TaskId& owner = producing ? channel->producer : channel->consumer;
        if (owner != task.id) {
            error(item, ParseErrorKind::RoleViolation,
                  what + (producing ? " produces on '" : " consumes from '") + ch +
                      "' but task '" + task.id + "' is not its " +
                      (producing ? "producer" : "consumer"));
            return false;
        }
        if (out.count(ch)) {
            error(item, ParseErrorKind::DuplicateDefinition,
                  "channel '" + ch + "' listed twice in one clause");
            return false;
        }
        out[ch] = qty;
        return true;
    }

    void declare_state(Task& task, const StateId& s) {
        if (!task.has_state(s)) task.states.push_back(s);
    }

    void close_current_task() {
        if (current_task_ < 0) return;
        Task& task = net_.tasks[static_cast<size_t>(current_task_)];
        if (!saw_init_)
            error_at(task_spans_[task.id], ParseErrorKind::Syntax,
                     "task '" + task.id + "' has no init line");
        // Synthesize the anonymous pre-init state; dodge user state names.
        std::string v0 = "_v0";
        while (task.has_state(v0)) v0 += "_";
        task.initial_state = v0;
        current_task_ = -1;
    }

    void finish() {
        close_current_task();
        if (!seen_network_)
            error_at(SourceSpan{1, 1, 1}, ParseErrorKind::Syntax,
                     "missing 'network <id>' declaration");
        for (const auto& [tok, line] : channel_task_refs_)
            if (!net_.find_task(tok.text))
                error_at(SourceSpan{line, tok.column, static_cast<int>(tok.text.size())},
                         ParseErrorKind::UnknownReference,
                         "task '" + tok.text + "' is not declared");
        if (!errors_.empty()) return;

        // The grammar cannot rule out connectivity violations; surface any
        // residual validate finding so a parsed network is always clean.
        ValidationReport report = validate(net_);
        for (const auto& v : report.violations) {
            SourceSpan span{1, 1, 1};
            auto t = task_spans_.find(v.entity);
            auto c = channel_spans_.find(v.entity);
            auto tr = transition_spans_.find(v.entity);
            if (t != task_spans_.end()) span = t->second;
            else if (c != channel_spans_.end()) span = c->second;
            else if (tr != transition_spans_.end()) span = tr->second;
            error_at(span, ParseErrorKind::RoleViolation, v.message);
        }
    }

    const std::string& text_;
    Network net_;
    std::vector<ParseError> errors_;
    int lineno_ = 0;
    bool seen_network_ = false;
    int current_task_ = -1;
    bool saw_init_ = false;
    std::map<std::string, SourceSpan> task_spans_;
    std::map<std::string, SourceSpan> channel_spans_;
    std::map<std::string, SourceSpan> transition_spans_;
    std::vector<std::pair<Token, int>> channel_task_refs_;
};

std::string rate_list(const std::map<ChannelId, Quantity>& rates) {
    std::string out;
    for (const auto& [ch, qty] : rates) {
        if (!out.empty()) out += ",";
        out += ch + ":" + std::to_string(qty);
    }
    return out;
}

}  // namespace

ParseResult parse(const std::string& text) { return Parser(text).run(); }

std::string emit_network(const Network& network) {
    std::ostringstream os;
    os << "network " << network.name << "\n";
    for (int ci : network.channels_by_id()) {
        const Channel& c = network.channels[static_cast<size_t>(ci)];
        os << "channel " << c.id << " " << c.producer << " -> " << c.consumer << "\n";
    }
    for (int ti : network.tasks_by_id()) {
        const Task& t = network.tasks[static_cast<size_t>(ti)];
        os << "task " << t.id << " mode="
           << (t.mode == TaskMode::Deterministic ? "deterministic" : "nondeterministic")
           << "\n";
        os << "init -> " << t.initial_transition.target;
        if (!t.initial_transition.produce.empty())
            os << " produce " << rate_list(t.initial_transition.produce);
        os << "\n";
        for (const auto& tr : t.transitions) {
            os << tr.source << " -> " << tr.target;
            if (!tr.consume.empty()) os << " consume " << rate_list(tr.consume);
            if (!tr.produce.empty()) os << " produce " << rate_list(tr.produce);
            os << "\n";
        }
    }
    return os.str();
}

std::string parse_error_kind_str(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::Syntax: return "syntax";
        case ParseErrorKind::UnknownReference: return "unknown-reference";
        case ParseErrorKind::DuplicateDefinition: return "duplicate-definition";
        case ParseErrorKind::RoleViolation: return "role-violation";
    }
    return "?";
}

std::string format_error(const ParseError& e) {
    return std::to_string(e.span.line) + ":" + std::to_string(e.span.column) + ": " +
           parse_error_kind_str(e.kind) + ": " + e.message;
}

}  // namespace dpn
