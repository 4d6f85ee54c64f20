#ifndef DPN_TEXTIO_HPP
#define DPN_TEXTIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "dpn/model.hpp"

namespace dpn {

struct SourceSpan {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 0;
};

enum class ParseErrorKind { Syntax, UnknownReference, DuplicateDefinition, RoleViolation };

struct ParseError {
    SourceSpan span;
    ParseErrorKind kind = ParseErrorKind::Syntax;
    std::string message;
};

struct ParseResult {
    std::optional<Network> network;  // present iff errors is empty
    std::vector<ParseError> errors;
    bool ok() const { return errors.empty() && network.has_value(); }
};

/// Parse the line-oriented DPN description format. All errors of one pass are
/// collected (recovery at line granularity). A returned network always passes
/// model::validate with an empty report; validate-level findings a grammar
/// cannot rule out (connectivity, ...) surface as RoleViolation errors.
ParseResult parse(const std::string& text);

/// Canonical text form: channels and tasks sorted by id, transitions kept in
/// declaration order, rate lists sorted by channel. parse(emit_network(n)) is
/// structurally equal to n, and emit∘parse is a fixpoint on emitted text.
std::string emit_network(const Network& network);

std::string parse_error_kind_str(ParseErrorKind k);

/// One-line rendering "line:col: kind: message" used by the CLI diagnostics.
std::string format_error(const ParseError& e);

}  // namespace dpn

#endif
