#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "coalp/term.hpp"

namespace coalp {

/// An ordered list of clauses plus the derived signature. Clause order is
/// preserved; clause indices are stable identifiers used in traces.
struct Program {
    std::vector<Clause> clauses;
    std::map<std::string, std::size_t> function_arity;
    std::map<std::string, std::size_t> predicate_arity;
};

struct ParseDiagnostic {
    int line = 0;
    int column = 0;
    std::string message;
    enum class Severity { error, warning } severity = Severity::error;
};

template <class T>
struct ParseResult {
    std::optional<T> value;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return value.has_value(); }
};

/// Prolog-like surface syntax: facts `p(t,...).`, rules `h :- b1, ..., bn.`,
/// `%` line comments. Variables start with an uppercase letter or `_`;
/// functors/constants start lowercase or are quoted. Arity is checked
/// globally across the whole program.
ParseResult<Program> parse_program(const std::string& text);

/// Goals are `?- a1, ..., an.` (the leading `?-` is optional).
ParseResult<Goal> parse_goal(const std::string& text);

std::string to_string(const Program& p);

}  // namespace coalp
