#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mbtg/ir.hpp"
#include "mbtg/ltl.hpp"

namespace mbtg {

struct ParseError : std::runtime_error {
    SourceSpan span;
    ParseError(std::string msg, SourceSpan s)
        : std::runtime_error(s.file + ":" + std::to_string(s.line) + ":" +
                             std::to_string(s.col) + ": " + msg),
          span(std::move(s)) {}
};

/// Observed timed I/O trace; internal variables never appear here.
struct TraceLog {
    struct Record {
        Value t = 0;
        std::string var;
        int var_index = -1;
        Value value = 0;
    };
    std::vector<Record> records;
};

/// Parses the model DSL. The result is bound (names resolved) but not yet
/// validated; run validate() for IR diagnostics.
Model parse_model(const std::string& text, const std::string& filename = "<model>");

/// Parses an LTL formula over the DSL expression syntax. Identifier binding
/// happens later against a model.
LtlFormula parse_ltl(const std::string& text);

/// Parses an LTL formula and binds it against `model`; throws ParseError on
/// unresolved identifiers.
LtlFormula parse_ltl(const std::string& text, const Model& model);

/// Parses a standalone state formula (no temporal operators).
Expr parse_state_formula(const std::string& text, const Model& model);

/// Line-oriented log `t=<ms> <name>=<value>`; `#` comments. Values hold
/// between records. Rejects decreasing timestamps and references to
/// undeclared or internal variables.
TraceLog parse_trace_log(const std::string& text, const Model& model,
                         const std::string& filename = "<trace>");

std::string pretty_print(const Model& model);
std::string print_trace_log(const TraceLog& log);

}  // namespace mbtg
