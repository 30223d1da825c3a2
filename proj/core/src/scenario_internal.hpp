#pragma once

// Shared plumbing between the two scenario readers: both construct a Scenario
// syntactically, then delegate semantics to validate_scenario() and map its
// first violation to a positioned ParseError through a dotted-path index
// ("model.Fuse", "agent.observes.Death", "config.tau", "queries[2]").

#include <map>

#include "intent/scenario.hpp"

namespace intent::detail {

struct SourcePos {
    int line = 1;
    int column = 1;
};

using PositionIndex = std::map<std::string, SourcePos>;

// Internal unwinding for the readers; converted to a ParseResult at the
// library boundary.
struct ParseFail {
    ParseError error;
};

[[noreturn]] inline void fail(SourcePos pos, std::string message, std::string code = "syntax") {
    ParseError e;
    e.line = pos.line;
    e.column = pos.column;
    e.code = std::move(code);
    e.message = std::move(message);
    throw ParseFail{std::move(e)};
}

// Maps a model/agent-level violation code onto the closed parse vocabulary.
std::string parse_code_for(std::string_view violation_code);

// Runs validate_scenario and renders the first violation, resolving its
// dotted path against `positions` (longest-prefix match, 1:1 fallback).
std::optional<ParseError> finish_validation(const Scenario& scenario,
                                            const PositionIndex& positions);

}  // namespace intent::detail
