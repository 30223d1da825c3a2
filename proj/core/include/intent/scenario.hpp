#pragma once

// A scenario bundles the objective world model, the agent, what was done and
// what happened, plus the configuration and the queries to answer. Scenarios
// travel as a small line-oriented text format (.intent) or as an equivalent
// JSON tree; both parse through the same validator.

#include <variant>

#include "intent/verdict.hpp"

namespace intent {

struct Query {
    Definition definition = Definition::DirectCommission;
    Event result;
    std::optional<Intervention> action;  // overrides `performed` when present

    bool operator==(const Query&) const = default;
};

struct Scenario {
    CausalModel objective_model;
    AgentModel agent;
    std::optional<AgentModel> commission_snapshot;  // agent as of commission time
    Intervention performed;
    std::optional<Intervention> plan;
    std::optional<World> realized;
    IntentConfig config;
    std::vector<Query> queries;

    const AgentModel& commission_agent() const {
        return commission_snapshot ? *commission_snapshot : agent;
    }
    const Intervention& effective_plan() const { return plan ? *plan : performed; }

    bool operator==(const Scenario&) const = default;
};

using ScenarioDocument = std::string;

// Error vocabulary is closed: syntax, unknown-variable, domain-mismatch,
// non-dag, unnormalized, bad-threshold, inconsistent-realized.
struct ParseError {
    int line = 1;
    int column = 1;
    std::string code = "syntax";
    std::string message;

    std::string render() const;  // "error: <code> at <line>:<col>: <message>"

    bool operator==(const ParseError&) const = default;
};

using ParseResult = std::variant<Scenario, ParseError>;

ParseResult parse_scenario(std::string_view text);

// Same schema as the text form, as a JSON tree. Shape errors surface with the
// same code vocabulary (location 1:1, message names the offending path).
ParseResult parse_scenario_json(std::string_view text);

// Canonical text form: fixed section order, two-space indent, canonical
// number printing, trailing newline. parse(serialize(s)) == s for every valid
// scenario, and serializing a parsed document is idempotent.
ScenarioDocument serialize_scenario(const Scenario& s);

// Canonical JSON tree form (ordered arrays for everything order-sensitive).
std::string scenario_to_json(const Scenario& s);

// Full semantic validation of a programmatically built scenario: model and
// agent structure, config thresholds, intervention/realized coherence.
std::vector<Violation> validate_scenario(const Scenario& s);

}  // namespace intent
