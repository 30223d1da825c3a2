#pragma once

// The agent side of a scenario: what the agent believes (its own causal
// model), what it can see, what it is trying to bring about, and any
// conditional plan it has committed to for a later time step.

#include "intent/inference.hpp"

namespace intent {

// One arm of a conditional plan: when `condition` is observed, perform
// `action`. Rules are matched in order; the first hit decides.
struct PolicyRule {
    Event condition;
    Intervention action;

    bool operator==(const PolicyRule&) const = default;
};

struct Policy {
    std::vector<PolicyRule> rules;

    // Action variables set by at least one rule. These are the variables the
    // policy resolves during evaluation when no intervention covers them.
    std::set<VariableId> bound_actions() const;

    bool operator==(const Policy&) const = default;
};

enum class KnowledgeMode {
    DeclaredOnly,        // result variables must be listed as observable
    DeclaredOrInferred,  // or be fully determined by the observables
};

std::string_view to_string(KnowledgeMode mode);
std::optional<KnowledgeMode> knowledge_mode_from_string(std::string_view s);

struct AgentModel {
    CausalModel subjective_model;
    std::set<VariableId> observables;
    std::vector<Event> aims;  // declared order matters for witness search
    std::optional<Policy> policy;
    bool committed = false;

    bool operator==(const AgentModel&) const = default;
};

// Knobs shared by every intent predicate. tau is the "almost certain"
// threshold, epsilon the "foreseeable" floor (strict >), tolerance guards
// every floating-point comparison.
struct IntentConfig {
    double tau = 0.99;
    double epsilon = 0.0;
    double tolerance = 1e-9;
    std::optional<std::vector<Intervention>> reference_actions;
    bool exclude_avoided_results = false;
    KnowledgeMode knowledge_mode = KnowledgeMode::DeclaredOrInferred;
    std::uint64_t context_cap = kDefaultContextCap;

    bool operator==(const IntentConfig&) const = default;
};

// tau in (0,1], epsilon in [0,1), tau > epsilon, tolerance > 0.
std::vector<Violation> validate_config(const IntentConfig& config);

// Agent-level defects: invalid subjective model, unknown variables in
// observables/aims/policy, domain disagreement with the objective model,
// policy rules that would cycle or bind past-time actions.
std::vector<Violation> validate_agent(const AgentModel& agent, const CausalModel& objective);

// evaluate() with policy-bound actions resolved by rule matching. Actions
// covered by the intervention are never consulted against the policy.
World evaluate_with_policy(const CausalModel& model, const Assignment& context,
                           const Intervention& intervention, const Policy& policy);

// Every total intervention over exactly the variables `action` touches, minus
// `action` itself, in domain declaration order.
std::vector<Intervention> default_reference_actions(const CausalModel& model,
                                                    const Intervention& action);

// config.reference_actions minus `action` when set, otherwise the default.
std::vector<Intervention> resolve_reference_actions(const CausalModel& model,
                                                    const Intervention& action,
                                                    const IntentConfig& config);

}  // namespace intent
