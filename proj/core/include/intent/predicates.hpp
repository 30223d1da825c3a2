#pragma once

// The six decision procedures plus the capacity screen. Every predicate
// returns a Verdict whose clause list mirrors the definition it implements;
// intent predicates read only the agent's subjective model, while moral
// responsibility also consults the objective model and the realized world.

#include "intent/scenario.hpp"

namespace intent {

struct CapacityRequirement {
    int number = 0;
    std::string name;
    bool satisfied = false;
    std::string note;

    bool operator==(const CapacityRequirement&) const = default;
};

struct CapacityReport {
    std::vector<CapacityRequirement> requirements;  // ten entries, in order

    bool all_satisfied() const;
    int satisfied_count() const;

    bool operator==(const CapacityReport&) const = default;
};

// Screens the structural prerequisites an agent/world pair must meet before
// intent talk makes sense: state, choice, likelihood, causality, feasibility,
// results, a subjective model, an objective model, plans, aims.
CapacityReport check_capacity(const Scenario& scenario);

// Whether the agent can observe or (in inferred mode) derive every result
// variable from its observables across the relevant interventions.
bool knowledge_holds(const AgentModel& agent, const Event& result, const IntentConfig& config);

// Intent at commission: free agency, knowledge, foreseeable but-for
// causality, and an explicit or implicit aim. Clauses DIc1, DIc2, DIc3,
// DIc4a, DIc4b; holds = 1 & 2 & 3 & (4a | 4b).
Verdict direct_intent_commission(const Scenario& scenario, const Event& result,
                                 const Intervention& action, const IntentConfig& config);

// Same clauses evaluated against the commission-time snapshot of the agent;
// the realized outcome never enters. Clause ids DIp*.
Verdict direct_intent_perspective(const Scenario& scenario, const Event& result,
                                  const Intervention& action, const IntentConfig& config);

// MR1 free agency, MR2 but-for causation in the objective model plus the
// outcome actually obtaining, MR3 the action does not minimise the outcome
// probability among the alternatives. Requires a realized world.
Verdict moral_responsibility(const Scenario& scenario, const Event& outcome,
                             const Intervention& action, const IntentConfig& config);

// The result is a means to some directly intended end under the full plan:
// ME1 an intended end exists, ME2 the action but-for causes the result, ME3
// the action is part of the plan, ME4 the result is necessary for the end.
Verdict means_end_intent(const Scenario& scenario, const Event& result,
                         const Intervention& action, const IntentConfig& config);

// A foreseen-but-unwanted side effect: OBcl structural causal link, OB1 some
// other result is directly intended, OB2a the result is almost certain under
// the action, OB2b almost certain given the intended result. With
// exclude_avoided_results an extra clause OBavoid rejects actions chosen to
// minimise the result probability.
Verdict oblique_intent(const Scenario& scenario, const Event& result,
                       const Intervention& action, const IntentConfig& config);

// Intent lodged in a conditional plan: some foreseeable trigger condition
// under which the policy's prescribed action would carry direct or oblique
// intent for the result (UL1), plus commitment to the policy (UL2).
Verdict ulterior_intent(const Scenario& scenario, const Event& result,
                        const IntentConfig& config);

// Dispatch a parsed query against the scenario's own config.
Verdict evaluate_query(const Scenario& scenario, const Query& query);

}  // namespace intent
