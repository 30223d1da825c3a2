#pragma once

// Exact inference over a causal model by exhaustive enumeration of the
// exogenous product space. Everything here is brute force by design: the
// models are desk scale and the answers must be exact.

#include <cstdint>
#include <optional>

#include "intent/model.hpp"

namespace intent {

// Conjunction of variable=value literals. A variable appears at most once.
struct Event {
    std::map<VariableId, ValueLabel> literals;

    bool empty() const { return literals.empty(); }

    bool operator==(const Event&) const = default;
};

std::string format_event(const Event& e);

struct ContextEntry {
    Assignment context;   // one value per exogenous variable
    double probability;   // product of the per-variable weights

    bool operator==(const ContextEntry&) const = default;
};

struct ContextEnumeration {
    std::vector<ContextEntry> entries;

    bool operator==(const ContextEnumeration&) const = default;
};

inline constexpr std::uint64_t kDefaultContextCap = std::uint64_t(1) << 24;

std::uint64_t context_space_size(const CausalModel& model);

// All exogenous contexts in canonical order (first declared variable varies
// fastest) with their product probabilities. Throws CapExceededError when the
// space is larger than `cap`.
ContextEnumeration enumerate_contexts(const CausalModel& model,
                                      std::uint64_t cap = kDefaultContextCap);

// P(event) under do(intervention): total weight of contexts whose evaluated
// world satisfies every literal. The intervention must cover every action
// variable. Event must be non-empty.
double prob(const CausalModel& model, const Intervention& intervention,
            const Event& event, std::uint64_t cap = kDefaultContextCap);

// P(event | given) under do(intervention); empty when P(given) <= tolerance.
std::optional<double> cond_prob(const CausalModel& model, const Intervention& intervention,
                                const Event& event, const Event& given,
                                double tolerance = kProbabilityTolerance,
                                std::uint64_t cap = kDefaultContextCap);

struct CauseWitness {
    Assignment context;
    Intervention actual_action;
    Intervention counterfactual_action;

    bool operator==(const CauseWitness&) const = default;
};

struct ButForResult {
    bool caused = false;
    std::optional<CauseWitness> witness;
};

// Contrastive but-for causation: some positive-probability context where the
// action yields the event and some reference action does not. Witnesses are
// searched context-major, then in reference order, and the first one wins.
// `reference` must be non-empty and must not contain `action`.
ButForResult but_for_cause(const CausalModel& model, const Intervention& action,
                           const std::vector<Intervention>& reference, const Event& event,
                           std::uint64_t cap = kDefaultContextCap);

// Under do(plan), every positive-probability context satisfying `outer` also
// satisfies `inner`.
bool necessary_for(const CausalModel& model, const Intervention& plan,
                   const Event& inner, const Event& outer,
                   std::uint64_t cap = kDefaultContextCap);

}  // namespace intent
