#pragma once

// Deliberately naive second paths used to cross-check the engine: worlds by
// fixpoint substitution with no topological sort, probabilities by exhaustive
// tabulation, necessity by scanning every context. Nothing here shares code
// with the library's inference.

#include <optional>

#include "intent/inference.hpp"

namespace testsupport {

double oracle_prob(const intent::CausalModel& model, const intent::Intervention& intervention,
                   const intent::Event& event);

std::optional<double> oracle_cond_prob(const intent::CausalModel& model,
                                       const intent::Intervention& intervention,
                                       const intent::Event& event, const intent::Event& given,
                                       double tolerance = 1e-9);

bool oracle_necessary(const intent::CausalModel& model, const intent::Intervention& plan,
                      const intent::Event& inner, const intent::Event& outer);

}  // namespace testsupport
