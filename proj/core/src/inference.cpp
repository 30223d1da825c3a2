#include "intent/inference.hpp"

#include "compiled.hpp"

namespace intent {

std::string format_event(const Event& e) {
    std::string s;
    for (const auto& [id, value] : e.literals) {
        if (!s.empty()) s += " & ";
        s += id + "=" + value;
    }
    return s;
}

std::uint64_t context_space_size(const CausalModel& model) {
    std::uint64_t n = 1;
    for (const auto& v : model.exogenous) n *= std::uint64_t(v.domain.values.size());
    return n;
}

ContextEnumeration enumerate_contexts(const CausalModel& model, std::uint64_t cap) {
    auto compiled = detail::Compiled::build(model);
    std::uint64_t total = compiled.context_count();
    if (total > cap) {
        throw CapExceededError("exogenous context space (" + std::to_string(total) +
                               ") exceeds the enumeration cap (" + std::to_string(cap) + ")");
    }
    ContextEnumeration out;
    out.entries.reserve(std::size_t(total));
    std::vector<int> exo;
    for (std::uint64_t rank = 0; rank < total; ++rank) {
        compiled.context_at(rank, exo);
        out.entries.push_back({compiled.exo_assignment(exo), compiled.context_probability(exo)});
    }
    return out;
}

namespace {

void require_event(const Event& e, const char* op) {
    if (e.empty()) {
        throw PreconditionError(std::string(op) + " requires a non-empty event");
    }
}

}  // namespace

double prob(const CausalModel& model, const Intervention& intervention, const Event& event,
            std::uint64_t cap) {
    require_event(event, "prob");
    auto compiled = detail::Compiled::build(model);
    detail::QueryEngine engine(compiled, cap);
    return engine.probability(compiled.lower_intervention(intervention),
                              compiled.lower_event(event));
}

std::optional<double> cond_prob(const CausalModel& model, const Intervention& intervention,
                                const Event& event, const Event& given, double tolerance,
                                std::uint64_t cap) {
    require_event(event, "cond_prob");
    require_event(given, "cond_prob");
    auto compiled = detail::Compiled::build(model);
    detail::QueryEngine engine(compiled, cap);
    return engine.conditional(compiled.lower_intervention(intervention),
                              compiled.lower_event(event), compiled.lower_event(given),
                              tolerance);
}

ButForResult but_for_cause(const CausalModel& model, const Intervention& action,
                           const std::vector<Intervention>& reference, const Event& event,
                           std::uint64_t cap) {
    require_event(event, "but_for_cause");
    if (reference.empty()) {
        throw PreconditionError("but_for_cause requires a non-empty reference action set");
    }
    for (const auto& alt : reference) {
        if (alt == action) {
            throw PreconditionError("but_for_cause reference set contains the action itself");
        }
    }

    auto compiled = detail::Compiled::build(model);
    detail::QueryEngine engine(compiled, cap);

    std::vector<std::vector<int>> lowered;
    lowered.reserve(reference.size());
    for (const auto& alt : reference) lowered.push_back(compiled.lower_intervention(alt));

    auto hit = engine.but_for(compiled.lower_intervention(action), lowered,
                              compiled.lower_event(event));
    ButForResult out;
    out.caused = hit.caused;
    if (hit.caused) {
        out.witness = CauseWitness{engine.context_assignment(hit.context_pos), action,
                                   reference[hit.reference_index]};
    }
    return out;
}

bool necessary_for(const CausalModel& model, const Intervention& plan, const Event& inner,
                   const Event& outer, std::uint64_t cap) {
    require_event(inner, "necessary_for");
    require_event(outer, "necessary_for");
    auto compiled = detail::Compiled::build(model);
    detail::QueryEngine engine(compiled, cap);
    return engine.necessary(compiled.lower_intervention(plan), compiled.lower_event(inner),
                            compiled.lower_event(outer));
}

}  // namespace intent
