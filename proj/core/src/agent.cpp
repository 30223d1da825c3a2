#include "intent/agent.hpp"

#include "compiled.hpp"

namespace intent {

std::set<VariableId> Policy::bound_actions() const {
    std::set<VariableId> out;
    for (const auto& rule : rules) {
        for (const auto& [id, value] : rule.action.settings) out.insert(id);
    }
    return out;
}

std::string_view to_string(KnowledgeMode mode) {
    switch (mode) {
        case KnowledgeMode::DeclaredOnly: return "declared_only";
        case KnowledgeMode::DeclaredOrInferred: return "declared_or_inferred";
    }
    return "declared_or_inferred";
}

std::optional<KnowledgeMode> knowledge_mode_from_string(std::string_view s) {
    if (s == "declared_only") return KnowledgeMode::DeclaredOnly;
    if (s == "declared_or_inferred") return KnowledgeMode::DeclaredOrInferred;
    return std::nullopt;
}

std::vector<Violation> validate_config(const IntentConfig& config) {
    std::vector<Violation> out;
    if (!(config.tau > 0.0 && config.tau <= 1.0)) {
        out.push_back({"bad-threshold", "", "tau must lie in (0, 1], got " +
                                                format_number(config.tau)});
    }
    if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) {
        out.push_back({"bad-threshold", "", "epsilon must lie in [0, 1), got " +
                                                format_number(config.epsilon)});
    }
    if (!(config.tau > config.epsilon)) {
        out.push_back({"bad-threshold", "",
                       "tau (" + format_number(config.tau) + ") must exceed epsilon (" +
                           format_number(config.epsilon) + ")"});
    }
    if (!(config.tolerance > 0.0)) {
        out.push_back({"bad-threshold", "", "tolerance must be positive, got " +
                                                format_number(config.tolerance)});
    }
    return out;
}

namespace {

void check_event_against(const CausalModel& model, const Event& e, const std::string& where,
                         std::vector<Violation>& out) {
    for (const auto& [id, value] : e.literals) {
        const Domain* d = model.find_domain(id);
        if (!d) {
            out.push_back({"unknown-variable", id,
                           where + " references unknown variable '" + id + "'"});
        } else if (!d->contains(value)) {
            out.push_back({"domain-mismatch", id,
                           where + " assigns '" + id + "' the out-of-domain value '" + value +
                               "'"});
        }
    }
}

}  // namespace

std::vector<Violation> validate_agent(const AgentModel& agent, const CausalModel& objective) {
    std::vector<Violation> out = validate_model(agent.subjective_model);
    const CausalModel& subjective = agent.subjective_model;

    // Shared variables must mean the same thing in both models.
    auto check_shared = [&](const VariableId& id, const Domain& domain) {
        const Domain* other = objective.find_domain(id);
        if (other && !(*other == domain)) {
            out.push_back({"domain-mismatch", id,
                           "'" + id + "' has different domains in the subjective and objective models"});
        }
    };
    for (const auto& v : subjective.exogenous) check_shared(v.id, v.domain);
    for (const auto& v : subjective.endogenous) check_shared(v.id, v.domain);
    for (const auto& v : subjective.actions) check_shared(v.id, v.domain);

    for (const auto& id : agent.observables) {
        if (!subjective.has_variable(id)) {
            out.push_back({"unknown-variable", id,
                           "observables list unknown variable '" + id + "'"});
        }
    }

    for (const auto& aim : agent.aims) {
        if (aim.empty()) {
            out.push_back({"domain-mismatch", "", "aims contain an empty event"});
            continue;
        }
        check_event_against(subjective, aim, "aim " + format_event(aim), out);
    }

    if (agent.policy) {
        for (const auto& rule : agent.policy->rules) {
            if (rule.condition.empty()) {
                out.push_back({"domain-mismatch", "", "policy rule has an empty condition"});
            }
            check_event_against(subjective, rule.condition, "policy condition", out);
            if (rule.action.empty()) {
                out.push_back({"domain-mismatch", "", "policy rule has an empty action"});
            }
            for (const auto& [id, value] : rule.action.settings) {
                const Domain* d = subjective.find_domain(id);
                if (!d) {
                    out.push_back({"unknown-variable", id,
                                   "policy binds unknown variable '" + id + "'"});
                    continue;
                }
                if (!subjective.is_action(id)) {
                    out.push_back({"domain-mismatch", id,
                                   "policy binds '" + id + "', which is not an action variable"});
                    continue;
                }
                if (!d->contains(value)) {
                    out.push_back({"domain-mismatch", id,
                                   "policy assigns '" + id + "' the out-of-domain value '" +
                                       value + "'"});
                }
            }
        }

        // Bound actions must be resolvable: conditions may not depend on the
        // actions they decide. Detected by attempting the policy-aware build.
        if (out.empty()) {
            try {
                (void)detail::Compiled::build(subjective, &*agent.policy);
            } catch (const ModelError& err) {
                out.push_back({"non-dag", "", err.what()});
            }
        }
    }

    return out;
}

World evaluate_with_policy(const CausalModel& model, const Assignment& context,
                           const Intervention& intervention, const Policy& policy) {
    auto compiled = detail::Compiled::build(model, &policy);

    std::vector<int> exo_values(compiled.exo_count(), -1);
    for (int slot = 0; slot < compiled.slot_count(); ++slot) {
        const auto& var = compiled.var(slot);
        if (var.kind != detail::VarKind::Exogenous) continue;
        auto it = context.find(var.id);
        if (it == context.end()) {
            throw ModelError("context does not assign exogenous variable '" + var.id + "'");
        }
        int idx = var.domain->index_of(it->second);
        if (idx < 0) {
            throw ModelError("context assigns '" + var.id + "' the out-of-domain value '" +
                             it->second + "'");
        }
        exo_values[var.exo_pos] = idx;
    }

    std::vector<int> world;
    compiled.evaluate(exo_values, compiled.lower_intervention(intervention), world);
    return compiled.to_world(world);
}

std::vector<Intervention> default_reference_actions(const CausalModel& model,
                                                    const Intervention& action) {
    std::vector<VariableId> ids;
    std::vector<const Domain*> domains;
    for (const auto& [id, value] : action.settings) {
        const Domain* d = model.find_domain(id);
        if (!d || !model.is_action(id)) {
            throw ModelError("'" + id + "' is not an action variable of the model");
        }
        if (!d->contains(value)) {
            throw ModelError("action assigns '" + id + "' the out-of-domain value '" + value +
                             "'");
        }
        ids.push_back(id);
        domains.push_back(d);
    }

    // Odometer over the acted-upon variables, first variable fastest.
    std::vector<Intervention> out;
    std::vector<std::size_t> at(ids.size(), 0);
    if (ids.empty()) return out;
    while (true) {
        Intervention candidate;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            candidate.settings[ids[i]] = domains[i]->values[at[i]];
        }
        if (!(candidate == action)) out.push_back(std::move(candidate));

        std::size_t i = 0;
        for (; i < at.size(); ++i) {
            if (++at[i] < domains[i]->values.size()) break;
            at[i] = 0;
        }
        if (i == at.size()) break;
    }
    return out;
}

std::vector<Intervention> resolve_reference_actions(const CausalModel& model,
                                                    const Intervention& action,
                                                    const IntentConfig& config) {
    if (!config.reference_actions) return default_reference_actions(model, action);
    std::vector<Intervention> out;
    for (const auto& alt : *config.reference_actions) {
        if (!(alt == action)) out.push_back(alt);
    }
    return out;
}

}  // namespace intent
