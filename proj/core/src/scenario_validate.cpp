#include <algorithm>
#include <cctype>

#include "compiled.hpp"
#include "scenario_internal.hpp"

namespace intent {

namespace {

void prefixed(std::vector<Violation>& out, const std::vector<Violation>& in,
              const std::string& prefix) {
    for (const auto& v : in) {
        std::string path = prefix;
        if (!v.variable.empty()) path += "." + v.variable;
        out.push_back({v.code, path, v.message});
    }
}

// Agent violations come back with bare variable ids; route them to the
// sub-path the id belongs to so positions resolve precisely.
void prefixed_agent(std::vector<Violation>& out, const AgentModel& agent,
                    const std::vector<Violation>& in, const std::string& prefix) {
    for (const auto& v : in) {
        std::string path = prefix;
        if (v.message.rfind("observables", 0) == 0) {
            path += ".observes";
            if (!v.variable.empty()) path += "." + v.variable;
        } else if (v.message.rfind("aim", 0) == 0 || v.message.rfind("aims", 0) == 0) {
            path += ".aims";
        } else if (v.message.rfind("policy", 0) == 0) {
            path += ".policy";
        } else if (!v.variable.empty() && agent.subjective_model.has_variable(v.variable)) {
            path += ".model." + v.variable;
        } else if (!v.variable.empty()) {
            path += "." + v.variable;
        }
        out.push_back({v.code, path, v.message});
    }
}

// The text form declares endogenous domains implicitly through table outputs
// (first appearance order); scenario validity pins the stored domain to that,
// which is what makes serialization lossless.
void check_endogenous_domains(std::vector<Violation>& out, const CausalModel& model,
                              const std::string& prefix) {
    for (const auto& var : model.endogenous) {
        std::vector<ValueLabel> inferred;
        for (const auto& row : var.rows) {
            if (std::find(inferred.begin(), inferred.end(), row.output) == inferred.end()) {
                inferred.push_back(row.output);
            }
        }
        if (var.domain.values != inferred) {
            out.push_back({"domain-mismatch", prefix + "." + var.id,
                           "domain of '" + var.id +
                               "' must equal its table outputs in first-appearance order"});
        }
    }
}

// Value labels must survive the text form, whose lexer reads bare words.
bool serializable_label(const std::string& label) {
    if (label.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(label[0])) || label[0] == '_')) return false;
    for (char ch : label) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '@')) {
            return false;
        }
    }
    return true;
}

void check_label_lexicality(std::vector<Violation>& out, const CausalModel& model,
                            const std::string& prefix) {
    auto check_domain = [&](const VariableId& id, const Domain& domain) {
        for (const auto& value : domain.values) {
            if (!serializable_label(value)) {
                out.push_back({"domain-mismatch", prefix + "." + id,
                               "value label '" + value + "' of '" + id +
                                   "' is not a serializable word"});
            }
        }
    };
    for (const auto& v : model.exogenous) check_domain(v.id, v.domain);
    for (const auto& v : model.endogenous) check_domain(v.id, v.domain);
    for (const auto& v : model.actions) check_domain(v.id, v.domain);
}

struct ModelSide {
    const CausalModel* model;
    const char* name;
};

std::vector<ModelSide> model_sides(const Scenario& s) {
    std::vector<ModelSide> sides{{&s.objective_model, "objective model"},
                                 {&s.agent.subjective_model, "subjective model"}};
    if (s.commission_snapshot) {
        sides.push_back({&s.commission_snapshot->subjective_model, "commission model"});
    }
    return sides;
}

void check_intervention_targets(std::vector<Violation>& out, const std::vector<ModelSide>& sides,
                                const Intervention& iv, const std::string& path,
                                const std::string& what) {
    for (const auto& [id, value] : iv.settings) {
        for (const auto& side : sides) {
            const Domain* d = side.model->find_domain(id);
            if (!d) {
                out.push_back({"unknown-variable", path,
                               what + " targets unknown variable '" + id + "' (" + side.name +
                                   ")"});
                break;
            }
            if (!side.model->is_action(id)) {
                out.push_back({"domain-mismatch", path,
                               what + " targets '" + id + "', which is not an action variable (" +
                                   side.name + ")"});
                break;
            }
            if (!d->contains(value)) {
                out.push_back({"domain-mismatch", path,
                               what + " assigns '" + id + "' the out-of-domain value '" + value +
                                   "' (" + side.name + ")"});
                break;
            }
        }
    }
}

void check_event_vars(std::vector<Violation>& out, const CausalModel& model,
                      const char* model_name, const Event& e, const std::string& path,
                      const std::string& what) {
    for (const auto& [id, value] : e.literals) {
        const Domain* d = model.find_domain(id);
        if (!d) {
            out.push_back({"unknown-variable", path,
                           what + " references unknown variable '" + id + "' (" + model_name +
                               ")"});
        } else if (!d->contains(value)) {
            out.push_back({"domain-mismatch", path,
                           what + " assigns '" + id + "' the out-of-domain value '" + value +
                               "' (" + model_name + ")"});
        }
    }
}

// A policy participates in objective-model evaluation (moral responsibility,
// realized consistency), so its variables must make sense there too.
void check_policy_against_objective(std::vector<Violation>& out, const CausalModel& objective,
                                    const Policy& policy, const std::string& path) {
    for (std::size_t i = 0; i < policy.rules.size(); ++i) {
        const auto& rule = policy.rules[i];
        std::string rule_path = path + "[" + std::to_string(i) + "]";
        check_event_vars(out, objective, "objective model", rule.condition, rule_path,
                         "policy condition");
        for (const auto& [id, value] : rule.action.settings) {
            const Domain* d = objective.find_domain(id);
            if (!d) {
                out.push_back({"unknown-variable", rule_path,
                               "policy binds unknown variable '" + id + "' (objective model)"});
            } else if (!objective.is_action(id)) {
                out.push_back({"domain-mismatch", rule_path,
                               "policy binds '" + id +
                                   "', which is not an action variable (objective model)"});
            } else if (!d->contains(value)) {
                out.push_back({"domain-mismatch", rule_path,
                               "policy assigns '" + id + "' the out-of-domain value '" + value +
                                   "' (objective model)"});
            }
        }
    }
}

// Policies concern what the agent will do later: every bound action must sit
// at a strictly later time step than the non-bound performed actions.
void check_policy_timing(std::vector<Violation>& out, const Policy& policy,
                         const Intervention& performed, const std::string& path) {
    auto bound = policy.bound_actions();
    int t1 = 0;
    for (const auto& [id, value] : performed.settings) {
        if (!bound.count(id)) t1 = std::max(t1, time_step_of(id));
    }
    for (const auto& id : bound) {
        if (time_step_of(id) <= t1) {
            out.push_back({"syntax", path,
                           "policy binds '" + id + "' at time step " +
                               std::to_string(time_step_of(id)) +
                               ", which is not after the performed actions (time step " +
                               std::to_string(t1) + ")"});
        }
    }
}

void check_realized_consistency(std::vector<Violation>& out, const Scenario& s) {
    if (!s.realized || s.realized->values.empty()) return;

    const Policy* policy = s.agent.policy ? &*s.agent.policy : nullptr;
    detail::Compiled compiled;
    try {
        compiled = detail::Compiled::build(s.objective_model, policy);
    } catch (const ModelError&) {
        return;  // already reported structurally
    }
    if (compiled.context_count() > s.config.context_cap) return;  // too large to verify

    std::vector<int> action_values;
    try {
        action_values = compiled.lower_intervention(s.performed);
    } catch (const ModelError&) {
        return;  // already reported against `performed`
    }

    std::vector<int> exo_values;
    std::vector<int> world;
    for (std::uint64_t rank = 0; rank < compiled.context_count(); ++rank) {
        compiled.context_at(rank, exo_values);
        if (compiled.context_probability(exo_values) <= 0.0) continue;
        try {
            compiled.evaluate(exo_values, action_values, world);
        } catch (const ModelError&) {
            continue;  // policy silent in this context; cannot have produced it
        }
        bool match = true;
        for (const auto& [id, value] : s.realized->values) {
            int slot = compiled.slot_of(id);
            if (slot < 0 || compiled.var(slot).domain->values[world[slot]] != value) {
                match = false;
                break;
            }
        }
        if (match) return;
    }
    out.push_back({"inconsistent-realized", "realized",
                   "no positive-probability context reproduces the realized world under the "
                   "performed actions"});
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
    std::vector<Violation> out;

    prefixed(out, validate_model(s.objective_model), "model");
    check_endogenous_domains(out, s.objective_model, "model");
    check_label_lexicality(out, s.objective_model, "model");

    prefixed_agent(out, s.agent, validate_agent(s.agent, s.objective_model), "agent");
    check_endogenous_domains(out, s.agent.subjective_model, "agent.model");
    check_label_lexicality(out, s.agent.subjective_model, "agent.model");
    if (s.agent.policy) {
        check_policy_against_objective(out, s.objective_model, *s.agent.policy, "agent.policy");
        check_policy_timing(out, *s.agent.policy, s.performed, "agent.policy");
    }

    if (s.commission_snapshot) {
        prefixed_agent(out, *s.commission_snapshot,
                       validate_agent(*s.commission_snapshot, s.objective_model),
                       "commission_agent");
        check_endogenous_domains(out, s.commission_snapshot->subjective_model,
                                 "commission_agent.model");
        check_label_lexicality(out, s.commission_snapshot->subjective_model,
                               "commission_agent.model");
        if (s.commission_snapshot->policy) {
            check_policy_against_objective(out, s.objective_model, *s.commission_snapshot->policy,
                                           "commission_agent.policy");
            check_policy_timing(out, *s.commission_snapshot->policy, s.performed,
                                "commission_agent.policy");
        }
    }

    auto sides = model_sides(s);
    check_intervention_targets(out, sides, s.performed, "performed", "performed");
    if (s.plan) {
        check_intervention_targets(out, sides, *s.plan, "plan", "plan");
        if (!s.performed.subset_of(*s.plan)) {
            out.push_back({"syntax", "plan", "performed actions are not contained in the plan"});
        }
    }

    if (s.realized) {
        for (const auto& [id, value] : s.realized->values) {
            const Domain* d = s.objective_model.find_domain(id);
            if (!d) {
                out.push_back({"unknown-variable", "realized",
                               "realized world references unknown variable '" + id + "'"});
            } else if (!d->contains(value)) {
                out.push_back({"domain-mismatch", "realized",
                               "realized world assigns '" + id + "' the out-of-domain value '" +
                                   value + "'"});
            }
        }
    }

    for (const auto& v : validate_config(s.config)) {
        // Messages begin with the offending knob; use it as the path.
        std::string key = v.message.substr(0, v.message.find_first_of(" ("));
        out.push_back({v.code, "config." + key, v.message});
    }
    if (s.config.reference_actions) {
        for (std::size_t i = 0; i < s.config.reference_actions->size(); ++i) {
            check_intervention_targets(out, sides, (*s.config.reference_actions)[i],
                                       "config.reference_actions[" + std::to_string(i) + "]",
                                       "reference action");
        }
    }

    for (std::size_t i = 0; i < s.queries.size(); ++i) {
        const Query& q = s.queries[i];
        std::string path = "queries[" + std::to_string(i) + "]";
        if (q.result.empty()) {
            out.push_back({"syntax", path, "query has an empty result event"});
            continue;
        }
        const CausalModel& home = q.definition == Definition::DirectPerspective
                                      ? s.commission_agent().subjective_model
                                      : s.agent.subjective_model;
        const char* home_name = q.definition == Definition::DirectPerspective
                                    ? "commission model"
                                    : "subjective model";
        check_event_vars(out, home, home_name, q.result, path, "query result");
        if (q.definition == Definition::MoralResponsibility) {
            check_event_vars(out, s.objective_model, "objective model", q.result, path,
                             "query result");
            if (!s.realized) {
                out.push_back({"syntax", path,
                               "moral_responsibility query requires a realized world"});
            }
        }
        if (q.definition == Definition::Ulterior && !s.agent.policy) {
            out.push_back({"syntax", path, "ulterior query requires a policy"});
        }
        if (q.action) {
            check_intervention_targets(out, sides, *q.action, path, "query action");
        }
    }

    if (out.empty()) check_realized_consistency(out, s);
    return out;
}

namespace detail {

std::string parse_code_for(std::string_view violation_code) {
    if (violation_code == "duplicate-id" || violation_code == "bad-id" ||
        violation_code == "syntax") {
        return "syntax";
    }
    if (violation_code == "cycle" || violation_code == "non-dag") return "non-dag";
    if (violation_code == "bad-distribution" || violation_code == "unnormalized-distribution" ||
        violation_code == "unnormalized") {
        return "unnormalized";
    }
    if (violation_code == "unknown-parent" || violation_code == "unknown-variable") {
        return "unknown-variable";
    }
    if (violation_code == "bad-threshold") return "bad-threshold";
    if (violation_code == "inconsistent-realized") return "inconsistent-realized";
    return "domain-mismatch";
}

std::optional<ParseError> finish_validation(const Scenario& scenario,
                                            const PositionIndex& positions) {
    auto violations = validate_scenario(scenario);
    if (violations.empty()) return std::nullopt;
    const Violation& v = violations.front();

    // Longest-prefix resolution of the dotted path.
    std::string path = v.variable;
    SourcePos pos;
    while (true) {
        auto it = positions.find(path);
        if (it != positions.end()) {
            pos = it->second;
            break;
        }
        std::size_t cut = path.find_last_of(".[");
        if (cut == std::string::npos) break;
        path.resize(cut);
    }

    ParseError err;
    err.line = pos.line;
    err.column = pos.column;
    err.code = parse_code_for(v.code);
    err.message = v.message;
    return err;
}

}  // namespace detail

}  // namespace intent
