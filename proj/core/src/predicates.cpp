#include "intent/predicates.hpp"

#include <algorithm>

#include "compiled.hpp"

namespace intent {

namespace {

using detail::Compiled;
using detail::CompiledEvent;
using detail::QueryEngine;

std::string prob_label(const Event& result, const Intervention& action) {
    return "P(" + format_event(result) + " | do" + format_intervention(action) + ")";
}

std::string cond_label(const Event& result, const Intervention& action, const Event& given) {
    return "P(" + format_event(result) + " | do" + format_intervention(action) + ", " +
           format_event(given) + ")";
}

std::string join_interventions(const std::vector<Intervention>& ivs) {
    std::string s;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (i) s += ", ";
        s += format_intervention(ivs[i]);
    }
    return s;
}

// True when some alternative gives a strictly lower probability than the
// action, i.e. the action is not (weakly) the minimiser.
bool not_minimum(double p_action, const std::vector<double>& p_refs, double tolerance,
                 std::size_t* which = nullptr) {
    for (std::size_t i = 0; i < p_refs.size(); ++i) {
        if (p_action > p_refs[i] + tolerance) {
            if (which) *which = i;
            return true;
        }
    }
    return false;
}

void require_config(const IntentConfig& config) {
    auto violations = validate_config(config);
    if (!violations.empty()) {
        throw PreconditionError(violations.front().message);
    }
}

// Working set for one predicate evaluation: one compiled subjective model,
// one (possibly conditioned) context set, caches shared by every clause.
struct Session {
    const AgentModel& agent;
    const IntentConfig& config;
    Intervention performed;
    const Compiled& compiled;
    QueryEngine& engine;

    std::vector<int> obs_slots;
    // Per intervention: slots whose value the observables pin down.
    std::map<std::vector<int>, std::vector<bool>> determined_cache;

    Session(const AgentModel& agent_, const IntentConfig& config_, Intervention performed_,
            const Compiled& compiled_, QueryEngine& engine_)
        : agent(agent_),
          config(config_),
          performed(std::move(performed_)),
          compiled(compiled_),
          engine(engine_) {
        for (const auto& id : agent.observables) {
            int slot = compiled.slot_of(id);
            if (slot >= 0) obs_slots.push_back(slot);
        }
    }

    std::vector<int> lower(const Intervention& action) const {
        return compiled.lower_intervention(composed(performed, action));
    }

    const std::vector<bool>& determined_slots(const std::vector<int>& lowered) {
        auto it = determined_cache.find(lowered);
        if (it != determined_cache.end()) return it->second;

        const auto& worlds = engine.worlds(lowered);
        int slots = compiled.slot_count();

        // Group contexts by their observable projection; a slot is determined
        // when each group concentrates its mass on a single value.
        std::map<std::vector<int>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < worlds.size(); ++i) {
            std::vector<int> key(obs_slots.size());
            for (std::size_t k = 0; k < obs_slots.size(); ++k) key[k] = worlds[i][obs_slots[k]];
            groups[std::move(key)].push_back(i);
        }

        std::vector<bool> determined(slots, true);
        std::map<int, double> mass;
        for (int slot = 0; slot < slots; ++slot) {
            for (const auto& [key, members] : groups) {
                mass.clear();
                double total = 0.0;
                for (std::size_t i : members) {
                    mass[worlds[i][slot]] += engine.weight(i);
                    total += engine.weight(i);
                }
                double top = 0.0;
                for (const auto& [value, m] : mass) top = std::max(top, m);
                if (total - top > config.tolerance) {
                    determined[slot] = false;
                    break;
                }
            }
        }
        return determined_cache.emplace(lowered, std::move(determined)).first->second;
    }
};

struct KnowledgeOutcome {
    bool holds = false;
    std::string note;
};

KnowledgeOutcome knowledge_check(Session& s, const Event& result, const Intervention& action,
                                 const std::vector<Intervention>& reference) {
    std::vector<VariableId> missing;
    for (const auto& [id, value] : result.literals) {
        if (!s.agent.observables.count(id)) missing.push_back(id);
    }
    if (missing.empty()) {
        return {true, "result variables declared observable"};
    }
    if (s.config.knowledge_mode == KnowledgeMode::DeclaredOnly) {
        return {false, "result variable '" + missing.front() + "' is not declared observable"};
    }

    // Inferred mode: undeclared variables must be pinned down by the
    // observables under the action and under every alternative.
    std::vector<std::vector<int>> lowered;
    lowered.push_back(s.lower(action));
    for (const auto& alt : reference) lowered.push_back(s.lower(alt));

    for (const auto& id : missing) {
        int slot = s.compiled.slot_of(id);
        for (const auto& iv : lowered) {
            if (!s.determined_slots(iv)[slot]) {
                return {false, "result variable '" + id +
                                   "' is neither observable nor determined by the observables"};
            }
        }
    }
    return {true, "result variables observable or inferred from the observables"};
}

struct DirectLabels {
    const char* c1;
    const char* c2;
    const char* c3;
    const char* c4a;
    const char* c4b;
};

constexpr DirectLabels kCommission{"DIc1", "DIc2", "DIc3", "DIc4a", "DIc4b"};
constexpr DirectLabels kPerspective{"DIp1", "DIp2", "DIp3", "DIp4a", "DIp4b"};

Verdict direct_clauses(Session& s, Definition definition, const DirectLabels& L,
                       const Event& result, const Intervention& action,
                       const std::vector<Intervention>& reference) {
    Verdict v;
    v.definition = definition;
    v.result = result;
    v.action = action;
    v.trace.config = s.config;
    v.trace.notes.push_back("performed: " + format_intervention(s.performed));
    v.trace.notes.push_back(reference.empty() ? "reference: none"
                                              : "reference: " + join_interventions(reference));

    CompiledEvent ev = s.compiled.lower_event(result);
    std::vector<int> la = s.lower(action);

    // Free agency: she could have done otherwise.
    bool c1 = !reference.empty();
    {
        ClauseResult c{L.c1, c1, {}};
        c.evidence.notes.push_back(c1 ? "alternative actions exist: " + join_interventions(reference)
                                      : "no alternative actions available");
        v.clauses.push_back(std::move(c));
    }

    // Knowledge of the result.
    KnowledgeOutcome knowledge = knowledge_check(s, result, action, reference);
    {
        ClauseResult c{L.c2, knowledge.holds, {}};
        c.evidence.notes.push_back(knowledge.note);
        v.clauses.push_back(std::move(c));
    }

    // Foreseeable causality: but-for against some alternative, plus a result
    // probability strictly above epsilon.
    double p_action = s.engine.probability(la, ev);
    {
        ClauseResult c{L.c3, false, {}};
        c.evidence.probabilities.push_back({prob_label(result, action), p_action});
        if (!c1) {
            c.evidence.notes.push_back("no alternative actions to contrast with");
        } else {
            std::vector<std::vector<int>> lowered_refs;
            lowered_refs.reserve(reference.size());
            for (const auto& alt : reference) lowered_refs.push_back(s.lower(alt));
            auto hit = s.engine.but_for(la, lowered_refs, ev);
            if (hit.caused) {
                Assignment witness_context = s.engine.context_assignment(hit.context_pos);
                c.evidence.witnesses.push_back({"but-for witness", witness_context, action,
                                                reference[hit.reference_index]});
                if (p_action > s.config.epsilon) {
                    c.holds = true;
                    c.evidence.notes.push_back(
                        "but-for cause (witness context " + format_assignment(witness_context) +
                        "); " + prob_label(result, action) + " = " + format_number(p_action) +
                        " exceeds epsilon " + format_number(s.config.epsilon));
                } else {
                    c.evidence.notes.push_back(prob_label(result, action) + " = " +
                                               format_number(p_action) +
                                               " does not exceed epsilon " +
                                               format_number(s.config.epsilon));
                }
            } else {
                c.evidence.notes.push_back("not a but-for cause of the result against any alternative");
            }
        }
        v.clauses.push_back(std::move(c));
    }
    bool c3 = v.clauses.back().holds;

    // Explicit aim: the result is literally one of the agent's aims.
    bool c4a = std::any_of(s.agent.aims.begin(), s.agent.aims.end(),
                           [&](const Event& aim) { return aim == result; });
    {
        ClauseResult c{L.c4a, c4a, {}};
        c.evidence.notes.push_back(c4a ? "the result is a declared aim"
                                       : "the result is not a declared aim");
        v.clauses.push_back(std::move(c));
    }

    // Implicit aim: some alternative would have made the result strictly less
    // likely, so the chosen action reveals a preference for it.
    bool c4b = false;
    {
        ClauseResult c{L.c4b, false, {}};
        std::string witness_note;
        for (const auto& alt : reference) {
            double p_alt = s.engine.probability(s.lower(alt), ev);
            c.evidence.probabilities.push_back({prob_label(result, alt), p_alt});
            if (!c4b && p_alt < p_action - s.config.tolerance) {
                c4b = true;
                witness_note = "alternative " + format_intervention(alt) +
                               " makes the result less likely: " + format_number(p_alt) + " < " +
                               format_number(p_action);
            }
        }
        c.holds = c4b;
        c.evidence.notes.push_back(c4b ? witness_note
                                       : "no alternative makes the result less likely");
        v.clauses.push_back(std::move(c));
    }

    v.holds = c1 && knowledge.holds && c3 && (c4a || c4b);
    return v;
}

// Candidate intended results for the oblique/means-end witness search:
// declared aims first, then single literals over endogenous variables, always
// variable-disjoint from the queried result and free of action variables.
std::vector<Event> intended_result_candidates(const Session& s, const Event& result) {
    std::vector<Event> out;
    auto overlaps_result = [&](const Event& e) {
        for (const auto& [id, value] : e.literals) {
            if (result.literals.count(id)) return true;
        }
        return false;
    };
    auto touches_action = [&](const Event& e) {
        for (const auto& [id, value] : e.literals) {
            if (s.agent.subjective_model.is_action(id)) return true;
        }
        return false;
    };

    for (const auto& aim : s.agent.aims) {
        if (overlaps_result(aim) || touches_action(aim)) continue;
        if (std::find(out.begin(), out.end(), aim) == out.end()) out.push_back(aim);
    }
    for (const auto& var : s.agent.subjective_model.endogenous) {
        if (result.literals.count(var.id)) continue;
        for (const auto& value : var.domain.values) {
            Event e;
            e.literals[var.id] = value;
            if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
        }
    }
    return out;
}

std::set<VariableId> intervened_variables(const Session& s, const Intervention& action) {
    std::set<VariableId> vars;
    for (const auto& [id, value] : composed(s.performed, action).settings) vars.insert(id);
    return vars;
}

// Descendants in the graph the agent actually evaluates: model edges plus,
// for every policy-bound action the intervention does not override, edges
// from the rule condition variables to the bound action.
std::set<VariableId> effective_descendants(const AgentModel& agent,
                                           const std::set<VariableId>& roots,
                                           const std::set<VariableId>& overridden) {
    const CausalModel& model = agent.subjective_model;
    std::map<VariableId, std::vector<VariableId>> extra_children;
    if (agent.policy) {
        for (const auto& rule : agent.policy->rules) {
            for (const auto& [bound, value] : rule.action.settings) {
                if (overridden.count(bound)) continue;
                for (const auto& [condition_var, expected] : rule.condition.literals) {
                    extra_children[condition_var].push_back(bound);
                }
            }
        }
    }

    std::set<VariableId> reached = descendants_of(model, roots);
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& [parent, children] : extra_children) {
            if (!roots.count(parent) && !reached.count(parent)) continue;
            for (const auto& child : children) {
                if (roots.count(child) || reached.count(child)) continue;
                reached.insert(child);
                std::set<VariableId> grow{child};
                for (const auto& id : descendants_of(model, grow)) {
                    if (!roots.count(id)) reached.insert(id);
                }
                progress = true;
            }
        }
    }
    return reached;
}

Verdict oblique_clauses(Session& s, const Event& result, const Intervention& action,
                        const std::vector<Intervention>& reference) {
    Verdict v;
    v.definition = Definition::Oblique;
    v.result = result;
    v.action = action;
    v.trace.config = s.config;
    v.trace.notes.push_back("performed: " + format_intervention(s.performed));
    v.trace.notes.push_back(reference.empty() ? "reference: none"
                                              : "reference: " + join_interventions(reference));

    CompiledEvent ev = s.compiled.lower_event(result);
    std::vector<int> la = s.lower(action);

    // Structural causal link: a result that cannot be affected by what the
    // agent does is not a side effect of it.
    std::set<VariableId> acted = intervened_variables(s, action);
    std::set<VariableId> downstream = effective_descendants(s.agent, acted, acted);
    std::string offside;
    for (const auto& [id, value] : result.literals) {
        if (!downstream.count(id)) {
            offside = id;
            break;
        }
    }
    bool cl = offside.empty();
    {
        ClauseResult c{"OBcl", cl, {}};
        c.evidence.notes.push_back(cl ? "every result variable descends from an intervened action"
                                      : "result variable '" + offside +
                                            "' does not descend from any intervened action");
        v.clauses.push_back(std::move(c));
    }

    double p_action = s.engine.probability(la, ev);
    bool almost_certain = p_action >= s.config.tau - s.config.tolerance;

    // Witness search: a directly intended other result, preferring one that
    // also carries the conditional near-certainty when 2a fails on its own.
    std::optional<Event> witness_y;
    std::optional<Event> first_direct;
    std::optional<double> witness_cond;
    for (const auto& y : intended_result_candidates(s, result)) {
        Verdict direct = direct_clauses(s, Definition::DirectCommission, kCommission, y, action,
                                        reference);
        if (!direct.holds) continue;
        if (!first_direct) first_direct = y;
        if (almost_certain) {
            witness_y = y;
            break;
        }
        auto cond = s.engine.conditional(la, ev, s.compiled.lower_event(y), s.config.tolerance);
        if (cond && *cond >= s.config.tau - s.config.tolerance) {
            witness_y = y;
            witness_cond = cond;
            break;
        }
    }
    const std::optional<Event>& chosen = witness_y ? witness_y : first_direct;
    v.trace.chosen_y = chosen;

    bool ob1 = chosen.has_value();
    {
        ClauseResult c{"OB1", ob1, {}};
        c.evidence.notes.push_back(ob1 ? "directly intended result exists: " + format_event(*chosen)
                                       : "no directly intended result found");
        v.clauses.push_back(std::move(c));
    }

    {
        ClauseResult c{"OB2a", almost_certain, {}};
        c.evidence.probabilities.push_back({prob_label(result, action), p_action});
        c.evidence.notes.push_back(prob_label(result, action) + " = " + format_number(p_action) +
                                   (almost_certain ? " meets tau " : " falls short of tau ") +
                                   format_number(s.config.tau));
        v.clauses.push_back(std::move(c));
    }

    bool ob2b = false;
    {
        ClauseResult c{"OB2b", false, {}};
        if (!chosen) {
            c.evidence.notes.push_back("no directly intended result to condition on");
        } else {
            std::optional<double> cond = witness_cond;
            if (!cond) {
                cond = s.engine.conditional(la, ev, s.compiled.lower_event(*chosen),
                                            s.config.tolerance);
            }
            if (!cond) {
                c.evidence.notes.push_back("conditioning event " + format_event(*chosen) +
                                           " has probability 0 under the action");
            } else {
                ob2b = *cond >= s.config.tau - s.config.tolerance;
                c.holds = ob2b;
                c.evidence.probabilities.push_back({cond_label(result, action, *chosen), *cond});
                c.evidence.notes.push_back(cond_label(result, action, *chosen) + " = " +
                                           format_number(*cond) +
                                           (ob2b ? " meets tau " : " falls short of tau ") +
                                           format_number(s.config.tau));
            }
        }
        v.clauses.push_back(std::move(c));
    }

    bool avoid_ok = true;
    if (s.config.exclude_avoided_results) {
        std::vector<double> p_refs;
        ClauseResult c{"OBavoid", false, {}};
        c.evidence.probabilities.push_back({prob_label(result, action), p_action});
        for (const auto& alt : reference) {
            double p_alt = s.engine.probability(s.lower(alt), ev);
            p_refs.push_back(p_alt);
            c.evidence.probabilities.push_back({prob_label(result, alt), p_alt});
        }
        std::size_t which = 0;
        avoid_ok = not_minimum(p_action, p_refs, s.config.tolerance, &which);
        c.holds = avoid_ok;
        c.evidence.notes.push_back(
            avoid_ok ? "alternative " + format_intervention(reference[which]) +
                           " gives a lower result probability: " + format_number(p_refs[which]) +
                           " < " + format_number(p_action)
                     : "the action minimises the result probability among the alternatives");
        v.clauses.push_back(std::move(c));
    }

    v.holds = cl && ob1 && (almost_certain || ob2b) && avoid_ok;
    return v;
}

Session make_session(const AgentModel& agent, const IntentConfig& config,
                     const Intervention& performed, const Compiled& compiled,
                     QueryEngine& engine) {
    return Session(agent, config, performed, compiled, engine);
}

}  // namespace

bool CapacityReport::all_satisfied() const {
    return std::all_of(requirements.begin(), requirements.end(),
                       [](const CapacityRequirement& r) { return r.satisfied; });
}

int CapacityReport::satisfied_count() const {
    return int(std::count_if(requirements.begin(), requirements.end(),
                             [](const CapacityRequirement& r) { return r.satisfied; }));
}

CapacityReport check_capacity(const Scenario& scenario) {
    CapacityReport report;
    const CausalModel& objective = scenario.objective_model;
    auto objective_violations = validate_model(objective);
    auto agent_violations = validate_agent(scenario.agent, objective);

    auto add = [&](int number, std::string name, bool ok, std::string note) {
        report.requirements.push_back({number, std::move(name), ok, std::move(note)});
    };

    add(1, "state", objective.variable_count() > 0,
        objective.variable_count() > 0
            ? "the world model has " + std::to_string(objective.variable_count()) + " variables"
            : "the world model has no variables");

    bool has_choice = std::any_of(objective.actions.begin(), objective.actions.end(),
                                  [](const ActionVariable& a) { return a.domain.values.size() >= 2; });
    add(2, "chosen actions", has_choice,
        has_choice ? "an action variable with at least two options exists"
                   : "no action variable offers a real choice");

    auto dist_ok = [](const std::vector<Violation>& vs) {
        return std::none_of(vs.begin(), vs.end(), [](const Violation& v) {
            return v.code == "bad-distribution" || v.code == "unnormalized-distribution";
        });
    };
    bool likelihood = dist_ok(objective_violations) && dist_ok(agent_violations);
    add(3, "likelihood", likelihood,
        likelihood ? "every exogenous distribution is normalized"
                   : "an exogenous distribution is invalid");

    bool acyclic = std::none_of(objective_violations.begin(), objective_violations.end(),
                                [](const Violation& v) {
                                    return v.code == "cycle" || v.code == "unknown-parent";
                                });
    add(4, "causality", acyclic,
        acyclic ? "the world model is an acyclic mechanism graph"
                : "the world model has cyclic or dangling mechanisms");

    add(5, "model feasibility", objective_violations.empty(),
        objective_violations.empty() ? "the world model validates cleanly"
                                     : objective_violations.front().message);

    add(6, "results", !objective.endogenous.empty(),
        !objective.endogenous.empty() ? "caused state variables exist"
                                      : "no endogenous variable can register a result");

    add(7, "subjective model", agent_violations.empty(),
        agent_violations.empty() ? "the agent's own model validates cleanly"
                                 : agent_violations.front().message);

    add(8, "objective model", true, "the scenario carries a world model");

    bool plans = !scenario.performed.empty() || scenario.plan.has_value() ||
                 scenario.agent.policy.has_value();
    add(9, "plans", plans,
        plans ? "an action, plan, or policy is declared" : "nothing was done or planned");

    add(10, "aims", !scenario.agent.aims.empty(),
        !scenario.agent.aims.empty() ? "the agent declares at least one aim"
                                     : "the agent declares no aims");

    return report;
}

bool knowledge_holds(const AgentModel& agent, const Event& result, const IntentConfig& config) {
    require_config(config);
    auto compiled = Compiled::build(agent.subjective_model,
                                    agent.policy ? &*agent.policy : nullptr);
    QueryEngine engine(compiled, config.context_cap);
    Session session = make_session(agent, config, {}, compiled, engine);

    std::vector<Intervention> interventions;
    if (config.reference_actions) {
        interventions = *config.reference_actions;
    } else {
        // Every total intervention over the action variables.
        std::vector<const ActionVariable*> actions;
        for (const auto& a : agent.subjective_model.actions) actions.push_back(&a);
        std::vector<std::size_t> at(actions.size(), 0);
        while (true) {
            Intervention iv;
            for (std::size_t i = 0; i < actions.size(); ++i) {
                iv.settings[actions[i]->id] = actions[i]->domain.values[at[i]];
            }
            interventions.push_back(std::move(iv));
            std::size_t i = 0;
            for (; i < actions.size(); ++i) {
                if (++at[i] < actions[i]->domain.values.size()) break;
                at[i] = 0;
            }
            if (i == actions.size()) break;
        }
    }

    if (interventions.empty()) interventions.push_back({});
    Intervention first = interventions.front();
    std::vector<Intervention> rest(interventions.begin() + 1, interventions.end());
    return knowledge_check(session, result, first, rest).holds;
}

Verdict direct_intent_commission(const Scenario& scenario, const Event& result,
                                 const Intervention& action, const IntentConfig& config) {
    require_config(config);
    const AgentModel& agent = scenario.agent;
    auto compiled = Compiled::build(agent.subjective_model,
                                    agent.policy ? &*agent.policy : nullptr);
    QueryEngine engine(compiled, config.context_cap);
    Session session = make_session(agent, config, scenario.performed, compiled, engine);
    auto reference = resolve_reference_actions(agent.subjective_model, action, config);
    return direct_clauses(session, Definition::DirectCommission, kCommission, result, action,
                          reference);
}

Verdict direct_intent_perspective(const Scenario& scenario, const Event& result,
                                  const Intervention& action, const IntentConfig& config) {
    require_config(config);
    const AgentModel& agent = scenario.commission_agent();
    auto compiled = Compiled::build(agent.subjective_model,
                                    agent.policy ? &*agent.policy : nullptr);
    QueryEngine engine(compiled, config.context_cap);
    Session session = make_session(agent, config, scenario.performed, compiled, engine);
    auto reference = resolve_reference_actions(agent.subjective_model, action, config);
    return direct_clauses(session, Definition::DirectPerspective, kPerspective, result, action,
                          reference);
}

Verdict moral_responsibility(const Scenario& scenario, const Event& outcome,
                             const Intervention& action, const IntentConfig& config) {
    require_config(config);
    if (!scenario.realized) {
        throw PreconditionError("moral_responsibility requires a realized world");
    }
    const AgentModel& agent = scenario.agent;
    const Policy* policy = agent.policy ? &*agent.policy : nullptr;

    auto objective = Compiled::build(scenario.objective_model, policy);
    QueryEngine objective_engine(objective, config.context_cap);
    auto subjective = Compiled::build(agent.subjective_model, policy);
    QueryEngine subjective_engine(subjective, config.context_cap);

    auto reference = resolve_reference_actions(scenario.objective_model, action, config);

    Verdict v;
    v.definition = Definition::MoralResponsibility;
    v.result = outcome;
    v.action = action;
    v.trace.config = config;
    v.trace.notes.push_back("performed: " + format_intervention(scenario.performed));
    v.trace.notes.push_back(reference.empty() ? "reference: none"
                                              : "reference: " + join_interventions(reference));

    bool mr1 = !reference.empty();
    {
        ClauseResult c{"MR1", mr1, {}};
        c.evidence.notes.push_back(mr1 ? "alternative actions exist: " + join_interventions(reference)
                                       : "no alternative actions available");
        v.clauses.push_back(std::move(c));
    }

    // But-for causation in the world as it is, plus the outcome in fact
    // obtaining in the realized world.
    bool mr2 = false;
    {
        ClauseResult c{"MR2", false, {}};
        bool obtained = true;
        for (const auto& [id, value] : outcome.literals) {
            auto it = scenario.realized->values.find(id);
            if (it == scenario.realized->values.end() || it->second != value) {
                obtained = false;
                break;
            }
        }
        if (!mr1) {
            c.evidence.notes.push_back("no alternative actions to contrast with");
        } else {
            CompiledEvent ev = objective.lower_event(outcome);
            Intervention actual = composed(scenario.performed, action);
            std::vector<int> la = objective.lower_intervention(actual);
            std::vector<std::vector<int>> lowered_refs;
            for (const auto& alt : reference) {
                lowered_refs.push_back(
                    objective.lower_intervention(composed(scenario.performed, alt)));
            }
            auto hit = objective_engine.but_for(la, lowered_refs, ev);
            if (hit.caused) {
                Assignment witness_context = objective_engine.context_assignment(hit.context_pos);
                c.evidence.witnesses.push_back({"but-for witness", witness_context, action,
                                                reference[hit.reference_index]});
            }
            mr2 = hit.caused && obtained;
            c.holds = mr2;
            if (!hit.caused) {
                c.evidence.notes.push_back(
                    "not a but-for cause of the outcome in the objective model");
            } else if (!obtained) {
                c.evidence.notes.push_back("the outcome did not obtain in the realized world");
            } else {
                c.evidence.notes.push_back("but-for cause in the objective model and the outcome obtained");
            }
        }
        v.clauses.push_back(std::move(c));
    }

    // The agent picked an action that does not minimise the outcome
    // probability by its own lights.
    bool mr3 = false;
    {
        ClauseResult c{"MR3", false, {}};
        CompiledEvent ev = subjective.lower_event(outcome);
        std::vector<int> la =
            subjective.lower_intervention(composed(scenario.performed, action));
        double p_action = subjective_engine.probability(la, ev);
        c.evidence.probabilities.push_back({prob_label(outcome, action), p_action});
        std::vector<double> p_refs;
        for (const auto& alt : reference) {
            double p_alt = subjective_engine.probability(
                subjective.lower_intervention(composed(scenario.performed, alt)), ev);
            p_refs.push_back(p_alt);
            c.evidence.probabilities.push_back({prob_label(outcome, alt), p_alt});
        }
        std::size_t which = 0;
        mr3 = not_minimum(p_action, p_refs, config.tolerance, &which);
        c.holds = mr3;
        if (mr3) {
            c.evidence.notes.push_back("alternative " + format_intervention(reference[which]) +
                                       " gives a lower outcome probability: " +
                                       format_number(p_refs[which]) + " < " +
                                       format_number(p_action));
        } else {
            c.evidence.notes.push_back(
                "the action minimises the outcome probability among the alternatives");
        }
        v.clauses.push_back(std::move(c));
    }

    v.holds = mr1 && mr2 && mr3;
    return v;
}

Verdict means_end_intent(const Scenario& scenario, const Event& result,
                         const Intervention& action, const IntentConfig& config) {
    require_config(config);
    const AgentModel& agent = scenario.agent;
    auto compiled = Compiled::build(agent.subjective_model,
                                    agent.policy ? &*agent.policy : nullptr);
    QueryEngine engine(compiled, config.context_cap);
    Session session = make_session(agent, config, scenario.performed, compiled, engine);

    Intervention plan = composed(scenario.performed, scenario.effective_plan());
    auto plan_reference = resolve_reference_actions(agent.subjective_model, plan, config);
    auto action_reference = resolve_reference_actions(agent.subjective_model, action, config);

    Verdict v;
    v.definition = Definition::MeansEnd;
    v.result = result;
    v.action = action;
    v.trace.config = config;
    v.trace.notes.push_back("performed: " + format_intervention(scenario.performed));
    v.trace.notes.push_back("plan: " + format_intervention(plan));
    v.trace.notes.push_back(action_reference.empty()
                                ? "reference: none"
                                : "reference: " + join_interventions(action_reference));

    CompiledEvent ev = compiled.lower_event(result);
    std::vector<int> lowered_plan = session.lower(plan);

    // Joint witness: an end that is directly intended under the plan and for
    // which the queried result is a necessary step.
    std::optional<Event> witness_y;
    std::optional<Event> first_direct;
    for (const auto& y : intended_result_candidates(session, result)) {
        Verdict direct = direct_clauses(session, Definition::DirectCommission, kCommission, y,
                                        plan, plan_reference);
        if (!direct.holds) continue;
        if (!first_direct) first_direct = y;
        if (engine.necessary(lowered_plan, ev, compiled.lower_event(y))) {
            witness_y = y;
            break;
        }
    }
    const std::optional<Event>& chosen = witness_y ? witness_y : first_direct;
    v.trace.chosen_y = chosen;

    bool me1 = chosen.has_value();
    {
        ClauseResult c{"ME1", me1, {}};
        c.evidence.notes.push_back(me1 ? "intended end exists under the plan: " + format_event(*chosen)
                                       : "no intended end found under the plan");
        v.clauses.push_back(std::move(c));
    }

    bool me2 = false;
    {
        ClauseResult c{"ME2", false, {}};
        if (action_reference.empty()) {
            c.evidence.notes.push_back("no alternative actions to contrast with");
        } else {
            std::vector<std::vector<int>> lowered_refs;
            for (const auto& alt : action_reference) lowered_refs.push_back(session.lower(alt));
            auto hit = engine.but_for(session.lower(action), lowered_refs, ev);
            me2 = hit.caused;
            c.holds = me2;
            if (hit.caused) {
                Assignment witness_context = engine.context_assignment(hit.context_pos);
                c.evidence.witnesses.push_back({"but-for witness", witness_context, action,
                                                action_reference[hit.reference_index]});
                c.evidence.notes.push_back("the action is a but-for cause of the result (witness context " +
                                           format_assignment(witness_context) + ")");
            } else {
                c.evidence.notes.push_back("the action is not a but-for cause of the result");
            }
        }
        v.clauses.push_back(std::move(c));
    }

    bool me3 = action.subset_of(plan);
    {
        ClauseResult c{"ME3", me3, {}};
        c.evidence.notes.push_back(me3 ? "the action is contained in the plan " + format_intervention(plan)
                                       : "the action is not contained in the plan " +
                                             format_intervention(plan));
        v.clauses.push_back(std::move(c));
    }

    bool me4 = false;
    {
        ClauseResult c{"ME4", false, {}};
        if (!chosen) {
            c.evidence.notes.push_back("no intended end to support");
        } else {
            me4 = engine.necessary(lowered_plan, ev, compiled.lower_event(*chosen));
            c.holds = me4;
            c.evidence.notes.push_back(me4 ? "the result is necessary for " + format_event(*chosen) +
                                                 " under the plan"
                                           : "the result is not necessary for " +
                                                 format_event(*chosen) + " under the plan");
        }
        v.clauses.push_back(std::move(c));
    }

    v.holds = me1 && me2 && me3 && me4;
    return v;
}

Verdict oblique_intent(const Scenario& scenario, const Event& result, const Intervention& action,
                       const IntentConfig& config) {
    require_config(config);
    const AgentModel& agent = scenario.agent;
    auto compiled = Compiled::build(agent.subjective_model,
                                    agent.policy ? &*agent.policy : nullptr);
    QueryEngine engine(compiled, config.context_cap);
    Session session = make_session(agent, config, scenario.performed, compiled, engine);
    auto reference = resolve_reference_actions(agent.subjective_model, action, config);
    return oblique_clauses(session, result, action, reference);
}

Verdict ulterior_intent(const Scenario& scenario, const Event& result,
                        const IntentConfig& config) {
    require_config(config);
    const AgentModel& agent = scenario.agent;
    if (!agent.policy) {
        throw PreconditionError("ulterior_intent requires a policy");
    }
    const Policy& policy = *agent.policy;
    auto compiled = Compiled::build(agent.subjective_model, &policy);
    QueryEngine engine(compiled, config.context_cap);

    Verdict v;
    v.definition = Definition::Ulterior;
    v.result = result;
    v.trace.config = config;
    v.trace.notes.push_back("performed: " + format_intervention(scenario.performed));
    v.trace.notes.push_back("policy rules examined: " + std::to_string(policy.rules.size()));

    std::vector<int> lowered_performed = compiled.lower_intervention(scenario.performed);

    ClauseResult c1{"UL1", false, {}};
    std::optional<Event> witness_condition;
    Intervention witness_action;
    std::string witness_kind;

    for (const auto& rule : policy.rules) {
        std::string cond_text = format_event(rule.condition);
        double p_condition =
            engine.probability(lowered_performed, compiled.lower_event(rule.condition));
        c1.evidence.probabilities.push_back(
            {"P(" + cond_text + " | do" + format_intervention(scenario.performed) + ")",
             p_condition});
        if (!(p_condition > config.epsilon)) {
            c1.evidence.notes.push_back("condition " + cond_text + ": probability " +
                                        format_number(p_condition) +
                                        " does not exceed epsilon " +
                                        format_number(config.epsilon));
            continue;
        }

        // The policy must prescribe one determinate response to this
        // condition; conflicting arms disqualify it.
        bool unique = true;
        for (const auto& other : policy.rules) {
            if (&other != &rule && other.condition == rule.condition &&
                !(other.action == rule.action)) {
                unique = false;
                break;
            }
        }
        if (!unique) {
            c1.evidence.notes.push_back("condition " + cond_text +
                                        ": the policy prescribes conflicting actions");
            continue;
        }

        auto conditioned = engine.conditioned_on(
            lowered_performed, compiled.lower_event(rule.condition), config.tolerance);
        if (!conditioned) {
            c1.evidence.notes.push_back("condition " + cond_text +
                                        ": probability mass below tolerance");
            continue;
        }

        QueryEngine sub_engine(compiled, std::move(*conditioned));
        Session sub = make_session(agent, config, scenario.performed, compiled, sub_engine);
        auto reference =
            resolve_reference_actions(agent.subjective_model, rule.action, config);

        Verdict direct = direct_clauses(sub, Definition::DirectCommission, kCommission, result,
                                        rule.action, reference);
        if (direct.holds) {
            witness_condition = rule.condition;
            witness_action = rule.action;
            witness_kind = "direct intent (commission)";
        } else {
            Verdict oblique = oblique_clauses(sub, result, rule.action, reference);
            if (oblique.holds) {
                witness_condition = rule.condition;
                witness_action = rule.action;
                witness_kind = "oblique intent";
            }
        }
        if (witness_condition) {
            c1.holds = true;
            c1.evidence.notes.push_back("condition " + cond_text + " (P = " +
                                        format_number(p_condition) + ") carries " + witness_kind +
                                        " via " + format_intervention(rule.action));
            break;
        }
        c1.evidence.notes.push_back("condition " + cond_text +
                                    ": the prescribed action carries no direct or oblique intent");
    }

    if (c1.evidence.notes.empty()) {
        c1.evidence.notes.push_back("the policy has no rules");
    }
    if (!c1.holds) {
        // Keep the summary first: the per-condition detail follows it.
        c1.evidence.notes.insert(c1.evidence.notes.begin(),
                                 "no foreseeable condition carries intent for the result");
    } else {
        std::rotate(c1.evidence.notes.begin(), c1.evidence.notes.end() - 1,
                    c1.evidence.notes.end());
    }
    v.clauses.push_back(std::move(c1));

    ClauseResult c2{"UL2", agent.committed, {}};
    c2.evidence.notes.push_back(agent.committed ? "the agent is committed to the policy"
                                                : "the agent is not committed to the policy");
    v.clauses.push_back(std::move(c2));

    v.action = witness_action;
    v.trace.condition = witness_condition;
    v.holds = v.clause_holds("UL1") && agent.committed;
    return v;
}

Verdict evaluate_query(const Scenario& scenario, const Query& query) {
    const Intervention& action = query.action ? *query.action : scenario.performed;
    switch (query.definition) {
        case Definition::DirectCommission:
            return direct_intent_commission(scenario, query.result, action, scenario.config);
        case Definition::DirectPerspective:
            return direct_intent_perspective(scenario, query.result, action, scenario.config);
        case Definition::MeansEnd:
            return means_end_intent(scenario, query.result, action, scenario.config);
        case Definition::Oblique:
            return oblique_intent(scenario, query.result, action, scenario.config);
        case Definition::Ulterior:
            return ulterior_intent(scenario, query.result, scenario.config);
        case Definition::MoralResponsibility:
            return moral_responsibility(scenario, query.result, action, scenario.config);
    }
    throw PreconditionError("unknown definition in query");
}

}  // namespace intent
