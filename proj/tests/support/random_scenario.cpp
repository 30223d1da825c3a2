#include "support/random_scenario.hpp"

#include <algorithm>

namespace testsupport {

namespace {

using intent::ActionVariable;
using intent::Assignment;
using intent::CausalModel;
using intent::Definition;
using intent::Domain;
using intent::EndogenousVariable;
using intent::Event;
using intent::ExogenousVariable;
using intent::Intervention;
using intent::Policy;
using intent::PolicyRule;
using intent::Query;
using intent::Scenario;
using intent::TableRow;
using intent::VariableId;
using intent::World;

int pick_int(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

const Domain kBinary{{"yes", "no"}};

std::string binary_value(std::mt19937& rng) {
    return chance(rng, 0.5) ? "yes" : "no";
}

// Total table over the parents' actual domains (endogenous parents may have
// collapsed to a single output value), outputs drawn uniformly.
void fill_table(std::mt19937& rng, const CausalModel& model, EndogenousVariable& v) {
    std::vector<const Domain*> parent_domains;
    std::size_t rows = 1;
    for (const auto& p : v.parents) {
        const Domain* d = model.find_domain(p);
        parent_domains.push_back(d);
        rows *= d->values.size();
    }
    std::vector<std::size_t> odometer(v.parents.size(), 0);
    for (std::size_t row = 0; row < rows; ++row) {
        TableRow r;
        for (std::size_t p = 0; p < v.parents.size(); ++p) {
            r.inputs.push_back(parent_domains[p]->values[odometer[p]]);
        }
        r.output = binary_value(rng);
        v.rows.push_back(std::move(r));
        for (std::size_t p = 0; p < odometer.size(); ++p) {
            if (++odometer[p] < parent_domains[p]->values.size()) break;
            odometer[p] = 0;
        }
    }
    for (const auto& row : v.rows) {
        if (!v.domain.contains(row.output)) v.domain.values.push_back(row.output);
    }
}

}  // namespace

intent::CausalModel random_model(std::mt19937& rng, int max_vars) {
    auto pick = [&rng](int lo, int hi) { return pick_int(rng, lo, hi); };
    CausalModel model;
    int n_exo = chance(rng, 0.1) ? 0 : pick(1, 3);
    int n_act = pick(1, 2);
    int n_endo = pick(1, std::min(4, std::max(1, max_vars - n_exo - n_act)));

    for (int i = 0; i < n_exo; ++i) {
        ExogenousVariable x;
        x.id = "E" + std::to_string(i + 1);
        x.domain = kBinary;
        int eighths = pick(0, 8);  // exact in binary, so sums are exactly 1
        x.probabilities = {eighths / 8.0, (8 - eighths) / 8.0};
        model.exogenous.push_back(std::move(x));
    }
    for (int i = 0; i < n_act; ++i) {
        model.actions.push_back({"A" + std::to_string(i + 1), kBinary});
    }

    std::vector<VariableId> pool;
    for (const auto& x : model.exogenous) pool.push_back(x.id);
    for (const auto& a : model.actions) pool.push_back(a.id);

    for (int i = 0; i < n_endo; ++i) {
        EndogenousVariable v;
        v.id = "V" + std::to_string(i + 1);
        int n_parents = pick(1, std::min(3, static_cast<int>(pool.size())));
        std::vector<VariableId> shuffled = pool;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        v.parents.assign(shuffled.begin(), shuffled.begin() + n_parents);

        // The scenario layer pins endogenous domains to the table outputs in
        // first-appearance order; fill_table derives them that way.
        fill_table(rng, model, v);
        pool.push_back(v.id);
        model.endogenous.push_back(std::move(v));
    }
    return model;
}

intent::Scenario random_scenario(std::mt19937& rng) {
    auto pick = [&rng](int lo, int hi) { return pick_int(rng, lo, hi); };
    Scenario s;
    CausalModel model = random_model(rng);

    bool with_policy = chance(rng, 0.4) && !model.exogenous.empty();
    if (with_policy) {
        model.actions.push_back({"B@2", kBinary});
        Policy policy;
        const auto& trigger = model.exogenous[pick(0, static_cast<int>(model.exogenous.size()) - 1)];
        for (const auto& value : trigger.domain.values) {
            PolicyRule rule;
            rule.condition.literals[trigger.id] = value;
            rule.action.settings["B@2"] = binary_value(rng);
            policy.rules.push_back(std::move(rule));
        }
        s.agent.policy = std::move(policy);
        s.agent.committed = chance(rng, 0.7);

        // Give the bound action a downstream effect so conditional plans can
        // actually carry intent.
        EndogenousVariable w;
        w.id = "W@2";
        w.parents.push_back("B@2");
        if (chance(rng, 0.5) && !model.endogenous.empty()) {
            w.parents.push_back(
                model.endogenous[pick(0, static_cast<int>(model.endogenous.size()) - 1)].id);
        }
        fill_table(rng, model, w);
        model.endogenous.push_back(std::move(w));
    } else {
        s.agent.committed = chance(rng, 0.2);
    }

    s.objective_model = model;
    s.agent.subjective_model = model;

    for (const auto& x : model.exogenous) {
        if (chance(rng, 0.4)) s.agent.observables.insert(x.id);
    }
    for (const auto& v : model.endogenous) {
        if (chance(rng, 0.6)) s.agent.observables.insert(v.id);
    }

    int n_aims = pick(0, 2);
    for (int i = 0; i < n_aims && !model.endogenous.empty(); ++i) {
        const auto& v = model.endogenous[pick(0, static_cast<int>(model.endogenous.size()) - 1)];
        Event aim;
        aim.literals[v.id] = v.domain.values[pick(0, static_cast<int>(v.domain.values.size()) - 1)];
        s.agent.aims.push_back(std::move(aim));
    }

    for (const auto& a : model.actions) {
        if (a.id != "B@2") s.performed.settings[a.id] = binary_value(rng);
    }

    if (chance(rng, 0.3)) {
        Intervention plan = s.performed;
        if (with_policy && chance(rng, 0.5)) plan.settings["B@2"] = binary_value(rng);
        s.plan = std::move(plan);
    }

    if (chance(rng, 0.5)) {
        Assignment context;
        for (const auto& x : model.exogenous) {
            int index;
            do {
                index = pick(0, static_cast<int>(x.domain.values.size()) - 1);
            } while (x.probabilities[index] == 0.0);
            context[x.id] = x.domain.values[index];
        }
        World realized = s.agent.policy
                             ? intent::evaluate_with_policy(model, context, s.performed,
                                                            *s.agent.policy)
                             : intent::evaluate(model, context, s.performed);
        s.realized = std::move(realized);
    }

    const double taus[] = {0.5, 0.9, 0.99};
    s.config.tau = taus[pick(0, 2)];
    s.config.epsilon = chance(rng, 0.3) ? 0.05 : 0.0;
    s.config.exclude_avoided_results = chance(rng, 0.2);
    s.config.knowledge_mode = chance(rng, 0.5) ? intent::KnowledgeMode::DeclaredOrInferred
                                               : intent::KnowledgeMode::DeclaredOnly;
    if (chance(rng, 0.15)) {
        auto refs = intent::default_reference_actions(model, s.performed);
        std::shuffle(refs.begin(), refs.end(), rng);
        if (!refs.empty()) {
            refs.resize(pick(1, static_cast<int>(refs.size())));
            s.config.reference_actions = std::move(refs);
        }
    }

    int n_queries = pick(0, 2);
    for (int i = 0; i < n_queries; ++i) {
        std::vector<Definition> applicable = {Definition::DirectCommission,
                                              Definition::DirectPerspective, Definition::Oblique,
                                              Definition::MeansEnd};
        if (s.agent.policy) applicable.push_back(Definition::Ulterior);
        if (s.realized) applicable.push_back(Definition::MoralResponsibility);

        Query q;
        q.definition = applicable[pick(0, static_cast<int>(applicable.size()) - 1)];
        const auto& v = model.endogenous[pick(0, static_cast<int>(model.endogenous.size()) - 1)];
        q.result.literals[v.id] =
            v.domain.values[pick(0, static_cast<int>(v.domain.values.size()) - 1)];
        if (q.definition != Definition::Ulterior && chance(rng, 0.3)) {
            const auto& a = model.actions[pick(0, static_cast<int>(model.actions.size()) - 1)];
            Intervention with;
            with.settings[a.id] = binary_value(rng);
            q.action = std::move(with);
        }
        s.queries.push_back(std::move(q));
    }
    return s;
}

}  // namespace testsupport
