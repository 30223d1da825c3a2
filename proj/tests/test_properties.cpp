#include <doctest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "intent/corpus.hpp"
#include "intent/predicates.hpp"
#include "support/oracle.hpp"
#include "support/random_scenario.hpp"

using namespace intent;

namespace {

// Every intent predicate the scenario supports, in a fixed order, computed
// against the scenario's own config and performed actions.
std::vector<Verdict> intent_verdicts(const Scenario& s, const Event& r) {
    std::vector<Verdict> out;
    out.push_back(direct_intent_commission(s, r, s.performed, s.config));
    out.push_back(direct_intent_perspective(s, r, s.performed, s.config));
    out.push_back(means_end_intent(s, r, s.performed, s.config));
    out.push_back(oblique_intent(s, r, s.performed, s.config));
    if (s.agent.policy) out.push_back(ulterior_intent(s, r, s.config));
    return out;
}

Event random_result(const Scenario& s, std::mt19937& rng) {
    const auto& endo = s.agent.subjective_model.endogenous;
    const auto& v = endo[std::uniform_int_distribution<std::size_t>(0, endo.size() - 1)(rng)];
    Event r;
    std::size_t k =
        std::uniform_int_distribution<std::size_t>(0, v.domain.values.size() - 1)(rng);
    r.literals[v.id] = v.domain.values[k];
    return r;
}

// Reachability in the subjective graph with the policy's condition->action
// couplings added for bindings the intervention leaves in force. Written as a
// plain breadth-first search, independent of the library's traversal.
std::set<VariableId> influence_set(const Scenario& s, const Intervention& action) {
    std::multimap<VariableId, VariableId> edges;
    for (const auto& v : s.agent.subjective_model.endogenous) {
        for (const auto& p : v.parents) edges.insert({p, v.id});
    }
    if (s.agent.policy) {
        for (const auto& rule : s.agent.policy->rules) {
            for (const auto& [bound, bound_value] : rule.action.settings) {
                if (action.settings.count(bound)) continue;  // surgery severs the rule
                for (const auto& [cond, cond_value] : rule.condition.literals) {
                    edges.insert({cond, bound});
                }
            }
        }
    }
    std::set<VariableId> reached;
    std::vector<VariableId> frontier;
    for (const auto& [id, value] : action.settings) frontier.push_back(id);
    while (!frontier.empty()) {
        VariableId at = frontier.back();
        frontier.pop_back();
        auto [lo, hi] = edges.equal_range(at);
        for (auto it = lo; it != hi; ++it) {
            if (reached.insert(it->second).second) frontier.push_back(it->second);
        }
    }
    return reached;
}

const CorpusEntry& entry(const std::string& name) {
    for (const auto& e : corpus()) {
        if (e.name == name) return e;
    }
    REQUIRE_MESSAGE(false, ("missing corpus entry " + name));
    static CorpusEntry none;
    return none;
}

Scenario parse_entry(const std::string& name) {
    ParseResult r = parse_scenario(entry(name).document);
    REQUIRE(std::holds_alternative<Scenario>(r));
    return std::get<Scenario>(std::move(r));
}

}  // namespace

TEST_CASE("invariants hold across 200 random scenarios") {
    auto started = std::chrono::steady_clock::now();
    std::mt19937 rng(7);
    int policy_count = 0;
    int realized_count = 0;
    int unlinked_checked = 0;

    for (int i = 0; i < 200; ++i) {
        CAPTURE(i);
        Scenario s = testsupport::random_scenario(rng);
        REQUIRE(validate_scenario(s).empty());
        Event r = random_result(s, rng);

        std::vector<Verdict> base = intent_verdicts(s, r);
        for (const auto& v : base) CHECK(reconstruct_holds(v) == v.holds);
        if (s.realized) {
            ++realized_count;
            Verdict mr = moral_responsibility(s, r, s.performed, s.config);
            CHECK(reconstruct_holds(mr) == mr.holds);
        }
        for (const auto& q : s.queries) {
            Verdict v = evaluate_query(s, q);
            CHECK(reconstruct_holds(v) == v.holds);
        }

        // Free agency: without alternatives nothing is intended and nobody
        // is responsible.
        {
            Scenario closed = s;
            closed.config.reference_actions = std::vector<Intervention>{};
            for (const auto& v : intent_verdicts(closed, r)) CHECK_FALSE(v.holds);
            Verdict d = direct_intent_commission(closed, r, closed.performed, closed.config);
            CHECK_FALSE(d.clause_holds("DIc1"));
            if (closed.realized) {
                CHECK_FALSE(
                    moral_responsibility(closed, r, closed.performed, closed.config).holds);
            }
        }

        // Causal link: a result the actions cannot reach is never directly,
        // means-end or obliquely intended.
        {
            std::set<VariableId> reached = influence_set(s, s.performed);
            for (const auto& v : s.agent.subjective_model.endogenous) {
                if (reached.count(v.id)) continue;
                Event out;
                out.literals[v.id] = v.domain.values[0];
                CHECK_FALSE(direct_intent_commission(s, out, s.performed, s.config).holds);
                CHECK_FALSE(means_end_intent(s, out, s.performed, s.config).holds);
                CHECK_FALSE(oblique_intent(s, out, s.performed, s.config).holds);
                ++unlinked_checked;
                break;  // one unreachable variable per scenario keeps this fast
            }
        }

        // Subjectivity: the objective world never enters an intent verdict.
        {
            Scenario other = s;
            bool mutated = false;
            if (!other.objective_model.exogenous.empty()) {
                auto& x = other.objective_model.exogenous.front();
                if (x.probabilities[0] == x.probabilities[1]) {
                    x.probabilities = {1.0, 0.0};
                } else {
                    std::swap(x.probabilities[0], x.probabilities[1]);
                }
                mutated = true;
            }
            for (auto& v : other.objective_model.endogenous) {
                if (v.domain.values.size() >= 2) {
                    auto& out = v.rows.front().output;
                    out = out == v.domain.values[0] ? v.domain.values[1] : v.domain.values[0];
                    mutated = true;
                    break;
                }
            }
            if (mutated) CHECK(intent_verdicts(other, r) == base);
        }

        // Outcome independence: what actually happened never enters.
        if (s.realized) {
            Scenario forgotten = s;
            forgotten.realized.reset();
            CHECK(intent_verdicts(forgotten, r) == base);

            Scenario rewritten = s;
            for (auto& [id, value] : rewritten.realized->values) {
                const Domain* d = rewritten.objective_model.find_domain(id);
                if (d && d->values.size() >= 2) {
                    value = value == d->values[0] ? d->values[1] : d->values[0];
                    break;
                }
            }
            CHECK(intent_verdicts(rewritten, r) == base);
        }

        // Commitment: an uncommitted policy carries no ulterior intent.
        if (s.agent.policy) {
            ++policy_count;
            Scenario wavering = s;
            wavering.agent.committed = false;
            Verdict u = ulterior_intent(wavering, r, wavering.config);
            CHECK_FALSE(u.holds);
            CHECK_FALSE(u.clause_holds("UL2"));
        }

        // Making the result an explicit aim never un-holds a direct verdict.
        if (base[0].holds) {
            Scenario aimed = s;
            aimed.agent.aims.push_back(r);
            CHECK(direct_intent_commission(aimed, r, aimed.performed, aimed.config).holds);
        }

        // Oblique intent only gets easier as the foreseeability bar drops.
        {
            IntentConfig lo = s.config;
            IntentConfig mid = s.config;
            IntentConfig hi = s.config;
            lo.tau = 0.5;
            mid.tau = 0.9;
            hi.tau = 0.99;
            bool holds_hi = oblique_intent(s, r, s.performed, hi).holds;
            bool holds_mid = oblique_intent(s, r, s.performed, mid).holds;
            bool holds_lo = oblique_intent(s, r, s.performed, lo).holds;
            CHECK((!holds_hi || holds_mid));
            CHECK((!holds_mid || holds_lo));
        }
    }

    // The generator must actually exercise the conditional branches.
    CHECK(policy_count > 20);
    CHECK(realized_count > 40);
    CHECK(unlinked_checked > 20);

    auto elapsed = std::chrono::steady_clock::now() - started;
    CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 60);
}

TEST_CASE("a directly intended payout always carries means-end intent for the explosion") {
    Scenario bomb = parse_entry("unreliable_bomb");
    Event payout;
    payout.literals["Payout"] = "yes";
    Event explode;
    explode.literals["Explode"] = "yes";

    std::mt19937 rng(11);
    const double taus[] = {0.3, 0.5, 0.9, 0.99, 1.0};
    const double epsilons[] = {0.0, 0.05, 0.2};
    int held = 0;

    for (int i = 0; i < 50; ++i) {
        CAPTURE(i);
        Scenario s = bomb;
        if (i > 0) {  // the first round keeps the canonical configuration
            s.config.tau = taus[std::uniform_int_distribution<int>(0, 4)(rng)];
            s.config.epsilon = epsilons[std::uniform_int_distribution<int>(0, 2)(rng)];
            if (s.config.epsilon >= s.config.tau) s.config.epsilon = 0.0;
            s.config.exclude_avoided_results =
                std::uniform_int_distribution<int>(0, 1)(rng) == 1;
            s.config.knowledge_mode = std::uniform_int_distribution<int>(0, 1)(rng) == 1
                                          ? KnowledgeMode::DeclaredOrInferred
                                          : KnowledgeMode::DeclaredOnly;
            if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
                Event extra;
                extra.literals["Death"] = std::uniform_int_distribution<int>(0, 1)(rng) == 1
                                              ? "yes"
                                              : "no";
                s.agent.aims.push_back(extra);
            }
            if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) s.plan = s.performed;
        }

        Verdict direct = direct_intent_commission(s, payout, s.performed, s.config);
        Verdict means = means_end_intent(s, explode, s.performed, s.config);
        if (direct.holds) {
            ++held;
            CHECK(means.holds);
        }
    }
    CHECK(held >= 1);  // the canonical round must land in the antecedent
}

TEST_CASE("engine probabilities match exhaustive tabulation on 100 random models") {
    std::mt19937 rng(4242);
    auto flip = [&rng] { return std::uniform_int_distribution<int>(0, 1)(rng); };

    for (int i = 0; i < 100; ++i) {
        CAPTURE(i);
        CausalModel m = testsupport::random_model(rng);
        REQUIRE(validate_model(m).empty());

        Intervention act;
        for (const auto& a : m.actions) act.settings[a.id] = a.domain.values[flip()];

        const auto& endo = m.endogenous;
        auto pick_var = [&]() -> const EndogenousVariable& {
            return endo[std::uniform_int_distribution<std::size_t>(0, endo.size() - 1)(rng)];
        };
        const auto& ev_var = pick_var();
        Event ev;
        ev.literals[ev_var.id] =
            ev_var.domain.values[std::uniform_int_distribution<std::size_t>(
                0, ev_var.domain.values.size() - 1)(rng)];

        double p = prob(m, act, ev);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(std::abs(p - testsupport::oracle_prob(m, act, ev)) < 1e-9);

        // The law of total probability over one variable's domain.
        double total = 0.0;
        for (const auto& value : ev_var.domain.values) {
            Event point;
            point.literals[ev_var.id] = value;
            total += prob(m, act, point);
        }
        CHECK(std::abs(total - 1.0) < 1e-9);

        const auto& given_var = pick_var();
        Event given;
        given.literals[given_var.id] =
            given_var.domain.values[std::uniform_int_distribution<std::size_t>(
                0, given_var.domain.values.size() - 1)(rng)];

        auto c = cond_prob(m, act, ev, given);
        auto oracle_c = testsupport::oracle_cond_prob(m, act, ev, given);
        REQUIRE(c.has_value() == oracle_c.has_value());
        if (c) CHECK(std::abs(*c - *oracle_c) < 1e-9);

        CHECK(necessary_for(m, act, ev, given) ==
              testsupport::oracle_necessary(m, act, ev, given));
        CHECK(necessary_for(m, act, given, ev) ==
              testsupport::oracle_necessary(m, act, given, ev));

        // Surgery commutes with evaluation: freezing the actions into the
        // model changes nothing about the worlds.
        CausalModel cut = intervened_model(m, act);
        for (const auto& ctx : enumerate_contexts(m).entries) {
            CHECK(evaluate(m, ctx.context, act) == evaluate(cut, ctx.context, Intervention{}));
        }
    }
}
