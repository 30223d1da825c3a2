#include <benchmark/benchmark.h>

#include <string>
#include <variant>

#include "intent/corpus.hpp"
#include "intent/predicates.hpp"

using namespace intent;

namespace {

// Chain of XOR gates fed by n coins: exact inference enumerates all 2^n
// contexts, so time should double per added coin.
CausalModel coin_chain(int coins) {
    CausalModel m;
    for (int i = 0; i < coins; ++i) {
        ExogenousVariable x;
        x.id = "X" + std::to_string(i);
        x.domain.values = {"0", "1"};
        x.probabilities = {0.5, 0.5};
        m.exogenous.push_back(std::move(x));
    }
    ActionVariable a;
    a.id = "A";
    a.domain.values = {"0", "1"};
    m.actions.push_back(std::move(a));
    std::string previous = "A";
    for (int i = 0; i < coins; ++i) {
        EndogenousVariable y;
        y.id = "Y" + std::to_string(i);
        y.parents = {previous, "X" + std::to_string(i)};
        y.domain.values = {"0", "1"};
        for (int lhs = 0; lhs < 2; ++lhs) {
            for (int rhs = 0; rhs < 2; ++rhs) {
                TableRow row;
                row.inputs = {y.domain.values[lhs], y.domain.values[rhs]};
                row.output = y.domain.values[lhs == rhs ? 0 : 1];
                y.rows.push_back(std::move(row));
            }
        }
        previous = y.id;
        m.endogenous.push_back(std::move(y));
    }
    return m;
}

const Scenario& bomb_scenario() {
    static const Scenario s = [] {
        for (const auto& e : corpus()) {
            if (e.name == "unreliable_bomb") {
                return std::get<Scenario>(parse_scenario(e.document));
            }
        }
        throw std::runtime_error("unreliable_bomb missing from corpus");
    }();
    return s;
}

void BM_exact_inference(benchmark::State& state) {
    CausalModel m = coin_chain(static_cast<int>(state.range(0)));
    Intervention act;
    act.settings["A"] = "1";
    Event tail;
    tail.literals[m.endogenous.back().id] = "1";
    for (auto _ : state) {
        benchmark::DoNotOptimize(prob(m, act, tail));
    }
    state.SetComplexityN(1 << state.range(0));
}

void BM_oblique_verdict(benchmark::State& state) {
    const Scenario& s = bomb_scenario();
    Event death;
    death.literals["Death"] = "yes";
    for (auto _ : state) {
        Verdict v = oblique_intent(s, death, s.performed, s.config);
        benchmark::DoNotOptimize(v.holds);
    }
}

void BM_parse_scenario(benchmark::State& state) {
    std::string doc;
    for (const auto& e : corpus()) {
        if (e.name == "unreliable_bomb") doc = e.document;
    }
    for (auto _ : state) {
        ParseResult r = parse_scenario(doc);
        benchmark::DoNotOptimize(std::get_if<Scenario>(&r));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(doc.size()));
}

void BM_verdict_json(benchmark::State& state) {
    const Scenario& s = bomb_scenario();
    Event death;
    death.literals["Death"] = "yes";
    Verdict v = oblique_intent(s, death, s.performed, s.config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(verdict_to_json(v).size());
    }
}

BENCHMARK(BM_exact_inference)->DenseRange(4, 16, 4)->Complexity(benchmark::oN);
BENCHMARK(BM_oblique_verdict);
BENCHMARK(BM_parse_scenario);
BENCHMARK(BM_verdict_json);

}  // namespace

BENCHMARK_MAIN();
