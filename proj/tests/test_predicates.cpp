#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "intent/corpus.hpp"
#include "intent/predicates.hpp"
#include "intent/scenario.hpp"

using namespace intent;
using nlohmann::json;

namespace {

Scenario parse_ok(const std::string& text) {
    ParseResult r = parse_scenario(text);
    REQUIRE_MESSAGE(std::holds_alternative<Scenario>(r),
                    std::get<ParseError>(r).render());
    return std::get<Scenario>(std::move(r));
}

const CorpusEntry& entry(const std::string& name) {
    for (const auto& e : corpus()) {
        if (e.name == name) return e;
    }
    REQUIRE_MESSAGE(false, ("no corpus entry named " + name));
    static CorpusEntry unreachable;
    return unreachable;
}

Event event_of(const json& object) {
    Event e;
    for (const auto& [var, value] : object.items()) e.literals[var] = value.get<std::string>();
    return e;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("cannot open " + path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("every corpus scenario reproduces its golden verdicts") {
    REQUIRE(corpus().size() >= 7);
    for (const auto& e : corpus()) {
        CAPTURE(e.name);
        Scenario s = parse_ok(e.document);

        CHECK(check_capacity(s).all_satisfied() == !e.capacity_flagged);

        json expected = json::parse(e.expected_json);
        const json& verdicts = expected.at("verdicts");
        REQUIRE(verdicts.size() == s.queries.size());

        for (std::size_t i = 0; i < s.queries.size(); ++i) {
            const json& want = verdicts[i];
            CAPTURE(i);
            Verdict got = evaluate_query(s, s.queries[i]);
            CHECK(std::string(to_string(got.definition)) == want.at("definition"));
            CHECK(got.result == event_of(want.at("result")));
            CHECK(got.holds == want.at("holds").get<bool>());
            CHECK(got.clauses.size() == want.at("clauses").size());
            for (const auto& [id, holds] : want.at("clauses").items()) {
                CAPTURE(id);
                REQUIRE(got.clause(id) != nullptr);
                CHECK(got.clause(id)->holds == holds.get<bool>());
            }
            if (want.contains("chosen_y")) {
                REQUIRE(got.trace.chosen_y.has_value());
                CHECK(*got.trace.chosen_y == event_of(want.at("chosen_y")));
            }
            if (want.contains("condition")) {
                REQUIRE(got.trace.condition.has_value());
                CHECK(*got.trace.condition == event_of(want.at("condition")));
            }
            if (want.contains("action")) {
                CHECK(got.action.settings == event_of(want.at("action")).literals);
            }
            CHECK(reconstruct_holds(got) == got.holds);
        }
    }
}

TEST_CASE("oblique holds through the conditional clause with exact probabilities") {
    Scenario s = parse_ok(entry("unreliable_bomb").document);
    Event death;
    death.literals["Death"] = "yes";
    Verdict v = oblique_intent(s, death, s.performed, s.config);

    CHECK(v.holds);
    const ClauseResult* two_a = v.clause("OB2a");
    REQUIRE(two_a != nullptr);
    CHECK_FALSE(two_a->holds);
    REQUIRE(two_a->evidence.probabilities.size() == 1);
    CHECK(two_a->evidence.probabilities[0].value == doctest::Approx(0.3).epsilon(1e-9));

    const ClauseResult* two_b = v.clause("OB2b");
    REQUIRE(two_b != nullptr);
    CHECK(two_b->holds);
    REQUIRE(two_b->evidence.probabilities.size() == 1);
    CHECK(two_b->evidence.probabilities[0].value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the frozen explanation text matches the golden file") {
    Scenario s = parse_ok(entry("unreliable_bomb").document);
    Event death;
    death.literals["Death"] = "yes";
    Verdict v = oblique_intent(s, death, s.performed, s.config);
    CHECK(explain(v) == read_file(std::string(INTENT_CORPUS_DIR) +
                                  "/unreliable_bomb.oblique_death.explain.txt"));
}

TEST_CASE("intent verdicts are byte-identical across the bomb variants") {
    Scenario reference = parse_ok(entry("unreliable_bomb").document);
    for (const auto& name : {"dud_bomb", "fake_bomb"}) {
        CAPTURE(name);
        Scenario variant = parse_ok(entry(name).document);
        for (std::size_t i = 0; i < 3; ++i) {  // the three intent queries
            CAPTURE(i);
            Verdict a = evaluate_query(reference, reference.queries[i]);
            Verdict b = evaluate_query(variant, variant.queries[i]);
            CHECK(verdict_to_json(a) == verdict_to_json(b));
            CHECK(explain(a) == explain(b));
        }
    }
}

TEST_CASE("knowledge can be inferred from observables that pin the result down") {
    // Only the explosion is observable; the payout copies it deterministically.
    std::string doc = entry("unreliable_bomb").document;
    auto at = doc.find("observes {Death, Explode, Payout}");
    REQUIRE(at != std::string::npos);
    doc.replace(at, std::string("observes {Death, Explode, Payout}").size(), "observes {Explode}");
    Scenario s = parse_ok(doc);

    Event payout;
    payout.literals["Payout"] = "yes";

    Verdict inferred = direct_intent_commission(s, payout, s.performed, s.config);
    CHECK(inferred.clause_holds("DIc2"));
    CHECK(inferred.holds);

    IntentConfig declared_only = s.config;
    declared_only.knowledge_mode = KnowledgeMode::DeclaredOnly;
    Verdict declared = direct_intent_commission(s, payout, s.performed, declared_only);
    CHECK_FALSE(declared.clause_holds("DIc2"));
    CHECK_FALSE(declared.holds);
}

TEST_CASE("knowledge inference fails when observables leave the result open") {
    // In the alternate-payout model the payout no longer determines death.
    Scenario s = parse_ok(entry("bomb_alternate_payout").document);
    Event death;
    death.literals["Death"] = "yes";
    Verdict v = direct_intent_commission(s, death, s.performed, s.config);
    CHECK_FALSE(v.clause_holds("DIc2"));
}

TEST_CASE("ulterior intent needs a policy and responsibility needs a realized world") {
    Scenario no_policy = parse_ok(entry("dentist").document);
    Event pain;
    pain.literals["Pain"] = "yes";
    CHECK_THROWS_AS(ulterior_intent(no_policy, pain, no_policy.config), PreconditionError);

    Scenario no_realized = parse_ok(entry("hunters").document);
    Event death;
    death.literals["Death@2"] = "yes";
    CHECK_THROWS_AS(
        moral_responsibility(no_realized, death, no_realized.performed, no_realized.config),
        PreconditionError);
}

TEST_CASE("a zero-probability trigger cannot carry ulterior intent") {
    std::string doc = entry("hunters").document;
    std::string original = "exo Bush {human: 0.05, deer: 0.8, nothing: 0.15}";
    std::string zeroed = "exo Bush {human: 0, deer: 0.85, nothing: 0.15}";
    for (auto at = doc.find(original); at != std::string::npos; at = doc.find(original)) {
        doc.replace(at, original.size(), zeroed);
    }
    Scenario s = parse_ok(doc);
    Event death;
    death.literals["Death@2"] = "yes";
    Verdict v = ulterior_intent(s, death, s.config);
    CHECK_FALSE(v.holds);
    CHECK_FALSE(v.clause_holds("UL1"));
    CHECK(v.clause_holds("UL2"));
}

TEST_CASE("conflicting policy arms disqualify their condition") {
    std::string doc = entry("hunters").document;
    std::string original = "    (Emerge@2=deer) -> (Shoot@2: yes)";
    std::string conflicted = "    (Emerge@2=human) -> (Shoot@2: no)\n"
                             "    (Emerge@2=deer) -> (Shoot@2: yes)";
    auto at = doc.find(original);
    REQUIRE(at != std::string::npos);
    doc.replace(at, original.size(), conflicted);
    Scenario s = parse_ok(doc);

    Event death;
    death.literals["Death@2"] = "yes";
    Verdict v = ulterior_intent(s, death, s.config);
    CHECK_FALSE(v.clause_holds("UL1"));
    bool noted = false;
    for (const auto& note : v.clause("UL1")->evidence.notes) {
        if (note.find("prescribes conflicting actions") != std::string::npos) noted = true;
    }
    CHECK(noted);
}

TEST_CASE("direct intent from the commission perspective mirrors commission clauses") {
    Scenario s = parse_ok(entry("unreliable_bomb").document);
    Event payout;
    payout.literals["Payout"] = "yes";
    Verdict v = direct_intent_perspective(s, payout, s.performed, s.config);
    CHECK(v.holds);
    for (const auto& id : {"DIp1", "DIp2", "DIp3", "DIp4a", "DIp4b"}) {
        CAPTURE(id);
        CHECK(v.clause(id) != nullptr);
    }
}

TEST_CASE("capacity report names what is missing") {
    CapacityReport flagged = check_capacity(parse_ok(entry("cowardly_jackal_cornered").document));
    CHECK_FALSE(flagged.all_satisfied());
    CHECK(flagged.satisfied_count() == 9);
    bool found = false;
    for (const auto& r : flagged.requirements) {
        if (!r.satisfied) {
            CHECK(r.name == "chosen actions");
            found = true;
        }
    }
    CHECK(found);

    CHECK(check_capacity(parse_ok(entry("dentist").document)).all_satisfied());
}

TEST_CASE("emptying the reference actions forces every clause chain to fail") {
    Scenario s = parse_ok(entry("unreliable_bomb").document);
    s.config.reference_actions = std::vector<Intervention>{};

    Event payout;
    payout.literals["Payout"] = "yes";
    Event death;
    death.literals["Death"] = "yes";
    Event explode;
    explode.literals["Explode"] = "yes";

    CHECK_FALSE(direct_intent_commission(s, payout, s.performed, s.config).holds);
    CHECK_FALSE(direct_intent_perspective(s, payout, s.performed, s.config).holds);
    CHECK_FALSE(oblique_intent(s, death, s.performed, s.config).holds);
    CHECK_FALSE(means_end_intent(s, explode, s.performed, s.config).holds);
    CHECK_FALSE(moral_responsibility(s, death, s.performed, s.config).holds);
}
