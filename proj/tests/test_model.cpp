#include <doctest.h>

#include <cstdlib>

#include "intent/model.hpp"

using namespace intent;

namespace {

// Shared toy model: one coin, one switch, one light that is on iff the
// switch is up and the coin lands heads.
CausalModel light_model() {
    CausalModel m;
    m.exogenous.push_back({"Coin", {{"heads", "tails"}}, {0.25, 0.75}});
    m.actions.push_back({"Switch", {{"up", "down"}}});
    EndogenousVariable light;
    light.id = "Light";
    light.domain = {{"on", "off"}};
    light.parents = {"Switch", "Coin"};
    light.rows = {{{"up", "heads"}, "on"},
                  {{"up", "tails"}, "off"},
                  {{"down", "heads"}, "off"},
                  {{"down", "tails"}, "off"}};
    m.endogenous.push_back(std::move(light));
    return m;
}

bool has_code(const std::vector<Violation>& violations, std::string_view code) {
    for (const auto& v : violations) {
        if (v.code == code) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("variable ids and time steps") {
    CHECK(valid_variable_id("Plant"));
    CHECK(valid_variable_id("TakePosition@1"));
    CHECK(valid_variable_id("_x9"));
    CHECK_FALSE(valid_variable_id(""));
    CHECK_FALSE(valid_variable_id("9lives"));
    CHECK_FALSE(valid_variable_id("a-b"));
    CHECK_FALSE(valid_variable_id("a b"));

    CHECK(time_step_of("Plant") == 1);
    CHECK(time_step_of("Shoot@2") == 2);
    CHECK(time_step_of("X@12") == 12);
}

TEST_CASE("format_number is the shortest round-trip form") {
    CHECK(format_number(0.3) == "0.3");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1e-9) == "1e-09");
    CHECK(format_number(0.99) == "0.99");

    // Shortest form still parses back to the identical double. std::strtod
    // rather than std::stod: stod throws out_of_range on subnormals.
    const double awkward[] = {0.1 + 0.2, 1.0 / 3.0, 5e-324, 0.7, 1e17};
    for (double v : awkward) {
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("valid model passes validation") {
    CHECK(validate_model(light_model()).empty());
    CHECK(is_valid(light_model()));
}

TEST_CASE("unnormalized distribution is rejected") {
    CausalModel m = light_model();
    m.exogenous[0].probabilities = {0.25, 0.25};
    CHECK(has_code(validate_model(m), "unnormalized-distribution"));
}

TEST_CASE("negative probability is rejected") {
    CausalModel m = light_model();
    m.exogenous[0].probabilities = {-0.25, 1.25};
    CHECK(!validate_model(m).empty());
}

TEST_CASE("unknown parent is rejected") {
    CausalModel m = light_model();
    m.endogenous[0].parents[1] = "Dice";
    CHECK(has_code(validate_model(m), "unknown-parent"));
}

TEST_CASE("incomplete table is rejected") {
    CausalModel m = light_model();
    m.endogenous[0].rows.pop_back();
    CHECK(!validate_model(m).empty());
}

TEST_CASE("output outside the domain is rejected") {
    CausalModel m = light_model();
    m.endogenous[0].rows[0].output = "dim";
    CHECK(!validate_model(m).empty());
}

TEST_CASE("cycles are rejected") {
    CausalModel m = light_model();
    EndogenousVariable echo;
    echo.id = "Echo";
    echo.domain = {{"on", "off"}};
    echo.parents = {"Light"};
    echo.rows = {{{"on"}, "on"}, {{"off"}, "off"}};
    m.endogenous.push_back(echo);
    m.endogenous[0].parents[1] = "Echo";  // Light <- Echo <- Light
    m.endogenous[0].rows = {{{"up", "on"}, "on"},
                            {{"up", "off"}, "off"},
                            {{"down", "on"}, "off"},
                            {{"down", "off"}, "off"}};
    CHECK(has_code(validate_model(m), "cycle"));
}

TEST_CASE("duplicate ids are rejected") {
    CausalModel m = light_model();
    m.actions.push_back({"Coin", {{"up", "down"}}});
    CHECK(!validate_model(m).empty());
}

TEST_CASE("evaluation fills every variable deterministically") {
    CausalModel m = light_model();
    World w = evaluate(m, {{"Coin", "heads"}}, Intervention{{{"Switch", "up"}}});
    CHECK(w.values.at("Light") == "on");
    CHECK(w.values.at("Coin") == "heads");
    CHECK(w.values.at("Switch") == "up");

    w = evaluate(m, {{"Coin", "tails"}}, Intervention{{{"Switch", "up"}}});
    CHECK(w.values.at("Light") == "off");
}

TEST_CASE("evaluation requires the actions to be covered") {
    CausalModel m = light_model();
    CHECK_THROWS_AS(evaluate(m, {{"Coin", "heads"}}, Intervention{}), ModelError);
}

TEST_CASE("surgery freezes the intervened actions") {
    CausalModel m = light_model();
    CausalModel cut = intervened_model(m, Intervention{{{"Switch", "up"}}});
    CHECK_FALSE(cut.is_action("Switch"));
    CHECK(cut.has_variable("Switch"));
    // The original is untouched.
    CHECK(m.is_action("Switch"));
    World w = evaluate(cut, {{"Coin", "heads"}}, Intervention{});
    CHECK(w.values.at("Switch") == "up");
    CHECK(w.values.at("Light") == "on");
}

TEST_CASE("composed overlays the second intervention") {
    Intervention base{{{"A", "x"}, {"B", "y"}}};
    Intervention over{{{"B", "z"}, {"C", "w"}}};
    Intervention both = composed(base, over);
    CHECK(both.settings == std::map<VariableId, ValueLabel>{{"A", "x"}, {"B", "z"}, {"C", "w"}});
    CHECK(base.subset_of(composed(base, Intervention{})));
    CHECK(over.subset_of(both));
    CHECK_FALSE(base.subset_of(both));
}

TEST_CASE("descendants exclude the roots") {
    CausalModel m = light_model();
    auto down = descendants_of(m, {"Switch"});
    CHECK(down == std::set<VariableId>{"Light"});
    CHECK(descendants_of(m, {"Light"}).empty());
}

TEST_CASE("rendering of interventions, assignments and events") {
    CHECK(format_intervention(Intervention{{{"Plant", "yes"}}}) == "(Plant: yes)");
    CHECK(format_intervention(Intervention{{{"B", "y"}, {"A", "x"}}}) == "(A: x, B: y)");
    CHECK(format_assignment({{"Fuse", "works"}}) == "{Fuse: works}");
}
