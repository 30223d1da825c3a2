#pragma once

// Finite structural causal models with discrete domains: exogenous variables
// carry distributions, endogenous variables carry total deterministic tables,
// action variables are parentless free choices set by interventions.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intent {

using VariableId = std::string;
using ValueLabel = std::string;

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structural misuse: invalid model handed to an op, unknown variable, value
// outside a domain, unbound action variable during evaluation.
struct ModelError : Error {
    using Error::Error;
};

// An op was called with arguments that violate its stated preconditions.
struct PreconditionError : Error {
    using Error::Error;
};

// The exogenous product space is larger than the configured enumeration cap.
struct CapExceededError : Error {
    using Error::Error;
};

// Probabilities within this distance of each other compare equal when the
// model itself is being checked (distribution normalization).
inline constexpr double kProbabilityTolerance = 1e-9;

// Identifier grammar. A single optional '@<digits>' suffix encodes the time
// step of a variable in multi-step scenarios.
bool valid_variable_id(std::string_view id);

// Time step encoded in the id suffix; unsuffixed ids live at step 1.
int time_step_of(std::string_view id);

// Shortest decimal form that parses back to exactly the same double.
std::string format_number(double v);

struct Domain {
    std::vector<ValueLabel> values;

    int index_of(std::string_view label) const;
    bool contains(std::string_view label) const { return index_of(label) >= 0; }

    bool operator==(const Domain&) const = default;
};

struct ExogenousVariable {
    VariableId id;
    Domain domain;
    // Aligned with domain.values; probabilities[i] belongs to values[i].
    std::vector<double> probabilities;

    bool operator==(const ExogenousVariable&) const = default;
};

struct TableRow {
    std::vector<ValueLabel> inputs;  // one label per parent, in parent order
    ValueLabel output;

    bool operator==(const TableRow&) const = default;
};

struct EndogenousVariable {
    VariableId id;
    Domain domain;
    std::vector<VariableId> parents;
    std::vector<TableRow> rows;  // total over the parent domain product

    bool operator==(const EndogenousVariable&) const = default;
};

struct ActionVariable {
    VariableId id;
    Domain domain;

    bool operator==(const ActionVariable&) const = default;
};

// Total or partial assignment of values to variables, keyed by id.
using Assignment = std::map<VariableId, ValueLabel>;

struct World {
    Assignment values;

    bool operator==(const World&) const = default;
};

// do()-style setting of action variables.
struct Intervention {
    std::map<VariableId, ValueLabel> settings;

    bool empty() const { return settings.empty(); }
    bool subset_of(const Intervention& other) const;

    bool operator==(const Intervention&) const = default;
};

// Overlay: entries of `over` replace or extend entries of `base`.
Intervention composed(const Intervention& base, const Intervention& over);

struct CausalModel {
    std::vector<ExogenousVariable> exogenous;
    std::vector<EndogenousVariable> endogenous;
    std::vector<ActionVariable> actions;

    const Domain* find_domain(const VariableId& id) const;
    bool has_variable(const VariableId& id) const { return find_domain(id) != nullptr; }
    bool is_action(const VariableId& id) const;
    std::size_t variable_count() const {
        return exogenous.size() + endogenous.size() + actions.size();
    }

    bool operator==(const CausalModel&) const = default;
};

struct Violation {
    std::string code;      // stable machine key, e.g. "unnormalized-distribution"
    VariableId variable;   // offending variable when one exists
    std::string message;

    bool operator==(const Violation&) const = default;
};

// Every structural defect found, in deterministic order; empty means valid.
std::vector<Violation> validate_model(const CausalModel& model);

bool is_valid(const CausalModel& model);

// Deterministic forward evaluation of a valid model: context fixes every
// exogenous variable, the intervention fixes every action variable, tables
// fill in the rest in dependency order. Pure; returns a total World.
World evaluate(const CausalModel& model, const Assignment& context,
               const Intervention& intervention);

// Surgery: each intervened action becomes a parentless constant endogenous
// variable. The input model is left untouched.
CausalModel intervened_model(const CausalModel& model, const Intervention& intervention);

// Variables reachable from `roots` through parent->child edges, excluding the
// roots themselves.
std::set<VariableId> descendants_of(const CausalModel& model,
                                    const std::set<VariableId>& roots);

// Rendering used by evidence traces and reports: "(Plant: yes)" for
// interventions, "{Fuse: works}" for assignments.
std::string format_intervention(const Intervention& iv);
std::string format_assignment(const Assignment& a);

}  // namespace intent
