#include "intent/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "compiled.hpp"

namespace intent {

bool valid_variable_id(std::string_view id) {
    if (id.empty()) return false;
    std::size_t i = 0;
    if (!(std::isalpha(static_cast<unsigned char>(id[0])) || id[0] == '_')) return false;
    for (i = 1; i < id.size() && (std::isalnum(static_cast<unsigned char>(id[i])) || id[i] == '_'); ++i) {
    }
    if (i == id.size()) return true;
    // Optional time suffix: '@' followed by at least one digit, nothing after.
    if (id[i] != '@' || i + 1 == id.size()) return false;
    for (++i; i < id.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
    }
    return true;
}

int time_step_of(std::string_view id) {
    auto at = id.rfind('@');
    if (at == std::string_view::npos) return 1;
    int step = 0;
    for (std::size_t i = at + 1; i < id.size(); ++i) {
        step = step * 10 + (id[i] - '0');
        if (step > 1'000'000) return step;  // ids are validated elsewhere
    }
    return step;
}

std::string format_number(double v) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

int Domain::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == label) return int(i);
    }
    return -1;
}

bool Intervention::subset_of(const Intervention& other) const {
    for (const auto& [id, value] : settings) {
        auto it = other.settings.find(id);
        if (it == other.settings.end() || it->second != value) return false;
    }
    return true;
}

Intervention composed(const Intervention& base, const Intervention& over) {
    Intervention out = base;
    for (const auto& [id, value] : over.settings) out.settings[id] = value;
    return out;
}

const Domain* CausalModel::find_domain(const VariableId& id) const {
    for (const auto& v : exogenous) {
        if (v.id == id) return &v.domain;
    }
    for (const auto& v : endogenous) {
        if (v.id == id) return &v.domain;
    }
    for (const auto& v : actions) {
        if (v.id == id) return &v.domain;
    }
    return nullptr;
}

bool CausalModel::is_action(const VariableId& id) const {
    return std::any_of(actions.begin(), actions.end(),
                       [&](const ActionVariable& a) { return a.id == id; });
}

namespace {

void check_domain(const VariableId& id, const Domain& domain, std::vector<Violation>& out) {
    if (!valid_variable_id(id)) {
        out.push_back({"bad-id", id, "variable id '" + id + "' is not a valid identifier"});
    }
    if (domain.values.empty()) {
        out.push_back({"bad-domain", id, "domain of '" + id + "' is empty"});
    }
    for (std::size_t i = 0; i < domain.values.size(); ++i) {
        for (std::size_t j = i + 1; j < domain.values.size(); ++j) {
            if (domain.values[i] == domain.values[j]) {
                out.push_back({"bad-domain", id,
                               "domain of '" + id + "' repeats value '" + domain.values[i] + "'"});
            }
        }
    }
}

std::string join_inputs(const std::vector<ValueLabel>& inputs) {
    std::string s = "(";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i) s += ", ";
        s += inputs[i];
    }
    return s + ")";
}

}  // namespace

std::vector<Violation> validate_model(const CausalModel& model) {
    std::vector<Violation> out;

    std::map<VariableId, int> seen;
    auto note_id = [&](const VariableId& id) {
        if (++seen[id] == 2) {
            out.push_back({"duplicate-id", id, "variable id '" + id + "' is declared twice"});
        }
    };
    for (const auto& v : model.exogenous) note_id(v.id);
    for (const auto& v : model.endogenous) note_id(v.id);
    for (const auto& v : model.actions) note_id(v.id);

    for (const auto& v : model.exogenous) {
        check_domain(v.id, v.domain, out);
        if (v.probabilities.size() != v.domain.values.size()) {
            out.push_back({"bad-distribution", v.id,
                           "distribution of '" + v.id + "' has " +
                               std::to_string(v.probabilities.size()) + " entries for " +
                               std::to_string(v.domain.values.size()) + " domain values"});
            continue;
        }
        bool in_range = true;
        for (double p : v.probabilities) {
            if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(p)) in_range = false;
        }
        if (!in_range) {
            out.push_back({"bad-distribution", v.id,
                           "distribution of '" + v.id + "' has entries outside [0, 1]"});
        } else {
            double sum = std::accumulate(v.probabilities.begin(), v.probabilities.end(), 0.0);
            if (std::abs(sum - 1.0) > kProbabilityTolerance) {
                out.push_back({"unnormalized-distribution", v.id,
                               "distribution not normalized: " + v.id + " (sums to " +
                                   format_number(sum) + ")"});
            }
        }
    }

    for (const auto& v : model.actions) check_domain(v.id, v.domain, out);

    for (const auto& v : model.endogenous) {
        check_domain(v.id, v.domain, out);

        bool parents_ok = true;
        std::vector<const Domain*> parent_domains;
        for (const auto& p : v.parents) {
            const Domain* d = model.find_domain(p);
            if (!d) {
                out.push_back({"unknown-parent", v.id,
                               "'" + v.id + "' lists unknown parent '" + p + "'"});
                parents_ok = false;
            } else {
                parent_domains.push_back(d);
            }
        }
        if (!parents_ok || v.domain.values.empty()) continue;

        std::size_t product = 1;
        for (const Domain* d : parent_domains) product *= d->values.size();

        std::map<std::vector<ValueLabel>, int> row_count;
        bool rows_ok = true;
        for (const auto& row : v.rows) {
            if (row.inputs.size() != v.parents.size()) {
                out.push_back({"bad-row", v.id,
                               "table for '" + v.id + "' row " + join_inputs(row.inputs) +
                                   " has wrong arity"});
                rows_ok = false;
                continue;
            }
            bool values_ok = true;
            for (std::size_t i = 0; i < row.inputs.size(); ++i) {
                if (!parent_domains[i]->contains(row.inputs[i])) {
                    out.push_back({"bad-row", v.id,
                                   "table for '" + v.id + "' row " + join_inputs(row.inputs) +
                                       " uses '" + row.inputs[i] + "' outside the domain of '" +
                                       v.parents[i] + "'"});
                    values_ok = false;
                }
            }
            if (!v.domain.contains(row.output)) {
                out.push_back({"bad-row", v.id,
                               "table for '" + v.id + "' maps " + join_inputs(row.inputs) +
                                   " to '" + row.output + "' outside its own domain"});
                values_ok = false;
            }
            if (!values_ok) {
                rows_ok = false;
                continue;
            }
            if (++row_count[row.inputs] == 2) {
                out.push_back({"duplicate-row", v.id,
                               "table for '" + v.id + "' repeats row " + join_inputs(row.inputs)});
                rows_ok = false;
            }
        }
        if (rows_ok && row_count.size() != product) {
            out.push_back({"incomplete-table", v.id,
                           "table for '" + v.id + "' is not total (" +
                               std::to_string(row_count.size()) + " of " +
                               std::to_string(product) + " rows)"});
        }
    }

    // Cycle detection over the endogenous parent graph. Exogenous and action
    // variables are sources by construction.
    std::map<VariableId, const EndogenousVariable*> endo_by_id;
    for (const auto& v : model.endogenous) {
        if (!endo_by_id.count(v.id)) endo_by_id[v.id] = &v;
    }
    enum class Mark { None, Open, Done };
    std::map<VariableId, Mark> marks;
    std::vector<VariableId> cyclic;
    auto visit = [&](auto&& self, const VariableId& id) -> bool {
        auto it = endo_by_id.find(id);
        if (it == endo_by_id.end()) return true;
        Mark& m = marks[id];
        if (m == Mark::Done) return true;
        if (m == Mark::Open) {
            cyclic.push_back(id);
            return false;
        }
        m = Mark::Open;
        for (const auto& p : it->second->parents) {
            if (!self(self, p)) {
                marks[id] = Mark::Done;
                return false;
            }
        }
        marks[id] = Mark::Done;
        return true;
    };
    for (const auto& v : model.endogenous) {
        if (!visit(visit, v.id)) {
            out.push_back({"cycle", cyclic.front(),
                           "cycle detected involving '" + cyclic.front() + "'"});
            break;
        }
    }

    return out;
}

bool is_valid(const CausalModel& model) { return validate_model(model).empty(); }

World evaluate(const CausalModel& model, const Assignment& context,
               const Intervention& intervention) {
    auto compiled = detail::Compiled::build(model);

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

    std::vector<int> action_values = compiled.lower_intervention(intervention);
    std::vector<int> world;
    compiled.evaluate(exo_values, action_values, world);
    return compiled.to_world(world);
}

CausalModel intervened_model(const CausalModel& model, const Intervention& intervention) {
    for (const auto& [id, value] : intervention.settings) {
        const Domain* d = model.find_domain(id);
        if (!d) throw ModelError("intervention on unknown variable '" + id + "'");
        if (!model.is_action(id)) {
            throw ModelError("intervention on non-action variable '" + id + "'");
        }
        if (!d->contains(value)) {
            throw ModelError("intervention assigns '" + id + "' the out-of-domain value '" +
                             value + "'");
        }
    }

    CausalModel out;
    out.exogenous = model.exogenous;
    out.endogenous = model.endogenous;
    for (const auto& a : model.actions) {
        auto it = intervention.settings.find(a.id);
        if (it == intervention.settings.end()) {
            out.actions.push_back(a);
        } else {
            // The action becomes a parentless constant with the same domain.
            out.endogenous.push_back({a.id, a.domain, {}, {TableRow{{}, it->second}}});
        }
    }
    return out;
}

std::set<VariableId> descendants_of(const CausalModel& model,
                                    const std::set<VariableId>& roots) {
    std::set<VariableId> reached = roots;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& v : model.endogenous) {
            if (reached.count(v.id)) continue;
            for (const auto& p : v.parents) {
                if (reached.count(p)) {
                    reached.insert(v.id);
                    grew = true;
                    break;
                }
            }
        }
    }
    for (const auto& r : roots) reached.erase(r);
    return reached;
}

std::string format_intervention(const Intervention& iv) {
    std::string s = "(";
    bool first = true;
    for (const auto& [id, value] : iv.settings) {
        if (!first) s += ", ";
        first = false;
        s += id + ": " + value;
    }
    return s + ")";
}

std::string format_assignment(const Assignment& a) {
    std::string s = "{";
    bool first = true;
    for (const auto& [id, value] : a) {
        if (!first) s += ", ";
        first = false;
        s += id + ": " + value;
    }
    return s + "}";
}

}  // namespace intent
