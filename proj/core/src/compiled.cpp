#include "compiled.hpp"

#include <algorithm>

namespace intent::detail {

namespace {

// Throws with the first structural defect; build() callers validate first, so
// this is a guard against misuse, not a diagnostic channel.
void require_valid(const CausalModel& model) {
    auto violations = validate_model(model);
    if (!violations.empty()) {
        throw ModelError("model is not valid: " + violations.front().message);
    }
}

}  // namespace

Compiled Compiled::build(const CausalModel& model, const Policy* policy) {
    require_valid(model);

    Compiled c;
    auto add_var = [&](const VariableId& id, VarKind kind, const Domain& domain) -> int {
        int slot = int(c.vars_.size());
        CompiledVar v;
        v.id = id;
        v.kind = kind;
        v.domain = &domain;
        c.vars_.push_back(std::move(v));
        c.slot_by_id_.emplace(id, slot);
        return slot;
    };

    for (const auto& v : model.exogenous) {
        int slot = add_var(v.id, VarKind::Exogenous, v.domain);
        c.vars_[slot].exo_pos = int(c.exo_slots_.size());
        c.vars_[slot].probabilities = v.probabilities;
        c.exo_slots_.push_back(slot);
    }
    for (const auto& v : model.actions) {
        int slot = add_var(v.id, VarKind::Action, v.domain);
        c.vars_[slot].action_pos = int(c.action_slots_.size());
        c.action_slots_.push_back(slot);
    }
    for (const auto& v : model.endogenous) {
        add_var(v.id, VarKind::Endogenous, v.domain);
    }

    // Lower endogenous tables to row-major lookup vectors.
    for (const auto& v : model.endogenous) {
        int slot = c.slot_of(v.id);
        CompiledVar& cv = c.vars_[slot];
        cv.parent_slots.reserve(v.parents.size());
        for (const auto& p : v.parents) cv.parent_slots.push_back(c.slot_of(p));

        cv.parent_strides.assign(v.parents.size(), 1);
        std::size_t total = 1;
        for (std::size_t i = 0; i < v.parents.size(); ++i) {
            cv.parent_strides[i] = int(total);
            total *= c.vars_[cv.parent_slots[i]].domain->values.size();
        }
        cv.table.assign(total, -1);
        for (const auto& row : v.rows) {
            std::size_t index = 0;
            for (std::size_t i = 0; i < row.inputs.size(); ++i) {
                index += std::size_t(cv.parent_strides[i]) *
                         std::size_t(c.vars_[cv.parent_slots[i]].domain->index_of(row.inputs[i]));
            }
            cv.table[index] = cv.domain->index_of(row.output);
        }
    }

    // Lower policy arms. Bound actions gain dependency edges from their
    // condition variables so the evaluation order can resolve them.
    c.arms_.assign(c.vars_.size(), {});
    std::vector<std::vector<int>> extra_deps(c.vars_.size());
    if (policy) {
        for (const auto& rule : policy->rules) {
            for (const auto& [action_id, value] : rule.action.settings) {
                int slot = c.slot_of(action_id);
                if (slot < 0 || c.vars_[slot].kind != VarKind::Action) {
                    throw ModelError("policy binds '" + action_id +
                                     "', which is not an action variable of the model");
                }
                int value_index = c.vars_[slot].domain->index_of(value);
                if (value_index < 0) {
                    throw ModelError("policy assigns '" + action_id +
                                     "' the out-of-domain value '" + value + "'");
                }
                CompiledPolicyArm arm;
                arm.value = value_index;
                for (const auto& [cond_id, cond_value] : rule.condition.literals) {
                    int cond_slot = c.slot_of(cond_id);
                    if (cond_slot < 0) {
                        throw ModelError("policy condition references unknown variable '" +
                                         cond_id + "'");
                    }
                    int cond_index = c.vars_[cond_slot].domain->index_of(cond_value);
                    if (cond_index < 0) {
                        throw ModelError("policy condition assigns '" + cond_id +
                                         "' the out-of-domain value '" + cond_value + "'");
                    }
                    arm.condition.emplace_back(cond_slot, cond_index);
                    extra_deps[slot].push_back(cond_slot);
                }
                c.arms_[slot].push_back(std::move(arm));
            }
        }
    }

    // Topological order over parent edges plus policy edges.
    enum class Mark { None, Open, Done };
    std::vector<Mark> marks(c.vars_.size(), Mark::None);
    c.order_.reserve(c.vars_.size());
    auto visit = [&](auto&& self, int slot) -> void {
        Mark& m = marks[slot];
        if (m == Mark::Done) return;
        if (m == Mark::Open) {
            throw ModelError("policy binding creates a cycle through '" + c.vars_[slot].id + "'");
        }
        m = Mark::Open;
        for (int p : c.vars_[slot].parent_slots) self(self, p);
        for (int p : extra_deps[slot]) self(self, p);
        m = Mark::Done;
        c.order_.push_back(slot);
    };
    for (int slot = 0; slot < int(c.vars_.size()); ++slot) visit(visit, slot);

    return c;
}

int Compiled::slot_of(std::string_view id) const {
    auto it = slot_by_id_.find(id);
    return it == slot_by_id_.end() ? -1 : it->second;
}

std::uint64_t Compiled::context_count() const {
    std::uint64_t n = 1;
    for (int slot : exo_slots_) {
        n *= std::uint64_t(vars_[slot].domain->values.size());
        if (n > (std::uint64_t(1) << 62)) return n;  // saturate well past any cap
    }
    return n;
}

void Compiled::context_at(std::uint64_t rank, std::vector<int>& exo_values) const {
    exo_values.resize(exo_slots_.size());
    for (std::size_t i = 0; i < exo_slots_.size(); ++i) {
        std::uint64_t size = vars_[exo_slots_[i]].domain->values.size();
        exo_values[i] = int(rank % size);
        rank /= size;
    }
}

double Compiled::context_probability(const std::vector<int>& exo_values) const {
    double p = 1.0;
    for (std::size_t i = 0; i < exo_slots_.size(); ++i) {
        p *= vars_[exo_slots_[i]].probabilities[exo_values[i]];
    }
    return p;
}

std::vector<int> Compiled::lower_intervention(const Intervention& iv) const {
    std::vector<int> action_values(action_slots_.size(), -1);
    for (const auto& [id, value] : iv.settings) {
        int slot = slot_of(id);
        if (slot < 0) throw ModelError("intervention on unknown variable '" + id + "'");
        const CompiledVar& v = vars_[slot];
        if (v.kind != VarKind::Action) {
            throw ModelError("intervention on non-action variable '" + id + "'");
        }
        int index = v.domain->index_of(value);
        if (index < 0) {
            throw ModelError("intervention assigns '" + id + "' the out-of-domain value '" +
                             value + "'");
        }
        action_values[v.action_pos] = index;
    }
    return action_values;
}

CompiledEvent Compiled::lower_event(const Event& e) const {
    CompiledEvent out;
    out.reserve(e.literals.size());
    for (const auto& [id, value] : e.literals) {
        int slot = slot_of(id);
        if (slot < 0) throw ModelError("event references unknown variable '" + id + "'");
        int index = vars_[slot].domain->index_of(value);
        if (index < 0) {
            throw ModelError("event assigns '" + id + "' the out-of-domain value '" + value +
                             "'");
        }
        out.emplace_back(slot, index);
    }
    return out;
}

void Compiled::evaluate(const std::vector<int>& exo_values,
                        const std::vector<int>& action_values, std::vector<int>& world) const {
    world.assign(vars_.size(), -1);
    for (int slot : order_) {
        const CompiledVar& v = vars_[slot];
        switch (v.kind) {
            case VarKind::Exogenous:
                world[slot] = exo_values[v.exo_pos];
                break;
            case VarKind::Action: {
                int set = action_values[v.action_pos];
                if (set >= 0) {
                    world[slot] = set;
                    break;
                }
                const auto& arms = arms_[slot];
                for (const auto& arm : arms) {
                    bool matches = true;
                    for (const auto& [cond_slot, cond_value] : arm.condition) {
                        if (world[cond_slot] != cond_value) {
                            matches = false;
                            break;
                        }
                    }
                    if (matches) {
                        world[slot] = arm.value;
                        break;
                    }
                }
                if (world[slot] < 0) {
                    throw ModelError(arms.empty()
                                         ? "action variable '" + v.id +
                                               "' is not covered by the intervention"
                                         : "policy does not decide '" + v.id +
                                               "' in the evaluated context");
                }
                break;
            }
            case VarKind::Endogenous: {
                std::size_t index = 0;
                for (std::size_t i = 0; i < v.parent_slots.size(); ++i) {
                    index += std::size_t(v.parent_strides[i]) *
                             std::size_t(world[v.parent_slots[i]]);
                }
                world[slot] = v.table[index];
                break;
            }
        }
    }
}

bool Compiled::satisfies(const std::vector<int>& world, const CompiledEvent& e) const {
    for (const auto& [slot, value] : e) {
        if (world[slot] != value) return false;
    }
    return true;
}

World Compiled::to_world(const std::vector<int>& world) const {
    World out;
    for (std::size_t slot = 0; slot < vars_.size(); ++slot) {
        out.values[vars_[slot].id] = vars_[slot].domain->values[world[slot]];
    }
    return out;
}

Assignment Compiled::exo_assignment(const std::vector<int>& exo_values) const {
    Assignment out;
    for (std::size_t i = 0; i < exo_slots_.size(); ++i) {
        const CompiledVar& v = vars_[exo_slots_[i]];
        out[v.id] = v.domain->values[exo_values[i]];
    }
    return out;
}

Intervention Compiled::to_intervention(const std::vector<int>& action_values) const {
    Intervention out;
    for (std::size_t i = 0; i < action_slots_.size(); ++i) {
        if (action_values[i] < 0) continue;
        const CompiledVar& v = vars_[action_slots_[i]];
        out.settings[v.id] = v.domain->values[action_values[i]];
    }
    return out;
}

QueryEngine::QueryEngine(const Compiled& model, std::uint64_t cap) : model_(&model) {
    std::uint64_t total = model.context_count();
    if (total > cap) {
        throw CapExceededError("exogenous context space (" + std::to_string(total) +
                               ") exceeds the enumeration cap (" + std::to_string(cap) + ")");
    }
    std::vector<int> exo;
    for (std::uint64_t rank = 0; rank < total; ++rank) {
        model.context_at(rank, exo);
        double p = model.context_probability(exo);
        if (p > 0.0) {
            contexts_.ranks.push_back(rank);
            contexts_.weights.push_back(p);
        }
    }
}

QueryEngine::QueryEngine(const Compiled& model, ContextSet conditioned)
    : model_(&model), contexts_(std::move(conditioned)) {}

Assignment QueryEngine::context_assignment(std::size_t pos) const {
    std::vector<int> exo;
    model_->context_at(contexts_.ranks[pos], exo);
    return model_->exo_assignment(exo);
}

const std::vector<std::vector<int>>& QueryEngine::worlds(const std::vector<int>& action_values) {
    auto it = world_cache_.find(action_values);
    if (it != world_cache_.end()) return it->second;

    std::vector<std::vector<int>> computed(contexts_.ranks.size());
    std::vector<int> exo;
    for (std::size_t i = 0; i < contexts_.ranks.size(); ++i) {
        model_->context_at(contexts_.ranks[i], exo);
        model_->evaluate(exo, action_values, computed[i]);
    }
    return world_cache_.emplace(action_values, std::move(computed)).first->second;
}

double QueryEngine::probability(const std::vector<int>& action_values,
                                const CompiledEvent& event) {
    const auto& ws = worlds(action_values);
    double p = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (model_->satisfies(ws[i], event)) p += contexts_.weights[i];
    }
    return p;
}

std::optional<double> QueryEngine::conditional(const std::vector<int>& action_values,
                                               const CompiledEvent& event,
                                               const CompiledEvent& given, double tolerance) {
    const auto& ws = worlds(action_values);
    double joint = 0.0, base = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!model_->satisfies(ws[i], given)) continue;
        base += contexts_.weights[i];
        if (model_->satisfies(ws[i], event)) joint += contexts_.weights[i];
    }
    if (base <= tolerance) return std::nullopt;
    return joint / base;
}

QueryEngine::ButFor QueryEngine::but_for(const std::vector<int>& action_values,
                                         const std::vector<std::vector<int>>& reference,
                                         const CompiledEvent& event) {
    const auto& actual = worlds(action_values);
    std::vector<const std::vector<std::vector<int>>*> alternatives;
    alternatives.reserve(reference.size());
    for (const auto& alt : reference) alternatives.push_back(&worlds(alt));

    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!model_->satisfies(actual[i], event)) continue;
        for (std::size_t j = 0; j < alternatives.size(); ++j) {
            if (!model_->satisfies((*alternatives[j])[i], event)) {
                return {true, int(i), int(j)};
            }
        }
    }
    return {};
}

bool QueryEngine::necessary(const std::vector<int>& plan_values, const CompiledEvent& inner,
                            const CompiledEvent& outer) {
    const auto& ws = worlds(plan_values);
    for (const auto& w : ws) {
        if (model_->satisfies(w, outer) && !model_->satisfies(w, inner)) return false;
    }
    return true;
}

std::optional<ContextSet> QueryEngine::conditioned_on(const std::vector<int>& action_values,
                                                      const CompiledEvent& given,
                                                      double tolerance) {
    const auto& ws = worlds(action_values);
    ContextSet out;
    double mass = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!model_->satisfies(ws[i], given)) continue;
        out.ranks.push_back(contexts_.ranks[i]);
        out.weights.push_back(contexts_.weights[i]);
        mass += contexts_.weights[i];
    }
    if (mass <= tolerance) return std::nullopt;
    for (double& w : out.weights) w /= mass;
    return out;
}

}  // namespace intent::detail
