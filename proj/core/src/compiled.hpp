#pragma once

// Internal index-based view of a validated model. Public types keep string
// keys for I/O friendliness; everything hot (context enumeration, world
// evaluation, clause probabilities) runs on integer slots through this view.

#include <cstdint>
#include <map>
#include <unordered_map>

#include "intent/agent.hpp"

namespace intent::detail {

enum class VarKind { Exogenous, Action, Endogenous };

struct CompiledVar {
    VariableId id;
    VarKind kind = VarKind::Endogenous;
    const Domain* domain = nullptr;
    int exo_pos = -1;     // position among exogenous variables
    int action_pos = -1;  // position among action variables
    std::vector<int> parent_slots;    // endogenous only
    std::vector<int> parent_strides;  // row-major strides into `table`
    std::vector<int> table;           // flattened: value index per parent tuple
    std::vector<double> probabilities;  // exogenous only
};

// One policy arm lowered to slots: condition literals over already-evaluated
// variables, plus the value this arm assigns to one bound action.
struct CompiledPolicyArm {
    std::vector<std::pair<int, int>> condition;  // (slot, value index)
    int value = -1;
};

using CompiledEvent = std::vector<std::pair<int, int>>;  // (slot, value index)

class Compiled {
  public:
    // The model must already be structurally valid; defects throw ModelError.
    // A policy adds condition->action edges and per-action arm tables; a
    // binding that cycles throws ModelError.
    static Compiled build(const CausalModel& model, const Policy* policy = nullptr);

    int slot_count() const { return int(vars_.size()); }
    int exo_count() const { return int(exo_slots_.size()); }
    int action_count() const { return int(action_slots_.size()); }
    const CompiledVar& var(int slot) const { return vars_[slot]; }
    int slot_of(std::string_view id) const;  // -1 when absent
    bool is_bound(int slot) const { return !arms_[slot].empty(); }

    std::uint64_t context_count() const;

    // Exogenous value vectors in canonical order: first declared variable
    // varies fastest. `rank` indexes that order.
    void context_at(std::uint64_t rank, std::vector<int>& exo_values) const;
    double context_probability(const std::vector<int>& exo_values) const;

    // Intervention lowered to a per-action-position value vector; -1 = unset.
    std::vector<int> lower_intervention(const Intervention& iv) const;
    CompiledEvent lower_event(const Event& e) const;

    // Forward pass in topological order. `world` is resized and filled with a
    // value index per slot. Uncovered unbound actions throw ModelError.
    void evaluate(const std::vector<int>& exo_values, const std::vector<int>& action_values,
                  std::vector<int>& world) const;

    bool satisfies(const std::vector<int>& world, const CompiledEvent& e) const;

    World to_world(const std::vector<int>& world) const;
    Assignment exo_assignment(const std::vector<int>& exo_values) const;
    Intervention to_intervention(const std::vector<int>& action_values) const;

  private:
    std::vector<CompiledVar> vars_;
    std::vector<int> order_;  // evaluation order over slots
    std::vector<int> exo_slots_;
    std::vector<int> action_slots_;
    std::vector<std::vector<CompiledPolicyArm>> arms_;  // per slot; empty = unbound
    std::map<std::string, int, std::less<>> slot_by_id_;
};

// Positive-probability contexts, optionally conditioned and renormalized.
struct ContextSet {
    std::vector<std::uint64_t> ranks;
    std::vector<double> weights;  // sums to 1 after renormalization
};

// Per-call evaluation cache: worlds for each distinct intervention are
// computed once across the context set and reused by every clause.
class QueryEngine {
  public:
    // Full positive-probability context set; throws CapExceededError when the
    // product space exceeds `cap`.
    QueryEngine(const Compiled& model, std::uint64_t cap);
    QueryEngine(const Compiled& model, ContextSet conditioned);

    const Compiled& model() const { return *model_; }
    std::size_t context_count() const { return contexts_.ranks.size(); }
    double weight(std::size_t pos) const { return contexts_.weights[pos]; }
    Assignment context_assignment(std::size_t pos) const;

    const std::vector<std::vector<int>>& worlds(const std::vector<int>& action_values);

    double probability(const std::vector<int>& action_values, const CompiledEvent& event);
    std::optional<double> conditional(const std::vector<int>& action_values,
                                      const CompiledEvent& event, const CompiledEvent& given,
                                      double tolerance);

    struct ButFor {
        bool caused = false;
        int context_pos = -1;
        int reference_index = -1;
    };
    ButFor but_for(const std::vector<int>& action_values,
                   const std::vector<std::vector<int>>& reference, const CompiledEvent& event);

    bool necessary(const std::vector<int>& plan_values, const CompiledEvent& inner,
                   const CompiledEvent& outer);

    // Restriction of this engine's context set to worlds satisfying `given`
    // under the given intervention; empty when the mass is below tolerance.
    std::optional<ContextSet> conditioned_on(const std::vector<int>& action_values,
                                             const CompiledEvent& given, double tolerance);

  private:
    const Compiled* model_;
    ContextSet contexts_;
    std::map<std::vector<int>, std::vector<std::vector<int>>> world_cache_;
};

}  // namespace intent::detail
