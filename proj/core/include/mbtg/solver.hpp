#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbtg/ltl.hpp"
#include "mbtg/semantics.hpp"

namespace mbtg {

struct SolverConfig {
    int k_max = 12;             // maximal bound n; traces have up to k_max + 2 states
    size_t budget = 2'000'000;  // explored macro steps before giving up
    uint64_t seed = 0;          // tie-breaking; identical seeds give identical output
};

enum class SolveStatus { Sat, UnsatAtBound, BudgetExceeded };

struct SolveStats {
    size_t steps_explored = 0;
    size_t nodes_cached = 0;
    int instances_tried = 0;
};

struct Witness {
    std::vector<Stimulus> stimuli;    // one per macro step
    std::vector<Valuation> trace;     // stimuli.size() + 1 states
    int discharge_index = 0;          // position discharging the leading eventuality
};

struct SolveResult {
    SolveStatus status = SolveStatus::UnsatAtBound;
    std::optional<Witness> witness;
    SolveStats stats;
};

/// Concretizes bounded instances into timed witness traces. Reachability
/// knowledge (a breadth-first set over timer-clamped abstract states) is
/// cached and shared across solve calls on the same instance of this class.
class Solver {
  public:
    Solver(const Model& model, SolverConfig config);

    /// Solves the instances of `f` in order of increasing discharge position;
    /// the first satisfiable one yields the witness.
    SolveResult solve(const LtlFormula& f);

    /// Shortest-path witness to a state formula; equivalent to solve(F goal)
    /// but queried directly against the reachable set.
    SolveResult solve_reach(const Expr& goal);

    /// solve() under a temporary step budget; the reachable-set cache is
    /// still shared. Used for cheap satisfiability probes.
    SolveResult solve_bounded(const LtlFormula& f, size_t budget);

    const SolverConfig& config() const { return config_; }

  private:
    std::optional<std::vector<Stimulus>> bfs_from(const Valuation& start, const Expr& goal,
                                                  int max_steps, size_t& budget) const;
    SolveResult solve_finally_conjunction(const std::vector<const Expr*>& goals);

    struct Node {
        std::vector<Value> key;
        Valuation state;
        int parent = -1;
        Stimulus via;
        int depth = 0;
    };

    SolveResult search_instance(const BmcInstance& inst, SolveStats& stats);
    void ensure_candidates();
    std::vector<Stimulus> stimuli_for(const Valuation& v) const;
    std::vector<Value> abstract_key(const Valuation& v) const;
    bool expand_next(size_t& budget_left);  // grows the reachable set by one node
    Witness reconstruct(int node) const;

    const Model& model_;
    SolverConfig config_;

    // per-input candidate values and timer guard constants (per state)
    std::vector<std::vector<Value>> input_candidates_;  // index: input position
    std::vector<int> input_vars_;
    std::vector<std::vector<Value>> timer_constants_;   // index: state
    Value clamp_horizon_ = 1;

    std::vector<Node> nodes_;
    std::map<std::string, SolveResult> reach_memo_;
    std::map<std::vector<Value>, int> seen_;
    size_t scan_ = 0;        // next node whose successors have not been generated
    size_t succ_cursor_ = 0; // next successor of nodes_[scan_]
    bool exhausted_ = false;
};

}  // namespace mbtg
