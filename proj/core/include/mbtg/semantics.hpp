#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mbtg/ir.hpp"

namespace mbtg {

/// Stimulus for one macro step: model time advances to `time` (>= the pre
/// state's time) and the listed inputs take their new values; unlisted inputs
/// hold.
struct Stimulus {
    Value time = 0;
    std::map<int, Value> inputs;  // variable index -> value
};

struct StepResult {
    Valuation post;
    std::vector<int> fired;  // per machine: transition id or -1 (stutter)
};

/// Executes one synchronous macro step. Guards and action right-hand sides
/// are evaluated on the pre state; the stimulated inputs and the new time
/// become visible in the post state and can only be reacted to one step
/// later. Each machine fires its unique maximal-depth enabled transition or
/// stutters; throws AmbiguityError on a priority tie and
/// std::invalid_argument on out-of-domain stimuli or decreasing time.
StepResult step(const Model& model, const Valuation& pre, const Stimulus& stim);

/// Runs a stimulus sequence from the initial valuation; the returned trace
/// includes the initial state at position 0.
std::vector<Valuation> run_trace(const Model& model, const std::vector<Stimulus>& stimuli);

/// Stimulus-driven run that also fires time-triggered transitions: between
/// scheduled stimuli, and after the last one up to `horizon`, extra macro
/// steps are inserted at every timer deadline where some machine fires.
struct ReactiveRun {
    std::vector<Valuation> trace;         // executed steps + initial state
    std::vector<Stimulus> stimuli;        // as executed, deadline steps included
    std::vector<std::vector<int>> fired;  // per executed step, per machine
};

ReactiveRun run_reactive(const Model& model, const std::vector<Stimulus>& stimuli, Value horizon);

/// Transition relation built once per model; `holds` decides membership of a
/// (pre, post) pair independently of step() by enumerating per-machine
/// fire-or-stutter options and checking frame, timer and activation
/// constraints.
struct TransitionRelation {
    const Model* model = nullptr;
    std::vector<Diagnostic> ambiguity_warnings;  // statically detected guard overlaps

    bool holds(const Valuation& pre, const Valuation& post) const;
};

TransitionRelation build_relation(const Model& model);

/// Lower bound on the number of macro steps needed to reach a state where
/// `goal` can hold, by interval abstract interpretation (per-variable
/// intervals, possibly-active state sets, widening after three iterations).
/// nullopt means the goal is unreachable at any depth. Sound: never exceeds
/// the true reachability depth.
std::optional<int> interval_reach(const Model& model, const Expr& goal);

}  // namespace mbtg
