#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mbtg/oracle.hpp"
#include "mbtg/solver.hpp"

namespace mbtg {

struct AdapterFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMutation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Timed stimulation plus the expected reaction. The expected trace is the
/// reactive closure of the witness stimulation (scheduled inputs plus the
/// model's own timer-deadline steps), so it is exactly what a conforming SUT
/// produces under this stimulation.
struct TestProcedure {
    enum Mode { Strict, Tolerant };

    std::string id;
    std::vector<int> cases;  // covered symbolic test case ids
    Mode mode = Strict;
    std::vector<Stimulus> stimuli;    // one full input assignment per step
    std::vector<Valuation> expected;  // time + I/O slots (internal slots unspecified)
    ToleranceSpec tolerances;         // tolerant mode only
};

TestProcedure emit(const Model& model, const Witness& witness, std::string id,
                   std::vector<int> cases, TestProcedure::Mode mode,
                   const ToleranceSpec* tolerances = nullptr);

/// Procedure file: header lines (procedure, mode, cases, tolerance*), then
/// one `stim t=<ms> <in>=<val>` line per input per step, then one
/// `expect t=<ms> <out>=<val>` line per output per step. `#` comments, LF
/// endings. print/parse round-trip bit-exactly.
std::string print_procedure(const Model& model, const TestProcedure& proc);
TestProcedure parse_procedure(const std::string& text, const Model& model,
                              const std::string& filename = "<procedure>");

struct ExecutionResult {
    Verdict verdict;
    TraceLog log;  // observed I/O snapshots, one per SUT step
};

/// Model-in-the-loop execution: drives the stimulation through `sut` (the
/// model or a mutant) under reactive semantics and checks the observed log
/// against the procedure in its mode.
ExecutionResult execute(const TestProcedure& proc, const Model& spec_model, const Model& sut);

/// External execution: checks a pre-recorded observed log.
ExecutionResult execute(const TestProcedure& proc, const Model& spec_model, const TraceLog& log);

struct Mutation {
    enum Kind { ConstantTweak, GuardNegate, ActionDrop } kind = ConstantTweak;
    int transition = -1;
    Value old_value = 0;   // ConstantTweak: guard constant to replace
    Value new_value = 0;
    int action_index = 0;  // ActionDrop
};

/// Single-element mutant; throws InvalidMutation when the target does not
/// exist or the mutant no longer validates.
Model mutate(const Model& model, const Mutation& mutation);

}  // namespace mbtg
