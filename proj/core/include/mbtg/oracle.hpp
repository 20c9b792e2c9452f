#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbtg/frontend.hpp"
#include "mbtg/semantics.hpp"

namespace mbtg {

struct MissingTolerance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-output tolerances: value deviation eps (rational, num/den), admissible
/// lateness dlate and earliness dearly in ms. All non-negative.
struct Tolerance {
    Value eps_num = 0;
    Value eps_den = 1;
    Value dlate = 0;
    Value dearly = 0;
};

struct ToleranceSpec {
    std::map<std::string, Tolerance> by_output;
};

/// Tolerance file: lines `<output> eps=<rational> dlate=<ms> dearly=<ms>`,
/// `#` comments. eps accepts integers, decimals and `p/q` fractions.
ToleranceSpec parse_tolerances(const std::string& text, const Model& model,
                               const std::string& filename = "<tolerances>");

struct Verdict {
    bool pass = true;
    // first failure, if any
    std::string output;        // failing output (or "length" / "time")
    std::string oracle_state;  // checker state at failure: s0 / s2 / s3
    Value time = 0;
    Value expected = 0;
    Value observed = 0;
    std::string detail;
};

/// Strict synchronous conformance: pass iff the observed log has exactly one
/// snapshot per expected state with identical time stamp and identical
/// values on every input and output.
Verdict check_strict(const Model& model, const std::vector<Valuation>& expected,
                     const TraceLog& observed);

/// Per-output checker automaton over the transformed model: the original
/// machines produce the expected outputs, the feeder writes the observed
/// shadow values, and one checker per output tracks s0 (in sync), s2
/// (expected change awaiting the SUT) and s3 (unexpected SUT change awaiting
/// the model), entering error when a deadline passes.
struct OracleModel {
    const Model* model = nullptr;
    ToleranceSpec tolerances;
    std::vector<int> outputs;  // declared outputs, variable index order
};

/// Throws MissingTolerance unless every declared output has a tolerance.
OracleModel build_oracle(const Model& model, const ToleranceSpec& tolerances);

/// Replays the log's input records through the model (event-driven, timer
/// deadlines included) and checks each output's observed change events
/// against the expected ones, boundary-inclusive. An output written via
/// UNDEF(d, c) may take arbitrary values for d ms after the expected change
/// before the catch-up deadline starts.
Verdict check_tolerant(const OracleModel& oracle, const TraceLog& observed);

}  // namespace mbtg
