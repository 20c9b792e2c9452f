#include "doctest.h"

#include "mbtg/frontend.hpp"
#include "mbtg/oracle.hpp"
#include "mbtg/semantics.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

// full I/O snapshot log for a trace, as an external test rig would record it
TraceLog project(const Model& m, const std::vector<Valuation>& trace) {
    TraceLog log;
    for (const Valuation& v : trace)
        for (size_t vi = 0; vi < m.variables.size(); ++vi) {
            if (m.variables[vi].kind == VarKind::Internal) continue;
            TraceLog::Record r;
            r.t = v.time();
            r.var = m.variables[vi].name;
            r.var_index = static_cast<int>(vi);
            r.value = v.slots[static_cast<size_t>(m.var_slot[vi])];
            log.records.push_back(r);
        }
    return log;
}

std::vector<Valuation> flashing_trace(const Model& m) {
    Stimulus s;
    s.time = 0;
    s.inputs[m.var_index("EmerFlash")] = 1;
    return run_reactive(m, {s}, 1000).trace;
}

ToleranceSpec zero_tol(const Model& m) {
    ToleranceSpec spec;
    for (const VariableDecl& v : m.variables)
        if (v.kind == VarKind::Output) spec.by_output[v.name] = Tolerance{};
    return spec;
}

// change-event log for the flashing scenario, with the FlashLeft change at
// t=340 shifted by `delta` ms
TraceLog shifted_log(const Model& m, Value delta) {
    std::string text =
        "t=0 EmerFlash=1\n"
        "t=0 FlashLeft=1 FlashRight=1\n"
        "t=" + std::to_string(340 + delta) + " FlashLeft=0\n"
        "t=340 FlashRight=0\n"
        "t=660 FlashLeft=1 FlashRight=1\n"
        "t=1000 FlashLeft=0 FlashRight=0\n";
    // keep records non-decreasing in time
    if (delta > 0)
        text = "t=0 EmerFlash=1\n"
               "t=0 FlashLeft=1 FlashRight=1\n"
               "t=340 FlashRight=0\n"
               "t=" + std::to_string(340 + delta) + " FlashLeft=0\n"
               "t=660 FlashLeft=1 FlashRight=1\n"
               "t=1000 FlashLeft=0 FlashRight=0\n";
    return parse_trace_log(text, m);
}

}  // namespace

TEST_CASE("parse_tolerances accepts integers, decimals, and fractions") {
    const Model& m = fixtures::corpus();
    ToleranceSpec spec = parse_tolerances(
        "# per-output tolerances\n"
        "FlashLeft eps=0 dlate=10 dearly=5\n"
        "FlashRight eps=1/2 dlate=0 dearly=0\n",
        m);
    REQUIRE(spec.by_output.size() == 2);
    CHECK(spec.by_output.at("FlashLeft").dlate == 10);
    CHECK(spec.by_output.at("FlashLeft").dearly == 5);
    CHECK(spec.by_output.at("FlashRight").eps_num == 1);
    CHECK(spec.by_output.at("FlashRight").eps_den == 2);

    CHECK_THROWS_AS(parse_tolerances("Voltage eps=0 dlate=0 dearly=0\n", m),
                    ParseError);  // not an output
    CHECK_THROWS_AS(parse_tolerances("FlashLeft eps=0 dlate=0\n", m), ParseError);
    CHECK_THROWS_AS(parse_tolerances(
                        "FlashLeft eps=0 dlate=0 dearly=0\nFlashLeft eps=0 dlate=0 dearly=0\n", m),
                    ParseError);  // duplicate
}

TEST_CASE("build_oracle demands a tolerance per output") {
    const Model& m = fixtures::corpus();
    ToleranceSpec partial;
    partial.by_output["FlashLeft"] = Tolerance{};
    CHECK_THROWS_AS(build_oracle(m, partial), MissingTolerance);
    CHECK_NOTHROW(build_oracle(m, zero_tol(m)));
}

TEST_CASE("check_strict accepts the exact snapshot sequence") {
    const Model& m = fixtures::corpus();
    std::vector<Valuation> trace = flashing_trace(m);
    CHECK(check_strict(m, trace, project(m, trace)).pass);
}

TEST_CASE("check_strict flags value, time, and length deviations") {
    const Model& m = fixtures::corpus();
    std::vector<Valuation> trace = flashing_trace(m);

    TraceLog bad = project(m, trace);
    for (TraceLog::Record& r : bad.records)
        if (r.t == 340 && r.var == "FlashLeft") r.value = 1;  // should have dropped to 0
    Verdict v = check_strict(m, trace, bad);
    CHECK(!v.pass);
    CHECK(v.output == "FlashLeft");

    TraceLog late = project(m, trace);
    for (TraceLog::Record& r : late.records)
        if (r.t == 340) r.t = 341;
    CHECK(!check_strict(m, trace, late).pass);

    TraceLog short_log = project(m, trace);
    short_log.records.resize(short_log.records.size() - 5);  // drop the last snapshot
    CHECK(!check_strict(m, trace, short_log).pass);
}

TEST_CASE("tolerant oracle passes a conforming run with zero tolerances") {
    const Model& m = fixtures::corpus();
    OracleModel oracle = build_oracle(m, zero_tol(m));
    Verdict v = check_tolerant(oracle, shifted_log(m, 0));
    CHECK(v.pass);
}

TEST_CASE("tolerant oracle honours inclusive timing windows") {
    const Model& m = fixtures::corpus();
    ToleranceSpec spec = zero_tol(m);
    spec.by_output["FlashLeft"] = Tolerance{0, 1, 10, 10};
    OracleModel oracle = build_oracle(m, spec);

    CHECK(check_tolerant(oracle, shifted_log(m, 10)).pass);    // boundary late
    CHECK(check_tolerant(oracle, shifted_log(m, -10)).pass);   // boundary early
    CHECK(check_tolerant(oracle, shifted_log(m, 5)).pass);

    Verdict late = check_tolerant(oracle, shifted_log(m, 11));
    CHECK(!late.pass);
    CHECK(late.output == "FlashLeft");
    CHECK(!check_tolerant(oracle, shifted_log(m, -11)).pass);

    // the untouched output stays strict
    OracleModel strict = build_oracle(m, zero_tol(m));
    CHECK(!check_tolerant(strict, shifted_log(m, 1)).pass);
}

TEST_CASE("value tolerance eps compares rationally") {
    Model m = parse_model(R"(model v {
      in go : bool init 0
      out y : int 0..100 init 0
      machine M {
        state S initial { on go / y := 10 -> T }
        state T { }
      }
    })", "v.mbt");

    auto check_with = [&](Value num, Value den, Value observed) {
        ToleranceSpec spec;
        spec.by_output["y"] = Tolerance{num, den, 0, 0};
        OracleModel oracle = build_oracle(m, spec);
        TraceLog log = parse_trace_log(
            "t=0 go=1\nt=0 y=" + std::to_string(observed) + "\n", m);
        return check_tolerant(oracle, log).pass;
    };
    CHECK(check_with(0, 1, 10));
    CHECK(!check_with(0, 1, 11));
    CHECK(check_with(2, 1, 12));
    CHECK(!check_with(2, 1, 13));
    CHECK(check_with(3, 2, 11));   // |11-10| <= 3/2
    CHECK(!check_with(1, 2, 11));  // |11-10| > 1/2
}

TEST_CASE("UNDEF output may flap inside its settling window") {
    Model m = parse_model(R"(model u {
      in go : bool init 0
      out y : bool init 0
      machine M {
        state S initial { on go / y := UNDEF(50, 1) -> T }
        state T { }
      }
    })", "u.mbt");
    ToleranceSpec spec;
    spec.by_output["y"] = Tolerance{};
    OracleModel oracle = build_oracle(m, spec);

    // settles inside the 50 ms window: fine, even with transient values
    CHECK(check_tolerant(oracle, parse_trace_log("t=0 go=1\nt=0 y=1\n", m)).pass);
    CHECK(check_tolerant(oracle, parse_trace_log("t=0 go=1\nt=30 y=1\n", m)).pass);
    CHECK(check_tolerant(oracle,
                         parse_trace_log("t=0 go=1\nt=10 y=1\nt=20 y=0\nt=45 y=1\n", m))
              .pass);
    // still undefined-valued after the window: violation
    CHECK(!check_tolerant(oracle, parse_trace_log("t=0 go=1\nt=10 y=1\nt=60 y=0\n", m)).pass);
    // never settles
    CHECK(!check_tolerant(oracle, parse_trace_log("t=0 go=1\nt=70 y=1\n", m)).pass);
}
