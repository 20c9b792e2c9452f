#include "doctest.h"

#include "mbtg/frontend.hpp"
#include "mbtg/procgen.hpp"
#include "mbtg/solver.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

int find_transition(const Model& m, const std::string& src, const std::string& dst) {
    for (const Transition& t : m.transitions)
        if (m.states[static_cast<size_t>(t.source)].name == src &&
            m.states[static_cast<size_t>(t.target)].name == dst && !t.is_do)
            return t.id;
    return -1;
}

Witness on_dwell_witness(const Model& m) {
    Solver solver(m, SolverConfig{});
    LtlFormula f = parse_ltl("F (ON && elapsed(ON) >= 340)", m);
    SolveResult res = solver.solve(f);
    REQUIRE(res.status == SolveStatus::Sat);
    return *res.witness;
}

}  // namespace

TEST_CASE("procedure print/parse round-trips bit-exactly") {
    const Model& m = fixtures::corpus();
    Witness w = on_dwell_witness(m);
    TestProcedure proc = emit(m, w, "tc_on_dwell", {3, 7}, TestProcedure::Strict);
    CHECK(proc.id == "tc_on_dwell");
    CHECK(proc.cases == std::vector<int>{3, 7});
    CHECK(proc.stimuli.size() == proc.expected.size());

    std::string text = print_procedure(m, proc);
    TestProcedure back = parse_procedure(text, m);
    CHECK(print_procedure(m, back) == text);
    CHECK(back.cases == proc.cases);
    CHECK(back.mode == proc.mode);
    // the file format carries times and I/O values; internal slots are
    // unspecified and need not survive the round trip
    REQUIRE(back.expected.size() == proc.expected.size());
    for (size_t i = 0; i < proc.expected.size(); ++i) {
        CHECK(back.expected[i].time() == proc.expected[i].time());
        for (size_t vi = 0; vi < m.variables.size(); ++vi) {
            if (m.variables[vi].kind == VarKind::Internal) continue;
            size_t slot = static_cast<size_t>(m.var_slot[vi]);
            CHECK(back.expected[i].slots[slot] == proc.expected[i].slots[slot]);
        }
    }
}

TEST_CASE("tolerant procedures carry their tolerances through the file format") {
    const Model& m = fixtures::corpus();
    ToleranceSpec spec;
    for (const VariableDecl& v : m.variables)
        if (v.kind == VarKind::Output) spec.by_output[v.name] = Tolerance{0, 1, 10, 5};
    Witness w = on_dwell_witness(m);
    TestProcedure proc = emit(m, w, "tc_tol", {0}, TestProcedure::Tolerant, &spec);
    std::string text = print_procedure(m, proc);
    TestProcedure back = parse_procedure(text, m);
    CHECK(back.mode == TestProcedure::Tolerant);
    CHECK(back.tolerances.by_output.at("FlashLeft").dlate == 10);
    CHECK(back.tolerances.by_output.at("FlashRight").dearly == 5);
    CHECK(print_procedure(m, back) == text);
}

TEST_CASE("executing a procedure against the unmutated model passes") {
    const Model& m = fixtures::corpus();
    Witness w = on_dwell_witness(m);

    TestProcedure strict = emit(m, w, "tc_s", {0}, TestProcedure::Strict);
    ExecutionResult rs = execute(strict, m, m);
    CHECK(rs.verdict.pass);
    CHECK(!rs.log.records.empty());

    ToleranceSpec zero;
    for (const VariableDecl& v : m.variables)
        if (v.kind == VarKind::Output) zero.by_output[v.name] = Tolerance{};
    TestProcedure tol = emit(m, w, "tc_t", {0}, TestProcedure::Tolerant, &zero);
    CHECK(execute(tol, m, m).verdict.pass);
}

TEST_CASE("a recorded conforming log passes external execution") {
    const Model& m = fixtures::corpus();
    Witness w = on_dwell_witness(m);
    TestProcedure proc = emit(m, w, "tc_ext", {0}, TestProcedure::Strict);
    TraceLog log = execute(proc, m, m).log;
    CHECK(execute(proc, m, log).verdict.pass);

    TraceLog tampered = log;
    bool changed = false;
    for (TraceLog::Record& r : tampered.records)
        if (!changed && r.var == "FlashLeft" && r.value == 1) {
            r.value = 0;
            changed = true;
        }
    REQUIRE(changed);
    CHECK(!execute(proc, m, tampered).verdict.pass);
}

TEST_CASE("mismatched initial inputs are an adapter failure, not a verdict") {
    const Model& m = fixtures::corpus();
    Witness w = on_dwell_witness(m);
    TestProcedure proc = emit(m, w, "tc_adapter", {0}, TestProcedure::Strict);
    Model sut = m;  // SUT boots with a different Voltage than the procedure assumes
    sut.variables[static_cast<size_t>(m.var_index("Voltage"))].initial = 42;
    CHECK_THROWS_AS(execute(proc, m, sut), AdapterFailure);
}

TEST_CASE("mutate produces a validating single-element mutant") {
    const Model& m = fixtures::corpus();
    int on_off = find_transition(m, "ON", "OFF");
    REQUIRE(on_off >= 0);

    Mutation mu;
    mu.kind = Mutation::ConstantTweak;
    mu.transition = on_off;
    mu.old_value = 340;
    mu.new_value = 300;
    Model mutant = mutate(m, mu);
    CHECK(validate(mutant).empty());
    CHECK(to_string(mutant.transitions[static_cast<size_t>(on_off)].guard) !=
          to_string(m.transitions[static_cast<size_t>(on_off)].guard));
    // only the targeted transition changed
    for (const Transition& t : m.transitions)
        if (t.id != on_off)
            CHECK(to_string(mutant.transitions[static_cast<size_t>(t.id)].guard) ==
                  to_string(t.guard));
}

TEST_CASE("mutate rejects impossible mutations") {
    const Model& m = fixtures::corpus();
    Mutation bad;
    bad.kind = Mutation::ConstantTweak;
    bad.transition = 999;
    CHECK_THROWS_AS(mutate(m, bad), InvalidMutation);

    Mutation miss;
    miss.kind = Mutation::ConstantTweak;
    miss.transition = find_transition(m, "ON", "OFF");
    miss.old_value = 12345;  // constant not present in the guard
    miss.new_value = 1;
    CHECK_THROWS_AS(mutate(m, miss), InvalidMutation);

    Mutation drop;
    drop.kind = Mutation::ActionDrop;
    drop.transition = find_transition(m, "ON", "OFF");
    drop.action_index = 99;
    CHECK_THROWS_AS(mutate(m, drop), InvalidMutation);
}

TEST_CASE("a dwell-time procedure kills the dwell-time mutant") {
    const Model& m = fixtures::corpus();
    Witness w = on_dwell_witness(m);
    TestProcedure proc = emit(m, w, "tc_kill", {0}, TestProcedure::Strict);

    Mutation mu;
    mu.kind = Mutation::ConstantTweak;
    mu.transition = find_transition(m, "ON", "OFF");
    mu.old_value = 340;
    mu.new_value = 300;
    Model mutant = mutate(m, mu);

    CHECK(execute(proc, m, m).verdict.pass);
    CHECK(!execute(proc, m, mutant).verdict.pass);
}
