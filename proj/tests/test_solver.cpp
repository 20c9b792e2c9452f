#include "doctest.h"

#include <set>

#include "mbtg/frontend.hpp"
#include "mbtg/solver.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

std::string witness_text(const Model& m, const Witness& w) {
    std::string out;
    for (const Stimulus& s : w.stimuli) {
        out += "t=" + std::to_string(s.time);
        for (const auto& [vi, v] : s.inputs)
            out += " " + m.var(vi).name + "=" + std::to_string(v);
        out += "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("solve_reach finds a shortest witness and validates by replay") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    SolveResult r = solver.solve_reach(parse_state_formula("EMER_ACTIVE", m));
    REQUIRE(r.status == SolveStatus::Sat);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->discharge_index == 2);  // stimulate, then react
    CHECK(r.witness->trace.size() == r.witness->stimuli.size() + 1);
    // replay: the witness stimuli reproduce the recorded trace
    CHECK(run_trace(m, r.witness->stimuli) == r.witness->trace);
    Expr goal = parse_state_formula("EMER_ACTIVE", m);
    CHECK(eval_expr(goal, m, r.witness->trace.back()) != 0);
}

TEST_CASE("solve on an eventuality uses minimal discharge position") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    SolveResult r = solver.solve(parse_ltl("F (FlashLeft == 1)", m));
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.witness->discharge_index == 3);
    CHECK(eval_on_trace(parse_ltl("F (FlashLeft == 1)", m), m, r.witness->trace));
}

TEST_CASE("timed goal: flashing cycle boundary is reachable in bound") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    SolveResult r = solver.solve(parse_ltl("F (OFF && elapsed(OFF) >= 320)", m));
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.witness->discharge_index <= 12);
    CHECK(r.witness->trace.back().time() >= 340 + 320);  // one on-phase + one off-phase
}

TEST_CASE("unreachable goals are unsat at bound") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    CHECK(solver.solve_reach(parse_state_formula("Voltage > 100", m)).status ==
          SolveStatus::UnsatAtBound);
    CHECK(solver.solve_reach(parse_state_formula("ON && Idle", m)).status ==
          SolveStatus::UnsatAtBound);  // states of one machine are exclusive
    CHECK(solver.solve(parse_ltl("F (FlashCtr > 3)", m)).status == SolveStatus::UnsatAtBound);
}

TEST_CASE("tiny budget reports BudgetExceeded, and solve_bounded restores it") {
    const Model& m = fixtures::corpus();
    SolverConfig cfg;
    cfg.budget = 10;
    Solver starved(m, cfg);
    CHECK(starved.solve(parse_ltl("F (OFF && elapsed(OFF) >= 320)", m)).status ==
          SolveStatus::BudgetExceeded);

    Solver solver(m, SolverConfig{});
    CHECK(solver.solve_bounded(parse_ltl("F (OFF && elapsed(OFF) >= 320)", m), 10).status ==
          SolveStatus::BudgetExceeded);
    CHECK(solver.config().budget == SolverConfig{}.budget);
    // the full budget is available again afterwards
    CHECK(solver.solve(parse_ltl("F (OFF && elapsed(OFF) >= 320)", m)).status ==
          SolveStatus::Sat);
}

TEST_CASE("conjunctions of eventualities are chained") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    LtlFormula f = parse_ltl("F (EMER_ACTIVE) && F (TURN_IND_OVERRIDE)", m);
    SolveResult r = solver.solve(f);
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(eval_on_trace(parse_ltl("F (EMER_ACTIVE)", m), m, r.witness->trace));
    CHECK(eval_on_trace(parse_ltl("F (TURN_IND_OVERRIDE)", m), m, r.witness->trace));
    CHECK(run_trace(m, r.witness->stimuli) == r.witness->trace);
}

TEST_CASE("solver output is deterministic") {
    const Model& m = fixtures::corpus();
    std::string first, second;
    for (std::string* out : {&first, &second}) {
        Solver solver(m, SolverConfig{});
        SolveResult r = solver.solve(parse_ltl("F (TURN_IND_OVERRIDE)", m));
        REQUIRE(r.status == SolveStatus::Sat);
        *out = witness_text(m, r.witness.value());
    }
    CHECK(first == second);
    CHECK(!first.empty());
}

TEST_CASE("reach results are shared across queries on one solver") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    SolveResult a = solver.solve_reach(parse_state_formula("OFF && elapsed(OFF) >= 320", m));
    REQUIRE(a.status == SolveStatus::Sat);
    // the second query is answered from the cached reachable set
    SolveResult b = solver.solve_reach(parse_state_formula("OFF", m));
    REQUIRE(b.status == SolveStatus::Sat);
    CHECK(b.witness->discharge_index <= a.witness->discharge_index);
}

TEST_CASE("solve agrees with brute force on the tiny model") {
    const Model& m = fixtures::tiny();
    // brute force: all input assignments, zero-delay steps, depth <= k_max+1
    // (the solver may discharge at the trailing position)
    std::set<std::vector<Value>> seen;
    std::vector<Valuation> frontier{initial_valuation(m)};
    seen.insert(frontier[0].slots);
    std::vector<Valuation> all = frontier;
    for (int depth = 0; depth < 7; ++depth) {
        std::vector<Valuation> next;
        for (const Valuation& v : frontier)
            for (Value a = 0; a <= 1; ++a)
                for (Value b = 0; b <= 3; ++b) {
                    Stimulus s;
                    s.time = v.time();
                    s.inputs[m.var_index("a")] = a;
                    s.inputs[m.var_index("b")] = b;
                    StepResult r = step(m, v, s);
                    if (seen.insert(r.post.slots).second) {
                        next.push_back(r.post);
                        all.push_back(r.post);
                    }
                }
        frontier = std::move(next);
    }

    SolverConfig cfg;
    cfg.k_max = 6;
    for (const char* text : {"y == 1", "c == 3", "S1 && y == 0", "c == 2 && a == 0",
                             "y == 1 && b == 0", "S0 && c == 3"}) {
        Expr goal = parse_state_formula(text, m);
        bool brute = false;
        for (const Valuation& v : all)
            if (eval_expr(goal, m, v) != 0) brute = true;
        Solver solver(m, cfg);
        SolveResult r = solver.solve_reach(goal);
        CHECK(r.status != SolveStatus::BudgetExceeded);
        CHECK((r.status == SolveStatus::Sat) == brute);
    }
}
