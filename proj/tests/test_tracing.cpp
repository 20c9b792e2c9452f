#include "doctest.h"

#include <algorithm>

#include "mbtg/coverage.hpp"
#include "mbtg/frontend.hpp"
#include "mbtg/tracing.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

const Requirement& req(const Model& m, const std::string& id) {
    for (const Requirement& r : m.requirements)
        if (r.id == id) return r;
    FAIL("no requirement ", id);
    static Requirement dummy;
    return dummy;
}

std::vector<SymbolicTestCase> corpus_cases() {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> cases;
    for (Strategy s : {Strategy::Interface, Strategy::BasicControlState,
                       Strategy::ControlStatePairs, Strategy::Transition,
                       Strategy::HierarchicTransition}) {
        std::vector<SymbolicTestCase> part = gen(s, m);
        for (SymbolicTestCase& c : part) {
            c.id = static_cast<int>(cases.size());
            cases.push_back(std::move(c));
        }
    }
    return cases;
}

}  // namespace

TEST_CASE("prop_entails on variables, states, and timers") {
    const Model& m = fixtures::corpus();
    auto E = [&](const char* t) { return parse_state_formula(t, m); };

    CHECK(prop_entails(m, E("FlashLeft == 1 && FlashRight == 0"), E("FlashLeft == 1")));
    CHECK(!prop_entails(m, E("FlashLeft == 1"), E("FlashLeft == 1 && FlashRight == 0")));
    CHECK(prop_entails(m, E("Voltage > 90"), E("Voltage > 80")));
    CHECK(!prop_entails(m, E("Voltage > 80"), E("Voltage > 90")));
    // control states: a basic state entails its parent's activity
    CHECK(prop_entails(m, E("EMER_ACTIVE"), E("EMER_ON")));
    CHECK(!prop_entails(m, E("EMER_ON"), E("EMER_ACTIVE")));
    // mutually exclusive siblings
    CHECK(prop_entails(m, E("EMER_ACTIVE"), E("!TURN_IND_OVERRIDE")));
    // timers
    CHECK(prop_entails(m, E("OFF && elapsed(OFF) >= 320 && TurnIndLvr == 1"),
                       E("OFF && elapsed(OFF) >= 320")));
    CHECK(!prop_entails(m, E("OFF && elapsed(OFF) >= 319"), E("OFF && elapsed(OFF) >= 320")));
    // tautology and contradiction
    CHECK(prop_entails(m, E("FlashLeft == 1 && FlashLeft == 0"), E("Voltage > 100")));
    CHECK(prop_entails(m, E("EMER_OFF"), E("TurnIndLvr >= 0")));
}

TEST_CASE("characterize prefers explicit constraints, else satisfy links") {
    const Model& m = fixtures::corpus();
    LtlFormula c1 = characterize(req(m, "REQ-001"), m);
    CHECK(to_string(c1) == to_string(*req(m, "REQ-001").constraint));

    // REQ-002 has transition links only: disjunction of F(source && guard)
    LtlFormula c2 = characterize(req(m, "REQ-002"), m);
    CHECK(c2.kind == LtlKind::Or);
    std::string text = to_string(c2);
    CHECK(text.find("elapsed(ON) >= 340") != std::string::npos);
    CHECK(text.find("elapsed(OFF) >= 320") != std::string::npos);

    Requirement orphan;
    orphan.id = "R-X";
    CHECK_THROWS_AS(characterize(orphan, m), UnlinkedRequirement);
}

TEST_CASE("compile_traceability covers all corpus requirements") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    CompileResult res = compile_traceability(m, corpus_cases(), solver);

    CHECK(res.matrix.uncovered.empty());
    CHECK(res.cases.size() >= corpus_cases().size());  // refinements were added
    CHECK(res.meta.size() == res.cases.size());

    // by_test_case is the inverse of by_requirement
    for (const auto& [rid, links] : res.matrix.by_requirement)
        for (const TraceLink& l : links) {
            const auto& rids = res.matrix.by_test_case.at(l.test_case);
            CHECK(std::find(rids.begin(), rids.end(), rid) != rids.end());
        }

    // links are mirrored into the cases themselves
    for (const auto& [tc, rids] : res.matrix.by_test_case)
        for (const std::string& rid : rids) {
            const auto& reqs = res.cases[static_cast<size_t>(tc)].requirements;
            CHECK(std::find(reqs.begin(), reqs.end(), rid) != reqs.end());
        }

    // REQ-002 is linked through the flashing-cycle transitions
    REQUIRE(res.matrix.by_requirement.count("REQ-002"));
    CHECK(res.matrix.by_requirement.at("REQ-002").size() >= 5);

    // refinements carry provenance
    for (size_t i = 0; i < res.cases.size(); ++i)
        if (res.cases[i].refinement_level > 0) {
            CHECK(res.meta[i].parent >= 0);
            CHECK(res.meta[i].parent < static_cast<int>(i));
        }
}

TEST_CASE("suite selection narrows with rising assurance level") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    CompileResult res = compile_traceability(m, corpus_cases(), solver);

    std::vector<int> l1 = select_suite(res, AssuranceLevel::L1, m);
    std::vector<int> l2 = select_suite(res, AssuranceLevel::L2, m);
    std::vector<int> l3 = select_suite(res, AssuranceLevel::L3, m);
    std::vector<int> l45 = select_suite(res, AssuranceLevel::L45, m);

    CHECK(!l1.empty());
    CHECK(!l2.empty());
    CHECK(!l3.empty());
    CHECK(std::is_sorted(l1.begin(), l1.end()));
    CHECK(l1.size() > l3.size());

    // level 4/5: one linked case per requirement
    CHECK(l45.size() <= m.requirements.size());
    CHECK(!l45.empty());
    for (int tc : l45) CHECK(res.matrix.by_test_case.count(tc));

    // deterministic
    CHECK(select_suite(res, AssuranceLevel::L1, m) == l1);
}

TEST_CASE("export_matrix is tabular and stable") {
    const Model& m = fixtures::corpus();
    Solver solver(m, SolverConfig{});
    CompileResult res = compile_traceability(m, corpus_cases(), solver);
    std::string a = export_matrix(res);
    CHECK(a.find("# requirement\ttest case\tlink kind\tevidence") == 0);
    CHECK(a.find("REQ-002\t") != std::string::npos);

    Solver solver2(m, SolverConfig{});
    CompileResult res2 = compile_traceability(m, corpus_cases(), solver2);
    CHECK(export_matrix(res2) == a);  // byte-identical across runs
}
