#include "doctest.h"

#include <set>

#include "mbtg/coverage.hpp"
#include "mbtg/frontend.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

// truth of `e` under a vector of condition values; conditions = maximal
// subtrees that are not ∧/∨/¬, deduplicated left to right
void collect_conditions(const Expr& e, std::vector<Expr>& out) {
    if (e.kind == ExprKind::And || e.kind == ExprKind::Or || e.kind == ExprKind::Not) {
        for (const Expr& k : e.kids) collect_conditions(k, out);
        return;
    }
    for (const Expr& c : out)
        if (expr_equal(c, e)) return;
    out.push_back(e);
}

bool eval_with(const Expr& e, const std::vector<Expr>& conds, const std::vector<bool>& vals) {
    if (e.kind == ExprKind::And)
        return eval_with(e.kids[0], conds, vals) && eval_with(e.kids[1], conds, vals);
    if (e.kind == ExprKind::Or)
        return eval_with(e.kids[0], conds, vals) || eval_with(e.kids[1], conds, vals);
    if (e.kind == ExprKind::Not) return !eval_with(e.kids[0], conds, vals);
    for (size_t i = 0; i < conds.size(); ++i)
        if (expr_equal(conds[i], e)) return vals[i];
    FAIL("condition not found");
    return false;
}

}  // namespace

TEST_CASE("basic control state coverage: one goal per basic state") {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> cases = gen(Strategy::BasicControlState, m);
    CHECK(cases.size() == 6);
    for (const SymbolicTestCase& c : cases) {
        CHECK(c.formula.kind == LtlKind::Finally);
        CHECK(c.refinement_level == 0);
        REQUIRE(c.covered.size() == 1);
        CHECK(c.covered[0].kind == ElementRef::State);
    }
}

TEST_CASE("transition coverage skips do-activities") {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> cases = gen(Strategy::Transition, m);
    CHECK(cases.size() == 9);  // 11 transitions, 2 of them do-loops
    for (const SymbolicTestCase& c : cases) {
        REQUIRE(c.covered.size() == 1);
        REQUIRE(c.covered[0].kind == ElementRef::Transition);
        CHECK(!m.transitions[static_cast<size_t>(c.covered[0].index)].is_do);
    }
}

TEST_CASE("hierarchic transition coverage folds high-level interrupts") {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> cases = gen(Strategy::HierarchicTransition, m);
    // 6 goals on FLASH_CTRL (Example-style) + 5 on OUTPUT_CTRL
    CHECK(cases.size() == 11);
    for (const SymbolicTestCase& c : cases) CHECK(c.formula.kind == LtlKind::Finally);
}

TEST_CASE("interface coverage enumerates input boundary values") {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> cases = gen(Strategy::Interface, m);
    CHECK(!cases.empty());
    // every case mentions exactly one input variable
    for (const SymbolicTestCase& c : cases) {
        REQUIRE(c.formula.kind == LtlKind::Finally);
        REQUIRE(c.formula.kids[0].kind == LtlKind::Atom);
        std::vector<std::string> vars = referenced_vars(c.formula.kids[0].atom);
        REQUIRE(vars.size() == 1);
        CHECK(m.var(m.var_index(vars[0])).kind == VarKind::Input);
    }
}

TEST_CASE("mcdc obligations have the independent-effect property") {
    const Model& m = fixtures::corpus();
    int checked = 0;
    for (const Transition& t : m.transitions) {
        std::vector<McdcObligation> obs = mcdc_obligations(t.guard);
        std::vector<Expr> conds;
        collect_conditions(t.guard, conds);
        for (const McdcObligation& ob : obs) {
            if (!ob.feasible) continue;
            REQUIRE(ob.vec_true.size() == conds.size());
            REQUIRE(ob.vec_false.size() == conds.size());
            // vectors differ exactly in the obligation's condition
            size_t diffs = 0, cond_at = conds.size();
            for (size_t i = 0; i < conds.size(); ++i)
                if (ob.vec_true[i] != ob.vec_false[i]) {
                    ++diffs;
                    cond_at = i;
                }
            CHECK(diffs == 1);
            CHECK(expr_equal(conds[cond_at], ob.condition));
            CHECK(ob.vec_true[cond_at]);
            // the decision flips
            CHECK(eval_with(t.guard, conds, ob.vec_true) !=
                  eval_with(t.guard, conds, ob.vec_false));
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("control state pairs covers reachable writer/reader combinations") {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> cases = gen(Strategy::ControlStatePairs, m);
    CHECK(!cases.empty());
    std::set<std::string> seen;
    for (const SymbolicTestCase& c : cases) {
        CHECK(c.covered.size() == 2);
        CHECK(seen.insert(to_string(c.formula)).second);  // no duplicates
    }
}

TEST_CASE("gen_all assigns globally unique stable ids") {
    const Model& m = fixtures::corpus();
    std::vector<SymbolicTestCase> a = gen_all(m);
    std::vector<SymbolicTestCase> b = gen_all(m);
    REQUIRE(a.size() == b.size());
    std::set<int> ids;
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(to_string(a[i].formula) == to_string(b[i].formula));
        CHECK(ids.insert(a[i].id).second);
    }
}

TEST_CASE("strategy names round-trip") {
    for (Strategy s : all_strategies())
        CHECK(strategy_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(strategy_from_string("nope"), std::invalid_argument);
}
