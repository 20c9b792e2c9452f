#include "doctest.h"

#include <random>

#include "mbtg/frontend.hpp"
#include "mbtg/ltl.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

Model two_bool() {
    return parse_model(R"(model two {
      in x : bool init 0
      in y : bool init 0
      machine M { state S initial { } }
    })", "two.mbt");
}

LtlFormula random_formula(std::mt19937& gen, int depth) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 9);
    auto atom = [&] {
        std::uniform_int_distribution<int> bit(0, 1);
        return LtlFormula::make_atom(Expr::binary(
            ExprKind::Eq, Expr::var(bit(gen) ? "x" : "y"), Expr::constant(bit(gen))));
    };
    switch (pick(gen)) {
        case 0:
        case 1: return atom();
        case 2: return LtlFormula::unary(LtlKind::Not, random_formula(gen, depth - 1));
        case 3: return LtlFormula::binary(LtlKind::And, random_formula(gen, depth - 1),
                                          random_formula(gen, depth - 1));
        case 4: return LtlFormula::binary(LtlKind::Or, random_formula(gen, depth - 1),
                                          random_formula(gen, depth - 1));
        case 5: return LtlFormula::unary(LtlKind::Next, random_formula(gen, depth - 1));
        case 6: return LtlFormula::unary(LtlKind::Globally, random_formula(gen, depth - 1));
        case 7: return LtlFormula::unary(LtlKind::Finally, random_formula(gen, depth - 1));
        case 8: return LtlFormula::binary(LtlKind::Until, random_formula(gen, depth - 1),
                                          random_formula(gen, depth - 1));
        default: return LtlFormula::binary(LtlKind::WeakUntil, random_formula(gen, depth - 1),
                                           random_formula(gen, depth - 1));
    }
}

std::vector<Valuation> random_trace(const Model& m, std::mt19937& gen, int len) {
    std::uniform_int_distribution<int> bit(0, 1);
    int xs = m.var_slot[static_cast<size_t>(m.var_index("x"))];
    int ys = m.var_slot[static_cast<size_t>(m.var_index("y"))];
    std::vector<Valuation> tr;
    Valuation v = initial_valuation(m);
    for (int i = 0; i < len; ++i) {
        v.slots[0] = i;
        v.slots[static_cast<size_t>(xs)] = bit(gen);
        v.slots[static_cast<size_t>(ys)] = bit(gen);
        tr.push_back(v);
    }
    return tr;
}

bool nnf_clean(const LtlFormula& f) {
    if (f.kind == LtlKind::Not && f.kids[0].kind != LtlKind::Atom) return false;
    if (f.kind == LtlKind::Until || f.kind == LtlKind::WeakUntil) {
        // U/W survive nnf; only their operands must stay clean
    }
    for (const LtlFormula& k : f.kids)
        if (!nnf_clean(k)) return false;
    return true;
}

}  // namespace

TEST_CASE("nnf pushes negation to atoms and preserves finite-trace truth") {
    Model m = two_bool();
    std::mt19937 gen(20240811);
    for (int iter = 0; iter < 2000; ++iter) {
        LtlFormula f = random_formula(gen, 3);
        bind_formula(m, f);
        LtlFormula g = nnf(f);
        CHECK(nnf_clean(g));
        std::uniform_int_distribution<int> len(1, 5);
        std::vector<Valuation> tr = random_trace(m, gen, len(gen));
        CHECK(eval_on_trace(f, m, tr) == eval_on_trace(g, m, tr));
    }
}

TEST_CASE("until duality: !(a U b) == (!b) W (!a && !b) on finite traces") {
    Model m = two_bool();
    LtlFormula lhs = parse_ltl("! (x == 1 U y == 1)", m);
    LtlFormula rhs = parse_ltl("(y == 0) W (x == 0 && y == 0)", m);
    std::mt19937 gen(99);
    for (int iter = 0; iter < 500; ++iter) {
        std::uniform_int_distribution<int> len(1, 5);
        std::vector<Valuation> tr = random_trace(m, gen, len(gen));
        CHECK(eval_on_trace(lhs, m, tr) == eval_on_trace(rhs, m, tr));
    }
}

TEST_CASE("is_safety_ltl accepts the G/W/X fragment and rejects eventualities") {
    Model m = two_bool();
    CHECK(is_safety_ltl(nnf(parse_ltl("G (x == 0)", m))));
    CHECK(is_safety_ltl(nnf(parse_ltl("! F (x == 1)", m))));  // == G !x
    CHECK(is_safety_ltl(nnf(parse_ltl("x == 0 W y == 1", m))));
    CHECK(is_safety_ltl(nnf(parse_ltl("G X (x == 0 || y == 1)", m))));
    CHECK(!is_safety_ltl(nnf(parse_ltl("F (x == 1)", m))));
    CHECK(!is_safety_ltl(nnf(parse_ltl("x == 0 U y == 1", m))));
    CHECK(!is_safety_ltl(nnf(parse_ltl("! G (x == 0)", m))));  // == F !x
}

TEST_CASE("dnf_disjuncts splits F over top-level disjunction") {
    Model m = two_bool();
    std::vector<LtlFormula> ds = dnf_disjuncts(parse_ltl("(F (x == 1)) || (F (y == 1))", m));
    CHECK(ds.size() == 2);
    ds = dnf_disjuncts(parse_ltl("G (x == 0)", m));
    CHECK(ds.size() == 1);
    // F distributes over a disjunctive body
    ds = dnf_disjuncts(parse_ltl("F (x == 1 || y == 1)", m));
    CHECK(ds.size() == 2);

    // budget: a wide disjunction blows the disjunct limit
    std::string wide = "(F (x == 1))";
    for (int i = 0; i < 70; ++i) wide += " || (F (y == 1))";
    CHECK_THROWS_AS(dnf_disjuncts(parse_ltl(wide, m), 64), DnfBudgetExceeded);
}

TEST_CASE("expand_bmc orders instances by discharge position") {
    Model m = two_bool();
    std::vector<BmcInstance> insts = expand_bmc(nnf(parse_ltl("F (x == 1)", m)), 4);
    REQUIRE(insts.size() == 6);  // discharge positions 0..n+1
    for (size_t i = 0; i < insts.size(); ++i) {
        CHECK(insts[i].discharge_index == static_cast<int>(i));
        CHECK(insts[i].length() <= 6);
    }
    // G has no eventuality to discharge: a single instance
    CHECK(expand_bmc(nnf(parse_ltl("G (x == 0)", m)), 4).size() == 1);
}

TEST_CASE("expand_bmc satisfaction equals eval_on_trace (unit-sized sample)") {
    Model m = two_bool();
    std::mt19937 gen(5);
    for (int iter = 0; iter < 1000; ++iter) {
        LtlFormula f = random_formula(gen, 3);
        bind_formula(m, f);
        std::uniform_int_distribution<int> len(2, 6);
        std::vector<Valuation> tr = random_trace(m, gen, len(gen));
        const int n = static_cast<int>(tr.size()) - 2;
        bool bmc = false;
        for (const BmcInstance& inst : expand_bmc(nnf(f), n))
            if (inst.length() <= static_cast<int>(tr.size()) &&
                eval_pos_formula(inst.goal, m, tr)) {
                bmc = true;
                break;
            }
        CHECK(bmc == eval_on_trace(f, m, tr));
    }
}

TEST_CASE("ltl printing round-trips through the parser") {
    const Model& m = fixtures::corpus();
    for (const char* text : {"F (OFF && elapsed(OFF) >= 320)",
                             "G (FlashLeft == 0 || Voltage > 80)",
                             "EmerFlash == 0 U TURN_IND_OVERRIDE",
                             "X (EMER_OFF W EmerFlash == 1)"}) {
        LtlFormula f = parse_ltl(text, m);
        LtlFormula g = parse_ltl(to_string(f), m);
        CHECK(ltl_equal(f, g));
        CHECK(to_string(f) == to_string(g));
    }
}
