#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mbtg/expr.hpp"

namespace mbtg {

struct Model;
struct Valuation;

enum class LtlKind { Atom, Not, And, Or, Next, Globally, Finally, Until, WeakUntil };

struct LtlFormula {
    LtlKind kind = LtlKind::Atom;
    Expr atom;  // valid iff kind == Atom
    std::vector<LtlFormula> kids;

    static LtlFormula make_atom(Expr e);
    static LtlFormula unary(LtlKind k, LtlFormula f);
    static LtlFormula binary(LtlKind k, LtlFormula a, LtlFormula b);
};

bool ltl_equal(const LtlFormula& a, const LtlFormula& b);
std::string to_string(const LtlFormula& f);

/// Negation normal form: negation only on atoms, U/W rewritten by duality.
LtlFormula nnf(const LtlFormula& f);

/// Syntactic SafetyLTL check on an NNF formula: only literals, and/or, X, G, W.
bool is_safety_ltl(const LtlFormula& f);

struct UnsupportedFormula : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DnfBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Top-level disjunctive form used by traceability: pushes F over ∨ and
/// distributes top-level ∨ only. Throws DnfBudgetExceeded above `budget`
/// disjuncts.
std::vector<LtlFormula> dnf_disjuncts(const LtlFormula& f, size_t budget = 64);

// ---------------------------------------------------------------------------
// Bounded step semantics
// ---------------------------------------------------------------------------

/// Formula over trace positions; leaves constrain a single position with a
/// state formula.
struct PosFormula {
    enum Kind { True, False, PosAtom, AndNode, OrNode } kind = True;
    int pos = 0;
    Expr atom;
    std::vector<PosFormula> kids;

    static PosFormula tru() { return PosFormula{}; }
    static PosFormula fls() { PosFormula p; p.kind = False; return p; }
    static PosFormula at(int pos, Expr e);
    static PosFormula all(std::vector<PosFormula> kids);
    static PosFormula any(std::vector<PosFormula> kids);

    int max_pos() const;
};

struct BmcInstance {
    int bound = 0;            // n: step conjuncts run over i = 0..n
    int discharge_index = 0;  // position where the leading eventuality is met
    PosFormula goal;          // references positions 0..n+1 only
    int length() const { return std::max(goal.max_pos(), 0) + 1; }
};

/// Unrolls an NNF formula over traces s_0..s_{n+1}; instances are ordered by
/// increasing discharge position of the leading eventuality. Throws
/// UnsupportedFormula when the expansion exceeds `conjunct_budget` nodes.
std::vector<BmcInstance> expand_bmc(const LtlFormula& f, int bound,
                                    size_t conjunct_budget = 200000);

/// Finite-trace truth under the bounded step semantics (strong next; the
/// right operand of U must be discharged within the prefix).
bool eval_on_trace(const LtlFormula& f, const Model& model,
                   const std::vector<Valuation>& trace);

bool eval_pos_formula(const PosFormula& p, const Model& model,
                      const std::vector<Valuation>& trace);

}  // namespace mbtg
