#include "mbtg/ltl.hpp"

#include <algorithm>
#include <optional>

#include "mbtg/ir.hpp"

namespace mbtg {

LtlFormula LtlFormula::make_atom(Expr e) {
    LtlFormula f;
    f.kind = LtlKind::Atom;
    f.atom = std::move(e);
    return f;
}

LtlFormula LtlFormula::unary(LtlKind k, LtlFormula f) {
    LtlFormula r;
    r.kind = k;
    r.kids.push_back(std::move(f));
    return r;
}

LtlFormula LtlFormula::binary(LtlKind k, LtlFormula a, LtlFormula b) {
    LtlFormula r;
    r.kind = k;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}

bool ltl_equal(const LtlFormula& a, const LtlFormula& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == LtlKind::Atom) return expr_equal(a.atom, b.atom);
    if (a.kids.size() != b.kids.size()) return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!ltl_equal(a.kids[i], b.kids[i])) return false;
    return true;
}

namespace {

int prec(LtlKind k) {
    switch (k) {
        case LtlKind::Until:
        case LtlKind::WeakUntil:
            return 1;
        case LtlKind::Or:
            return 2;
        case LtlKind::And:
            return 3;
        default:
            return 4;  // atoms and prefix operators
    }
}

void print(const LtlFormula& f, std::string& out, int parent_prec) {
    const int p = prec(f.kind);
    const bool parens = p < parent_prec;
    if (parens) out += "(";
    switch (f.kind) {
        case LtlKind::Atom: {
            // parenthesize atoms containing ||/&& so they survive a reparse at
            // the LTL level
            std::string s = to_string(f.atom);
            if (f.atom.kind == ExprKind::And || f.atom.kind == ExprKind::Or)
                out += "(" + s + ")";
            else
                out += s;
            break;
        }
        case LtlKind::Not:
            out += "! ";
            print(f.kids[0], out, 4);
            break;
        case LtlKind::Next:
            out += "X ";
            print(f.kids[0], out, 4);
            break;
        case LtlKind::Globally:
            out += "G ";
            print(f.kids[0], out, 4);
            break;
        case LtlKind::Finally:
            out += "F ";
            print(f.kids[0], out, 4);
            break;
        case LtlKind::And:
            print(f.kids[0], out, p);
            out += " && ";
            print(f.kids[1], out, p + 1);
            break;
        case LtlKind::Or:
            print(f.kids[0], out, p);
            out += " || ";
            print(f.kids[1], out, p + 1);
            break;
        case LtlKind::Until:
            print(f.kids[0], out, p + 1);
            out += " U ";
            print(f.kids[1], out, p);
            break;
        case LtlKind::WeakUntil:
            print(f.kids[0], out, p + 1);
            out += " W ";
            print(f.kids[1], out, p);
            break;
    }
    if (parens) out += ")";
}

}  // namespace

std::string to_string(const LtlFormula& f) {
    std::string out;
    print(f, out, 0);
    return out;
}

namespace {

LtlFormula nnf_pos(const LtlFormula& f);
LtlFormula nnf_neg(const LtlFormula& f);

LtlFormula nnf_pos(const LtlFormula& f) {
    switch (f.kind) {
        case LtlKind::Atom:
            return f;
        case LtlKind::Not:
            return nnf_neg(f.kids[0]);
        case LtlKind::And:
        case LtlKind::Or:
        case LtlKind::Until:
        case LtlKind::WeakUntil:
            return LtlFormula::binary(f.kind, nnf_pos(f.kids[0]), nnf_pos(f.kids[1]));
        case LtlKind::Next:
        case LtlKind::Globally:
        case LtlKind::Finally:
            return LtlFormula::unary(f.kind, nnf_pos(f.kids[0]));
    }
    return f;
}

LtlFormula nnf_neg(const LtlFormula& f) {
    switch (f.kind) {
        case LtlKind::Atom:
            return LtlFormula::make_atom(negate(f.atom));
        case LtlKind::Not:
            return nnf_pos(f.kids[0]);
        case LtlKind::And:
            return LtlFormula::binary(LtlKind::Or, nnf_neg(f.kids[0]), nnf_neg(f.kids[1]));
        case LtlKind::Or:
            return LtlFormula::binary(LtlKind::And, nnf_neg(f.kids[0]), nnf_neg(f.kids[1]));
        case LtlKind::Next:
            return LtlFormula::unary(LtlKind::Next, nnf_neg(f.kids[0]));
        case LtlKind::Globally:
            return LtlFormula::unary(LtlKind::Finally, nnf_neg(f.kids[0]));
        case LtlKind::Finally:
            return LtlFormula::unary(LtlKind::Globally, nnf_neg(f.kids[0]));
        case LtlKind::Until:
            // ¬(φ U ψ) = (¬ψ) W (¬φ ∧ ¬ψ)
            return LtlFormula::binary(
                LtlKind::WeakUntil, nnf_neg(f.kids[1]),
                LtlFormula::binary(LtlKind::And, nnf_neg(f.kids[0]), nnf_neg(f.kids[1])));
        case LtlKind::WeakUntil:
            // ¬(φ W ψ) = (¬ψ) U (¬φ ∧ ¬ψ)
            return LtlFormula::binary(
                LtlKind::Until, nnf_neg(f.kids[1]),
                LtlFormula::binary(LtlKind::And, nnf_neg(f.kids[0]), nnf_neg(f.kids[1])));
    }
    return f;
}

}  // namespace

LtlFormula nnf(const LtlFormula& f) { return nnf_pos(f); }

bool is_safety_ltl(const LtlFormula& f) {
    switch (f.kind) {
        case LtlKind::Atom:
            return true;
        case LtlKind::Not:
            return f.kids[0].kind == LtlKind::Atom;
        case LtlKind::And:
        case LtlKind::Or:
        case LtlKind::WeakUntil:
            return is_safety_ltl(f.kids[0]) && is_safety_ltl(f.kids[1]);
        case LtlKind::Next:
        case LtlKind::Globally:
            return is_safety_ltl(f.kids[0]);
        case LtlKind::Finally:
        case LtlKind::Until:
            return false;
    }
    return false;
}

std::vector<LtlFormula> dnf_disjuncts(const LtlFormula& f, size_t budget) {
    std::vector<LtlFormula> out;
    switch (f.kind) {
        case LtlKind::Or: {
            for (const LtlFormula& k : f.kids)
                for (LtlFormula& d : dnf_disjuncts(k, budget)) out.push_back(std::move(d));
            break;
        }
        case LtlKind::Finally: {
            // F(a ∨ b) = F a ∨ F b
            if (f.kids[0].kind == LtlKind::Or) {
                for (const LtlFormula& k : f.kids[0].kids)
                    for (LtlFormula& d :
                         dnf_disjuncts(LtlFormula::unary(LtlKind::Finally, k), budget))
                        out.push_back(std::move(d));
            } else {
                out.push_back(f);
            }
            break;
        }
        default:
            out.push_back(f);
    }
    if (out.size() > budget)
        throw DnfBudgetExceeded("disjunct budget exceeded: " + std::to_string(out.size()));
    return out;
}

// ---------------------------------------------------------------------------
// Positional formulas
// ---------------------------------------------------------------------------

PosFormula PosFormula::at(int pos, Expr e) {
    PosFormula p;
    p.kind = PosAtom;
    p.pos = pos;
    p.atom = std::move(e);
    return p;
}

PosFormula PosFormula::all(std::vector<PosFormula> kids) {
    // short-circuit and flatten
    std::vector<PosFormula> flat;
    for (PosFormula& k : kids) {
        if (k.kind == False) return fls();
        if (k.kind == True) continue;
        if (k.kind == AndNode)
            for (PosFormula& g : k.kids) flat.push_back(std::move(g));
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty()) return tru();
    if (flat.size() == 1) return std::move(flat[0]);
    PosFormula p;
    p.kind = AndNode;
    p.kids = std::move(flat);
    return p;
}

PosFormula PosFormula::any(std::vector<PosFormula> kids) {
    std::vector<PosFormula> flat;
    for (PosFormula& k : kids) {
        if (k.kind == True) return tru();
        if (k.kind == False) continue;
        if (k.kind == OrNode)
            for (PosFormula& g : k.kids) flat.push_back(std::move(g));
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty()) return fls();
    if (flat.size() == 1) return std::move(flat[0]);
    PosFormula p;
    p.kind = OrNode;
    p.kids = std::move(flat);
    return p;
}

int PosFormula::max_pos() const {
    if (kind == PosAtom) return pos;
    int m = -1;
    for (const PosFormula& k : kids) m = std::max(m, k.max_pos());
    return m;
}

namespace {

size_t pos_size(const PosFormula& p) {
    size_t n = 1;
    for (const PosFormula& k : p.kids) n += pos_size(k);
    return n;
}

struct Unroller {
    int last;  // last trace position (n+1)
    size_t budget;
    size_t used = 0;

    void charge(size_t n) {
        used += n;
        if (used > budget)
            throw UnsupportedFormula("bounded unrolling exceeds the conjunct budget");
    }

    // ⟨φ⟩_i^{k-i}: truth of φ at position i over the remaining prefix.
    PosFormula unroll(const LtlFormula& f, int i) {
        charge(1);
        switch (f.kind) {
            case LtlKind::Atom:
                return PosFormula::at(i, f.atom);
            case LtlKind::Not: {
                // NNF guarantees the operand is an atom
                if (f.kids[0].kind != LtlKind::Atom)
                    throw UnsupportedFormula("negation of a non-atomic subformula");
                return PosFormula::at(i, negate(f.kids[0].atom));
            }
            case LtlKind::And: {
                std::vector<PosFormula> kids;
                kids.push_back(unroll(f.kids[0], i));
                kids.push_back(unroll(f.kids[1], i));
                return PosFormula::all(std::move(kids));
            }
            case LtlKind::Or: {
                std::vector<PosFormula> kids;
                kids.push_back(unroll(f.kids[0], i));
                kids.push_back(unroll(f.kids[1], i));
                return PosFormula::any(std::move(kids));
            }
            case LtlKind::Next:
                // strong next: false beyond the last position
                if (i + 1 > last) return PosFormula::fls();
                return unroll(f.kids[0], i + 1);
            case LtlKind::Globally: {
                std::vector<PosFormula> kids;
                for (int j = i; j <= last; ++j) kids.push_back(unroll(f.kids[0], j));
                return PosFormula::all(std::move(kids));
            }
            case LtlKind::Finally: {
                std::vector<PosFormula> kids;
                for (int j = i; j <= last; ++j) kids.push_back(unroll(f.kids[0], j));
                return PosFormula::any(std::move(kids));
            }
            case LtlKind::Until: {
                // ∨_{j=i..last} (ψ at j ∧ ⋀_{l=i..j-1} φ at l); ψ must
                // discharge within the prefix
                std::vector<PosFormula> opts;
                for (int j = i; j <= last; ++j) {
                    std::vector<PosFormula> kids;
                    for (int l = i; l < j; ++l) kids.push_back(unroll(f.kids[0], l));
                    kids.push_back(unroll(f.kids[1], j));
                    opts.push_back(PosFormula::all(std::move(kids)));
                }
                return PosFormula::any(std::move(opts));
            }
            case LtlKind::WeakUntil: {
                // φ W ψ = (φ U ψ) ∨ G φ
                std::vector<PosFormula> opts;
                for (int j = i; j <= last; ++j) {
                    std::vector<PosFormula> kids;
                    for (int l = i; l < j; ++l) kids.push_back(unroll(f.kids[0], l));
                    kids.push_back(unroll(f.kids[1], j));
                    opts.push_back(PosFormula::all(std::move(kids)));
                }
                std::vector<PosFormula> glob;
                for (int j = i; j <= last; ++j) glob.push_back(unroll(f.kids[0], j));
                opts.push_back(PosFormula::all(std::move(glob)));
                return PosFormula::any(std::move(opts));
            }
        }
        return PosFormula::fls();
    }

    // Unrolls with the leading eventuality pinned at discharge position d.
    // Returns nullopt when the formula has no leading eventuality.
    std::optional<PosFormula> unroll_pinned(const LtlFormula& f, int i, int d) {
        switch (f.kind) {
            case LtlKind::Finally: {
                if (d < i || d > last) return PosFormula::fls();
                return unroll(f.kids[0], d);
            }
            case LtlKind::Until: {
                if (d < i || d > last) return PosFormula::fls();
                std::vector<PosFormula> kids;
                for (int l = i; l < d; ++l) kids.push_back(unroll(f.kids[0], l));
                kids.push_back(unroll(f.kids[1], d));
                return PosFormula::all(std::move(kids));
            }
            case LtlKind::And: {
                // pin inside the left conjunct when it carries the leading
                // eventuality, else the right one
                auto a = unroll_pinned(f.kids[0], i, d);
                if (a) {
                    std::vector<PosFormula> kids;
                    kids.push_back(std::move(*a));
                    kids.push_back(unroll(f.kids[1], i));
                    return PosFormula::all(std::move(kids));
                }
                auto b = unroll_pinned(f.kids[1], i, d);
                if (!b) return std::nullopt;
                std::vector<PosFormula> kids;
                kids.push_back(unroll(f.kids[0], i));
                kids.push_back(std::move(*b));
                return PosFormula::all(std::move(kids));
            }
            case LtlKind::Next:
                if (i + 1 > last) {
                    if (auto inner = unroll_pinned(f.kids[0], i + 1, d); inner)
                        return PosFormula::fls();
                    return std::nullopt;
                }
                return unroll_pinned(f.kids[0], i + 1, d);
            default:
                return std::nullopt;
        }
    }
};

}  // namespace

std::vector<BmcInstance> expand_bmc(const LtlFormula& f, int bound, size_t conjunct_budget) {
    const LtlFormula g = nnf(f);
    const int last = bound + 1;
    std::vector<BmcInstance> out;

    // push a top-level F over ∨ so each disjunct gets its own instance stream
    std::vector<LtlFormula> parts = dnf_disjuncts(g);

    for (const LtlFormula& part : parts) {
        Unroller u{last, conjunct_budget};
        std::optional<PosFormula> probe = u.unroll_pinned(part, 0, 0);
        if (probe) {
            for (int d = 0; d <= last; ++d) {
                Unroller ud{last, conjunct_budget};
                PosFormula goal = *ud.unroll_pinned(part, 0, d);
                if (goal.kind == PosFormula::False) continue;
                BmcInstance inst;
                inst.bound = bound;
                inst.discharge_index = d;
                inst.goal = std::move(goal);
                out.push_back(std::move(inst));
            }
        } else {
            Unroller ud{last, conjunct_budget};
            PosFormula goal = ud.unroll(part, 0);
            BmcInstance inst;
            inst.bound = bound;
            inst.discharge_index = 0;
            inst.goal = std::move(goal);
            out.push_back(std::move(inst));
        }
    }
    // instances ordered by increasing discharge position of the leading
    // eventuality
    std::stable_sort(out.begin(), out.end(), [](const BmcInstance& a, const BmcInstance& b) {
        return a.discharge_index < b.discharge_index;
    });
    return out;
}

bool eval_pos_formula(const PosFormula& p, const Model& model,
                      const std::vector<Valuation>& trace) {
    switch (p.kind) {
        case PosFormula::True:
            return true;
        case PosFormula::False:
            return false;
        case PosFormula::PosAtom:
            if (p.pos < 0 || static_cast<size_t>(p.pos) >= trace.size()) return false;
            return eval_expr(p.atom, model, trace[static_cast<size_t>(p.pos)]) != 0;
        case PosFormula::AndNode:
            for (const PosFormula& k : p.kids)
                if (!eval_pos_formula(k, model, trace)) return false;
            return true;
        case PosFormula::OrNode:
            for (const PosFormula& k : p.kids)
                if (eval_pos_formula(k, model, trace)) return true;
            return false;
    }
    return false;
}

namespace {

bool eval_at(const LtlFormula& f, const Model& m, const std::vector<Valuation>& trace, size_t i) {
    const size_t n = trace.size();
    switch (f.kind) {
        case LtlKind::Atom:
            return eval_expr(f.atom, m, trace[i]) != 0;
        case LtlKind::Not:
            return !eval_at(f.kids[0], m, trace, i);
        case LtlKind::And:
            return eval_at(f.kids[0], m, trace, i) && eval_at(f.kids[1], m, trace, i);
        case LtlKind::Or:
            return eval_at(f.kids[0], m, trace, i) || eval_at(f.kids[1], m, trace, i);
        case LtlKind::Next:
            return i + 1 < n && eval_at(f.kids[0], m, trace, i + 1);
        case LtlKind::Globally:
            for (size_t j = i; j < n; ++j)
                if (!eval_at(f.kids[0], m, trace, j)) return false;
            return true;
        case LtlKind::Finally:
            for (size_t j = i; j < n; ++j)
                if (eval_at(f.kids[0], m, trace, j)) return true;
            return false;
        case LtlKind::Until:
            for (size_t j = i; j < n; ++j) {
                if (eval_at(f.kids[1], m, trace, j)) return true;
                if (!eval_at(f.kids[0], m, trace, j)) return false;
            }
            return false;
        case LtlKind::WeakUntil:
            for (size_t j = i; j < n; ++j) {
                if (eval_at(f.kids[1], m, trace, j)) return true;
                if (!eval_at(f.kids[0], m, trace, j)) return false;
            }
            return true;  // G φ held on the whole prefix
    }
    return false;
}

}  // namespace

bool eval_on_trace(const LtlFormula& f, const Model& model, const std::vector<Valuation>& trace) {
    if (trace.empty()) return false;
    // The bounded step semantics is defined on negation normal form (negation
    // only on atoms, U/W rewritten by duality); normalizing first keeps
    // ¬X φ at the end of a finite trace consistent with the unrolled form.
    return eval_at(nnf(f), model, trace, 0);
}

}  // namespace mbtg
