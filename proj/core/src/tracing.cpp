#include "mbtg/tracing.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mbtg {

namespace {

size_t st(int i) { return static_cast<size_t>(i); }

Expr state_atom(const Model& m, int si) {
    Expr e = Expr::state(m.states[st(si)].path);
    e.sym = si;
    return e;
}

/// Boolean LTL structure (no temporal operators) folded into a state
/// formula; nullopt otherwise.
std::optional<Expr> fold_state_formula(const LtlFormula& f) {
    switch (f.kind) {
        case LtlKind::Atom:
            return f.atom;
        case LtlKind::Not: {
            std::optional<Expr> a = fold_state_formula(f.kids[0]);
            if (!a) return std::nullopt;
            return negate(*a);
        }
        case LtlKind::And:
        case LtlKind::Or: {
            std::optional<Expr> a = fold_state_formula(f.kids[0]);
            std::optional<Expr> b = fold_state_formula(f.kids[1]);
            if (!a || !b) return std::nullopt;
            return f.kind == LtlKind::And ? conj(std::move(*a), std::move(*b))
                                          : disj(std::move(*a), std::move(*b));
        }
        default:
            return std::nullopt;
    }
}

/// F⟨state formula⟩ body (boolean structure under F folded), or nullopt for
/// any other formula shape.
std::optional<Expr> finally_body(const LtlFormula& f) {
    if (f.kind == LtlKind::Finally) return fold_state_formula(f.kids[0]);
    return std::nullopt;
}

void flatten_conj(const Expr& e, std::vector<Expr>& out) {
    if (e.kind == ExprKind::And) {
        flatten_conj(e.kids[0], out);
        flatten_conj(e.kids[1], out);
        return;
    }
    out.push_back(e);
}

Expr rebuild_conj(const std::vector<Expr>& atoms) {
    Expr e = atoms.front();
    for (size_t i = 1; i < atoms.size(); ++i) e = conj(std::move(e), atoms[i]);
    return e;
}

/// Cheap static refutation of a conjunction: two activity atoms of the same
/// machine on different branches, or two different constants pinned to one
/// variable. Saves solver queries on the bulk of the pairwise combinations.
bool statically_contradictory(const Model& m, const Expr& body) {
    std::vector<Expr> atoms;
    flatten_conj(body, atoms);
    std::vector<int> states;
    std::map<int, Value> pinned;
    for (const Expr& a : atoms) {
        if (a.kind == ExprKind::StateRef && a.sym >= 0) states.push_back(a.sym);
        if (a.kind == ExprKind::Eq && a.kids[0].kind == ExprKind::VarRef &&
            a.kids[1].kind == ExprKind::Const) {
            auto [it, fresh] = pinned.emplace(a.kids[0].sym, a.kids[1].literal);
            if (!fresh && it->second != a.kids[1].literal) return true;
        }
    }
    for (size_t i = 0; i < states.size(); ++i)
        for (size_t j = i + 1; j < states.size(); ++j) {
            int a = states[i], b = states[j];
            if (m.states[static_cast<size_t>(a)].machine !=
                m.states[static_cast<size_t>(b)].machine)
                continue;
            if (!m.state_is_ancestor_or_self(a, b) && !m.state_is_ancestor_or_self(b, a))
                return true;
        }
    return false;
}

// ---------------------------------------------------------------------------
// Propositional entailment by cell enumeration
// ---------------------------------------------------------------------------

struct Dimension {
    enum Kind { Var, MachineState, Timer } kind = Var;
    int index = 0;                 // variable index / machine index / state index
    std::vector<Value> values;     // candidate values (basic state index for MachineState)
};

void collect_timer_consts(const Expr& e, std::map<int, std::vector<Value>>& out) {
    for (const Expr& k : e.kids) collect_timer_consts(k, out);
    if (e.kind == ExprKind::TimerElapsed && e.sym >= 0) out[e.sym];  // ensure the key exists
    switch (e.kind) {
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge: {
            const Expr& a = e.kids[0];
            const Expr& b = e.kids[1];
            if (a.kind == ExprKind::TimerElapsed && b.kind == ExprKind::Const && a.sym >= 0)
                out[a.sym].push_back(b.literal);
            if (b.kind == ExprKind::TimerElapsed && a.kind == ExprKind::Const && b.sym >= 0)
                out[b.sym].push_back(a.literal);
            break;
        }
        default:
            break;
    }
}

std::vector<Dimension> build_dimensions(const Model& m, const Expr& a, const Expr& b) {
    std::vector<Dimension> dims;

    // variables: full domain when small, else one point per constant-induced cell
    std::vector<int> vars;
    std::vector<Value> consts;
    for (const Expr* e : {&a, &b}) {
        for (const std::string& n : referenced_vars(*e)) {
            int vi = m.var_index(n);
            if (vi >= 0 && std::find(vars.begin(), vars.end(), vi) == vars.end()) vars.push_back(vi);
        }
        for (Value c : referenced_constants(*e)) consts.push_back(c);
    }
    for (int vi : vars) {
        const Domain& d = m.var(vi).domain;
        Dimension dim;
        dim.kind = Dimension::Var;
        dim.index = vi;
        if (d.high() - d.low() + 1 <= 16) {
            for (Value v = d.low(); v <= d.high(); ++v) dim.values.push_back(v);
        } else {
            auto add = [&](Value v) {
                if (d.contains(v) &&
                    std::find(dim.values.begin(), dim.values.end(), v) == dim.values.end())
                    dim.values.push_back(v);
            };
            add(d.low());
            for (Value c : consts) {
                add(c - 1);
                add(c);
                add(c + 1);
            }
            add(d.high());
        }
        dims.push_back(std::move(dim));
    }

    // referenced machines: exactly one active basic state each
    std::vector<int> machines;
    for (const Expr* e : {&a, &b})
        for (const std::string& n : referenced_states(*e)) {
            int si = m.state_index(n);
            if (si < 0) continue;
            int mi = m.states[st(si)].machine;
            if (std::find(machines.begin(), machines.end(), mi) == machines.end())
                machines.push_back(mi);
        }
    for (int mi : machines) {
        Dimension dim;
        dim.kind = Dimension::MachineState;
        dim.index = mi;
        for (int bs : m.machines[st(mi)].basic_states) dim.values.push_back(bs);
        dims.push_back(std::move(dim));
    }

    // referenced timers: one elapsed value per cell induced by the constants
    std::map<int, std::vector<Value>> timer_consts;
    collect_timer_consts(a, timer_consts);
    collect_timer_consts(b, timer_consts);
    for (auto& [si, cs] : timer_consts) {
        Dimension dim;
        dim.kind = Dimension::Timer;
        dim.index = si;
        auto add = [&](Value v) {
            if (v >= 0 && std::find(dim.values.begin(), dim.values.end(), v) == dim.values.end())
                dim.values.push_back(v);
        };
        add(0);
        for (Value c : cs) {
            add(c - 1);
            add(c);
            add(c + 1);
        }
        dims.push_back(std::move(dim));
    }
    return dims;
}

}  // namespace

bool prop_entails(const Model& m, const Expr& a, const Expr& b) {
    std::vector<Dimension> dims = build_dimensions(m, a, b);

    constexpr Value kAnchor = 1'000'000;
    Valuation v;
    v.slots.assign(st(m.slot_count), 0);
    v.slots[st(m.time_slot())] = kAnchor;

    std::vector<size_t> idx(dims.size(), 0);
    for (;;) {
        // apply the assignment
        for (size_t i = 0; i < dims.size(); ++i) {
            const Dimension& d = dims[i];
            Value val = d.values.empty() ? 0 : d.values[idx[i]];
            switch (d.kind) {
                case Dimension::Var:
                    v.slots[st(m.var_slot[st(d.index)])] = val;
                    break;
                case Dimension::MachineState:
                    for (int bs : m.machines[st(d.index)].basic_states)
                        v.slots[st(m.state_active_slot[st(bs)])] = (bs == val) ? 1 : 0;
                    break;
                case Dimension::Timer:
                    v.slots[st(m.timer_slot[st(d.index)])] = kAnchor - val;
                    break;
            }
        }
        if (eval_expr(a, m, v) != 0 && eval_expr(b, m, v) == 0) return false;

        size_t i = 0;
        for (; i < dims.size(); ++i) {
            if (!dims[i].values.empty() && ++idx[i] < dims[i].values.size()) break;
            idx[i] = 0;
        }
        if (i == dims.size()) break;
    }
    return true;
}

const char* to_string(LinkKind k) {
    switch (k) {
        case LinkKind::SatisfyElement: return "satisfy-element";
        case LinkKind::Implication: return "implication";
        case LinkKind::ConjunctionRefinement: return "conjunction-refinement";
        case LinkKind::PairwiseCombination: return "pairwise-combination";
    }
    return "?";
}

LtlFormula characterize(const Requirement& req, const Model& m) {
    if (req.constraint) return *req.constraint;
    if (req.links.empty())
        throw UnlinkedRequirement("requirement " + req.id +
                                  " has neither satisfy links nor a constraint");
    LtlFormula out;
    bool first = true;
    for (const ElementRef& ref : req.links) {
        Expr body;
        if (ref.kind == ElementRef::State) {
            body = state_atom(m, ref.index);
        } else {
            const Transition& t = m.transitions[st(ref.index)];
            body = conj(state_atom(m, t.source), t.guard);
        }
        LtlFormula part = LtlFormula::unary(LtlKind::Finally, LtlFormula::make_atom(std::move(body)));
        out = first ? std::move(part) : LtlFormula::binary(LtlKind::Or, std::move(out), std::move(part));
        first = false;
    }
    return out;
}

namespace {

struct Compiler {
    const Model& m;
    Solver& solver;
    CompileResult& res;

    struct ReqInfo {
        const Requirement* req;
        std::vector<LtlFormula> disjuncts;
    };
    std::vector<ReqInfo> reqs;

    void add_link(const std::string& req_id, int tc, LinkKind kind, const std::string& evidence) {
        auto& links = res.matrix.by_requirement[req_id];
        for (const TraceLink& l : links)
            if (l.test_case == tc) return;  // first-established link wins
        links.push_back({tc, kind, evidence});
    }

    bool linked(const std::string& req_id, int tc) const {
        auto it = res.matrix.by_requirement.find(req_id);
        if (it == res.matrix.by_requirement.end()) return false;
        for (const TraceLink& l : it->second)
            if (l.test_case == tc) return true;
        return false;
    }

    /// Finds an existing case with an expr-equal F body; -1 if none.
    int find_case_by_body(const Expr& body) const {
        for (size_t i = 0; i < res.cases.size(); ++i)
            if (std::optional<Expr> b = finally_body(res.cases[i].formula))
                if (expr_equal(*b, body)) return static_cast<int>(i);
        return -1;
    }

    /// Bounded satisfiability of Fa ∧ Fb: shared-witness and merged-goal fast
    /// paths, then a budget-capped chained search.
    bool conj_satisfiable(const Expr& a, const Expr& b) {
        SolveResult ra = solver.solve_reach(a);
        if (ra.status != SolveStatus::Sat) return false;
        SolveResult rb = solver.solve_reach(b);
        if (rb.status != SolveStatus::Sat) return false;
        for (const Valuation& s : ra.witness->trace)
            if (eval_expr(b, m, s) != 0) return true;
        for (const Valuation& s : rb.witness->trace)
            if (eval_expr(a, m, s) != 0) return true;
        if (solver.solve_reach(conj(a, b)).status == SolveStatus::Sat) return true;
        LtlFormula f = LtlFormula::binary(
            LtlKind::And, LtlFormula::unary(LtlKind::Finally, LtlFormula::make_atom(a)),
            LtlFormula::unary(LtlKind::Finally, LtlFormula::make_atom(b)));
        return solver.solve_bounded(f, 100000).status == SolveStatus::Sat;
    }

    int synthesize(const SymbolicTestCase& parent_case, int parent_id, LtlFormula formula,
                   int level, std::vector<std::string> added_vars) {
        SymbolicTestCase tc;
        tc.id = static_cast<int>(res.cases.size());
        tc.strategy = parent_case.strategy;
        tc.formula = std::move(formula);
        tc.covered = parent_case.covered;
        tc.refinement_level = level;
        res.cases.push_back(std::move(tc));
        res.meta.push_back({parent_id, std::move(added_vars)});
        return res.cases.back().id;
    }

    void rule1_satisfy_links(size_t ncases) {
        for (const ReqInfo& r : reqs)
            for (const ElementRef& ref : r.req->links)
                for (size_t ci = 0; ci < ncases; ++ci)
                    for (const ElementRef& cov : res.cases[ci].covered)
                        if (cov.kind == ref.kind && cov.index == ref.index)
                            add_link(r.req->id, static_cast<int>(ci), LinkKind::SatisfyElement,
                                     "element " + cov.text);
    }

    void rule2_implication(size_t first_case, size_t ncases) {
        for (const ReqInfo& r : reqs) {
            for (size_t di = 0; di < r.disjuncts.size(); ++di) {
                std::optional<Expr> b = finally_body(r.disjuncts[di]);
                if (!b) continue;
                for (size_t ci = first_case; ci < ncases; ++ci) {
                    std::optional<Expr> a = finally_body(res.cases[ci].formula);
                    if (!a) continue;
                    if (prop_entails(m, *a, *b))
                        add_link(r.req->id, static_cast<int>(ci), LinkKind::Implication,
                                 "entails disjunct " + std::to_string(di));
                }
            }
        }
    }

    void rule3_conjunction(size_t ncases) {
        for (const ReqInfo& r : reqs) {
            for (size_t di = 0; di < r.disjuncts.size(); ++di) {
                std::optional<Expr> b = finally_body(r.disjuncts[di]);
                if (!b) continue;
                for (size_t ci = 0; ci < ncases; ++ci) {
                    std::optional<Expr> a = finally_body(res.cases[ci].formula);
                    if (!a) continue;
                    if (prop_entails(m, *a, *b) || prop_entails(m, *b, *a)) continue;
                    if (!conj_satisfiable(*a, *b)) continue;
                    LtlFormula f = LtlFormula::binary(LtlKind::And, res.cases[ci].formula,
                                                      r.disjuncts[di]);
                    bool dup = false;
                    for (const SymbolicTestCase& existing : res.cases)
                        if (ltl_equal(existing.formula, f)) dup = true;
                    if (dup) continue;
                    std::vector<std::string> added;
                    std::vector<std::string> avars = referenced_vars(*a);
                    for (const std::string& n : referenced_vars(*b))
                        if (std::find(avars.begin(), avars.end(), n) == avars.end())
                            added.push_back(n);
                    int id = synthesize(res.cases[ci], static_cast<int>(ci), std::move(f), 1,
                                        std::move(added));
                    add_link(r.req->id, id, LinkKind::ConjunctionRefinement,
                             "refines tc" + std::to_string(ci) + " with disjunct " +
                                 std::to_string(di));
                }
            }
        }
    }

    // combination partners: interface and control-state-pairs cases
    std::vector<int> combination_partners(size_t ncases) const {
        std::vector<int> out;
        for (size_t ci = 0; ci < ncases; ++ci)
            if (res.cases[ci].refinement_level == 0 &&
                (res.cases[ci].strategy == Strategy::Interface ||
                 res.cases[ci].strategy == Strategy::ControlStatePairs) &&
                finally_body(res.cases[ci].formula))
                out.push_back(static_cast<int>(ci));
        return out;
    }

    void rule4_combination(size_t ncases, int level) {
        std::vector<int> partners = combination_partners(ncases);
        // implying cases of the previous level, per requirement
        struct Item {
            int ci;
            const ReqInfo* r;
        };
        std::vector<Item> implying;
        for (const ReqInfo& r : reqs)
            for (size_t ci = 0; ci < res.cases.size(); ++ci) {
                if (res.cases[ci].refinement_level != level - 1) continue;
                std::optional<Expr> a = finally_body(res.cases[ci].formula);
                if (!a) continue;
                bool ok = false;
                for (const LtlFormula& d : r.disjuncts)
                    if (std::optional<Expr> b = finally_body(d); b && prop_entails(m, *a, *b))
                        ok = true;
                if (ok) implying.push_back({static_cast<int>(ci), &r});
            }

        for (const Item& item : implying) {
            const Expr a = *finally_body(res.cases[st(item.ci)].formula);
            for (int pi : partners) {
                if (pi == item.ci) continue;
                const Expr b = *finally_body(res.cases[st(pi)].formula);
                std::vector<Expr> atoms;
                flatten_conj(a, atoms);
                size_t before = atoms.size();
                std::vector<Expr> batoms;
                flatten_conj(b, batoms);
                std::vector<std::string> added_vars;
                for (const Expr& ba : batoms) {
                    bool present = false;
                    for (size_t i = 0; i < before; ++i)
                        if (expr_equal(atoms[i], ba)) present = true;
                    if (present) continue;
                    for (const std::string& n : referenced_vars(ba))
                        if (std::find(added_vars.begin(), added_vars.end(), n) == added_vars.end())
                            added_vars.push_back(n);
                    atoms.push_back(ba);
                }
                if (atoms.size() == before) continue;  // nothing new
                Expr body = rebuild_conj(atoms);
                int existing = find_case_by_body(body);
                if (existing >= 0) {
                    if (!linked(item.r->req->id, existing))
                        add_link(item.r->req->id, existing, LinkKind::PairwiseCombination,
                                 "combines tc" + std::to_string(item.ci) + " with tc" +
                                     std::to_string(pi));
                    continue;
                }
                if (statically_contradictory(m, body)) continue;
                if (solver.solve_reach(body).status != SolveStatus::Sat) continue;
                LtlFormula f =
                    LtlFormula::unary(LtlKind::Finally, LtlFormula::make_atom(std::move(body)));
                int id = synthesize(res.cases[st(item.ci)], item.ci, std::move(f), level,
                                    added_vars);
                add_link(item.r->req->id, id, LinkKind::PairwiseCombination,
                         "combines tc" + std::to_string(item.ci) + " with tc" +
                             std::to_string(pi));
            }
        }
    }

    void run() {
        for (const Requirement& req : m.requirements)
            reqs.push_back({&req, dnf_disjuncts(characterize(req, m))});

        const size_t n0 = res.cases.size();
        res.meta.assign(n0, {});
        rule1_satisfy_links(n0);
        rule2_implication(0, n0);
        rule3_conjunction(n0);
        rule4_combination(n0, 1);
        rule4_combination(n0, 2);

        // reverse map and per-case requirement lists, in requirement order
        for (const Requirement& req : m.requirements) {
            auto it = res.matrix.by_requirement.find(req.id);
            if (it == res.matrix.by_requirement.end() || it->second.empty()) {
                res.matrix.uncovered.push_back(req.id);
                continue;
            }
            std::sort(it->second.begin(), it->second.end(),
                      [](const TraceLink& x, const TraceLink& y) { return x.test_case < y.test_case; });
            for (const TraceLink& l : it->second) {
                res.matrix.by_test_case[l.test_case].push_back(req.id);
                res.cases[st(l.test_case)].requirements.push_back(req.id);
            }
        }
    }
};

}  // namespace

CompileResult compile_traceability(const Model& m, std::vector<SymbolicTestCase> cases,
                                   Solver& solver) {
    CompileResult res;
    res.cases = std::move(cases);
    for (size_t i = 0; i < res.cases.size(); ++i) res.cases[i].id = static_cast<int>(i);
    Compiler c{m, solver, res};
    c.run();
    return res;
}

namespace {

/// variable -> variables it can influence through guard/action chains
std::vector<std::set<int>> dataflow_reach(const Model& m) {
    const size_t n = m.variables.size();
    std::vector<std::set<int>> edge(n);
    for (const Transition& t : m.transitions) {
        std::set<int> sources;
        for (const std::string& s : referenced_vars(t.guard)) {
            int vi = m.var_index(s);
            if (vi >= 0) sources.insert(vi);
        }
        for (const ActionAssign& a : t.actions) {
            std::set<int> all = sources;
            for (const std::string& s : referenced_vars(a.rhs)) {
                int vi = m.var_index(s);
                if (vi >= 0) all.insert(vi);
            }
            if (a.var >= 0)
                for (int u : all) edge[st(u)].insert(a.var);
        }
    }
    // reflexive-transitive closure
    std::vector<std::set<int>> reach(n);
    for (size_t v = 0; v < n; ++v) reach[v].insert(static_cast<int>(v));
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t u = 0; u < n; ++u)
            for (int mid : edge[u])
                for (int w : reach[st(mid)])
                    if (reach[u].insert(w).second) changed = true;
    }
    return reach;
}

std::set<int> requirement_vars(const Model& m, const Requirement& req) {
    std::set<int> out;
    LtlFormula f = characterize(req, m);
    // walk atoms
    struct Walk {
        const Model& m;
        std::set<int>& out;
        void ltl(const LtlFormula& f) {
            if (f.kind == LtlKind::Atom) {
                for (const std::string& n : referenced_vars(f.atom)) {
                    int vi = m.var_index(n);
                    if (vi >= 0) out.insert(vi);
                }
                return;
            }
            for (const LtlFormula& k : f.kids) ltl(k);
        }
    } walk{m, out};
    walk.ltl(f);
    return out;
}

}  // namespace

std::vector<int> select_suite(const CompileResult& res, AssuranceLevel level, const Model& m) {
    std::vector<int> out;
    auto include = [&](int id) {
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    };

    if (level == AssuranceLevel::L45) {
        for (const Requirement& req : m.requirements) {
            auto it = res.matrix.by_requirement.find(req.id);
            if (it != res.matrix.by_requirement.end() && !it->second.empty())
                include(it->second.front().test_case);
        }
        return out;
    }

    auto base_strategies = [&]() -> std::vector<Strategy> {
        switch (level) {
            case AssuranceLevel::L3:
                return {Strategy::Interface, Strategy::BasicControlState};
            case AssuranceLevel::L2:
                return {Strategy::Interface, Strategy::Transition};
            default:
                return {Strategy::Interface, Strategy::ControlStatePairs, Strategy::Mcdc,
                        Strategy::HierarchicTransition};
        }
    }();
    auto in_base = [&](Strategy s) {
        return std::find(base_strategies.begin(), base_strategies.end(), s) !=
               base_strategies.end();
    };

    for (size_t i = 0; i < res.cases.size(); ++i)
        if (res.cases[i].refinement_level == 0 && in_base(res.cases[i].strategy))
            include(static_cast<int>(i));

    if (level == AssuranceLevel::L3 || level == AssuranceLevel::L2) {
        // conjunction refinements of base cases
        for (size_t i = 0; i < res.cases.size(); ++i) {
            if (res.cases[i].refinement_level != 1) continue;
            int p = res.meta[i].parent;
            if (p >= 0 && res.cases[st(p)].refinement_level == 0 &&
                in_base(res.cases[st(p)].strategy) &&
                res.cases[i].formula.kind == LtlKind::And)
                include(static_cast<int>(i));
        }
        return out;
    }

    // level 1: all first-level refinements linked to a requirement
    for (size_t i = 0; i < res.cases.size(); ++i)
        if (res.cases[i].refinement_level == 1 && !res.cases[i].requirements.empty())
            include(static_cast<int>(i));

    // level 1: second-level refinements only when every added conjunct
    // impacts a linked requirement through the variable data-flow relation
    std::vector<std::set<int>> reach = dataflow_reach(m);
    for (size_t i = 0; i < res.cases.size(); ++i) {
        if (res.cases[i].refinement_level != 2 || res.cases[i].requirements.empty()) continue;
        if (res.meta[i].added_vars.empty()) continue;  // state-only additions: no variable impact
        bool impact = true;
        for (const std::string& n : res.meta[i].added_vars) {
            int vi = m.var_index(n);
            if (vi < 0) {
                impact = false;
                break;
            }
            bool hits = false;
            for (const std::string& rid : res.cases[i].requirements) {
                for (const Requirement& req : m.requirements) {
                    if (req.id != rid) continue;
                    for (int w : requirement_vars(m, req))
                        if (reach[st(vi)].count(w)) hits = true;
                }
            }
            if (!hits) {
                impact = false;
                break;
            }
        }
        if (impact) include(static_cast<int>(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string export_matrix(const CompileResult& res) {
    std::ostringstream out;
    out << "# requirement\ttest case\tlink kind\tevidence\n";
    for (const auto& [rid, links] : res.matrix.by_requirement)
        for (const TraceLink& l : links)
            out << rid << "\ttc" << l.test_case << "\t" << to_string(l.kind) << "\t" << l.evidence
                << "\n";
    for (const std::string& rid : res.matrix.uncovered) out << rid << "\t-\tuncovered\t-\n";
    return out.str();
}

}  // namespace mbtg
