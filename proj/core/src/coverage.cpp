#include "mbtg/coverage.hpp"

#include <algorithm>
#include <stdexcept>

namespace mbtg {

namespace {

size_t st(int i) { return static_cast<size_t>(i); }

Expr state_atom(const Model& m, int si) {
    Expr e = Expr::state(m.states[st(si)].path);
    e.sym = si;
    return e;
}

Expr var_atom(const Model& m, int vi) {
    Expr e = Expr::var(m.var(vi).name);
    e.sym = vi;
    return e;
}

Expr var_equals(const Model& m, int vi, Value v) {
    return Expr::binary(ExprKind::Eq, var_atom(m, vi), Expr::constant(v));
}

SymbolicTestCase make_case(Strategy s, Expr body, std::vector<ElementRef> covered) {
    SymbolicTestCase tc;
    tc.strategy = s;
    tc.formula = LtlFormula::unary(LtlKind::Finally, LtlFormula::make_atom(std::move(body)));
    tc.covered = std::move(covered);
    return tc;
}

ElementRef state_ref(const Model& m, int si) {
    return {ElementRef::State, si, m.states[st(si)].path};
}

ElementRef transition_ref(const Model& m, const Transition& t) {
    return {ElementRef::Transition, t.id,
            m.states[st(t.source)].path + " -> " + m.states[st(t.target)].path};
}

// --- per-strategy generators ------------------------------------------------

std::vector<SymbolicTestCase> gen_basic_states(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (const ControlState& s : m.states)
        if (s.is_basic())
            out.push_back(make_case(Strategy::BasicControlState, state_atom(m, s.index),
                                    {state_ref(m, s.index)}));
    return out;
}

std::vector<SymbolicTestCase> gen_transitions(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (const Transition& t : m.transitions) {
        if (t.is_do) continue;
        out.push_back(make_case(Strategy::Transition, conj(state_atom(m, t.source), t.guard),
                                {transition_ref(m, t)}));
    }
    return out;
}

std::vector<SymbolicTestCase> gen_hierarchic(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (const Transition& t : m.transitions) {
        if (t.is_do) continue;
        const ControlState& src = m.states[st(t.source)];
        if (src.is_basic()) {
            out.push_back(make_case(Strategy::HierarchicTransition,
                                    conj(state_atom(m, t.source), t.guard),
                                    {transition_ref(m, t)}));
            continue;
        }
        // replicate the outer transition per basic substate; negate the guards
        // of the deeper transitions that would preempt it there
        for (int b : m.basic_descendants[st(t.source)]) {
            Expr body = conj(state_atom(m, b), t.guard);
            for (const Transition& inner : m.transitions) {
                if (inner.is_do || inner.id == t.id) continue;
                if (inner.depth <= t.depth) continue;
                if (!m.state_is_ancestor_or_self(inner.source, b)) continue;
                body = conj(std::move(body), negate(inner.guard));
            }
            out.push_back(make_case(Strategy::HierarchicTransition, std::move(body),
                                    {transition_ref(m, t), state_ref(m, b)}));
        }
    }
    return out;
}

// conditions = maximal subtrees that are not ∧/∨/¬
void collect_conditions(const Expr& e, std::vector<Expr>& out) {
    if (e.kind == ExprKind::And || e.kind == ExprKind::Or || e.kind == ExprKind::Not) {
        for (const Expr& k : e.kids) collect_conditions(k, out);
        return;
    }
    for (const Expr& c : out)
        if (expr_equal(c, e)) return;
    out.push_back(e);
}

bool eval_decision(const Expr& e, const std::vector<Expr>& conds, const std::vector<bool>& a) {
    switch (e.kind) {
        case ExprKind::And:
            return eval_decision(e.kids[0], conds, a) && eval_decision(e.kids[1], conds, a);
        case ExprKind::Or:
            return eval_decision(e.kids[0], conds, a) || eval_decision(e.kids[1], conds, a);
        case ExprKind::Not:
            return !eval_decision(e.kids[0], conds, a);
        default:
            for (size_t i = 0; i < conds.size(); ++i)
                if (expr_equal(conds[i], e)) return a[i];
            return false;
    }
}

Expr condition_pattern(const std::vector<Expr>& conds, const std::vector<bool>& a) {
    Expr body;
    bool first = true;
    for (size_t i = 0; i < conds.size(); ++i) {
        Expr lit = a[i] ? conds[i] : negate(conds[i]);
        body = first ? std::move(lit) : conj(std::move(body), std::move(lit));
        first = false;
    }
    return body;
}

std::vector<SymbolicTestCase> gen_mcdc(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (const Transition& t : m.transitions) {
        if (t.is_do) continue;
        std::vector<Expr> bodies;  // dedup within the transition
        for (const McdcObligation& ob : mcdc_obligations(t.guard)) {
            if (!ob.feasible) continue;
            std::vector<Expr> conds;
            collect_conditions(t.guard, conds);
            for (const std::vector<bool>* vec : {&ob.vec_true, &ob.vec_false}) {
                Expr body = conj(state_atom(m, t.source), condition_pattern(conds, *vec));
                bool dup = false;
                for (const Expr& b : bodies)
                    if (expr_equal(b, body)) dup = true;
                if (dup) continue;
                bodies.push_back(body);
                out.push_back(
                    make_case(Strategy::Mcdc, std::move(body), {transition_ref(m, t)}));
            }
        }
    }
    return out;
}

void collect_var_boundaries(const Expr& e, std::vector<std::pair<int, Value>>& out) {
    for (const Expr& k : e.kids) collect_var_boundaries(k, out);
    switch (e.kind) {
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge: {
            const Expr& a = e.kids[0];
            const Expr& b = e.kids[1];
            if (a.kind == ExprKind::VarRef && b.kind == ExprKind::Const && a.sym >= 0)
                out.push_back({a.sym, b.literal});
            if (b.kind == ExprKind::VarRef && a.kind == ExprKind::Const && b.sym >= 0)
                out.push_back({b.sym, a.literal});
            break;
        }
        default:
            break;
    }
}

std::vector<SymbolicTestCase> gen_eqclass(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (const Transition& t : m.transitions) {
        if (t.is_do) continue;
        std::vector<std::pair<int, Value>> cmps;
        collect_var_boundaries(t.guard, cmps);
        std::vector<std::pair<int, Value>> emitted;
        for (const auto& [vi, c] : cmps) {
            const Domain& dom = m.var(vi).domain;
            for (Value v : {c - 1, c, c + 1}) {
                if (!dom.contains(v)) continue;
                if (std::find(emitted.begin(), emitted.end(), std::make_pair(vi, v)) !=
                    emitted.end())
                    continue;
                emitted.push_back({vi, v});
                out.push_back(make_case(Strategy::EqclassBoundary,
                                        conj(state_atom(m, t.source), var_equals(m, vi, v)),
                                        {transition_ref(m, t)}));
            }
        }
    }
    return out;
}

std::vector<SymbolicTestCase> gen_pairs(const Model& m) {
    std::vector<SymbolicTestCase> out;
    std::vector<std::pair<int, int>> machine_pairs;
    for (const auto& [w, r, v] : writer_reader_pairs(m)) {
        (void)v;
        if (std::find(machine_pairs.begin(), machine_pairs.end(), std::make_pair(w, r)) ==
            machine_pairs.end())
            machine_pairs.push_back({w, r});
    }
    for (const auto& [w, r] : machine_pairs)
        for (int sw : m.machines[st(w)].basic_states)
            for (int sr : m.machines[st(r)].basic_states)
                out.push_back(make_case(Strategy::ControlStatePairs,
                                        conj(state_atom(m, sw), state_atom(m, sr)),
                                        {state_ref(m, sw), state_ref(m, sr)}));
    return out;
}

std::vector<SymbolicTestCase> gen_interface(const Model& m) {
    constexpr Value kEnumerable = 16;
    std::vector<SymbolicTestCase> out;

    std::vector<std::pair<int, Value>> cmps;
    for (const Transition& t : m.transitions) collect_var_boundaries(t.guard, cmps);

    for (size_t vi = 0; vi < m.variables.size(); ++vi) {
        if (m.variables[vi].kind != VarKind::Input) continue;
        const Domain& dom = m.variables[vi].domain;
        std::vector<Value> values;
        if (dom.high() - dom.low() + 1 <= kEnumerable) {
            for (Value v = dom.low(); v <= dom.high(); ++v) values.push_back(v);
        } else {
            auto add = [&](Value v) {
                if (dom.contains(v) &&
                    std::find(values.begin(), values.end(), v) == values.end())
                    values.push_back(v);
            };
            add(dom.low());
            add(dom.high());
            for (const auto& [cv, c] : cmps)
                if (cv == static_cast<int>(vi)) {
                    add(c - 1);
                    add(c);
                    add(c + 1);
                }
            add((dom.low() + dom.high()) / 2);
        }
        for (Value v : values)
            out.push_back(make_case(Strategy::Interface,
                                    var_equals(m, static_cast<int>(vi), v), {}));
    }
    return out;
}

std::vector<SymbolicTestCase> gen_block(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (const StateMachine& mach : m.machines)
        out.push_back(make_case(Strategy::Block, state_atom(m, mach.root),
                                {state_ref(m, mach.root)}));
    return out;
}

}  // namespace

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::BasicControlState: return "basic-control-state";
        case Strategy::Transition: return "transition";
        case Strategy::Mcdc: return "mcdc";
        case Strategy::HierarchicTransition: return "hierarchic-transition";
        case Strategy::EqclassBoundary: return "eqclass-boundary";
        case Strategy::ControlStatePairs: return "control-state-pairs";
        case Strategy::Interface: return "interface";
        case Strategy::Block: return "block";
    }
    return "?";
}

std::vector<Strategy> all_strategies() {
    return {Strategy::BasicControlState, Strategy::Transition,        Strategy::Mcdc,
            Strategy::HierarchicTransition, Strategy::EqclassBoundary, Strategy::ControlStatePairs,
            Strategy::Interface,          Strategy::Block};
}

Strategy strategy_from_string(const std::string& name) {
    for (Strategy s : all_strategies())
        if (name == to_string(s)) return s;
    throw std::invalid_argument("unknown coverage strategy '" + name + "'");
}

std::vector<McdcObligation> mcdc_obligations(const Expr& decision) {
    std::vector<Expr> conds;
    collect_conditions(decision, conds);
    std::vector<McdcObligation> out;
    const size_t n = conds.size();
    if (n == 0) return out;

    for (size_t i = 0; i < n; ++i) {
        McdcObligation ob;
        ob.decision = decision;
        ob.condition = conds[i];
        ob.feasible = false;
        if (n <= 16) {
            for (size_t bits = 0; bits < (size_t{1} << n) && !ob.feasible; ++bits) {
                std::vector<bool> a(n);
                for (size_t j = 0; j < n; ++j) a[j] = (bits >> j) & 1;
                std::vector<bool> at = a, af = a;
                at[i] = true;
                af[i] = false;
                if (eval_decision(decision, conds, at) != eval_decision(decision, conds, af)) {
                    ob.feasible = true;
                    ob.vec_true = at;
                    ob.vec_false = af;
                }
            }
        }
        out.push_back(std::move(ob));
    }
    return out;
}

std::vector<SymbolicTestCase> gen(Strategy strategy, const Model& m) {
    std::vector<SymbolicTestCase> out;
    switch (strategy) {
        case Strategy::BasicControlState: out = gen_basic_states(m); break;
        case Strategy::Transition: out = gen_transitions(m); break;
        case Strategy::Mcdc: out = gen_mcdc(m); break;
        case Strategy::HierarchicTransition: out = gen_hierarchic(m); break;
        case Strategy::EqclassBoundary: out = gen_eqclass(m); break;
        case Strategy::ControlStatePairs: out = gen_pairs(m); break;
        case Strategy::Interface: out = gen_interface(m); break;
        case Strategy::Block: out = gen_block(m); break;
    }
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

std::vector<SymbolicTestCase> gen_all(const Model& m) {
    std::vector<SymbolicTestCase> out;
    for (Strategy s : all_strategies())
        for (SymbolicTestCase& tc : gen(s, m)) out.push_back(std::move(tc));
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

}  // namespace mbtg
