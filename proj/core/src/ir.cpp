#include "mbtg/ir.hpp"

#include <algorithm>
#include <map>

namespace mbtg {

int Model::var_index(const std::string& name) const {
    for (size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name) return static_cast<int>(i);
    return -1;
}

int Model::state_index(const std::string& name_or_path) const {
    int found = -1;
    for (const ControlState& s : states) {
        bool match = s.path == name_or_path || s.name == name_or_path;
        if (!match && name_or_path.find('.') != std::string::npos) {
            const std::string suffix = "." + name_or_path;
            match = s.path.size() > suffix.size() &&
                    s.path.compare(s.path.size() - suffix.size(), suffix.size(), suffix) == 0;
        }
        if (match) {
            if (found >= 0 && found != s.index) return -2;
            found = s.index;
        }
    }
    return found;
}

bool Model::state_is_ancestor_or_self(int anc, int desc) const {
    int cur = desc;
    while (cur != -1) {
        if (cur == anc) return true;
        cur = states[static_cast<size_t>(cur)].parent;
    }
    return false;
}

namespace {

void resolve_expr(Model& m, Expr& e, const std::string& where) {
    for (Expr& k : e.kids) resolve_expr(m, k, where);
    switch (e.kind) {
        case ExprKind::VarRef: {
            int vi = m.var_index(e.name);
            if (vi >= 0) {
                e.sym = vi;
                return;
            }
            int si = m.state_index(e.name);
            if (si >= 0) {
                e.kind = ExprKind::StateRef;
                e.sym = si;
                return;
            }
            // identifier naming a unique enum literal folds to its index
            Value lit = -1;
            int hits = 0;
            for (const VariableDecl& d : m.variables)
                if (d.domain.kind == Domain::Enum)
                    for (size_t i = 0; i < d.domain.values.size(); ++i)
                        if (d.domain.values[i] == e.name) {
                            if (hits == 0 || lit == static_cast<Value>(i)) {
                                lit = static_cast<Value>(i);
                                hits = hits ? hits : 1;
                            } else {
                                hits = 2;
                            }
                        }
            if (hits == 1) {
                e.kind = ExprKind::Const;
                e.literal = lit;
                return;
            }
            if (hits > 1) {
                m.bind_diagnostics.push_back({where, "ambiguous enum literal '" + e.name + "'"});
                return;
            }
            m.bind_diagnostics.push_back(
                {where, si == -2 ? "ambiguous state reference '" + e.name + "'"
                                 : "undeclared identifier '" + e.name + "'"});
            return;
        }
        case ExprKind::StateRef: {
            int si = m.state_index(e.name);
            if (si >= 0)
                e.sym = si;
            else
                m.bind_diagnostics.push_back(
                    {where, si == -2 ? "ambiguous state reference '" + e.name + "'"
                                     : "unknown state '" + e.name + "'"});
            return;
        }
        case ExprKind::TimerElapsed: {
            int si = m.state_index(e.name);
            if (si >= 0)
                e.sym = si;
            else
                m.bind_diagnostics.push_back({where, "unknown timer state '" + e.name + "'"});
            return;
        }
        default:
            return;
    }
}

void resolve_ltl(Model& m, LtlFormula& f, const std::string& where) {
    if (f.kind == LtlKind::Atom)
        resolve_expr(m, f.atom, where);
    else
        for (LtlFormula& k : f.kids) resolve_ltl(m, k, where);
}

void assign_paths(Model& m, int state, const std::string& prefix, int depth, int machine) {
    ControlState& s = m.states[static_cast<size_t>(state)];
    s.path = prefix.empty() ? s.name : prefix + "." + s.name;
    s.depth = depth;
    s.machine = machine;
    for (int c : s.children) assign_paths(m, c, s.path, depth + 1, machine);
}

void collect_basics(const Model& m, int state, std::vector<int>& out) {
    const ControlState& s = m.states[static_cast<size_t>(state)];
    if (s.is_basic()) {
        out.push_back(state);
        return;
    }
    for (int c : s.children) collect_basics(m, c, out);
}

}  // namespace

void bind(Model& m) {
    m.bind_diagnostics.clear();

    for (size_t mi = 0; mi < m.machines.size(); ++mi) {
        StateMachine& mach = m.machines[mi];
        if (mach.root < 0) throw BindError("machine '" + mach.name + "' has no root state");
        assign_paths(m, mach.root, "", 0, static_cast<int>(mi));
        mach.basic_states.clear();
        collect_basics(m, mach.root, mach.basic_states);
        if (mach.basic_states.empty())
            throw BindError("machine '" + mach.name + "' has no basic control state");
    }

    for (ControlState& s : m.states) {
        s.initial_child = -1;
        for (int c : s.children)
            if (m.states[static_cast<size_t>(c)].is_initial && s.initial_child < 0)
                s.initial_child = c;
    }

    m.basic_descendants.assign(m.states.size(), {});
    for (const ControlState& s : m.states)
        collect_basics(m, s.index, m.basic_descendants[static_cast<size_t>(s.index)]);

    // slot layout: t̂, variables, basic-state booleans, per-state timers
    m.var_slot.assign(m.variables.size(), -1);
    m.state_active_slot.assign(m.states.size(), -1);
    m.timer_slot.assign(m.states.size(), -1);
    int next = 1;
    for (size_t i = 0; i < m.variables.size(); ++i) m.var_slot[i] = next++;
    for (const ControlState& s : m.states)
        if (s.is_basic()) m.state_active_slot[static_cast<size_t>(s.index)] = next++;
    for (const ControlState& s : m.states) m.timer_slot[static_cast<size_t>(s.index)] = next++;
    m.slot_count = next;

    for (Transition& t : m.transitions) {
        t.depth = m.states[static_cast<size_t>(t.source)].depth;
        const std::string where = m.states[static_cast<size_t>(t.source)].path + " -> " +
                                  (t.target >= 0 ? m.states[static_cast<size_t>(t.target)].path
                                                 : std::string("?"));
        resolve_expr(m, t.guard, where);
        for (ActionAssign& a : t.actions) {
            int vi = m.var_index(a.var_name);
            if (vi >= 0)
                a.var = vi;
            else
                m.bind_diagnostics.push_back({where, "undeclared identifier '" + a.var_name + "'"});
            resolve_expr(m, a.rhs, where);
        }
    }

    for (Requirement& r : m.requirements) {
        if (r.constraint) resolve_ltl(m, *r.constraint, r.id);
    }
}

void bind_formula(const Model& model, Expr& e) {
    Model& m = const_cast<Model&>(model);
    const size_t before = m.bind_diagnostics.size();
    resolve_expr(m, e, "<formula>");
    if (m.bind_diagnostics.size() > before) {
        std::string msg = m.bind_diagnostics.back().message;
        m.bind_diagnostics.resize(before);
        throw BindError(msg);
    }
}

void bind_formula(const Model& model, LtlFormula& f) {
    Model& m = const_cast<Model&>(model);
    const size_t before = m.bind_diagnostics.size();
    resolve_ltl(m, f, "<formula>");
    if (m.bind_diagnostics.size() > before) {
        std::string msg = m.bind_diagnostics.back().message;
        m.bind_diagnostics.resize(before);
        throw BindError(msg);
    }
}

std::vector<Diagnostic> validate(const Model& m) {
    std::vector<Diagnostic> diags = m.bind_diagnostics;

    for (const VariableDecl& v : m.variables) {
        if (!v.domain.contains(v.initial))
            diags.push_back({v.name, "initial value out of domain"});
        if (v.domain.kind == Domain::Int && v.domain.lo > v.domain.hi)
            diags.push_back({v.name, "empty integer domain"});
    }

    for (const ControlState& s : m.states) {
        if (!s.is_basic()) {
            int initials = 0;
            for (int c : s.children)
                if (m.states[static_cast<size_t>(c)].is_initial) ++initials;
            if (initials != 1)
                diags.push_back({s.path, "composite state must have exactly one initial child"});
        }
    }

    // write-ownership: at most one machine writes any output/internal variable
    std::map<int, std::set<int>> writers;
    for (size_t mi = 0; mi < m.machines.size(); ++mi)
        for (int v : machine_writes(m, static_cast<int>(mi))) writers[v].insert(static_cast<int>(mi));
    for (const auto& [v, ws] : writers) {
        const VariableDecl& decl = m.variables[static_cast<size_t>(v)];
        if (decl.kind == VarKind::Input)
            diags.push_back({decl.name, "input variable assigned by machine"});
        if (ws.size() > 1) {
            std::string names;
            for (int w : ws) names += (names.empty() ? "" : ", ") + m.machines[static_cast<size_t>(w)].name;
            diags.push_back({decl.name, "written by multiple machines (" + names + ")"});
        }
    }

    // timer atoms in guards only for states on the path root -> source
    for (const Transition& t : m.transitions) {
        for (const std::string& tn : referenced_timers(t.guard)) {
            int si = m.state_index(tn);
            if (si >= 0 && !m.state_is_ancestor_or_self(si, t.source))
                diags.push_back({m.states[static_cast<size_t>(t.source)].path,
                                 "timer atom references state '" + tn +
                                     "' outside the path to the transition source"});
        }
    }

    for (const Requirement& r : m.requirements) {
        if (r.links.empty() && !r.constraint)
            diags.push_back({r.id, "requirement has neither satisfy links nor a constraint"});
        for (const ElementRef& ref : r.links)
            if (ref.index < 0) diags.push_back({r.id, "unresolved satisfy link '" + ref.text + "'"});
    }

    return diags;
}

Valuation initial_valuation(const Model& m) {
    Valuation v;
    v.slots.assign(static_cast<size_t>(m.slot_count), 0);
    for (size_t i = 0; i < m.variables.size(); ++i)
        v.slots[static_cast<size_t>(m.var_slot[i])] = m.variables[i].initial;
    for (const StateMachine& mach : m.machines) {
        int cur = mach.root;
        while (!m.states[static_cast<size_t>(cur)].is_basic()) {
            cur = m.states[static_cast<size_t>(cur)].initial_child;
            if (cur < 0) break;  // invalid model; validate() reports it
        }
        if (cur >= 0 && m.states[static_cast<size_t>(cur)].is_basic())
            v.slots[static_cast<size_t>(m.state_active_slot[static_cast<size_t>(cur)])] = 1;
    }
    return v;
}

Value eval_expr(const Expr& e, const Model& m, const Valuation& v) {
    switch (e.kind) {
        case ExprKind::Const:
            return e.literal;
        case ExprKind::VarRef:
            return v.slots[static_cast<size_t>(m.var_slot[static_cast<size_t>(e.sym)])];
        case ExprKind::StateRef: {
            for (int b : m.basic_descendants[static_cast<size_t>(e.sym)])
                if (v.slots[static_cast<size_t>(m.state_active_slot[static_cast<size_t>(b)])]) return 1;
            return 0;
        }
        case ExprKind::TimerElapsed:
            return v.time() - v.slots[static_cast<size_t>(m.timer_slot[static_cast<size_t>(e.sym)])];
        case ExprKind::Not:
            return eval_expr(e.kids[0], m, v) == 0 ? 1 : 0;
        case ExprKind::Neg:
            return -eval_expr(e.kids[0], m, v);
        case ExprKind::And:
            return (eval_expr(e.kids[0], m, v) != 0 && eval_expr(e.kids[1], m, v) != 0) ? 1 : 0;
        case ExprKind::Or:
            return (eval_expr(e.kids[0], m, v) != 0 || eval_expr(e.kids[1], m, v) != 0) ? 1 : 0;
        case ExprKind::Add:
            return eval_expr(e.kids[0], m, v) + eval_expr(e.kids[1], m, v);
        case ExprKind::Sub:
            return eval_expr(e.kids[0], m, v) - eval_expr(e.kids[1], m, v);
        case ExprKind::Min:
            return std::min(eval_expr(e.kids[0], m, v), eval_expr(e.kids[1], m, v));
        case ExprKind::Max:
            return std::max(eval_expr(e.kids[0], m, v), eval_expr(e.kids[1], m, v));
        case ExprKind::Eq:
            return eval_expr(e.kids[0], m, v) == eval_expr(e.kids[1], m, v) ? 1 : 0;
        case ExprKind::Ne:
            return eval_expr(e.kids[0], m, v) != eval_expr(e.kids[1], m, v) ? 1 : 0;
        case ExprKind::Lt:
            return eval_expr(e.kids[0], m, v) < eval_expr(e.kids[1], m, v) ? 1 : 0;
        case ExprKind::Le:
            return eval_expr(e.kids[0], m, v) <= eval_expr(e.kids[1], m, v) ? 1 : 0;
        case ExprKind::Gt:
            return eval_expr(e.kids[0], m, v) > eval_expr(e.kids[1], m, v) ? 1 : 0;
        case ExprKind::Ge:
            return eval_expr(e.kids[0], m, v) >= eval_expr(e.kids[1], m, v) ? 1 : 0;
    }
    return 0;
}

CompiledExpr::CompiledExpr(const Expr& e, const Model& m) {
    size_t depth = 0, max_depth = 0;
    // postfix emission; `depth` tracks the evaluation stack height
    auto emit = [&](auto&& self, const Expr& x) -> void {
        for (const Expr& k : x.kids) self(self, k);
        Ins ins;
        ins.kind = x.kind;
        switch (x.kind) {
            case ExprKind::Const:
                ins.lit = x.literal;
                break;
            case ExprKind::VarRef:
                ins.slot = m.var_slot[static_cast<size_t>(x.sym)];
                break;
            case ExprKind::StateRef:
                ins.begin = static_cast<int>(state_slots_.size());
                for (int b : m.basic_descendants[static_cast<size_t>(x.sym)])
                    state_slots_.push_back(m.state_active_slot[static_cast<size_t>(b)]);
                ins.end = static_cast<int>(state_slots_.size());
                break;
            case ExprKind::TimerElapsed:
                ins.slot = m.timer_slot[static_cast<size_t>(x.sym)];
                break;
            default:
                break;
        }
        depth -= x.kids.size();
        ++depth;
        max_depth = std::max(max_depth, depth);
        code_.push_back(ins);
    };
    emit(emit, e);
    stack_.resize(max_depth);
}

Value CompiledExpr::eval(const Valuation& v) const {
    Value* sp = stack_.data();
    for (const Ins& ins : code_) {
        switch (ins.kind) {
            case ExprKind::Const:
                *sp++ = ins.lit;
                break;
            case ExprKind::VarRef:
                *sp++ = v.slots[static_cast<size_t>(ins.slot)];
                break;
            case ExprKind::StateRef: {
                Value r = 0;
                for (int i = ins.begin; i < ins.end; ++i)
                    if (v.slots[static_cast<size_t>(state_slots_[static_cast<size_t>(i)])]) {
                        r = 1;
                        break;
                    }
                *sp++ = r;
                break;
            }
            case ExprKind::TimerElapsed:
                *sp++ = v.slots[0] - v.slots[static_cast<size_t>(ins.slot)];
                break;
            case ExprKind::Not:
                sp[-1] = sp[-1] == 0 ? 1 : 0;
                break;
            case ExprKind::Neg:
                sp[-1] = -sp[-1];
                break;
            default: {
                Value b = *--sp;
                Value a = sp[-1];
                Value r = 0;
                switch (ins.kind) {
                    case ExprKind::And: r = (a != 0 && b != 0) ? 1 : 0; break;
                    case ExprKind::Or: r = (a != 0 || b != 0) ? 1 : 0; break;
                    case ExprKind::Add: r = a + b; break;
                    case ExprKind::Sub: r = a - b; break;
                    case ExprKind::Min: r = std::min(a, b); break;
                    case ExprKind::Max: r = std::max(a, b); break;
                    case ExprKind::Eq: r = a == b ? 1 : 0; break;
                    case ExprKind::Ne: r = a != b ? 1 : 0; break;
                    case ExprKind::Lt: r = a < b ? 1 : 0; break;
                    case ExprKind::Le: r = a <= b ? 1 : 0; break;
                    case ExprKind::Gt: r = a > b ? 1 : 0; break;
                    case ExprKind::Ge: r = a >= b ? 1 : 0; break;
                    default: break;
                }
                sp[-1] = r;
            }
        }
    }
    return sp[-1];
}

std::optional<int> effective_priority(const Model& m, const Valuation& v, int machine) {
    const StateMachine& mach = m.machines[static_cast<size_t>(machine)];
    int best = -1;
    int best_depth = -1;
    bool tie = false;
    for (int ti : mach.transitions) {
        const Transition& t = m.transitions[static_cast<size_t>(ti)];
        bool source_active = false;
        for (int b : m.basic_descendants[static_cast<size_t>(t.source)])
            if (v.slots[static_cast<size_t>(m.state_active_slot[static_cast<size_t>(b)])]) {
                source_active = true;
                break;
            }
        if (!source_active) continue;
        if (eval_expr(t.guard, m, v) == 0) continue;
        if (t.depth > best_depth) {
            best = ti;
            best_depth = t.depth;
            tie = false;
        } else if (t.depth == best_depth) {
            tie = true;
        }
    }
    if (best < 0) return std::nullopt;
    if (tie)
        throw AmbiguityError("machine '" + mach.name +
                             "' has two enabled transitions of equal priority at depth " +
                             std::to_string(best_depth));
    return best;
}

std::set<int> machine_reads(const Model& m, int machine) {
    std::set<int> out;
    for (int ti : m.machines[static_cast<size_t>(machine)].transitions) {
        const Transition& t = m.transitions[static_cast<size_t>(ti)];
        for (const std::string& n : referenced_vars(t.guard)) {
            int vi = m.var_index(n);
            if (vi >= 0) out.insert(vi);
        }
        for (const ActionAssign& a : t.actions)
            for (const std::string& n : referenced_vars(a.rhs)) {
                int vi = m.var_index(n);
                if (vi >= 0) out.insert(vi);
            }
    }
    return out;
}

std::set<int> machine_writes(const Model& m, int machine) {
    std::set<int> out;
    for (int ti : m.machines[static_cast<size_t>(machine)].transitions)
        for (const ActionAssign& a : m.transitions[static_cast<size_t>(ti)].actions)
            if (a.var >= 0) out.insert(a.var);
    return out;
}

std::set<std::tuple<int, int, int>> writer_reader_pairs(const Model& m) {
    std::set<std::tuple<int, int, int>> out;
    const int n = static_cast<int>(m.machines.size());
    for (int w = 0; w < n; ++w) {
        std::set<int> writes = machine_writes(m, w);
        for (int r = 0; r < n; ++r) {
            if (r == w) continue;
            for (int v : machine_reads(m, r))
                if (writes.count(v)) out.insert({w, r, v});
        }
    }
    return out;
}

}  // namespace mbtg
