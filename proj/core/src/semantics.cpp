#include "mbtg/semantics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mbtg {

namespace {

size_t st(int i) { return static_cast<size_t>(i); }

int active_basic(const Model& m, const Valuation& v, int machine) {
    for (int b : m.machines[st(machine)].basic_states)
        if (v.slots[st(m.state_active_slot[st(b)])]) return b;
    return -1;
}

/// Basic state reached by entering `state` and completing initial children.
int initial_completion(const Model& m, int state) {
    int cur = state;
    while (!m.states[st(cur)].is_basic()) {
        cur = m.states[st(cur)].initial_child;
        if (cur < 0) throw BindError("composite state without initial child");
    }
    return cur;
}

/// States entered when a transition targets `target` while the least common
/// ancestor with the source is `lca`: everything strictly below `lca` on the
/// path to the target, plus the target's initial completion chain.
void entered_states(const Model& m, int target, int lca, std::vector<int>& out) {
    // path lca -> target (exclusive of lca)
    std::vector<int> up;
    for (int cur = target; cur != lca && cur != -1; cur = m.states[st(cur)].parent)
        up.push_back(cur);
    std::reverse(up.begin(), up.end());
    for (int s : up) out.push_back(s);
    int cur = target;
    while (!m.states[st(cur)].is_basic()) {
        cur = m.states[st(cur)].initial_child;
        if (cur < 0) throw BindError("composite state without initial child");
        out.push_back(cur);
    }
}

int lca_of(const Model& m, int a, int b) {
    std::set<int> anc;
    for (int cur = a; cur != -1; cur = m.states[st(cur)].parent) anc.insert(cur);
    for (int cur = b; cur != -1; cur = m.states[st(cur)].parent)
        if (anc.count(cur)) return cur;
    return -1;
}

void apply_transition(const Model& m, const Valuation& pre, Valuation& post,
                      const Transition& t, int machine) {
    // actions: right-hand sides on the pre state
    for (const ActionAssign& a : t.actions) {
        Value v = eval_expr(a.rhs, m, pre);
        const Domain& dom = m.var(a.var).domain;
        if (!dom.contains(v))
            throw std::invalid_argument("assignment drives '" + m.var(a.var).name +
                                        "' out of its domain (" + std::to_string(v) + ")");
        post.slots[st(m.var_slot[st(a.var)])] = v;
    }

    // control state change: exit up to the LCA, enter down to the target's
    // initial completion; every entered state restarts its timer
    const int from = active_basic(m, pre, machine);
    int lca = lca_of(m, t.source, t.target);
    if (lca == t.target || lca == t.source) lca = m.states[st(lca)].parent;  // self/ancestor loop re-enters
    const int to = initial_completion(m, t.target);
    post.slots[st(m.state_active_slot[st(from)])] = 0;
    post.slots[st(m.state_active_slot[st(to)])] = 1;
    std::vector<int> entered;
    entered_states(m, t.target, lca, entered);
    for (int s : entered) post.slots[st(m.timer_slot[st(s)])] = post.time();
}

}  // namespace

StepResult step(const Model& m, const Valuation& pre, const Stimulus& stim) {
    if (stim.time < pre.time())
        throw std::invalid_argument("time must not decrease (t=" + std::to_string(stim.time) +
                                    " after t=" + std::to_string(pre.time()) + ")");

    // interleaved semantics: guards and action right-hand sides see the pre
    // state only; the stimulated inputs and the new time become visible in the
    // post state, one step before the machines can react to them
    StepResult r;
    r.post = pre;  // frame: everything holds unless a transition changes it
    r.post.slots[st(m.time_slot())] = stim.time;
    for (const auto& [vi, val] : stim.inputs) {
        const VariableDecl& decl = m.var(vi);
        if (decl.kind != VarKind::Input)
            throw std::invalid_argument("'" + decl.name + "' is not an input");
        if (!decl.domain.contains(val))
            throw std::invalid_argument("stimulus value " + std::to_string(val) +
                                        " outside the domain of '" + decl.name + "'");
        r.post.slots[st(m.var_slot[st(vi)])] = val;
    }

    r.fired.assign(m.machines.size(), -1);
    for (size_t mi = 0; mi < m.machines.size(); ++mi) {
        std::optional<int> ti = effective_priority(m, pre, static_cast<int>(mi));
        if (!ti) continue;
        r.fired[mi] = *ti;
        apply_transition(m, pre, r.post, m.transitions[st(*ti)], static_cast<int>(mi));
    }
    return r;
}

std::vector<Valuation> run_trace(const Model& m, const std::vector<Stimulus>& stimuli) {
    std::vector<Valuation> trace;
    trace.push_back(initial_valuation(m));
    for (const Stimulus& s : stimuli) trace.push_back(step(m, trace.back(), s).post);
    return trace;
}

namespace {

// elapsed(S) compared against c fires first at entry + c (>=, ==) or
// entry + c + 1 (>); both offsets are cheap enough to try
void deadline_offsets(const Expr& e, std::vector<std::pair<int, Value>>& out) {
    for (const Expr& k : e.kids) deadline_offsets(k, out);
    switch (e.kind) {
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge: {
            const Expr& a = e.kids[0];
            const Expr& b = e.kids[1];
            const Expr* timer = nullptr;
            const Expr* cst = nullptr;
            if (a.kind == ExprKind::TimerElapsed && b.kind == ExprKind::Const) timer = &a, cst = &b;
            if (b.kind == ExprKind::TimerElapsed && a.kind == ExprKind::Const) timer = &b, cst = &a;
            if (timer && timer->sym >= 0) {
                out.emplace_back(timer->sym, cst->literal);
                out.emplace_back(timer->sym, cst->literal + 1);
            }
            break;
        }
        default:
            break;
    }
}

}  // namespace

ReactiveRun run_reactive(const Model& m, const std::vector<Stimulus>& stimuli, Value horizon) {
    std::vector<std::pair<int, Value>> offsets;  // (state, elapsed) firing candidates
    for (const Transition& t : m.transitions) deadline_offsets(t.guard, offsets);
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    ReactiveRun run;
    run.trace.push_back(initial_valuation(m));

    auto commit = [&](const Stimulus& s) {
        StepResult r = step(m, run.trace.back(), s);
        if (r.post == run.trace.back()) return;  // no-op stutter, not observable
        run.trace.push_back(std::move(r.post));
        run.stimuli.push_back(s);
        run.fired.push_back(std::move(r.fired));
    };

    auto anything_enabled = [&](const Valuation& v) {
        for (size_t mi = 0; mi < m.machines.size(); ++mi)
            if (effective_priority(m, v, static_cast<int>(mi))) return true;
        return false;
    };

    size_t safety = 0;
    // urgent SUT: enabled transitions fire immediately (dt = 0); otherwise
    // time advances to the earliest deadline that enables one. `until` is
    // exclusive unless `closed`.
    auto drain = [&](Value until, bool closed) {
        for (;;) {
            if (++safety > 100000)
                throw std::runtime_error("reactive run exceeds 100000 steps (livelock?)");
            const Valuation& cur = run.trace.back();
            if (anything_enabled(cur)) {
                commit({cur.time(), {}});
                continue;
            }
            std::vector<Value> deadlines;
            for (auto [si, off] : offsets) {
                Value d = cur.slots[st(m.timer_slot[st(si)])] + off;
                if (d > cur.time() && (closed ? d <= until : d < until)) deadlines.push_back(d);
            }
            std::sort(deadlines.begin(), deadlines.end());
            deadlines.erase(std::unique(deadlines.begin(), deadlines.end()), deadlines.end());
            bool advanced = false;
            for (Value d : deadlines) {
                StepResult trial = step(m, cur, {d, {}});
                if (!anything_enabled(trial.post)) continue;
                run.trace.push_back(std::move(trial.post));
                run.stimuli.push_back({d, {}});
                run.fired.push_back(std::move(trial.fired));
                advanced = true;
                break;
            }
            if (!advanced) return;
        }
    };

    for (const Stimulus& s : stimuli) {
        drain(s.time, false);
        commit(s);
    }
    drain(horizon, true);
    return run;
}

// ---------------------------------------------------------------------------
// Transition relation
// ---------------------------------------------------------------------------

bool TransitionRelation::holds(const Valuation& pre, const Valuation& post) const {
    const Model& m = *model;
    if (post.time() < pre.time()) return false;

    // inputs are free but must stay in domain; other variables must be
    // explained by some machine or framed
    for (size_t vi = 0; vi < m.variables.size(); ++vi)
        if (m.variables[vi].kind == VarKind::Input &&
            !m.variables[vi].domain.contains(post.slots[st(m.var_slot[vi])]))
            return false;

    // base of the post state: pre with the new time and inputs; guards and
    // action right-hand sides are evaluated on the pre state only
    Valuation base = pre;
    base.slots[st(m.time_slot())] = post.time();
    for (size_t vi = 0; vi < m.variables.size(); ++vi)
        if (m.variables[vi].kind == VarKind::Input)
            base.slots[st(m.var_slot[vi])] = post.slots[st(m.var_slot[vi])];

    std::set<int> explained;  // variable indices changed by some fired transition

    for (size_t mi = 0; mi < m.machines.size(); ++mi) {
        const StateMachine& mach = m.machines[mi];

        // enabled transitions and the maximal enabled depth
        std::vector<int> enabled;
        int max_depth = -1;
        for (int ti : mach.transitions) {
            const Transition& t = m.transitions[st(ti)];
            bool src_active = false;
            for (int b : m.basic_descendants[st(t.source)])
                if (pre.slots[st(m.state_active_slot[st(b)])]) src_active = true;
            if (!src_active) continue;
            if (eval_expr(t.guard, m, pre) == 0) continue;
            enabled.push_back(ti);
            max_depth = std::max(max_depth, t.depth);
        }

        // exactly one active basic state pre and post
        int pre_active = -1, post_active = -1;
        for (int b : mach.basic_states) {
            if (pre.slots[st(m.state_active_slot[st(b)])]) {
                if (pre_active >= 0) return false;
                pre_active = b;
            }
            if (post.slots[st(m.state_active_slot[st(b)])]) {
                if (post_active >= 0) return false;
                post_active = b;
            }
        }
        if (pre_active < 0 || post_active < 0) return false;

        bool matched = false;
        // stutter option: allowed only when nothing is enabled
        if (enabled.empty()) {
            bool same = post_active == pre_active;
            // all timers of this machine framed
            bool timers_ok = true;
            for (int si = 0; si < static_cast<int>(m.states.size()); ++si)
                if (m.states[st(si)].machine == static_cast<int>(mi) &&
                    post.slots[st(m.timer_slot[st(si)])] != pre.slots[st(m.timer_slot[st(si)])])
                    timers_ok = false;
            // no variable written by this machine changes
            bool vars_ok = true;
            for (int v : machine_writes(m, static_cast<int>(mi)))
                if (post.slots[st(m.var_slot[st(v)])] != pre.slots[st(m.var_slot[st(v)])])
                    vars_ok = false;
            matched = same && timers_ok && vars_ok;
        } else {
            for (int ti : enabled) {
                const Transition& t = m.transitions[st(ti)];
                if (t.depth != max_depth) continue;  // priority-maximal only
                Valuation cand = base;
                apply_transition(m, pre, cand, t, static_cast<int>(mi));
                // compare the machine-owned part of cand with post
                bool ok = true;
                for (int b : mach.basic_states)
                    if (cand.slots[st(m.state_active_slot[st(b)])] !=
                        post.slots[st(m.state_active_slot[st(b)])])
                        ok = false;
                for (int si = 0; si < static_cast<int>(m.states.size()) && ok; ++si)
                    if (m.states[st(si)].machine == static_cast<int>(mi) &&
                        cand.slots[st(m.timer_slot[st(si)])] != post.slots[st(m.timer_slot[st(si)])])
                        ok = false;
                for (int v : machine_writes(m, static_cast<int>(mi)))
                    if (cand.slots[st(m.var_slot[st(v)])] != post.slots[st(m.var_slot[st(v)])])
                        ok = false;
                if (ok) {
                    for (const ActionAssign& a : t.actions) explained.insert(a.var);
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) return false;
    }

    // frame: non-input variables not written by any fired transition hold
    std::set<int> writable;
    for (size_t mi = 0; mi < m.machines.size(); ++mi)
        for (int v : machine_writes(m, static_cast<int>(mi))) writable.insert(v);
    for (size_t vi = 0; vi < m.variables.size(); ++vi) {
        if (m.variables[vi].kind == VarKind::Input) continue;
        if (writable.count(static_cast<int>(vi))) continue;  // checked per machine above
        if (post.slots[st(m.var_slot[vi])] != pre.slots[st(m.var_slot[vi])]) return false;
    }
    return true;
}

namespace {

/// Collects candidate values for a timer `elapsed` atom: the guard constants
/// and their neighbours, to decide satisfiability of guard conjunctions.
std::vector<Value> timer_candidates(const Expr& a, const Expr& b) {
    std::vector<Value> cs;
    for (const Expr* g : {&a, &b})
        for (Value c : referenced_constants(*g)) {
            cs.push_back(c > 0 ? c - 1 : 0);
            cs.push_back(c);
            cs.push_back(c + 1);
        }
    cs.push_back(0);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    return cs;
}

/// Exact satisfiability of g1 ∧ g2 by enumeration over the referenced
/// variable domains and candidate timer values; bails out (assumes overlap)
/// above `budget` assignments.
bool guards_overlap(const Model& m, const Expr& g1, const Expr& g2, size_t budget) {
    std::vector<int> vars;
    for (const Expr* g : {&g1, &g2})
        for (const std::string& n : referenced_vars(*g)) {
            int vi = m.var_index(n);
            if (vi >= 0 && std::find(vars.begin(), vars.end(), vi) == vars.end())
                vars.push_back(vi);
        }
    std::vector<std::string> timers;
    for (const Expr* g : {&g1, &g2})
        for (const std::string& n : referenced_timers(*g))
            if (std::find(timers.begin(), timers.end(), n) == timers.end()) timers.push_back(n);

    std::vector<Value> tvals = timer_candidates(g1, g2);

    size_t total = 1;
    for (int vi : vars) {
        const Domain& d = m.var(vi).domain;
        total *= static_cast<size_t>(d.high() - d.low() + 1);
        if (total > budget) return true;  // too large to decide; report overlap
    }
    for (size_t i = 0; i < timers.size(); ++i) {
        total *= tvals.size();
        if (total > budget) return true;
    }

    Valuation v;
    v.slots.assign(st(m.slot_count), 0);
    // evaluate with an arbitrary active configuration; state atoms do not
    // occur in overlap checks between same-source guards
    std::vector<Value> assign(vars.size() + timers.size(), 0);
    for (size_t idx = 0;; ++idx) {
        // decode current assignment
        size_t rem = idx;
        bool done = false;
        for (size_t i = 0; i < vars.size(); ++i) {
            const Domain& d = m.var(vars[i]).domain;
            size_t card = static_cast<size_t>(d.high() - d.low() + 1);
            v.slots[st(m.var_slot[st(vars[i])])] = d.low() + static_cast<Value>(rem % card);
            rem /= card;
        }
        for (size_t i = 0; i < timers.size(); ++i) {
            size_t card = tvals.size();
            Value elapsed = tvals[rem % card];
            rem /= card;
            int si = m.state_index(timers[i]);
            if (si >= 0) {
                // encode elapsed = t̂ - t_S with t̂ fixed at a large anchor
                const Value anchor = 1'000'000;
                v.slots[st(m.time_slot())] = anchor;
                v.slots[st(m.timer_slot[st(si)])] = anchor - elapsed;
            }
        }
        if (rem > 0) done = true;
        if (done) break;
        if (eval_expr(g1, m, v) != 0 && eval_expr(g2, m, v) != 0) return true;
        if (idx + 1 >= total) break;
    }
    return false;
}

}  // namespace

TransitionRelation build_relation(const Model& m) {
    TransitionRelation rel;
    rel.model = &m;

    // static ambiguity detection: two non-do transitions of the same machine
    // with the same source and depth whose guards can hold together
    for (const StateMachine& mach : m.machines) {
        for (size_t i = 0; i < mach.transitions.size(); ++i) {
            for (size_t j = i + 1; j < mach.transitions.size(); ++j) {
                const Transition& a = m.transitions[st(mach.transitions[i])];
                const Transition& b = m.transitions[st(mach.transitions[j])];
                if (a.source != b.source || a.depth != b.depth) continue;
                if (guards_overlap(m, a.guard, b.guard, 200000))
                    rel.ambiguity_warnings.push_back(
                        {m.states[st(a.source)].path,
                         "guards of two equal-priority transitions can hold together: (" +
                             to_string(a.guard) + ") and (" + to_string(b.guard) + ")"});
            }
        }
    }
    return rel;
}

// ---------------------------------------------------------------------------
// Interval reachability
// ---------------------------------------------------------------------------

namespace {

struct Interval {
    Value lo = 0, hi = 0;
    Interval() = default;
    Interval(Value l, Value h) : lo(l), hi(h) {}
    static Interval point(Value v) { return {v, v}; }
    bool contains(Value v) const { return v >= lo && v <= hi; }
    Interval join(const Interval& o) const { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }
    bool operator==(const Interval&) const = default;
};

constexpr Value kBigTime = 1LL << 40;

struct AbsState {
    std::vector<Interval> vars;       // per variable
    std::vector<char> maybe_active;   // per basic state
    bool operator==(const AbsState&) const = default;
};

}  // namespace

std::optional<int> interval_reach(const Model& m, const Expr& goal) {
    // index basic states densely
    std::vector<int> basics;
    std::vector<int> basic_pos(m.states.size(), -1);
    for (const ControlState& s : m.states)
        if (s.is_basic()) {
            basic_pos[st(s.index)] = static_cast<int>(basics.size());
            basics.push_back(s.index);
        }

    // three-valued evaluator over the abstract state
    struct Ev {
        const Model& m;
        const std::vector<int>& basic_pos;
        const AbsState& s;

        Interval ev(const Expr& e) const {
            switch (e.kind) {
                case ExprKind::Const:
                    return Interval::point(e.literal);
                case ExprKind::VarRef:
                    return s.vars[st(e.sym)];
                case ExprKind::StateRef: {
                    bool may = false;
                    for (int b : m.basic_descendants[st(e.sym)])
                        if (s.maybe_active[st(basic_pos[st(b)])]) may = true;
                    return may ? Interval{0, 1} : Interval::point(0);
                }
                case ExprKind::TimerElapsed:
                    return {0, kBigTime};
                case ExprKind::Not: {
                    Interval k = ev(e.kids[0]);
                    if (k.lo == 0 && k.hi == 0) return Interval::point(1);
                    if (!k.contains(0)) return Interval::point(0);
                    return {0, 1};
                }
                case ExprKind::Neg: {
                    Interval k = ev(e.kids[0]);
                    return {-k.hi, -k.lo};
                }
                case ExprKind::And: {
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    if ((a.lo == 0 && a.hi == 0) || (b.lo == 0 && b.hi == 0))
                        return Interval::point(0);
                    if (!a.contains(0) && !b.contains(0)) return Interval::point(1);
                    return {0, 1};
                }
                case ExprKind::Or: {
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    if (!a.contains(0) || !b.contains(0)) return Interval::point(1);
                    if (a.lo == 0 && a.hi == 0 && b.lo == 0 && b.hi == 0)
                        return Interval::point(0);
                    return {0, 1};
                }
                case ExprKind::Add: {
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    return {a.lo + b.lo, a.hi + b.hi};
                }
                case ExprKind::Sub: {
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    return {a.lo - b.hi, a.hi - b.lo};
                }
                case ExprKind::Min: {
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
                }
                case ExprKind::Max: {
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
                }
                default: {
                    // comparisons
                    Interval a = ev(e.kids[0]), b = ev(e.kids[1]);
                    bool can_true = false, can_false = false;
                    auto f = [&](Value x, Value y) -> bool {
                        switch (e.kind) {
                            case ExprKind::Eq: return x == y;
                            case ExprKind::Ne: return x != y;
                            case ExprKind::Lt: return x < y;
                            case ExprKind::Le: return x <= y;
                            case ExprKind::Gt: return x > y;
                            default: return x >= y;
                        }
                    };
                    for (Value x : {a.lo, a.hi})
                        for (Value y : {b.lo, b.hi}) (f(x, y) ? can_true : can_false) = true;
                    if (a.lo < a.hi || b.lo < b.hi) {
                        bool overlap = std::max(a.lo, b.lo) <= std::min(a.hi, b.hi);
                        bool both_points = a.lo == a.hi && b.lo == b.hi;
                        if (e.kind == ExprKind::Eq) {
                            if (overlap) can_true = true;
                            if (!both_points) can_false = true;
                        }
                        if (e.kind == ExprKind::Ne) {
                            if (!both_points) can_true = true;
                            if (overlap) can_false = true;
                        }
                    }
                    if (can_true && can_false) return {0, 1};
                    return Interval::point(can_true ? 1 : 0);
                }
            }
        }
    };

    auto possibly = [&](const AbsState& s, const Expr& e) {
        Interval r = Ev{m, basic_pos, s}.ev(e);
        return !(r.lo == 0 && r.hi == 0);
    };

    // initial abstract state
    AbsState cur;
    cur.vars.resize(m.variables.size());
    for (size_t i = 0; i < m.variables.size(); ++i)
        cur.vars[i] = Interval::point(m.variables[i].initial);
    cur.maybe_active.assign(basics.size(), 0);
    Valuation init = initial_valuation(m);
    for (size_t i = 0; i < basics.size(); ++i)
        cur.maybe_active[i] =
            init.slots[st(m.state_active_slot[st(basics[i])])] ? 1 : 0;

    const int widen_after = 3;
    for (int d = 0;; ++d) {
        if (possibly(cur, goal)) return d;

        AbsState next = cur;
        // inputs may take any value from the next step on
        for (size_t i = 0; i < m.variables.size(); ++i)
            if (m.variables[i].kind == VarKind::Input)
                next.vars[i] = {m.variables[i].domain.low(), m.variables[i].domain.high()};

        AbsState pre = cur;
        // inputs in the hybrid pre context already range over their domain
        for (size_t i = 0; i < m.variables.size(); ++i)
            if (m.variables[i].kind == VarKind::Input)
                pre.vars[i] = {m.variables[i].domain.low(), m.variables[i].domain.high()};

        for (const Transition& t : m.transitions) {
            bool src_may = false;
            for (int b : m.basic_descendants[st(t.source)])
                if (pre.maybe_active[st(basic_pos[st(b)])]) src_may = true;
            if (!src_may) continue;
            if (!possibly(pre, t.guard)) continue;
            // target activation
            int to = t.target;
            while (!m.states[st(to)].is_basic()) {
                to = m.states[st(to)].initial_child;
                if (to < 0) break;
            }
            if (to >= 0) next.maybe_active[st(basic_pos[st(to)])] = 1;
            for (const ActionAssign& a : t.actions) {
                Interval rhs = Ev{m, basic_pos, pre}.ev(a.rhs);
                const Domain& dom = m.var(a.var).domain;
                rhs.lo = std::max(rhs.lo, dom.low());
                rhs.hi = std::min(rhs.hi, dom.high());
                next.vars[st(a.var)] = next.vars[st(a.var)].join(rhs);
            }
        }

        if (d >= widen_after) {
            for (size_t i = 0; i < m.variables.size(); ++i)
                if (next.vars[i] != cur.vars[i])
                    next.vars[i] = {m.variables[i].domain.low(), m.variables[i].domain.high()};
        }

        if (next == cur) return std::nullopt;  // fixpoint without the goal
        cur = std::move(next);
    }
}

}  // namespace mbtg
