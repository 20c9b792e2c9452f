#include "mbtg/solver.hpp"

#include <algorithm>

namespace mbtg {

namespace {

size_t st(int i) { return static_cast<size_t>(i); }

void collect_timer_constants(const Expr& e, std::vector<std::vector<Value>>& per_state) {
    for (const Expr& k : e.kids) collect_timer_constants(k, per_state);
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
                per_state[st(a.sym)].push_back(b.literal);
            if (b.kind == ExprKind::TimerElapsed && a.kind == ExprKind::Const && b.sym >= 0)
                per_state[st(b.sym)].push_back(a.literal);
            break;
        }
        default:
            break;
    }
}

void collect_var_indices(const Expr& e, std::vector<int>& out) {
    if (e.kind == ExprKind::VarRef && e.sym >= 0) out.push_back(e.sym);
    for (const Expr& k : e.kids) collect_var_indices(k, out);
}

void flatten_conj(const Expr& e, std::vector<Expr>& out) {
    if (e.kind == ExprKind::And) {
        flatten_conj(e.kids[0], out);
        flatten_conj(e.kids[1], out);
        return;
    }
    out.push_back(e);
}

/// Cheap static refutation of a conjunctive goal: two activity atoms of the
/// same machine on different branches, or two different constants pinned to
/// one variable. Spares a full reach-set scan.
bool conjunction_contradictory(const Model& m, const Expr& goal) {
    std::vector<Expr> atoms;
    flatten_conj(goal, atoms);
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
            if (m.states[st(a)].machine != m.states[st(b)].machine) continue;
            if (!m.state_is_ancestor_or_self(a, b) && !m.state_is_ancestor_or_self(b, a))
                return true;
        }
    return false;
}

/// Evaluates atoms at positions <= upto; leaves later atoms symbolic.
PosFormula partial_eval(const PosFormula& p, const Model& m,
                        const std::vector<Valuation>& prefix, int upto) {
    switch (p.kind) {
        case PosFormula::True:
        case PosFormula::False:
            return p;
        case PosFormula::PosAtom:
            if (p.pos > upto) return p;
            return eval_expr(p.atom, m, prefix[st(p.pos)]) != 0 ? PosFormula::tru()
                                                                : PosFormula::fls();
        case PosFormula::AndNode: {
            std::vector<PosFormula> kids;
            kids.reserve(p.kids.size());
            for (const PosFormula& k : p.kids) kids.push_back(partial_eval(k, m, prefix, upto));
            return PosFormula::all(std::move(kids));
        }
        case PosFormula::OrNode: {
            std::vector<PosFormula> kids;
            kids.reserve(p.kids.size());
            for (const PosFormula& k : p.kids) kids.push_back(partial_eval(k, m, prefix, upto));
            return PosFormula::any(std::move(kids));
        }
    }
    return p;
}

/// Folds boolean structure whose leaves all constrain the same trace
/// position into one positional atom, so that e.g. F (a && b) — conjunction
/// at the LTL level — still hits the reachable-set fast path.
std::optional<PosFormula> collapse_single_position(const PosFormula& p) {
    switch (p.kind) {
        case PosFormula::PosAtom:
            return p;
        case PosFormula::AndNode:
        case PosFormula::OrNode: {
            if (p.kids.empty()) return std::nullopt;
            std::optional<PosFormula> acc;
            for (const PosFormula& k : p.kids) {
                std::optional<PosFormula> c = collapse_single_position(k);
                if (!c) return std::nullopt;
                if (!acc) {
                    acc = std::move(c);
                    continue;
                }
                if (c->pos != acc->pos) return std::nullopt;
                acc->atom = p.kind == PosFormula::AndNode ? conj(std::move(acc->atom), c->atom)
                                                          : disj(std::move(acc->atom), c->atom);
            }
            return acc;
        }
        default:
            return std::nullopt;
    }
}

/// A goal consisting of a single positional atom (possibly after collapsing
/// same-position boolean structure), i.e. the shape produced by F over a
/// state formula.
std::optional<PosFormula> single_atom(const BmcInstance& inst) {
    return collapse_single_position(inst.goal);
}

}  // namespace

Solver::Solver(const Model& model, SolverConfig config) : model_(model), config_(config) {
    ensure_candidates();
    Node root;
    root.state = initial_valuation(model_);
    root.key = abstract_key(root.state);
    root.parent = -1;
    root.depth = 0;
    nodes_.push_back(root);
    seen_[nodes_[0].key] = 0;
}

void Solver::ensure_candidates() {
    // guard constants per timer state and the global clamp horizon
    std::vector<const Expr*> atoms;
    for (const Transition& t : model_.transitions) atoms.push_back(&t.guard);
    // requirement constraints contribute goal boundaries too
    std::vector<const LtlFormula*> ltl_stack;
    for (const Requirement& r : model_.requirements)
        if (r.constraint) ltl_stack.push_back(&*r.constraint);
    while (!ltl_stack.empty()) {
        const LtlFormula* f = ltl_stack.back();
        ltl_stack.pop_back();
        if (f->kind == LtlKind::Atom) atoms.push_back(&f->atom);
        for (const LtlFormula& k : f->kids) ltl_stack.push_back(&k);
    }

    timer_constants_.assign(model_.states.size(), {});
    for (const Expr* a : atoms) collect_timer_constants(*a, timer_constants_);
    clamp_horizon_ = 1;
    for (auto& cs : timer_constants_) {
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        for (Value c : cs) clamp_horizon_ = std::max(clamp_horizon_, c + 1);
    }

    // constants per variable: from comparisons mentioning that variable
    std::vector<std::vector<Value>> var_consts(model_.variables.size());
    struct Walk {
        std::vector<std::vector<Value>>& out;
        void go(const Expr& e) {
            for (const Expr& k : e.kids) go(k);
            switch (e.kind) {
                case ExprKind::Eq:
                case ExprKind::Ne:
                case ExprKind::Lt:
                case ExprKind::Le:
                case ExprKind::Gt:
                case ExprKind::Ge: {
                    std::vector<Value> cs;
                    for (const Expr& side : e.kids)
                        if (side.kind == ExprKind::Const) cs.push_back(side.literal);
                    for (const Expr& side : e.kids) {
                        if (side.kind == ExprKind::Const) continue;
                        std::vector<int> vars;
                        collect_var_indices(side, vars);
                        for (int vi : vars)
                            for (Value c : cs) out[static_cast<size_t>(vi)].push_back(c);
                    }
                    break;
                }
                default:
                    break;
            }
        }
    } walk{var_consts};
    for (const Expr* a : atoms) walk.go(*a);

    for (size_t vi = 0; vi < model_.variables.size(); ++vi) {
        if (model_.variables[vi].kind != VarKind::Input) continue;
        const Domain& d = model_.variables[vi].domain;
        std::vector<Value> cand;
        auto add = [&](Value v) {
            if (v < d.low() || v > d.high()) return;
            if (std::find(cand.begin(), cand.end(), v) == cand.end()) cand.push_back(v);
        };
        if (d.high() - d.low() + 1 <= 4) {
            for (Value v = d.low(); v <= d.high(); ++v) add(v);
        } else {
            add(d.low());
            std::vector<Value> sorted = var_consts[vi];
            std::sort(sorted.begin(), sorted.end());
            for (Value c : sorted) {
                add(c - 1);
                add(c);
                add(c + 1);
            }
            add(d.high());
            add((d.low() + d.high()) / 2);
        }
        input_vars_.push_back(static_cast<int>(vi));
        input_candidates_.push_back(std::move(cand));
    }
}

std::vector<Value> Solver::abstract_key(const Valuation& v) const {
    std::vector<Value> key;
    key.reserve(model_.variables.size() + model_.states.size());
    for (size_t vi = 0; vi < model_.variables.size(); ++vi)
        key.push_back(v.slots[st(model_.var_slot[vi])]);
    for (const ControlState& s : model_.states) {
        if (s.is_basic())
            key.push_back(v.slots[st(model_.state_active_slot[st(s.index)])]);
    }
    for (const ControlState& s : model_.states) {
        if (timer_constants_[st(s.index)].empty()) continue;
        // an inactive state's timer is reset on entry, so its stale value
        // cannot influence behaviour; key it by a sentinel
        bool active = false;
        for (int b : model_.basic_descendants[st(s.index)])
            if (v.slots[st(model_.state_active_slot[st(b)])]) active = true;
        if (!active) {
            key.push_back(-1);
            continue;
        }
        Value horizon = timer_constants_[st(s.index)].back() + 1;
        Value elapsed = v.time() - v.slots[st(model_.timer_slot[st(s.index)])];
        key.push_back(std::min(elapsed, horizon));
    }
    return key;
}

std::vector<Stimulus> Solver::stimuli_for(const Valuation& v) const {
    // time candidates: hold, one tick, and each pending timer deadline +- 1ms
    std::vector<Value> dts{0, 1};
    for (const ControlState& s : model_.states) {
        const auto& cs = timer_constants_[st(s.index)];
        if (cs.empty()) continue;
        bool active = false;
        for (int b : model_.basic_descendants[st(s.index)])
            if (v.slots[st(model_.state_active_slot[st(b)])]) active = true;
        if (!active) continue;
        Value elapsed = v.time() - v.slots[st(model_.timer_slot[st(s.index)])];
        for (Value c : cs) {
            Value dt = c - elapsed;
            if (dt <= 0) continue;
            if (dt > 1) dts.push_back(dt - 1);
            dts.push_back(dt);
            dts.push_back(dt + 1);
        }
    }
    std::sort(dts.begin(), dts.end());
    dts.erase(std::unique(dts.begin(), dts.end()), dts.end());

    std::vector<Stimulus> out;
    std::vector<size_t> idx(input_vars_.size(), 0);
    for (;;) {
        for (Value dt : dts) {
            Stimulus s;
            s.time = v.time() + dt;
            for (size_t i = 0; i < input_vars_.size(); ++i)
                s.inputs[input_vars_[i]] = input_candidates_[i][idx[i]];
            out.push_back(std::move(s));
        }
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < input_candidates_[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
        if (input_vars_.empty()) break;
    }
    return out;
}

bool Solver::expand_next(size_t& budget_left) {
    while (scan_ < nodes_.size()) {
        if (nodes_[scan_].depth > config_.k_max) {
            ++scan_;
            succ_cursor_ = 0;
            continue;
        }
        // successors of the node under scan; regenerate its stimulus list
        std::vector<Stimulus> stims = stimuli_for(nodes_[scan_].state);
        while (succ_cursor_ < stims.size()) {
            if (budget_left == 0) return false;
            --budget_left;
            const Stimulus& s = stims[succ_cursor_++];
            StepResult r = step(model_, nodes_[scan_].state, s);
            std::vector<Value> key = abstract_key(r.post);
            auto [it, fresh] = seen_.try_emplace(key, static_cast<int>(nodes_.size()));
            if (!fresh) continue;
            Node n;
            n.key = std::move(key);
            n.state = std::move(r.post);
            n.parent = static_cast<int>(scan_);
            n.via = s;
            n.depth = nodes_[scan_].depth + 1;
            nodes_.push_back(std::move(n));
            return true;
        }
        ++scan_;
        succ_cursor_ = 0;
    }
    exhausted_ = true;
    return false;
}

Witness Solver::reconstruct(int node) const {
    Witness w;
    std::vector<int> chain;
    for (int cur = node; cur != -1; cur = nodes_[st(cur)].parent) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    for (int cur : chain) {
        w.trace.push_back(nodes_[st(cur)].state);
        if (nodes_[st(cur)].parent != -1) w.stimuli.push_back(nodes_[st(cur)].via);
    }
    w.discharge_index = nodes_[st(node)].depth;
    return w;
}

SolveResult Solver::solve_reach(const Expr& goal) {
    // Sat results stay valid as the reachable set only grows; Unsat results
    // are recorded once the set is exhausted and are then final as well.
    const std::string memo_key = to_string(goal);
    if (auto it = reach_memo_.find(memo_key); it != reach_memo_.end()) return it->second;

    SolveResult res;
    res.stats.nodes_cached = nodes_.size();

    if (conjunction_contradictory(model_, goal)) {
        res.status = SolveStatus::UnsatAtBound;
        reach_memo_.emplace(memo_key, res);
        return res;
    }

    if (std::optional<int> lb = interval_reach(model_, goal); !lb) {
        res.status = SolveStatus::UnsatAtBound;
        reach_memo_.emplace(memo_key, res);
        return res;
    } else if (*lb > config_.k_max + 1) {
        res.status = SolveStatus::UnsatAtBound;
        reach_memo_.emplace(memo_key, res);
        return res;
    }

    size_t budget = config_.budget;
    size_t checked = 0;
    const CompiledExpr compiled(goal, model_);
    for (;;) {
        for (; checked < nodes_.size(); ++checked) {
            if (nodes_[checked].depth > config_.k_max + 1) continue;
            if (compiled.eval(nodes_[checked].state) != 0) {
                res.status = SolveStatus::Sat;
                res.witness = reconstruct(static_cast<int>(checked));
                res.stats.nodes_cached = nodes_.size();
                res.stats.steps_explored = config_.budget - budget;
                reach_memo_.emplace(memo_key, res);
                return res;
            }
        }
        if (exhausted_) {
            res.status = SolveStatus::UnsatAtBound;
            res.stats.nodes_cached = nodes_.size();
            reach_memo_.emplace(memo_key, res);
            return res;
        }
        if (!expand_next(budget)) {
            if (!exhausted_) {
                res.status = SolveStatus::BudgetExceeded;
                res.stats.steps_explored = config_.budget;
                res.stats.nodes_cached = nodes_.size();
                return res;
            }
        }
    }
}

SolveResult Solver::search_instance(const BmcInstance& inst, SolveStats& stats) {
    const int last = inst.length() - 1;  // final trace position
    SolveResult res;

    std::vector<Valuation> prefix{initial_valuation(model_)};
    std::vector<Stimulus> stimuli;
    size_t budget = config_.budget;
    bool budget_hit = false;

    // depth-first over stimulus choices with positional pruning
    auto dfs = [&](auto&& self, const PosFormula& residual) -> bool {
        int i = static_cast<int>(prefix.size()) - 1;
        PosFormula cur = partial_eval(residual, model_, prefix, i);
        if (cur.kind == PosFormula::False) return false;
        if (i == last) return cur.kind == PosFormula::True;
        for (const Stimulus& s : stimuli_for(prefix.back())) {
            if (budget == 0) {
                budget_hit = true;
                return false;
            }
            --budget;
            ++stats.steps_explored;
            StepResult r = step(model_, prefix.back(), s);
            prefix.push_back(std::move(r.post));
            stimuli.push_back(s);
            if (self(self, cur)) return true;
            prefix.pop_back();
            stimuli.pop_back();
            if (budget_hit) return false;
        }
        return false;
    };

    if (dfs(dfs, inst.goal)) {
        res.status = SolveStatus::Sat;
        Witness w;
        w.trace = std::move(prefix);
        w.stimuli = std::move(stimuli);
        w.discharge_index = inst.discharge_index;
        res.witness = std::move(w);
        return res;
    }
    res.status = budget_hit ? SolveStatus::BudgetExceeded : SolveStatus::UnsatAtBound;
    return res;
}

std::optional<std::vector<Stimulus>> Solver::bfs_from(const Valuation& start, const Expr& goal,
                                                      int max_steps, size_t& budget) const {
    struct LNode {
        Valuation state;
        int parent;
        Stimulus via;
        int depth;
    };
    std::vector<LNode> nodes{{start, -1, {}, 0}};
    std::map<std::vector<Value>, int> seen{{abstract_key(start), 0}};
    const CompiledExpr compiled(goal, model_);
    for (size_t scan = 0; scan < nodes.size(); ++scan) {
        if (compiled.eval(nodes[scan].state) != 0) {
            std::vector<Stimulus> out;
            for (int cur = static_cast<int>(scan); nodes[st(cur)].parent != -1;
                 cur = nodes[st(cur)].parent)
                out.push_back(nodes[st(cur)].via);
            std::reverse(out.begin(), out.end());
            return out;
        }
        if (nodes[scan].depth >= max_steps) continue;
        for (const Stimulus& s : stimuli_for(nodes[scan].state)) {
            if (budget == 0) return std::nullopt;
            --budget;
            StepResult r = step(model_, nodes[scan].state, s);
            std::vector<Value> key = abstract_key(r.post);
            auto [it, fresh] = seen.try_emplace(key, static_cast<int>(nodes.size()));
            if (!fresh) continue;
            nodes.push_back({std::move(r.post), static_cast<int>(scan), s, nodes[scan].depth + 1});
        }
    }
    return std::nullopt;
}

SolveResult Solver::solve_finally_conjunction(const std::vector<const Expr*>& goals) {
    // chain shortest reaches through every permutation of the goals; complete
    // only up to the abstraction of intermediate states, recorded as bounded
    SolveResult res;
    std::vector<size_t> order(goals.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    size_t budget = config_.budget;
    do {
        std::vector<Stimulus> stimuli;
        Valuation cur = initial_valuation(model_);
        int first_discharge = -1;
        bool ok = true;
        bool first_segment = true;
        for (size_t gi : order) {
            int remaining = config_.k_max + 1 - static_cast<int>(stimuli.size());
            if (remaining < 0) {
                ok = false;
                break;
            }
            std::optional<std::vector<Stimulus>> part;
            if (first_segment) {
                // from the initial state the shared reachable set answers this
                SolveResult r = solve_reach(*goals[gi]);
                if (r.status == SolveStatus::Sat &&
                    static_cast<int>(r.witness->stimuli.size()) <= remaining)
                    part = r.witness->stimuli;
                else if (r.status == SolveStatus::BudgetExceeded)
                    budget = 0;
                first_segment = false;
            } else {
                part = bfs_from(cur, *goals[gi], remaining, budget);
            }
            if (!part) {
                ok = false;
                break;
            }
            for (const Stimulus& s : *part) {
                stimuli.push_back(s);
                cur = step(model_, cur, s).post;
            }
            if (first_discharge < 0) first_discharge = static_cast<int>(stimuli.size());
            res.stats.steps_explored = config_.budget - budget;
        }
        if (ok) {
            Witness w;
            w.stimuli = stimuli;
            w.trace = run_trace(model_, stimuli);
            w.discharge_index = std::max(first_discharge, 0);
            res.status = SolveStatus::Sat;
            res.witness = std::move(w);
            return res;
        }
        if (budget == 0) {
            res.status = SolveStatus::BudgetExceeded;
            return res;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    res.status = SolveStatus::UnsatAtBound;
    res.stats.steps_explored = config_.budget - budget;
    return res;
}

namespace {

/// Boolean LTL structure without temporal operators, folded into one state
/// formula; nullopt when a temporal operator occurs.
std::optional<Expr> ltl_state_formula(const LtlFormula& f) {
    switch (f.kind) {
        case LtlKind::Atom:
            return f.atom;
        case LtlKind::Not: {
            std::optional<Expr> a = ltl_state_formula(f.kids[0]);
            if (!a) return std::nullopt;
            return negate(*a);
        }
        case LtlKind::And:
        case LtlKind::Or: {
            std::optional<Expr> a = ltl_state_formula(f.kids[0]);
            std::optional<Expr> b = ltl_state_formula(f.kids[1]);
            if (!a || !b) return std::nullopt;
            return f.kind == LtlKind::And ? conj(std::move(*a), std::move(*b))
                                          : disj(std::move(*a), std::move(*b));
        }
        default:
            return std::nullopt;
    }
}

/// Collects the atoms of a pure conjunction of F⟨state formula⟩ terms;
/// returns false for any other shape.
bool finally_conjunction(const LtlFormula& f, std::vector<Expr>& out) {
    if (f.kind == LtlKind::And)
        return finally_conjunction(f.kids[0], out) && finally_conjunction(f.kids[1], out);
    if (f.kind == LtlKind::Finally) {
        if (std::optional<Expr> e = ltl_state_formula(f.kids[0])) {
            out.push_back(std::move(*e));
            return true;
        }
    }
    return false;
}

}  // namespace

SolveResult Solver::solve_bounded(const LtlFormula& f, size_t budget) {
    size_t saved = config_.budget;
    config_.budget = budget;
    SolveResult r = solve(f);
    config_.budget = saved;
    return r;
}

SolveResult Solver::solve(const LtlFormula& f) {
    const LtlFormula g = nnf(f);
    if (std::vector<Expr> goals; finally_conjunction(g, goals) && goals.size() >= 2 &&
                                 goals.size() <= 4) {
        std::vector<const Expr*> ptrs;
        ptrs.reserve(goals.size());
        for (const Expr& e : goals) ptrs.push_back(&e);
        return solve_finally_conjunction(ptrs);
    }

    std::vector<BmcInstance> instances = expand_bmc(f, config_.k_max);
    SolveResult res;
    bool budget_hit = false;

    for (const BmcInstance& inst : instances) {
        ++res.stats.instances_tried;

        // F over a state formula: query the shared reachable set instead of
        // enumerating traces
        if (std::optional<PosFormula> atom = single_atom(inst)) {
            SolveResult r = solve_reach(atom->atom);
            res.stats.steps_explored += r.stats.steps_explored;
            res.stats.nodes_cached = r.stats.nodes_cached;
            if (r.status == SolveStatus::Sat) {
                // the reachable set returns the shortest witness; it belongs
                // to the instance discharging at that depth
                if (r.witness->discharge_index > inst.discharge_index) continue;
                r.stats = res.stats;
                return r;
            }
            if (r.status == SolveStatus::BudgetExceeded) {
                budget_hit = true;
                break;
            }
            continue;  // other disjuncts may still discharge at a later position
        }

        SolveResult r = search_instance(inst, res.stats);
        if (r.status == SolveStatus::Sat) {
            r.stats = res.stats;
            r.stats.nodes_cached = nodes_.size();
            return r;
        }
        if (r.status == SolveStatus::BudgetExceeded) budget_hit = true;
    }
    res.status = budget_hit ? SolveStatus::BudgetExceeded : SolveStatus::UnsatAtBound;
    res.stats.nodes_cached = nodes_.size();
    return res;
}

}  // namespace mbtg
