#include "mbtg/procgen.hpp"

#include <algorithm>
#include <sstream>

namespace mbtg {

namespace {

size_t st(int i) { return static_cast<size_t>(i); }

std::vector<int> io_vars(const Model& m) {
    std::vector<int> out;
    for (size_t vi = 0; vi < m.variables.size(); ++vi)
        if (m.variables[vi].kind != VarKind::Internal) out.push_back(static_cast<int>(vi));
    return out;
}

std::vector<int> input_vars(const Model& m) {
    std::vector<int> out;
    for (size_t vi = 0; vi < m.variables.size(); ++vi)
        if (m.variables[vi].kind == VarKind::Input) out.push_back(static_cast<int>(vi));
    return out;
}

Stimulus full_input_assignment(const Model& m, const Valuation& v) {
    Stimulus s;
    s.time = v.time();
    for (int vi : input_vars(m)) s.inputs[vi] = v.slots[st(m.var_slot[st(vi)])];
    return s;
}

}  // namespace

TestProcedure emit(const Model& m, const Witness& witness, std::string id, std::vector<int> cases,
                   TestProcedure::Mode mode, const ToleranceSpec* tolerances) {
    TestProcedure p;
    p.id = std::move(id);
    p.cases = std::move(cases);
    p.mode = mode;
    if (tolerances) p.tolerances = *tolerances;

    // reactive closure: the scheduled inputs plus the model's own deadline
    // steps, materialized as explicit (input-preserving) stimulation groups
    Value horizon = witness.trace.back().time();
    ReactiveRun run = run_reactive(m, witness.stimuli, horizon);
    p.expected = run.trace;
    p.stimuli.push_back(full_input_assignment(m, run.trace.front()));  // initial inputs
    for (size_t i = 0; i < run.stimuli.size(); ++i)
        p.stimuli.push_back(full_input_assignment(m, run.trace[i + 1]));
    return p;
}

std::string print_procedure(const Model& m, const TestProcedure& p) {
    std::ostringstream out;
    out << "procedure " << p.id << "\n";
    out << "mode " << (p.mode == TestProcedure::Strict ? "strict" : "tolerant") << "\n";
    out << "cases";
    for (int c : p.cases) out << " " << c;
    out << "\n";
    if (p.mode == TestProcedure::Tolerant)
        for (const auto& [name, tol] : p.tolerances.by_output) {
            out << "tolerance " << name << " eps=" << tol.eps_num;
            if (tol.eps_den != 1) out << "/" << tol.eps_den;
            out << " dlate=" << tol.dlate << " dearly=" << tol.dearly << "\n";
        }
    for (const Stimulus& s : p.stimuli)
        for (auto [vi, v] : s.inputs)
            out << "stim t=" << s.time << " " << m.variables[st(vi)].name << "=" << v << "\n";
    for (const Valuation& v : p.expected)
        for (int vi : io_vars(m))
            out << "expect t=" << v.time() << " " << m.variables[st(vi)].name << "="
                << v.slots[st(m.var_slot[st(vi)])] << "\n";
    return out.str();
}

TestProcedure parse_procedure(const std::string& text, const Model& m,
                              const std::string& filename) {
    TestProcedure p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_id = false;

    // grouping state: a time increase or a repeated variable starts a new group
    std::vector<int> stim_explicit, exp_explicit;
    std::map<int, Value> held;  // effective expect values, carried between groups
    auto expect_complete = [&](const SourceSpan& span) {
        if (p.expected.empty()) return;
        for (int vi : io_vars(m))
            if (!held.count(vi))
                throw ParseError("expect group is missing variable " + m.variables[st(vi)].name,
                                 span);
    };

    while (std::getline(in, line)) {
        ++lineno;
        SourceSpan span{filename, lineno, 1};
        if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;

        if (kw == "procedure") {
            if (!(ls >> p.id)) throw ParseError("procedure needs an id", span);
            have_id = true;
        } else if (kw == "mode") {
            std::string mode;
            ls >> mode;
            if (mode == "strict")
                p.mode = TestProcedure::Strict;
            else if (mode == "tolerant")
                p.mode = TestProcedure::Tolerant;
            else
                throw ParseError("unknown mode '" + mode + "'", span);
        } else if (kw == "cases") {
            int c;
            while (ls >> c) p.cases.push_back(c);
        } else if (kw == "tolerance") {
            std::string rest;
            std::getline(ls, rest);
            ToleranceSpec one = parse_tolerances(rest, m, filename);
            for (auto& [name, tol] : one.by_output) p.tolerances.by_output[name] = tol;
        } else if (kw == "stim" || kw == "expect") {
            std::string tfield, vfield;
            if (!(ls >> tfield >> vfield) || tfield.rfind("t=", 0) != 0)
                throw ParseError("expected `" + kw + " t=<ms> <var>=<val>`", span);
            size_t eq = vfield.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected <var>=<val>, got '" + vfield + "'", span);
            Value t, val;
            std::string name = vfield.substr(0, eq);
            try {
                t = std::stoll(tfield.substr(2));
                val = std::stoll(vfield.substr(eq + 1));
            } catch (const std::exception&) {
                throw ParseError("invalid number in '" + line + "'", span);
            }
            int vi = m.var_index(name);
            if (vi < 0) throw ParseError("unknown variable '" + name + "'", span);
            if (kw == "stim") {
                if (m.variables[st(vi)].kind != VarKind::Input)
                    throw ParseError("'" + name + "' is not an input", span);
                bool boundary = p.stimuli.empty() || t > p.stimuli.back().time ||
                                std::find(stim_explicit.begin(), stim_explicit.end(), vi) !=
                                    stim_explicit.end();
                if (!p.stimuli.empty() && t < p.stimuli.back().time)
                    throw ParseError("stimulation time decreases", span);
                if (boundary) {
                    p.stimuli.push_back({t, {}});
                    stim_explicit.clear();
                }
                p.stimuli.back().inputs[vi] = val;
                stim_explicit.push_back(vi);
            } else {
                if (m.variables[st(vi)].kind == VarKind::Internal)
                    throw ParseError("'" + name + "' is not observable", span);
                bool boundary = p.expected.empty() || t > p.expected.back().time() ||
                                std::find(exp_explicit.begin(), exp_explicit.end(), vi) !=
                                    exp_explicit.end();
                if (!p.expected.empty() && t < p.expected.back().time())
                    throw ParseError("expected time decreases", span);
                if (boundary) {
                    expect_complete(span);
                    Valuation v;
                    v.slots.assign(st(m.slot_count), 0);
                    v.slots[st(m.time_slot())] = t;
                    for (auto [hv, hval] : held) v.slots[st(m.var_slot[st(hv)])] = hval;
                    p.expected.push_back(std::move(v));
                    exp_explicit.clear();
                }
                held[vi] = val;
                p.expected.back().slots[st(m.var_slot[st(vi)])] = val;
                exp_explicit.push_back(vi);
            }
        } else {
            throw ParseError("unknown procedure line '" + kw + "'", span);
        }
    }
    if (!have_id) throw ParseError("missing procedure header", {filename, lineno, 1});
    expect_complete({filename, lineno, 1});
    return p;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace {

TraceLog project_log(const Model& m, const std::vector<Valuation>& trace) {
    TraceLog log;
    for (const Valuation& v : trace)
        for (int vi : io_vars(m))
            log.records.push_back(
                {v.time(), m.variables[st(vi)].name, vi, v.slots[st(m.var_slot[st(vi)])]});
    return log;
}

Verdict dispatch(const TestProcedure& p, const Model& spec_model, const TraceLog& log) {
    if (p.mode == TestProcedure::Strict) return check_strict(spec_model, p.expected, log);
    OracleModel oracle = build_oracle(spec_model, p.tolerances);
    return check_tolerant(oracle, log);
}

}  // namespace

ExecutionResult execute(const TestProcedure& p, const Model& spec_model, const Model& sut) {
    if (p.stimuli.empty()) throw AdapterFailure("procedure has no stimulation");
    for (auto [vi, v] : p.stimuli.front().inputs)
        if (v != sut.variables[st(vi)].initial)
            throw AdapterFailure("initial stimulation of " + sut.variables[st(vi)].name +
                                 " differs from its declared initial value");
    std::vector<Stimulus> steps(p.stimuli.begin() + 1, p.stimuli.end());
    Value horizon = p.expected.empty() ? p.stimuli.back().time : p.expected.back().time();
    ReactiveRun run = run_reactive(sut, steps, horizon);
    ExecutionResult res;
    res.log = project_log(sut, run.trace);
    res.verdict = dispatch(p, spec_model, res.log);
    return res;
}

ExecutionResult execute(const TestProcedure& p, const Model& spec_model, const TraceLog& log) {
    return {dispatch(p, spec_model, log), log};
}

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

namespace {

int tweak_constants(Expr& e, Value from, Value to) {
    int n = 0;
    if (e.kind == ExprKind::Const && e.literal == from) {
        e.literal = to;
        ++n;
    }
    for (Expr& k : e.kids) n += tweak_constants(k, from, to);
    return n;
}

}  // namespace

Model mutate(const Model& m, const Mutation& mu) {
    if (mu.transition < 0 || mu.transition >= static_cast<int>(m.transitions.size()))
        throw InvalidMutation("no such transition: " + std::to_string(mu.transition));
    Model mutant = m;
    Transition& t = mutant.transitions[st(mu.transition)];
    switch (mu.kind) {
        case Mutation::ConstantTweak:
            if (tweak_constants(t.guard, mu.old_value, mu.new_value) == 0)
                throw InvalidMutation("guard of transition " + std::to_string(mu.transition) +
                                      " has no constant " + std::to_string(mu.old_value));
            break;
        case Mutation::GuardNegate:
            t.guard = negate(t.guard);
            break;
        case Mutation::ActionDrop:
            if (mu.action_index < 0 || mu.action_index >= static_cast<int>(t.actions.size()))
                throw InvalidMutation("transition " + std::to_string(mu.transition) +
                                      " has no action " + std::to_string(mu.action_index));
            t.actions.erase(t.actions.begin() + mu.action_index);
            break;
    }
    std::vector<Diagnostic> diags = validate(mutant);
    if (!diags.empty())
        throw InvalidMutation("mutant fails validation: " + diags.front().element + ": " +
                              diags.front().message);
    return mutant;
}

}  // namespace mbtg
