#include "mbtg/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace mbtg {

namespace {

size_t st(int i) { return static_cast<size_t>(i); }

bool is_io(const Model& m, int vi) {
    return m.variables[st(vi)].kind != VarKind::Internal;
}

Value parse_ms(const std::string& s, const SourceSpan& span, const char* what) {
    try {
        size_t pos = 0;
        Value v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("invalid ") + what + " value '" + s + "'", span);
    }
}

}  // namespace

ToleranceSpec parse_tolerances(const std::string& text, const Model& m,
                               const std::string& filename) {
    ToleranceSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        SourceSpan span{filename, lineno, 1};
        if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;

        int vi = m.var_index(name);
        if (vi < 0 || m.variables[st(vi)].kind != VarKind::Output)
            throw ParseError("'" + name + "' is not a declared output", span);
        if (spec.by_output.count(name))
            throw ParseError("duplicate tolerance for '" + name + "'", span);

        Tolerance tol;
        bool have_eps = false, have_dlate = false, have_dearly = false;
        std::string field;
        while (ls >> field) {
            size_t eq = field.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected key=value, got '" + field + "'", span);
            std::string key = field.substr(0, eq);
            std::string val = field.substr(eq + 1);
            if (key == "eps") {
                // integer, decimal or p/q fraction
                if (size_t slash = val.find('/'); slash != std::string::npos) {
                    tol.eps_num = parse_ms(val.substr(0, slash), span, "eps");
                    tol.eps_den = parse_ms(val.substr(slash + 1), span, "eps");
                    if (tol.eps_den <= 0) throw ParseError("eps denominator must be > 0", span);
                } else if (size_t dot = val.find('.'); dot != std::string::npos) {
                    std::string frac = val.substr(dot + 1);
                    Value whole = parse_ms(val.substr(0, dot), span, "eps");
                    Value den = 1;
                    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
                    tol.eps_num = whole * den + parse_ms(frac, span, "eps");
                    tol.eps_den = den;
                } else {
                    tol.eps_num = parse_ms(val, span, "eps");
                    tol.eps_den = 1;
                }
                have_eps = true;
            } else if (key == "dlate") {
                tol.dlate = parse_ms(val, span, "dlate");
                have_dlate = true;
            } else if (key == "dearly") {
                tol.dearly = parse_ms(val, span, "dearly");
                have_dearly = true;
            } else {
                throw ParseError("unknown tolerance field '" + key + "'", span);
            }
        }
        if (!have_eps || !have_dlate || !have_dearly)
            throw ParseError("tolerance for '" + name + "' needs eps, dlate and dearly", span);
        spec.by_output.emplace(name, tol);
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Strict conformance
// ---------------------------------------------------------------------------

namespace {

struct Snapshot {
    Value t = 0;
    std::map<int, Value> values;  // effective I/O values
};

/// Groups log records into snapshots. A new snapshot starts when the time
/// stamp increases or a variable repeats; values hold between records.
std::vector<Snapshot> snapshots(const Model& m, const TraceLog& log) {
    std::map<int, Value> held;
    for (size_t vi = 0; vi < m.variables.size(); ++vi)
        if (is_io(m, static_cast<int>(vi)))
            held[static_cast<int>(vi)] = m.variables[vi].initial;

    std::vector<Snapshot> out;
    std::vector<int> explicit_vars;
    for (const TraceLog::Record& r : log.records) {
        bool boundary = out.empty() || r.t > out.back().t ||
                        std::find(explicit_vars.begin(), explicit_vars.end(), r.var_index) !=
                            explicit_vars.end();
        if (boundary) {
            out.push_back({r.t, held});
            explicit_vars.clear();
        }
        held[r.var_index] = r.value;
        out.back().values[r.var_index] = r.value;
        explicit_vars.push_back(r.var_index);
    }
    return out;
}

Verdict fail_at(const std::string& output, const std::string& state, Value t, Value expected,
                Value observed, std::string detail) {
    Verdict v;
    v.pass = false;
    v.output = output;
    v.oracle_state = state;
    v.time = t;
    v.expected = expected;
    v.observed = observed;
    v.detail = std::move(detail);
    return v;
}

}  // namespace

Verdict check_strict(const Model& m, const std::vector<Valuation>& expected,
                     const TraceLog& observed) {
    std::vector<Snapshot> obs = snapshots(m, observed);
    if (obs.size() != expected.size())
        return fail_at("length", "s0", obs.empty() ? 0 : obs.back().t,
                       static_cast<Value>(expected.size()), static_cast<Value>(obs.size()),
                       "observed " + std::to_string(obs.size()) + " snapshots, expected " +
                           std::to_string(expected.size()));
    for (size_t i = 0; i < expected.size(); ++i) {
        if (obs[i].t != expected[i].time())
            return fail_at("time", "s0", obs[i].t, expected[i].time(), obs[i].t,
                           "time stamp mismatch at step " + std::to_string(i));
        for (size_t vi = 0; vi < m.variables.size(); ++vi) {
            if (!is_io(m, static_cast<int>(vi))) continue;
            Value want = expected[i].slots[st(m.var_slot[vi])];
            Value got = obs[i].values.at(static_cast<int>(vi));
            if (want != got)
                return fail_at(m.variables[vi].name, "s0", obs[i].t, want, got,
                               "value mismatch at step " + std::to_string(i));
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Tolerance-based conformance
// ---------------------------------------------------------------------------

OracleModel build_oracle(const Model& m, const ToleranceSpec& tolerances) {
    OracleModel o;
    o.model = &m;
    o.tolerances = tolerances;
    for (size_t vi = 0; vi < m.variables.size(); ++vi) {
        if (m.variables[vi].kind != VarKind::Output) continue;
        if (!tolerances.by_output.count(m.variables[vi].name))
            throw MissingTolerance("no tolerance declared for output " + m.variables[vi].name);
        o.outputs.push_back(static_cast<int>(vi));
    }
    return o;
}

namespace {

struct ChangeEvent {
    Value t = 0;
    Value value = 0;
    Value undef = 0;  // expected changes only: UNDEF window length
};

/// Last value per time stamp, then the points where it differs from the
/// running value (initial value never counts as a change).
std::vector<ChangeEvent> changes(const std::vector<std::pair<Value, Value>>& samples,
                                 Value initial) {
    std::map<Value, Value> last;
    for (auto [t, v] : samples) last[t] = v;
    std::vector<ChangeEvent> out;
    Value cur = initial;
    for (auto [t, v] : last) {
        if (v == cur) continue;
        out.push_back({t, v, 0});
        cur = v;
    }
    return out;
}

struct Checker {
    const Model& m;
    int var;
    Tolerance tol;
    Value cur_exp, cur_obs;

    enum State { S0, S2, S3 } state = S0;
    Value deadline = 0;
    Value window_end = 0;  // UNDEF window; meaningful in S2 only

    bool within() const {
        Value d = cur_obs - cur_exp;
        if (d < 0) d = -d;
        return d * tol.eps_den <= tol.eps_num;
    }

    std::optional<Verdict> deadline_error(const char* which) const {
        return fail_at(m.variables[st(var)].name, which, deadline, cur_exp, cur_obs,
                       std::string(which) + " deadline passed without catch-up");
    }

    // event kinds, in processing order at equal time stamps
    enum Kind { Expected, Observed, WindowEnd };

    std::optional<Verdict> on_event(Kind kind, const ChangeEvent& ev) {
        if (state == S2 && ev.t > deadline) return deadline_error("s2");
        if (state == S3 && ev.t > deadline) return deadline_error("s3");

        switch (kind) {
            case Expected:
                switch (state) {
                    case S0:
                        cur_exp = ev.value;
                        if (!within()) {
                            state = S2;
                            window_end = ev.t + ev.undef;
                            deadline = window_end + tol.dlate;
                        }
                        break;
                    case S2:
                        return fail_at(m.variables[st(var)].name, "s2", ev.t, cur_exp, cur_obs,
                                       "next expected change before the SUT confirmed the "
                                       "previous one");
                    case S3:
                        cur_exp = ev.value;
                        if (within()) {
                            state = S0;
                        } else {
                            state = S2;
                            window_end = ev.t + ev.undef;
                            deadline = window_end + tol.dlate;
                        }
                        break;
                }
                break;
            case Observed:
                cur_obs = ev.value;
                switch (state) {
                    case S0:
                        if (!within()) {
                            state = S3;
                            deadline = ev.t + tol.dearly;
                        }
                        break;
                    case S2:
                        // arbitrary values inside an UNDEF window
                        if (ev.t >= window_end && within()) state = S0;
                        break;
                    case S3:
                        if (within()) state = S0;
                        break;
                }
                break;
            case WindowEnd:
                if (state == S2 && within()) state = S0;
                break;
        }
        return std::nullopt;
    }
};

}  // namespace

Verdict check_tolerant(const OracleModel& oracle, const TraceLog& observed) {
    const Model& m = *oracle.model;

    // feeder: replay the observed inputs through the model (a variable
    // repeating at the same time stamp starts a new macro step)
    std::vector<Stimulus> stimuli;
    std::vector<int> explicit_vars;
    for (const TraceLog::Record& r : observed.records) {
        if (m.variables[st(r.var_index)].kind != VarKind::Input) continue;
        bool boundary = stimuli.empty() || r.t > stimuli.back().time ||
                        std::find(explicit_vars.begin(), explicit_vars.end(), r.var_index) !=
                            explicit_vars.end();
        if (boundary) {
            stimuli.push_back({r.t, {}});
            explicit_vars.clear();
        }
        stimuli.back().inputs[r.var_index] = r.value;
        explicit_vars.push_back(r.var_index);
    }
    // drop stimuli that change nothing (pure output records share time stamps)
    {
        std::map<int, Value> held;
        for (size_t vi = 0; vi < m.variables.size(); ++vi)
            if (m.variables[vi].kind == VarKind::Input)
                held[static_cast<int>(vi)] = m.variables[vi].initial;
        std::vector<Stimulus> kept;
        for (Stimulus& s : stimuli) {
            bool news = false;
            for (auto [vi, v] : s.inputs) {
                if (held[vi] != v) news = true;
                held[vi] = v;
            }
            if (news || kept.empty()) kept.push_back(std::move(s));
        }
        stimuli = std::move(kept);
    }
    Value horizon = observed.records.empty() ? 0 : observed.records.back().t;
    ReactiveRun run = run_reactive(m, stimuli, horizon);

    for (int ov : oracle.outputs) {
        const Tolerance& tol = oracle.tolerances.by_output.at(m.variables[st(ov)].name);

        std::vector<std::pair<Value, Value>> exp_samples;
        for (const Valuation& v : run.trace)
            exp_samples.emplace_back(v.time(), v.slots[st(m.var_slot[st(ov)])]);
        std::vector<ChangeEvent> exp = changes(exp_samples, m.variables[st(ov)].initial);

        // attach UNDEF windows from the fired transitions
        for (size_t j = 0; j < run.fired.size(); ++j)
            for (int ti : run.fired[j]) {
                if (ti < 0) continue;
                for (const ActionAssign& a : m.transitions[st(ti)].actions) {
                    if (a.var != ov || !a.undef_duration) continue;
                    Value t = run.trace[j + 1].time();
                    for (ChangeEvent& e : exp)
                        if (e.t == t) e.undef = std::max(e.undef, *a.undef_duration);
                }
            }

        std::vector<std::pair<Value, Value>> obs_samples;
        for (const TraceLog::Record& r : observed.records)
            if (r.var_index == ov) obs_samples.emplace_back(r.t, r.value);
        std::vector<ChangeEvent> obs = changes(obs_samples, m.variables[st(ov)].initial);

        // merged event list; at equal time stamps: expected, observed, window end
        struct Ev {
            Value t;
            Checker::Kind kind;
            ChangeEvent ev;
        };
        std::vector<Ev> events;
        for (const ChangeEvent& e : exp) {
            events.push_back({e.t, Checker::Expected, e});
            if (e.undef > 0) events.push_back({e.t + e.undef, Checker::WindowEnd, e});
        }
        for (const ChangeEvent& e : obs) events.push_back({e.t, Checker::Observed, e});
        std::stable_sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
            return a.t != b.t ? a.t < b.t : a.kind < b.kind;
        });

        Checker ck{m, ov, tol, m.variables[st(ov)].initial, m.variables[st(ov)].initial};
        for (const Ev& e : events)
            if (auto verdict = ck.on_event(e.kind, e.ev)) return *verdict;
        if (ck.state != Checker::S0)
            return *ck.deadline_error(ck.state == Checker::S2 ? "s2" : "s3");
    }
    return {};
}

}  // namespace mbtg
