#include "mbtg/frontend.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace mbtg {

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Value number = 0;
    SourceSpan span;
};

struct Lexer {
    const std::string& src;
    std::string file;
    size_t pos = 0;
    int line = 1, col = 1;
    Token cur;

    Lexer(const std::string& s, std::string f) : src(s), file(std::move(f)) { advance(); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur.span); }

    void bump(char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '#' || (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/')) {
                while (pos < src.size() && src[pos] != '\n') bump(src[pos]);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump(c);
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_ws();
        cur = Token{};
        cur.span = {file, line, col};
        if (pos >= src.size()) {
            cur.kind = Tok::End;
            return;
        }
        char c = src[pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                id += src[pos];
                bump(src[pos]);
            }
            cur.kind = Tok::Ident;
            cur.text = std::move(id);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Value v = 0;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                v = v * 10 + (src[pos] - '0');
                bump(src[pos]);
            }
            cur.kind = Tok::Number;
            cur.number = v;
            return;
        }
        if (c == '"') {
            bump(c);
            std::string s;
            while (pos < src.size() && src[pos] != '"') {
                s += src[pos];
                bump(src[pos]);
            }
            if (pos >= src.size()) throw ParseError("unterminated string", cur.span);
            bump('"');
            cur.kind = Tok::String;
            cur.text = std::move(s);
            return;
        }
        // multi-char punctuation
        static const char* two[] = {"&&", "||", "==", "!=", "<=", ">=", "->", ":=", ".."};
        for (const char* p : two) {
            if (src.compare(pos, 2, p) == 0) {
                cur.kind = Tok::Punct;
                cur.text = p;
                bump(src[pos]);
                bump(src[pos]);
                return;
            }
        }
        cur.kind = Tok::Punct;
        cur.text = std::string(1, c);
        bump(c);
    }

    bool is_ident(const char* t) const { return cur.kind == Tok::Ident && cur.text == t; }
    bool is_punct(const char* t) const { return cur.kind == Tok::Punct && cur.text == t; }

    bool accept_ident(const char* t) {
        if (!is_ident(t)) return false;
        advance();
        return true;
    }
    bool accept_punct(const char* t) {
        if (!is_punct(t)) return false;
        advance();
        return true;
    }
    void expect_punct(const char* t) {
        if (!accept_punct(t)) fail(std::string("expected '") + t + "'");
    }
    std::string expect_ident(const char* what) {
        if (cur.kind != Tok::Ident) fail(std::string("expected ") + what);
        std::string s = cur.text;
        advance();
        return s;
    }
    Value expect_number() {
        bool neg = accept_punct("-");
        if (cur.kind != Tok::Number) fail("expected number");
        Value v = cur.number;
        advance();
        return neg ? -v : v;
    }
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

Expr parse_expr(Lexer& lx);  // full (|| level)

Expr parse_primary(Lexer& lx) {
    SourceSpan span = lx.cur.span;
    if (lx.accept_punct("(")) {
        Expr e = parse_expr(lx);
        lx.expect_punct(")");
        return e;
    }
    if (lx.accept_punct("!")) {
        Expr e = Expr::unary(ExprKind::Not, parse_primary(lx));
        e.span = span;
        return e;
    }
    if (lx.accept_punct("-")) {
        Expr e = Expr::unary(ExprKind::Neg, parse_primary(lx));
        e.span = span;
        return e;
    }
    if (lx.cur.kind == Tok::Number) {
        Expr e = Expr::constant(lx.cur.number);
        e.span = span;
        lx.advance();
        return e;
    }
    if (lx.cur.kind == Tok::Ident) {
        std::string id = lx.cur.text;
        lx.advance();
        if (id == "true") return Expr::constant(1);
        if (id == "false") return Expr::constant(0);
        if (id == "after" && lx.is_punct("(")) {
            // after(S, c)  ≡  elapsed(S) >= c
            lx.advance();
            std::string state = lx.expect_ident("state name");
            while (lx.accept_punct(".")) state += "." + lx.expect_ident("state name");
            lx.expect_punct(",");
            Value c = lx.expect_number();
            lx.expect_punct(")");
            Expr e = Expr::binary(ExprKind::Ge, Expr::timer(state), Expr::constant(c));
            e.span = span;
            return e;
        }
        if (id == "elapsed" && lx.is_punct("(")) {
            lx.advance();
            std::string state = lx.expect_ident("state name");
            while (lx.accept_punct(".")) state += "." + lx.expect_ident("state name");
            lx.expect_punct(")");
            Expr e = Expr::timer(state);
            e.span = span;
            return e;
        }
        if ((id == "min" || id == "max") && lx.is_punct("(")) {
            lx.advance();
            Expr a = parse_expr(lx);
            lx.expect_punct(",");
            Expr b = parse_expr(lx);
            lx.expect_punct(")");
            Expr e = Expr::binary(id == "min" ? ExprKind::Min : ExprKind::Max, std::move(a),
                                  std::move(b));
            e.span = span;
            return e;
        }
        // dotted state path
        std::string name = id;
        while (lx.is_punct(".")) {
            lx.advance();
            name += "." + lx.expect_ident("state name");
        }
        Expr e = Expr::var(name);  // bind() may turn this into a StateRef
        e.span = span;
        return e;
    }
    lx.fail("expected expression");
}

Expr parse_additive(Lexer& lx) {
    Expr e = parse_primary(lx);
    for (;;) {
        if (lx.accept_punct("+"))
            e = Expr::binary(ExprKind::Add, std::move(e), parse_primary(lx));
        else if (lx.accept_punct("-"))
            e = Expr::binary(ExprKind::Sub, std::move(e), parse_primary(lx));
        else
            return e;
    }
}

Expr parse_comparison(Lexer& lx) {
    Expr e = parse_additive(lx);
    ExprKind k;
    if (lx.is_punct("==") || lx.is_punct("="))
        k = ExprKind::Eq;
    else if (lx.is_punct("!="))
        k = ExprKind::Ne;
    else if (lx.is_punct("<="))
        k = ExprKind::Le;
    else if (lx.is_punct(">="))
        k = ExprKind::Ge;
    else if (lx.is_punct("<"))
        k = ExprKind::Lt;
    else if (lx.is_punct(">"))
        k = ExprKind::Gt;
    else
        return e;
    lx.advance();
    return Expr::binary(k, std::move(e), parse_additive(lx));
}

Expr parse_and(Lexer& lx) {
    Expr e = parse_comparison(lx);
    while (lx.accept_punct("&&")) e = Expr::binary(ExprKind::And, std::move(e), parse_comparison(lx));
    return e;
}

Expr parse_expr(Lexer& lx) {
    Expr e = parse_and(lx);
    while (lx.accept_punct("||")) e = Expr::binary(ExprKind::Or, std::move(e), parse_and(lx));
    return e;
}

// ---------------------------------------------------------------------------
// LTL
// ---------------------------------------------------------------------------

LtlFormula parse_ltl_formula(Lexer& lx);

bool at_prefix_op(const Lexer& lx) {
    return lx.is_ident("G") || lx.is_ident("F") || lx.is_ident("X");
}

LtlFormula parse_ltl_unary(Lexer& lx) {
    if (at_prefix_op(lx)) {
        std::string op = lx.cur.text;
        lx.advance();
        LtlFormula inner = parse_ltl_formula(lx);
        LtlKind k = op == "G" ? LtlKind::Globally : op == "F" ? LtlKind::Finally : LtlKind::Next;
        return LtlFormula::unary(k, std::move(inner));
    }
    if (lx.is_punct("!")) {
        // may negate a temporal subformula: ! G p
        Lexer probe = lx;
        probe.advance();
        if (at_prefix_op(probe) || probe.is_punct("(")) {
            lx.advance();
            if (lx.is_punct("(")) {
                lx.advance();
                LtlFormula inner = parse_ltl_formula(lx);
                lx.expect_punct(")");
                return LtlFormula::unary(LtlKind::Not, std::move(inner));
            }
            return LtlFormula::unary(LtlKind::Not, parse_ltl_unary(lx));
        }
        // plain state-formula negation, handled by the expression parser
        return LtlFormula::make_atom(parse_comparison(lx));
    }
    if (lx.is_punct("(")) {
        lx.advance();
        LtlFormula inner = parse_ltl_formula(lx);
        lx.expect_punct(")");
        return inner;
    }
    return LtlFormula::make_atom(parse_comparison(lx));
}

LtlFormula parse_ltl_and(Lexer& lx) {
    LtlFormula f = parse_ltl_unary(lx);
    while (lx.accept_punct("&&"))
        f = LtlFormula::binary(LtlKind::And, std::move(f), parse_ltl_unary(lx));
    return f;
}

LtlFormula parse_ltl_or(Lexer& lx) {
    LtlFormula f = parse_ltl_and(lx);
    while (lx.accept_punct("||"))
        f = LtlFormula::binary(LtlKind::Or, std::move(f), parse_ltl_and(lx));
    return f;
}

LtlFormula parse_ltl_impl(Lexer& lx) {
    LtlFormula f = parse_ltl_or(lx);
    if (lx.accept_punct("->")) {
        LtlFormula rhs = parse_ltl_impl(lx);
        // a -> b  desugars to  !a || b
        return LtlFormula::binary(LtlKind::Or, LtlFormula::unary(LtlKind::Not, std::move(f)),
                                  std::move(rhs));
    }
    return f;
}

LtlFormula parse_ltl_formula(Lexer& lx) {
    LtlFormula f = parse_ltl_impl(lx);
    if (lx.is_ident("U") || lx.is_ident("W")) {
        LtlKind k = lx.is_ident("U") ? LtlKind::Until : LtlKind::WeakUntil;
        lx.advance();
        LtlFormula rhs = parse_ltl_formula(lx);  // right associative
        return LtlFormula::binary(k, std::move(f), std::move(rhs));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Model DSL
// ---------------------------------------------------------------------------

struct ModelParser {
    Lexer lx;
    Model m;
    struct PendingTransition {
        int id;
        std::string target_text;
        SourceSpan span;
    };
    std::vector<PendingTransition> pending;

    explicit ModelParser(const std::string& text, const std::string& file) : lx(text, file) {}

    Value parse_init_value(const Domain& dom) {
        if (lx.cur.kind == Tok::Ident && dom.kind == Domain::Enum) {
            for (size_t i = 0; i < dom.values.size(); ++i)
                if (dom.values[i] == lx.cur.text) {
                    lx.advance();
                    return static_cast<Value>(i);
                }
        }
        if (lx.accept_ident("true")) return 1;
        if (lx.accept_ident("false")) return 0;
        return lx.expect_number();
    }

    void parse_var(VarKind kind) {
        VariableDecl v;
        v.kind = kind;
        v.span = lx.cur.span;
        v.name = lx.expect_ident("variable name");
        if (m.var_index(v.name) >= 0)
            throw ParseError("duplicate declaration of '" + v.name + "'", v.span);
        lx.expect_punct(":");
        if (lx.accept_ident("bool")) {
            v.domain.kind = Domain::Bool;
        } else if (lx.accept_ident("int")) {
            v.domain.kind = Domain::Int;
            v.domain.lo = lx.expect_number();
            lx.expect_punct("..");
            v.domain.hi = lx.expect_number();
        } else if (lx.accept_ident("enum")) {
            v.domain.kind = Domain::Enum;
            lx.expect_punct("{");
            do {
                v.domain.values.push_back(lx.expect_ident("enum literal"));
            } while (lx.accept_punct(","));
            lx.expect_punct("}");
        } else {
            lx.fail("expected type (bool | int lo..hi | enum {...})");
        }
        if (!lx.accept_ident("init")) lx.fail("expected 'init'");
        v.initial = parse_init_value(v.domain);
        m.variables.push_back(std::move(v));
    }

    int new_state(std::string name, int parent, int machine, SourceSpan span) {
        ControlState s;
        s.name = std::move(name);
        s.index = static_cast<int>(m.states.size());
        s.parent = parent;
        s.machine = machine;
        s.span = span;
        m.states.push_back(std::move(s));
        return m.states.back().index;
    }

    void parse_transition(int source, int machine, bool is_do) {
        Transition t;
        t.id = static_cast<int>(m.transitions.size());
        t.source = source;
        t.is_do = is_do;
        t.span = lx.cur.span;
        t.guard = parse_expr(lx);
        if (lx.accept_punct("/")) {
            do {
                ActionAssign a;
                a.var_name = lx.expect_ident("variable name");
                lx.expect_punct(":=");
                if (lx.is_ident("UNDEF")) {
                    lx.advance();
                    lx.expect_punct("(");
                    a.undef_duration = lx.expect_number();
                    lx.expect_punct(",");
                    a.rhs = parse_expr(lx);
                    lx.expect_punct(")");
                } else {
                    a.rhs = parse_expr(lx);
                }
                t.actions.push_back(std::move(a));
            } while (lx.accept_punct(","));
        }
        lx.expect_punct("->");
        std::string target = lx.expect_ident("target state");
        while (lx.accept_punct(".")) target += "." + lx.expect_ident("state name");
        m.transitions.push_back(std::move(t));
        m.machines[static_cast<size_t>(machine)].transitions.push_back(m.transitions.back().id);
        pending.push_back({m.transitions.back().id, std::move(target), m.transitions.back().span});
    }

    void parse_state_body(int state, int machine) {
        lx.expect_punct("{");
        while (!lx.accept_punct("}")) {
            if (lx.accept_ident("state")) {
                SourceSpan span = lx.cur.span;
                std::string name = lx.expect_ident("state name");
                int child = new_state(name, state, machine, span);
                m.states[static_cast<size_t>(state)].children.push_back(child);
                if (lx.accept_ident("initial")) m.states[static_cast<size_t>(child)].is_initial = true;
                parse_state_body(child, machine);
            } else if (lx.accept_ident("on")) {
                parse_transition(state, machine, false);
            } else if (lx.accept_ident("do")) {
                parse_transition(state, machine, true);
            } else {
                lx.fail("expected 'state', 'on', 'do' or '}'");
            }
        }
    }

    void parse_machine() {
        SourceSpan span = lx.cur.span;
        std::string name = lx.expect_ident("machine name");
        StateMachine mach;
        mach.name = name;
        mach.root = new_state(name, -1, static_cast<int>(m.machines.size()), span);
        m.machines.push_back(mach);
        parse_state_body(mach.root, static_cast<int>(m.machines.size()) - 1);
    }

    void parse_requirement() {
        Requirement r;
        r.span = lx.cur.span;
        r.id = lx.expect_ident("requirement id");
        while (lx.accept_punct("-")) {
            // ids like REQ-001
            if (lx.cur.kind == Tok::Number) {
                std::ostringstream n;
                n.width(3);
                n.fill('0');
                n << lx.cur.number;
                r.id += "-" + n.str();
                lx.advance();
            } else {
                r.id += "-" + lx.expect_ident("requirement id");
            }
        }
        if (lx.cur.kind == Tok::String) {
            r.text = lx.cur.text;
            lx.advance();
        }
        if (lx.accept_ident("satisfies")) {
            do {
                ElementRef ref;
                SourceSpan span = lx.cur.span;
                std::string a = lx.expect_ident("element reference");
                while (lx.accept_punct(".")) a += "." + lx.expect_ident("state name");
                if (lx.accept_punct("->")) {
                    std::string b = lx.expect_ident("target state");
                    while (lx.accept_punct(".")) b += "." + lx.expect_ident("state name");
                    ref.kind = ElementRef::Transition;
                    ref.text = a + " -> " + b;
                    // resolved below once targets are known
                    ref.index = -1;
                    pending_links.push_back({static_cast<int>(m.requirements.size()),
                                             static_cast<int>(r.links.size()), a, b, span});
                } else {
                    ref.kind = ElementRef::State;
                    ref.text = a;
                    ref.index = m.state_index(a);
                    if (ref.index < 0)
                        throw ParseError("unknown state '" + a + "' in satisfy link", span);
                }
                r.links.push_back(std::move(ref));
            } while (lx.accept_punct(","));
        }
        if (lx.accept_ident("constraint")) {
            r.constraint = parse_ltl_formula(lx);
        }
        m.requirements.push_back(std::move(r));
    }

    struct PendingLink {
        int req;
        int link;
        std::string source, target;
        SourceSpan span;
    };
    std::vector<PendingLink> pending_links;

    Model run() {
        if (!lx.accept_ident("model")) lx.fail("expected model header");
        m.name = lx.expect_ident("model name");
        lx.expect_punct("{");
        while (!lx.accept_punct("}")) {
            if (lx.accept_ident("in"))
                parse_var(VarKind::Input);
            else if (lx.accept_ident("out"))
                parse_var(VarKind::Output);
            else if (lx.accept_ident("var"))
                parse_var(VarKind::Internal);
            else if (lx.accept_ident("machine"))
                parse_machine();
            else if (lx.accept_ident("req"))
                parse_requirement();
            else
                lx.fail("expected 'in', 'out', 'var', 'machine', 'req' or '}'");
        }
        if (lx.cur.kind != Tok::End) lx.fail("trailing input after model");

        // resolve transition targets
        for (const PendingTransition& p : pending) {
            int tgt = m.state_index(p.target_text);
            if (tgt == -1) throw ParseError("unknown target state '" + p.target_text + "'", p.span);
            if (tgt == -2)
                throw ParseError("ambiguous target state '" + p.target_text + "'", p.span);
            Transition& t = m.transitions[static_cast<size_t>(p.id)];
            t.target = tgt;
            if (m.states[static_cast<size_t>(tgt)].machine !=
                m.states[static_cast<size_t>(t.source)].machine)
                throw ParseError("transition target '" + p.target_text + "' in a different machine",
                                 p.span);
        }
        // resolve transition satisfy links
        for (const PendingLink& p : pending_links) {
            int src = m.state_index(p.source);
            int tgt = m.state_index(p.target);
            int found = -1;
            if (src >= 0 && tgt >= 0)
                for (const Transition& t : m.transitions)
                    if (t.source == src && t.target == tgt && !t.is_do) {
                        if (found >= 0)
                            throw ParseError("ambiguous transition link '" + p.source + " -> " +
                                                 p.target + "'",
                                             p.span);
                        found = t.id;
                    }
            if (found < 0)
                throw ParseError("no transition '" + p.source + " -> " + p.target + "'", p.span);
            m.requirements[static_cast<size_t>(p.req)].links[static_cast<size_t>(p.link)].index =
                found;
        }
        bind(m);
        return std::move(m);
    }
};

}  // namespace

Model parse_model(const std::string& text, const std::string& filename) {
    ModelParser p(text, filename);
    return p.run();
}

LtlFormula parse_ltl(const std::string& text) {
    Lexer lx(text, "<ltl>");
    LtlFormula f = parse_ltl_formula(lx);
    if (lx.cur.kind != Tok::End) lx.fail("trailing input after formula");
    return f;
}

LtlFormula parse_ltl(const std::string& text, const Model& model) {
    LtlFormula f = parse_ltl(text);
    try {
        bind_formula(model, f);
    } catch (const BindError& e) {
        throw ParseError(e.what(), {"<ltl>", 1, 1});
    }
    return f;
}

Expr parse_state_formula(const std::string& text, const Model& model) {
    Lexer lx(text, "<expr>");
    Expr e = parse_expr(lx);
    if (lx.cur.kind != Tok::End) lx.fail("trailing input after expression");
    try {
        bind_formula(model, e);
    } catch (const BindError& err) {
        throw ParseError(err.what(), {"<expr>", 1, 1});
    }
    return e;
}

TraceLog parse_trace_log(const std::string& text, const Model& model,
                         const std::string& filename) {
    TraceLog log;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    Value last_t = -1;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        Value t = -1;
        bool first = true;
        while (ls >> tok) {
            size_t eq = tok.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected name=value", {filename, lineno, 1});
            std::string name = tok.substr(0, eq);
            std::string val = tok.substr(eq + 1);
            Value v = 0;
            try {
                v = std::stoll(val);
            } catch (...) {
                throw ParseError("bad value '" + val + "'", {filename, lineno, 1});
            }
            if (first) {
                if (name != "t") throw ParseError("record must start with t=<ms>", {filename, lineno, 1});
                t = v;
                if (t < last_t)
                    throw ParseError("decreasing timestamp t=" + std::to_string(t),
                                     {filename, lineno, 1});
                last_t = t;
                first = false;
                continue;
            }
            int vi = model.var_index(name);
            if (vi < 0)
                throw ParseError("unknown variable '" + name + "'", {filename, lineno, 1});
            if (model.var(vi).kind == VarKind::Internal)
                throw ParseError("variable '" + name + "' is internal and not observable",
                                 {filename, lineno, 1});
            log.records.push_back({t, name, vi, v});
        }
        if (!first && t >= 0 && log.records.empty() ) {
            // a bare `t=...` line is allowed and just advances time
        }
    }
    return log;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string domain_text(const Domain& d) {
    switch (d.kind) {
        case Domain::Bool:
            return "bool";
        case Domain::Int:
            return "int " + std::to_string(d.lo) + ".." + std::to_string(d.hi);
        case Domain::Enum: {
            std::string s = "enum { ";
            for (size_t i = 0; i < d.values.size(); ++i)
                s += (i ? ", " : "") + d.values[i];
            return s + " }";
        }
    }
    return "?";
}

std::string init_text(const VariableDecl& v) {
    if (v.domain.kind == Domain::Enum)
        return v.domain.values[static_cast<size_t>(v.initial)];
    return std::to_string(v.initial);
}

void print_state(const Model& m, int si, std::ostream& out, int indent) {
    const ControlState& s = m.states[static_cast<size_t>(si)];
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (s.parent >= 0) {
        out << pad << "state " << s.name << (s.is_initial ? " initial" : "") << " {\n";
    }
    for (int c : s.children) print_state(m, c, out, s.parent >= 0 ? indent + 1 : indent);
    std::string tpad = s.parent >= 0 ? pad + "  " : pad;
    for (const Transition& t : m.transitions) {
        if (t.source != si) continue;
        out << tpad << (t.is_do ? "do " : "on ") << to_string(t.guard);
        if (!t.actions.empty()) {
            out << " / ";
            for (size_t i = 0; i < t.actions.size(); ++i) {
                const ActionAssign& a = t.actions[i];
                out << (i ? ", " : "") << a.var_name << " := ";
                if (a.undef_duration)
                    out << "UNDEF(" << *a.undef_duration << ", " << to_string(a.rhs) << ")";
                else
                    out << to_string(a.rhs);
            }
        }
        out << " -> " << m.states[static_cast<size_t>(t.target)].name << "\n";
    }
    if (s.parent >= 0) out << pad << "}\n";
}

}  // namespace

std::string pretty_print(const Model& m) {
    std::ostringstream out;
    out << "model " << m.name << " {\n";
    for (const VariableDecl& v : m.variables) {
        const char* kw = v.kind == VarKind::Input ? "in" : v.kind == VarKind::Output ? "out" : "var";
        out << "  " << kw << " " << v.name << " : " << domain_text(v.domain) << " init "
            << init_text(v) << "\n";
    }
    for (const StateMachine& mach : m.machines) {
        out << "\n  machine " << mach.name << " {\n";
        print_state(m, mach.root, out, 2);
        out << "  }\n";
    }
    if (!m.requirements.empty()) out << "\n";
    for (const Requirement& r : m.requirements) {
        out << "  req " << r.id << " \"" << r.text << "\"";
        if (!r.links.empty()) {
            out << " satisfies ";
            for (size_t i = 0; i < r.links.size(); ++i) out << (i ? ", " : "") << r.links[i].text;
        }
        if (r.constraint) out << " constraint " << to_string(*r.constraint);
        out << "\n";
    }
    out << "}\n";
    return out.str();
}

std::string print_trace_log(const TraceLog& log) {
    std::ostringstream out;
    Value cur_t = -1;
    bool line_open = false;
    for (const TraceLog::Record& r : log.records) {
        if (r.t != cur_t) {
            if (line_open) out << "\n";
            out << "t=" << r.t;
            cur_t = r.t;
            line_open = true;
        }
        out << " " << r.var << "=" << r.value;
    }
    if (line_open) out << "\n";
    return out.str();
}

}  // namespace mbtg
