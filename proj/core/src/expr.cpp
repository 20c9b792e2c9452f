#include "mbtg/expr.hpp"

#include <algorithm>
#include <sstream>

namespace mbtg {

Expr Expr::constant(Value v) {
    Expr e;
    e.kind = ExprKind::Const;
    e.literal = v;
    return e;
}

Expr Expr::var(std::string name) {
    Expr e;
    e.kind = ExprKind::VarRef;
    e.name = std::move(name);
    return e;
}

Expr Expr::state(std::string name) {
    Expr e;
    e.kind = ExprKind::StateRef;
    e.name = std::move(name);
    return e;
}

Expr Expr::timer(std::string state_name) {
    Expr e;
    e.kind = ExprKind::TimerElapsed;
    e.name = std::move(state_name);
    return e;
}

Expr Expr::unary(ExprKind k, Expr a) {
    Expr e;
    e.kind = k;
    e.kids.push_back(std::move(a));
    return e;
}

Expr Expr::binary(ExprKind k, Expr a, Expr b) {
    Expr e;
    e.kind = k;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}

bool Expr::is_bool_op() const {
    switch (kind) {
        case ExprKind::Not:
        case ExprKind::And:
        case ExprKind::Or:
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge:
        case ExprKind::StateRef:
            return true;
        default:
            return false;
    }
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.literal != b.literal || a.name != b.name) return false;
    if (a.kids.size() != b.kids.size()) return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!expr_equal(a.kids[i], b.kids[i])) return false;
    return true;
}

namespace {

int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Or: return 1;
        case ExprKind::And: return 2;
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge: return 3;
        case ExprKind::Add:
        case ExprKind::Sub: return 4;
        case ExprKind::Not:
        case ExprKind::Neg: return 5;
        default: return 6;
    }
}

const char* op_text(ExprKind k) {
    switch (k) {
        case ExprKind::And: return " && ";
        case ExprKind::Or: return " || ";
        case ExprKind::Add: return " + ";
        case ExprKind::Sub: return " - ";
        case ExprKind::Eq: return " == ";
        case ExprKind::Ne: return " != ";
        case ExprKind::Lt: return " < ";
        case ExprKind::Le: return " <= ";
        case ExprKind::Gt: return " > ";
        case ExprKind::Ge: return " >= ";
        default: return "?";
    }
}

void print(const Expr& e, std::ostream& out, int parent_prec) {
    int prec = precedence(e.kind);
    switch (e.kind) {
        case ExprKind::Const:
            out << e.literal;
            return;
        case ExprKind::VarRef:
        case ExprKind::StateRef:
            out << e.name;
            return;
        case ExprKind::TimerElapsed:
            out << "elapsed(" << e.name << ")";
            return;
        case ExprKind::Min:
        case ExprKind::Max:
            out << (e.kind == ExprKind::Min ? "min(" : "max(");
            print(e.kids[0], out, 0);
            out << ", ";
            print(e.kids[1], out, 0);
            out << ")";
            return;
        case ExprKind::Not:
            out << "!";
            print(e.kids[0], out, prec);
            return;
        case ExprKind::Neg:
            out << "-";
            print(e.kids[0], out, prec);
            return;
        default: {
            bool paren = prec < parent_prec;
            if (paren) out << "(";
            // comparisons are non-associative, require parens on equal
            // precedence on either side
            print(e.kids[0], out, prec + (prec == 3 ? 1 : 0));
            out << op_text(e.kind);
            print(e.kids[1], out, prec + (prec == 3 ? 1 : 0));
            if (paren) out << ")";
            return;
        }
    }
}

ExprKind flipped(ExprKind k) {
    switch (k) {
        case ExprKind::Eq: return ExprKind::Ne;
        case ExprKind::Ne: return ExprKind::Eq;
        case ExprKind::Lt: return ExprKind::Ge;
        case ExprKind::Le: return ExprKind::Gt;
        case ExprKind::Gt: return ExprKind::Le;
        case ExprKind::Ge: return ExprKind::Lt;
        default: return k;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream out;
    print(e, out, 0);
    return out.str();
}

Expr negate(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Not:
            return e.kids[0];
        case ExprKind::And: {
            Expr r = Expr::binary(ExprKind::Or, negate(e.kids[0]), negate(e.kids[1]));
            return r;
        }
        case ExprKind::Or:
            return Expr::binary(ExprKind::And, negate(e.kids[0]), negate(e.kids[1]));
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
        case ExprKind::Le:
        case ExprKind::Gt:
        case ExprKind::Ge: {
            Expr r = e;
            r.kind = flipped(e.kind);
            return r;
        }
        case ExprKind::Const:
            return Expr::constant(e.literal ? 0 : 1);
        default:
            return Expr::unary(ExprKind::Not, e);
    }
}

Expr conj(Expr a, Expr b) { return Expr::binary(ExprKind::And, std::move(a), std::move(b)); }
Expr disj(Expr a, Expr b) { return Expr::binary(ExprKind::Or, std::move(a), std::move(b)); }

namespace {

template <typename Pred>
void collect_names(const Expr& e, Pred pred, std::vector<std::string>& out) {
    if (pred(e)) {
        if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    }
    for (const Expr& k : e.kids) collect_names(k, pred, out);
}

}  // namespace

std::vector<std::string> referenced_vars(const Expr& e) {
    std::vector<std::string> out;
    collect_names(e, [](const Expr& x) { return x.kind == ExprKind::VarRef; }, out);
    return out;
}

std::vector<std::string> referenced_states(const Expr& e) {
    std::vector<std::string> out;
    collect_names(e, [](const Expr& x) { return x.kind == ExprKind::StateRef; }, out);
    return out;
}

std::vector<std::string> referenced_timers(const Expr& e) {
    std::vector<std::string> out;
    collect_names(e, [](const Expr& x) { return x.kind == ExprKind::TimerElapsed; }, out);
    return out;
}

std::vector<Value> referenced_constants(const Expr& e) {
    std::vector<Value> out;
    struct Walk {
        std::vector<Value>& out;
        void operator()(const Expr& x) {
            if (x.kind == ExprKind::Const &&
                std::find(out.begin(), out.end(), x.literal) == out.end())
                out.push_back(x.literal);
            for (const Expr& k : x.kids) (*this)(k);
        }
    } walk{out};
    walk(e);
    return out;
}

}  // namespace mbtg
