#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace mbtg {

using Value = long long;

struct SourceSpan {
    std::string file;
    int line = 0;
    int col = 0;
};

enum class ExprKind {
    Const,
    VarRef,        // declared variable
    StateRef,      // control-state activity atom
    TimerElapsed,  // model time minus entry time of a control state
    Not,
    Neg,
    And,
    Or,
    Add,
    Sub,
    Min,
    Max,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
};

/// State-formula / arithmetic expression tree. Boolean results are 0/1 and
/// may be used wherever an integer is expected.
struct Expr {
    ExprKind kind = ExprKind::Const;
    Value literal = 0;
    std::string name;   // VarRef / StateRef / TimerElapsed: identifier as written
    int sym = -1;       // resolved slot or state index, -1 before binding
    std::vector<Expr> kids;
    SourceSpan span;

    static Expr constant(Value v);
    static Expr var(std::string name);
    static Expr state(std::string name);
    static Expr timer(std::string state_name);
    static Expr unary(ExprKind k, Expr e);
    static Expr binary(ExprKind k, Expr a, Expr b);

    bool is_bool_op() const;
};

bool expr_equal(const Expr& a, const Expr& b);

/// Canonical text form; parseable by the frontend.
std::string to_string(const Expr& e);

/// Pushes negations down to atoms and drops double negations.
Expr negate(const Expr& e);

/// Flattened conjunction, both operands kept in order.
Expr conj(Expr a, Expr b);
Expr disj(Expr a, Expr b);

/// All VarRef names in the expression (with duplicates removed, in
/// first-occurrence order).
std::vector<std::string> referenced_vars(const Expr& e);
std::vector<std::string> referenced_states(const Expr& e);
std::vector<std::string> referenced_timers(const Expr& e);
std::vector<Value> referenced_constants(const Expr& e);

}  // namespace mbtg
