#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mbtg/expr.hpp"
#include "mbtg/ltl.hpp"

namespace mbtg {

enum class VarKind { Input, Output, Internal };

struct Domain {
    enum Kind { Bool, Int, Enum } kind = Bool;
    Value lo = 0, hi = 1;              // Int bounds; Bool/Enum derive 0..n-1
    std::vector<std::string> values;   // Enum literals

    bool contains(Value v) const { return v >= low() && v <= high(); }
    Value low() const { return kind == Int ? lo : 0; }
    Value high() const {
        if (kind == Int) return hi;
        if (kind == Bool) return 1;
        return static_cast<Value>(values.size()) - 1;
    }
};

struct VariableDecl {
    std::string name;
    VarKind kind = VarKind::Internal;
    Domain domain;
    Value initial = 0;
    SourceSpan span;
};

struct ActionAssign {
    std::string var_name;
    int var = -1;  // variable index after binding
    Expr rhs;
    // y := UNDEF(dur, c): value settles to `rhs` after `undef_duration` ms of
    // unconstrained output
    std::optional<Value> undef_duration;
};

struct Transition {
    int id = -1;
    int source = -1;  // state index
    int target = -1;
    Expr guard;
    std::vector<ActionAssign> actions;
    bool is_do = false;  // encodes a do-activity; excluded from coverage
    int depth = 0;       // nesting level of source (machine root = 0)
    SourceSpan span;
};

struct ControlState {
    std::string name;
    std::string path;  // dotted from machine root, e.g. "FLASH_CTRL.EMER_ON.EMER_ACTIVE"
    int index = -1;
    int machine = -1;
    int parent = -1;
    int depth = 0;  // machine root = 0
    std::vector<int> children;
    int initial_child = -1;
    bool is_initial = false;
    SourceSpan span;

    bool is_basic() const { return children.empty(); }
};

struct StateMachine {
    std::string name;
    int root = -1;  // ControlState index; the machine body is the root state
    std::vector<int> transitions;
    std::vector<int> basic_states;  // filled by binding
};

struct ElementRef {
    enum Kind { State, Transition } kind = State;
    int index = -1;
    std::string text;  // as written, for diagnostics / printing
};

struct Requirement {
    std::string id;
    std::string text;
    std::vector<ElementRef> links;
    std::optional<LtlFormula> constraint;
    SourceSpan span;
};

struct Diagnostic {
    std::string element;  // path of the offending element
    std::string message;
};

struct BindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AmbiguityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Valuation slot layout:
///   slot 0              : model time t̂ (ms)
///   1 .. nvars          : declared variables
///   then one bool slot per basic control state
///   then one timer slot per control state (entry time t_S)
struct Model {
    std::string name;
    std::vector<VariableDecl> variables;
    std::vector<ControlState> states;
    std::vector<StateMachine> machines;
    std::vector<Transition> transitions;
    std::vector<Requirement> requirements;

    // symbol layout (set by bind())
    int slot_count = 0;
    std::vector<Diagnostic> bind_diagnostics;  // unresolved references etc.
    std::vector<int> var_slot;          // variable index -> slot
    std::vector<int> state_active_slot; // state index -> slot (-1 for composite)
    std::vector<int> timer_slot;        // state index -> slot
    std::vector<std::vector<int>> basic_descendants;  // state index -> basic state indices

    int time_slot() const { return 0; }

    int var_index(const std::string& name) const;       // -1 if unknown
    int state_index(const std::string& name_or_path) const;  // -1 if unknown, -2 if ambiguous
    const VariableDecl& var(int i) const { return variables[static_cast<size_t>(i)]; }

    bool state_is_ancestor_or_self(int anc, int desc) const;
};

/// Resolves names in guards, actions, requirement links/constraints; computes
/// depths, slots and descendant tables. Resolution problems are recorded in
/// bind_diagnostics and surface via validate(); hard structural errors throw
/// BindError.
void bind(Model& model);

/// One diagnostic per violated IR invariant; empty iff the model is well formed.
std::vector<Diagnostic> validate(const Model& model);

/// Binds a standalone formula against an already-bound model; throws BindError
/// on unresolved identifiers.
void bind_formula(const Model& model, LtlFormula& f);
void bind_formula(const Model& model, Expr& e);

struct Valuation {
    std::vector<Value> slots;

    Value time() const { return slots[0]; }
    bool operator==(const Valuation& o) const = default;
};

Valuation initial_valuation(const Model& model);

/// Evaluates a bound expression. StateRef on a composite state is the
/// disjunction of its basic descendants.
Value eval_expr(const Expr& e, const Model& model, const Valuation& v);

/// Flattened (postfix) form of a bound expression for repeated evaluation
/// over many valuations; agrees with eval_expr on every input.
class CompiledExpr {
  public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const Model& m);

    Value eval(const Valuation& v) const;

  private:
    struct Ins {
        ExprKind kind = ExprKind::Const;
        Value lit = 0;   // Const
        int slot = 0;    // VarRef / TimerElapsed: resolved slot
        int begin = 0;   // StateRef: range into state_slots_
        int end = 0;
    };
    std::vector<Ins> code_;
    std::vector<int> state_slots_;  // basic activity slots, per StateRef
    mutable std::vector<Value> stack_;
};

/// The transition (id) of maximal depth among those enabled in `v` for
/// `machine`; nullopt when none. Throws AmbiguityError when two enabled
/// transitions share the maximal depth.
std::optional<int> effective_priority(const Model& model, const Valuation& v, int machine);

/// All (writer machine, reader machine, variable) triples with writer != reader.
std::set<std::tuple<int, int, int>> writer_reader_pairs(const Model& model);

/// Variables read by a machine (guards and action right-hand sides) and
/// written by it (action targets).
std::set<int> machine_reads(const Model& model, int machine);
std::set<int> machine_writes(const Model& model, int machine);

}  // namespace mbtg
