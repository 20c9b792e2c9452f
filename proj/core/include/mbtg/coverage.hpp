#pragma once

#include <string>
#include <vector>

#include "mbtg/ir.hpp"
#include "mbtg/ltl.hpp"

namespace mbtg {

enum class Strategy {
    BasicControlState,
    Transition,
    Mcdc,
    HierarchicTransition,
    EqclassBoundary,
    ControlStatePairs,
    Interface,
    Block,
};

const char* to_string(Strategy s);
std::vector<Strategy> all_strategies();
Strategy strategy_from_string(const std::string& name);  // throws std::invalid_argument

struct SymbolicTestCase {
    int id = -1;
    Strategy strategy = Strategy::BasicControlState;
    LtlFormula formula;               // always F⟨state formula⟩
    std::vector<ElementRef> covered;  // model elements exercised by the case
    std::vector<std::string> requirements;  // requirement ids, filled by tracing
    int refinement_level = 0;         // 0 = generated; n = refined n times
};

struct McdcObligation {
    Expr decision;
    Expr condition;
    std::vector<bool> vec_true;   // condition valuations; condition holds
    std::vector<bool> vec_false;  // differs only in the condition; flips the decision
    bool feasible = true;
};

/// Masking MC/DC: one obligation per atomic condition of `decision`; the pair
/// of vectors differs only in that condition and flips the decision.
/// Infeasible conditions (no independent effect) are returned with
/// feasible=false and empty vectors.
std::vector<McdcObligation> mcdc_obligations(const Expr& decision);

/// Symbolic test cases for one coverage strategy on a validated model.
/// Infeasible cases are generated as well; the solver reports them as
/// UnsatAtBound.
std::vector<SymbolicTestCase> gen(Strategy strategy, const Model& model);

/// All strategies in declaration order with globally unique, stable ids.
std::vector<SymbolicTestCase> gen_all(const Model& model);

}  // namespace mbtg
