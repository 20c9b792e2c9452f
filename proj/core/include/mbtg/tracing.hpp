#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbtg/coverage.hpp"
#include "mbtg/ir.hpp"
#include "mbtg/solver.hpp"

namespace mbtg {

struct UnlinkedRequirement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LinkKind { SatisfyElement, Implication, ConjunctionRefinement, PairwiseCombination };

const char* to_string(LinkKind k);

struct TraceLink {
    int test_case = -1;
    LinkKind kind = LinkKind::SatisfyElement;
    std::string evidence;  // how the link was established (element / check id)
};

struct TraceabilityMatrix {
    std::map<std::string, std::vector<TraceLink>> by_requirement;
    std::map<int, std::vector<std::string>> by_test_case;
    std::vector<std::string> uncovered;  // requirements without any link
};

/// Synthesis provenance for refined test cases.
struct CaseMeta {
    int parent = -1;                      // refined case (index into cases)
    std::vector<std::string> added_vars;  // variables introduced by the added conjunct
};

struct CompileResult {
    std::vector<SymbolicTestCase> cases;  // input cases plus synthesized refinements
    std::vector<CaseMeta> meta;           // parallel to cases
    TraceabilityMatrix matrix;
};

enum class AssuranceLevel { L1 = 1, L2 = 2, L3 = 3, L45 = 45 };

/// Witness characterization of a requirement: its explicit constraint if
/// present, else the disjunction of F(coverage formula) over its satisfy
/// links. Throws UnlinkedRequirement when neither exists.
LtlFormula characterize(const Requirement& req, const Model& model);

/// Sound propositional entailment a ⇒ b over state formulas, decided by
/// enumeration of the referenced variable domains, control-state
/// configurations and timer boundary values.
bool prop_entails(const Model& model, const Expr& a, const Expr& b);

/// Applies the four tracing rules (satisfy-link transfer; bounded entailment;
/// conjunction refinement; pairwise combination, to refinement level 2).
/// Satisfiability and entailment evidence comes from `solver` and is recorded
/// in the links.
CompileResult compile_traceability(const Model& model, std::vector<SymbolicTestCase> cases,
                                   Solver& solver);

/// Test case ids (indices into CompileResult::cases) forming the suite for an
/// assurance level, in deterministic order.
std::vector<int> select_suite(const CompileResult& compiled, AssuranceLevel level,
                              const Model& model);

/// Tabular text export: one line per (requirement, test case, link kind,
/// evidence).
std::string export_matrix(const CompileResult& compiled);

}  // namespace mbtg
