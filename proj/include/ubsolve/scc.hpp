#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "ubsolve/interpretation.hpp"
#include "ubsolve/term.hpp"

namespace ubsolve {

// Directed graph over constraint indices. An edge c1 -> c2 means c1 consumes
// a symbol that c2 defines, so c2 must be solved first.
struct CallGraph {
  std::size_t nodes = 0;
  std::vector<std::set<std::size_t>> edges;  // edges[u] = successors of u
};

// SCCs of the call graph in reverse topological order of the condensation:
// dependencies first. Ties broken by smallest constraint index.
struct SccPlan {
  std::vector<std::vector<std::size_t>> sccs;
};

// Symbols a constraint defines: the outermost application roots of its lhs
// (the maximal arithmetic context is peeled off). Symbols it consumes: every
// symbol below those roots plus every symbol of the rhs.
struct ConstraintRoles {
  std::set<std::string> defined;
  std::set<std::string> consumed;
};
ConstraintRoles constraint_roles(const Constraint& c);

CallGraph build_call_graph(const ConstraintSystem& cs);

SccPlan decompose(const CallGraph& graph);

struct SccSolveResult {
  std::optional<Interpretation> model;  // set on success
  std::size_t failed_scc = 0;           // set on failure
  Interpretation partial;               // model accumulated before failure
};

// Solves one subsystem given the already-fixed partial interpretation;
// returns the interpretations of the remaining symbols, or nullopt.
using SccCallback = std::function<std::optional<Interpretation>(
    const ConstraintSystem& subsystem, const Interpretation& fixed)>;

// Iterates over the plan, extending the model one SCC at a time. The partial
// model is only ever added to, never modified.
SccSolveResult solve_by_scc(const ConstraintSystem& cs,
                            const SccCallback& callback);

}  // namespace ubsolve
