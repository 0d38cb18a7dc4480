#pragma once

#include <variant>
#include <vector>

#include "ubsolve/interpretation.hpp"
#include "ubsolve/term.hpp"

namespace ubsolve {

// Record of what a simplification pass fixed, in application order.
// Replaying the trace extends any model of the simplified system to a model
// of the original system.
struct SimplificationTrace {
  struct Instantiated {
    std::size_t constraint_index;
    std::string variable;  // replaced by 0
  };
  struct Eliminated {
    Symbol symbol;  // bound to the constant-zero function of its arity
  };
  struct Propagated {
    Symbol symbol;
    MaxPolynomial definition;
  };
  using Step = std::variant<Instantiated, Eliminated, Propagated>;

  std::vector<Step> steps;

  bool empty() const { return steps.empty(); }
  void append(const SimplificationTrace& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
  }
};

struct SimplifyResult {
  ConstraintSystem system;
  SimplificationTrace trace;
};

// Substitutes variables occurring only on the left-hand side of a constraint
// with 0 (sound: interpretations are weakly monotone).
SimplifyResult instantiate(const ConstraintSystem& cs);

// Fixes symbols with no left-hand-side occurrence anywhere in the system to
// the zero function and replaces their applications by 0; iterated.
SimplifyResult eliminate(const ConstraintSystem& cs);

// Restricted inlining: a constraint f(x1,..,xk) >= r defines f when the lhs
// arguments are pairwise-distinct variables, f occurs on no other lhs, r
// contains only already-bound symbols, f does not occur in r, and vars(r)
// are among the lhs arguments.
SimplifyResult propagate(const ConstraintSystem& cs);

// Round-robin fixpoint of the three passes. Fuel-capped at 1000 rounds.
SimplifyResult simplify_all(const ConstraintSystem& cs);

// Extends a model of the simplified system to the original signature using
// the trace's bindings.
Interpretation replay(const SimplificationTrace& trace,
                      const Interpretation& partial_model);

}  // namespace ubsolve
