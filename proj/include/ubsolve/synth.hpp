#pragma once

#include <map>
#include <string>
#include <vector>

#include "ubsolve/interpretation.hpp"
#include "ubsolve/polynomial.hpp"
#include "ubsolve/term.hpp"

namespace ubsolve {

// Polynomial in the coefficient variables, with natural coefficients.
// Monomial positions are coefficient-variable ids.
using CoeffPoly = Poly<Nat>;

inline bool coeff_is_zero(const CoeffPoly& p) { return p.is_zero(); }
inline bool coeff_dominates(const CoeffPoly& a, const CoeffPoly& b) {
  return a.dominates(b);
}

// Max-polynomial in the constraint variables whose coefficients are
// CoeffPolys: the template currency of synthesis.
using AbstractPolynomial = MaxPoly<CoeffPoly>;

struct CoeffVar {
  unsigned id = 0;
  std::string symbol;     // origin symbol
  unsigned branch = 0;    // origin branch within the template
  Monomial monomial;      // origin monomial (over argument positions)

  unsigned origin_degree() const { return monomial.total_degree(); }
};

struct TemplateOptions {
  // The linear template shares one constant coefficient across both
  // branches; this flag switches to an independent constant per branch.
  bool independent_constants = false;
};

// Allocates coefficient variables and remembers their origins for one
// synthesis run.
class CoeffAllocator {
 public:
  unsigned fresh(const std::string& symbol, unsigned branch,
                 const Monomial& m) {
    vars_.push_back({next_id_, symbol, branch, m});
    return next_id_++;
  }
  const std::vector<CoeffVar>& vars() const { return vars_; }

 private:
  unsigned next_id_ = 0;
  std::vector<CoeffVar> vars_;
};

// lhs >= rhs over natural-valued coefficient variables.
struct DioAtom {
  CoeffPoly lhs, rhs;
};

using DioConj = std::vector<DioAtom>;

// Disjunction of conjunctions (from max elimination rule 2). An empty
// disjunct list is false; an empty conjunction is true.
struct DioClause {
  std::vector<DioConj> disjuncts;
};

// Conjunction of clauses.
struct DioSystem {
  std::vector<DioClause> clauses;

  std::vector<unsigned> variable_ids() const;
};

bool eval_atom(const DioAtom& atom, const std::map<unsigned, Nat>& valuation);
bool eval_clause(const DioClause& clause,
                 const std::map<unsigned, Nat>& valuation);
bool eval_system(const DioSystem& dio,
                 const std::map<unsigned, Nat>& valuation);

// Degree-1 default: two full linear branches with a shared constant.
// Degree d >= 2: a single branch with every monomial of total degree <= d.
// Nullary symbols get a single constant coefficient variable.
AbstractPolynomial make_template(const Symbol& symbol, unsigned degree,
                                 CoeffAllocator& alloc,
                                 const TemplateOptions& opts = {});

// Composes templates and fixed concrete interpretations bottom-up,
// distributing max outward.
AbstractPolynomial abstract_interpret(
    const TermPtr& term,
    const std::map<std::string, AbstractPolynomial>& templates,
    const Interpretation& fixed_model,
    const std::vector<std::string>& var_order);

// Max elimination over one abstract constraint:
//   e >= max(f1,f2)    becomes   e >= f1 and e >= f2
//   max(e1,e2) >= f    becomes   e1 >= f or e2 >= f
// One clause per rhs branch; one disjunct per lhs branch.
std::vector<DioClause> eliminate_max(const AbstractPolynomial& lhs,
                                     const AbstractPolynomial& rhs);

// Sufficient criterion for forall x in N. p >= q: coefficient-wise
// domination per monomial.
DioConj absolute_positiveness(const Poly<CoeffPoly>& p,
                              const Poly<CoeffPoly>& q);

struct Synthesis {
  DioSystem dio;
  std::map<std::string, AbstractPolynomial> templates;
  std::map<std::string, Symbol> template_symbols;
  std::vector<CoeffVar> coeff_vars;

  // Maps a coefficient valuation back to a concrete interpretation of the
  // templated symbols.
  Interpretation concretize(const std::map<unsigned, Nat>& valuation) const;
};

// End-to-end: template per symbol not covered by fixed_model, abstract
// interpretation per constraint, max elimination, absolute positiveness.
Synthesis synthesize(const ConstraintSystem& cs,
                     const Interpretation& fixed_model, unsigned degree,
                     const TemplateOptions& opts = {});

}  // namespace ubsolve
