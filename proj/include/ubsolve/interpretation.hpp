#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ubsolve/polynomial.hpp"
#include "ubsolve/term.hpp"

namespace ubsolve {

// Partial map from function symbols to concrete max-polynomials.
class Interpretation {
 public:
  void set(const Symbol& sym, MaxPolynomial poly) {
    if (poly.arity != sym.arity)
      throw Error("interpretation arity mismatch for " + sym.name);
    table_[sym.name] = {sym, std::move(poly)};
  }

  const MaxPolynomial* find(const std::string& name) const {
    auto it = table_.find(name);
    return it == table_.end() ? nullptr : &it->second.second;
  }

  bool defines(const std::string& name) const { return table_.contains(name); }

  const std::map<std::string, std::pair<Symbol, MaxPolynomial>>& entries()
      const {
    return table_;
  }

  std::size_t size() const { return table_.size(); }

  // Adds every entry of `other`; conflicting redefinitions are an error.
  void merge(const Interpretation& other);

  // Max total degree of any monomial across all entries.
  unsigned degree() const;

 private:
  std::map<std::string, std::pair<Symbol, MaxPolynomial>> table_;
};

using Assignment = std::map<std::string, Nat>;

Nat eval(const TermPtr& term, const Interpretation& interp,
         const Assignment& assign);

// Symbolic counterpart of eval: interprets a term as a MaxPolynomial over
// the given variable order (position i = var_order[i]). Agrees with eval
// pointwise on all assignments.
MaxPolynomial interpret_term(const TermPtr& term, const Interpretation& interp,
                             const std::vector<std::string>& var_order);

struct NamedMaxPoly {
  std::vector<std::string> vars;
  MaxPolynomial poly;
};

// Convenience overload using the term's sorted variables as the order.
NamedMaxPoly interpret_term(const TermPtr& term, const Interpretation& interp);

struct CheckOptions {
  Nat exhaustive_max = 3;       // values {0..V} for the exhaustive falsifier
  unsigned exhaustive_vars = 6; // above this, switch to sampling
  unsigned samples = 1000;
  std::uint64_t seed = 0x5eed;
};

struct ModelCheck {
  enum class Verdict { Valid, Invalid, Unknown };
  Verdict verdict;
  // Set for Invalid: the falsified constraint and a falsifying assignment.
  std::optional<std::size_t> constraint_index;
  Assignment counterexample;
};

// Sound three-valued model check. Valid only when every rhs branch of every
// constraint is coefficient-wise dominated by some lhs branch; Invalid when a
// concrete falsifying assignment is found; Unknown otherwise.
ModelCheck check_model(const ConstraintSystem& cs, const Interpretation& interp,
                       const CheckOptions& opts = {});

}  // namespace ubsolve
