#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "ubsolve/nat.hpp"

namespace ubsolve {

// Power product over variable positions. Zero exponents are never stored;
// the empty monomial is the constant monomial.
struct Monomial {
  std::map<unsigned, unsigned> exps;

  unsigned total_degree() const {
    unsigned d = 0;
    for (auto& [v, e] : exps) d += e;
    return d;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    for (auto& [v, e] : o.exps) r.exps[v] += e;
    return r;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded lexicographic: higher total degree first, then lexicographic on
// (variable, exponent) pairs. Used as the map order everywhere so that
// iteration, printing and SMT emission are deterministic.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db;
    return a.exps < b.exps;
  }
};

// Coefficient ring concept: Nat, or a polynomial over coefficient variables
// (see synth.hpp). Requires +, *, ==, is_zero, and a sound partial order
// `dominates` (a >= b for every valuation).
inline bool coeff_is_zero(const Nat& c) { return c == 0; }
inline bool coeff_dominates(const Nat& a, const Nat& b) { return a >= b; }

template <class C>
using PolyMap = std::map<Monomial, C, GrlexLess>;

// Polynomial with coefficients in C; zero coefficients absent.
template <class C>
struct Poly {
  PolyMap<C> terms;

  static Poly zero() { return {}; }
  static Poly constant(C c) {
    Poly p;
    if (!coeff_is_zero(c)) p.terms.emplace(Monomial{}, std::move(c));
    return p;
  }
  static Poly variable(unsigned pos, C one) {
    Poly p;
    p.terms.emplace(Monomial{{{pos, 1}}}, std::move(one));
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (auto& [m, c] : o.terms) {
      auto it = r.terms.find(m);
      if (it == r.terms.end()) {
        r.terms.emplace(m, c);
      } else {
        it->second = it->second + c;
        if (coeff_is_zero(it->second)) r.terms.erase(it);
      }
    }
    return r;
  }

  Poly operator*(const Poly& o) const {
    Poly r;
    for (auto& [m1, c1] : terms)
      for (auto& [m2, c2] : o.terms) {
        Monomial m = m1 * m2;
        C c = c1 * c2;
        if (coeff_is_zero(c)) continue;
        auto it = r.terms.find(m);
        if (it == r.terms.end()) {
          r.terms.emplace(std::move(m), std::move(c));
        } else {
          it->second = it->second + c;
          if (coeff_is_zero(it->second)) r.terms.erase(it);
        }
      }
    return r;
  }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend bool operator<(const Poly& a, const Poly& b) {
    return std::lexicographical_compare(
        a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(),
        [](const auto& x, const auto& y) {
          GrlexLess lt;
          if (lt(x.first, y.first)) return true;
          if (lt(y.first, x.first)) return false;
          return x.second < y.second;
        });
  }

  // Coefficient-wise >=. Sound for domination because every coefficient
  // denotes a natural.
  bool dominates(const Poly& o) const {
    for (auto& [m, c] : o.terms) {
      auto it = terms.find(m);
      if (it == terms.end() || !coeff_dominates(it->second, c)) return false;
    }
    return true;
  }
};

// Max of finitely many polynomials. Canonical form: no zero coefficients, no
// duplicate branches, no branch pointwise-dominated by another, branches in
// sorted order. The branch set is never empty (zero is max of one branch).
template <class C>
struct MaxPoly {
  unsigned arity = 0;
  std::vector<Poly<C>> branches;

  static MaxPoly constant(unsigned arity, C c) {
    return MaxPoly{arity, {Poly<C>::constant(std::move(c))}};
  }
  static MaxPoly variable(unsigned arity, unsigned pos, C one) {
    return MaxPoly{arity, {Poly<C>::variable(pos, std::move(one))}};
  }

  void canonicalize() {
    for (auto& b : branches)
      std::erase_if(b.terms, [](const auto& t) {
        return coeff_is_zero(t.second);
      });
    if (branches.empty()) branches.push_back(Poly<C>::zero());
    std::sort(branches.begin(), branches.end());
    branches.erase(std::unique(branches.begin(), branches.end()),
                   branches.end());
    // After dedup, mutual domination would imply equality, so dropping every
    // dominated branch is safe.
    std::vector<Poly<C>> kept;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < branches.size() && !dominated; ++j)
        if (i != j && branches[j].dominates(branches[i])) dominated = true;
      if (!dominated) kept.push_back(branches[i]);
    }
    branches = std::move(kept);
    if (branches.empty()) branches.push_back(Poly<C>::zero());
  }

  friend bool operator==(const MaxPoly&, const MaxPoly&) = default;
};

template <class C>
MaxPoly<C> mp_plus(const MaxPoly<C>& a, const MaxPoly<C>& b) {
  MaxPoly<C> r{std::max(a.arity, b.arity), {}};
  for (auto& p : a.branches)
    for (auto& q : b.branches) r.branches.push_back(p + q);
  r.canonicalize();
  return r;
}

template <class C>
MaxPoly<C> mp_mul(const MaxPoly<C>& a, const MaxPoly<C>& b) {
  MaxPoly<C> r{std::max(a.arity, b.arity), {}};
  for (auto& p : a.branches)
    for (auto& q : b.branches) r.branches.push_back(p * q);
  r.canonicalize();
  return r;
}

template <class C>
MaxPoly<C> mp_max(const MaxPoly<C>& a, const MaxPoly<C>& b) {
  MaxPoly<C> r{std::max(a.arity, b.arity), a.branches};
  r.branches.insert(r.branches.end(), b.branches.begin(), b.branches.end());
  r.canonicalize();
  return r;
}

template <class C>
MaxPoly<C> mp_pow(const MaxPoly<C>& a, unsigned e, C one) {
  MaxPoly<C> r = MaxPoly<C>::constant(a.arity, std::move(one));
  for (unsigned i = 0; i < e; ++i) r = mp_mul(r, a);
  return r;
}

// Substitutes args[i] for position i in every branch of f. Max distributes
// outward through + and * over the naturals, so the result is again a flat
// max of polynomials.
template <class C>
MaxPoly<C> mp_compose(const MaxPoly<C>& f, const std::vector<MaxPoly<C>>& args,
                      C one) {
  unsigned arity = 0;
  for (auto& a : args) arity = std::max(arity, a.arity);
  MaxPoly<C> result{arity, {}};
  for (auto& branch : f.branches) {
    MaxPoly<C> acc = MaxPoly<C>::constant(arity, C{});
    acc.canonicalize();  // zero
    for (auto& [m, c] : branch.terms) {
      MaxPoly<C> term = MaxPoly<C>::constant(arity, c);
      for (auto& [pos, e] : m.exps) {
        if (pos >= args.size()) throw Error("compose: position out of range");
        term = mp_mul(term, mp_pow(args[pos], e, one));
      }
      acc = mp_plus(acc, term);
    }
    result.branches.insert(result.branches.end(), acc.branches.begin(),
                           acc.branches.end());
  }
  result.canonicalize();
  return result;
}

// ---- concrete instantiation ----

using NatPoly = Poly<Nat>;

// Concrete weakly monotone function N^arity -> N in max-of-polynomials
// normal form. Weak monotonicity holds by construction: all coefficients
// are naturals.
struct MaxPolynomial : MaxPoly<Nat> {
  MaxPolynomial() { branches.push_back(NatPoly::zero()); }
  MaxPolynomial(unsigned ar, std::vector<NatPoly> brs)
      : MaxPoly<Nat>{ar, std::move(brs)} {
    for (auto& b : branches)
      for (auto& [m, c] : b.terms) {
        if (c < 0) throw Error("negative coefficient in max-polynomial");
        if (!m.exps.empty() && m.exps.rbegin()->first >= ar)
          throw Error("monomial variable position exceeds arity");
      }
    canonicalize();
  }

  Nat eval(const std::vector<Nat>& args) const;
  unsigned degree() const;
};

Nat poly_eval(const NatPoly& p, const std::vector<Nat>& args);

}  // namespace ubsolve
