#pragma once

// Shared test utilities: terse construction of terms/systems/models from
// strings, corpus file loading, exhaustive constraint checking, and seeded
// random generators used by the property tests.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ubsolve/interpretation.hpp"
#include "ubsolve/sexpr.hpp"
#include "ubsolve/term.hpp"

namespace ubsolve::testing {

inline ConstraintSystem sys(const std::string& text) {
  return parse_system(text);
}

// Parses a single term by wrapping it in a throwaway constraint.
inline TermPtr term(const std::string& text) {
  return parse_system("(>= " + text + " 0)").constraints().front().lhs;
}

// Builds a MaxPolynomial from a human-style expression over x0..x{arity-1}.
inline MaxPolynomial mp(unsigned arity, const std::string& expr) {
  std::string header = "g";
  if (arity > 0) {
    header += "(";
    for (unsigned i = 0; i < arity; ++i)
      header += (i ? ",x" : "x") + std::to_string(i);
    header += ")";
  }
  Interpretation interp = parse_model(header + " = " + expr);
  return *interp.find("g");
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path corpus_dir() { return UBSOLVE_CORPUS_DIR; }

inline ConstraintSystem corpus_system(const std::string& name) {
  return parse_system(slurp(corpus_dir() / name));
}

inline Interpretation corpus_model(const std::string& name) {
  return parse_model(slurp(corpus_dir() / "models" / name));
}

// Exhaustively evaluates every constraint over assignments with values in
// {0..max_value}; returns true iff no violation exists.
inline bool holds_exhaustively(const ConstraintSystem& cs,
                               const Interpretation& interp,
                               unsigned max_value = 3) {
  for (auto& c : cs.constraints()) {
    std::vector<std::string> vars = sorted_variables(c);
    std::vector<Nat> point(vars.size(), 0);
    for (;;) {
      Assignment assign;
      for (std::size_t i = 0; i < vars.size(); ++i) assign[vars[i]] = point[i];
      if (eval(c.lhs, interp, assign) < eval(c.rhs, interp, assign))
        return false;
      std::size_t i = 0;
      while (i < point.size() && point[i] == max_value) point[i++] = 0;
      if (i == point.size()) break;
      ++point[i];
    }
  }
  return true;
}

// ---- seeded random generation ----

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  unsigned below(unsigned n) {
    return std::uniform_int_distribution<unsigned>(0, n - 1)(gen_);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(gen_) < p;
  }

 private:
  std::mt19937_64 gen_;
};

struct RandomSystemOptions {
  unsigned max_symbols = 3;
  unsigned max_arity = 2;
  unsigned max_constraints = 4;
  unsigned max_constant = 3;
  unsigned max_variables = 3;
};

inline TermPtr random_term(Rng& rng, const std::vector<Symbol>& symbols,
                           const std::vector<std::string>& vars,
                           unsigned depth) {
  unsigned pick = rng.below(depth == 0 ? 2 : 4);
  switch (pick) {
    case 0:
      return Term::constant(rng.below(4));
    case 1:
      return Term::var(vars[rng.below(static_cast<unsigned>(vars.size()))]);
    case 2: {
      BinOp op = static_cast<BinOp>(rng.below(3));
      return Term::bin(op, random_term(rng, symbols, vars, depth - 1),
                       random_term(rng, symbols, vars, depth - 1));
    }
    default: {
      const Symbol& sym =
          symbols[rng.below(static_cast<unsigned>(symbols.size()))];
      std::vector<TermPtr> args;
      for (unsigned i = 0; i < sym.arity; ++i)
        args.push_back(random_term(rng, symbols, vars, depth - 1));
      return Term::app(sym, std::move(args));
    }
  }
}

inline ConstraintSystem random_system(Rng& rng,
                                      const RandomSystemOptions& opts = {}) {
  std::vector<Symbol> symbols;
  unsigned n_symbols = 1 + rng.below(opts.max_symbols);
  for (unsigned i = 0; i < n_symbols; ++i)
    symbols.push_back({"f" + std::to_string(i), rng.below(opts.max_arity + 1)});
  std::vector<std::string> vars;
  for (unsigned i = 0; i < opts.max_variables; ++i)
    vars.push_back("v" + std::to_string(i));
  std::vector<Constraint> constraints;
  unsigned n = 1 + rng.below(opts.max_constraints);
  for (unsigned i = 0; i < n; ++i)
    constraints.push_back({random_term(rng, symbols, vars, 2),
                           random_term(rng, symbols, vars, 2)});
  return ConstraintSystem(std::move(constraints));
}

// Random concrete max-polynomial of the given arity: 1-2 branches, small
// coefficients, degree <= 2.
inline MaxPolynomial random_maxpoly(Rng& rng, unsigned arity) {
  std::vector<NatPoly> branches;
  unsigned n_branches = 1 + rng.below(2);
  for (unsigned b = 0; b < n_branches; ++b) {
    NatPoly p;
    unsigned n_terms = 1 + rng.below(3);
    for (unsigned t = 0; t < n_terms; ++t) {
      Monomial m;
      if (arity > 0) {
        unsigned degree = rng.below(3);
        for (unsigned d = 0; d < degree; ++d) ++m.exps[rng.below(arity)];
        std::erase_if(m.exps, [](const auto& e) { return e.second == 0; });
      }
      Nat c = rng.below(4);
      if (c != 0) p = p + NatPoly{{{m, c}}};
    }
    branches.push_back(std::move(p));
  }
  return MaxPolynomial(arity, std::move(branches));
}

}  // namespace ubsolve::testing
