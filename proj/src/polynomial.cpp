#include "ubsolve/polynomial.hpp"

namespace ubsolve {

Nat poly_eval(const NatPoly& p, const std::vector<Nat>& args) {
  Nat sum = 0;
  for (auto& [m, c] : p.terms) {
    Nat t = c;
    for (auto& [pos, e] : m.exps) {
      if (pos >= args.size()) throw Error("eval: variable position out of range");
      t *= nat_pow(args[pos], e);
    }
    sum += t;
  }
  return sum;
}

Nat MaxPolynomial::eval(const std::vector<Nat>& args) const {
  if (args.size() != arity) throw Error("eval: argument count mismatch");
  Nat best = 0;
  bool first = true;
  for (auto& b : branches) {
    Nat v = poly_eval(b, args);
    if (first || v > best) best = std::move(v);
    first = false;
  }
  return best;
}

unsigned MaxPolynomial::degree() const {
  unsigned d = 0;
  for (auto& b : branches)
    for (auto& [m, c] : b.terms) d = std::max(d, m.total_degree());
  return d;
}

}  // namespace ubsolve
