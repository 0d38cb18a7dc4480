#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ubsolve {

// Arbitrary-precision natural number. All arithmetic in the solver is over
// the naturals; negative values are a bug and are rejected at construction
// sites that take external input.
using Nat = mpz_class;

inline Nat nat_pow(const Nat& base, unsigned exp) {
  Nat r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline std::string nat_str(const Nat& n) { return n.get_str(); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ubsolve
