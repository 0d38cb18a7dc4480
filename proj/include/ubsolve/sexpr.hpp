#pragma once

#include <string>

#include "ubsolve/interpretation.hpp"
#include "ubsolve/term.hpp"

namespace ubsolve {

struct SourceSpan {
  std::size_t start = 0;  // byte offsets, start <= end
  std::size_t end = 0;
  unsigned line = 1;
  unsigned column = 1;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& msg)
      : Error(std::to_string(span.line) + ":" + std::to_string(span.column) +
              ": " + msg),
        span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

// Reads a constraint system in S-expression notation:
//   system     := ws (constraint ws)* ;
//   constraint := "(" ">=" term term ")" ;
//   term       := natural | "(" "var" ident ")" | "(" op term term+ ")"
//               | "(" ident term* ")" ;
//   op         := "+" | "*" | "max" ;
// n-ary "+"/"*"/"max" fold left-associatively. ";" comments to end of line.
// Arities are inferred from first occurrence and checked globally.
ConstraintSystem parse_system(const std::string& text);

std::string print_term(const TermPtr& term);
std::string print_system(const ConstraintSystem& cs);

enum class ModelStyle { Human, Sexpr };

// Human style: one line per symbol, "name(x0,..,xk-1) = expr", monomials in
// graded-lexicographic order, constants last, max(..) for multi-branch
// functions. Sexpr style: "(model (name (vars x0 ..) term) ...)".
std::string print_model(const Interpretation& interp,
                        ModelStyle style = ModelStyle::Human);

// Inverse of print_model on its range; accepts both styles (auto-detected).
Interpretation parse_model(const std::string& text);

}  // namespace ubsolve
