#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ubsolve/nat.hpp"

namespace ubsolve {

struct Symbol {
  std::string name;
  unsigned arity = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

enum class BinOp { Plus, Mul, Max };

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term AST: variables, natural constants, binary +/*/max, and
// applications of uninterpreted function symbols.
class Term {
 public:
  struct Var {
    std::string name;
  };
  struct Const {
    Nat value;
  };
  struct Bin {
    BinOp op;
    TermPtr left, right;
  };
  struct App {
    Symbol symbol;
    std::vector<TermPtr> args;
  };

  using Node = std::variant<Var, Const, Bin, App>;

  explicit Term(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  static TermPtr var(std::string name) {
    return std::make_shared<Term>(Var{std::move(name)});
  }
  static TermPtr constant(Nat value) {
    if (value < 0) throw Error("negative constant in term");
    return std::make_shared<Term>(Const{std::move(value)});
  }
  static TermPtr bin(BinOp op, TermPtr left, TermPtr right) {
    return std::make_shared<Term>(Bin{op, std::move(left), std::move(right)});
  }
  static TermPtr app(Symbol symbol, std::vector<TermPtr> args) {
    if (args.size() != symbol.arity)
      throw Error("application of " + symbol.name + " with " +
                  std::to_string(args.size()) + " arguments, arity is " +
                  std::to_string(symbol.arity));
    return std::make_shared<Term>(App{std::move(symbol), std::move(args)});
  }

 private:
  Node node_;
};

struct Constraint {
  TermPtr lhs;  // meaning lhs >= rhs
  TermPtr rhs;
};

// A finite set of constraints together with the derived signature.
// Arity consistency is established at construction.
class ConstraintSystem {
 public:
  ConstraintSystem() = default;
  explicit ConstraintSystem(std::vector<Constraint> constraints);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::map<std::string, unsigned>& signature() const {
    return signature_;
  }
  bool empty() const { return constraints_.empty(); }
  std::size_t size() const { return constraints_.size(); }

 private:
  std::vector<Constraint> constraints_;
  std::map<std::string, unsigned> signature_;
};

std::set<Symbol> symbols_of(const TermPtr& term);
std::set<Symbol> symbols_of(const ConstraintSystem& cs);
std::set<std::string> variables_of(const TermPtr& term);

struct ConstraintVars {
  std::set<std::string> lhs;
  std::set<std::string> rhs;
};
ConstraintVars variables_of(const Constraint& c);

// All variables of a constraint, sorted (the canonical variable order used
// when a constraint is interpreted symbolically).
std::vector<std::string> sorted_variables(const Constraint& c);

}  // namespace ubsolve
