#include "ubsolve/term.hpp"

namespace ubsolve {

namespace {

void collect_symbols(const TermPtr& t, std::set<Symbol>& out) {
  if (auto* b = std::get_if<Term::Bin>(&t->node())) {
    collect_symbols(b->left, out);
    collect_symbols(b->right, out);
  } else if (auto* a = std::get_if<Term::App>(&t->node())) {
    out.insert(a->symbol);
    for (auto& arg : a->args) collect_symbols(arg, out);
  }
}

void collect_variables(const TermPtr& t, std::set<std::string>& out) {
  if (auto* v = std::get_if<Term::Var>(&t->node())) {
    out.insert(v->name);
  } else if (auto* b = std::get_if<Term::Bin>(&t->node())) {
    collect_variables(b->left, out);
    collect_variables(b->right, out);
  } else if (auto* a = std::get_if<Term::App>(&t->node())) {
    for (auto& arg : a->args) collect_variables(arg, out);
  }
}

void check_arities(const TermPtr& t, std::map<std::string, unsigned>& sig) {
  if (auto* b = std::get_if<Term::Bin>(&t->node())) {
    check_arities(b->left, sig);
    check_arities(b->right, sig);
  } else if (auto* a = std::get_if<Term::App>(&t->node())) {
    auto [it, fresh] = sig.emplace(a->symbol.name, a->symbol.arity);
    if (!fresh && it->second != a->symbol.arity)
      throw Error("symbol " + a->symbol.name + " used with arity " +
                  std::to_string(a->symbol.arity) + " but previously " +
                  std::to_string(it->second));
    for (auto& arg : a->args) check_arities(arg, sig);
  }
}

}  // namespace

ConstraintSystem::ConstraintSystem(std::vector<Constraint> constraints)
    : constraints_(std::move(constraints)) {
  for (auto& c : constraints_) {
    check_arities(c.lhs, signature_);
    check_arities(c.rhs, signature_);
  }
}

std::set<Symbol> symbols_of(const TermPtr& term) {
  std::set<Symbol> out;
  collect_symbols(term, out);
  return out;
}

std::set<Symbol> symbols_of(const ConstraintSystem& cs) {
  std::set<Symbol> out;
  for (auto& c : cs.constraints()) {
    collect_symbols(c.lhs, out);
    collect_symbols(c.rhs, out);
  }
  return out;
}

std::set<std::string> variables_of(const TermPtr& term) {
  std::set<std::string> out;
  collect_variables(term, out);
  return out;
}

ConstraintVars variables_of(const Constraint& c) {
  ConstraintVars out;
  collect_variables(c.lhs, out.lhs);
  collect_variables(c.rhs, out.rhs);
  return out;
}

std::vector<std::string> sorted_variables(const Constraint& c) {
  auto vs = variables_of(c);
  std::set<std::string> all = vs.lhs;
  all.insert(vs.rhs.begin(), vs.rhs.end());
  return {all.begin(), all.end()};
}

}  // namespace ubsolve
