#include "ubsolve/interpretation.hpp"

#include <random>
#include <sstream>

namespace ubsolve {

void Interpretation::merge(const Interpretation& other) {
  for (auto& [name, entry] : other.table_) {
    auto it = table_.find(name);
    if (it != table_.end()) {
      if (!(it->second.second == entry.second))
        throw Error("conflicting interpretations for " + name);
      continue;
    }
    table_.emplace(name, entry);
  }
}

unsigned Interpretation::degree() const {
  unsigned d = 0;
  for (auto& [name, entry] : table_) d = std::max(d, entry.second.degree());
  return d;
}

Nat eval(const TermPtr& term, const Interpretation& interp,
         const Assignment& assign) {
  const auto& node = term->node();
  if (auto* v = std::get_if<Term::Var>(&node)) {
    auto it = assign.find(v->name);
    if (it == assign.end())
      throw EvalError("unassigned variable " + v->name);
    return it->second;
  }
  if (auto* c = std::get_if<Term::Const>(&node)) return c->value;
  if (auto* b = std::get_if<Term::Bin>(&node)) {
    Nat l = eval(b->left, interp, assign);
    Nat r = eval(b->right, interp, assign);
    switch (b->op) {
      case BinOp::Plus: return l + r;
      case BinOp::Mul: return l * r;
      case BinOp::Max: return l >= r ? l : r;
    }
  }
  auto& app = std::get<Term::App>(node);
  const MaxPolynomial* f = interp.find(app.symbol.name);
  if (!f) throw EvalError("uninterpreted symbol " + app.symbol.name);
  std::vector<Nat> args;
  args.reserve(app.args.size());
  for (auto& a : app.args) args.push_back(eval(a, interp, assign));
  return f->eval(args);
}

MaxPolynomial interpret_term(const TermPtr& term, const Interpretation& interp,
                             const std::vector<std::string>& var_order) {
  unsigned arity = static_cast<unsigned>(var_order.size());
  const auto& node = term->node();
  if (auto* v = std::get_if<Term::Var>(&node)) {
    for (unsigned i = 0; i < arity; ++i)
      if (var_order[i] == v->name)
        return MaxPolynomial(arity, {NatPoly::variable(i, 1)});
    throw EvalError("variable " + v->name + " not in variable order");
  }
  if (auto* c = std::get_if<Term::Const>(&node))
    return MaxPolynomial(arity, {NatPoly::constant(c->value)});
  if (auto* b = std::get_if<Term::Bin>(&node)) {
    MaxPolynomial l = interpret_term(b->left, interp, var_order);
    MaxPolynomial r = interpret_term(b->right, interp, var_order);
    MaxPoly<Nat> out;
    switch (b->op) {
      case BinOp::Plus: out = mp_plus<Nat>(l, r); break;
      case BinOp::Mul: out = mp_mul<Nat>(l, r); break;
      case BinOp::Max: out = mp_max<Nat>(l, r); break;
    }
    return MaxPolynomial(arity, std::move(out.branches));
  }
  auto& app = std::get<Term::App>(node);
  const MaxPolynomial* f = interp.find(app.symbol.name);
  if (!f) throw EvalError("uninterpreted symbol " + app.symbol.name);
  std::vector<MaxPoly<Nat>> args;
  for (auto& a : app.args) args.push_back(interpret_term(a, interp, var_order));
  MaxPoly<Nat> out = mp_compose<Nat>(*f, args, Nat(1));
  return MaxPolynomial(arity, std::move(out.branches));
}

NamedMaxPoly interpret_term(const TermPtr& term, const Interpretation& interp) {
  auto vars = variables_of(term);
  std::vector<std::string> order(vars.begin(), vars.end());
  MaxPolynomial p = interpret_term(term, interp, order);
  return {std::move(order), std::move(p)};
}

namespace {

// Every rhs branch must be coefficient-wise dominated by some lhs branch.
bool dominance_holds(const MaxPolynomial& lhs, const MaxPolynomial& rhs) {
  for (auto& rb : rhs.branches) {
    bool ok = false;
    for (auto& lb : lhs.branches)
      if (lb.dominates(rb)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

bool violated_at(const Constraint& c, const Interpretation& interp,
                 const Assignment& a) {
  return eval(c.lhs, interp, a) < eval(c.rhs, interp, a);
}

std::optional<Assignment> search_counterexample(const Constraint& c,
                                                const Interpretation& interp,
                                                const CheckOptions& opts) {
  auto vars = sorted_variables(c);
  if (vars.empty()) {
    Assignment a;
    if (violated_at(c, interp, a)) return a;
    return std::nullopt;
  }
  if (vars.size() <= opts.exhaustive_vars) {
    std::vector<Nat> vals(vars.size(), 0);
    for (;;) {
      Assignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = vals[i];
      if (violated_at(c, interp, a)) return a;
      std::size_t i = 0;
      while (i < vals.size()) {
        if (vals[i] < opts.exhaustive_max) {
          ++vals[i];
          break;
        }
        vals[i] = 0;
        ++i;
      }
      if (i == vals.size()) return std::nullopt;
    }
  }
  std::mt19937_64 rng(opts.seed);
  unsigned long hi = opts.exhaustive_max.get_ui();
  std::uniform_int_distribution<unsigned long> dist(0, hi);
  for (unsigned s = 0; s < opts.samples; ++s) {
    Assignment a;
    for (auto& v : vars) a[v] = Nat(dist(rng));
    if (violated_at(c, interp, a)) return a;
  }
  return std::nullopt;
}

}  // namespace

ModelCheck check_model(const ConstraintSystem& cs, const Interpretation& interp,
                       const CheckOptions& opts) {
  std::vector<std::string> missing;
  for (auto& [name, arity] : cs.signature())
    if (!interp.defines(name)) missing.push_back(name);
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "partial interpretation; uninterpreted symbols:";
    for (auto& m : missing) msg << ' ' << m;
    throw EvalError(msg.str());
  }

  bool all_dominated = true;
  for (std::size_t i = 0; i < cs.constraints().size(); ++i) {
    const Constraint& c = cs.constraints()[i];
    auto order = sorted_variables(c);
    MaxPolynomial l = interpret_term(c.lhs, interp, order);
    MaxPolynomial r = interpret_term(c.rhs, interp, order);
    if (dominance_holds(l, r)) continue;
    all_dominated = false;
    if (auto cex = search_counterexample(c, interp, opts))
      return {ModelCheck::Verdict::Invalid, i, std::move(*cex)};
  }
  if (all_dominated) return {ModelCheck::Verdict::Valid, std::nullopt, {}};
  return {ModelCheck::Verdict::Unknown, std::nullopt, {}};
}

}  // namespace ubsolve
