#include "ubsolve/simplify.hpp"

#include <algorithm>

namespace ubsolve {

namespace {

TermPtr substitute_var(const TermPtr& t, const std::string& var,
                       const TermPtr& replacement) {
  const auto& node = t->node();
  if (auto* v = std::get_if<Term::Var>(&node))
    return v->name == var ? replacement : t;
  if (std::holds_alternative<Term::Const>(node)) return t;
  if (auto* b = std::get_if<Term::Bin>(&node)) {
    TermPtr l = substitute_var(b->left, var, replacement);
    TermPtr r = substitute_var(b->right, var, replacement);
    if (l == b->left && r == b->right) return t;
    return Term::bin(b->op, std::move(l), std::move(r));
  }
  auto& app = std::get<Term::App>(node);
  std::vector<TermPtr> args;
  bool changed = false;
  for (auto& a : app.args) {
    args.push_back(substitute_var(a, var, replacement));
    changed |= args.back() != a;
  }
  if (!changed) return t;
  return Term::app(app.symbol, std::move(args));
}

// Replaces every application of `sym` by `body` with the application's
// (rewritten) arguments substituted for arg_vars positionally.
TermPtr substitute_symbol(const TermPtr& t, const Symbol& sym,
                          const std::vector<std::string>& arg_vars,
                          const TermPtr& body) {
  const auto& node = t->node();
  if (std::holds_alternative<Term::Var>(node) ||
      std::holds_alternative<Term::Const>(node))
    return t;
  if (auto* b = std::get_if<Term::Bin>(&node)) {
    TermPtr l = substitute_symbol(b->left, sym, arg_vars, body);
    TermPtr r = substitute_symbol(b->right, sym, arg_vars, body);
    if (l == b->left && r == b->right) return t;
    return Term::bin(b->op, std::move(l), std::move(r));
  }
  auto& app = std::get<Term::App>(node);
  std::vector<TermPtr> args;
  for (auto& a : app.args)
    args.push_back(substitute_symbol(a, sym, arg_vars, body));
  if (app.symbol == sym) {
    TermPtr inst = body;
    for (std::size_t i = 0; i < arg_vars.size(); ++i)
      inst = substitute_var(inst, arg_vars[i], args[i]);
    return inst;
  }
  bool changed = false;
  for (std::size_t i = 0; i < args.size(); ++i) changed |= args[i] != app.args[i];
  if (!changed) return t;
  return Term::app(app.symbol, std::move(args));
}

bool term_contains(const TermPtr& t, const std::string& sym_name) {
  for (auto& s : symbols_of(t))
    if (s.name == sym_name) return true;
  return false;
}

}  // namespace

SimplifyResult instantiate(const ConstraintSystem& cs) {
  SimplificationTrace trace;
  std::vector<Constraint> out;
  out.reserve(cs.size());
  TermPtr zero = Term::constant(0);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Constraint c = cs.constraints()[i];
    auto vs = variables_of(c);
    for (auto& v : vs.lhs) {
      if (vs.rhs.contains(v)) continue;
      c.lhs = substitute_var(c.lhs, v, zero);
      trace.steps.push_back(SimplificationTrace::Instantiated{i, v});
    }
    out.push_back(std::move(c));
  }
  return {ConstraintSystem(std::move(out)), std::move(trace)};
}

SimplifyResult eliminate(const ConstraintSystem& cs) {
  SimplificationTrace trace;
  std::vector<Constraint> cur(cs.constraints());
  std::map<std::string, unsigned> sig = cs.signature();
  TermPtr zero = Term::constant(0);
  for (;;) {
    std::set<std::string> lhs_syms;
    std::set<Symbol> occurring;
    for (auto& c : cur) {
      for (auto& s : symbols_of(c.lhs)) {
        lhs_syms.insert(s.name);
        occurring.insert(s);
      }
      for (auto& s : symbols_of(c.rhs)) occurring.insert(s);
    }
    std::vector<Symbol> victims;
    for (auto& s : occurring)
      if (!lhs_syms.contains(s.name)) victims.push_back(s);
    if (victims.empty()) break;
    for (auto& sym : victims) {
      trace.steps.push_back(SimplificationTrace::Eliminated{sym});
      std::vector<std::string> arg_vars;
      for (unsigned i = 0; i < sym.arity; ++i)
        arg_vars.push_back("_a" + std::to_string(i));
      for (auto& c : cur) {
        c.lhs = substitute_symbol(c.lhs, sym, arg_vars, zero);
        c.rhs = substitute_symbol(c.rhs, sym, arg_vars, zero);
      }
    }
  }
  return {ConstraintSystem(std::move(cur)), std::move(trace)};
}

SimplifyResult propagate(const ConstraintSystem& cs) {
  SimplificationTrace trace;
  Interpretation bound;
  std::vector<Constraint> cur(cs.constraints());
  for (;;) {
    std::optional<std::size_t> candidate;
    Symbol def_sym;
    std::vector<std::string> def_args;
    for (std::size_t i = 0; i < cur.size() && !candidate; ++i) {
      auto* app = std::get_if<Term::App>(&cur[i].lhs->node());
      if (!app) continue;
      // (a) lhs is f applied to pairwise-distinct variables
      std::vector<std::string> args;
      bool ok = true;
      for (auto& a : app->args) {
        auto* v = std::get_if<Term::Var>(&a->node());
        if (!v || std::find(args.begin(), args.end(), v->name) != args.end()) {
          ok = false;
          break;
        }
        args.push_back(v->name);
      }
      if (!ok) continue;
      // (b) f occurs on no other lhs
      for (std::size_t j = 0; j < cur.size(); ++j)
        if (j != i && term_contains(cur[j].lhs, app->symbol.name)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      // (c) rhs symbols are all already bound; (d) f not in rhs
      for (auto& s : symbols_of(cur[i].rhs)) {
        if (s.name == app->symbol.name || !bound.defines(s.name)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      // rhs variables must be among the lhs arguments, otherwise the
      // binding would not be well-defined (and the constraint is
      // unsatisfiable anyway)
      for (auto& v : variables_of(cur[i].rhs))
        if (std::find(args.begin(), args.end(), v) == args.end()) {
          ok = false;
          break;
        }
      if (!ok) continue;
      candidate = i;
      def_sym = app->symbol;
      def_args = std::move(args);
    }
    if (!candidate) break;
    std::size_t i = *candidate;
    TermPtr rhs = cur[i].rhs;
    MaxPolynomial def = interpret_term(rhs, bound, def_args);
    bound.set(def_sym, def);
    trace.steps.push_back(SimplificationTrace::Propagated{def_sym, def});
    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i));
    for (auto& c : cur) {
      c.rhs = substitute_symbol(c.rhs, def_sym, def_args, rhs);
      // condition (b) guarantees f occurs on no other lhs
    }
  }
  return {ConstraintSystem(std::move(cur)), std::move(trace)};
}

SimplifyResult simplify_all(const ConstraintSystem& cs) {
  SimplificationTrace trace;
  ConstraintSystem cur = cs;
  for (int round = 0; round < 1000; ++round) {
    SimplifyResult a = instantiate(cur);
    trace.append(a.trace);
    SimplifyResult b = eliminate(a.system);
    trace.append(b.trace);
    SimplifyResult c = propagate(b.system);
    trace.append(c.trace);
    cur = std::move(c.system);
    if (a.trace.empty() && b.trace.empty() && c.trace.empty())
      return {std::move(cur), std::move(trace)};
  }
  throw Error("simplify_all: fixpoint fuel exhausted");
}

Interpretation replay(const SimplificationTrace& trace,
                      const Interpretation& partial_model) {
  Interpretation out = partial_model;
  for (auto& step : trace.steps) {
    if (auto* e = std::get_if<SimplificationTrace::Eliminated>(&step)) {
      out.set(e->symbol, MaxPolynomial(e->symbol.arity, {NatPoly::zero()}));
    } else if (auto* p = std::get_if<SimplificationTrace::Propagated>(&step)) {
      out.set(p->symbol, p->definition);
    }
    // Instantiated steps do not bind symbols.
  }
  return out;
}

}  // namespace ubsolve
