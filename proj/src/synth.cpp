#include "ubsolve/synth.hpp"

#include <algorithm>
#include <set>

namespace ubsolve {

namespace {

Nat coeff_poly_eval(const CoeffPoly& p, const std::map<unsigned, Nat>& val) {
  Nat sum = 0;
  for (auto& [m, c] : p.terms) {
    Nat t = c;
    for (auto& [id, e] : m.exps) {
      auto it = val.find(id);
      if (it == val.end())
        throw Error("coefficient variable c" + std::to_string(id) +
                    " missing from valuation");
      t *= nat_pow(it->second, e);
    }
    sum += t;
  }
  return sum;
}

CoeffPoly cvar(unsigned id) {
  return CoeffPoly::variable(id, Nat(1));
}

// All monomials over `arity` variables with total degree in [0, degree].
std::vector<Monomial> monomials_up_to(unsigned arity, unsigned degree) {
  std::vector<Monomial> out{Monomial{}};
  for (unsigned d = 1; d <= degree; ++d) {
    // extend each monomial of degree d-1 by one variable >= its last
    std::vector<Monomial> next;
    for (auto& m : out) {
      if (m.total_degree() != d - 1) continue;
      unsigned start = m.exps.empty() ? 0 : m.exps.rbegin()->first;
      for (unsigned v = start; v < arity; ++v) {
        Monomial e = m;
        e.exps[v] += 1;
        next.push_back(e);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
  }
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

void lift_fixed(const MaxPolynomial& concrete, AbstractPolynomial& out) {
  out.arity = concrete.arity;
  out.branches.clear();
  for (auto& b : concrete.branches) {
    Poly<CoeffPoly> lifted;
    for (auto& [m, c] : b.terms)
      lifted.terms.emplace(m, CoeffPoly::constant(c));
    out.branches.push_back(std::move(lifted));
  }
  out.canonicalize();
}

}  // namespace

std::vector<unsigned> DioSystem::variable_ids() const {
  std::set<unsigned> ids;
  auto scan = [&](const CoeffPoly& p) {
    for (auto& [m, c] : p.terms)
      for (auto& [id, e] : m.exps) ids.insert(id);
  };
  for (auto& clause : clauses)
    for (auto& conj : clause.disjuncts)
      for (auto& atom : conj) {
        scan(atom.lhs);
        scan(atom.rhs);
      }
  return {ids.begin(), ids.end()};
}

bool eval_atom(const DioAtom& atom, const std::map<unsigned, Nat>& valuation) {
  return coeff_poly_eval(atom.lhs, valuation) >=
         coeff_poly_eval(atom.rhs, valuation);
}

bool eval_clause(const DioClause& clause,
                 const std::map<unsigned, Nat>& valuation) {
  for (auto& conj : clause.disjuncts) {
    bool all = true;
    for (auto& atom : conj)
      if (!eval_atom(atom, valuation)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

bool eval_system(const DioSystem& dio,
                 const std::map<unsigned, Nat>& valuation) {
  for (auto& clause : dio.clauses)
    if (!eval_clause(clause, valuation)) return false;
  return true;
}

AbstractPolynomial make_template(const Symbol& symbol, unsigned degree,
                                 CoeffAllocator& alloc,
                                 const TemplateOptions& opts) {
  if (degree == 0) throw Error("template degree must be at least 1");
  const unsigned k = symbol.arity;
  AbstractPolynomial tmpl{k, {}};
  if (k == 0) {
    Poly<CoeffPoly> b;
    b.terms.emplace(Monomial{}, cvar(alloc.fresh(symbol.name, 0, Monomial{})));
    tmpl.branches.push_back(std::move(b));
    tmpl.canonicalize();
    return tmpl;
  }
  if (degree == 1) {
    // max(c1*x1 + .. + ck*xk + c, d1*x1 + .. + dk*xk + c)
    unsigned shared_const = alloc.fresh(symbol.name, 0, Monomial{});
    for (unsigned branch = 0; branch < 2; ++branch) {
      Poly<CoeffPoly> b;
      for (unsigned v = 0; v < k; ++v) {
        Monomial m{{{v, 1}}};
        b.terms.emplace(m, cvar(alloc.fresh(symbol.name, branch, m)));
      }
      unsigned cst = branch == 0 || !opts.independent_constants
                         ? shared_const
                         : alloc.fresh(symbol.name, branch, Monomial{});
      b.terms.emplace(Monomial{}, cvar(cst));
      tmpl.branches.push_back(std::move(b));
    }
    // branches are structurally equal up to variable ids: skip domination
    // pruning, both must survive
    return tmpl;
  }
  Poly<CoeffPoly> b;
  for (auto& m : monomials_up_to(k, degree))
    b.terms.emplace(m, cvar(alloc.fresh(symbol.name, 0, m)));
  tmpl.branches.push_back(std::move(b));
  return tmpl;
}

AbstractPolynomial abstract_interpret(
    const TermPtr& term,
    const std::map<std::string, AbstractPolynomial>& templates,
    const Interpretation& fixed_model,
    const std::vector<std::string>& var_order) {
  const unsigned arity = static_cast<unsigned>(var_order.size());
  const auto& node = term->node();
  if (auto* v = std::get_if<Term::Var>(&node)) {
    for (unsigned i = 0; i < arity; ++i)
      if (var_order[i] == v->name)
        return AbstractPolynomial::variable(arity, i,
                                            CoeffPoly::constant(Nat(1)));
    throw EvalError("variable " + v->name + " not in variable order");
  }
  if (auto* c = std::get_if<Term::Const>(&node))
    return AbstractPolynomial::constant(arity, CoeffPoly::constant(c->value));
  if (auto* b = std::get_if<Term::Bin>(&node)) {
    AbstractPolynomial l =
        abstract_interpret(b->left, templates, fixed_model, var_order);
    AbstractPolynomial r =
        abstract_interpret(b->right, templates, fixed_model, var_order);
    switch (b->op) {
      case BinOp::Plus: return mp_plus(l, r);
      case BinOp::Mul: return mp_mul(l, r);
      case BinOp::Max: return mp_max(l, r);
    }
  }
  auto& app = std::get<Term::App>(node);
  std::vector<AbstractPolynomial> args;
  for (auto& a : app.args)
    args.push_back(abstract_interpret(a, templates, fixed_model, var_order));
  const AbstractPolynomial* f = nullptr;
  AbstractPolynomial lifted;
  if (auto it = templates.find(app.symbol.name); it != templates.end()) {
    f = &it->second;
  } else if (const MaxPolynomial* fixed = fixed_model.find(app.symbol.name)) {
    lift_fixed(*fixed, lifted);
    f = &lifted;
  } else {
    throw EvalError("symbol " + app.symbol.name +
                    " has neither template nor fixed interpretation");
  }
  return mp_compose(*f, args, CoeffPoly::constant(Nat(1)));
}

DioConj absolute_positiveness(const Poly<CoeffPoly>& p,
                              const Poly<CoeffPoly>& q) {
  DioConj atoms;
  std::set<Monomial, GrlexLess> monos;
  for (auto& [m, c] : p.terms) monos.insert(m);
  for (auto& [m, c] : q.terms) monos.insert(m);
  for (auto& m : monos) {
    auto pit = p.terms.find(m);
    auto qit = q.terms.find(m);
    CoeffPoly pc = pit == p.terms.end() ? CoeffPoly{} : pit->second;
    CoeffPoly qc = qit == q.terms.end() ? CoeffPoly{} : qit->second;
    if (pc.dominates(qc)) continue;  // trivially satisfied
    atoms.push_back({std::move(pc), std::move(qc)});
  }
  return atoms;
}

std::vector<DioClause> eliminate_max(const AbstractPolynomial& lhs,
                                     const AbstractPolynomial& rhs) {
  std::vector<DioClause> clauses;
  for (auto& f : rhs.branches) {
    DioClause clause;
    for (auto& e : lhs.branches)
      clause.disjuncts.push_back(absolute_positiveness(e, f));
    // drop the clause if some disjunct is trivially true
    bool trivially_true = false;
    for (auto& conj : clause.disjuncts)
      if (conj.empty()) {
        trivially_true = true;
        break;
      }
    if (!trivially_true) clauses.push_back(std::move(clause));
  }
  return clauses;
}

Interpretation Synthesis::concretize(
    const std::map<unsigned, Nat>& valuation) const {
  Interpretation out;
  for (auto& [name, tmpl] : templates) {
    std::vector<NatPoly> branches;
    for (auto& b : tmpl.branches) {
      NatPoly p;
      for (auto& [m, c] : b.terms) {
        Nat v = coeff_poly_eval(c, valuation);
        if (v != 0) p.terms.emplace(m, std::move(v));
      }
      branches.push_back(std::move(p));
    }
    out.set(template_symbols.at(name),
            MaxPolynomial(tmpl.arity, std::move(branches)));
  }
  return out;
}

Synthesis synthesize(const ConstraintSystem& cs,
                     const Interpretation& fixed_model, unsigned degree,
                     const TemplateOptions& opts) {
  Synthesis syn;
  CoeffAllocator alloc;
  for (auto& [name, arity] : cs.signature()) {
    if (fixed_model.defines(name)) continue;
    Symbol sym{name, arity};
    syn.templates.emplace(name, make_template(sym, degree, alloc, opts));
    syn.template_symbols.emplace(name, sym);
  }
  for (auto& c : cs.constraints()) {
    auto order = sorted_variables(c);
    AbstractPolynomial l =
        abstract_interpret(c.lhs, syn.templates, fixed_model, order);
    AbstractPolynomial r =
        abstract_interpret(c.rhs, syn.templates, fixed_model, order);
    for (auto& clause : eliminate_max(l, r))
      syn.dio.clauses.push_back(std::move(clause));
  }
  syn.coeff_vars = alloc.vars();
  return syn;
}

}  // namespace ubsolve
