#include "ubsolve/scc.hpp"

#include <algorithm>
#include <cassert>

namespace ubsolve {

namespace {

void collect_all_symbols(const TermPtr& t, std::set<std::string>& out) {
  for (auto& s : symbols_of(t)) out.insert(s.name);
}

// Walks the maximal arithmetic prefix of a lhs; applications found at the
// frontier are the defined roots, everything below them is consumed.
void walk_lhs(const TermPtr& t, ConstraintRoles& roles) {
  const auto& node = t->node();
  if (auto* b = std::get_if<Term::Bin>(&node)) {
    walk_lhs(b->left, roles);
    walk_lhs(b->right, roles);
  } else if (auto* a = std::get_if<Term::App>(&node)) {
    roles.defined.insert(a->symbol.name);
    for (auto& arg : a->args) collect_all_symbols(arg, roles.consumed);
  }
}

}  // namespace

ConstraintRoles constraint_roles(const Constraint& c) {
  ConstraintRoles roles;
  walk_lhs(c.lhs, roles);
  collect_all_symbols(c.rhs, roles.consumed);
  return roles;
}

CallGraph build_call_graph(const ConstraintSystem& cs) {
  CallGraph g;
  g.nodes = cs.size();
  g.edges.resize(g.nodes);
  std::vector<ConstraintRoles> roles;
  roles.reserve(g.nodes);
  for (auto& c : cs.constraints()) roles.push_back(constraint_roles(c));
  for (std::size_t u = 0; u < g.nodes; ++u)
    for (std::size_t v = 0; v < g.nodes; ++v)
      for (auto& s : roles[u].consumed)
        if (roles[v].defined.contains(s)) {
          g.edges[u].insert(v);
          break;
        }
  return g;
}

SccPlan decompose(const CallGraph& graph) {
  const std::size_t n = graph.nodes;
  // Tarjan, iterative.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> sccs;
  std::vector<int> scc_of(n, -1);
  int next_index = 0;

  struct Frame {
    std::size_t v;
    std::set<std::size_t>::const_iterator it;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames;
    auto push_node = [&](std::size_t v) {
      index[v] = low[v] = next_index++;
      stack.push_back(v);
      on_stack[v] = true;
      frames.push_back({v, graph.edges[v].begin()});
    };
    push_node(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.it != graph.edges[f.v].end()) {
        std::size_t w = *f.it++;
        if (index[w] == -1) {
          push_node(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<std::size_t> scc;
          for (;;) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc.push_back(w);
            scc_of[w] = static_cast<int>(sccs.size());
            if (w == v) break;
          }
          std::sort(scc.begin(), scc.end());
          sccs.push_back(std::move(scc));
        }
      }
    }
  }

  // Order dependencies-first: an SCC is ready once all its successors in the
  // condensation are emitted. Ties broken by smallest constraint index.
  const std::size_t k = sccs.size();
  std::vector<std::set<std::size_t>> succs(k);
  std::vector<std::size_t> pending(k, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : graph.edges[u]) {
      auto cu = static_cast<std::size_t>(scc_of[u]);
      auto cv = static_cast<std::size_t>(scc_of[v]);
      if (cu != cv) succs[cu].insert(cv);
    }
  for (std::size_t c = 0; c < k; ++c) pending[c] = succs[c].size();
  std::vector<std::set<std::size_t>> preds(k);
  for (std::size_t c = 0; c < k; ++c)
    for (auto d : succs[c]) preds[d].insert(c);

  SccPlan plan;
  std::set<std::pair<std::size_t, std::size_t>> ready;  // (min index, scc)
  for (std::size_t c = 0; c < k; ++c)
    if (pending[c] == 0) ready.insert({sccs[c].front(), c});
  while (!ready.empty()) {
    auto [mi, c] = *ready.begin();
    ready.erase(ready.begin());
    plan.sccs.push_back(sccs[c]);
    for (auto p : preds[c])
      if (--pending[p] == 0) ready.insert({sccs[p].front(), p});
  }
  assert(plan.sccs.size() == k);  // condensation is acyclic
  return plan;
}

SccSolveResult solve_by_scc(const ConstraintSystem& cs,
                            const SccCallback& callback) {
  // Constraints defining the same symbol must be solved together: once an
  // SCC fixes an interpretation it is never reopened, so a definition split
  // across two SCCs would be fixed from the first SCC's constraints alone.
  // Augment the call graph with mutual edges between co-definers.
  CallGraph graph = build_call_graph(cs);
  std::map<std::string, std::vector<std::size_t>> definers;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (auto& s : constraint_roles(cs.constraints()[i]).defined)
      definers[s].push_back(i);
  for (auto& [sym, idxs] : definers)
    for (std::size_t a : idxs)
      for (std::size_t b : idxs)
        if (a != b) graph.edges[a].insert(b);
  SccPlan plan = decompose(graph);
  Interpretation acc;
  for (std::size_t i = 0; i < plan.sccs.size(); ++i) {
    std::vector<Constraint> sub;
    for (auto idx : plan.sccs[i]) sub.push_back(cs.constraints()[idx]);
    ConstraintSystem subsystem(std::move(sub));
    auto extension = callback(subsystem, acc);
    if (!extension) return {std::nullopt, i, std::move(acc)};
    acc.merge(*extension);
#ifndef NDEBUG
    {
      auto verdict = check_model(subsystem, acc).verdict;
      assert(verdict != ModelCheck::Verdict::Invalid);
    }
#endif
  }
  return {std::move(acc), 0, {}};
}

}  // namespace ubsolve
