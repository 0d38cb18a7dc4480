#include <doctest.h>

#include "helpers.hpp"
#include "ubsolve/scc.hpp"
#include "ubsolve/simplify.hpp"

using namespace ubsolve;
using namespace ubsolve::testing;

TEST_CASE("constraint_roles peels the arithmetic context") {
  // lhs f(g(x)) + h(y): defined {f, h}, consumed {g} plus rhs symbols
  Constraint c = sys("(>= (+ (f (g (var x))) (h (var y))) (k))")
                     .constraints()
                     .front();
  ConstraintRoles roles = constraint_roles(c);
  CHECK(roles.defined == std::set<std::string>{"f", "h"});
  CHECK(roles.consumed == std::set<std::string>{"g", "k"});
}

TEST_CASE("call graph of the corrected r/c/n system") {
  CallGraph g = build_call_graph(corpus_system("cs1.cs"));
  REQUIRE(g.nodes == 2);
  CHECK(g.edges[0].empty());              // n occurs in no lhs
  CHECK(g.edges[1] == std::set<std::size_t>{0, 1});  // r in both lhs
}

TEST_CASE("a lone constraint without rhs symbols has no edges") {
  CallGraph g = build_call_graph(sys("(>= (f (var x)) (var x))"));
  CHECK(g.edges[0].empty());
}

TEST_CASE("call graph of the dup system") {
  CallGraph g = build_call_graph(corpus_system("fig3.cs"));
  // the recursive constraint consumes cons and dup, which are defined by
  // constraints 0, 1 (dup) and 2 (cons)
  CHECK(g.edges[1] == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("decompose orders dependencies first") {
  CallGraph chain{3, {{1}, {2}, {}}};
  SccPlan plan = decompose(chain);
  REQUIRE(plan.sccs.size() == 3);
  CHECK(plan.sccs[0] == std::vector<std::size_t>{2});
  CHECK(plan.sccs[1] == std::vector<std::size_t>{1});
  CHECK(plan.sccs[2] == std::vector<std::size_t>{0});

  SccPlan cs1 = decompose(build_call_graph(corpus_system("cs1.cs")));
  REQUIRE(cs1.sccs.size() == 2);
  CHECK(cs1.sccs[0] == std::vector<std::size_t>{0});
  CHECK(cs1.sccs[1] == std::vector<std::size_t>{1});

  CHECK(decompose(CallGraph{}).sccs.empty());
}

TEST_CASE("decompose groups cycles into one SCC") {
  ConstraintSystem cs = sys("(>= (f (var x)) (g (var x)))\n"
                            "(>= (g (var x)) (f (var x)))");
  SccPlan plan = decompose(build_call_graph(cs));
  REQUIRE(plan.sccs.size() == 1);
  CHECK(plan.sccs[0] == std::vector<std::size_t>{0, 1});
}

TEST_CASE("plan respects the condensation order on every corpus system") {
  for (const char* name :
       {"fig2.cs", "fig3.cs", "cs1.cs", "cs1_displayed.cs", "witness.cs"}) {
    ConstraintSystem cs = corpus_system(name);
    CallGraph g = build_call_graph(cs);
    SccPlan plan = decompose(g);
    // union of SCCs = all constraints, pairwise disjoint
    std::set<std::size_t> seen;
    std::map<std::size_t, std::size_t> position;
    for (std::size_t i = 0; i < plan.sccs.size(); ++i)
      for (auto idx : plan.sccs[i]) {
        CHECK(!seen.contains(idx));
        seen.insert(idx);
        position[idx] = i;
      }
    CHECK(seen.size() == cs.size());
    // for every cross-SCC edge u -> v, v's SCC precedes u's
    for (std::size_t u = 0; u < g.nodes; ++u)
      for (auto v : g.edges[u])
        if (position[u] != position[v]) CHECK(position[v] < position[u]);
  }
}

TEST_CASE("the simplified prependAll system splits into several SCCs") {
  SimplifyResult r = simplify_all(corpus_system("fig2.cs"));
  SccPlan plan = decompose(build_call_graph(r.system));
  CHECK(plan.sccs.size() >= 2);
  // regression value, frozen from the implementation
  CHECK(plan.sccs.size() == 11);
}

TEST_CASE("solve_by_scc visits independent constraints separately") {
  ConstraintSystem cs = sys("(>= (f (var x)) (var x))\n"
                            "(>= (g (var x)) 1)");
  int calls = 0;
  SccSolveResult r = solve_by_scc(
      cs, [&](const ConstraintSystem& sub, const Interpretation& fixed)
              -> std::optional<Interpretation> {
        ++calls;
        CHECK(sub.size() == 1);
        Interpretation out;
        for (auto& [name, arity] : sub.signature())
          if (!fixed.defines(name))
            out.set({name, arity}, mp(arity, arity ? "x0 + 1" : "1"));
        return out;
      });
  CHECK(calls == 2);
  REQUIRE(r.model.has_value());
  CHECK(r.model->size() == 2);
}

TEST_CASE("solve_by_scc invokes the callback once for a cyclic pair") {
  ConstraintSystem cs = sys("(>= (f (var x)) (g (var x)))\n"
                            "(>= (g (var x)) (f (var x)))");
  int calls = 0;
  solve_by_scc(cs, [&](const ConstraintSystem& sub, const Interpretation&)
                       -> std::optional<Interpretation> {
    ++calls;
    CHECK(sub.size() == 2);
    Interpretation out;
    out.set({"f", 1}, mp(1, "x0"));
    out.set({"g", 1}, mp(1, "x0"));
    return out;
  });
  CHECK(calls == 1);
}

TEST_CASE("solve_by_scc groups co-defining constraints together") {
  // both constraints define r; fixing r from either one alone would lose
  // the other's requirements, so they must be solved as one unit
  ConstraintSystem cs = corpus_system("cs1.cs");
  std::vector<std::size_t> sizes;
  solve_by_scc(cs, [&](const ConstraintSystem& sub, const Interpretation&)
                       -> std::optional<Interpretation> {
    sizes.push_back(sub.size());
    Interpretation out;
    out.set({"n", 0}, mp(0, "1"));
    out.set({"r", 2}, mp(2, "x0"));
    out.set({"c", 2}, mp(2, "x1 + 1"));
    return out;
  });
  REQUIRE(sizes.size() == 1);
  CHECK(sizes[0] == 2);
}

TEST_CASE("solve_by_scc reports the failing SCC and the partial model") {
  ConstraintSystem cs = sys("(>= (f (var x)) (var x))\n"
                            "(>= (g (var x)) (f (var x)))");
  int calls = 0;
  SccSolveResult r = solve_by_scc(
      cs, [&](const ConstraintSystem& sub, const Interpretation& fixed)
              -> std::optional<Interpretation> {
        ++calls;
        if (calls == 1) {
          CHECK(sub.signature().contains("f"));
          Interpretation out;
          out.set({"f", 1}, mp(1, "x0"));
          return out;
        }
        return std::nullopt;  // refuse the second SCC
      });
  CHECK(!r.model.has_value());
  CHECK(r.failed_scc == 1);
  CHECK(r.partial.defines("f"));
}

TEST_CASE("the partial model is only extended, never modified") {
  ConstraintSystem cs = sys("(>= (f (var x)) (var x))\n"
                            "(>= (g (var x)) (f (var x)))");
  Interpretation first_f;
  SccSolveResult r = solve_by_scc(
      cs, [&](const ConstraintSystem& sub, const Interpretation& fixed)
              -> std::optional<Interpretation> {
        Interpretation out;
        if (!fixed.defines("f")) {
          out.set({"f", 1}, mp(1, "x0"));
          first_f.set({"f", 1}, mp(1, "x0"));
        } else {
          CHECK(*fixed.find("f") == *first_f.find("f"));
          out.set({"g", 1}, mp(1, "x0"));
        }
        return out;
      });
  REQUIRE(r.model.has_value());
  CHECK(*r.model->find("f") == *first_f.find("f"));
}
