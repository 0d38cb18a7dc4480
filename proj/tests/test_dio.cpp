#include <doctest.h>

#include "helpers.hpp"
#include "ubsolve/dio.hpp"

using namespace ubsolve;
using namespace ubsolve::testing;

namespace {

CoeffPoly cv(unsigned id) { return CoeffPoly::variable(id, Nat(1)); }
CoeffPoly cc(long n) { return CoeffPoly::constant(Nat(n)); }

DioClause atom_clause(CoeffPoly lhs, CoeffPoly rhs) {
  DioClause c;
  c.disjuncts.push_back({DioAtom{std::move(lhs), std::move(rhs)}});
  return c;
}

DioSystem conj_system(std::vector<DioClause> clauses) {
  return DioSystem{std::move(clauses)};
}

// Random conjunction-of-atoms system over `vars` coefficient variables with
// coefficients and constants below 4, degree <= 2 atoms.
DioSystem random_dio(Rng& rng, unsigned vars) {
  DioSystem dio;
  unsigned n = 1 + rng.below(4);
  for (unsigned i = 0; i < n; ++i) {
    auto side = [&] {
      CoeffPoly p;
      unsigned terms = 1 + rng.below(2);
      for (unsigned t = 0; t < terms; ++t) {
        Monomial m;
        unsigned degree = rng.below(3);
        for (unsigned d = 0; d < degree; ++d) ++m.exps[rng.below(vars)];
        std::erase_if(m.exps, [](const auto& e) { return e.second == 0; });
        Nat c = rng.below(4);
        if (c != 0) p = p + CoeffPoly{{{m, c}}};
      }
      return p;
    };
    dio.clauses.push_back(atom_clause(side(), side()));
  }
  return dio;
}

bool brute_force_sat(const DioSystem& dio, unsigned bound) {
  std::vector<unsigned> ids = dio.variable_ids();
  std::vector<Nat> point(ids.size(), 0);
  for (;;) {
    CoeffValuation val;
    for (std::size_t i = 0; i < ids.size(); ++i) val[ids[i]] = point[i];
    if (eval_system(dio, val)) return true;
    std::size_t i = 0;
    while (i < point.size() && point[i] == bound) point[i++] = 0;
    if (i == point.size()) return false;
    ++point[i];
  }
}

}  // namespace

TEST_CASE("emit_smtlib produces a deterministic one-shot script") {
  DioSystem dio = conj_system({atom_clause(cv(0) * cv(1) * cc(2) + cc(3),
                                           cv(2))});
  std::string script = emit_smtlib(dio);
  CHECK(script.find("(set-logic QF_NIA)") == 0);
  CHECK(script.find("(declare-fun c0 () Int)") != std::string::npos);
  CHECK(script.find("(assert (>= c0 0))") != std::string::npos);
  CHECK(script.find("(declare-fun c2 () Int)") != std::string::npos);
  CHECK(script.find("(assert (>= (+ (* 2 c0 c1) 3) c2))") !=
        std::string::npos);
  CHECK(script.rfind("(check-sat)\n") == script.size() - 12);
  CHECK(emit_smtlib(dio) == script);
}

TEST_CASE("emit_smtlib renders disjunctions and the empty system") {
  DioClause clause;
  clause.disjuncts.push_back({DioAtom{cv(0), cc(1)}});
  clause.disjuncts.push_back({DioAtom{cv(1), cc(1)}, DioAtom{cv(1), cv(0)}});
  std::string script = emit_smtlib(conj_system({clause}));
  CHECK(script.find("(assert (or (>= c0 1) (and (>= c1 1) (>= c1 c0))))") !=
        std::string::npos);

  CHECK(emit_smtlib(DioSystem{}) == "(set-logic QF_NIA)\n(check-sat)\n");
}

TEST_CASE("solve_internal returns the smallest model in variable order") {
  DioSystem dio = conj_system(
      {atom_clause(cv(1), cc(1)), atom_clause(cv(2), cc(1))});
  SolveResult r = solve_internal(dio, 3);
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.valuation == CoeffValuation{{1, 1}, {2, 1}});
}

TEST_CASE("solve_internal handles nonlinear atoms") {
  // c*c >= 4 and 3 >= c forces c = 2 as the first solution
  DioSystem dio = conj_system(
      {atom_clause(cv(0) * cv(0), cc(4)), atom_clause(cc(3), cv(0))});
  SolveResult r = solve_internal(dio, 5);
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.valuation.at(0) == 2);
}

TEST_CASE("solve_internal recognises ground falsity and truth") {
  CHECK(solve_internal(conj_system({atom_clause(cc(0), cc(1))}), 3).status ==
        SolveStatus::Unsat);
  CHECK(solve_internal(conj_system({atom_clause(cc(1), cc(0))}), 3).status ==
        SolveStatus::Sat);
  CHECK(solve_internal(DioSystem{}, 3).status == SolveStatus::Sat);
}

TEST_CASE("unsat-within-bound is relative to the bound") {
  DioSystem dio = conj_system({atom_clause(cv(0), cc(5))});
  CHECK(solve_internal(dio, 3).status == SolveStatus::Unsat);
  CHECK(solve_internal(dio, 5).status == SolveStatus::Sat);
}

TEST_CASE("the work limit raises a resource error") {
  DioSystem dio = conj_system(
      {atom_clause(cv(0) + cv(1) + cv(2), cc(30))});
  CHECK_THROWS_AS(solve_internal(dio, 16, 2), ResourceError);
}

TEST_CASE("an expired deadline reports a timeout") {
  DioSystem dio = conj_system({atom_clause(cv(0), cc(1))});
  Deadline past = Deadline::in(std::chrono::milliseconds(0));
  CHECK(solve_internal(dio, 16, 50'000'000, past).status ==
        SolveStatus::TimedOut);
}

TEST_CASE("solve_internal is deterministic") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    DioSystem dio = random_dio(rng, 3);
    SolveResult a = solve_internal(dio, 3);
    SolveResult b = solve_internal(dio, 3);
    CHECK(a.status == b.status);
    CHECK(a.valuation == b.valuation);
  }
}

TEST_CASE("solve_internal agrees with brute force on small systems") {
  Rng rng(31);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DioSystem dio = random_dio(rng, 3);
    SolveResult r = solve_internal(dio, 2);
    bool expected = brute_force_sat(dio, 2);
    CHECK((r.status == SolveStatus::Sat) == expected);
    if (r.status == SolveStatus::Sat) {
      CHECK(eval_system(dio, r.valuation));
      for (auto& [id, v] : r.valuation) CHECK(v <= 2);
      ++sat;
    } else {
      ++unsat;
    }
  }
  CHECK(sat > 20);
  CHECK(unsat > 20);
}

TEST_CASE("minimise shrinks a slack starting valuation") {
  DioSystem dio = conj_system({atom_clause(cv(1), cc(1))});
  std::vector<CoeffVar> vars{{1, "f", 0, Monomial{}}};
  SolverConfig config;
  auto solver = make_solver(dio, config);
  CoeffValuation out =
      minimise(dio, CoeffValuation{{1, 3}}, vars, *solver, config);
  CHECK(out == CoeffValuation{{1, 1}});
}

TEST_CASE("minimise leaves an already-minimal valuation unchanged") {
  DioSystem dio = conj_system({atom_clause(cv(0), cc(2))});
  std::vector<CoeffVar> vars{{0, "f", 0, Monomial{}}};
  SolverConfig config;
  auto solver = make_solver(dio, config);
  CoeffValuation out =
      minimise(dio, CoeffValuation{{0, 2}}, vars, *solver, config);
  CHECK(out == CoeffValuation{{0, 2}});
}

TEST_CASE("minimise prefers shrinking higher-degree coefficients") {
  // c0 has origin degree 1, c1 degree 0; c0 + c1 >= 2 lets the linear
  // coefficient go to zero at the constant's expense
  DioSystem dio = conj_system({atom_clause(cv(0) + cv(1), cc(2))});
  std::vector<CoeffVar> vars{{0, "f", 0, Monomial{{{0, 1}}}},
                             {1, "f", 0, Monomial{}}};
  SolverConfig config;
  auto solver = make_solver(dio, config);
  CoeffValuation out =
      minimise(dio, CoeffValuation{{0, 2}, {1, 2}}, vars, *solver, config);
  CHECK(eval_system(dio, out));
  CHECK(out.at(0) == 0);
  CHECK(out.at(1) == 2);
}

TEST_CASE("minimise never grows the tier sums lexicographically") {
  // weight may shift from the linear tier into the constant tier, but the
  // pair (linear sum, constant sum) never increases lexicographically
  Rng rng(63);
  for (int trial = 0; trial < 40; ++trial) {
    DioSystem dio = random_dio(rng, 3);
    SolveResult r = solve_internal(dio, 3);
    if (r.status != SolveStatus::Sat) continue;
    std::vector<CoeffVar> vars;
    for (auto id : dio.variable_ids())
      vars.push_back({id, "f", 0,
                      rng.chance(0.5) ? Monomial{{{0, 1}}} : Monomial{}});
    SolverConfig config;
    auto solver = make_solver(dio, config);
    CoeffValuation out = minimise(dio, r.valuation, vars, *solver, config);
    CHECK(eval_system(dio, out));
    Nat before_lin = 0, before_const = 0, after_lin = 0, after_const = 0;
    for (auto& v : vars) {
      if (v.origin_degree() == 1) {
        before_lin += r.valuation.at(v.id);
        after_lin += out.at(v.id);
      } else {
        before_const += r.valuation.at(v.id);
        after_const += out.at(v.id);
      }
    }
    CHECK(after_lin <= before_lin);
    if (after_lin == before_lin) CHECK(after_const <= before_const);
  }
}

TEST_CASE("the incremental solver honours push and pop") {
  DioSystem dio = conj_system({atom_clause(cv(0), cc(1))});
  SolverConfig config;
  auto solver = make_solver(dio, config);
  CHECK(solver->check(Deadline::unbounded()).status == SolveStatus::Sat);
  solver->push(atom_clause(cc(0), cv(0)));  // 0 >= c0, contradiction
  CHECK(solver->check(Deadline::unbounded()).status == SolveStatus::Unsat);
  solver->pop();
  CHECK(solver->check(Deadline::unbounded()).status == SolveStatus::Sat);
}

// ---- external solver protocol, exercised with shell mocks ----

namespace {

SolverConfig mock(const std::string& command) {
  SolverConfig config;
  config.external_command = command;
  return config;
}

DioSystem two_var_system() {
  return conj_system(
      {atom_clause(cv(0), cc(1)), atom_clause(cv(1), cc(2))});
}

}  // namespace

TEST_CASE("a sat reply with values is decoded") {
  SolveResult r = solve_external(
      two_var_system(),
      mock("printf 'sat\\n((c0 1) (c1 2))\\n'; cat >/dev/null"));
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.valuation == CoeffValuation{{0, 1}, {1, 2}});
}

TEST_CASE("an unsat reply needs no model") {
  SolveResult r =
      solve_external(two_var_system(), mock("printf 'unsat\\n'; cat >/dev/null"));
  CHECK(r.status == SolveStatus::Unsat);
}

TEST_CASE("unknown is passed through") {
  SolveResult r = solve_external(two_var_system(),
                                 mock("printf 'unknown\\n'; cat >/dev/null"));
  CHECK(r.status == SolveStatus::Unknown);
}

TEST_CASE("garbage replies are protocol violations") {
  CHECK_THROWS_WITH_AS(
      solve_external(two_var_system(),
                     mock("printf 'maybe\\n'; cat >/dev/null")),
      doctest::Contains("protocol"), Error);
}

TEST_CASE("negative model values are rejected") {
  CHECK_THROWS_WITH_AS(
      solve_external(
          two_var_system(),
          mock("printf 'sat\\n((c0 -1) (c1 2))\\n'; cat >/dev/null")),
      doctest::Contains("negative"), Error);
  CHECK_THROWS_WITH_AS(
      solve_external(
          two_var_system(),
          mock("printf 'sat\\n((c0 (- 1)) (c1 2))\\n'; cat >/dev/null")),
      doctest::Contains("negative"), Error);
}

TEST_CASE("missing values are rejected") {
  CHECK_THROWS_WITH_AS(
      solve_external(two_var_system(),
                     mock("printf 'sat\\n((c0 1))\\n'; cat >/dev/null")),
      doctest::Contains("missing"), Error);
}

TEST_CASE("a silent solver times out and is killed") {
  SolverConfig config = mock("sleep 30");
  SolveResult r = solve_external(two_var_system(), config,
                                 Deadline::in(std::chrono::milliseconds(200)));
  CHECK(r.status == SolveStatus::TimedOut);
}

TEST_CASE("the external session answers successive checks") {
  // ground-true system with no variables: check-sat twice over push/pop
  DioSystem dio = conj_system({atom_clause(cc(1), cc(0))});
  SolverConfig config = mock("printf 'unsat\\nsat\\n'; cat >/dev/null");
  auto solver = make_solver(dio, config);
  CHECK(solver->check(Deadline::unbounded()).status == SolveStatus::Unsat);
  solver->push(atom_clause(cc(1), cc(0)));
  CHECK(solver->check(Deadline::unbounded()).status == SolveStatus::Sat);
}
