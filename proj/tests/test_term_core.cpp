#include <doctest.h>

#include "helpers.hpp"
#include "ubsolve/interpretation.hpp"
#include "ubsolve/term.hpp"

using namespace ubsolve;
using namespace ubsolve::testing;

namespace {

Interpretation cs1_model() {
  return parse_model("n = 1\nr(x0,x1) = x0\nc(x0,x1) = x1 + 1\n");
}

}  // namespace

TEST_CASE("terms enforce arity at construction") {
  CHECK_THROWS_AS(Term::app({"f", 2}, {Term::constant(1)}), Error);
  CHECK_NOTHROW(Term::app({"f", 1}, {Term::constant(1)}));
  CHECK_THROWS_AS(Term::constant(Nat(-1)), Error);
}

TEST_CASE("constraint systems reject inconsistent arities") {
  Constraint c1{Term::app({"f", 1}, {Term::constant(0)}), Term::constant(0)};
  Constraint c2{Term::app({"f", 2}, {Term::constant(0), Term::constant(0)}),
                Term::constant(0)};
  CHECK_THROWS_AS(ConstraintSystem({c1, c2}), Error);
  ConstraintSystem ok({c1});
  CHECK(ok.signature().at("f") == 1);
}

TEST_CASE("eval handles constants and ground arithmetic") {
  CHECK(eval(Term::constant(7), {}, {}) == 7);
  CHECK(eval(term("(max 2 5)"), {}, {}) == 5);
  CHECK(eval(term("(+ 2 (* 3 4))"), {}, {}) == 14);
}

TEST_CASE("eval matches the hand derivation on the r/c/n example") {
  // r(c(x,y), z) with x=3, y=5, z=2: c(3,5) = 6, then r(6,2) = 6.
  Assignment assign{{"x", 3}, {"y", 5}, {"z", 2}};
  CHECK(eval(term("(r (c (var x) (var y)) (var z))"), cs1_model(), assign) ==
        6);
}

TEST_CASE("eval errors name the missing symbol or variable") {
  CHECK_THROWS_WITH_AS(eval(term("(g 1)"), {}, {}),
                       doctest::Contains("g"), EvalError);
  CHECK_THROWS_WITH_AS(eval(term("(var z)"), {}, {}),
                       doctest::Contains("z"), EvalError);
}

TEST_CASE("symbols_of and variables_of report exact occurrence sets") {
  ConstraintSystem fig3 = corpus_system("fig3.cs");
  std::set<std::string> names;
  for (auto& s : symbols_of(fig3)) names.insert(s.name);
  CHECK(names == std::set<std::string>{"dup", "nil", "cons", "k"});

  ConstraintVars vs = variables_of(sys("(>= (f (var x) 0) (var x))")
                                       .constraints()
                                       .front());
  CHECK(vs.lhs == std::set<std::string>{"x"});
  CHECK(vs.rhs == std::set<std::string>{"x"});

  vs = variables_of(sys("(>= (f (var x) (var y)) (var y))")
                        .constraints()
                        .front());
  CHECK(vs.lhs == std::set<std::string>{"x", "y"});
  CHECK(vs.rhs == std::set<std::string>{"y"});
}

TEST_CASE("interpret_term produces canonical max-polynomials") {
  NamedMaxPoly p = interpret_term(term("(+ (var x) 1)"), {});
  CHECK(p.poly == mp(1, "x0 + 1"));

  Interpretation interp = parse_model("c(x0,x1) = x1 + 1");
  NamedMaxPoly q = interpret_term(term("(c (var x) (var y))"), interp);
  CHECK(q.vars == std::vector<std::string>{"x", "y"});
  CHECK(q.poly == mp(2, "x1 + 1"));

  // max distributes outward through +
  NamedMaxPoly r = interpret_term(term("(+ (max (var x) (var y)) 1)"), {});
  CHECK(r.poly == mp(2, "max(x0 + 1, x1 + 1)"));
  CHECK(r.poly.branches.size() == 2);
}

TEST_CASE("max-polynomial validation and canonical form") {
  // monomial position out of range
  NatPoly bad = NatPoly::variable(1, 1);
  CHECK_THROWS_AS(MaxPolynomial(1, {bad}), Error);
  // dominated branch is dropped: max(x, x + 1) = x + 1
  MaxPolynomial p = mp(1, "max(x0, x0 + 1)");
  CHECK(p.branches.size() == 1);
  // duplicate branches collapse
  MaxPolynomial q = mp(1, "max(x0, x0)");
  CHECK(q.branches.size() == 1);
}

TEST_CASE("canonicalization is idempotent and value preserving") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    unsigned arity = 1 + rng.below(2);
    MaxPolynomial p = random_maxpoly(rng, arity);
    MaxPolynomial before = p;
    p.canonicalize();
    CHECK(p == before);  // constructor already canonicalizes
    std::vector<Nat> args(arity);
    for (int s = 0; s < 20; ++s) {
      for (auto& a : args) a = rng.below(5);
      CHECK(before.eval(args) == p.eval(args));
    }
  }
}

TEST_CASE("max-polynomials are weakly monotone") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    unsigned arity = 1 + rng.below(3);
    MaxPolynomial p = random_maxpoly(rng, arity);
    std::vector<Nat> args(arity);
    for (auto& a : args) a = rng.below(5);
    Nat base = p.eval(args);
    unsigned i = rng.below(arity);
    args[i] += 1 + rng.below(3);
    CHECK(p.eval(args) >= base);
  }
}

TEST_CASE("interpret_term agrees with eval pointwise") {
  Rng rng(41);
  std::vector<Symbol> symbols{{"f", 1}, {"g", 2}, {"a", 0}};
  Interpretation interp;
  interp.set({"f", 1}, random_maxpoly(rng, 1));
  interp.set({"g", 2}, random_maxpoly(rng, 2));
  interp.set({"a", 0}, random_maxpoly(rng, 0));
  std::vector<std::string> vars{"u", "v"};
  for (int trial = 0; trial < 300; ++trial) {
    TermPtr t = random_term(rng, symbols, vars, 3);
    MaxPolynomial p = interpret_term(t, interp, vars);
    for (Nat u = 0; u <= 4; ++u)
      for (Nat v = 0; v <= 4; ++v) {
        Assignment assign{{"u", u}, {"v", v}};
        CHECK(p.eval({u, v}) == eval(t, interp, assign));
      }
  }
}

TEST_CASE("check_model validates the published r/c/n model") {
  ModelCheck mc = check_model(corpus_system("cs1.cs"), cs1_model());
  CHECK(mc.verdict == ModelCheck::Verdict::Valid);
}

TEST_CASE("check_model finds concrete counterexamples") {
  ConstraintSystem cs = sys("(>= (f (var x)) (+ (var x) 1))");
  Interpretation interp;
  interp.set({"f", 1}, mp(1, "0"));
  ModelCheck mc = check_model(cs, interp);
  REQUIRE(mc.verdict == ModelCheck::Verdict::Invalid);
  CHECK(mc.constraint_index == 0);
  // any natural falsifies 0 >= x + 1; the reported one must too
  CHECK(mc.counterexample.at("x") >= 0);
}

TEST_CASE("check_model requires a total interpretation") {
  ConstraintSystem cs = sys("(>= (f (var x)) (g (var x)))");
  Interpretation interp;
  interp.set({"f", 1}, mp(1, "x0"));
  CHECK_THROWS_WITH_AS(check_model(cs, interp), doctest::Contains("g"),
                       EvalError);
}

TEST_CASE("check_model Valid implies exhaustive validity on the corpus") {
  auto fig2 = corpus_system("fig2.cs");
  auto model = corpus_model("fig2c.model");
  REQUIRE(check_model(fig2, model).verdict == ModelCheck::Verdict::Valid);
  CHECK(holds_exhaustively(fig2, model, 2));
}
