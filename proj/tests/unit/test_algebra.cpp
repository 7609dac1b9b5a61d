#include <gtest/gtest.h>

#include <random>

#include "cremona/algebra/gcd.hpp"
#include "cremona/algebra/text.hpp"

using namespace cremona;
using namespace cremona::algebra;

namespace {

VarTablePtr xy_dt() { return make_vartable({"x", "y", "dt"}); }

MultiPoly P(const char* s, const VarTablePtr& v) { return parse_poly(s, v); }

MultiPoly random_poly(std::mt19937& rng, const VarTablePtr& v, int terms, int maxdeg) {
  std::uniform_int_distribution<int> e(0, maxdeg), c(-9, 9);
  std::vector<Term> ts;
  for (int i = 0; i < terms; ++i) {
    Monomial m(v->size());
    for (std::size_t k = 0; k < v->size(); ++k) m[k] = static_cast<std::uint32_t>(e(rng));
    ts.push_back({m, Rational(c(rng))});
  }
  return MultiPoly::from_terms(v, ts);
}

}  // namespace

TEST(Gcd, SharedRoot) {
  auto v = make_vartable({"dt"});
  EXPECT_EQ(to_string(poly_gcd(P("dt^2 - 1", v), P("dt^3 - 1", v))), "dt - 1");
}

TEST(Gcd, Factorization) {
  auto v = make_vartable({"x", "y"});
  EXPECT_EQ(to_string(poly_gcd(P("x^2 - y^2", v), P("x^2 + 2*x*y + y^2", v))), "x + y");
}

TEST(Gcd, Coprime) {
  auto v = make_vartable({"dt"});
  EXPECT_EQ(to_string(poly_gcd(P("8 + 11*dt", v), P("11 + 24*dt", v))), "1");
}

TEST(Gcd, RandomCommonFactorMatchesReference) {
  std::mt19937 rng(7);
  auto v = xy_dt();
  for (int trial = 0; trial < 40; ++trial) {
    MultiPoly g = random_poly(rng, v, 3, 2);
    MultiPoly a = random_poly(rng, v, 4, 2) * g;
    MultiPoly b = random_poly(rng, v, 4, 2) * g;
    if (a.is_zero() || b.is_zero()) continue;
    auto r = gcd_cofactors(a, b);
    EXPECT_EQ(r.gcd * r.cofactor_a, a);
    EXPECT_EQ(r.gcd * r.cofactor_b, b);
    EXPECT_TRUE(divides(primitive_part(g), r.gcd) || g.is_zero());
    EXPECT_EQ(r.gcd, prs::gcd(a, b)) << to_string(a) << " | " << to_string(b);
  }
}

#include "cremona/algebra/bareiss.hpp"
#include "cremona/algebra/ratfunc.hpp"
#include "cremona/algebra/roots.hpp"

TEST(PolyArith, Examples) {
  auto v = make_vartable({"x", "y"});
  EXPECT_EQ(to_string(P("x + y", v) + P("x - y", v)), "2*x");
  EXPECT_EQ(to_string(P("x + 1", v) * P("x - 1", v)), "x^2 - 1");
  std::mt19937 rng(3);
  auto p = random_poly(rng, v, 5, 3);
  EXPECT_TRUE((MultiPoly(v) * p).is_zero());
}

TEST(PolyArith, MismatchedTablesRejected) {
  auto a = make_vartable({"x"});
  auto b = make_vartable({"y"});
  EXPECT_THROW(P("x", a) + P("y", b), UsageError);
}

TEST(PolyArith, RingAxiomsRandomized) {
  std::mt19937 rng(11);
  auto v = xy_dt();
  for (int i = 0; i < 30; ++i) {
    auto a = random_poly(rng, v, 4, 3), b = random_poly(rng, v, 4, 3), c = random_poly(rng, v, 4, 3);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Squarefree, Examples) {
  auto v = make_vartable({"dt"});
  EXPECT_EQ(to_string(squarefree_part(P("(dt - 1)^2*(dt + 2)", v), 0)), "dt^2 + dt - 2");
  EXPECT_EQ(to_string(squarefree_part(P("dt^2 + dt - 2", v), 0)), "dt^2 + dt - 2");
  EXPECT_EQ(to_string(squarefree_part(P("dt^3", v), 0)), "dt");
  EXPECT_THROW(squarefree_part(MultiPoly(v), 0), UsageError);
}

TEST(Bareiss, WpOneByOne) {
  auto v = make_vartable({"x", "y", "dt", "a"});
  PolyMatrix A{{P("1 - 3*dt^2*x", v)}};
  auto x = bareiss_solve(A, {P("x + dt*y - a*dt^2/2", v)});
  ASSERT_EQ(x.size(), 1u);
  EXPECT_EQ(x[0], RatFunc(P("x + dt*y - a*dt^2/2", v), P("1 - 3*dt^2*x", v)));
  // back-substitution
  EXPECT_EQ(A[0][0] * x[0].numer(), P("x + dt*y - a*dt^2/2", v) * x[0].denom());
}

TEST(Bareiss, IdentityAndCramer) {
  auto v = make_vartable({"x"});
  auto one = P("1", v), zero = MultiPoly(v);
  auto x = bareiss_solve({{one, zero}, {zero, one}}, {P("x^2", v), P("3", v)});
  EXPECT_EQ(to_string(x[0]), "x^2");
  EXPECT_EQ(to_string(x[1]), "3");
  // [[2, 3], [5, 7]] x = [1, 4]: Cramer gives x0 = (7 - 12)/(14 - 15) = 5, x1 = (8 - 5)/(-1) = -3
  auto y = bareiss_solve({{P("2", v), P("3", v)}, {P("5", v), P("7", v)}}, {P("1", v), P("4", v)});
  EXPECT_EQ(to_string(y[0]), "5");
  EXPECT_EQ(to_string(y[1]), "-3");
  EXPECT_THROW(bareiss_solve({{P("x", v), P("x", v)}, {P("x", v), P("x", v)}}, {one, one}), SingularError);
}

TEST(Bareiss, RandomSystemsSatisfyEquations) {
  std::mt19937 rng(5);
  auto v = make_vartable({"x", "dt"});
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      PolyMatrix A(n);
      std::vector<MultiPoly> b;
      for (auto& row : A)
        for (std::size_t j = 0; j < n; ++j) row.push_back(random_poly(rng, v, 3, 1));
      for (std::size_t i = 0; i < n; ++i) b.push_back(random_poly(rng, v, 3, 1));
      std::vector<RatFunc> x;
      try {
        x = bareiss_solve(A, b);
      } catch (const SingularError&) {
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        RatFunc lhs = RatFunc::constant(v, 0);
        for (std::size_t j = 0; j < n; ++j) lhs = lhs + RatFunc(A[i][j]) * x[j];
        EXPECT_EQ(lhs, RatFunc(b[i]));
      }
    }
  }
}

TEST(RatFunc, CanonicalFormIsUnique) {
  auto v = make_vartable({"x", "y"});
  RatFunc a(P("2*x^2 - 2*y^2", v), P("-4*x - 4*y", v));
  RatFunc b = RatFunc(P("y", v)) * RatFunc(P("1/2", v)) - RatFunc(P("x/2", v));
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_string(a), "(-x + y)/(2)");
  RatFunc c(P("3*x", v), P("6*x*y + 9*x", v));
  EXPECT_EQ(to_string(c), "(1)/(2*y + 3)");
}

TEST(Subst, Examples) {
  auto v = make_vartable({"x", "y", "dt", "a"});
  RatFunc f(P("x + dt*y - a*dt^2/2", v), P("1 - 3*dt^2*x", v));
  auto asg = make_assignment(v, {{"x", Rational(1)}, {"y", Rational(2)}, {"a", Rational(1, 2)}});
  EXPECT_EQ(subst(f, asg), RatFunc(P("1 + 2*dt - dt^2/4", v), P("1 - 3*dt^2", v)));
  EXPECT_EQ(subst(f, {}), f);
  RatFunc inv(P("1", v), P("x", v));
  EXPECT_THROW(subst(inv, make_assignment(v, {{"x", Rational(0)}})), ExceptionalLocusError);
  // simultaneous: x <-> y
  Assignment swap{{0, RatFunc(P("y", v))}, {1, RatFunc(P("x", v))}};
  EXPECT_EQ(subst(RatFunc(P("x - 2*y", v), P("y", v)), swap), RatFunc(P("y - 2*x", v), P("x", v)));
  Assignment inv_x{{0, RatFunc(P("1", v), P("x", v))}};
  EXPECT_EQ(subst(RatFunc(P("x^2 + 1", v), P("x", v)), inv_x), RatFunc(P("x^2 + 1", v), P("x", v)));
}

TEST(Roots, Isolation) {
  auto v = make_vartable({"dt"});
  auto iv = isolate_real_roots(P("dt^3 - dt", v), 0, {Rational(-2), Rational(2)});
  ASSERT_EQ(iv.size(), 3u);
  EXPECT_EQ(refine_root(iv[0], Rational(1, 1000)), -1);
  EXPECT_EQ(refine_root(iv[1], Rational(1, 1000)), 0);
  EXPECT_EQ(refine_root(iv[2], Rational(1, 1000)), 1);
  auto q = isolate_real_roots(P("3*dt^4 - 4", v), 0, {Rational(0), std::nullopt});
  ASSERT_EQ(q.size(), 1u);
  EXPECT_NEAR(refine_root(q[0], Rational(1, 10000)).get_d(), 1.0746, 1e-4);
  EXPECT_TRUE(isolate_real_roots(P("dt^2 + 1", v), 0).empty());
  auto s = isolate_real_roots(P("dt^2 - 2", v), 0, {Rational(1), Rational(2)});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(refine_root(s[0], Rational(1, 1000000)).get_d(), 1.414213, 1e-6);
  auto l = isolate_real_roots(P("dt - 5", v), 0);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(refine_root(l[0], Rational(1, 2)), 5);
  EXPECT_THROW(isolate_real_roots(P("dt", make_vartable({"dt", "x"})) * P("x", make_vartable({"dt", "x"})), 0),
               UsageError);
}
