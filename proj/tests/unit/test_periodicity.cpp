#include <gtest/gtest.h>

#include "cremona/algebra/text.hpp"
#include "cremona/model/builtins.hpp"
#include "cremona/periodicity/period.hpp"
#include "cremona/util/agm.hpp"

using namespace cremona;
using namespace cremona::periodicity;
using algebra::parse_poly;
using model::builtin_system;

namespace {

const CremonaMap& wp_map() {
  static const CremonaMap m = scheme::build_map(scheme::polarize(builtin_system("wp")));
  return m;
}

const CremonaMap& jacobi_map() {
  static const CremonaMap m = scheme::build_map(scheme::polarize(builtin_system("jacobi")));
  return m;
}

const std::vector<Rational> kWpX0{1, 2};
const std::vector<Rational> kJacX0{0, 1, 1};

std::vector<double> approx_roots(const PeriodFinding& f) {
  std::vector<double> r;
  for (const auto& x : f.roots) r.push_back(x.approx);
  return r;
}

void expect_roots(const PeriodFinding& f, const std::vector<double>& want, double tol) {
  auto got = approx_roots(f);
  ASSERT_EQ(got.size(), want.size()) << "n = " << f.n << ", G = " << algebra::to_string(f.G);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "n = " << f.n;
}

}  // namespace

TEST(SymbolicOrbit, WpFirstStep) {
  auto o = iterate_symbolic(wp_map(), kWpX0, 1);
  auto t = o.table;
  EXPECT_EQ(o.components[0], RatFunc(parse_poly("1 + 2*dt - dt^2/4", t), parse_poly("1 - 3*dt^2", t)));
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<Rational> zero{Rational(0)};
    EXPECT_EQ(o.numerators[i].evaluate(zero) / o.denominator.evaluate(zero), kWpX0[i]);
  }
}

TEST(SymbolicOrbit, StagesAgreeWithExactSteps) {
  auto stages = iterate_symbolic_stages(wp_map(), kWpX0, 6);
  std::int64_t last = 0;
  for (const auto& s : stages) {
    EXPECT_GE(s.denominator.total_degree(), last);
    last = s.denominator.total_degree();
  }
  // evaluation at a rational step equals repeated exact steps
  const Rational dt(3, 7);
  std::vector<Rational> x = kWpX0;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    x = scheme::eval_map_exact(wp_map(), x, dt);
    std::vector<Rational> p{dt};
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(stages[k].components[i].evaluate(std::span<const Rational>(p)), x[i]);
  }
}

TEST(PeriodPolynomial, Examples) {
  auto stages = iterate_symbolic_stages(wp_map(), kWpX0, 4);
  auto g1 = period_polynomial(stages[0]);
  EXPECT_TRUE(g1.is_constant());
  auto g2 = period_polynomial(stages[1]);
  EXPECT_TRUE(g2.is_constant() || algebra::isolate_real_roots(g2, 0, {Rational(0), std::nullopt}).empty());
  auto g4 = period_polynomial(stages[3]);
  EXPECT_TRUE(algebra::divides(parse_poly("3*dt^4 - 4", g4.vars()), g4));
}

TEST(PeriodPolynomial, Properties) {
  auto stages = iterate_symbolic_stages(wp_map(), kWpX0, 8);
  for (std::size_t n = 1; n <= 8; ++n) {
    auto g = period_polynomial(stages[n - 1]);
    EXPECT_NE(g.constant_term(), 0);
    EXPECT_EQ(algebra::content(g), 1);
    EXPECT_TRUE(algebra::poly_gcd(g, g.derivative(0)).is_constant());
    auto full = period_gcd(stages[n - 1]);
    for (auto d : proper_divisors(n)) EXPECT_TRUE(algebra::divides(period_polynomial(stages[d - 1]), full)) << n << " " << d;
  }
}

TEST(FindPeriodSteps, WpTable) {
  FindOptions opt;
  opt.hi = 10;
  auto fs = find_period_steps(wp_map(), kWpX0, {2, 3, 4, 5, 6, 7, 8, 9, 10}, opt, 0);
  expect_roots(fs[0], {}, 0.002);
  expect_roots(fs[1], {}, 0.002);
  expect_roots(fs[2], {1.074}, 0.002);
  expect_roots(fs[3], {6.908}, 0.002);
  expect_roots(fs[4], {}, 0.002);
  expect_roots(fs[5], {0.556, 5.870, 7.759}, 0.002);
  expect_roots(fs[6], {0.535, 1.074, 6.843}, 0.002);
  expect_roots(fs[7], {0.504, 9.187}, 0.002);
  expect_roots(fs[8], {0.471, 0.559, 6.777, 6.908}, 0.002);
  EXPECT_EQ(fs[6].roots[1].minimal_period, 4u);
  EXPECT_EQ(fs[6].roots[0].minimal_period, 8u);
  EXPECT_EQ(fs[8].roots[3].minimal_period, 5u);
  for (const auto& f : fs) {
    EXPECT_TRUE(f.rejected.empty());
    for (const auto& r : f.roots) EXPECT_LT(r.verification.residual, 1e-9);
  }
}

TEST(FindPeriodSteps, StableUnderRefinement) {
  FindOptions a, b;
  b.eps = a.eps / 2;
  auto fa = find_period_steps(wp_map(), kWpX0, 7, a);
  auto fb = find_period_steps(wp_map(), kWpX0, 7, b);
  ASSERT_EQ(fa.roots.size(), fb.roots.size());
  for (std::size_t i = 0; i < fa.roots.size(); ++i) {
    EXPECT_LT(fb.roots[i].interval.hi - fb.roots[i].interval.lo, b.eps);
    EXPECT_LE(abs(fa.roots[i].value - fb.roots[i].value), a.eps);
  }
}

TEST(FindPeriodSteps, JacobiTable) {
  auto fs = find_period_steps(jacobi_map(), kJacX0, {3, 4, 5, 6, 7, 8, 9}, {}, 0);
  expect_roots(fs[0], {3.609}, 0.02);
  expect_roots(fs[1], {2.041}, 0.02);
  expect_roots(fs[2], {1.47, 6.86}, 0.02);
  expect_roots(fs[3], {1.17, 3.60}, 0.02);
  expect_roots(fs[4], {0.97, 2.57, 10.85}, 0.02);
  expect_roots(fs[5], {0.83, 2.04, 5.18}, 0.02);
  expect_roots(fs[6], {0.73, 1.70, 3.60, 16.23}, 0.02);
  EXPECT_EQ(fs[3].roots[1].minimal_period, 3u);
}

TEST(VerifyPeriod, ExactAndPerturbed) {
  auto f = find_period_steps(wp_map(), kWpX0, 4);
  ASSERT_EQ(f.roots.size(), 1u);
  const auto& root = f.roots[0];
  auto rep = verify_period(wp_map().scheme(), kWpX0, root.approx, 4, 1e-6, &root.interval, &f.G, true);
  EXPECT_TRUE(rep.float_ok);
  ASSERT_TRUE(rep.exact_ran) << rep.note;
  EXPECT_TRUE(rep.exact_ok);
  EXPECT_EQ(rep.factor, parse_poly("3*dt^4 - 4", rep.factor.vars()));
  EXPECT_NEAR(root.approx, std::pow(4.0 / 3.0, 0.25), 1e-14);
  auto bad = verify_period(wp_map().scheme(), kWpX0, root.approx + 1e-2, 4, 1e-6);
  EXPECT_FALSE(bad.float_ok);
}

TEST(VerifyPeriod, ExactCheckRejectsWrongFactor) {
  auto f = find_period_steps(wp_map(), kWpX0, 5);
  auto t = f.G.vars();
  auto ok = quotient_ring_closure(wp_map().scheme(), kWpX0, parse_poly("3*dt^4 - 4", t), 5);
  ASSERT_TRUE(ok.has_value());
  EXPECT_FALSE(*ok);
  auto good = quotient_ring_closure(wp_map().scheme(), kWpX0, f.G, 5);
  ASSERT_TRUE(good.has_value());
  EXPECT_TRUE(*good);
}

TEST(VerifyPeriod, JacobiFive) {
  FindOptions opt;
  opt.exact_check = true;
  auto f = find_period_steps(jacobi_map(), kJacX0, 5, opt);
  expect_roots(f, {1.47, 6.86}, 0.02);
  for (const auto& r : f.roots) {
    EXPECT_LT(r.verification.residual, 1e-6);
    EXPECT_TRUE(r.verification.exact_ran) << r.verification.note;
    EXPECT_TRUE(r.verification.exact_ok);
  }
}

TEST(Transition, JacobiTable) {
  auto rows = period_transition_table(jacobi_map(), kJacX0, {3, 4, 5, 6, 7, 8, 9}, {}, 0);
  const std::vector<double> want{10.827, 8.164, 7.379, 7.022, 6.827, 6.706, 6.627};
  ASSERT_EQ(rows.size(), want.size());
  const double limit = 4 * util::elliptic_k(0.2);
  EXPECT_NEAR(limit, 6.3475, 5e-4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].product, want[i], 0.02);
    EXPECT_GT(rows[i].product, limit);
    if (i > 0) EXPECT_LT(rows[i].product, rows[i - 1].product);
  }
  EXPECT_NEAR(rows[0].product, 3 * 3.609, 0.003);
}

TEST(Agm, KnownValues) {
  EXPECT_NEAR(util::elliptic_k(0.0), M_PI / 2, 1e-15);
  EXPECT_NEAR(util::elliptic_k(std::sqrt(0.5)), 1.8540746773013719, 1e-14);
  EXPECT_THROW(util::elliptic_k(1.0), UsageError);
}

TEST(Parallel, OrderStable) {
  auto a = util::parallel_map(50, 1, [](std::size_t i) { return i * i; });
  auto b = util::parallel_map(50, 8, [](std::size_t i) { return i * i; });
  EXPECT_EQ(a, b);
  EXPECT_THROW(util::parallel_map(5, 4, [](std::size_t i) -> int { if (i == 3) throw UsageError("x"); return 0; }),
               UsageError);
}
