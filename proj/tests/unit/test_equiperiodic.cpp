#include <gtest/gtest.h>

#include <algorithm>

#include "cremona/algebra/text.hpp"
#include "cremona/equiperiodic/curve.hpp"
#include "cremona/equiperiodic/equiperiodic.hpp"
#include "cremona/model/builtins.hpp"
#include "cremona/model/dsl.hpp"

using namespace cremona;
using namespace cremona::equiperiodic;
using algebra::parse_poly;

namespace {

const CremonaMap& wp_map() {
  static const CremonaMap m = scheme::build_map(scheme::polarize(model::builtin_system("wp")));
  return m;
}

MultiPoly canonical(const MultiPoly& p) { return algebra::with_positive_lead(algebra::primitive_part(p)); }

const char* kF5 =
    "27*dt^10*x - 432*dt^8*x*y^2 + 432*dt^8*x^2 + 1728*dt^6*x^3 + 27*dt^8 - 432*dt^6*y^2 - 936*dt^6*x"
    " + 168*dt^4 + 240*dt^2*x - 80";

}  // namespace

TEST(FullySymbolic, FirstStageIsTheMap) {
  auto comps = iterate_fully_symbolic(wp_map(), 1);
  ASSERT_EQ(comps.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(comps[i], wp_map().components()[i]);
}

TEST(FullySymbolic, SecondStageIsComposition) {
  auto comps = iterate_fully_symbolic(wp_map(), 2);
  auto twice = scheme::compose(wp_map().components(), wp_map().components());
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(comps[i], twice[i]);
}

TEST(FullySymbolic, AgreesWithRepeatedExactSteps) {
  auto stages = iterate_stages(wp_map(), 4);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> x{Rational(static_cast<long>(rng() % 9) - 4, 1 + rng() % 5),
                            Rational(static_cast<long>(rng() % 9) - 4, 1 + rng() % 5)};
    for (auto& v : x) v.canonicalize();
    Rational dt(1 + static_cast<long>(rng() % 7), 1 + rng() % 11);
    dt.canonicalize();
    std::vector<Rational> cur = x;
    for (const auto& s : stages) {
      try {
        cur = scheme::eval_map_exact(wp_map(), cur, dt);
      } catch (const ExceptionalLocusError&) {
        break;
      }
      std::vector<Rational> pt{x[0], x[1], dt};
      for (std::size_t i = 0; i < 2; ++i)
        EXPECT_EQ(s.numerators[i].evaluate(pt) / s.denominator.evaluate(pt), cur[i]);
    }
  }
}

TEST(FullySymbolic, TermBudget) {
  IterateOptions opt;
  opt.term_budget = 100;
  try {
    iterate_stages(wp_map(), 6, opt);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("stage 4"), std::string::npos) << e.what();
  }
}

TEST(Equiperiodic, F5MatchesPrintedForm) {
  auto e = equiperiodic_polynomial(wp_map(), 5);
  EXPECT_EQ(e.F, canonical(parse_poly(kF5, e.F.vars())));
  EXPECT_EQ(e.state_degree, 3);
  EXPECT_EQ(e.dt_degree, 10);
}

TEST(Equiperiodic, SmallOrders) {
  auto sets = equiperiodic_range(wp_map(), {1, 2, 3, 4});
  EXPECT_TRUE(sets[1].empty());
  EXPECT_TRUE(sets[2].empty());
  EXPECT_EQ(sets[3].F, canonical(parse_poly("3*dt^4 - 4", sets[3].F.vars())));
  EXPECT_EQ(sets[3].state_degree, 0);
  // fixed points of C are the equilibria of the flow; wp has none with y = 0 and 6x^2 = 1/2 rational
  EXPECT_TRUE(sets[0].empty());
}

TEST(Equiperiodic, DividesEveryNumerator) {
  auto stages = iterate_stages(wp_map(), 6);
  for (std::size_t n : {5u, 6u}) {
    auto f = equiperiodic_from_stage(stages[n - 1]);
    auto comps = stages[n - 1].components();
    for (std::size_t i = 0; i < 2; ++i) {
      auto diff = comps[i] - RatFunc(MultiPoly::variable(f.vars(), i));
      EXPECT_TRUE(algebra::divides(f, diff.numer())) << n;
    }
  }
}

TEST(Equiperiodic, SymbolicDegreesMatchFixedStep) {
  std::vector<std::size_t> ns{4, 5, 6, 7};
  auto sym = degree_table(wp_map(), ns);
  for (const auto& tau : default_probe_steps()) {
    IterateOptions opt;
    opt.fixed_dt = tau;
    auto fast = degree_table(wp_map(), ns, opt);
    for (std::size_t i = 0; i < ns.size(); ++i) EXPECT_EQ(fast[i].degree, sym[i].degree) << ns[i];
  }
}

TEST(Equiperiodic, DegreeTableFastPath) {
  IterateOptions opt;
  opt.fixed_dt = default_probe_steps().front();
  auto rows = degree_table(wp_map(), {4, 5, 6, 7, 8, 9, 10}, opt, true, 0);
  const std::vector<std::int64_t> want{0, 3, 3, 6, 6, 9, 12};
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].degree, want[i]) << rows[i].n;
  // 10 = 2 * 5: the order-5 curve is a component of the order-10 set
  EXPECT_EQ(*rows[6].reduced_degree, 9);
}

TEST(Equiperiodic, VariableOrderDoesNotMatter) {
  auto swapped = model::parse_system("var y, x\nparam a = 1/2\ny' = 6*x^2 - a\nx' = y\n");
  auto map2 = scheme::build_map(scheme::polarize(swapped));
  auto e1 = equiperiodic_polynomial(wp_map(), 5);
  auto e2 = equiperiodic_polynomial(map2, 5);
  EXPECT_EQ(canonical(e2.F.rebase(e1.F.vars())), e1.F);
}

TEST(Curve, F5SamplesCloseAndTransport) {
  auto e = equiperiodic_polynomial(wp_map(), 5);
  auto sample = sample_curve(e.F, Rational(1), {}, 400);
  ASSERT_FALSE(sample.empty_curve);
  ASSERT_GT(sample.points.size(), 50u);
  const auto& s = wp_map().scheme();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < sample.points.size(); i += sample.points.size() / 50) {
    auto rep = membership_transport(s, e.F, Rational(1), sample.points[i], 5);
    if (rep.met_pole) continue;
    EXPECT_LT(rep.max_residual, 1e-6);
    EXPECT_LT(rep.closure, 1e-6) << sample.points[i][0] << "," << sample.points[i][1];
    ++checked;
  }
  EXPECT_GE(checked, 45u);
}

TEST(Curve, SymmetricInY) {
  auto e = equiperiodic_polynomial(wp_map(), 5);
  auto sample = sample_curve(e.F, Rational(1), {}, 100);
  auto pts = sample.points;
  for (const auto& p : pts) {
    bool found = std::any_of(pts.begin(), pts.end(), [&](const auto& q) {
      return std::fabs(q[0] - p[0]) < 1e-9 && std::fabs(q[1] + p[1]) < 1e-9;
    });
    EXPECT_TRUE(found) << p[0] << "," << p[1];
  }
}

TEST(Curve, StateFreeIsEmptyCurve) {
  auto e = equiperiodic_polynomial(wp_map(), 4);
  auto sample = sample_curve(e.F, Rational(1), {});
  EXPECT_TRUE(sample.empty_curve);
  EXPECT_TRUE(sample.points.empty());
}

TEST(Curve, ThreadCountDoesNotChangeOutput) {
  auto e = equiperiodic_polynomial(wp_map(), 5);
  auto a = sample_curve(e.F, Rational(1), {}, 120, 1e-12, 1);
  auto b = sample_curve(e.F, Rational(1), {}, 120, 1e-12, 4);
  EXPECT_EQ(a.points, b.points);
}
