#include <gtest/gtest.h>

#include "cremona/model/builtins.hpp"
#include "cremona/model/invariants.hpp"

using namespace cremona;
using namespace cremona::model;
using algebra::parse_poly;

TEST(ParseSystem, WpOscillator) {
  auto sys = parse_system("var x, y\nparam a = 1/2\nx' = y\ny' = 6*x^2 - a");
  EXPECT_EQ(sys.dimension(), 2u);
  EXPECT_EQ(sys.rhs_poly(1), parse_poly("6*x^2 - 1/2", sys.state_table()));
  EXPECT_EQ(sys.rhs_poly(0), parse_poly("y", sys.state_table()));
}

TEST(ParseSystem, CubicRejected) { EXPECT_THROW(parse_system("var x\nx' = x^3"), DegreeError); }

TEST(ParseSystem, Jacobi) {
  auto sys = parse_system("var p,q,r\nparam k=1/5\np' = q*r\nq' = -p*r\nr' = -k^2*p*q");
  EXPECT_EQ(sys.dimension(), 3u);
  EXPECT_TRUE(sys.has_cross_terms());
  EXPECT_EQ(sys.component(0).q[1][2], Rational(1, 2));
  EXPECT_EQ(sys.rhs_poly(2), parse_poly("-1/25*p*q", sys.state_table()));
}

TEST(ParseSystem, Errors) {
  EXPECT_THROW(parse_system("var x\nx' = x + b"), NameError);
  EXPECT_THROW(parse_system("var x\ny' = x"), NameError);
  try {
    parse_system("var x\n# comment\nx' = (x + 1");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_system("var x, y\nx' = y"), ParseError);
  EXPECT_THROW(parse_system("var x\nparam a = 0.5\nx' = a"), ParseError);
  EXPECT_THROW(parse_system("var x\nx' = x\nx' = 1"), ParseError);
}

TEST(ParseSystem, RoundTrip) {
  for (const char* name : {"riccati", "wp", "jacobi"}) {
    auto sys = builtin_system(name);
    auto again = parse_system(print_system(sys));
    EXPECT_EQ(again, sys) << print_system(sys);
    EXPECT_EQ(print_system(again), print_system(sys));
  }
  auto user = parse_system("var u, v\nparam s = -3/7\nu' = s*u*v + 1/3*v^2 - u\nv' = 2 + u*u");
  EXPECT_EQ(parse_system(print_system(user)), user);
}

TEST(Builtins, MatchDocumentedSources) {
  EXPECT_EQ(builtin_system("riccati"), parse_system("var x\nparam a = 0\nparam b = 0\nparam c = 1\nx' = x^2"));
  EXPECT_EQ(builtin_system("wp", {{"a", Rational(1, 2)}}),
            parse_system("var x, y\nparam a = 1/2\nx' = y\ny' = 6*x^2 - a"));
  EXPECT_EQ(builtin_system("jacobi", {{"k", Rational(1, 5)}}),
            parse_system("var p,q,r\nparam k=1/5\np' = q*r\nq' = -p*r\nr' = -k^2*p*q"));
  EXPECT_THROW(builtin_system("lorenz"), UsageError);
  EXPECT_THROW(builtin_system("wp", {{"k", Rational(1)}}), UsageError);
}

TEST(RhsEval, Examples) {
  auto wp = builtin_system("wp");
  EXPECT_EQ(rhs_eval(wp, std::vector<Rational>{1, 2}), (std::vector<Rational>{2, Rational(11, 2)}));
  auto jac = builtin_system("jacobi");
  EXPECT_EQ(rhs_eval(jac, std::vector<Rational>{0, 1, 1}), (std::vector<Rational>{1, 0, 0}));
  auto ric = builtin_system("riccati");
  EXPECT_EQ(rhs_eval(ric, std::vector<double>{3.0}), (std::vector<double>{9.0}));
}

TEST(Invariants, LieDerivativeVanishes) {
  auto wp = builtin_system("wp", {{"a", Rational(3, 7)}});
  auto inv = known_invariants(wp);
  ASSERT_EQ(inv.size(), 1u);
  EXPECT_TRUE(lie_derivative(wp, inv[0].expr).is_zero());
  // the printed -4x^3 energy is not conserved
  EXPECT_THROW(make_invariant(wp, "bad", "y^2/2 - 4*x^3 + a*x"), UsageError);
  auto jac = builtin_system("jacobi");
  auto ji = known_invariants(jac);
  ASSERT_EQ(ji.size(), 2u);
  for (const auto& i : ji) EXPECT_TRUE(lie_derivative(jac, i.expr).is_zero());
  EXPECT_TRUE(known_invariants(builtin_system("riccati")).empty());
  EXPECT_TRUE(known_invariants(parse_system("var x\nx' = x")).empty());
}
