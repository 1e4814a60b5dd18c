#include <gtest/gtest.h>

#include <cmath>

#include "stackopt/electrolyzer.hpp"
#include "stackopt/error.hpp"

using namespace stackopt;

namespace {

ElectrolyzerSpec spec(std::size_t J, double p_nom = 1000.0, double gain = 0.01) {
  ElectrolyzerSpec s;
  s.p_nom = p_nom;
  s.eps_nom = 52.5;
  s.partload_gain = gain;
  s.j_points = J;
  return s;
}

}  // namespace

TEST(BolEnergyDemand, Examples) {
  auto s = spec(37);
  EXPECT_DOUBLE_EQ(bol_energy_demand(s, 1.0), 52.5);
  EXPECT_NEAR(bol_energy_demand(s, 0.5), 49.875, 1e-12);
  EXPECT_NEAR(bol_energy_demand(s, 0.0), 47.25, 1e-12);
  auto flat = spec(37, 1000.0, 0.0);
  for (double pi : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(bol_energy_demand(flat, pi), 52.5);
  EXPECT_THROW(bol_energy_demand(s, 1.01), Error);
  EXPECT_THROW(bol_energy_demand(s, -0.01), Error);
}

TEST(BolEnergyDemand, MonotoneInLoad) {
  auto s = spec(37);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double e = bol_energy_demand(s, i / 100.0);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(SpecValidation, Domains) {
  EXPECT_NO_THROW(spec(2).validate());
  EXPECT_THROW(spec(1).validate(), Error);
  EXPECT_THROW(spec(5, 0.0).validate(), Error);
  EXPECT_THROW(spec(5, 1000.0, 0.1).validate(), Error);
  EXPECT_THROW(spec(5, 1000.0, -0.01).validate(), Error);
}

TEST(BuildEnvelope, ThreePointChords) {
  auto s = spec(3);
  std::vector<double> eps = {47.25, 49.875, 52.5};
  auto env = build_envelope(s, eps);
  // Oracle: direct chord evaluation through the three production points.
  const double m1 = 500.0 / 49.875, m2 = 1000.0 / 52.5;
  ASSERT_EQ(env.segments.size(), 2u);
  EXPECT_NEAR(m1, 10.0251, 1e-4);
  EXPECT_NEAR(m2, 19.0476, 1e-4);
  EXPECT_NEAR(env.segments[0].a, m1 / 500.0, 1e-15);
  EXPECT_NEAR(env.segments[0].a, 0.0200501, 1e-7);
  EXPECT_NEAR(env.segments[1].a, (m2 - m1) / 500.0, 1e-15);
  EXPECT_NEAR(env.segments[1].a, 0.0180451, 1e-7);
  EXPECT_EQ(env.segments[0].b, 0.0);
  EXPECT_NEAR(env.segments[1].b, 1.00251, 1e-5);
}

TEST(BuildEnvelope, TwoPointChordThroughOrigin) {
  auto s = spec(2);
  auto env = build_envelope(s, std::vector<double>{47.25, 52.5});
  ASSERT_EQ(env.segments.size(), 1u);
  EXPECT_NEAR(env.segments[0].a, 1.0 / 52.5, 1e-15);
  EXPECT_NEAR(env.segments[0].a, 0.019048, 1e-6);
  EXPECT_EQ(env.segments[0].b, 0.0);
}

TEST(BuildEnvelope, Errors) {
  auto s = spec(3);
  try {
    build_envelope(s, std::vector<double>{52.5, 49.875, 47.25});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConcave);
  }
  EXPECT_THROW(build_envelope(s, std::vector<double>{52.5, 52.5}), Error);
  EXPECT_THROW(build_envelope(s, std::vector<double>{52.5, 0.0, 52.5}), Error);
}

TEST(BuildEnvelope, FlatCurveHasEqualSlopes) {
  auto s = spec(5, 1000.0, 0.0);
  auto env = build_envelope(s, bol_curve(s));
  for (const auto& seg : env.segments) EXPECT_NEAR(seg.a, 1.0 / 52.5, 1e-15);
}

// The production curve P / eps(P / p_nom) is strictly concave for a positive
// part-load gain, so its chord interpolation sits below it between grid points.
TEST(EnvelopeProperties, TightAtGridPointsAndBelowCurveBetween) {
  for (std::size_t J : {2u, 3u, 5u, 11u, 37u}) {
    auto s = spec(J, 300000.0);
    auto env = build_envelope(s, bol_curve(s));
    for (std::size_t j = 0; j < J; ++j) {
      const double p = env.fractions[j] * s.p_nom;
      const double exact = p / env.eps_per_point[j];
      EXPECT_NEAR(env.evaluate(p), exact, 1e-9 * std::max(1.0, exact)) << "J=" << J << " j=" << j;
    }
    for (std::size_t j = 1; j < env.segments.size(); ++j) EXPECT_LT(env.segments[j].a, env.segments[j - 1].a);
    for (std::size_t j = 0; j + 1 < J; ++j) {
      for (int k = 1; k < 20; ++k) {
        const double pi = env.fractions[j] + (env.fractions[j + 1] - env.fractions[j]) * k / 20.0;
        const double p = pi * s.p_nom;
        EXPECT_LT(env.evaluate(p), p / bol_energy_demand(s, pi)) << "J=" << J << " pi=" << pi;
      }
    }
  }
}

TEST(EnvelopeProperties, MinPowerInvertsEnvelope) {
  auto s = spec(7, 300000.0);
  auto env = build_envelope(s, bol_curve(s));
  for (int i = 0; i <= 50; ++i) {
    const double p = i / 50.0 * s.p_nom;
    EXPECT_NEAR(env.min_power_for(env.evaluate(p)), p, 1e-6);
  }
}

TEST(LowerBound, HalfSpace) {
  auto s = spec(3);
  auto lb = lower_bound_constraint(s, 52.5);
  EXPECT_TRUE(lb.satisfied(525.0, 10.0));
  EXPECT_NEAR(lb.coef_power * 525.0 + lb.coef_mdot * 10.0, 0.0, 1e-12);
  EXPECT_FALSE(lb.satisfied(525.0, 9.0));
  EXPECT_TRUE(lb.satisfied(0.0, 0.0));
  auto literal = lower_bound_constraint(s, 52.5, LowerBoundMode::Literal);
  EXPECT_FALSE(literal.satisfied(0.0, 0.0));
  EXPECT_TRUE(literal.satisfied(0.0, 1000.0 / 52.5));
  auto off = lower_bound_constraint(s, 52.5, LowerBoundMode::Off);
  EXPECT_TRUE(off.satisfied(525.0, 0.0));
}
