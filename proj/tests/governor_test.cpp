#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "pet_erg/config.hpp"
#include "pet_erg/error.hpp"
#include "pet_erg/governor.hpp"

namespace pet_erg {
namespace {

using oracle::kPi;

class GovernorTest : public ::testing::Test {
 protected:
  ScenarioConfig cfg = paper_scenario();
  LoopParams& p = cfg.params;
  const ConstraintSpec& spec = cfg.params.spec;
  const PotentialParams& pot = cfg.params.pot;

  // Test-side copies of the potentials.
  double pa(const Mat3& rg) const {
    return oracle::phi(rg.transpose() * cfg.R_d.matrix());
  }
  double c_of(const Mat3& rg) const { return spec.a_c.dot(rg * spec.a_b); }
  double pr(const Mat3& rg) const {
    const double c = c_of(rg);
    if (c >= pot.zeta) return 0.0;
    return pot.eta * (pot.zeta - c) * (pot.zeta - c) / (c - pot.delta);
  }

  // Rotation sending a_b to the direction at angle `ang` from a_c.
  Rotation at_cone_angle(double ang) const {
    Vec3 perp = spec.a_c.cross(Vec3::UnitX()).normalized();
    const Vec3 target = std::cos(ang) * spec.a_c + std::sin(ang) * perp;
    return Rotation::unchecked(
        Eigen::Quaterniond::FromTwoVectors(spec.a_b, target).toRotationMatrix());
  }
};

TEST_F(GovernorTest, ParameterValidation) {
  EXPECT_THROW(ConstraintSpec(0.0, spec.a_b, spec.a_c, 1.0), ConfigError);
  EXPECT_THROW(ConstraintSpec(1.0, 2.0 * spec.a_b, spec.a_c, 1.0), ConfigError);
  EXPECT_THROW(ConstraintSpec(1.0, spec.a_b, spec.a_c, kPi), ConfigError);
  EXPECT_THROW(PotentialParams(0.5, 0.4, 1.0, 1e-3), ConfigError);
  EXPECT_THROW(PotentialParams(0.1, 0.2, 0.0, 1e-3), ConfigError);
  EXPECT_THROW(PotentialParams(-0.95, -0.9, 1.0, 1e-3).validate(spec), ConfigError);
  EXPECT_THROW(GovernorParams(1.0, 1.0, 0.5, 0.1, 0.5), ConfigError);
  EXPECT_THROW(GovernorParams(1.0, 3.0, 0.5, 2.0, 0.5), ConfigError);
  EXPECT_THROW(GovernorParams(-1.0, 3.0, 0.5, 0.1, 0.5), ConfigError);
}

TEST_F(GovernorTest, DefaultPotentialThresholds) {
  const double ct = std::cos(160.0 * kPi / 180.0);
  EXPECT_NEAR(pot.delta, ct + 0.05, 1e-15);
  EXPECT_NEAR(pot.zeta, ct + 0.10, 1e-15);
}

TEST_F(GovernorTest, GammaGFullMargin) {
  const Rotation rg = at_cone_angle(0.0);
  ASSERT_NEAR(c_of(rg.matrix()), 1.0, 1e-12);
  // acos near 1 resolves the cone angle only to ~1e-8 rad.
  EXPECT_NEAR(gamma_g(rg, spec, p.gains), 5.0 * (1.0 - std::cos(spec.theta_c)), 1e-7);
}

TEST_F(GovernorTest, GammaGZeroAtBoundaryAndOutside) {
  EXPECT_NEAR(gamma_g(at_cone_angle(spec.theta_c), spec, p.gains), 0.0, 1e-12);
  EXPECT_EQ(gamma_g(at_cone_angle(spec.theta_c + 0.05), spec, p.gains), 0.0);
}

TEST_F(GovernorTest, GammaGAtIdentity) {
  // 5 (1 - cos(160 deg - arccos(a_c,z))) with a_c normalized; SciPy value.
  EXPECT_NEAR(gamma_g(Rotation(), spec, p.gains), 0.782526691777469, 1e-12);
}

TEST_F(GovernorTest, GammaGSublevelImpliesPointing) {
  oracle::Rng rng(41);
  const Mat3 J = p.J.matrix();
  for (int trial = 0; trial < 10; ++trial) {
    const Mat3 rg = oracle::rot(rng.ball(1.2));
    const double level = gamma_g(Rotation::unchecked(rg), spec, p.gains);
    if (level <= 0.0) continue;
    const double th_max = std::acos(std::max(-1.0, 1.0 - level / p.gains.k_p));
    int accepted = 0;
    while (accepted < 10000) {
      const Mat3 r = rg * oracle::rot(rng.direction(), rng.uniform(0.0, th_max));
      const Vec3 w = accepted % 2 ? Vec3::Zero() : rng.ball(std::sqrt(2.0 * level));
      if (oracle::lyapunov(r, w, rg, J, p.gains.k_p) > level) continue;
      ++accepted;
      ASSERT_GE(c_of(r), spec.cos_theta_c());
    }
  }
}

TEST_F(GovernorTest, AggregateSelection) {
  const Thresholds t = thresholds(Rotation(), p.gov, spec, p.gains);
  EXPECT_DOUBLE_EQ(t.cap, 5.0 * (2.0 - 0.1));
  EXPECT_DOUBLE_EQ(t.gamma_d, p.gov.gamma_d);
  EXPECT_DOUBLE_EQ(t.value, std::min({t.gamma_d, t.gamma_g, t.cap}));
  EXPECT_DOUBLE_EQ(t.value, t.gamma_d);  // 0.5408 < 0.7825 < 9.5

  GovernorParams g = p.gov;
  g.gamma_d = 0.5;
  EXPECT_DOUBLE_EQ(gamma_aggregate(at_cone_angle(0.0), g, spec, p.gains), 0.5);
  EXPECT_EQ(gamma_aggregate(at_cone_angle(spec.theta_c + 0.1), g, spec, p.gains), 0.0);

  g.gamma_d = std::numeric_limits<double>::infinity();
  const Thresholds big = thresholds(at_cone_angle(0.0), g, spec, p.gains);
  EXPECT_DOUBLE_EQ(big.value, std::min(big.gamma_g, 9.5));
}

TEST_F(GovernorTest, AttractiveGradExamples) {
  EXPECT_EQ(attractive_grad(cfg.R_d, cfg.R_d), Vec3::Zero());
  for (double th : {0.3, 1.5, 2.8}) {
    const Rotation rd = Rotation::unchecked(oracle::rot(Vec3::UnitY(), th));
    EXPECT_LT((attractive_grad(Rotation(), rd) - Vec3(0, -std::sin(th), 0)).norm(), 1e-15);
  }
}

TEST_F(GovernorTest, AttractiveGradFiniteDifference) {
  oracle::Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const Mat3 rg = oracle::rot(rng.ball(2.5));
    const Vec3 xi = rng.direction();
    const Vec3 g = attractive_grad(Rotation::unchecked(rg), cfg.R_d);
    const double fd = oracle::directional_fd([&](const Mat3& m) { return pa(m); }, rg, xi);
    EXPECT_LE(std::abs(fd - g.dot(xi)), 1e-5 * std::max(std::abs(fd), 1e-3)) << i;
  }
}

TEST_F(GovernorTest, RepulsiveProfile) {
  EXPECT_EQ(repulsive_potential(pot.zeta, pot), 0.0);
  EXPECT_EQ(repulsive_potential(0.5, pot), 0.0);
  EXPECT_EQ(repulsive_slope(pot.zeta, pot), 0.0);
  const double mid = 0.5 * (pot.delta + pot.zeta);
  EXPECT_NEAR(repulsive_potential(mid, pot), 0.025, 1e-12);
  const double near = pot.delta + (pot.zeta - pot.delta) * 1e-4;
  EXPECT_GE(repulsive_potential(near, pot), 100.0 * pot.eta);
  const double below = std::nextafter(pot.zeta, -1.0);
  EXPECT_NEAR(repulsive_potential(below, pot), 0.0, 1e-10);
  EXPECT_NEAR(repulsive_slope(below, pot), 0.0, 1e-10);
  EXPECT_NEAR(repulsive_potential(pot.zeta - 1e-6, pot), 0.0, 1e-10);
  EXPECT_NEAR(repulsive_slope(pot.zeta - 1e-6, pot), 0.0, 1e-4);
}

TEST_F(GovernorTest, RepulsiveSlopeMatchesDifference) {
  for (double f : {0.01, 0.2, 0.5, 0.9}) {
    const double c = pot.delta + f * (pot.zeta - pot.delta);
    const double h = 1e-7;
    const double fd = (repulsive_potential(c + h, pot) - repulsive_potential(c - h, pot)) / (2 * h);
    EXPECT_NEAR(repulsive_slope(c, pot), fd, 1e-5 * std::abs(fd) + 1e-9) << f;
  }
}

TEST_F(GovernorTest, RepulsiveGradFiniteDifference) {
  oracle::Rng rng(43);
  int checked = 0;
  while (checked < 20) {
    const double ang = std::acos(pot.delta + rng.uniform(0.05, 0.95) * (pot.zeta - pot.delta));
    const Mat3 rg = at_cone_angle(ang).matrix() *
                    Eigen::AngleAxisd(rng.uniform(-kPi, kPi), spec.a_b).toRotationMatrix();
    const RepulsiveTerm t = repulsive_grad(Rotation::unchecked(rg), spec, pot);
    EXPECT_NEAR(t.value, pr(rg), 1e-12);
    const Vec3 xi = rng.direction();
    const double fd = oracle::directional_fd([&](const Mat3& m) { return pr(m); }, rg, xi, 1e-6);
    if (std::abs(fd) < 1e-3) continue;
    EXPECT_LE(std::abs(fd - t.grad.dot(xi)), 1e-5 * std::abs(fd)) << checked;
    ++checked;
  }
}

TEST_F(GovernorTest, RepulsiveInactiveAndEscape) {
  const RepulsiveTerm t = repulsive_grad(at_cone_angle(0.5), spec, pot);
  EXPECT_EQ(t.value, 0.0);
  EXPECT_EQ(t.grad, Vec3::Zero());
  EXPECT_THROW(repulsive_grad(at_cone_angle(std::acos(pot.delta) + 1e-3), spec, pot),
               BoundaryEscape);
}

TEST_F(GovernorTest, NavigationFieldAtGoal) {
  ASSERT_GT(c_of(cfg.R_d.matrix()), pot.zeta);
  EXPECT_EQ(navigation_field(cfg.R_d, cfg.R_d, spec, pot), Vec3::Zero());
}

TEST_F(GovernorTest, NavigationFieldDescendsAttraction) {
  oracle::Rng rng(44);
  for (int i = 0; i < 50; ++i) {
    const Rotation rg = cfg.R_d * exp_map(rng.ball(1.0));
    if (c_of(rg.matrix()) < pot.zeta) continue;
    const Vec3 rho = navigation_field(rg, cfg.R_d, spec, pot);
    const Mat3 e = rg.matrix().transpose() * cfg.R_d.matrix();
    EXPECT_LT((rho - Vec3(0.5 * (e(2, 1) - e(1, 2)), 0.5 * (e(0, 2) - e(2, 0)),
                          0.5 * (e(1, 0) - e(0, 1))))
                  .norm(),
              1e-15);
    EXPECT_LT(pa(rg.matrix() * oracle::rot(1e-3 * rho)), pa(rg.matrix()));
  }
}

TEST_F(GovernorTest, NavigationFieldRepelsFromBoundary) {
  for (double f : {0.02, 0.1, 0.3}) {
    const double ang = std::acos(pot.delta + f * (pot.zeta - pot.delta));
    const Rotation rg = at_cone_angle(ang);
    const Vec3 rho = navigation_field(rg, cfg.R_d, spec, pot);
    const Vec3 grad_c = spec.a_b.cross(rg.matrix().transpose() * spec.a_c);
    EXPECT_GT(rho.dot(grad_c), 0.0) << f;
    EXPECT_GT(c_of(rg.matrix() * oracle::rot(1e-4 * rho)), c_of(rg.matrix()));
  }
}

TEST_F(GovernorTest, EventCheckExamples) {
  EXPECT_TRUE(event_check(BodyState{}, Rotation(), p));
  const BodyState s0{Rotation(), Vec3(0.2, 0.3, 0.4)};
  EXPECT_FALSE(event_check(s0, Rotation(), p));

  // V = 2^-5 exactly, so c_Gamma = 32 Gamma makes c_Gamma V == Gamma exact.
  const BodyState s{Rotation(), Vec3(0.25, 0.0, 0.0)};
  const double v = lyapunov_v(s, Rotation(), p.J, p.gains);
  ASSERT_EQ(v, 0.03125);
  const double g = gamma_aggregate(Rotation(), p.gov, spec, p.gains);
  const double cg = 32.0 * g;
  ASSERT_EQ(cg * v, g);
  p.gov.c_gamma = cg;
  EXPECT_TRUE(event_check(s, Rotation(), p));
  p.gov.c_gamma = std::nextafter(cg, 1e9);
  EXPECT_FALSE(event_check(s, Rotation(), p));
}

TEST_F(GovernorTest, ReferenceRhsHeldAndSaturated) {
  const BodyState s{Rotation(), Vec3(0.01, 0.0, 0.0)};
  EXPECT_EQ(reference_rhs(s, Rotation(), false, cfg.R_d, p), Vec3::Zero());
  const BodyState fast{Rotation(), Vec3(1.5, 0.0, 0.0)};  // V > Gamma
  EXPECT_EQ(reference_rhs(fast, Rotation(), true, cfg.R_d, p), Vec3::Zero());
}

TEST_F(GovernorTest, ReferenceRhsVanishesAtGammaEqualsV) {
  const double g = gamma_aggregate(Rotation(), p.gov, spec, p.gains);
  const BodyState s{Rotation(), Vec3(std::sqrt(2.0 * g), 0.0, 0.0)};
  const double v = lyapunov_v(s, Rotation(), p.J, p.gains);
  ASSERT_NEAR(v, g, 1e-15);
  EXPECT_LE(reference_rhs(s, Rotation(), true, cfg.R_d, p).norm(),
            p.gov.kappa * std::max(g - v, 0.0) + 1e-18);
}

TEST_F(GovernorTest, ReferenceRhsFloorBranch) {
  const Rotation rg = cfg.R_d * exp_map(Vec3(0, 5e-4, 0));
  const Vec3 rho = navigation_field(rg, cfg.R_d, spec, pot);
  ASSERT_LT(rho.norm(), pot.eps);
  const BodyState s{rg, Vec3::Zero()};
  const double g = gamma_aggregate(rg, p.gov, spec, p.gains);
  const Vec3 ref = reference_rhs(s, rg, true, cfg.R_d, p);
  EXPECT_NEAR(ref.norm(), p.gov.kappa * g * rho.norm() / pot.eps, 1e-12);
  EXPECT_LT(ref.norm(), p.gov.kappa * g);
}

TEST_F(GovernorTest, ReferenceRhsSpeedBound) {
  oracle::Rng rng(45);
  for (int i = 0; i < 500; ++i) {
    const Rotation rg = exp_map(rng.ball(0.8));
    const BodyState s{rg * exp_map(rng.ball(0.5)), rng.ball(1.0)};
    const double v = lyapunov_v(s, rg, p.J, p.gains);
    const double g = gamma_aggregate(rg, p.gov, spec, p.gains);
    const double n = reference_rhs(s, rg, true, cfg.R_d, p).norm();
    if (v >= g) {
      EXPECT_EQ(n, 0.0);
    } else {
      EXPECT_LE(n, p.gov.kappa * (g - v) * (1.0 + 1e-12));
    }
  }
}

TEST_F(GovernorTest, SamplingGrid) {
  EXPECT_EQ(steps_per_sample(0.5, 1e-3), 500);
  EXPECT_EQ(steps_per_sample(0.5, 5e-4), 1000);
  EXPECT_THROW(steps_per_sample(0.5, 3e-4), ConfigError);
  EXPECT_TRUE(is_sampling_instant(0.0, 1e-3, 0.5));
  EXPECT_TRUE(is_sampling_instant(1500 * 1e-3, 1e-3, 0.5));
  EXPECT_FALSE(is_sampling_instant(1501 * 1e-3, 1e-3, 0.5));
}

TEST_F(GovernorTest, GovernorStepHoldsBitExactly) {
  const BodyState s{Rotation(), Vec3(0.2, 0.3, 0.4)};
  GovernorState g{exp_map(Vec3(0.1, -0.2, 0.05)), false, 0.0};
  const Rotation start = g.R_g;
  for (int k = 0; k < 500; ++k) {
    const double t = k * 1e-3;
    g = governor_step(g, s, cfg.R_d, t, 1e-3, p);
    ASSERT_FALSE(g.indicator);
    ASSERT_EQ(g.R_g, start);
  }
}

TEST_F(GovernorTest, GovernorStepKeepsIndicatorBetweenSamples) {
  const BodyState rest{Rotation(), Vec3::Zero()};
  GovernorState g{Rotation(), false, 0.0};
  g = governor_step(g, rest, cfg.R_d, 0.25, 1e-3, p);  // not a sample
  EXPECT_FALSE(g.indicator);
  EXPECT_EQ(g.R_g, Rotation());
  g = governor_step(g, rest, cfg.R_d, 0.5, 1e-3, p);  // sample
  EXPECT_TRUE(g.indicator);
  EXPECT_DOUBLE_EQ(g.last_sample_t, 0.5);
}

TEST_F(GovernorTest, GovernorStepStationaryAtGoal) {
  const BodyState s{cfg.R_d, Vec3::Zero()};
  GovernorState g{cfg.R_d, true, 0.0};
  for (int k = 0; k < 100; ++k) g = governor_step(g, s, cfg.R_d, k * 1e-3, 1e-3, p);
  EXPECT_LT((g.R_g.matrix() - cfg.R_d.matrix()).norm(), 1e-14);
}

TEST_F(GovernorTest, TriggeredIntervalDecreasesPotential) {
  const Rotation rg0 = cfg.R_d * exp_map(Vec3(0.6, 0.0, 0.0));
  ASSERT_GT(c_of(rg0.matrix()), pot.zeta);
  const BodyState s{rg0, Vec3::Zero()};
  GovernorState g{rg0, false, 0.0};
  double prev = pa(rg0.matrix());
  const double start = prev;
  for (int k = 0; k < 500; ++k) {
    g = governor_step(g, s, cfg.R_d, k * 1e-3, 1e-3, p);
    ASSERT_TRUE(g.indicator);
    const double now = pa(g.R_g.matrix()) + pr(g.R_g.matrix());
    ASSERT_LT(now, prev) << k;
    prev = now;
  }
  EXPECT_LT(prev, start);
}

}  // namespace
}  // namespace pet_erg
