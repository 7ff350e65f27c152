// Copyright 2026 The dickesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>

#include "dickesq/meanfield.hpp"

namespace dickesq {
namespace {

TEST(BosonicParams, DerivedScales) {
  const BosonicParams bp(1.0, 0.5, 0.25, 5.0);
  EXPECT_DOUBLE_EQ(bp.sqrt_photon_number(), 20.0);
  EXPECT_DOUBLE_EQ(bp.photon_number(), 400.0);
  EXPECT_DOUBLE_EQ(bp.chi_n(), 80.0);
  EXPECT_DOUBLE_EQ(bp.coupling_ratio_gamma(), 8.0);
  EXPECT_DOUBLE_EQ(bp.coupling_ratio_kappa(), 4.0);
  EXPECT_DOUBLE_EQ(BosonicParams::from_photon_number(1.0, 0.5, 0.25, 400.0).drive_amplitude(), 5.0);
  EXPECT_THROW(BosonicParams(-1.0, 1.0, 1.0, 1.0), ValidationError);
  EXPECT_THROW(BosonicParams(1.0, 0.0, 1.0, 1.0).sqrt_photon_number(), ValidationError);
}

TEST(Bosonize, CollectiveCouplingAndValidityWarning) {
  const auto p = SystemParams::from_angle(1000, 1.0, std::numbers::pi / 6, 0.1, 2.0);
  const BosonizationResult r = bosonize(p, DissipationParams(0.1, 0.2), 0.3, 0.0, 150.0);
  EXPECT_NEAR(r.params.coupling(), 1000 * 0.5e-3, 1e-15);
  EXPECT_NEAR(r.anticrossing_ratio, std::sqrt(999.0 / 1000.0), 1e-12);
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_TRUE(bosonize(p, DissipationParams(0.1, 0.2), 0.3, 0.0, 10.0).warnings.empty());
}

TEST(MomentEquations, FreeEvolutionWithoutCoupling) {
  // G = 0: <a> relaxes to -2iA/kappa and spin moments decay.
  const BosonicParams bp(0.0, 0.4, 0.3, 0.2);
  MeanFieldState s0;
  s0.b = cplx(0.5, 0.0);
  s0.n_b = 2.0;
  const MeanFieldTrajectory tr = integrate_moments(bp, s0, TimeGrid{0.0, 5.0, 6});
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    const cplx a_exact = cplx(0.0, -2.0 * 0.2 / 0.4) * (1.0 - std::exp(-0.2 * t));
    EXPECT_NEAR(std::abs(tr.states[i].a - a_exact), 0.0, 1e-9);
    EXPECT_NEAR(tr.states[i].n_b, 2.0 * std::exp(-0.3 * t), 1e-9);
    EXPECT_NEAR(tr.states[i].b.real(), 0.5 * std::exp(-0.15 * t), 1e-9);
  }
}

TEST(Xi2Ode, ConstantFieldReproducesClosedForm) {
  const BosonicParams bp(1.0, 1.0, 1.0, 5.0);
  const double sq = bp.sqrt_photon_number();
  const std::vector<double> times = TimeGrid{0.0, 1.0, 101}.times();
  const Xi2Trajectory x = xi2_ode(bp, [sq](double) { return cplx(0.0, -sq); }, times);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(x.xi2[i], analytic_xi2(bp, times[i]), 1e-9);
  EXPECT_LT(x.max_imag, 1e-12);
  EXPECT_TRUE(x.warnings.empty());
  const Xi2Trajectory bad = xi2_ode(bp, [sq](double) { return cplx(sq, 0.0); }, times);
  EXPECT_FALSE(bad.warnings.empty());
}

TEST(AnalyticXi2, FloorAndLimits) {
  const BosonicParams bp(1.0, 1.0, 1.0, 50.0);
  EXPECT_NEAR(analytic_xi2_floor(bp), 1.0 / 401.0, 1e-15);
  EXPECT_DOUBLE_EQ(analytic_xi2(bp, 0.0), 1.0);
  EXPECT_NEAR(analytic_xi2(bp, 1.0), 1.0 / 401.0, 1e-15);
}

TEST(Protocol, TracksAnalyticCurveInValidityWindow) {
  const BosonicParams bp(1.0, 1.0, 1.0, 50.0);
  ProtocolOptions opt;
  opt.duration_chi = 3.0;
  opt.n_samples = 601;
  const ProtocolResult r = run_two_step_protocol(bp, opt);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    if (r.xi2_analytic[i] < 2.0 * r.floor) break;
    EXPECT_NEAR(r.xi2[i] / r.xi2_analytic[i], 1.0, 0.05) << "t chiN = " << r.scaled_time[i];
    EXPECT_NEAR(r.xi2_ode[i] / r.xi2_analytic[i], 1.0, 0.05);
  }
  EXPECT_TRUE(r.chi_dominates_kappa);
  EXPECT_LT(r.max_physicality_violation, 1e-6);
  EXPECT_DOUBLE_EQ(r.scaled_time.back(), 3.0);
}

TEST(Protocol, FrozenFieldLimitMatchesAnalyticCurve) {
  const BosonicParams bp(1.0, 1e-6, 1.0, 0.5 * 1e-6 * 1000.0);
  const ProtocolResult r = run_two_step_protocol(bp);
  for (std::size_t i = 0; i < r.times.size() && r.xi2_analytic[i] >= 2.0 * r.floor; ++i) {
    EXPECT_NEAR(r.xi2_ode[i], r.xi2_analytic[i], 0.01 * r.xi2_analytic[i]) << "t=" << r.times[i];
  }
}

TEST(Protocol, MinimumRespectsFloorAndMomentsStayPhysical) {
  for (double two_a : {1.0, 10.0, 100.0}) {
    for (double rates : {0.01, 0.05}) {
      const BosonicParams bp(1.0, rates, rates, 0.5 * two_a);
      ASSERT_GE(bp.chi_n(), 10.0 * rates);
      const ProtocolResult r = run_two_step_protocol(bp);
      EXPECT_GE(r.min_xi2, 0.95 * r.floor) << "2A=" << two_a;
      EXPECT_LE(r.max_physicality_violation, 1e-6);
      for (const auto& st : r.states) EXPECT_TRUE(st.physical());
    }
  }
}

TEST(Stationary, SqueezingBoundedBetweenHalfAndOne) {
  for (double gg : {0.1, 1.0, 5.0}) {
    for (double ak : {0.0, 0.01, 1.0, 50.0, 1e4}) {
      const double gamma = 0.2, kappa = 0.3;
      const BosonicParams bp(0.5 * gg * gamma, kappa, gamma, 0.5 * ak * kappa);
      const StationaryState s = stationary_state(bp);
      EXPECT_GT(s.xi2, 0.5);
      EXPECT_LE(s.xi2, 1.0);
    }
  }
}

TEST(Stationary, KnownValuesAndFixedPointResidual) {
  // Reference values from an independent root solve of the steady-state equations.
  const struct {
    double a_kappa, x, n_b, xi2;
  } table[] = {{0.5, 0.0894816, 0.07347, 0.73642},
               {2.0, 0.1902944, 0.68875, 0.56780},
               {10.0, 0.2375235, 4.6376, 0.51280},
               {100.0, 0.2487500, 49.626, 0.50125}};
  for (const auto& row : table) {
    const BosonicParams bp(1.0, 1.0, 1.0, 0.5 * row.a_kappa);
    const StationaryState s = stationary_state(bp);
    EXPECT_NEAR(std::abs(s.a), row.x, 1e-6);
    EXPECT_NEAR(s.n_b / row.n_b, 1.0, 1e-4);
    EXPECT_NEAR(s.xi2, row.xi2, 1e-5);
    EXPECT_TRUE(s.stable);
    Eigen::VectorXd dy;
    detail::moment_rhs(bp, detail::pack({s.a, 0.0, s.b2, s.n_b}), dy);
    EXPECT_LT(dy.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Stationary, FloorApproachesOneHalfMonotonically) {
  double prev = 1.0;
  for (double ak : {0.1, 1.0, 10.0, 100.0, 1e3, 1e4}) {
    const double xi = stationary_state(BosonicParams(1.0, 1.0, 1.0, 0.5 * ak)).xi2;
    EXPECT_LT(xi, prev);
    EXPECT_GT(xi, 0.5);
    prev = xi;
  }
  EXPECT_NEAR(prev, 0.5, 1e-3);
  EXPECT_THROW(stationary_state(BosonicParams(1.0, 0.0, 1.0, 1.0)), ValidationError);
}

TEST(Stationary, MatchesLongTimeRelaxation) {
  const BosonicParams bp(1.0, 1.0, 1.0, 1.0);
  const StationaryState s = stationary_state(bp);
  const MeanFieldTrajectory tr = integrate_moments(bp, MeanFieldState{}, std::vector<double>{0.0, 400.0});
  EXPECT_NEAR(tr.states.back().xi2(), s.xi2, 1e-6);
  EXPECT_NEAR(tr.states.back().n_b, s.n_b, 1e-6);
}

TEST(Scaling, PresetArithmetic) {
  const auto p = SystemParams::from_angle(1000000000, 1.0, std::numbers::pi / 6, 1e-4, 2.0);
  const double g_coll = p.n_atoms() * std::abs(effective_coupling(p));
  EXPECT_NEAR(g_coll, 5e-4, 1e-16);
  const BosonicParams bp = BosonicParams::from_photon_number(g_coll, 1e-5, 1e-5, 1e12);
  const ScalingComparison c = compare_protocol_scaling(bp, p);
  EXPECT_NEAR(c.chi_n, 2000.0, 1e-9);
  EXPECT_NEAR(c.floor_estimate, 1e-8, 1e-20);
  EXPECT_NEAR(c.reference_floor, std::sqrt(1e-10 / 1e9) / 1e-4, 1e-18);
  EXPECT_NEAR(c.ratio, std::sqrt(1e-5 / (1e-5 * 1e9 * 1e12)) * 1e8, 1e-15);
  EXPECT_NEAR(c.floor_exact, 1e-5 / (2000.0 + 1e-5), 1e-20);
}

// Without coupling the moment equations are exact.
TEST(BosonicMaster, UncoupledModesMatchMomentsExactly) {
  const BosonicParams bp(0.0, 0.5, 0.5, 0.2);
  const std::vector<double> times = TimeGrid{0.0, 4.0, 9}.times();
  const BosonicMasterResult me = simulate_bosonic_master_equation(bp, TwoModeBasis{14, 2}, times, tight_ode_options());
  const MeanFieldTrajectory mf = integrate_moments(bp, MeanFieldState{}, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(std::abs(me.a[i] - mf.states[i].a), 0.0, 1e-7);
    EXPECT_NEAR(me.n_b[i], 0.0, 1e-12);
  }
  EXPECT_LT(me.max_trace_defect, 1e-8);
}

// Factorization error stays at the few-percent level for weak drive.
TEST(BosonicMaster, WeakDriveAgreesWithMomentsAtShortTimes) {
  const BosonicParams bp(0.3, 0.5, 0.5, 0.2);
  const std::vector<double> times = TimeGrid{0.0, 4.0, 9}.times();
  const BosonicMasterResult me = simulate_bosonic_master_equation(bp, TwoModeBasis{5, 8}, times);
  const MeanFieldTrajectory mf = integrate_moments(bp, MeanFieldState{}, times);
  double peak = 0.0;
  for (double v : me.n_b) peak = std::max(peak, v);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(std::abs(me.a[i] - mf.states[i].a), 0.0, 5e-3);
    EXPECT_NEAR(me.n_b[i], mf.states[i].n_b, 0.05 * peak);
  }
  EXPECT_LT(me.max_trace_defect, 1e-8);
}

}  // namespace
}  // namespace dickesq
