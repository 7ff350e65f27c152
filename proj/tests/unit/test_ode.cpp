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

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "dickesq/ode.hpp"

namespace dickesq {
namespace {

using Vec = Eigen::VectorXd;

TEST(DormandPrince, ExponentialDecayToTolerance) {
  const std::vector<double> times = TimeGrid{0.0, 5.0, 11}.times();
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  double worst = 0.0;
  integrate_samples<Vec>([](double, const Vec& y, Vec& dy) { dy = -0.7 * y; }, Vec::Ones(1), times, opt,
                         [&](std::size_t, double t, const Vec& y) {
                           worst = std::max(worst, std::abs(y(0) - std::exp(-0.7 * t)));
                         });
  EXPECT_LT(worst, 1e-9);
}

TEST(DormandPrince, ComplexOscillatorConservesNorm) {
  using CVec = Eigen::VectorXcd;
  CVec y0(2);
  y0 << 1.0, 0.0;
  // Two-level Rabi rotation: |c0|^2 = cos^2(t).
  const std::vector<double> times = TimeGrid{0.0, 20.0, 201}.times();
  double worst = 0.0;
  integrate_samples<CVec>(
      [](double, const CVec& y, CVec& dy) {
        dy(0) = std::complex<double>(0.0, -1.0) * y(1);
        dy(1) = std::complex<double>(0.0, -1.0) * y(0);
      },
      y0, times, OdeOptions{}, [&](std::size_t, double t, const CVec& y) {
        worst = std::max(worst, std::abs(std::norm(y(0)) - std::cos(t) * std::cos(t)));
      });
  EXPECT_LT(worst, 1e-7);
}

TEST(DormandPrince, HitsSampleTimesExactly) {
  const std::vector<double> times{0.0, 0.1, 0.3, 0.30000001, 2.0};
  std::vector<double> seen;
  integrate_samples<Vec>([](double, const Vec& y, Vec& dy) { dy = y; }, Vec::Ones(1), times, OdeOptions{},
                         [&](std::size_t, double t, const Vec&) { seen.push_back(t); });
  EXPECT_EQ(seen, times);
}

TEST(DormandPrince, DenseSamplingDoesNotInflateStepCount) {
  auto count = [](int n) {
    return integrate_samples<Vec>([](double, const Vec& y, Vec& dy) { dy = -y; }, Vec::Ones(1),
                                  TimeGrid{0.0, 10.0, n}.times(), OdeOptions{},
                                  [](std::size_t, double, const Vec&) {})
        .accepted;
  };
  // Landing steps are extra; the natural step is preserved between samples.
  EXPECT_LT(count(41), count(2) + 41 + 10);
}

TEST(DormandPrince, FiniteTimeBlowUpReportsStepUnderflow) {
  try {
    integrate_samples<Vec>([](double, const Vec& y, Vec& dy) { dy = y.cwiseProduct(y); }, Vec::Ones(1),
                           std::vector<double>{0.0, 2.0}, OdeOptions{}, [](std::size_t, double, const Vec&) {});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("ODE integration failed at t = "), std::string::npos);
  }
}

TEST(DormandPrince, RejectsBadTolerancesAndBackwardIntegration) {
  OdeOptions bad;
  bad.rtol = 0.0;
  EXPECT_THROW(DormandPrince<Vec>([](double, const Vec&, Vec&) {}, bad), ValidationError);
  DormandPrince<Vec> solver([](double, const Vec& y, Vec& dy) { dy = y; }, OdeOptions{});
  double t = 1.0;
  Vec y = Vec::Ones(1);
  EXPECT_THROW(solver.advance(t, y, 0.5), ValidationError);
}

TEST(TimeGrid, EndpointsAndValidation) {
  const auto t = TimeGrid{1.0, 2.0, 3}.times();
  ASSERT_EQ(t.size(), 3u);
  EXPECT_DOUBLE_EQ(t[1], 1.5);
  EXPECT_DOUBLE_EQ(t[2], 2.0);
  EXPECT_THROW((TimeGrid{1.0, 1.0, 3}.times()), ValidationError);
  EXPECT_THROW((TimeGrid{0.0, 1.0, 1}.times()), ValidationError);
}

}  // namespace
}  // namespace dickesq
