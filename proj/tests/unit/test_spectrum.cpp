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

#include <Eigen/Eigenvalues>
#include <numbers>
#include <random>
#include <sstream>

#include "dickesq/spectrum.hpp"

namespace dickesq {
namespace {

// Two flat levels plus a 2x2 avoided crossing centred at x0 with half-gap c.
HamiltonianFamily toy_family(double x0, double c) {
  const BasisSpec b(1, 1);
  return [=](double x) {
    std::vector<Triplet> t{{0, 0, 0.0}, {1, 1, 1.0}, {2, 2, 2.0 + (x - x0)}, {3, 3, 2.0 - (x - x0)}, {2, 3, c}, {3, 2, c}};
    SparseMatrix m(4, 4);
    m.setFromTriplets(t.begin(), t.end());
    return OperatorMatrix{b, m, true};
  };
}

TEST(Eigenspectrum, DenseMatchesReferenceSolver) {
  const auto p = SystemParams::from_angle(6, 1.0, std::numbers::pi / 6, 0.2, 2.0);
  const BasisSpec b(6, 6);
  const OperatorMatrix h = build_full_hamiltonian(p, b);
  const EigenPairs ep = eigenspectrum(h, 10, EigenMethod::dense);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<DenseMatrix>(h.dense()).eigenvalues();
  EXPECT_LT((ep.values - ref.head(10)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_FALSE(ep.lanczos);
}

TEST(Eigenspectrum, LanczosMatchesDense) {
  const auto p = SystemParams::from_angle(20, 1.0, std::numbers::pi / 6, 0.1, 1.95);
  const BasisSpec b(20, 12);
  const OperatorMatrix h = build_full_hamiltonian(p, b);
  const EigenPairs dense = eigenspectrum(h, 6, EigenMethod::dense);
  const EigenPairs lanczos = eigenspectrum(h, 6, EigenMethod::lanczos);
  EXPECT_TRUE(lanczos.lanczos);
  EXPECT_LT((dense.values - lanczos.values).cwiseAbs().maxCoeff(), 1e-9 * dense.operator_norm);
  EXPECT_LE(lanczos.max_residual, 1e-9 * lanczos.operator_norm);
}

TEST(Eigenspectrum, ResolvesNearDegenerateLevels) {
  const BasisSpec b(1, 1);
  std::vector<Triplet> t{{0, 0, 0.0}, {1, 1, 1e-9}, {2, 2, 5.0}, {3, 3, 5.0 + 1e-9}};
  SparseMatrix m(4, 4);
  m.setFromTriplets(t.begin(), t.end());
  const EigenPairs ep = eigenspectrum({b, m, true}, 4);
  EXPECT_NEAR(ep.values(1) - ep.values(0), 1e-9, 1e-15);
  EXPECT_NEAR(ep.values(3) - ep.values(2), 1e-9, 1e-14);
}

TEST(Eigenspectrum, RejectsNonHermitianAndBadCounts) {
  const BasisSpec b(1, 1);
  const OperatorMatrix a = make_photon(b, PhotonOp::a);
  EXPECT_THROW(eigenspectrum(a, 2), ValidationError);
  EXPECT_THROW(eigenspectrum(identity_operator(b), 5), ValidationError);
}

TEST(AvoidedCrossing, RecoversToyModelExactly) {
  const double x0 = 2.013, c = 3e-4;
  const auto family = toy_family(x0, c);
  const LevelScan scan = scan_levels(linspace(1.8, 2.2, 41), family, 4);
  const CrossingReport r = find_avoided_crossing(scan, {2, 3}, family);
  ASSERT_TRUE(r.found);
  EXPECT_NEAR(r.location, x0, 1e-6 * x0);
  EXPECT_NEAR(r.gap, 2.0 * c, 1e-4 * 2.0 * c);
}

TEST(AvoidedCrossing, InvariantUnderGridReversal) {
  const auto family = toy_family(1.97, 1e-3);
  std::vector<double> grid = linspace(1.8, 2.2, 33);
  const CrossingReport fwd = find_avoided_crossing(scan_levels(grid, family, 4), {2, 3}, family);
  std::reverse(grid.begin(), grid.end());
  const CrossingReport rev = find_avoided_crossing(scan_levels(grid, family, 4), {2, 3}, family);
  EXPECT_EQ(fwd.found, rev.found);
  EXPECT_DOUBLE_EQ(fwd.location, rev.location);
  EXPECT_DOUBLE_EQ(fwd.gap, rev.gap);
}

TEST(AvoidedCrossing, EdgeMinimumIsNotACrossing) {
  const auto family = toy_family(2.5, 1e-3);
  const CrossingReport r = find_avoided_crossing(scan_levels(linspace(1.8, 2.2, 21), family, 4), {2, 3}, family);
  EXPECT_FALSE(r.found);
  EXPECT_FALSE(r.note.empty());
}

TEST(AvoidedCrossing, PairResonanceAtTwiceQubitFrequency) {
  const auto p = SystemParams::from_angle(4, 1.0, std::numbers::pi / 6, 2.5e-4, 2.0);
  const CrossingReport r = locate_pair_resonance(ModelKind::full, p, BasisSpec(4, 3), 1.9, 2.1, 41);
  ASSERT_TRUE(r.found);
  EXPECT_NEAR(r.location, 2.0, 1e-4);
  ASSERT_TRUE(r.analytic_gap.has_value());
  EXPECT_NEAR(r.gap / *r.analytic_gap, 1.0, 0.01);
}

TEST(AvoidedCrossing, ParitySymmetricModelHasTrueCrossing) {
  // epsilon = 0: |1,-j> and |0,-j+2> have opposite parity and cross exactly.
  const SystemParams p(4, 1.0, 0.0, 0.05, 2.0);
  const BasisSpec b(4, 3);
  const auto family = cavity_family(ModelKind::full, p, b);
  const CrossingReport r = find_avoided_crossing(scan_levels(linspace(1.9, 2.1, 41), family, 4), {2, 3}, family);
  EXPECT_LT(r.gap, 1e-10);
}

TEST(LevelScan, CsvHasHeaderAndRows) {
  const auto family = toy_family(2.0, 1e-2);
  const LevelScan scan = scan_levels(linspace(1.9, 2.1, 5), family, 3);
  std::ostringstream os;
  write_level_scan_csv(os, scan);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "scan_value,E1,E2,E3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_DOUBLE_EQ(scan.levels(0, 0), 0.0);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndPropagatesErrors) {
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(8, [](std::size_t i) {
                 if (i == 3) throw NumericalError("boom");
               }),
               NumericalError);
}

}  // namespace
}  // namespace dickesq
