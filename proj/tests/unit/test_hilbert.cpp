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

#include <sstream>

#include "dickesq/hilbert.hpp"

namespace dickesq {
namespace {

DenseMatrix dense(const OperatorMatrix& op) { return op.dense(); }

TEST(BasisSpec, IndexRoundTripsLabels) {
  const BasisSpec b(5, 3);
  EXPECT_EQ(b.dimension(), 24);
  for (Index k = 0; k < b.dimension(); ++k) {
    const auto [n, e] = b.labels(k);
    EXPECT_EQ(b.index(n, e), k);
  }
  EXPECT_EQ(b.index(2, 4), 2 * 6 + 4);
  EXPECT_DOUBLE_EQ(b.magnetic_number(0), -2.5);
}

TEST(BasisSpec, RejectsInvalidSizes) {
  EXPECT_THROW(BasisSpec(0, 3), ValidationError);
  EXPECT_THROW(BasisSpec(2, -1), ValidationError);
  EXPECT_THROW(BasisSpec(2, 2).index(3, 0), ValidationError);
}

TEST(BasisSpec, DefaultCutoffCoversThreeTimesExpectation) {
  EXPECT_EQ(default_fock_cutoff(0.0), 6);
  EXPECT_EQ(default_fock_cutoff(2.5), 8);
}

TEST(CollectiveSpin, LadderElementsMatchHandValues) {
  // N = 2: J+|k=0> = sqrt(2)|1>, J+|1> = sqrt(2)|2>.
  const BasisSpec b(2, 0);
  const DenseMatrix jp = dense(make_collective_spin(b, SpinOp::j_plus));
  EXPECT_NEAR(std::abs(jp(1, 0)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(jp(2, 1)), std::sqrt(2.0), 1e-15);
  // N = 4, J+^2 |0> = sqrt(4*1) sqrt(3*2) |2>.
  const BasisSpec b4(4, 0);
  const DenseMatrix jp2 = dense(make_collective_spin(b4, SpinOp::j_plus_sq));
  EXPECT_NEAR(jp2(2, 0).real(), std::sqrt(24.0), 1e-13);
}

TEST(CollectiveSpin, SatisfiesAngularMomentumAlgebra) {
  for (int n : {1, 2, 5, 8}) {
    const BasisSpec b(n, 2);
    const auto jx = make_collective_spin(b, SpinOp::jx);
    const auto jy = make_collective_spin(b, SpinOp::jy);
    const auto jz = make_collective_spin(b, SpinOp::jz);
    const OperatorMatrix* ops[3] = {&jx, &jy, &jz};
    for (int a = 0; a < 3; ++a) {
      const int b2 = (a + 1) % 3, c2 = (a + 2) % 3;
      const DenseMatrix c = dense(commutator(*ops[a], *ops[b2])) - kI * dense(*ops[c2]);
      EXPECT_LT(c.cwiseAbs().maxCoeff(), 1e-12) << "N=" << n << " axis " << a;
    }
    const DenseMatrix casimir = dense(jx * jx + jy * jy + jz * jz);
    const double j = b.j();
    EXPECT_LT((casimir - j * (j + 1) * DenseMatrix::Identity(b.dimension(), b.dimension())).cwiseAbs().maxCoeff(),
              1e-11);
    EXPECT_TRUE(jx.is_hermitian());
    EXPECT_TRUE(jy.is_hermitian());
  }
}

TEST(Photon, TruncatedLadderAlgebra) {
  const BasisSpec b(1, 5);
  const auto a = make_photon(b, PhotonOp::a);
  const auto ad = make_photon(b, PhotonOp::a_dag);
  const DenseMatrix c = dense(commutator(a, ad));
  // [a, a^dag] = 1 except on the truncated edge where it is -n_max.
  for (Index k = 0; k < b.dimension(); ++k) {
    const double expected = b.labels(k).first == b.fock_cutoff() ? -b.fock_cutoff() : 1.0;
    EXPECT_NEAR(c(k, k).real(), expected, 1e-13);
  }
  EXPECT_LT((dense(ad * a) - dense(make_photon(b, PhotonOp::number))).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ((dense(ad) - dense(a).adjoint()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(make_photon(b, PhotonOp::number).is_hermitian());
}

TEST(Parity, SignByTotalExcitation) {
  const BasisSpec b(3, 2);
  const DenseMatrix p = dense(make_parity(b));
  EXPECT_DOUBLE_EQ(p(b.index(1, 2), b.index(1, 2)).real(), -1.0);
  EXPECT_DOUBLE_EQ(p(b.index(1, 1), b.index(1, 1)).real(), 1.0);
}

TEST(QuantumState, ValidatesNormalizationAndShape) {
  const BasisSpec b(2, 1);
  StateVector psi = StateVector::Zero(b.dimension());
  EXPECT_THROW(QuantumState::pure(b, psi), ValidationError);
  psi(0) = 2.0;
  EXPECT_THROW(QuantumState::pure(b, psi, false), ValidationError);
  EXPECT_NEAR(QuantumState::pure(b, psi).norm_or_trace(), 1.0, 1e-15);
  DenseMatrix rho = DenseMatrix::Identity(b.dimension(), b.dimension());
  EXPECT_THROW(QuantumState::density(b, rho), ValidationError);
  rho /= static_cast<double>(b.dimension());
  rho(0, 1) = cplx(0.0, 0.1);
  EXPECT_THROW(QuantumState::density(b, rho), ValidationError);
}

TEST(QuantumState, DensityConversionPreservesPopulations) {
  const BasisSpec b(3, 2);
  StateVector psi = StateVector::Random(b.dimension());
  const QuantumState s = QuantumState::pure(b, psi);
  const QuantumState r = s.to_density();
  for (Index k = 0; k < b.dimension(); ++k) EXPECT_NEAR(s.population(k), r.population(k), 1e-14);
}

class BruteForceTest : public ::testing::TestWithParam<int> {};

TEST_P(BruteForceTest, ProjectedOperatorsEqualDickeOperators) {
  const int n = GetParam();
  const BruteForceEmbedding e = brute_force_embed(n, 2);
  const BasisSpec& b = e.dicke;
  const std::pair<SparseMatrix, SpinOp> spins[] = {
      {e.jx, SpinOp::jx}, {e.jy, SpinOp::jy}, {e.jz, SpinOp::jz}, {e.j_plus, SpinOp::j_plus}, {e.j_minus, SpinOp::j_minus}};
  for (const auto& [full, op] : spins) {
    EXPECT_LT(e.leakage(full), 1e-14);
    const DenseMatrix diff = dense(e.project(full)) - dense(make_collective_spin(b, op));
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-13);
  }
  EXPECT_LT((dense(e.project(e.a)) - dense(make_photon(b, PhotonOp::a))).cwiseAbs().maxCoeff(), 1e-14);
  const DenseMatrix iso = DenseMatrix(SparseMatrix(e.isometry.adjoint()) * e.isometry);
  EXPECT_LT((iso - DenseMatrix::Identity(b.dimension(), b.dimension())).cwiseAbs().maxCoeff(), 1e-14);
}

INSTANTIATE_TEST_SUITE_P(SmallEnsembles, BruteForceTest, ::testing::Values(1, 2, 3));

TEST(BruteForce, RejectsLargeEnsembles) { EXPECT_THROW(brute_force_embed(4, 1), ValidationError); }

TEST(MatrixMarket, WritesOneBasedCoordinates) {
  const BasisSpec b(1, 1);
  std::ostringstream os;
  write_matrix_market(os, make_photon(b, PhotonOp::a));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "%%MatrixMarket matrix coordinate complex general");
  std::getline(in, line);
  EXPECT_EQ(line.front(), '%');
  int rows = 0, cols = 0, nnz = 0;
  in >> rows >> cols >> nnz;
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(nnz, 2);
  int r = 0, c = 0;
  double re = 0, im = 0;
  in >> r >> c >> re >> im;
  // a|n=1,k=0> = |0,0>: row index(0,0)=0, column index(1,0)=2.
  EXPECT_EQ(r, 1);
  EXPECT_EQ(c, 3);
  EXPECT_DOUBLE_EQ(re, 1.0);
}

}  // namespace
}  // namespace dickesq
