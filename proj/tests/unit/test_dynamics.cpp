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
#include <cstring>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "dickesq/dynamics.hpp"

namespace dickesq {
namespace {

constexpr double kPi = std::numbers::pi;

OdeOptions tight() {
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  return o;
}

TEST(EvolvePure, EffectiveModelMatchesClosedForm) {
  const int n = 6;
  const auto p = SystemParams::from_angle(n, 1.0, kPi / 6, 0.115, 2.0);
  const BasisSpec b(n, 2);
  const SinglePhotonInit init{0.45 * kPi};
  const double rate = pair_exchange_rate(p);
  EvolutionProblem prob{.model = ModelKind::effective, .params = p, .basis = b, .initial = init.bare_state(b),
                        .grid = TimeGrid{0.0, kPi / std::abs(rate), 61}};
  prob.options.ode = tight();
  const Trajectory traj = evolve_pure(prob);
  for (const auto& r : traj.records) {
    const SinglePhotonSnapshot exact = analytic_single_photon(p, init, r.t);
    EXPECT_NEAR(r.photon_number, exact.photon_number, 1e-9);
    EXPECT_NEAR(r.spin_excitation, exact.excited_atoms, 1e-9);
  }
  EXPECT_LT(traj.max_fock_edge_population, 1e-20);
}

TEST(EvolvePure, ConservesEnergyWithoutDrive) {
  const auto p = SystemParams::from_angle(4, 1.0, kPi / 6, 0.1, 2.0);
  const BasisSpec b(4, 4);
  EvolutionProblem prob{.model = ModelKind::full, .params = p, .basis = b,
                        .initial = QuantumState::basis_state(b, 2, 1), .grid = TimeGrid{0.0, 200.0, 21}};
  prob.options.ode = tight();
  prob.options.snapshot_stride = 1;
  const Trajectory traj = evolve_pure(prob);
  const OperatorMatrix h = build_full_hamiltonian(p, b);
  const double e0 = expectation(prob.initial, h).real();
  ASSERT_GT(std::abs(e0), 1.0);
  ASSERT_EQ(traj.snapshots.size(), 21U);
  for (const auto& snap : traj.snapshots) {
    EXPECT_LE(std::abs(expectation(snap.state, h).real() - e0), 1e-7 * std::abs(e0)) << "t=" << snap.t;
  }
}

TEST(AnalyticSinglePhoton, PopulationsFollowSquaredTrigonometry) {
  const SinglePhotonInit init{0.3};
  const double rate = 0.02, t = 17.0;
  const SinglePhotonSnapshot s = analytic_single_photon(5, rate, init, t);
  const double s2 = std::sin(0.3) * std::sin(0.3);
  EXPECT_NEAR(s.photon_number, s2 * std::pow(std::cos(rate * t), 2), 1e-15);
  EXPECT_NEAR(s.excited_atoms, 2.0 * s2 * std::pow(std::sin(rate * t), 2), 1e-15);
  EXPECT_NEAR(s.state.norm_or_trace(), 1.0, 1e-14);
  EXPECT_THROW(analytic_single_photon(1, rate, init, t), ValidationError);
  EXPECT_THROW((SinglePhotonInit{2.0}.validate()), ValidationError);
}

TEST(EvolveLindblad, ReducesToSchrodingerWithoutLoss) {
  const auto p = SystemParams::from_angle(3, 1.0, kPi / 6, 0.1, 1.98);
  const BasisSpec b(3, 3);
  EvolutionProblem prob{.model = ModelKind::full,
                        .params = p,
                        .basis = b,
                        .drive = DriveSpec::gaussian_pulse(0.2, 1.98, 20.0, 5.0),
                        .initial = QuantumState::basis_state(b, 0, 0),
                        .grid = TimeGrid{0.0, 60.0, 31}};
  prob.options.ode = tight();
  const Trajectory pure = evolve_pure(prob);
  const Trajectory mixed = evolve_lindblad(prob);
  for (std::size_t i = 0; i < pure.records.size(); ++i) {
    EXPECT_NEAR(pure.records[i].photon_number, mixed.records[i].photon_number, 1e-9);
    EXPECT_NEAR(pure.records[i].spin_excitation, mixed.records[i].spin_excitation, 1e-9);
  }
}

TEST(EvolveLindblad, CavityDecayIsExponential) {
  const BasisSpec b(1, 3);
  EvolutionProblem prob{.model = ModelKind::full,
                        .params = SystemParams(1, 1.0, 0.0, 0.0, 2.0),
                        .basis = b,
                        .dissipation = DissipationParams(0.3, 0.0),
                        .initial = QuantumState::basis_state(b, 2, 0),
                        .grid = TimeGrid{0.0, 10.0, 21}};
  prob.options.ode = tight();
  for (const auto& r : evolve_lindblad(prob).records) EXPECT_NEAR(r.photon_number, 2.0 * std::exp(-0.3 * r.t), 1e-10);
}

TEST(EvolveLindblad, SpinDecayRateIsGammaPerAtom) {
  // Single atom: J- carries rate gamma / N = gamma.
  const BasisSpec b(1, 1);
  EvolutionProblem prob{.model = ModelKind::full,
                        .params = SystemParams(1, 1.0, 0.0, 0.0, 2.0),
                        .basis = b,
                        .dissipation = DissipationParams(0.0, 0.2),
                        .initial = QuantumState::basis_state(b, 0, 1),
                        .grid = TimeGrid{0.0, 10.0, 11}};
  prob.options.ode = tight();
  for (const auto& r : evolve_lindblad(prob).records) EXPECT_NEAR(r.spin_excitation, std::exp(-0.2 * r.t), 1e-10);
}

TEST(EvolveLindblad, PreservesDensityMatrixInvariants) {
  const auto p = SystemParams::from_angle(4, 1.0, kPi / 6, 0.115, 1.93);
  const BasisSpec b(4, 4);
  EvolutionProblem prob{.model = ModelKind::full,
                        .params = p,
                        .basis = b,
                        .dissipation = DissipationParams(0.01, 0.01),
                        .drive = DriveSpec::default_pulse(0.3, 1.96, 1.0),
                        .initial = QuantumState::basis_state(b, 0, 0),
                        .grid = TimeGrid{0.0, 300.0, 61}};
  const Trajectory t = evolve_lindblad(prob);
  EXPECT_LT(t.max_trace_defect, 1e-6);
  EXPECT_LT(t.max_hermiticity_defect, 1e-8);
  EXPECT_GE(t.final_min_eigenvalue, -1e-7);
}

// Product-space Liouvillian, vec(A rho B) = (B^T kron A) vec(rho).
DenseMatrix liouvillian(const DenseMatrix& h, const std::vector<std::pair<DenseMatrix, double>>& jumps) {
  const Index d = h.rows();
  const DenseMatrix id = DenseMatrix::Identity(d, d);
  DenseMatrix l = cplx(0.0, -1.0) * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id)).eval();
  for (const auto& [op, rate] : jumps) {
    const DenseMatrix ld = op.adjoint() * op;
    l += rate * (Eigen::kroneckerProduct(op.conjugate(), op) - 0.5 * Eigen::kroneckerProduct(id, ld) -
                 0.5 * Eigen::kroneckerProduct(ld.transpose(), id))
                    .eval();
  }
  return l;
}

class BruteForceDynamics : public ::testing::TestWithParam<int> {};

TEST_P(BruteForceDynamics, LindbladMatchesProductSpaceExponential) {
  const int n = GetParam();
  const auto p = SystemParams::from_angle(n, 1.0, kPi / 6, 0.115, 1.95);
  const BruteForceEmbedding e = brute_force_embed(n, 2);
  const double kappa = 0.05, gamma = 0.08, t_end = 7.0;
  SparseMatrix hf = p.delta() * e.jz + p.epsilon() * e.jx + p.omega_c() * e.number;
  hf += SparseMatrix((2.0 * p.g()) * SparseMatrix(SparseMatrix(e.a + e.a_dag) * e.jx));
  const DenseMatrix l =
      liouvillian(DenseMatrix(hf), {{DenseMatrix(e.a), kappa}, {DenseMatrix(e.j_minus), gamma / n}});
  // Initial state: one photon, spins in the symmetric state with one excitation.
  const DenseMatrix v = DenseMatrix(e.isometry);
  StateVector psi_d = StateVector::Zero(e.dicke.dimension());
  psi_d(e.dicke.index(1, 0)) = std::sqrt(0.5);
  psi_d(e.dicke.index(0, 1)) = cplx(0.0, std::sqrt(0.5));
  const StateVector psi_f = v * psi_d;
  const DenseMatrix rho_f0 = psi_f * psi_f.adjoint();
  const Index df = rho_f0.rows();
  const Eigen::VectorXcd vec0 = Eigen::Map<const Eigen::VectorXcd>(rho_f0.data(), df * df);
  const Eigen::VectorXcd vec1 = (l * t_end).exp() * vec0;
  const DenseMatrix rho_f1 = Eigen::Map<const DenseMatrix>(vec1.data(), df, df);
  const DenseMatrix expected = v.adjoint() * rho_f1 * v;

  EvolutionProblem prob{.model = ModelKind::full,
                        .params = p,
                        .basis = e.dicke,
                        .dissipation = DissipationParams(kappa, gamma),
                        .initial = QuantumState::pure(e.dicke, psi_d),
                        .grid = TimeGrid{0.0, t_end, 2}};
  prob.options.ode = tight();
  const Trajectory traj = evolve_lindblad(prob);
  const DenseMatrix& got = traj.final_state->matrix();
  EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-10 * expected.cwiseAbs().maxCoeff());
  // Collective decay keeps the state in the symmetric sector.
  EXPECT_NEAR(expected.trace().real(), 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(SmallEnsembles, BruteForceDynamics, ::testing::Values(2, 3));

TEST(DressedState, NormalizedAndPhasedToPhotonState) {
  const auto p = SystemParams::from_angle(4, 1.0, kPi / 6, 0.115, 1.93);
  const BasisSpec b(4, 4);
  const OperatorMatrix h = build_full_hamiltonian(p, b);
  const QuantumState s = dressed_single_photon_state(h, SinglePhotonInit{kPi / 2});
  EXPECT_NEAR(s.norm_or_trace(), 1.0, 1e-12);
  const EigenPairs ep = eigenspectrum(h, 1);
  const StateVector photon = make_photon(b, PhotonOp::a_dag).matrix * ep.vectors.col(0);
  EXPECT_GT(std::abs(s.amplitudes().dot(photon)), 0.9);
}

TEST(Evolution, RejectsInconsistentProblems) {
  const auto p = SystemParams::from_angle(2, 1.0, kPi / 6, 0.1, 2.0);
  const BasisSpec b(2, 2);
  EvolutionProblem prob{.model = ModelKind::full, .params = p, .basis = b, .dissipation = DissipationParams(0.1, 0.0),
                        .initial = QuantumState::basis_state(b, 0, 0), .grid = TimeGrid{0.0, 1.0, 3}};
  EXPECT_THROW(evolve_pure(prob), ValidationError);
  EXPECT_THROW(cw_drive_run(prob), ValidationError);
  prob.basis = BasisSpec(3, 2);
  EXPECT_THROW(evolve_lindblad(prob), ValidationError);
}

TEST(Evolution, WarnsOnFockLeakage) {
  const BasisSpec b(2, 1);
  EvolutionProblem prob{.model = ModelKind::full,
                        .params = SystemParams::from_angle(2, 1.0, kPi / 6, 0.1, 1.0),
                        .basis = b,
                        .drive = DriveSpec::continuous_wave(0.5, 1.0),
                        .initial = QuantumState::basis_state(b, 0, 0),
                        .grid = TimeGrid{0.0, 20.0, 11}};
  const Trajectory t = evolve_pure(prob);
  ASSERT_FALSE(t.warnings.empty());
  EXPECT_NE(t.warnings.front().find("Fock cutoff leakage"), std::string::npos);
}

TEST(StateDump, BinaryLayout) {
  const BasisSpec b(2, 1);
  std::vector<Snapshot> snaps{{0, 0.5, QuantumState::basis_state(b, 1, 2)}};
  std::ostringstream os;
  write_state_dump(os, b, snaps);
  const std::string s = os.str();
  ASSERT_EQ(s.size(), 8u + 4 + 4 + 4 + 4 + 8 + 8 + 16u * 6);
  EXPECT_EQ(s.substr(0, 8), "DKSQSTAT");
  std::uint32_t version = 0, kind = 9;
  std::int32_t n = 0, m = 0;
  std::uint64_t count = 0;
  double t = 0.0, re = 0.0;
  std::memcpy(&version, s.data() + 8, 4);
  std::memcpy(&kind, s.data() + 12, 4);
  std::memcpy(&n, s.data() + 16, 4);
  std::memcpy(&m, s.data() + 20, 4);
  std::memcpy(&count, s.data() + 24, 8);
  std::memcpy(&t, s.data() + 32, 8);
  std::memcpy(&re, s.data() + 40 + 16 * b.index(1, 2), 8);
  EXPECT_EQ(version, 1u);
  EXPECT_EQ(kind, 0u);
  EXPECT_EQ(n, 2);
  EXPECT_EQ(m, 1);
  EXPECT_EQ(count, 1u);
  EXPECT_DOUBLE_EQ(t, 0.5);
  EXPECT_DOUBLE_EQ(re, 1.0);
}

TEST(TrajectoryCsv, HeaderAndNanForUndefinedSqueezing) {
  Trajectory t;
  ObservableRecord r;
  r.t = 1.0;
  t.records.push_back(r);
  std::ostringstream os;
  write_trajectory_csv(os, t, true);
  EXPECT_EQ(os.str(), "t,photon_number,spin_excitation,xi2,xi2_general\n"
                      "1.000000000000e+00,0.000000000000e+00,0.000000000000e+00,nan,nan\n");
}

}  // namespace
}  // namespace dickesq
