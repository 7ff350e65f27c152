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

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

#include "dickesq/hilbert.hpp"

namespace dickesq {

// Tr(M rho) = sum_ij M_ij rho_ji
inline cplx trace_product(const SparseMatrix& m, const DenseMatrix& rho) {
  cplx acc = 0.0;
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) acc += it.value() * rho(it.col(), it.row());
  }
  return acc;
}

inline cplx expectation(const QuantumState& state, const OperatorMatrix& op) {
  require_same_basis(state.basis(), op.basis, "expectation");
  if (state.is_pure()) {
    const StateVector& psi = state.amplitudes();
    return psi.dot(op.matrix * psi);
  }
  return trace_product(op.matrix, state.matrix());
}

// Mean spin vector and symmetrized covariance C_ab = <{Ja, Jb}>/2 - <Ja><Jb>.
struct SpinMoments {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

// Spin operators of one basis, built once and reused across samples.
class SpinObservables {
 public:
  explicit SpinObservables(const BasisSpec& basis)
      : basis_(basis),
        ops_{make_collective_spin(basis, SpinOp::jx).matrix, make_collective_spin(basis, SpinOp::jy).matrix,
             make_collective_spin(basis, SpinOp::jz).matrix} {
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) products_[pair_slot(a, b)] = SparseMatrix(ops_[a] * ops_[b]);
    }
  }

  const BasisSpec& basis() const noexcept { return basis_; }
  const SparseMatrix& op(int axis) const { return ops_.at(axis); }

  SpinMoments moments(const StateVector& psi) const {
    std::array<StateVector, 3> v;
    SpinMoments m;
    for (int a = 0; a < 3; ++a) {
      v[a] = ops_[a] * psi;
      m.mean(a) = psi.dot(v[a]).real();
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        const double c = v[a].dot(v[b]).real() - m.mean(a) * m.mean(b);
        m.covariance(a, b) = c;
        m.covariance(b, a) = c;
      }
    }
    return m;
  }

  SpinMoments moments(const DenseMatrix& rho) const {
    SpinMoments m;
    for (int a = 0; a < 3; ++a) m.mean(a) = trace_product(ops_[a], rho).real();
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        // Re Tr(rho Ja Jb) is the symmetrized product for Hermitian Ja, Jb.
        const double c = trace_product(products_[pair_slot(a, b)], rho).real() - m.mean(a) * m.mean(b);
        m.covariance(a, b) = c;
        m.covariance(b, a) = c;
      }
    }
    return m;
  }

  SpinMoments moments(const QuantumState& state) const {
    require_same_basis(state.basis(), basis_, "SpinObservables::moments");
    return state.is_pure() ? moments(state.amplitudes()) : moments(state.matrix());
  }

 private:
  static int pair_slot(int a, int b) { return a == 0 ? b : (a == 1 ? 2 + b : 5); }

  BasisSpec basis_;
  std::array<SparseMatrix, 3> ops_;
  std::array<SparseMatrix, 6> products_;
};

enum class SqueezingMode { xy_plane, general };

struct SqueezingResult {
  double xi2 = 1.0;
  // xy_plane: angle of (cos phi, sin phi, 0); general: angle from the
  // first transverse frame vector toward the second.
  double optimal_phi = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
  Eigen::Vector3d mean_spin = Eigen::Vector3d::Zero();
  double numerator = 0.0;
  bool degenerate = false;
};

// Orthonormal pair spanning the plane transverse to unit vector u.
inline std::array<Eigen::Vector3d, 2> transverse_frame(const Eigen::Vector3d& u) {
  Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d seed = Eigen::Vector3d::Unit(k);
  Eigen::Vector3d e1 = (seed - seed.dot(u) * u).normalized();
  Eigen::Vector3d e2 = u.cross(e1);
  return {e1, e2};
}

// Minimum of n^T W n over unit n in a 2D plane; returns (value, angle, degenerate).
struct PlaneMinimum {
  double value;
  double angle;
  bool degenerate;
};

inline PlaneMinimum minimize_plane_variance(double vxx, double vyy, double vxy) {
  const double mean = 0.5 * (vxx + vyy);
  const double radius = 0.5 * std::sqrt((vxx - vyy) * (vxx - vyy) + 4.0 * vxy * vxy);
  const bool degenerate = radius <= 1e-12 * std::max(std::abs(mean), 1.0);
  double angle = 0.0;
  if (!degenerate) {
    angle = 0.5 * (std::atan2(2.0 * vxy, vxx - vyy) + std::numbers::pi);
    angle = std::fmod(angle, std::numbers::pi);
    if (angle < 0.0) angle += std::numbers::pi;
  }
  return {mean - radius, angle, degenerate};
}

// xi^2 = N V_min / |<J>|^2 from precomputed moments.
inline SqueezingResult wineland_xi2(const SpinMoments& m, int n_atoms, SqueezingMode mode) {
  const double norm = m.mean.norm();
  if (!(norm > 1e-9 * n_atoms)) {
    throw UndefinedMetricError("wineland_xi2: mean spin vanishes, squeezing parameter undefined");
  }
  Eigen::Vector3d e1, e2;
  if (mode == SqueezingMode::xy_plane) {
    e1 = Eigen::Vector3d::UnitX();
    e2 = Eigen::Vector3d::UnitY();
  } else {
    const auto frame = transverse_frame(m.mean / norm);
    e1 = frame[0];
    e2 = frame[1];
  }
  const double w11 = e1.dot(m.covariance * e1);
  const double w22 = e2.dot(m.covariance * e2);
  const double w12 = e1.dot(m.covariance * e2);
  const PlaneMinimum pm = minimize_plane_variance(w11, w22, w12);

  SqueezingResult r;
  r.mean_spin = m.mean;
  r.numerator = std::max(pm.value, 0.0);
  r.optimal_phi = pm.angle;
  r.degenerate = pm.degenerate;
  r.direction = std::cos(pm.angle) * e1 + std::sin(pm.angle) * e2;
  r.xi2 = n_atoms * r.numerator / (norm * norm);
  return r;
}

inline SqueezingResult wineland_xi2(const QuantumState& state, SqueezingMode mode) {
  SpinObservables obs(state.basis());
  return wineland_xi2(obs.moments(state), state.basis().n_atoms(), mode);
}

// xi^2 for a fixed unit direction n: N n^T C n / |<J>|^2.
inline double xi2_along(const SpinMoments& m, int n_atoms, const Eigen::Vector3d& n) {
  const double norm2 = m.mean.squaredNorm();
  if (!(std::sqrt(norm2) > 1e-9 * n_atoms)) {
    throw UndefinedMetricError("xi2_along: mean spin vanishes, squeezing parameter undefined");
  }
  return n_atoms * n.dot(m.covariance * n) / norm2;
}

// Variance of n.J computed directly from the state.
inline double directional_variance(const QuantumState& state, const Eigen::Vector3d& n) {
  const BasisSpec& b = state.basis();
  SparseMatrix jn = n(0) * make_collective_spin(b, SpinOp::jx).matrix +
                    n(1) * make_collective_spin(b, SpinOp::jy).matrix +
                    n(2) * make_collective_spin(b, SpinOp::jz).matrix;
  OperatorMatrix op(b, jn, true);
  OperatorMatrix op2(b, SparseMatrix(jn * jn), true);
  const double mean = expectation(state, op).real();
  return expectation(state, op2).real() - mean * mean;
}

// Large-N limit: 1 + 2(<b^dag b> - |<b^2>|).
inline double bosonic_xi2(double b_number, cplx b_squared) {
  if (!(b_number >= 0.0)) throw ValidationError("bosonic_xi2: <b^dag b> must be >= 0");
  return 1.0 + 2.0 * (b_number - std::abs(b_squared));
}

// 10 log10(xi2)
inline double to_decibels(double xi2) {
  if (!(xi2 > 0.0)) throw ValidationError("to_decibels: input must be > 0");
  return 10.0 * std::log10(xi2);
}

}  // namespace dickesq
