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
#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dickesq/error.hpp"

namespace dickesq {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr cplx kI{0.0, 1.0};

// Truncated cavity Fock space times the maximal-spin Dicke sector j = N/2.
// Spin states are labelled by the excitation number k = m + j in [0, N].
// Composite index: n * (N + 1) + k (photon-major).
class BasisSpec {
 public:
  BasisSpec(int n_atoms, int fock_cutoff) : n_atoms_(n_atoms), fock_cutoff_(fock_cutoff) {
    if (n_atoms < 1) throw ValidationError("BasisSpec: n_atoms must be >= 1");
    if (fock_cutoff < 0) throw ValidationError("BasisSpec: fock_cutoff must be >= 0");
  }

  int n_atoms() const noexcept { return n_atoms_; }
  int fock_cutoff() const noexcept { return fock_cutoff_; }
  double j() const noexcept { return 0.5 * n_atoms_; }
  Index spin_dim() const noexcept { return n_atoms_ + 1; }
  Index fock_dim() const noexcept { return fock_cutoff_ + 1; }
  Index dimension() const noexcept { return spin_dim() * fock_dim(); }

  Index index(int photons, int excitations) const {
    if (photons < 0 || photons > fock_cutoff_ || excitations < 0 || excitations > n_atoms_) {
      throw ValidationError("BasisSpec::index: label out of range");
    }
    return static_cast<Index>(photons) * spin_dim() + excitations;
  }

  // Returns (photons, excitations) for a composite index.
  std::pair<int, int> labels(Index k) const {
    if (k < 0 || k >= dimension()) throw ValidationError("BasisSpec::labels: index out of range");
    return {static_cast<int>(k / spin_dim()), static_cast<int>(k % spin_dim())};
  }

  double magnetic_number(int excitations) const noexcept { return excitations - j(); }

  friend bool operator==(const BasisSpec& a, const BasisSpec& b) noexcept {
    return a.n_atoms_ == b.n_atoms_ && a.fock_cutoff_ == b.fock_cutoff_;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "BasisSpec(N=" << n_atoms_ << ", n_max=" << fock_cutoff_ << ")";
    return os.str();
  }

 private:
  int n_atoms_;
  int fock_cutoff_;
};

// n_max = max(6, ceil(3 * expected photon number)).
inline int default_fock_cutoff(double expected_photons) {
  if (!(expected_photons >= 0.0)) throw ValidationError("default_fock_cutoff: expected photons must be >= 0");
  return std::max(6, static_cast<int>(std::ceil(3.0 * expected_photons)));
}

inline void require_same_basis(const BasisSpec& a, const BasisSpec& b, const char* where) {
  if (!(a == b)) {
    throw ValidationError(std::string(where) + ": basis mismatch " + a.describe() + " vs " + b.describe());
  }
}

struct OperatorMatrix {
  BasisSpec basis;
  SparseMatrix matrix;
  bool hermitian = false;

  OperatorMatrix(BasisSpec b, SparseMatrix m, bool herm = false)
      : basis(std::move(b)), matrix(std::move(m)), hermitian(herm) {
    if (matrix.rows() != basis.dimension() || matrix.cols() != basis.dimension()) {
      throw ValidationError("OperatorMatrix: storage does not match basis dimension");
    }
    matrix.makeCompressed();
  }

  Index dimension() const noexcept { return basis.dimension(); }

  double max_abs() const {
    double m = 0.0;
    for (Index k = 0; k < matrix.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
  }

  // max |M - M^dagger| entrywise.
  double hermiticity_defect() const {
    SparseMatrix d = matrix - SparseMatrix(matrix.adjoint());
    double m = 0.0;
    for (Index k = 0; k < d.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
  }

  bool is_hermitian(double rel_tol = 1e-12) const {
    return hermiticity_defect() <= rel_tol * std::max(max_abs(), 1e-300);
  }

  OperatorMatrix adjoint() const { return {basis, SparseMatrix(matrix.adjoint()), hermitian}; }
  DenseMatrix dense() const { return DenseMatrix(matrix); }
};

inline OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "operator+");
  return {a.basis, SparseMatrix(a.matrix + b.matrix), a.hermitian && b.hermitian};
}

inline OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "operator-");
  return {a.basis, SparseMatrix(a.matrix - b.matrix), a.hermitian && b.hermitian};
}

inline OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "operator*");
  return {a.basis, SparseMatrix(a.matrix * b.matrix), false};
}

inline OperatorMatrix operator*(double s, const OperatorMatrix& a) {
  return {a.basis, SparseMatrix(s * a.matrix), a.hermitian};
}

inline OperatorMatrix operator*(cplx s, const OperatorMatrix& a) {
  return {a.basis, SparseMatrix(s * a.matrix), a.hermitian && s.imag() == 0.0};
}

inline OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "commutator");
  return {a.basis, SparseMatrix(a.matrix * b.matrix - b.matrix * a.matrix), false};
}

inline OperatorMatrix zero_operator(const BasisSpec& basis) {
  return {basis, SparseMatrix(basis.dimension(), basis.dimension()), true};
}

inline OperatorMatrix identity_operator(const BasisSpec& basis) {
  SparseMatrix id(basis.dimension(), basis.dimension());
  id.setIdentity();
  return {basis, std::move(id), true};
}

// Pure state vector or density matrix on a BasisSpec.
class QuantumState {
 public:
  enum class Kind { pure, density };

  static QuantumState pure(const BasisSpec& basis, StateVector psi, bool normalize = true) {
    if (psi.size() != basis.dimension()) throw ValidationError("QuantumState::pure: wrong vector length");
    const double nrm = psi.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ValidationError("QuantumState::pure: zero or non-finite vector");
    if (normalize) {
      psi /= nrm;
    } else if (std::abs(nrm * nrm - 1.0) > 1e-9) {
      throw ValidationError("QuantumState::pure: vector not normalized");
    }
    return QuantumState(basis, Kind::pure, std::move(psi), DenseMatrix());
  }

  // rho must have unit trace to 1e-8 and be Hermitian to 1e-10.
  static QuantumState density(const BasisSpec& basis, DenseMatrix rho) {
    if (rho.rows() != basis.dimension() || rho.cols() != basis.dimension()) {
      throw ValidationError("QuantumState::density: wrong matrix shape");
    }
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-8) {
      throw ValidationError("QuantumState::density: trace differs from 1");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
      throw ValidationError("QuantumState::density: matrix not Hermitian");
    }
    return QuantumState(basis, Kind::density, StateVector(), std::move(rho));
  }

  // Wraps an integrator output without the entry checks; used to keep the
  // raw propagated matrix so that its defects can be reported.
  static QuantumState density_unchecked(const BasisSpec& basis, DenseMatrix rho) {
    if (rho.rows() != basis.dimension() || rho.cols() != basis.dimension()) {
      throw ValidationError("QuantumState::density_unchecked: wrong matrix shape");
    }
    return QuantumState(basis, Kind::density, StateVector(), std::move(rho));
  }

  static QuantumState basis_state(const BasisSpec& basis, int photons, int excitations) {
    StateVector psi = StateVector::Zero(basis.dimension());
    psi(basis.index(photons, excitations)) = 1.0;
    return pure(basis, std::move(psi), false);
  }

  Kind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == Kind::pure; }
  const BasisSpec& basis() const noexcept { return basis_; }

  const StateVector& amplitudes() const {
    if (kind_ != Kind::pure) throw ValidationError("QuantumState::amplitudes: state is a density matrix");
    return psi_;
  }

  const DenseMatrix& matrix() const {
    if (kind_ != Kind::density) throw ValidationError("QuantumState::matrix: state is pure");
    return rho_;
  }

  QuantumState to_density() const {
    if (kind_ == Kind::density) return *this;
    return QuantumState(basis_, Kind::density, StateVector(), psi_ * psi_.adjoint());
  }

  // Squared norm for pure states, trace for density matrices.
  double norm_or_trace() const {
    return kind_ == Kind::pure ? psi_.squaredNorm() : rho_.trace().real();
  }

  double population(Index k) const {
    return kind_ == Kind::pure ? std::norm(psi_(k)) : rho_(k, k).real();
  }

 private:
  QuantumState(BasisSpec b, Kind k, StateVector psi, DenseMatrix rho)
      : basis_(std::move(b)), kind_(k), psi_(std::move(psi)), rho_(std::move(rho)) {}

  BasisSpec basis_;
  Kind kind_;
  StateVector psi_;
  DenseMatrix rho_;
};

enum class SpinOp { jx, jy, jz, j_plus, j_minus, j_plus_sq, j_minus_sq };
enum class PhotonOp { a, a_dag, number };

namespace detail {

// Lifts a spin-sector matrix S to I_fock (x) S under photon-major ordering.
inline SparseMatrix lift_spin(const BasisSpec& basis, const std::vector<Triplet>& spin_entries) {
  std::vector<Triplet> t;
  t.reserve(spin_entries.size() * static_cast<std::size_t>(basis.fock_dim()));
  for (int n = 0; n <= basis.fock_cutoff(); ++n) {
    const Index off = static_cast<Index>(n) * basis.spin_dim();
    for (const auto& e : spin_entries) t.emplace_back(off + e.row(), off + e.col(), e.value());
  }
  SparseMatrix m(basis.dimension(), basis.dimension());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline SparseMatrix lift_photon(const BasisSpec& basis, const std::vector<Triplet>& fock_entries) {
  std::vector<Triplet> t;
  t.reserve(fock_entries.size() * static_cast<std::size_t>(basis.spin_dim()));
  const Index s = basis.spin_dim();
  for (const auto& e : fock_entries) {
    for (Index k = 0; k < s; ++k) t.emplace_back(e.row() * s + k, e.col() * s + k, e.value());
  }
  SparseMatrix m(basis.dimension(), basis.dimension());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// <k+1| J+ |k> with m = k - j: sqrt(j(j+1) - m(m+1)) = sqrt((N-k)(k+1)).
inline double raise_element(int n_atoms, int k) {
  return std::sqrt(static_cast<double>(n_atoms - k) * static_cast<double>(k + 1));
}

}  // namespace detail

inline OperatorMatrix make_collective_spin(const BasisSpec& basis, SpinOp which) {
  const int n = basis.n_atoms();
  std::vector<Triplet> e;
  switch (which) {
    case SpinOp::jz:
      for (int k = 0; k <= n; ++k) {
        if (const double m = basis.magnetic_number(k); m != 0.0) e.emplace_back(k, k, m);
      }
      break;
    case SpinOp::j_plus:
      for (int k = 0; k < n; ++k) e.emplace_back(k + 1, k, detail::raise_element(n, k));
      break;
    case SpinOp::j_minus:
      for (int k = 0; k < n; ++k) e.emplace_back(k, k + 1, detail::raise_element(n, k));
      break;
    case SpinOp::jx:
      for (int k = 0; k < n; ++k) {
        const double v = 0.5 * detail::raise_element(n, k);
        e.emplace_back(k + 1, k, v);
        e.emplace_back(k, k + 1, v);
      }
      break;
    case SpinOp::jy:
      // Jy = (J+ - J-) / (2i)
      for (int k = 0; k < n; ++k) {
        const double v = 0.5 * detail::raise_element(n, k);
        e.emplace_back(k + 1, k, cplx(0.0, -v));
        e.emplace_back(k, k + 1, cplx(0.0, v));
      }
      break;
    case SpinOp::j_plus_sq:
      for (int k = 0; k + 2 <= n; ++k) {
        e.emplace_back(k + 2, k, detail::raise_element(n, k) * detail::raise_element(n, k + 1));
      }
      break;
    case SpinOp::j_minus_sq:
      for (int k = 0; k + 2 <= n; ++k) {
        e.emplace_back(k, k + 2, detail::raise_element(n, k) * detail::raise_element(n, k + 1));
      }
      break;
  }
  const bool herm = which == SpinOp::jx || which == SpinOp::jy || which == SpinOp::jz;
  return {basis, detail::lift_spin(basis, e), herm};
}

inline OperatorMatrix make_photon(const BasisSpec& basis, PhotonOp which) {
  std::vector<Triplet> e;
  for (int n = 1; n <= basis.fock_cutoff(); ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    switch (which) {
      case PhotonOp::a:
        e.emplace_back(n - 1, n, s);
        break;
      case PhotonOp::a_dag:
        e.emplace_back(n, n - 1, s);
        break;
      case PhotonOp::number:
        e.emplace_back(n, n, static_cast<double>(n));
        break;
    }
  }
  return {basis, detail::lift_photon(basis, e), which == PhotonOp::number};
}

// exp(i pi (a^dag a + Jz + j)) = diag((-1)^(n + k)).
inline OperatorMatrix make_parity(const BasisSpec& basis) {
  std::vector<Triplet> t;
  for (Index i = 0; i < basis.dimension(); ++i) {
    const auto [n, k] = basis.labels(i);
    t.emplace_back(i, i, ((n + k) % 2 == 0) ? 1.0 : -1.0);
  }
  SparseMatrix m(basis.dimension(), basis.dimension());
  m.setFromTriplets(t.begin(), t.end());
  return {basis, std::move(m), true};
}

// Same operators on the full 2^N qubit space (times Fock space) for N <= 3.
// Product index: n * 2^N + q, bit i of q set when qubit i is excited.
// The isometry maps Dicke-basis vectors into the product basis.
struct BruteForceEmbedding {
  BasisSpec dicke;
  Index qubit_dim;
  Index dimension;
  SparseMatrix jx, jy, jz, j_plus, j_minus;
  SparseMatrix a, a_dag, number;
  SparseMatrix isometry;   // dimension x dicke.dimension()
  SparseMatrix projector;  // isometry * isometry^dagger

  // V^dagger M V as an operator on the Dicke basis.
  OperatorMatrix project(const SparseMatrix& full, bool hermitian = false) const {
    SparseMatrix p = SparseMatrix(isometry.adjoint()) * full * isometry;
    return {dicke, std::move(p), hermitian};
  }

  // Leakage of M out of the symmetric sector: max |(1 - P) M P|.
  double leakage(const SparseMatrix& full) const {
    SparseMatrix id(dimension, dimension);
    id.setIdentity();
    DenseMatrix d = DenseMatrix(SparseMatrix(id - projector) * full * projector);
    return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  }
};

inline BruteForceEmbedding brute_force_embed(int n_atoms, int fock_cutoff) {
  if (n_atoms < 1 || n_atoms > 3) throw ValidationError("brute_force_embed: supports 1 <= N <= 3 only");
  BasisSpec dicke(n_atoms, fock_cutoff);
  const Index q_dim = Index{1} << n_atoms;
  const Index f_dim = fock_cutoff + 1;
  const Index dim = q_dim * f_dim;

  auto lift_qubits = [&](const std::vector<Triplet>& q) {
    std::vector<Triplet> t;
    for (Index n = 0; n < f_dim; ++n) {
      for (const auto& e : q) t.emplace_back(n * q_dim + e.row(), n * q_dim + e.col(), e.value());
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };

  std::vector<Triplet> sx, sy, sz, sp, sm;
  for (Index q = 0; q < q_dim; ++q) {
    for (int i = 0; i < n_atoms; ++i) {
      const Index bit = Index{1} << i;
      const bool up = (q & bit) != 0;
      sz.emplace_back(q, q, up ? 0.5 : -0.5);
      const Index flipped = q ^ bit;
      sx.emplace_back(flipped, q, 0.5);
      // sigma_y / 2: <e|sy|g> = -i/2, <g|sy|e> = i/2
      sy.emplace_back(flipped, q, up ? cplx(0.0, 0.5) : cplx(0.0, -0.5));
      if (!up) {
        sp.emplace_back(flipped, q, 1.0);
      } else {
        sm.emplace_back(flipped, q, 1.0);
      }
    }
  }

  std::vector<Triplet> ta, tad, tn;
  for (Index n = 1; n < f_dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    for (Index q = 0; q < q_dim; ++q) {
      ta.emplace_back((n - 1) * q_dim + q, n * q_dim + q, s);
      tad.emplace_back(n * q_dim + q, (n - 1) * q_dim + q, s);
      tn.emplace_back(n * q_dim + q, n * q_dim + q, static_cast<double>(n));
    }
  }
  auto from_triplets = [&](const std::vector<Triplet>& t) {
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };

  // Dicke |k> = C(N,k)^(-1/2) sum over bit strings with k excitations.
  std::vector<Triplet> iso;
  for (Index n = 0; n < f_dim; ++n) {
    for (int k = 0; k <= n_atoms; ++k) {
      std::vector<Index> members;
      for (Index q = 0; q < q_dim; ++q) {
        if (std::popcount(static_cast<std::uint64_t>(q)) == k) members.push_back(q);
      }
      const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
      for (Index q : members) iso.emplace_back(n * q_dim + q, dicke.index(static_cast<int>(n), k), amp);
    }
  }
  SparseMatrix v(dim, dicke.dimension());
  v.setFromTriplets(iso.begin(), iso.end());

  BruteForceEmbedding out{dicke,
                          q_dim,
                          dim,
                          lift_qubits(sx),
                          lift_qubits(sy),
                          lift_qubits(sz),
                          lift_qubits(sp),
                          lift_qubits(sm),
                          from_triplets(ta),
                          from_triplets(tad),
                          from_triplets(tn),
                          v,
                          SparseMatrix(v * SparseMatrix(v.adjoint()))};
  return out;
}

// Matrix-market coordinate dump. Header lines start with '%'; the size line
// is "rows cols nnz"; each entry line is "row col re im" with 1-based indices
// in row-major order, values printed with 17 significant digits.
inline void write_matrix_market(std::ostream& os, const OperatorMatrix& op) {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << "% dickesq operator n_atoms=" << op.basis.n_atoms() << " fock_cutoff=" << op.basis.fock_cutoff()
     << " ordering=photon-major\n";
  os << op.dimension() << ' ' << op.dimension() << ' ' << op.matrix.nonZeros() << '\n';
  os << std::setprecision(17);
  for (Index r = 0; r < op.matrix.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(op.matrix, r); it; ++it) {
      os << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
}

}  // namespace dickesq
