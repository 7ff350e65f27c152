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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dickesq/hilbert.hpp"
#include "dickesq/models.hpp"

namespace dickesq {

// Dense diagonalization up to this dimension, restarted Lanczos above it.
inline constexpr Index kSparseEigenThreshold = 2000;

enum class EigenMethod { automatic, dense, lanczos };

struct EigenPairs {
  Eigen::VectorXd values;  // ascending
  DenseMatrix vectors;     // columns; empty when not requested
  double max_residual = 0.0;
  double operator_norm = 0.0;
  bool lanczos = false;
};

namespace detail {

// Induced infinity norm, an upper bound of the spectral norm.
inline double infinity_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (Index r = 0; r < m.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

inline bool purely_real(const SparseMatrix& m) {
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.value().imag() != 0.0) return false;
    }
  }
  return true;
}

inline EigenPairs dense_eigen(const SparseMatrix& h, Index n_levels) {
  EigenPairs out;
  if (purely_real(h)) {
    const Eigen::MatrixXd hr = DenseMatrix(h).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hr);
    if (es.info() != Eigen::Success) throw NumericalError("eigenspectrum: dense solver failed");
    out.values = es.eigenvalues().head(n_levels);
    out.vectors = es.eigenvectors().leftCols(n_levels).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es{DenseMatrix(h)};
    if (es.info() != Eigen::Success) throw NumericalError("eigenspectrum: dense solver failed");
    out.values = es.eigenvalues().head(n_levels);
    out.vectors = es.eigenvectors().leftCols(n_levels);
  }
  return out;
}

// Thick-restart Krylov iteration with full reorthogonalization. After each
// Rayleigh-Ritz step the wanted Ritz vectors are kept and the subspace is
// extended from the residual of the least converged one, which spans the same
// space as the next Lanczos vector in exact arithmetic.
inline EigenPairs lanczos_eigen(const SparseMatrix& h, Index n_levels, double norm) {
  const Index dim = h.rows();
  const Index max_basis = std::min<Index>(dim, std::max<Index>(2 * n_levels + 40, 80));
  const Index keep = std::min<Index>(max_basis / 2, n_levels + 10);
  const double tol = 1e-11 * std::max(norm, 1e-300);

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> dist;
  DenseMatrix v(dim, max_basis), w(dim, max_basis);
  StateVector start(dim);
  for (Index i = 0; i < dim; ++i) start(i) = cplx(dist(rng), dist(rng));
  v.col(0) = start.normalized();
  w.col(0) = h * v.col(0);
  Index size = 1;

  auto orthonormalize_into = [&](StateVector x, Index slot) {
    for (int pass = 0; pass < 2; ++pass) x -= v.leftCols(slot) * (v.leftCols(slot).adjoint() * x);
    const double nx = x.norm();
    if (!(nx > 1e-13)) {
      // Invariant subspace reached; continue with a fresh random direction.
      for (Index i = 0; i < dim; ++i) x(i) = cplx(dist(rng), dist(rng));
      for (int pass = 0; pass < 2; ++pass) x -= v.leftCols(slot) * (v.leftCols(slot).adjoint() * x);
      v.col(slot) = x.normalized();
    } else {
      v.col(slot) = x / nx;
    }
    w.col(slot) = h * v.col(slot);
  };

  EigenPairs out;
  for (int restart = 0; restart < 2000; ++restart) {
    while (size < max_basis) {
      orthonormalize_into(w.col(size - 1), size);
      ++size;
    }
    DenseMatrix t = v.leftCols(size).adjoint() * w.leftCols(size);
    t = 0.5 * (t + t.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(t);
    const DenseMatrix ritz_v = v.leftCols(size) * es.eigenvectors().leftCols(keep);
    const DenseMatrix ritz_w = w.leftCols(size) * es.eigenvectors().leftCols(keep);
    double worst = 0.0;
    Index worst_idx = 0;
    for (Index i = 0; i < n_levels; ++i) {
      const double r = (ritz_w.col(i) - es.eigenvalues()(i) * ritz_v.col(i)).norm();
      if (r > worst) {
        worst = r;
        worst_idx = i;
      }
    }
    if (worst <= tol || size == dim) {
      out.values = es.eigenvalues().head(n_levels);
      out.vectors = ritz_v.leftCols(n_levels);
      return out;
    }
    const StateVector residual = ritz_w.col(worst_idx) - es.eigenvalues()(worst_idx) * ritz_v.col(worst_idx);
    v.leftCols(keep) = ritz_v;
    w.leftCols(keep) = ritz_w;
    size = keep;
    orthonormalize_into(residual, size);
    ++size;
  }
  throw NumericalError("eigenspectrum: Lanczos iteration did not converge");
}

}  // namespace detail

// Lowest n_levels eigenpairs of a Hermitian operator, ascending. Every pair
// satisfies ||H v - lambda v|| <= 1e-9 ||H||.
inline EigenPairs eigenspectrum(const OperatorMatrix& h, Index n_levels, EigenMethod method = EigenMethod::automatic) {
  if (n_levels < 1 || n_levels > h.dimension()) {
    throw ValidationError("eigenspectrum: n_levels must lie in [1, dimension]");
  }
  if (!h.is_hermitian(1e-12)) throw ValidationError("eigenspectrum: operator is not Hermitian");
  const double norm = detail::infinity_norm(h.matrix);
  const bool use_lanczos = method == EigenMethod::lanczos ||
                           (method == EigenMethod::automatic && h.dimension() > kSparseEigenThreshold);
  EigenPairs out = use_lanczos ? detail::lanczos_eigen(h.matrix, n_levels, norm) : detail::dense_eigen(h.matrix, n_levels);
  out.lanczos = use_lanczos;
  out.operator_norm = norm;
  for (Index i = 0; i < n_levels; ++i) {
    const double r = (h.matrix * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  if (out.max_residual > 1e-9 * std::max(norm, 1e-300)) {
    throw NumericalError("eigenspectrum: residual check failed");
  }
  return out;
}

// Worker count from DICKESQ_THREADS, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("DICKESQ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) on up to worker_count() threads.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw ValidationError("linspace: need at least two points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

using HamiltonianFamily = std::function<OperatorMatrix(double)>;

// Levels per grid point, sorted ascending, ground-subtracted.
struct LevelScan {
  std::string variable;
  std::vector<double> grid;
  Eigen::MatrixXd levels;  // grid.size() x n_levels
  std::optional<SystemParams> params;
};

inline LevelScan scan_levels(const std::vector<double>& grid, const HamiltonianFamily& family, int n_levels,
                             std::string variable = "omega_c/omega_q",
                             std::optional<SystemParams> params = std::nullopt) {
  if (grid.empty()) throw ValidationError("scan_levels: empty grid");
  LevelScan scan{std::move(variable), grid, Eigen::MatrixXd(static_cast<Index>(grid.size()), n_levels),
                 std::move(params)};
  parallel_for(grid.size(), [&](std::size_t i) {
    const EigenPairs ep = eigenspectrum(family(grid[i]), n_levels);
    scan.levels.row(static_cast<Index>(i)) = (ep.values.array() - ep.values(0)).transpose();
  });
  return scan;
}

// Scan of omega_c / omega_q for one model.
inline HamiltonianFamily cavity_family(ModelKind model, const SystemParams& p, const BasisSpec& basis,
                                       std::optional<double> coupling = std::nullopt) {
  return [model, p, basis, coupling](double x) {
    return build_hamiltonian(model, p.with_omega_c(x * p.omega_q()), basis, coupling);
  };
}

struct LevelPair {
  int lower = 2;
  int upper = 3;
};

struct CrossingReport {
  bool found = false;
  double location = 0.0;
  double gap = 0.0;
  LevelPair pair;
  std::optional<double> analytic_gap;
  int iterations = 0;
  std::string note;
};

struct CrossingOptions {
  double rel_tol = 1e-6;
  // Refinement also continues until slope * bracket <= resolution * gap.
  double gap_resolution = 1e-4;
  int max_iterations = 400;
};

// Minimum of E_upper - E_lower: coarse minimum on the scan grid, then
// golden-section refinement on the neighbouring bracket. A minimum at the scan
// edge is reported as no crossing.
inline CrossingReport find_avoided_crossing(const LevelScan& scan, LevelPair pair, const HamiltonianFamily& family,
                                            const CrossingOptions& opt = {}) {
  if (pair.lower < 0 || pair.upper <= pair.lower || pair.upper >= scan.levels.cols()) {
    throw ValidationError("find_avoided_crossing: invalid level pair");
  }
  const std::size_t n = scan.grid.size();
  if (n < 3) throw ValidationError("find_avoided_crossing: need at least three grid points");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scan.grid[a] < scan.grid[b]; });
  std::vector<double> xs(n), gaps(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = scan.grid[order[i]];
    gaps[i] = scan.levels(static_cast<Index>(order[i]), pair.upper) - scan.levels(static_cast<Index>(order[i]), pair.lower);
  }
  const auto it = std::min_element(gaps.begin(), gaps.end());
  const std::size_t k = static_cast<std::size_t>(it - gaps.begin());

  CrossingReport rep;
  rep.pair = pair;
  rep.location = xs[k];
  rep.gap = gaps[k];
  if (k == 0 || k + 1 == n) {
    rep.note = "gap is monotone over the scan range or minimal at its edge; no avoided crossing";
    return rep;
  }

  auto gap_at = [&](double x) {
    const EigenPairs ep = eigenspectrum(family(x), pair.upper + 1);
    return ep.values(pair.upper) - ep.values(pair.lower);
  };
  const double slope = std::max(std::abs(gaps[k + 1] - gaps[k]) / (xs[k + 1] - xs[k]),
                                std::abs(gaps[k] - gaps[k - 1]) / (xs[k] - xs[k - 1]));
  constexpr double inv_phi = 0.6180339887498949;
  double a = xs[k - 1], b = xs[k + 1];
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = gap_at(c), fd = gap_at(d);
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    const double best = std::min(fc, fd);
    const double width = b - a;
    const bool located = width <= opt.rel_tol * std::max(std::abs(0.5 * (a + b)), 1e-300);
    const bool resolved = slope * width <= opt.gap_resolution * std::max(best, 0.0);
    if ((located && resolved) || width <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(0.5 * (a + b))) {
      break;
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = gap_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = gap_at(d);
    }
  }
  rep.found = true;
  rep.iterations = iter;
  if (fc <= fd) {
    rep.location = c;
    rep.gap = std::max(fc, 0.0);
  } else {
    rep.location = d;
    rep.gap = std::max(fd, 0.0);
  }
  return rep;
}

// First pair crossing (levels 2, 3) of a model as a function of omega_c/omega_q.
inline CrossingReport locate_pair_resonance(ModelKind model, const SystemParams& p, const BasisSpec& basis,
                                            double lo = 1.7, double hi = 2.3, int n_grid = 121,
                                            const CrossingOptions& opt = {}) {
  const HamiltonianFamily family = cavity_family(model, p, basis);
  const LevelScan scan = scan_levels(linspace(lo, hi, n_grid), family, 4, "omega_c/omega_q", p);
  CrossingReport rep = find_avoided_crossing(scan, {2, 3}, family, opt);
  if (p.n_atoms() >= 2) rep.analytic_gap = std::abs(splitting_energy(p));
  return rep;
}

inline void write_level_scan_csv(std::ostream& os, const LevelScan& scan) {
  os << "scan_value";
  for (Index c = 0; c < scan.levels.cols(); ++c) os << ",E" << (c + 1);
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < scan.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e", scan.grid[i]);
    os << buf;
    for (Index c = 0; c < scan.levels.cols(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.12e", scan.levels(static_cast<Index>(i), c));
      os << buf;
    }
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const CrossingReport& r) {
  nlohmann::ordered_json j;
  j["found"] = r.found;
  j["location"] = r.location;
  j["gap"] = r.gap;
  j["pair"] = {r.pair.lower, r.pair.upper};
  j["analytic_gap"] = r.analytic_gap ? nlohmann::ordered_json(*r.analytic_gap) : nlohmann::ordered_json(nullptr);
  j["iterations"] = r.iterations;
  j["note"] = r.note;
  return j;
}

}  // namespace dickesq
