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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dickesq/hilbert.hpp"
#include "dickesq/lindblad.hpp"
#include "dickesq/models.hpp"
#include "dickesq/observables.hpp"
#include "dickesq/ode.hpp"
#include "dickesq/spectrum.hpp"

namespace dickesq {

// |psi(0)> = cos(varphi)|0,j,-j> + sin(varphi)|1,j,-j>, varphi in [0, pi/2].
struct SinglePhotonInit {
  double varphi = 0.0;

  void validate() const {
    if (!(varphi >= 0.0 && varphi <= 0.5 * std::numbers::pi)) {
      throw ValidationError("SinglePhotonInit: varphi must lie in [0, pi/2]");
    }
  }

  QuantumState bare_state(const BasisSpec& basis) const {
    validate();
    if (basis.fock_cutoff() < 1) throw ValidationError("SinglePhotonInit: needs fock_cutoff >= 1");
    StateVector psi = StateVector::Zero(basis.dimension());
    psi(basis.index(0, 0)) = std::cos(varphi);
    psi(basis.index(1, 0)) = std::sin(varphi);
    return QuantumState::pure(basis, std::move(psi));
  }
};

struct IntegrationOptions {
  OdeOptions ode{};
  int snapshot_stride = 0;  // 0 keeps observables only
  double leakage_threshold = 1e-6;
};

struct EvolutionProblem {
  ModelKind model = ModelKind::full;
  SystemParams params;
  BasisSpec basis;
  DissipationParams dissipation{};
  DriveSpec drive = DriveSpec::none();
  QuantumState initial;
  TimeGrid grid{};
  std::optional<double> coupling{};
  // Replaces the model Hamiltonian when set (must live on basis).
  std::optional<OperatorMatrix> hamiltonian{};
  IntegrationOptions options{};
};

// xi2 uses the in-plane mode, xi2_general the mode transverse to <J>; both
// are NaN where the mean spin vanishes.
struct ObservableRecord {
  double t = 0.0;
  double photon_number = 0.0;
  double spin_excitation = 0.0;
  double xi2 = std::numeric_limits<double>::quiet_NaN();
  double xi2_general = std::numeric_limits<double>::quiet_NaN();
  double trace_defect = 0.0;
  double hermiticity_defect = 0.0;
};

struct Snapshot {
  std::size_t sample;
  double t;
  QuantumState state;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ObservableRecord> records;
  std::vector<Snapshot> snapshots;
  std::optional<QuantumState> final_state;
  std::vector<std::string> warnings;
  OdeStats stats;
  double max_trace_defect = 0.0;
  double max_hermiticity_defect = 0.0;
  double max_fock_edge_population = 0.0;
  double final_min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

class TrajectoryRecorder {
 public:
  explicit TrajectoryRecorder(const BasisSpec& basis)
      : basis_(basis),
        spin_(basis),
        number_(make_photon(basis, PhotonOp::number).matrix),
        jz_(make_collective_spin(basis, SpinOp::jz).matrix) {}

  ObservableRecord record(double t, const StateVector& psi, Trajectory& out) const {
    ObservableRecord r;
    r.t = t;
    r.photon_number = psi.dot(number_ * psi).real();
    r.spin_excitation = psi.dot(jz_ * psi).real() + basis_.j();
    r.trace_defect = std::abs(psi.squaredNorm() - 1.0);
    fill_squeezing(spin_.moments(psi), r);
    double edge = 0.0;
    if (basis_.fock_cutoff() >= 1) {
      edge = psi.segment(basis_.index(basis_.fock_cutoff(), 0), basis_.spin_dim()).squaredNorm();
    }
    update(r, edge, out);
    return r;
  }

  ObservableRecord record(double t, const DenseMatrix& rho, Trajectory& out) const {
    ObservableRecord r;
    r.t = t;
    r.photon_number = trace_product(number_, rho).real();
    r.spin_excitation = trace_product(jz_, rho).real() + basis_.j();
    r.trace_defect = std::abs(rho.trace() - cplx(1.0, 0.0));
    r.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    fill_squeezing(spin_.moments(rho), r);
    double edge = 0.0;
    if (basis_.fock_cutoff() >= 1) {
      const Index off = basis_.index(basis_.fock_cutoff(), 0);
      for (Index k = 0; k < basis_.spin_dim(); ++k) edge += rho(off + k, off + k).real();
    }
    update(r, edge, out);
    return r;
  }

 private:
  void fill_squeezing(const SpinMoments& m, ObservableRecord& r) const {
    if (m.mean.norm() > 1e-9 * basis_.n_atoms()) {
      r.xi2 = wineland_xi2(m, basis_.n_atoms(), SqueezingMode::xy_plane).xi2;
      r.xi2_general = wineland_xi2(m, basis_.n_atoms(), SqueezingMode::general).xi2;
    }
  }

  static void update(const ObservableRecord& r, double edge, Trajectory& out) {
    out.max_trace_defect = std::max(out.max_trace_defect, r.trace_defect);
    out.max_hermiticity_defect = std::max(out.max_hermiticity_defect, r.hermiticity_defect);
    out.max_fock_edge_population = std::max(out.max_fock_edge_population, edge);
  }

  BasisSpec basis_;
  SpinObservables spin_;
  SparseMatrix number_;
  SparseMatrix jz_;
};

inline OperatorMatrix problem_hamiltonian(const EvolutionProblem& prob) {
  detail::require_matching_atoms(prob.params, prob.basis, "EvolutionProblem");
  require_same_basis(prob.initial.basis(), prob.basis, "EvolutionProblem initial state");
  prob.grid.validate();
  if (prob.hamiltonian) {
    require_same_basis(prob.hamiltonian->basis, prob.basis, "EvolutionProblem hamiltonian");
    return *prob.hamiltonian;
  }
  return build_hamiltonian(prob.model, prob.params, prob.basis, prob.coupling);
}

inline void finish_warnings(const EvolutionProblem& prob, Trajectory& out) {
  if (prob.basis.fock_cutoff() >= 1 && out.max_fock_edge_population >= prob.options.leakage_threshold) {
    std::ostringstream os;
    os << "Fock cutoff leakage: population of |n_max=" << prob.basis.fock_cutoff()
       << "> reached " << out.max_fock_edge_population << " (threshold " << prob.options.leakage_threshold << ")";
    out.warnings.push_back(os.str());
  }
}

inline bool want_snapshot(const IntegrationOptions& opt, std::size_t i, std::size_t n) {
  if (opt.snapshot_stride <= 0) return false;
  return i % static_cast<std::size_t>(opt.snapshot_stride) == 0 || i + 1 == n;
}

inline DriveFunction drive_function(const DriveSpec& d) {
  if (!d.active()) return {};
  return [d](double t) { return d.value(t); };
}

}  // namespace detail

// Closed-system evolution of a pure state. Stored states are renormalized;
// the norm drift is reported as trace_defect.
inline Trajectory evolve_pure(const EvolutionProblem& prob) {
  if (!prob.dissipation.lossless()) throw ValidationError("evolve_pure: dissipation must be zero on the pure-state path");
  if (!prob.initial.is_pure()) throw ValidationError("evolve_pure: initial state must be pure");
  const OperatorMatrix h = detail::problem_hamiltonian(prob);
  SchrodingerGenerator gen(h.matrix, detail::position_quadrature(prob.basis), detail::drive_function(prob.drive));

  Trajectory out;
  out.times = prob.grid.times();
  out.records.reserve(out.times.size());
  const detail::TrajectoryRecorder rec(prob.basis);
  const std::size_t n = out.times.size();
  out.stats = integrate_samples<StateVector>(
      [&gen](double t, const StateVector& y, StateVector& dy) { gen(t, y, dy); }, prob.initial.amplitudes(),
      out.times, prob.options.ode, [&](std::size_t i, double t, const StateVector& psi) {
        out.records.push_back(rec.record(t, psi, out));
        if (detail::want_snapshot(prob.options, i, n)) {
          out.snapshots.push_back({i, t, QuantumState::pure(prob.basis, psi)});
        }
        if (i + 1 == n) out.final_state = QuantumState::pure(prob.basis, psi);
      });
  detail::finish_warnings(prob, out);
  return out;
}

// rho' = -i[H(t), rho] + kappa D[a] + (gamma/N) D[J-]
inline Trajectory evolve_lindblad(const EvolutionProblem& prob) {
  const OperatorMatrix h = detail::problem_hamiltonian(prob);
  const double n_atoms = prob.basis.n_atoms();
  const std::vector<JumpOperator> jumps{
      {make_photon(prob.basis, PhotonOp::a).matrix, prob.dissipation.kappa},
      {make_collective_spin(prob.basis, SpinOp::j_minus).matrix, prob.dissipation.gamma / n_atoms}};
  LindbladGenerator gen(h.matrix, jumps, detail::position_quadrature(prob.basis), detail::drive_function(prob.drive));

  Trajectory out;
  out.times = prob.grid.times();
  out.records.reserve(out.times.size());
  const detail::TrajectoryRecorder rec(prob.basis);
  const std::size_t n = out.times.size();
  DenseMatrix rho0 = prob.initial.to_density().matrix();
  out.stats = integrate_samples<DenseMatrix>(
      [&gen](double t, const DenseMatrix& y, DenseMatrix& dy) { gen(t, y, dy); }, std::move(rho0), out.times,
      prob.options.ode, [&](std::size_t i, double t, const DenseMatrix& rho) {
        out.records.push_back(rec.record(t, rho, out));
        if (detail::want_snapshot(prob.options, i, n)) {
          out.snapshots.push_back({i, t, QuantumState::density_unchecked(prob.basis, rho)});
        }
        if (i + 1 == n) {
          out.final_state = QuantumState::density_unchecked(prob.basis, rho);
          const DenseMatrix herm = 0.5 * (rho + rho.adjoint());
          Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
          out.final_min_eigenvalue = es.eigenvalues().minCoeff();
        }
      });
  detail::finish_warnings(prob, out);
  return out;
}

struct CwRunResult {
  Trajectory trajectory;
  bool stationary = false;
  double steady_photon_number = 0.0;
  double steady_spin_excitation = 0.0;
  double relative_drift = 0.0;
};

// Long continuous-wave run. Stationarity compares the means of the last two
// windows (each window_fraction of the samples) for both populations.
inline CwRunResult cw_drive_run(const EvolutionProblem& prob, double window_fraction = 0.1, double tolerance = 2e-2) {
  if (prob.drive.kind() != DriveSpec::Kind::continuous_wave) {
    throw ValidationError("cw_drive_run: drive must be continuous_wave");
  }
  CwRunResult res{evolve_lindblad(prob)};
  const auto& rec = res.trajectory.records;
  const std::size_t w = std::max<std::size_t>(2, static_cast<std::size_t>(window_fraction * rec.size()));
  if (rec.size() < 2 * w) throw ValidationError("cw_drive_run: too few samples for the stationarity windows");
  auto window_mean = [&](std::size_t from, auto field) {
    double s = 0.0;
    for (std::size_t i = from; i < from + w; ++i) s += field(rec[i]);
    return s / static_cast<double>(w);
  };
  auto photons = [](const ObservableRecord& r) { return r.photon_number; };
  auto spins = [](const ObservableRecord& r) { return r.spin_excitation; };
  const std::size_t last = rec.size() - w, prev = rec.size() - 2 * w;
  res.steady_photon_number = window_mean(last, photons);
  res.steady_spin_excitation = window_mean(last, spins);
  auto drift = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };
  res.relative_drift = std::max(drift(res.steady_photon_number, window_mean(prev, photons)),
                                drift(res.steady_spin_excitation, window_mean(prev, spins)));
  res.stationary = res.relative_drift <= tolerance;
  if (!res.stationary) {
    std::ostringstream os;
    os << "CW run not stationary: relative drift " << res.relative_drift << " between the last two windows";
    res.trajectory.warnings.push_back(os.str());
  }
  return res;
}

struct SinglePhotonSnapshot {
  QuantumState state;
  double photon_number;
  double excited_atoms;
};

// Resonant closed-form exchange at rate `rate`:
// cos(phi)|0,-j> + sin(phi) cos(rate t)|1,-j> - i sin(phi) sin(rate t)|0,-j+2>
inline SinglePhotonSnapshot analytic_single_photon(int n_atoms, double rate, const SinglePhotonInit& init, double t,
                                                   int fock_cutoff = 1) {
  if (n_atoms < 2) throw ValidationError("analytic_single_photon: requires N >= 2");
  init.validate();
  const BasisSpec basis(n_atoms, std::max(fock_cutoff, 1));
  const double c = std::cos(init.varphi), s = std::sin(init.varphi);
  const double cr = std::cos(rate * t), sr = std::sin(rate * t);
  StateVector psi = StateVector::Zero(basis.dimension());
  psi(basis.index(0, 0)) = c;
  psi(basis.index(1, 0)) = s * cr;
  psi(basis.index(0, 2)) = cplx(0.0, -s * sr);
  return {QuantumState::pure(basis, std::move(psi), false), s * s * cr * cr, 2.0 * s * s * sr * sr};
}

// Rate g_eff sqrt(2N(N-1)), the <0,-j+2|H_eff|1,-j> element.
inline SinglePhotonSnapshot analytic_single_photon(const SystemParams& p, const SinglePhotonInit& init, double t,
                                                   int fock_cutoff = 1) {
  if (p.n_atoms() < 2) throw ValidationError("analytic_single_photon: requires N >= 2");
  return analytic_single_photon(p.n_atoms(), pair_exchange_rate(p), init, t, fock_cutoff);
}

// Single-photon superposition built from the interacting eigenstates:
// cos(phi)|G> + sin(phi)(|E2> + |E3>)/sqrt(2), with |E2>, |E3> phased so that
// their overlaps with a^dag|G> are real and positive.
inline QuantumState dressed_single_photon_state(const OperatorMatrix& h, const SinglePhotonInit& init) {
  init.validate();
  const EigenPairs ep = eigenspectrum(h, 4);
  const StateVector ground = ep.vectors.col(0);
  const StateVector photon = make_photon(h.basis, PhotonOp::a_dag).matrix * ground;
  StateVector psi = std::cos(init.varphi) * ground;
  for (int k : {2, 3}) {
    StateVector v = ep.vectors.col(k);
    const cplx ov = v.dot(photon);
    if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
    psi += std::sin(init.varphi) / std::sqrt(2.0) * v;
  }
  return QuantumState::pure(h.basis, std::move(psi));
}

namespace detail {
inline void put_csv_value(std::ostream& os, double v, bool leading_comma) {
  char buf[64];
  if (std::isnan(v)) {
    std::snprintf(buf, sizeof buf, "%snan", leading_comma ? "," : "");
  } else {
    std::snprintf(buf, sizeof buf, leading_comma ? ",%.12e" : "%.12e", v);
  }
  os << buf;
}
}  // namespace detail

// Columns: t, photon_number, spin_excitation, xi2 [, xi2_general].
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool include_general = false) {
  os << "t,photon_number,spin_excitation,xi2";
  if (include_general) os << ",xi2_general";
  os << '\n';
  for (const auto& r : traj.records) {
    detail::put_csv_value(os, r.t, false);
    detail::put_csv_value(os, r.photon_number, true);
    detail::put_csv_value(os, r.spin_excitation, true);
    detail::put_csv_value(os, r.xi2, true);
    if (include_general) detail::put_csv_value(os, r.xi2_general, true);
    os << '\n';
  }
}

// Binary snapshot dump, little-endian:
//   char[8] "DKSQSTAT", uint32 version = 1, uint32 kind (0 pure, 1 density),
//   int32 n_atoms, int32 fock_cutoff, uint64 count,
//   then per snapshot: float64 t followed by the amplitudes (dim entries) or
//   the column-major density matrix (dim * dim entries), each as float64 re, im.
inline void write_state_dump(std::ostream& os, const BasisSpec& basis, const std::vector<Snapshot>& snaps) {
  const std::uint32_t version = 1;
  const std::uint32_t kind = (!snaps.empty() && !snaps.front().state.is_pure()) ? 1u : 0u;
  const std::int32_t n = basis.n_atoms(), m = basis.fock_cutoff();
  const std::uint64_t count = snaps.size();
  os.write("DKSQSTAT", 8);
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&kind), sizeof kind);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& s : snaps) {
    if ((s.state.is_pure() ? 0u : 1u) != kind) throw ValidationError("write_state_dump: mixed state kinds");
    os.write(reinterpret_cast<const char*>(&s.t), sizeof s.t);
    const cplx* data = s.state.is_pure() ? s.state.amplitudes().data() : s.state.matrix().data();
    const Index len = s.state.is_pure() ? basis.dimension() : basis.dimension() * basis.dimension();
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len * sizeof(cplx)));
  }
}

}  // namespace dickesq
