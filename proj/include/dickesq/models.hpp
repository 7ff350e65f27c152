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

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dickesq/hilbert.hpp"

namespace dickesq {

namespace detail {
inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}
}  // namespace detail

// Energies in units where omega_q = 1 by convention. omega_q and theta are
// always derived from (delta, epsilon).
class SystemParams {
 public:
  SystemParams(int n_atoms, double delta, double epsilon, double g, double omega_c)
      : n_atoms_(n_atoms), delta_(delta), epsilon_(epsilon), g_(g), omega_c_(omega_c) {
    detail::require_finite(delta, "delta");
    detail::require_finite(epsilon, "epsilon");
    detail::require_finite(g, "g");
    detail::require_finite(omega_c, "omega_c");
    if (n_atoms < 1) throw ValidationError("SystemParams: n_atoms must be >= 1");
    if (g < 0.0) throw ValidationError("SystemParams: g must be >= 0");
    if (!(omega_c > 0.0)) throw ValidationError("SystemParams: omega_c must be > 0");
  }

  static SystemParams from_angle(int n_atoms, double omega_q, double theta, double g, double omega_c) {
    if (!(omega_q > 0.0)) throw ValidationError("SystemParams: omega_q must be > 0");
    return {n_atoms, omega_q * std::cos(theta), omega_q * std::sin(theta), g, omega_c};
  }

  int n_atoms() const noexcept { return n_atoms_; }
  double delta() const noexcept { return delta_; }
  double epsilon() const noexcept { return epsilon_; }
  double g() const noexcept { return g_; }
  double omega_c() const noexcept { return omega_c_; }

  double omega_q() const noexcept { return std::hypot(delta_, epsilon_); }
  double theta() const noexcept { return std::atan2(epsilon_, delta_); }
  double sin_theta() const noexcept { return epsilon_ / omega_q(); }
  double cos_theta() const noexcept { return delta_ / omega_q(); }

  SystemParams with_omega_c(double w) const { return {n_atoms_, delta_, epsilon_, g_, w}; }
  SystemParams with_g(double g) const { return {n_atoms_, delta_, epsilon_, g, omega_c_}; }
  SystemParams with_n_atoms(int n) const { return {n, delta_, epsilon_, g_, omega_c_}; }

 private:
  int n_atoms_;
  double delta_;
  double epsilon_;
  double g_;
  double omega_c_;
};

struct DissipationParams {
  double kappa = 0.0;
  double gamma = 0.0;

  DissipationParams() = default;
  DissipationParams(double k, double gm) : kappa(k), gamma(gm) {
    if (!(k >= 0.0) || !(gm >= 0.0) || !std::isfinite(k) || !std::isfinite(gm)) {
      throw ValidationError("DissipationParams: rates must be finite and >= 0");
    }
  }
  bool lossless() const noexcept { return kappa == 0.0 && gamma == 0.0; }
};

// F(t) = A * G(t) * cos(omega_d t) for pulses (G normalized to unit area),
// F(t) = A * cos(omega_d t) for continuous wave.
class DriveSpec {
 public:
  enum class Kind { none, gaussian_pulse, continuous_wave };

  static DriveSpec none() { return DriveSpec(Kind::none, 0.0, 0.0, 0.0, 1.0); }

  static DriveSpec gaussian_pulse(double amplitude, double omega_d, double center, double width) {
    if (!(width > 0.0)) throw ValidationError("DriveSpec: pulse width must be > 0");
    detail::require_finite(center, "pulse center");
    return DriveSpec(Kind::gaussian_pulse, amplitude, omega_d, center, width);
  }

  // sigma_t = 20 / omega_q, t0 = 5 sigma_t.
  static DriveSpec default_pulse(double amplitude, double omega_d, double omega_q) {
    const double width = 20.0 / omega_q;
    return gaussian_pulse(amplitude, omega_d, 5.0 * width, width);
  }

  static DriveSpec continuous_wave(double amplitude, double omega_d) {
    return DriveSpec(Kind::continuous_wave, amplitude, omega_d, 0.0, 1.0);
  }

  Kind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  double omega_d() const noexcept { return omega_d_; }
  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }
  bool active() const noexcept { return kind_ != Kind::none && amplitude_ != 0.0; }

  double envelope(double t) const noexcept {
    switch (kind_) {
      case Kind::none:
        return 0.0;
      case Kind::continuous_wave:
        return 1.0;
      case Kind::gaussian_pulse: {
        const double x = (t - center_) / width_;
        return std::exp(-0.5 * x * x) / (width_ * std::sqrt(2.0 * std::numbers::pi));
      }
    }
    return 0.0;
  }

  double value(double t) const noexcept { return amplitude_ * envelope(t) * std::cos(omega_d_ * t); }

 private:
  DriveSpec(Kind k, double amplitude, double omega_d, double center, double width)
      : kind_(k), amplitude_(amplitude), omega_d_(omega_d), center_(center), width_(width) {
    detail::require_finite(amplitude, "drive amplitude");
    detail::require_finite(omega_d, "drive frequency");
    if (amplitude < 0.0) throw ValidationError("DriveSpec: amplitude must be >= 0");
  }

  Kind kind_;
  double amplitude_;
  double omega_d_;
  double center_;
  double width_;
};

// Delta-type three-level atom (levels g, e, s) coupled to one cavity mode.
struct ThreeLevelParams {
  double omega_g = 0.0;
  double omega_e = 0.0;
  double omega_s = 0.0;
  double g_ge = 0.0;
  double g_gs = 0.0;
  double g_es = 0.0;
  double omega_c = 0.0;

  double delta_eg() const noexcept { return omega_e - omega_g - omega_c; }
  double delta_sg() const noexcept { return omega_s - omega_g - omega_c; }
  double delta_se() const noexcept { return omega_s - omega_e - omega_c; }
  double omega_eg() const noexcept { return omega_e - omega_g; }

  // Pairs violating |Delta_mn| >= 10 g_mn.
  std::vector<std::string> dispersive_warnings() const {
    std::vector<std::string> w;
    auto check = [&](double d, double g, const char* name) {
      if (std::abs(d) < 10.0 * std::abs(g)) {
        w.push_back(std::string("three-level pair ") + name + " outside dispersive regime (|Delta| < 10 g)");
      }
    };
    check(delta_eg(), g_ge, "eg");
    check(delta_sg(), g_gs, "sg");
    check(delta_se(), g_es, "se");
    return w;
  }
};

enum class ModelKind { full, rotated, effective, effective_dressed };

inline std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::full:
      return "full";
    case ModelKind::rotated:
      return "rotated";
    case ModelKind::effective:
      return "effective";
    case ModelKind::effective_dressed:
      return "effective_dressed";
  }
  return "unknown";
}

namespace detail {
inline void require_matching_atoms(const SystemParams& p, const BasisSpec& b, const char* where) {
  if (p.n_atoms() != b.n_atoms()) {
    throw ValidationError(std::string(where) + ": basis has N=" + std::to_string(b.n_atoms()) +
                          " but parameters have N=" + std::to_string(p.n_atoms()));
  }
}

inline SparseMatrix position_quadrature(const BasisSpec& b) {
  return SparseMatrix(make_photon(b, PhotonOp::a).matrix + make_photon(b, PhotonOp::a_dag).matrix);
}
}  // namespace detail

// H = Delta Jz + eps Jx + omega_c a^dag a + 2 g (a + a^dag) Jx
inline OperatorMatrix build_full_hamiltonian(const SystemParams& p, const BasisSpec& basis) {
  detail::require_matching_atoms(p, basis, "build_full_hamiltonian");
  const SparseMatrix jx = make_collective_spin(basis, SpinOp::jx).matrix;
  const SparseMatrix jz = make_collective_spin(basis, SpinOp::jz).matrix;
  const SparseMatrix num = make_photon(basis, PhotonOp::number).matrix;
  const SparseMatrix x = detail::position_quadrature(basis);
  SparseMatrix h = p.delta() * jz + p.epsilon() * jx + p.omega_c() * num;
  h += SparseMatrix((2.0 * p.g()) * (x * jx));
  return {basis, std::move(h), true};
}

// H = omega_q Jz + omega_c a^dag a + 2 g (a + a^dag)(cos(theta) Jx + sin(theta) Jz)
inline OperatorMatrix build_rotated_hamiltonian(const SystemParams& p, const BasisSpec& basis) {
  detail::require_matching_atoms(p, basis, "build_rotated_hamiltonian");
  const SparseMatrix jx = make_collective_spin(basis, SpinOp::jx).matrix;
  const SparseMatrix jz = make_collective_spin(basis, SpinOp::jz).matrix;
  const SparseMatrix num = make_photon(basis, PhotonOp::number).matrix;
  const SparseMatrix x = detail::position_quadrature(basis);
  const SparseMatrix axis = p.cos_theta() * jx + p.sin_theta() * jz;
  SparseMatrix h = p.omega_q() * jz + p.omega_c() * num;
  h += SparseMatrix((2.0 * p.g()) * (x * axis));
  return {basis, std::move(h), true};
}

// g_eff = -4 g^3 cos^2(theta) sin(theta) / (3 omega_q^2)
inline double effective_coupling(const SystemParams& p) {
  const double wq = p.omega_q();
  if (!(wq > 0.0)) throw ValidationError("effective_coupling: omega_q must be > 0");
  const double c = p.cos_theta();
  return -4.0 * p.g() * p.g() * p.g() * c * c * p.sin_theta() / (3.0 * wq * wq);
}

// Options for the effective model. The dressed variant adds the bare terms
// omega_q Jz + omega_c a^dag a; the spin frequency may be overridden as the
// single fit parameter absorbing dispersive shifts.
struct EffectiveOptions {
  bool dressed = false;
  std::optional<double> coupling;
  std::optional<double> spin_frequency;
};

// H_eff = g_eff (a J+^2 + a^dag J-^2) [+ omega_q Jz + omega_c a^dag a]
inline OperatorMatrix build_effective_hamiltonian(const SystemParams& p, const BasisSpec& basis,
                                                  const EffectiveOptions& opt = {}) {
  detail::require_matching_atoms(p, basis, "build_effective_hamiltonian");
  const double geff = opt.coupling.value_or(effective_coupling(p));
  const SparseMatrix a = make_photon(basis, PhotonOp::a).matrix;
  const SparseMatrix ad = make_photon(basis, PhotonOp::a_dag).matrix;
  const SparseMatrix jp2 = make_collective_spin(basis, SpinOp::j_plus_sq).matrix;
  const SparseMatrix jm2 = make_collective_spin(basis, SpinOp::j_minus_sq).matrix;
  SparseMatrix h = geff * SparseMatrix(a * jp2 + ad * jm2);
  if (opt.dressed) {
    const double wq = opt.spin_frequency.value_or(p.omega_q());
    h += SparseMatrix(wq * make_collective_spin(basis, SpinOp::jz).matrix +
                      p.omega_c() * make_photon(basis, PhotonOp::number).matrix);
  }
  return {basis, std::move(h), true};
}

inline OperatorMatrix build_hamiltonian(ModelKind model, const SystemParams& p, const BasisSpec& basis,
                                        std::optional<double> coupling = std::nullopt) {
  switch (model) {
    case ModelKind::full:
      return build_full_hamiltonian(p, basis);
    case ModelKind::rotated:
      return build_rotated_hamiltonian(p, basis);
    case ModelKind::effective:
      return build_effective_hamiltonian(p, basis, {false, coupling, std::nullopt});
    case ModelKind::effective_dressed:
      return build_effective_hamiltonian(p, basis, {true, coupling, std::nullopt});
  }
  throw ValidationError("build_hamiltonian: unknown model");
}

// Pair-exchange matrix element <0,-j+2| H_eff |1,-j> = g_eff sqrt(2N(N-1)).
inline double pair_exchange_rate(const SystemParams& p) {
  const double n = p.n_atoms();
  return effective_coupling(p) * std::sqrt(2.0 * n * (n - 1.0));
}

// Delta E = 2 g_eff sqrt(2N(N-1)); signed like g_eff. Grows like g^3 N.
inline double splitting_energy(const SystemParams& p) {
  if (p.n_atoms() < 2) throw ValidationError("splitting_energy: requires N >= 2");
  return 2.0 * pair_exchange_rate(p);
}

// F(t) (a + a^dag)
inline OperatorMatrix build_drive_term(const DriveSpec& d, const BasisSpec& basis, double t) {
  if (!d.active()) return zero_operator(basis);
  return {basis, SparseMatrix(d.value(t) * detail::position_quadrature(basis)), true};
}

// Literal closed form with the undefined subscript i read as s:
// g_ge g_gs g_se (3 Delta_sg - omega_eg) / (3 Delta_sg Delta_se Delta_eg).
inline double three_level_effective_coupling(const ThreeLevelParams& p) {
  const double dsg = p.delta_sg();
  const double dse = p.delta_se();
  const double deg = p.delta_eg();
  if (dsg == 0.0 || dse == 0.0 || deg == 0.0) {
    throw ValidationError("three_level_effective_coupling: vanishing detuning");
  }
  return p.g_ge * p.g_gs * p.g_es * (3.0 * dsg - p.omega_eg()) / (3.0 * dsg * dse * deg);
}

// Third-order amplitude of |1; g g> -> |0; e e> per J+^2 matrix element.
// The only path is g -(a)-> s -(a^dag)-> e on one atom, then g -(a)-> e on
// the other, with energy denominators -Delta_sg and -omega_eg.
inline double three_level_resonant_coupling(const ThreeLevelParams& p) {
  const double dsg = p.delta_sg();
  const double weg = p.omega_eg();
  if (dsg == 0.0 || weg == 0.0) throw ValidationError("three_level_resonant_coupling: vanishing denominator");
  return p.g_ge * p.g_gs * p.g_es / (dsg * weg);
}

}  // namespace dickesq
