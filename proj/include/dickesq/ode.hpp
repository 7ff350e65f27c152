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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "dickesq/error.hpp"

namespace dickesq {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 200'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

// Dormand-Prince 5(4) with FSAL and standard step-size control. State is any
// dense Eigen vector or matrix type. Every sample time is hit exactly; the
// step clamped to land on a sample does not shrink the next natural step.
template <class State>
class DormandPrince {
 public:
  using Rhs = std::function<void(double, const State&, State&)>;

  DormandPrince(Rhs rhs, OdeOptions opt) : rhs_(std::move(rhs)), opt_(opt) {
    if (!(opt.rtol > 0.0) || !(opt.atol >= 0.0)) throw ValidationError("DormandPrince: invalid tolerances");
  }

  const OdeStats& stats() const noexcept { return stats_; }

  // Advances (t, y) to t_end. Successive calls must pass the state returned
  // by the previous call.
  void advance(double& t, State& y, double t_end) {
    if (t_end < t) throw ValidationError("DormandPrince: cannot integrate backwards");
    if (t_end == t) return;
    for (State* w : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &y_tmp_, &y_new_}) {
      if (w->rows() != y.rows() || w->cols() != y.cols()) w->resizeLike(y);
    }
    if (!fsal_valid_ || t != fsal_t_) {
      eval(t, y, k1_);
      fsal_valid_ = true;
      fsal_t_ = t;
    }
    if (!(h_ > 0.0)) h_ = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(t, y);

    while (t < t_end) {
      if (stats_.accepted + stats_.rejected >= opt_.max_steps) fail(t, "maximum number of steps exceeded");
      double h = std::min(h_, opt_.max_step);
      const bool clamped = t + h >= t_end;
      if (clamped) h = t_end - t;
      const double h_min = 1e-14 * std::max(std::abs(t), 1.0);
      if (h < h_min && !clamped) fail(t, "step size underflow");

      const double err = attempt(t, y, h);
      if (err <= 1.0) {
        ++stats_.accepted;
        t = clamped ? t_end : t + h;
        y.swap(y_new_);
        k1_.swap(k7_);
        fsal_t_ = t;
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // Keep the natural step when the accepted step was a short landing step.
        if (!clamped || h >= h_) h_ = h * fac;
      } else {
        ++stats_.rejected;
        h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        if (!std::isfinite(err)) h_ = 0.1 * h;
      }
    }
  }

 private:
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  void eval(double t, const State& y, State& dy) {
    ++stats_.rhs_evaluations;
    rhs_(t, y, dy);
  }

  // Scaled RMS error norm.
  double scaled_norm(const State& v, const State& y0, const State& y1) const {
    const auto sc = (opt_.atol + opt_.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
    const double s = (v.cwiseAbs().array() / sc).square().sum();
    return std::sqrt(s / static_cast<double>(v.size()));
  }

  double attempt(double t, const State& y, double h) {
    y_tmp_ = y + h * (a21 * k1_);
    eval(t + c2 * h, y_tmp_, k2_);
    y_tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    eval(t + c3 * h, y_tmp_, k3_);
    y_tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    eval(t + c4 * h, y_tmp_, k4_);
    y_tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    eval(t + c5 * h, y_tmp_, k5_);
    y_tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    eval(t + h, y_tmp_, k6_);
    y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    eval(t + h, y_new_, k7_);
    y_tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    const double err = scaled_norm(y_tmp_, y, y_new_);
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }

  double initial_step(double t, const State& y) {
    const double d0 = scaled_norm(y, y, y);
    const double d1 = scaled_norm(k1_, y, y);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, opt_.max_step);
    y_tmp_ = y + h0 * k1_;
    eval(t + h0, y_tmp_, k2_);
    y_new_ = (k2_ - k1_) / h0;
    const double d2 = scaled_norm(y_new_, y, y);
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, opt_.max_step});
  }

  [[noreturn]] void fail(double t, const char* what) const {
    std::ostringstream os;
    os.precision(12);
    os << "ODE integration failed at t = " << t << ": " << what;
    throw NumericalError(os.str());
  }

  Rhs rhs_;
  OdeOptions opt_;
  OdeStats stats_;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  double fsal_t_ = 0.0;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, y_tmp_, y_new_;
};

// Integrates through the sample times (first entry is the initial time) and
// calls observer(i, t, y) at each of them.
template <class State, class Observer>
OdeStats integrate_samples(typename DormandPrince<State>::Rhs rhs, State y, const std::vector<double>& times,
                           const OdeOptions& opt, Observer&& observer) {
  if (times.empty()) return {};
  DormandPrince<State> solver(std::move(rhs), opt);
  double t = times.front();
  observer(std::size_t{0}, t, y);
  for (std::size_t i = 1; i < times.size(); ++i) {
    solver.advance(t, y, times[i]);
    observer(i, t, y);
  }
  return solver.stats();
}

// start, start + dt, ..., stop with n_samples >= 2 points.
struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int n_samples = 2;

  void validate() const {
    if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start)) {
      throw ValidationError("TimeGrid: stop must be greater than start");
    }
    if (n_samples < 2) throw ValidationError("TimeGrid: n_samples must be >= 2");
  }

  std::vector<double> times() const {
    validate();
    std::vector<double> t(static_cast<std::size_t>(n_samples));
    const double dt = (stop - start) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) t[static_cast<std::size_t>(i)] = start + dt * i;
    t.back() = stop;
    return t;
  }
};

}  // namespace dickesq
