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
#include <functional>
#include <utility>
#include <vector>

#include "dickesq/hilbert.hpp"

namespace dickesq {

// Scalar drive amplitude F(t) multiplying a fixed Hermitian operator.
using DriveFunction = std::function<double(double)>;

// Collapse operator with its rate; enters as rate * D[op].
struct JumpOperator {
  SparseMatrix op;
  double rate = 0.0;
};

// dpsi/dt = -i (H0 + F(t) X) psi
class SchrodingerGenerator {
 public:
  SchrodingerGenerator(SparseMatrix h0, SparseMatrix drive_op = {}, DriveFunction drive = {})
      : h0_(std::move(h0)), drive_op_(std::move(drive_op)), drive_(std::move(drive)) {}

  void operator()(double t, const StateVector& psi, StateVector& dpsi) const {
    dpsi.noalias() = h0_ * psi;
    if (drive_ && drive_op_.nonZeros() > 0) {
      const double f = drive_(t);
      if (f != 0.0) dpsi.noalias() += f * (drive_op_ * psi);
    }
    dpsi *= cplx(0.0, -1.0);
  }

 private:
  SparseMatrix h0_;
  SparseMatrix drive_op_;
  DriveFunction drive_;
};

// Lindblad right-hand side
//   drho/dt = -i[H0 + F(t) X, rho] + sum_k D[L_k] rho
// evaluated as Y + Y^dagger + sum_k L_k (L_k rho)^dagger with
// Y = -i (H0 - i/2 sum_k L_k^dagger L_k + F X) rho, which needs rho Hermitian.
// Holds scratch buffers, so one instance serves one integration at a time.
class LindbladGenerator {
 public:
  LindbladGenerator(const SparseMatrix& h0, const std::vector<JumpOperator>& jumps, SparseMatrix drive_op = {},
                    DriveFunction drive = {})
      : drive_op_(std::move(drive_op)), drive_(std::move(drive)) {
    SparseMatrix decay(h0.rows(), h0.cols());
    for (const auto& j : jumps) {
      if (j.rate < 0.0) throw ValidationError("LindbladGenerator: negative rate");
      if (j.rate == 0.0 || j.op.nonZeros() == 0) continue;
      SparseMatrix l = std::sqrt(j.rate) * j.op;
      decay += SparseMatrix(SparseMatrix(l.adjoint()) * l);
      jumps_.push_back(std::move(l));
    }
    h_eff_ = SparseMatrix(cplx(0.0, -1.0) * h0 - 0.5 * decay);  // -i H_nh
    drive_op_ = SparseMatrix(cplx(0.0, -1.0) * drive_op_);
  }

  void operator()(double t, const DenseMatrix& rho, DenseMatrix& drho) const {
    y_.noalias() = h_eff_ * rho;
    if (drive_ && drive_op_.nonZeros() > 0) {
      const double f = drive_(t);
      if (f != 0.0) y_.noalias() += f * (drive_op_ * rho);
    }
    drho = y_ + y_.adjoint();
    for (const auto& l : jumps_) {
      lr_.noalias() = l * rho;
      lr_adj_ = lr_.adjoint();
      drho.noalias() += l * lr_adj_;
    }
  }

 private:
  SparseMatrix h_eff_;
  SparseMatrix drive_op_;
  DriveFunction drive_;
  std::vector<SparseMatrix> jumps_;
  mutable DenseMatrix y_, lr_, lr_adj_;
};

}  // namespace dickesq
