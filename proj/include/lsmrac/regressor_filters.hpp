/******************************************************************************
 * Copyright 2026 The lsmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

// Auxiliary signals of the reduced (diagonal K2*) indirect parameterization.
//
// With W_m(z) = (zI - A_m)^-1 B_m = [w_ij(z)] and per-channel regressors
// omega_j = [-x; u_j] in R^{n+1}:
//
//   zeta_ij = w_ij(z)[omega_j]
//   xi_ij   = theta_j^T zeta_ij - w_ij(z)[theta_j^T omega_j]
//   nu_i    = sum_j w_ij(z)[theta_j^T omega_j]
//   eps_i   = e_xi + theta^T zeta_i - nu_i,   zeta_i = [zeta_i1; ...; zeta_im]
//
// so eps = mu + Z^T theta with mu = e_x - nu and Z = [zeta_1 ... zeta_n].

#pragma once

#include <vector>

#include "lsmrac/linalg.hpp"

namespace lsmrac {

/// Stacked estimate theta = [theta_1; ...; theta_m], each theta_j in R^{n+1}
/// holding column j of Theta1 followed by the diagonal entry theta_2j.
class ThetaVector {
 public:
  ThetaVector() = default;
  ThetaVector(int n, int m);
  ThetaVector(int n, int m, Vector flat);

  static ThetaVector from_parameters(const Matrix& Theta1, const Vector& theta2);

  int n() const { return n_; }
  int m() const { return m_; }
  Eigen::Index size() const { return flat_.size(); }

  const Vector& flat() const { return flat_; }
  Vector& flat() { return flat_; }

  Eigen::VectorBlock<const Vector> column(int j) const {
    return flat_.segment(static_cast<Eigen::Index>(j) * (n_ + 1), n_ + 1);
  }
  Eigen::VectorBlock<Vector> column(int j) {
    return flat_.segment(static_cast<Eigen::Index>(j) * (n_ + 1), n_ + 1);
  }

  double theta2(int j) const { return flat_(static_cast<Eigen::Index>(j) * (n_ + 1) + n_); }
  double& theta2(int j) { return flat_(static_cast<Eigen::Index>(j) * (n_ + 1) + n_); }

  Matrix theta1() const;  // n x m
  Vector theta2() const;  // m

  bool operator==(const ThetaVector& other) const {
    return n_ == other.n_ && m_ == other.m_ && flat_ == other.flat_;
  }

 private:
  int n_ = 0;
  int m_ = 0;
  Vector flat_;
};

/// Columns omega_j = [-x; u_j], shape (n+1) x m. `u` must be the input
/// actually applied to the plant.
Matrix build_omega(const Vector& x, const Vector& u);

struct RegressorSnapshot {
  Matrix Z;        // m(n+1) x n
  Vector mu;       // n
  Vector epsilon;  // n
  Vector xi_sum;   // n, entry i is sum_j xi_ij
  double zeta_norm_sq = 0.0;
  double xi_norm_sq = 0.0;
};

/// State-space realization of every w_ij filter. Channel j keeps an
/// n x (n+1) matrix state whose row i is zeta_ij, plus an n-vector state
/// for the scalar signal theta_j^T omega_j whose entry i is
/// w_ij(z)[theta_j^T omega_j]. The filters are strictly proper: outputs read
/// before update() are the time-t values.
class FilterBank {
 public:
  FilterBank() = default;
  FilterBank(Matrix A_m, Matrix B_m);

  int n() const { return static_cast<int>(A_m_.rows()); }
  int m() const { return static_cast<int>(B_m_.cols()); }

  /// Advances all filters one step with time-t inputs. `theta` is the
  /// pre-update estimate theta(t).
  void update(const Matrix& omega, const ThetaVector& theta);

  const Matrix& zeta_state(int j) const { return zeta_[j]; }
  Vector zeta(int i, int j) const { return zeta_[j].row(i).transpose(); }
  const Vector& nu_channel(int j) const { return nu_[j]; }
  Vector nu() const;

  /// n x m matrix of xi_ij at the current step.
  Matrix compute_xi(const ThetaVector& theta) const;

  /// Builds Z, mu, eps for the current step; `e_x` is xhat - x.
  RegressorSnapshot assemble_snapshot(const ThetaVector& theta, const Vector& e_x) const;

 private:
  Matrix A_m_;
  Matrix B_m_;
  std::vector<Matrix> zeta_;
  std::vector<Vector> nu_;
};

}  // namespace lsmrac
