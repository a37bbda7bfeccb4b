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

#include "lsmrac/regressor_filters.hpp"

namespace lsmrac {

ThetaVector::ThetaVector(int n, int m)
    : n_(n), m_(m), flat_(Vector::Zero(static_cast<Eigen::Index>(m) * (n + 1))) {
  require(n > 0 && m > 0, "ThetaVector: dimensions must be positive");
}

ThetaVector::ThetaVector(int n, int m, Vector flat) : n_(n), m_(m), flat_(std::move(flat)) {
  require(n > 0 && m > 0, "ThetaVector: dimensions must be positive");
  require(flat_.size() == static_cast<Eigen::Index>(m) * (n + 1),
          "ThetaVector: flat vector must have m(n+1) entries");
}

ThetaVector ThetaVector::from_parameters(const Matrix& Theta1, const Vector& theta2) {
  require(Theta1.cols() == theta2.size(), "ThetaVector: Theta1 and theta2 disagree on m");
  const int n = static_cast<int>(Theta1.rows());
  const int m = static_cast<int>(Theta1.cols());
  ThetaVector t(n, m);
  for (int j = 0; j < m; ++j) {
    t.column(j).head(n) = Theta1.col(j);
    t.theta2(j) = theta2(j);
  }
  return t;
}

Matrix ThetaVector::theta1() const {
  Matrix out(n_, m_);
  for (int j = 0; j < m_; ++j) out.col(j) = column(j).head(n_);
  return out;
}

Vector ThetaVector::theta2() const {
  Vector out(m_);
  for (int j = 0; j < m_; ++j) out(j) = theta2(j);
  return out;
}

Matrix build_omega(const Vector& x, const Vector& u) {
  const auto n = x.size();
  Matrix omega(n + 1, u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    omega.col(j).head(n) = -x;
    omega(n, j) = u(j);
  }
  return omega;
}

FilterBank::FilterBank(Matrix A_m, Matrix B_m) : A_m_(std::move(A_m)), B_m_(std::move(B_m)) {
  require(A_m_.rows() == A_m_.cols(), "FilterBank: A_m must be square");
  require(B_m_.rows() == A_m_.rows(), "FilterBank: B_m must have n rows");
  const auto n = A_m_.rows();
  zeta_.assign(B_m_.cols(), Matrix::Zero(n, n + 1));
  nu_.assign(B_m_.cols(), Vector::Zero(n));
}

void FilterBank::update(const Matrix& omega, const ThetaVector& theta) {
  require(omega.rows() == n() + 1 && omega.cols() == m(), "FilterBank: omega has wrong shape");
  require(theta.n() == n() && theta.m() == m(), "FilterBank: theta has wrong shape");
  for (int j = 0; j < m(); ++j) {
    const auto b = B_m_.col(j);
    const auto w = omega.col(j);
    zeta_[j] = A_m_ * zeta_[j] + b * w.transpose();
    nu_[j] = A_m_ * nu_[j] + b * theta.column(j).dot(w);
  }
}

Vector FilterBank::nu() const {
  Vector out = Vector::Zero(n());
  for (const auto& s : nu_) out += s;
  return out;
}

Matrix FilterBank::compute_xi(const ThetaVector& theta) const {
  require(theta.n() == n() && theta.m() == m(), "FilterBank: theta has wrong shape");
  Matrix xi(n(), m());
  for (int j = 0; j < m(); ++j) {
    xi.col(j) = zeta_[j] * theta.column(j) - nu_[j];
  }
  return xi;
}

RegressorSnapshot FilterBank::assemble_snapshot(const ThetaVector& theta,
                                                const Vector& e_x) const {
  require(e_x.size() == n(), "FilterBank: e_x has wrong dimension");
  const int n1 = n() + 1;
  RegressorSnapshot s;
  s.Z.resize(static_cast<Eigen::Index>(m()) * n1, n());
  for (int j = 0; j < m(); ++j) {
    s.Z.middleRows(static_cast<Eigen::Index>(j) * n1, n1) = zeta_[j].transpose();
  }
  s.mu = e_x - nu();
  s.epsilon = s.mu + s.Z.transpose() * theta.flat();
  const Matrix xi = compute_xi(theta);
  s.xi_sum = xi.rowwise().sum();
  s.zeta_norm_sq = s.Z.squaredNorm();
  s.xi_norm_sq = xi.squaredNorm();
  return s;
}

}  // namespace lsmrac
