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

#pragma once

#include <stdexcept>
#include <string>

#include "Eigen/Dense"

namespace lsmrac {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

/// Raised when a caller breaks a documented precondition (dimension
/// mismatch, singular gain, out-of-range parameter).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot produce a finite result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Eigen::Ref<const Matrix>& m);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& m);

/// Solves S x = b for symmetric positive definite S. Throws NumericError
/// when the factorization fails.
Matrix spd_solve(const Matrix& s, const Matrix& b);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_symmetric_eigenvalue(const Matrix& m);

bool all_finite(const Eigen::Ref<const Matrix>& m);

void require(bool condition, const std::string& message);

}  // namespace lsmrac
