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

#include "lsmrac/linalg.hpp"

#include "Eigen/Eigenvalues"

namespace lsmrac {

double max_abs(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double spectral_radius(const Matrix& m) {
  require(m.rows() == m.cols(), "spectral_radius: matrix must be square");
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix spd_solve(const Matrix& s, const Matrix& b) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericError("spd_solve: matrix is not positive definite");
  }
  return llt.solve(b);
}

double min_symmetric_eigenvalue(const Matrix& m) {
  require(m.rows() == m.cols(), "min_symmetric_eigenvalue: matrix must be square");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace lsmrac
