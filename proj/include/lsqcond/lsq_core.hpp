/*
 * Copyright 2026 The lsqcond Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSQCOND_LSQ_CORE_HPP_
#define LSQCOND_LSQ_CORE_HPP_

// Full rank linear least squares: the problem, its SVD-based solution, and
// the scalars (kappa, theta, van der Sluis ratio) that govern the conditioning
// of the residual.

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "lsqcond/config.hpp"
#include "lsqcond/errors.hpp"

namespace lsqcond {

// min_u ||b - A u||_2 with A tall (m > n >= 1). Immutable once built.
class LsProblem {
 public:
  LsProblem(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
    if (A_.cols() < 1 || A_.rows() <= A_.cols())
      throw Error(ErrorKind::DimensionMismatch,
                  "matrix must have m > n >= 1, got " + std::to_string(A_.rows()) + "x" +
                      std::to_string(A_.cols()));
    if (b_.size() != A_.rows())
      throw Error(ErrorKind::DimensionMismatch,
                  "right-hand side has length " + std::to_string(b_.size()) + ", expected " +
                      std::to_string(A_.rows()));
    if (!A_.allFinite() || !b_.allFinite())
      throw Error(ErrorKind::ParamOutOfRange, "non-finite entry in problem data");
  }

  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  Eigen::Index rows() const noexcept { return A_.rows(); }
  Eigen::Index cols() const noexcept { return A_.cols(); }

 private:
  Matrix A_;
  Vector b_;
};

// Thin SVD A = U diag(sigma) V^t with sigma nonincreasing and strictly positive.
struct SpectralData {
  Vector singular_values;
  Matrix left_vectors;   // m x n, orthonormal columns
  Matrix right_vectors;  // n x n, orthogonal

  double sigma_max() const { return singular_values[0]; }
  double sigma_min() const { return singular_values[singular_values.size() - 1]; }
};

namespace detail {

inline Vector singular_values_only(const Matrix& M) {
  if (M.size() == 0) return Vector();
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues();
}

}  // namespace detail

inline SpectralData spectral_data(const Matrix& A, const Tolerances& tol = {}) {
  if (A.rows() < A.cols() || A.cols() < 1)
    throw Error(ErrorKind::DimensionMismatch, "spectral_data requires m >= n >= 1");
  if (!A.allFinite()) throw Error(ErrorKind::ParamOutOfRange, "non-finite matrix entry");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SpectralData out{svd.singularValues(), svd.matrixU(), svd.matrixV()};
  const double smax = out.sigma_max();
  const double smin = out.sigma_min();
  if (!(smin > tol.rank_tol * smax))
    throw Error(ErrorKind::NonFullRank, "sigma_min = " + std::to_string(smin) +
                                            " <= rank_tol * sigma_max = " +
                                            std::to_string(tol.rank_tol * smax));
  return out;
}

inline double spectral_norm(const Matrix& M) {
  const Vector s = detail::singular_values_only(M);
  return s.size() == 0 ? 0.0 : s[0];
}

// Sum of singular values; the dual of the spectral norm under <X, Y> = tr(X^t Y).
inline double nuclear_norm(const Matrix& M) { return detail::singular_values_only(M).sum(); }

// Solved problem plus every derived quantity the analyses reuse. All inverse
// applications go through the SVD so (A^t A)^{-1} is never formed.
class LsCache {
 public:
  explicit LsCache(LsProblem problem, const Tolerances& tol = {})
      : problem_(std::move(problem)), tol_(tol), svd_(spectral_data(problem_.A(), tol)) {
    const Matrix& U = svd_.left_vectors;
    const Vector coeff = U.transpose() * problem_.b();
    Ax_ = U * coeff;
    r_ = problem_.b() - Ax_;
    r_ -= U * (U.transpose() * r_);
    x_ = svd_.right_vectors * coeff.cwiseQuotient(svd_.singular_values);
  }

  const LsProblem& problem() const noexcept { return problem_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const SpectralData& svd() const noexcept { return svd_; }
  const Vector& x() const noexcept { return x_; }
  const Vector& r() const noexcept { return r_; }
  const Vector& Ax() const noexcept { return Ax_; }

  double norm_A() const { return svd_.sigma_max(); }
  double norm_b() const { return problem_.b().norm(); }
  double norm_r() const { return r_.norm(); }
  double norm_x() const { return x_.norm(); }
  double norm_Ax() const { return Ax_.norm(); }
  double sigma_min() const { return svd_.sigma_min(); }

  // v -> P v, P = A (A^t A)^{-1} A^t
  Vector project(const Vector& v) const {
    return svd_.left_vectors * (svd_.left_vectors.transpose() * v);
  }
  // v -> (I - P) v
  Vector project_complement(const Vector& v) const {
    Vector out = v - project(v);
    return out - project(out);
  }
  // v -> (A^t A)^{-1} A^t v
  Vector apply_pinv(const Vector& v) const {
    return svd_.right_vectors *
           (svd_.left_vectors.transpose() * v).cwiseQuotient(svd_.singular_values);
  }
  // w -> A (A^t A)^{-1} w
  Vector apply_pinv_transpose(const Vector& w) const {
    return svd_.left_vectors *
           (svd_.right_vectors.transpose() * w).cwiseQuotient(svd_.singular_values);
  }
  // w -> (A^t A)^{-1} w
  Vector apply_gram_inverse(const Vector& w) const {
    const Vector s2 = svd_.singular_values.cwiseAbs2();
    return svd_.right_vectors * (svd_.right_vectors.transpose() * w).cwiseQuotient(s2);
  }

 private:
  LsProblem problem_;
  Tolerances tol_;
  SpectralData svd_;
  Vector x_;
  Vector r_;
  Vector Ax_;
};

inline LsCache solve_least_squares(LsProblem problem, const Tolerances& tol = {}) {
  return LsCache(std::move(problem), tol);
}

struct Geometry {
  double kappa = 1.0;      // ||A||_2 / sigma_min
  double theta = 0.0;      // angle between b and col(A), radians
  double cot_theta = 0.0;  // ||Ax|| / ||r||
  double vds = 1.0;        // van der Sluis ratio ||Ax|| / (||x|| sigma_min)
  double sigma_min = 1.0;

  double csc_theta() const { return 1.0 / std::sin(theta); }
  double sec_theta() const { return 1.0 / std::cos(theta); }
  double tan_theta() const { return std::tan(theta); }
};

inline Geometry geometry(const LsCache& cache) {
  const double nr = cache.norm_r();
  const double nb = cache.norm_b();
  const double nx = cache.norm_x();
  if (!(nr > cache.tolerances().resid_tol * nb))
    throw Error(ErrorKind::ZeroResidual, "residual norm " + std::to_string(nr) +
                                             " is negligible relative to ||b|| = " +
                                             std::to_string(nb));
  if (nx == 0.0) throw Error(ErrorKind::ZeroSolution, "least squares solution is zero");
  const double nax = cache.norm_Ax();
  Geometry g;
  g.sigma_min = cache.sigma_min();
  g.kappa = cache.norm_A() / g.sigma_min;
  g.theta = std::atan2(nr, nax);
  g.cot_theta = nax / nr;
  g.vds = nax / (nx * g.sigma_min);
  return g;
}

// ||P_A - P_B||_2 for the orthogonal projectors onto col(A) and col(B).
inline double projector_difference_norm(const Matrix& A, const Matrix& B,
                                        const Tolerances& tol = {}) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw Error(ErrorKind::DimensionMismatch, "projector_difference_norm needs equal shapes");
  const Matrix UA = spectral_data(A, tol).left_vectors;
  const Matrix UB = spectral_data(B, tol).left_vectors;
  const Matrix diff = UA * UA.transpose() - UB * UB.transpose();
  return spectral_norm(diff);
}

// Column-stacking (co-lexicographic) position of entry (i, j) in vec(M).
inline Eigen::Index vec_index(Eigen::Index i, Eigen::Index j, Eigen::Index rows,
                              Eigen::Index cols) {
  if (i < 0 || i >= rows || j < 0 || j >= cols)
    throw Error(ErrorKind::OutOfRange, "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") outside " + std::to_string(rows) + "x" +
                                           std::to_string(cols));
  return j * rows + i;
}

inline std::pair<Eigen::Index, Eigen::Index> vec_unflatten(Eigen::Index k, Eigen::Index rows,
                                                           Eigen::Index cols) {
  if (k < 0 || k >= rows * cols)
    throw Error(ErrorKind::OutOfRange, "vec position " + std::to_string(k) + " out of range");
  return {k % rows, k / rows};
}

inline Vector vec(const Matrix& M) { return M.reshaped(); }

}  // namespace lsqcond

#endif  // LSQCOND_LSQ_CORE_HPP_
