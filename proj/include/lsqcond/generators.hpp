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

#ifndef LSQCOND_GENERATORS_HPP_
#define LSQCOND_GENERATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsqcond/conditioning.hpp"
#include "lsqcond/config.hpp"
#include "lsqcond/errors.hpp"
#include "lsqcond/lsq_core.hpp"

namespace lsqcond {

// ---------------------------------------------------------------------------
// Parametric 3x2 example with analytic answers
//
//   A = [1 0; 0 alpha; 0 0],  b = (beta cos phi, beta sin phi, 1),
//   dA = [0 0; 0 0; -eps -eps].
// ---------------------------------------------------------------------------

struct GvlExpected {
  Vector x;
  Vector r;
  double kappa = 0.0;
  double vds = 0.0;
  double cot_theta = 0.0;
  double chi_A_upper = 0.0;         // relative preset
  Vector dr_first_order;            // coefficient of eps in dr
  double dr_rel_first_order = 0.0;  // ||dr||/||r|| per unit eps
};

struct GvlExample {
  double alpha = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  double epsilon = 0.0;
  LsProblem problem;
  Matrix delta_A;
  GvlExpected expected;
};

inline GvlExample gvl_example(double alpha, double beta, double phi, double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorKind::ParamOutOfRange, "alpha must lie in (0, 1)");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorKind::ParamOutOfRange, "beta must be positive");
  if (!(phi >= 0.0 && phi <= std::numbers::pi / 2))
    throw Error(ErrorKind::ParamOutOfRange, "phi must lie in [0, pi/2]");
  if (!(epsilon >= 0.0) || (epsilon > 0.0 && !(epsilon < 1e-2 * std::min(alpha, beta))))
    throw Error(ErrorKind::ParamOutOfRange, "epsilon must satisfy 0 <= eps < 1e-2 min(alpha, beta)");

  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Matrix A{{1.0, 0.0}, {0.0, alpha}, {0.0, 0.0}};
  Vector b{{beta * c, beta * s, 1.0}};
  Matrix dA{{0.0, 0.0}, {0.0, 0.0}, {-epsilon, -epsilon}};

  GvlExpected e;
  e.x = Vector{{beta * c, beta / alpha * s}};
  e.r = Vector{{0.0, 0.0, 1.0}};
  e.kappa = 1.0 / alpha;
  e.vds = 1.0 / std::hypot(alpha * c, s);
  e.cot_theta = beta;
  e.chi_A_upper = std::sqrt(1.0 + std::pow(alpha * beta * c, 2) + std::pow(beta * s, 2)) / alpha;
  e.dr_first_order = Vector{{1.0, 1.0 / alpha, beta * c + beta / alpha * s}};
  e.dr_rel_first_order =
      std::sqrt(1.0 + alpha * alpha + std::pow(alpha * beta * c + beta * s, 2)) / alpha;

  return {alpha, beta, phi, epsilon, LsProblem(std::move(A), std::move(b)), std::move(dA),
          std::move(e)};
}

// ---------------------------------------------------------------------------
// Random problems with prescribed singular values and angle
// ---------------------------------------------------------------------------

struct EnsembleSpec {
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  std::vector<double> singular_values;
  double theta = std::numbers::pi / 4;
  double mix = 0.5;  // 0: Ax along the top singular vector (v ~ kappa); 1: the bottom (v ~ 1)
  std::uint64_t seed = 0;
  double norm_b = 1.0;
};

namespace detail {

inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index size) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, size, size));
  return qr.householderQ() * Matrix::Identity(size, size);
}

}  // namespace detail

// A = U diag(sigma) V^t and b = ||b|| (cos(theta) u_hat + sin(theta) w_hat)
// with u_hat in col(A) and w_hat orthogonal to it.
inline LsProblem random_problem(const EnsembleSpec& spec) {
  if (spec.n < 1 || spec.m <= spec.n)
    throw Error(ErrorKind::ParamOutOfRange, "ensemble needs m > n >= 1");
  if (static_cast<Eigen::Index>(spec.singular_values.size()) != spec.n)
    throw Error(ErrorKind::ParamOutOfRange, "need exactly n singular values");
  for (double s : spec.singular_values)
    if (!(s > 0.0) || !std::isfinite(s))
      throw Error(ErrorKind::ParamOutOfRange, "singular values must be positive");
  if (!(spec.theta > 0.0 && spec.theta <= std::numbers::pi / 2))
    throw Error(ErrorKind::ParamOutOfRange, "theta must lie in (0, pi/2]");
  if (!(spec.mix >= 0.0 && spec.mix <= 1.0))
    throw Error(ErrorKind::ParamOutOfRange, "mix must lie in [0, 1]");
  if (!(spec.norm_b > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "norm_b must be positive");

  std::vector<double> sigma = spec.singular_values;
  std::sort(sigma.begin(), sigma.end(), std::greater<>());

  auto rng = sample_rng(spec.seed, 0);
  const Matrix Q = detail::random_orthogonal(rng, spec.m);
  const Matrix V = detail::random_orthogonal(rng, spec.n);
  const Matrix U = Q.leftCols(spec.n);
  const Matrix complement = Q.rightCols(spec.m - spec.n);

  const Vector s = Eigen::Map<const Vector>(sigma.data(), spec.n);
  Matrix A = U * s.asDiagonal() * V.transpose();

  const double t = spec.mix * std::numbers::pi / 2;
  Vector u_hat = std::cos(t) * U.col(0) + std::sin(t) * U.col(spec.n - 1);
  u_hat.normalize();
  Vector w_hat = complement * gaussian_vector(rng, spec.m - spec.n);
  w_hat.normalize();
  Vector b = spec.norm_b * (std::cos(spec.theta) * u_hat + std::sin(spec.theta) * w_hat);
  return LsProblem(std::move(A), std::move(b));
}

// Log-uniform singular values between 1 and 1/kappa (largest first).
inline std::vector<double> graded_singular_values(Eigen::Index n, double kappa) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        n == 1 ? 1.0 : std::pow(kappa, -static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

struct EnsembleLimits {
  Eigen::Index max_m = 30;
  Eigen::Index max_n = 10;
  double max_log10_kappa = 6.0;
};

// Draws a spec: n in [1, max_n], m in [n+1, max_m], kappa = 10^U(0, max),
// interior singular values log-uniform between 1/kappa and 1, theta
// log-uniform in [1e-3, 1] * pi/2 (clamped below pi/2), mix uniform.
inline EnsembleSpec sample_ensemble_spec(std::uint64_t seed, std::size_t index,
                                         const EnsembleLimits& limits = {}) {
  auto rng = sample_rng(seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EnsembleSpec spec;
  spec.n = std::uniform_int_distribution<Eigen::Index>(1, limits.max_n)(rng);
  spec.m = std::uniform_int_distribution<Eigen::Index>(spec.n + 1, std::max(spec.n + 1, limits.max_m))(rng);
  const double log_kappa = limits.max_log10_kappa * unit(rng);
  spec.singular_values.resize(static_cast<std::size_t>(spec.n));
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    double e = unit(rng);
    if (i == 0) e = 0.0;
    if (i == spec.n - 1 && spec.n > 1) e = 1.0;
    spec.singular_values[static_cast<std::size_t>(i)] = std::pow(10.0, -log_kappa * e);
  }
  spec.theta = std::min(std::numbers::pi / 2 * std::pow(10.0, -3.0 * unit(rng)),
                        std::numbers::pi / 2 * (1.0 - 1e-6));
  spec.mix = unit(rng);
  spec.seed = seed * 1000003u + index;
  spec.norm_b = std::pow(10.0, 4.0 * unit(rng) - 2.0);
  return spec;
}

// ---------------------------------------------------------------------------
// Lanczos: each step's residual is that of projecting T v_j onto
// span{v_{j-1}, v_j}.
// ---------------------------------------------------------------------------

struct LanczosStep {
  int step = 0;                 // j, 1-based
  double alpha = 0.0;           // alpha_j
  double beta = 0.0;            // beta_{j+1}
  double theta = 0.0;           // angle between T v_j and span{v_{j-1}, v_j}
  double predicted_chi = 0.0;   // csc(theta)
  double tight_raw = 0.0;       // tight upper estimate on the computed basis
  double tight_orthonormal = 0.0;  // same on the re-orthonormalized basis
  double orthogonality_defect = 0.0;  // max |v_i^t v_k|, i < k, so far
  double krylov_theta = 0.0;    // angle between T^j v_1 and span{v_1..v_j}
  bool breakdown = false;
};

struct LanczosRun {
  std::vector<LanczosStep> steps;
  bool breakdown = false;
  int breakdown_step = 0;
};

namespace detail {

inline double subspace_angle(const Matrix& basis, const Vector& b) {
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix Q = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
  const Vector inside = Q * (Q.transpose() * b);
  return std::atan2((b - inside).norm(), inside.norm());
}

inline double max_offdiagonal_inner(const Matrix& V) {
  double worst = 0.0;
  for (Eigen::Index k = 1; k < V.cols(); ++k)
    for (Eigen::Index i = 0; i < k; ++i) worst = std::max(worst, std::abs(V.col(i).dot(V.col(k))));
  return worst;
}

}  // namespace detail

inline LanczosRun lanczos_demo(const Matrix& T, const Vector& v1, int steps) {
  const Eigen::Index dim = T.rows();
  if (T.cols() != dim || v1.size() != dim)
    throw Error(ErrorKind::DimensionMismatch, "T must be square and conformable with v1");
  const double norm_T = spectral_norm(T);
  if ((T - T.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(norm_T, 1.0))
    throw Error(ErrorKind::ParamOutOfRange, "T must be symmetric");
  if (std::abs(v1.norm() - 1.0) > 1e-12)
    throw Error(ErrorKind::ParamOutOfRange, "starting vector must have unit length");
  const double breakdown_tol = 1e-12 * norm_T;

  LanczosRun run;
  Matrix V(dim, 1);
  V.col(0) = v1;
  Vector v_prev = Vector::Zero(dim);
  Vector v = v1;
  Vector krylov = v1;  // T^j v1, normalized
  double beta = 0.0;

  for (int j = 1; j <= steps; ++j) {
    const Vector Tv = T * v;
    LanczosStep rec;
    rec.step = j;
    rec.alpha = v.dot(Tv);
    Vector w = Tv - rec.alpha * v - beta * v_prev;
    rec.beta = w.norm();

    krylov = T * krylov;
    krylov /= krylov.norm();
    rec.krylov_theta = V.cols() < dim ? detail::subspace_angle(V, krylov)
                                      : std::numeric_limits<double>::quiet_NaN();

    if (rec.beta <= breakdown_tol) {
      rec.breakdown = true;
      rec.theta = rec.predicted_chi = rec.tight_raw = rec.tight_orthonormal =
          std::numeric_limits<double>::quiet_NaN();
      rec.orthogonality_defect = detail::max_offdiagonal_inner(V);
      run.steps.push_back(rec);
      run.breakdown = true;
      run.breakdown_step = j;
      break;
    }

    Matrix basis = j == 1 ? Matrix(v) : Matrix(dim, 2);
    if (j > 1) {
      basis.col(0) = v_prev;
      basis.col(1) = v;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.theta = rec.predicted_chi = rec.tight_raw = rec.tight_orthonormal = nan;
    if (basis.cols() < dim) {
      try {
        const LsCache raw(LsProblem(basis, Tv));
        const Geometry g = geometry(raw);
        rec.theta = g.theta;
        rec.predicted_chi = g.csc_theta();
        rec.tight_raw =
            residual_condition_bounds(raw, g, ScaleFactors::relative(raw)).chi_A_upper;

        Eigen::HouseholderQR<Matrix> qr(basis);
        const Matrix Q = qr.householderQ() * Matrix::Identity(dim, basis.cols());
        const LsCache ortho(LsProblem(Q, Tv));
        const Geometry go = geometry(ortho);
        rec.tight_orthonormal =
            residual_condition_bounds(ortho, go, ScaleFactors::relative(ortho)).chi_A_upper;
      } catch (const Error&) {
        // theta undefined (zero solution or residual); leave NaN
      }
    }

    // The Krylov space is exhausted at j = dim; beta_{j+1} is roundoff there.
    if (j == dim) {
      rec.breakdown = true;
      rec.orthogonality_defect = detail::max_offdiagonal_inner(V);
      run.steps.push_back(rec);
      run.breakdown = true;
      run.breakdown_step = j;
      break;
    }

    v_prev = v;
    v = w / rec.beta;
    beta = rec.beta;
    V.conservativeResize(Eigen::NoChange, V.cols() + 1);
    V.col(V.cols() - 1) = v;
    rec.orthogonality_defect = detail::max_offdiagonal_inner(V);
    run.steps.push_back(rec);
  }
  return run;
}

// ---------------------------------------------------------------------------
// Column equilibration
// ---------------------------------------------------------------------------

struct Equilibration {
  Vector D;  // diagonal of the scaling, D_jj = 1/||A e_j||
  Matrix AD;
};

inline Equilibration equilibrate_columns(const Matrix& A) {
  Equilibration out;
  out.D.resize(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double nj = A.col(j).norm();
    if (!(nj > 0.0)) throw Error(ErrorKind::ZeroColumn, "column " + std::to_string(j) + " is zero");
    out.D[j] = 1.0 / nj;
  }
  out.AD = A * out.D.asDiagonal();
  return out;
}

struct EquilibrationReport {
  Equilibration scaling;
  double kappa_before = 0.0;
  double kappa_after = 0.0;
  double chi_before = 0.0;  // relative-preset upper estimate
  double chi_after = 0.0;
};

// The residual is unchanged by column scaling; kappa and v both move, so no
// direction of change in chi is implied.
inline EquilibrationReport equilibration_report(const LsProblem& problem) {
  EquilibrationReport rep;
  rep.scaling = equilibrate_columns(problem.A());
  const LsCache before(problem);
  const LsCache after(LsProblem(rep.scaling.AD, problem.b()));
  const Geometry gb = geometry(before);
  const Geometry ga = geometry(after);
  rep.kappa_before = gb.kappa;
  rep.kappa_after = ga.kappa;
  rep.chi_before = residual_condition_bounds(before, gb, ScaleFactors::relative(before)).chi_A_upper;
  rep.chi_after = residual_condition_bounds(after, ga, ScaleFactors::relative(after)).chi_A_upper;
  return rep;
}

// ---------------------------------------------------------------------------
// Block norms: ||[A B]|| induced by max{||u||, ||v||} on the domain.
// ---------------------------------------------------------------------------

struct BlockNormCase {
  double norm_A = 0.0;
  double norm_B = 0.0;
  double norm_joint_est = 0.0;
  double lower_ratio = 0.0;  // max{||A||, ||B||} / joint
  double upper_ratio = 0.0;  // joint / (||A|| + ||B||)
};

namespace detail {

// Ascent on ||A u + B v|| over the product of unit spheres. Each update
// maximizes the linearization of the convex objective, so it never decreases.
inline double block_ascent(const Matrix& A, const Matrix& B, Vector u, Vector v, int iterations) {
  double value = (A * u + B * v).norm();
  for (int k = 0; k < iterations; ++k) {
    const Vector y = A * u + B * v;
    Vector gu = A.transpose() * y;
    if (gu.norm() > 0.0) u = gu / gu.norm();
    const Vector y2 = A * u + B * v;
    Vector gv = B.transpose() * y2;
    if (gv.norm() > 0.0) v = gv / gv.norm();
    const double next = (A * u + B * v).norm();
    const bool stalled = next - value <= 1e-15 * std::max(next, 1.0);
    value = std::max(value, next);
    if (stalled) break;
  }
  return value;
}

inline Vector top_right_vector(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinV);
  return svd.matrixV().col(0);
}

}  // namespace detail

inline BlockNormCase block_norm_case(const Matrix& A, const Matrix& B, std::size_t samples,
                                     std::uint64_t seed) {
  if (A.rows() != B.rows()) throw Error(ErrorKind::DimensionMismatch, "blocks need equal row counts");
  if (A.cols() < 1 || B.cols() < 1 || A.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, "blocks must be nonempty");
  constexpr int kIterations = 200;
  BlockNormCase out;
  out.norm_A = spectral_norm(A);
  out.norm_B = spectral_norm(B);

  const Vector ua = detail::top_right_vector(A);
  const Vector vb = detail::top_right_vector(B);
  double best = 0.0;
  for (double s : {1.0, -1.0}) best = std::max(best, detail::block_ascent(A, B, ua, s * vb, kIterations));
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = sample_rng(seed, i);
    Vector u = gaussian_vector(rng, A.cols());
    Vector v = gaussian_vector(rng, B.cols());
    best = std::max(best, detail::block_ascent(A, B, u / u.norm(), v / v.norm(), kIterations));
  }
  out.norm_joint_est = best;
  out.lower_ratio = best > 0.0 ? std::max(out.norm_A, out.norm_B) / best : 1.0;
  out.upper_ratio = out.norm_A + out.norm_B > 0.0 ? best / (out.norm_A + out.norm_B) : 1.0;
  return out;
}

}  // namespace lsqcond

#endif  // LSQCOND_GENERATORS_HPP_
