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

#ifndef LSQCOND_JACOBIAN_HPP_
#define LSQCOND_JACOBIAN_HPP_

// Sensitivity of the residual to the matrix A.
//
// The Jacobian of r with respect to vec(A) follows from differentiating
//
//   [ I   A ] [ r ]   [ b ]
//   [ A^t 0 ] [ x ] = [ 0 ]
//
// which gives dr = -(I - P) dA x - A (A^t A)^{-1} dA^t r. Its norm, induced by
// the spectral norm on dA and the 2-norm on dr, equals the maximum over unit
// dr' of the nuclear norm of the transposed image u1 v1^t + u2 v2^t. The
// functions here evaluate that objective, its cheap lower/upper bounds, and
// estimate the maximum from below by search.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "lsqcond/conditioning.hpp"
#include "lsqcond/config.hpp"
#include "lsqcond/errors.hpp"
#include "lsqcond/lsq_core.hpp"

namespace lsqcond {

struct JacobianImage {
  Vector dr;
  Vector dx;
};

inline JacobianImage apply_residual_jacobian(const LsCache& cache, const Matrix& dA) {
  const Matrix& A = cache.problem().A();
  if (dA.rows() != A.rows() || dA.cols() != A.cols())
    throw Error(ErrorKind::DimensionMismatch, "dA must have the shape of A");
  const Vector dAx = dA * cache.x();
  const Vector dAtr = dA.transpose() * cache.r();
  JacobianImage out;
  out.dr = -cache.project_complement(dAx) - cache.apply_pinv_transpose(dAtr);
  out.dx = -cache.apply_pinv(dAx) + cache.apply_gram_inverse(dAtr);
  return out;
}

// {J_r}^t dr' = sign * vec(u1 v1^t + u2 v2^t). The sign is -1 when the
// transpose is carried out literally; every norm below ignores it.
struct Rank2Adjoint {
  Vector u1;  // (I - P) dr'
  Vector v1;  // x
  Vector u2;  // r
  Vector v2;  // (A^t A)^{-1} A^t dr'
  double sign = -1.0;

  Matrix outer_sum() const { return u1 * v1.transpose() + u2 * v2.transpose(); }
  Matrix transpose_image() const { return sign * outer_sum(); }
};

inline Rank2Adjoint adjoint_rank2(const LsCache& cache, const Vector& delta_r) {
  if (delta_r.size() != cache.problem().rows())
    throw Error(ErrorKind::DimensionMismatch, "direction length must equal row count");
  return {cache.project_complement(delta_r), cache.x(), cache.r(), cache.apply_pinv(delta_r),
          -1.0};
}

namespace detail {

// Angle in [0, pi] between two nonzero vectors, accurate near 0 and pi.
inline double vector_angle(const Vector& a, const Vector& b) {
  const Vector ua = a / a.norm();
  const Vector ub = b / b.norm();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

struct FactorNorms {
  double p1;  // ||u1|| ||v1||
  double p2;  // ||u2|| ||v2||
};

inline FactorNorms factor_norms(const Rank2Adjoint& adj) {
  return {adj.u1.norm() * adj.v1.norm(), adj.u2.norm() * adj.v2.norm()};
}

}  // namespace detail

inline double g_objective(const Rank2Adjoint& adj) {
  const auto [p1, p2] = detail::factor_norms(adj);
  if (p1 == 0.0 || p2 == 0.0) return p1 + p2;
  const double theta_u = detail::vector_angle(adj.u1, adj.u2);
  const double theta_v = detail::vector_angle(adj.v1, adj.v2);
  const double sq = p1 * p1 + p2 * p2 + 2.0 * p1 * p2 * std::cos(theta_u - theta_v);
  return std::sqrt(std::max(sq, 0.0));
}

// Nuclear norm of u1 v1^t + u2 v2^t for the direction delta_r (unit length
// expected; the value is homogeneous of degree one).
inline double g_objective(const LsCache& cache, const Vector& delta_r) {
  return g_objective(adjoint_rank2(cache, delta_r));
}

struct Sandwich {
  double lower;  // sqrt(p1^2 + p2^2)
  double upper;  // p1 + p2
};

inline Sandwich sandwich_bounds(const Rank2Adjoint& adj) {
  const auto [p1, p2] = detail::factor_norms(adj);
  return {std::hypot(p1, p2), p1 + p2};
}

inline Sandwich sandwich_bounds(const LsCache& cache, const Vector& delta_r) {
  return sandwich_bounds(adjoint_rank2(cache, delta_r));
}

enum class Origin { Sampled, Constructed, Refined };

inline const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Sampled: return "sampled";
    case Origin::Constructed: return "constructed";
    case Origin::Refined: return "refined";
  }
  return "sampled";
}

struct DirectionCandidate {
  Vector delta_r;
  double g_value = 0.0;
  double L_value = 0.0;
  double U_value = 0.0;
  Origin origin = Origin::Sampled;
};

// g itself can fall below L when cos(theta_u - theta_v) < 0. Reflecting the
// col(A) component of dr' keeps L and U and turns the cosine into
// -cos(theta_u + theta_v); the two cosines sum to 2 sin sin >= 0, so the
// better of the pair always satisfies L <= g. That one is kept.
inline DirectionCandidate evaluate_direction(const LsCache& cache, Vector delta_r, Origin origin) {
  delta_r.normalize();
  const Rank2Adjoint adj = adjoint_rank2(cache, delta_r);
  const Sandwich s = sandwich_bounds(adj);
  double g = g_objective(adj);
  Vector reflected = delta_r - 2.0 * cache.project(delta_r);
  const double g_reflected = g_objective(cache, reflected);
  if (g_reflected > g) {
    delta_r = std::move(reflected);
    g = g_reflected;
  }
  return {std::move(delta_r), g, s.lower, s.upper, origin};
}

namespace detail {

inline Vector unit_residual(const LsCache& cache) { return cache.r() / cache.norm_r(); }

// Left singular vector for sigma_min.
inline Vector smallest_left_vector(const LsCache& cache) {
  const Matrix& U = cache.svd().left_vectors;
  return U.col(U.cols() - 1);
}

}  // namespace detail

// cos(phi) r_hat + sin(phi) a'' with tan(phi) = (||r||/sigma_min) / ||x||,
// which maximizes the upper bound U. Of the four sign choices the one with
// the largest g is kept.
inline DirectionCandidate worst_case_direction(const LsCache& cache) {
  (void)geometry(cache);
  const Vector rhat = detail::unit_residual(cache);
  const Vector amin = detail::smallest_left_vector(cache);
  const double phi = std::atan2(cache.norm_r() / cache.sigma_min(), cache.norm_x());
  DirectionCandidate best;
  bool first = true;
  for (double sr : {1.0, -1.0}) {
    for (double sa : {1.0, -1.0}) {
      DirectionCandidate c = evaluate_direction(
          cache, sr * std::cos(phi) * rhat + sa * std::sin(phi) * amin, Origin::Constructed);
      if (first || c.g_value > best.g_value) {
        best = std::move(c);
        first = false;
      }
    }
  }
  return best;
}

struct SamplerConfig {
  std::size_t samples = 2000;
  int refine_iterations = 60;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: worker_count()
};

struct EmpiricalEstimate {
  double value = 0.0;  // scale_A / scale_r * max g
  DirectionCandidate best_direction;
  std::size_t samples_used = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Evaluates f(i) for i in [0, count) on up to `threads` workers. Each slot is
// written by exactly one worker, so the output is independent of scheduling.
template <class F>
std::vector<double> parallel_map(std::size_t count, unsigned threads, F f) {
  std::vector<double> out(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads == 0 ? worker_count() : threads,
                                                   std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = f(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
  return out;
}

// Index of the largest value; ties go to the lowest index.
inline std::size_t argmax(const std::vector<double>& values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

inline Vector sphere_sample(std::uint64_t seed, std::size_t index, Eigen::Index dim) {
  auto rng = sample_rng(seed, index);
  Vector v = gaussian_vector(rng, dim);
  return v / v.norm();
}

// Golden-section search for a maximum of f on [lo, hi].
template <class F>
double golden_section_max(F f, double lo, double hi, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace detail

// Lower estimate of the condition number of r with respect to A obtained by
// maximizing g over a candidate set: the constructed worst-case family,
// +-r_hat, +-a'', seeded uniform samples on the unit sphere, and a golden
// section refinement in the plane span{r_hat, a''}. Since the constructed
// direction is always included, the value is at least chi_A_upper / sqrt(2).
inline EmpiricalEstimate empirical_condition_wrt_A(const LsCache& cache, const ScaleFactors& scales,
                                                   const SamplerConfig& config = {}) {
  (void)geometry(cache);
  const Eigen::Index m = cache.problem().rows();
  const Vector rhat = detail::unit_residual(cache);
  const Vector amin = detail::smallest_left_vector(cache);

  DirectionCandidate best = worst_case_direction(cache);
  auto consider = [&best](DirectionCandidate c) {
    if (c.g_value > best.g_value) best = std::move(c);
  };
  for (double s : {1.0, -1.0}) {
    consider(evaluate_direction(cache, s * rhat, Origin::Constructed));
    consider(evaluate_direction(cache, s * amin, Origin::Constructed));
  }

  if (config.samples > 0) {
    const std::vector<double> values =
        detail::parallel_map(config.samples, config.threads, [&](std::size_t i) {
          return evaluate_direction(cache, detail::sphere_sample(config.seed, i, m),
                                    Origin::Sampled).g_value;
        });
    const std::size_t k = detail::argmax(values);
    consider(evaluate_direction(cache, detail::sphere_sample(config.seed, k, m), Origin::Sampled));
  }

  if (config.refine_iterations > 0) {
    auto along = [&](double psi) -> Vector { return std::cos(psi) * rhat + std::sin(psi) * amin; };
    auto objective = [&](double psi) { return g_objective(cache, along(psi)); };
    constexpr int kGrid = 32;
    const double step = std::numbers::pi / kGrid;
    int best_k = 0;
    double best_g = -1.0;
    for (int k = 0; k < kGrid; ++k) {
      const double gk = objective(k * step);
      if (gk > best_g) {
        best_g = gk;
        best_k = k;
      }
    }
    const double psi = detail::golden_section_max(objective, (best_k - 1) * step,
                                                  (best_k + 1) * step, config.refine_iterations);
    consider(evaluate_direction(cache, along(psi), Origin::Refined));
  }

  EmpiricalEstimate out;
  out.value = scales.scale_A / scales.scale_r * best.g_value;
  out.best_direction = std::move(best);
  out.samples_used = config.samples;
  out.seed = config.seed;
  return out;
}

// Unit spectral norm dA with <dr', J_r vec(dA)> = g(dr'): minus the polar
// factor of u1 v1^t + u2 v2^t.
inline Matrix attaining_perturbation(const LsCache& cache, const Vector& delta_r) {
  const Matrix M = adjoint_rank2(cache, delta_r).outer_sum();
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || !(s[0] > 0.0))
    throw Error(ErrorKind::DegenerateDirection, "objective vanishes for this direction");
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > s[0] * std::numeric_limits<double>::epsilon()) ++rank;
  return -(svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).transpose());
}

struct FiniteDifferenceConfig {
  double delta = 0.0;  // 0: sqrt(machine epsilon) * scale_A
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

namespace detail {

// Unit spectral norm probe: even indices dense Gaussian, odd indices rank one.
inline Matrix probe_perturbation(std::uint64_t seed, std::size_t index, Eigen::Index rows,
                                 Eigen::Index cols) {
  auto rng = sample_rng(seed, index);
  if (index % 2 == 0) {
    Matrix G = gaussian_matrix(rng, rows, cols);
    return G / spectral_norm(G);
  }
  Vector u = gaussian_vector(rng, rows);
  Vector v = gaussian_vector(rng, cols);
  return (u / u.norm()) * (v / v.norm()).transpose();
}

}  // namespace detail

// Measured (||dr||/scale_r) / (delta/scale_A) maximized over probes dA with
// ||dA||_2 = 1, using exact solves of the problem with A + delta dA.
inline double finite_difference_condition(const LsProblem& problem, const ScaleFactors& scales,
                                          const FiniteDifferenceConfig& config = {}) {
  const LsCache cache(problem);
  (void)geometry(cache);
  const double delta = config.delta > 0.0
                           ? config.delta
                           : std::sqrt(std::numeric_limits<double>::epsilon()) * scales.scale_A;
  const Matrix& A = problem.A();
  auto ratio = [&](const Matrix& dA) {
    const LsCache perturbed(LsProblem(A + delta * dA, problem.b()), cache.tolerances());
    return ((perturbed.r() - cache.r()).norm() / scales.scale_r) / (delta / scales.scale_A);
  };

  std::vector<Matrix> attaining;
  const DirectionCandidate wc = worst_case_direction(cache);
  attaining.push_back(attaining_perturbation(cache, wc.delta_r));
  for (const Vector& d : {detail::unit_residual(cache), detail::smallest_left_vector(cache)}) {
    if (g_objective(cache, d) > 0.0) attaining.push_back(attaining_perturbation(cache, d));
  }
  double best = 0.0;
  for (const Matrix& dA : attaining) {
    best = std::max(best, ratio(dA));
    best = std::max(best, ratio(-dA));
  }

  if (config.samples > 0) {
    const std::vector<double> values =
        detail::parallel_map(config.samples, config.threads, [&](std::size_t i) {
          return ratio(detail::probe_perturbation(config.seed, i, A.rows(), A.cols()));
        });
    best = std::max(best, values[detail::argmax(values)]);
  }
  return best;
}

}  // namespace lsqcond

#endif  // LSQCOND_JACOBIAN_HPP_
