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

#ifndef LSQCOND_CONFIG_HPP_
#define LSQCOND_CONFIG_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>

#include <Eigen/Dense>

namespace lsqcond {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative tolerances used for rank decisions and invariant checks.
struct Tolerances {
  double rank_tol = 1e-12;    // sigma_min <= rank_tol * sigma_max means rank deficient
  double resid_tol = 1e-14;   // ||r|| <= resid_tol * ||b|| means zero residual
  double ortho_tol = 1e-12;
  double pythag_tol = 1e-12;
  double svd_tol = 1e-12;
};

// Deterministic per-sample generator: the stream for sample `index` depends
// only on (seed, index), never on evaluation order or thread count.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), 0x6c73u};
  return std::mt19937_64(seq);
}

inline Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index size) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(size);
  for (Eigen::Index i = 0; i < size; ++i) out[i] = normal(rng);
  return out;
}

inline Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

// Worker count for sampling loops. LSQCOND_THREADS caps it; results never
// depend on the value.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LSQCOND_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

}  // namespace lsqcond

#endif  // LSQCOND_CONFIG_HPP_
