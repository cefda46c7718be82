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

#ifndef LSQCOND_PRIOR_BOUNDS_HPP_
#define LSQCOND_PRIOR_BOUNDS_HPP_

// Textbook estimates for the residual's sensitivity to A, each compared with
// the tight upper estimate evaluated under the same scale convention.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lsqcond/conditioning.hpp"
#include "lsqcond/lsq_core.hpp"

namespace lsqcond {

enum class PriorSource { Wedin, Stewart, Gvlh };

inline const char* source_name(PriorSource s) {
  switch (s) {
    case PriorSource::Wedin: return "wedin";
    case PriorSource::Stewart: return "stewart";
    case PriorSource::Gvlh: return "gvlh";
  }
  return "wedin";
}

struct PriorBoundRow {
  PriorSource source = PriorSource::Wedin;
  double value = 0.0;
  std::string scale_convention;
  double tight = 0.0;           // tight estimate under the same convention
  double ratio_to_tight = 1.0;  // value / tight
  double table1_factor = 1.0;   // published maximum overestimation factor
  double ratio_bound = 1.0;     // provable bound on ratio_to_tight
};

// ||r||/sigma_min + ||x||; db = 0, scale_A = scale_r = 1.
inline double wedin_estimate(const LsCache& cache) {
  (void)geometry(cache);
  return cache.norm_r() / cache.sigma_min() + cache.norm_x();
}

// ||b||/sigma_min; db = 0, scale_A = scale_r = 1.
inline double stewart_estimate(const LsCache& cache) {
  (void)geometry(cache);
  return cache.norm_b() / cache.sigma_min();
}

struct GvlhEstimate {
  double stated = 0.0;     // 2 kappa + 1
  double sum_bound = 0.0;  // kappa + 1
};

// Joint bound for chi_r(A) + chi_r(b) with scale_A = ||A||, scale_b = scale_r = ||b||.
inline GvlhEstimate gvlh_estimate(const Geometry& g) { return {2.0 * g.kappa + 1.0, g.kappa + 1.0}; }

// chi_A_upper + chi_b under the b-relative preset.
inline double tight_sum_b_relative(const LsCache& cache) {
  const ConditionEstimates est =
      residual_condition_bounds(cache, geometry(cache), ScaleFactors::b_relative(cache));
  return est.chi_A_upper + est.chi_b;
}

inline std::vector<PriorBoundRow> compare_table(const LsCache& cache) {
  const Geometry g = geometry(cache);
  const double tight_abs = unscaled_upper(cache);
  std::vector<PriorBoundRow> rows;

  PriorBoundRow w;
  w.source = PriorSource::Wedin;
  w.value = wedin_estimate(cache);
  w.scale_convention = "db=0, A=1, R=1";
  w.tight = tight_abs;
  w.ratio_to_tight = w.value / w.tight;
  w.table1_factor = 2.0;
  w.ratio_bound = std::numbers::sqrt2;
  rows.push_back(w);

  PriorBoundRow s;
  s.source = PriorSource::Stewart;
  s.value = stewart_estimate(cache);
  s.scale_convention = "db=0, A=1, R=1";
  s.tight = tight_abs;
  s.ratio_to_tight = s.value / s.tight;
  s.table1_factor = std::numbers::sqrt2 * g.kappa;
  s.ratio_bound = g.vds;
  rows.push_back(s);

  PriorBoundRow h;
  h.source = PriorSource::Gvlh;
  h.value = gvlh_estimate(g).stated;
  h.scale_convention = "A=||A||, B=||b||, R=||b||; compared with chi_r(A)+chi_r(b)";
  h.tight = tight_sum_b_relative(cache);
  h.ratio_to_tight = h.value / h.tight;
  // The tight sum is at least 2, so the ratio never exceeds kappa + 1/2;
  // kappa is the large-kappa limit.
  h.table1_factor = g.kappa;
  h.ratio_bound = g.kappa + 0.5;
  rows.push_back(h);
  return rows;
}

}  // namespace lsqcond

#endif  // LSQCOND_PRIOR_BOUNDS_HPP_
