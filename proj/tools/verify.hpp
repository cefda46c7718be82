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

#ifndef LSQCOND_TOOLS_VERIFY_HPP_
#define LSQCOND_TOOLS_VERIFY_HPP_

// Invariant suites behind `lsqcond verify`. Each suite runs over a seeded
// ensemble and reports the worst observed violation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lsqcond.hpp"

namespace lsqcond::cli {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  std::size_t problems = 200;
  std::size_t samples = 2000;
};

namespace detail {

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

}  // namespace detail

inline std::vector<SuiteResult> run_verification(const VerifyConfig& cfg) {
  using detail::fmt;
  using detail::rel;
  std::vector<SuiteResult> results;

  std::vector<LsCache> caches;
  caches.reserve(cfg.problems);
  for (std::size_t i = 0; i < cfg.problems; ++i)
    caches.emplace_back(random_problem(sample_ensemble_spec(cfg.seed, i)));

  {
    double worst_ortho = 0, worst_pyth = 0, worst_idem = 0;
    for (const auto& c : caches) {
      const Matrix& A = c.problem().A();
      worst_ortho = std::max(worst_ortho, (A.transpose() * c.r()).norm() / (c.norm_A() * c.norm_b()));
      worst_pyth = std::max(worst_pyth, rel(c.Ax().squaredNorm() + c.r().squaredNorm(),
                                            c.problem().b().squaredNorm()));
      const Vector pb = c.project(c.problem().b());
      worst_idem = std::max(worst_idem, (c.project(pb) - pb).norm() / c.norm_b());
    }
    results.push_back({"solve invariants",
                       worst_ortho <= 1e-12 && worst_pyth <= 1e-12 && worst_idem <= 1e-12,
                       "max ||A^t r||/(||A|| ||b||) " + fmt(worst_ortho) + ", pythagoras " +
                           fmt(worst_pyth) + ", idempotence " + fmt(worst_idem)});
  }

  {
    double worst_v = 0, worst_forms = 0;
    for (const auto& c : caches) {
      const Geometry g = geometry(c);
      worst_v = std::max({worst_v, (1.0 - g.vds) / 1.0, (g.vds - g.kappa) / g.kappa});
      const auto est = residual_condition_bounds(c, g, ScaleFactors::relative(c));
      worst_forms = std::max(worst_forms, rel(est.chi_A_upper, residual_upper_from_geometry(g)));
    }
    results.push_back({"geometry and closed forms", worst_v <= 1e-12 && worst_forms <= 1e-12,
                       "1 <= v <= kappa slack " + fmt(worst_v) + ", two upper forms differ by " +
                           fmt(worst_forms)});
  }

  {
    std::size_t bad = 0;
    double lo_margin = INFINITY, hi_margin = INFINITY;
    SamplerConfig sc;
    sc.samples = cfg.samples;
    sc.seed = cfg.seed;
    for (const auto& c : caches) {
      const auto s = ScaleFactors::relative(c);
      const auto est = residual_condition_bounds(c, geometry(c), s);
      const auto emp = empirical_condition_wrt_A(c, s, sc);
      lo_margin = std::min(lo_margin, emp.value / est.chi_A_lower - 1.0);
      hi_margin = std::min(hi_margin, 1.0 - emp.value / (est.chi_A_upper * (1 + 1e-8)));
      if (emp.value < est.chi_A_lower * (1 - 1e-12) || emp.value > est.chi_A_upper * (1 + 1e-8)) ++bad;
    }
    results.push_back({"sqrt(2) sandwich of the empirical estimate", bad == 0,
                       std::to_string(bad) + " outside; min margins " + fmt(lo_margin) + " / " +
                           fmt(hi_margin)});
  }

  {
    double worst = 0;
    bool pointwise = true;
    for (std::size_t i = 0; i < caches.size(); ++i) {
      const auto& c = caches[i];
      for (std::size_t k = 0; k < 5; ++k) {
        auto rng = sample_rng(cfg.seed ^ 0x5eedull, i * 5 + k);
        Vector d = gaussian_vector(rng, c.problem().rows());
        d.normalize();
        const auto adj = adjoint_rank2(c, d);
        const double g = g_objective(adj);
        worst = std::max(worst, rel(g, nuclear_norm(adj.outer_sum())));
        // L bounds g from below only for the kept member of the reflected pair
        const DirectionCandidate kept = evaluate_direction(c, d, Origin::Sampled);
        pointwise = pointwise && g <= kept.U_value * (1 + 1e-12) &&
                    kept.L_value <= kept.g_value * (1 + 1e-12) &&
                    kept.g_value <= kept.U_value * (1 + 1e-12);
      }
    }
    results.push_back({"dual-norm objective equals nuclear norm", worst <= 1e-10 && pointwise,
                       "max relative gap " + fmt(worst) + (pointwise ? "" : ", L <= g <= U violated")});
  }

  {
    bool ok = true;
    double worst_wedin = 0, worst_ratio_excess = -INFINITY;
    for (const auto& c : caches) {
      for (const auto& row : compare_table(c)) {
        ok = ok && row.ratio_to_tight >= 1 - 1e-12 && row.ratio_to_tight <= row.ratio_bound + 1e-9;
        worst_ratio_excess = std::max(worst_ratio_excess, row.ratio_to_tight - row.ratio_bound);
        if (row.source == PriorSource::Wedin) worst_wedin = std::max(worst_wedin, row.ratio_to_tight);
      }
      const Geometry g = geometry(c);
      const double sum = tight_sum_b_relative(c);
      const auto gv = gvlh_estimate(g);
      ok = ok && sum <= gv.sum_bound * (1 + 1e-12) && gv.sum_bound <= gv.stated;
    }
    results.push_back({"prior bounds dominate the tight estimate", ok,
                       "max wedin ratio " + fmt(worst_wedin) + ", max ratio - bound " +
                           fmt(worst_ratio_excess)});
  }

  {
    double worst = 0;
    for (const auto& c : caches) {
      const Geometry g = geometry(c);
      const Vector rhat = c.r() / c.norm_r();
      const double eps = 0.1 * c.norm_b();
      const LsCache p(LsProblem(c.problem().A(), c.problem().b() + eps * rhat));
      const double ratio = ((p.r() - c.r()).norm() / c.norm_r()) / (eps / c.norm_b());
      worst = std::max(worst, rel(ratio, g.csc_theta()));
    }
    results.push_back({"chi_r(b) = csc(theta) attained along r", worst <= 1e-10,
                       "max relative gap " + fmt(worst)});
  }

  {
    double worst = 0;
    for (const auto& c : caches) {
      const Geometry g = geometry(c);
      const auto s = ScaleFactors::relative(c);
      const auto res = residual_condition_bounds(c, g, s);
      const auto proj = projection_condition_bounds(c, g, s);
      worst = std::max({worst, rel(proj.chi_A_upper * s.scale_p, res.chi_A_upper * s.scale_r),
                        rel(proj.chi_b, g.sec_theta()),
                        rel(proj.chi_A_upper, projection_upper_from_geometry(g))});
    }
    results.push_back({"projection consistency", worst <= 1e-12, "max relative gap " + fmt(worst)});
  }

  {
    double worst = 0;
    for (double a : {0.5, 0.1, 0.01})
      for (double b : {1.0, 10.0, 100.0})
        for (double phi : {0.0, std::numbers::pi / 4, std::numbers::pi / 2}) {
          const GvlExample ex = gvl_example(a, b, phi, 0.0);
          const LsCache c(ex.problem);
          const Geometry g = geometry(c);
          const auto est = residual_condition_bounds(c, g, ScaleFactors::relative(c));
          worst = std::max({worst, rel(g.kappa, ex.expected.kappa), rel(g.vds, ex.expected.vds),
                            rel(g.cot_theta, ex.expected.cot_theta),
                            rel(est.chi_A_upper, ex.expected.chi_A_upper)});
        }
    results.push_back({"worked 3x2 example closed forms", worst <= 1e-10,
                       "max relative gap " + fmt(worst)});
  }

  {
    bool ok = true;
    double lo = INFINITY, hi = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(cfg.problems, 100); ++i) {
      auto rng = sample_rng(cfg.seed ^ 0xb10cull, i);
      std::uniform_int_distribution<Eigen::Index> dim(1, 6);
      const Eigen::Index rows = dim(rng);
      const Matrix A = gaussian_matrix(rng, rows, dim(rng));
      const Matrix B = gaussian_matrix(rng, rows, dim(rng));
      const auto bc = block_norm_case(A, B, 64, cfg.seed + i);
      const double mx = std::max(bc.norm_A, bc.norm_B);
      const double sum = bc.norm_A + bc.norm_B;
      ok = ok && mx <= bc.norm_joint_est + 1e-6 && bc.norm_joint_est <= sum + 1e-6 &&
           sum <= 2 * bc.norm_joint_est + 1e-6;
      lo = std::min(lo, bc.norm_joint_est / sum);
      hi = std::max(hi, bc.norm_joint_est / sum);
    }
    results.push_back({"block norm factor-of-two band", ok,
                       "joint/(|A|+|B|) in [" + fmt(lo) + ", " + fmt(hi) + "]"});
  }
  return results;
}

}  // namespace lsqcond::cli

#endif  // LSQCOND_TOOLS_VERIFY_HPP_
