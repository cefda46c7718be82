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

#ifndef LSQCOND_CONDITIONING_HPP_
#define LSQCOND_CONDITIONING_HPP_

// Condition numbers of the residual r and the projection Ax with respect to
// A and b under scaled 2-norms ||dA||/scale_A, ||db||/scale_b, ||dr||/scale_r,
// ||d(Ax)||/scale_p. The dependence on A is only known to within a factor of
// sqrt(2), so both ends of that interval are reported.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lsqcond/errors.hpp"
#include "lsqcond/lsq_core.hpp"

namespace lsqcond {

enum class ScalePreset { Relative, BRelative, Absolute };

constexpr std::string_view preset_name(ScalePreset p) noexcept {
  switch (p) {
    case ScalePreset::Relative: return "relative";
    case ScalePreset::BRelative: return "b-relative";
    case ScalePreset::Absolute: return "absolute";
  }
  return "relative";
}

inline ScalePreset parse_preset(std::string_view name) {
  if (name == "relative") return ScalePreset::Relative;
  if (name == "b-relative") return ScalePreset::BRelative;
  if (name == "absolute") return ScalePreset::Absolute;
  throw Error(ErrorKind::ParamOutOfRange, "unknown scale preset '" + std::string(name) + "'");
}

struct ScaleFactors {
  double scale_A = 1.0;
  double scale_b = 1.0;
  double scale_r = 1.0;
  double scale_p = 1.0;

  ScaleFactors() = default;
  ScaleFactors(double a, double b, double r, double p)
      : scale_A(a), scale_b(b), scale_r(r), scale_p(p) {
    for (double s : {a, b, r, p})
      if (!(s > 0.0) || !std::isfinite(s))
        throw Error(ErrorKind::ParamOutOfRange, "scale factors must be positive and finite");
  }

  // ||A||, ||b||, ||r||, ||Ax||
  static ScaleFactors relative(const LsCache& c) {
    return {c.norm_A(), c.norm_b(), c.norm_r(), c.norm_Ax()};
  }
  // residual and projection measured against ||b||
  static ScaleFactors b_relative(const LsCache& c) {
    return {c.norm_A(), c.norm_b(), c.norm_b(), c.norm_b()};
  }
  static ScaleFactors absolute() { return {1.0, 1.0, 1.0, 1.0}; }

  static ScaleFactors from_preset(ScalePreset p, const LsCache& c) {
    switch (p) {
      case ScalePreset::Relative: return relative(c);
      case ScalePreset::BRelative: return b_relative(c);
      case ScalePreset::Absolute: return absolute();
    }
    return relative(c);
  }
};

enum class Target { Residual, Projection };

struct ConditionEstimates {
  double chi_b = 0.0;
  double chi_A_lower = 0.0;
  double chi_A_upper = 0.0;
  Target target = Target::Residual;
};

// sqrt((||r||/sigma_min)^2 + ||x||^2): the unscaled upper estimate for the
// residual's sensitivity to A.
inline double unscaled_upper(const LsCache& cache) {
  return std::hypot(cache.norm_r() / cache.sigma_min(), cache.norm_x());
}

inline double residual_condition_wrt_b(const ScaleFactors& s) { return s.scale_b / s.scale_r; }

// `geometry(cache)` must have succeeded for the result to be meaningful.
inline ConditionEstimates residual_condition_bounds(const LsCache& cache, const Geometry& /*geom*/,
                                                    const ScaleFactors& s) {
  ConditionEstimates est;
  est.target = Target::Residual;
  est.chi_A_upper = s.scale_A / s.scale_r * unscaled_upper(cache);
  est.chi_A_lower = est.chi_A_upper / std::numbers::sqrt2;
  est.chi_b = residual_condition_wrt_b(s);
  return est;
}

// kappa * sqrt(1 + (cot(theta)/v)^2): the same upper estimate written in the
// three governing quantities, valid for the relative preset.
inline double residual_upper_from_geometry(const Geometry& g) {
  return g.kappa * std::hypot(1.0, g.cot_theta / g.vds);
}

inline ConditionEstimates projection_condition_bounds(const LsCache& cache,
                                                      const Geometry& /*geom*/,
                                                      const ScaleFactors& s) {
  if (!(cache.norm_Ax() > 0.0))
    throw Error(ErrorKind::ZeroSolution, "projection Ax is zero");
  ConditionEstimates est;
  est.target = Target::Projection;
  est.chi_A_upper = s.scale_A / s.scale_p * unscaled_upper(cache);
  est.chi_A_lower = est.chi_A_upper / std::numbers::sqrt2;
  est.chi_b = s.scale_b / s.scale_p;
  return est;
}

// kappa * sqrt(tan^2(theta) + 1/v^2), relative preset.
inline double projection_upper_from_geometry(const Geometry& g) {
  return g.kappa * std::hypot(g.tan_theta(), 1.0 / g.vds);
}

struct Table2Row {
  std::string scale_choice;
  double tight_estimate = 0.0;
  double chi_b = 0.0;
};

// Effect of measuring dr against ||r|| versus ||b||.
inline std::vector<Table2Row> table2_variants(const Geometry& g) {
  const double s = std::sin(g.theta);
  const double c = std::cos(g.theta);
  return {
      {"R=||r||", g.kappa * std::hypot(1.0, g.cot_theta / g.vds), 1.0 / s},
      {"R=||b||", g.kappa * std::hypot(s, c / g.vds), 1.0},
  };
}

inline std::vector<Table2Row> table2_variants(const LsCache& /*cache*/, const Geometry& g) {
  return table2_variants(g);
}

// First-order right-hand side chi_A * ||dA||/scale_A + chi_b * ||db||/scale_b,
// taken with the upper estimate for chi_A.
inline double error_bound_rhs(const ConditionEstimates& est, double dA_norm, double db_norm,
                              const ScaleFactors& s) {
  if (dA_norm < 0.0 || db_norm < 0.0)
    throw Error(ErrorKind::ParamOutOfRange, "perturbation norms must be non-negative");
  return est.chi_A_upper * (dA_norm / s.scale_A) + est.chi_b * (db_norm / s.scale_b);
}

}  // namespace lsqcond

#endif  // LSQCOND_CONDITIONING_HPP_
