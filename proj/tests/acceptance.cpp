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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "lsqcond.hpp"
#include "oracles.hpp"

using namespace lsqcond;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

struct Verdict {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict worked_example() {
  const auto t0 = std::chrono::steady_clock::now();
  double geom_gap = 0.0, fd_gap = 0.0;
  for (double a : {0.5, 0.1, 0.01})
    for (double b : {1.0, 10.0, 100.0})
      for (double phi : {0.0, kPi / 4, kPi / 2}) {
        const GvlExample ex = gvl_example(a, b, phi, 0.0);
        const Geometry g = geometry(LsCache(ex.problem));
        const double c = std::cos(phi), s = std::sin(phi);
        geom_gap = std::max({geom_gap, oracle::rel(g.kappa, 1.0 / a),
                             oracle::rel(g.vds, 1.0 / std::hypot(a * c, s)),
                             oracle::rel(g.cot_theta, b)});

        const double eps = 1e-6;
        const GvlExample pert = gvl_example(a, b, phi, eps);
        const Vector dr = oracle::residual_change(pert.problem.A(), pert.delta_A, pert.problem.b());
        const double r_norm = oracle::qr_solve(pert.problem.A(), pert.problem.b()).r.norm();
        const double coeff = std::sqrt(1.0 + a * a + std::pow(a * b * c + b * s, 2)) / a;
        fd_gap = std::max(fd_gap, oracle::rel(dr.norm() / r_norm, coeff * eps));
      }
  const double secs = seconds_since(t0);
  return {geom_gap <= 1e-10 && fd_gap <= 1e-4 && secs < 5.0,
          "closed-form gap " + fmt(geom_gap) + ", perturbed-solve gap " + fmt(fd_gap) + ", " +
              fmt(secs) + " s"};
}

Verdict sandwich() {
  const auto t0 = std::chrono::steady_clock::now();
  int outside = 0;
  double lo_margin = INFINITY, hi_margin = INFINITY;
  for (std::size_t i = 0; i < 200; ++i) {
    const LsCache c(random_problem(sample_ensemble_spec(2026, i)));
    const ScaleFactors s = ScaleFactors::relative(c);
    const auto est = residual_condition_bounds(c, geometry(c), s);
    const EmpiricalEstimate e = empirical_condition_wrt_A(c, s, {2000, 60, i, 0});
    const double lo = est.chi_A_upper / kSqrt2;
    const double hi = est.chi_A_upper * (1 + 1e-8);
    if (!(e.value >= lo && e.value <= hi)) ++outside;
    lo_margin = std::min(lo_margin, e.value / lo - 1.0);
    hi_margin = std::min(hi_margin, 1.0 - e.value / hi);
  }
  const double secs = seconds_since(t0);
  return {outside == 0 && secs < 60.0,
          std::to_string(outside) + " of 200 outside, min margins " + fmt(lo_margin) + " / " +
              fmt(hi_margin) + ", " + fmt(secs) + " s"};
}

Verdict jacobian_remainder() {
  double min_ratio = INFINITY, max_ratio = 0.0, max_scaled = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const LsCache c(random_problem(sample_ensemble_spec(303, i, {30, 10, 3.0})));
    auto rng = sample_rng(304, i);
    Matrix dir = gaussian_matrix(rng, c.problem().rows(), c.problem().cols());
    dir /= spectral_norm(dir);
    double previous = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double h = 1e-3 * c.sigma_min() * std::pow(0.5, k);
      const Vector exact = oracle::residual_change(c.problem().A(), h * dir, c.problem().b());
      const double rem = (exact - apply_residual_jacobian(c, h * dir).dr).norm();
      // remainder relative to the natural second-order scale ||b|| / sigma_min^2
      max_scaled = std::max(max_scaled, rem / (h * h) * c.sigma_min() * c.sigma_min() / c.norm_b());
      if (k > 0) {
        min_ratio = std::min(min_ratio, previous / rem);
        max_ratio = std::max(max_ratio, previous / rem);
      }
      previous = rem;
    }
  }
  return {min_ratio >= 3.5 && max_ratio <= 4.5 && std::isfinite(max_scaled),
          "halving ratios in [" + fmt(min_ratio) + ", " + fmt(max_ratio) +
              "], max remainder/||dA||^2 (scaled) " + fmt(max_scaled)};
}

Verdict dual_norm() {
  double worst = 0.0;
  int raw_below = 0;
  bool sandwich_ok = true;
  for (std::size_t i = 0; i < 20; ++i) {
    const LsCache c(random_problem(sample_ensemble_spec(404, i)));
    for (std::size_t k = 0; k < 25; ++k) {
      auto rng = sample_rng(405 + i, k);
      Vector d = gaussian_vector(rng, c.problem().rows());
      d.normalize();
      const Rank2Adjoint a = adjoint_rank2(c, d);
      Matrix W(a.u1.size(), 2), Z(a.v1.size(), 2);
      W << a.u1, a.u2;
      Z << a.v1, a.v2;
      const double g = g_objective(a);
      worst = std::max({worst, oracle::rel(g, oracle::rank2_nuclear_norm(W, Z)),
                        oracle::rel(g, nuclear_norm(a.outer_sum()))});
      const auto sw = sandwich_bounds(a);
      if (g < sw.lower) ++raw_below;
      const DirectionCandidate cand = evaluate_direction(c, d, Origin::Sampled);
      sandwich_ok = sandwich_ok && g <= sw.upper * (1 + 1e-12) &&
                    cand.L_value <= cand.g_value + 1e-10 &&
                    cand.g_value <= cand.U_value + 1e-10;
    }
  }
  return {worst <= 1e-10 && sandwich_ok,
          "max relative gap " + fmt(worst) + ", L <= g <= U on all 500 candidates (" +
              std::to_string(raw_below) + " raw directions below L, replaced by their reflection)"};
}

Verdict attainment_e1() {
  const LsCache c(LsProblem(Matrix{{1.0}, {0.0}}, Vector{{1.0, 1.0}}));
  const EmpiricalEstimate e = empirical_condition_wrt_A(c, ScaleFactors::relative(c));
  const Matrix dA = attaining_perturbation(c, e.best_direction.delta_r);
  const double eps = 1e-7;
  const Vector dr = oracle::residual_change(c.problem().A(), eps * dA, c.problem().b());
  const double ratio = dr.norm() / eps / spectral_norm(dA);
  const double g1 = std::abs(e.value - kSqrt2);
  const double g2 = oracle::rel(ratio, kSqrt2);
  const double g3 = std::abs(spectral_norm(dA) - 1.0);
  return {g1 <= 1e-9 && g2 <= 1e-5 && g3 <= 1e-12,
          "empirical - sqrt2 = " + fmt(g1) + ", attaining ratio gap " + fmt(g2) + ", ||dA|| - 1 = " +
              fmt(g3)};
}

Verdict rhs_attainment() {
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const LsCache c(random_problem(sample_ensemble_spec(606, i)));
    const ScaleFactors s = ScaleFactors::relative(c);
    const Vector db = 0.1 * c.norm_b() * (c.r() / c.norm_r());
    const LsCache p(LsProblem(c.problem().A(), c.problem().b() + db));
    const double ratio = ((p.r() - c.r()).norm() / s.scale_r) / (db.norm() / s.scale_b);
    worst = std::max(worst, oracle::rel(ratio, geometry(c).csc_theta()));
  }
  return {worst <= 1e-10, "max relative gap to csc(theta) " + fmt(worst)};
}

Verdict prior_bounds() {
  double wedin_min = INFINITY, wedin_max = 0.0;
  for (std::uint64_t seed : {707u, 708u, 709u})
    for (std::size_t i = 0; i < 200; ++i) {
      const LsCache c(random_problem(sample_ensemble_spec(seed, i)));
      const double ratio = wedin_estimate(c) / unscaled_upper(c);
      wedin_min = std::min(wedin_min, ratio);
      wedin_max = std::max(wedin_max, ratio);
    }
  const LsCache w(gvl_example(0.01, 1000.0, 0.0, 0.0).problem);
  const double stewart = stewart_estimate(w) / unscaled_upper(w);
  const double gvlh = gvlh_estimate(geometry(w)).stated / tight_sum_b_relative(w);
  const bool ok = wedin_min >= 1.0 - 1e-12 && wedin_max <= kSqrt2 + 1e-9 &&
                  std::abs(stewart / 100.0 - 1.0) <= 0.05 && std::abs(gvlh / 100.0 - 1.0) <= 0.05;
  return {ok, "wedin/tight in [" + fmt(wedin_min) + ", " + fmt(wedin_max) + "], stewart/tight " +
                  fmt(stewart) + ", gvlh/tight sum " + fmt(gvlh)};
}

Verdict block_norms() {
  double worst = -INFINITY;
  auto rng = sample_rng(808, 0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (std::size_t i = 0; i < 100; ++i) {
    const int rows = dim(rng);
    const Matrix A = gaussian_matrix(rng, rows, dim(rng));
    const Matrix B = gaussian_matrix(rng, rows, dim(rng));
    const BlockNormCase c = block_norm_case(A, B, 20, i);
    const double sum = c.norm_A + c.norm_B;
    worst = std::max({worst, std::max(c.norm_A, c.norm_B) - c.norm_joint_est,
                      c.norm_joint_est - sum, sum - 2.0 * c.norm_joint_est});
  }
  return {worst <= 1e-6, "largest violation " + fmt(worst) + " (slack 1e-6)"};
}

Verdict projection() {
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const LsCache c(random_problem(sample_ensemble_spec(909, i)));
    const Geometry g = geometry(c);
    const ScaleFactors abs = ScaleFactors::absolute();
    const auto pa = projection_condition_bounds(c, g, abs);
    const auto ra = residual_condition_bounds(c, g, abs);
    const auto pr = projection_condition_bounds(c, g, ScaleFactors::relative(c));
    const auto rr = residual_condition_bounds(c, g, ScaleFactors::relative(c));
    worst = std::max({worst, oracle::rel(pa.chi_A_upper, ra.chi_A_upper),
                      oracle::rel(pr.chi_A_upper * c.norm_Ax(), rr.chi_A_upper * c.norm_r()),
                      oracle::rel(pr.chi_b, 1.0 / std::cos(g.theta))});
  }
  return {worst <= 1e-12, "max relative gap " + fmt(worst)};
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "lsqcond_acceptance";
  std::filesystem::remove_all(dir);
  auto run = [](std::vector<std::string> args, std::string& out) {
    args.insert(args.begin(), "lsqcond");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
  };
  std::string ignored, first, second;
  int codes = run({"generate", "ensemble", "--m", "20", "--n", "6", "--kappa", "1e4", "--theta",
                   "0.05", "--mix", "0.3", "--seed", "10", "--out-dir", dir.string()},
                  ignored);
  const std::vector<std::string> analyze = {"analyze", "--matrix", (dir / "A.mtx").string(),
                                            "--rhs", (dir / "b.txt").string(), "--seed", "42"};
  codes += run(analyze, first);
  codes += run(analyze, second);
  std::filesystem::remove_all(dir);
  return {codes == 0 && !first.empty() && first == second,
          std::to_string(first.size()) + " bytes, " + (first == second ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"worked 3x2 example closed forms and perturbed solve", worked_example},
      {"sqrt(2) sandwich of the empirical estimate", sandwich},
      {"quadratic Jacobian remainder", jacobian_remainder},
      {"dual-norm objective equals nuclear norm", dual_norm},
      {"attainment for A=[1;0], b=(1,1)", attainment_e1},
      {"chi_r(b) = csc(theta) attained along r", rhs_attainment},
      {"prior bound dominance and worst cases", prior_bounds},
      {"block norm factor-of-two band", block_norms},
      {"projection consistency", projection},
      {"analyze reports are byte-identical", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2zu  %s  (%s)\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
