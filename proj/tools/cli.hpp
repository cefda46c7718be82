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

#ifndef LSQCOND_TOOLS_CLI_HPP_
#define LSQCOND_TOOLS_CLI_HPP_

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json_out.hpp"
#include "lsqcond.hpp"
#include "verify.hpp"

namespace lsqcond::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kIoOrParse = 2;
inline constexpr int kNumerical = 3;

inline constexpr const char* kSchema = "lsq-cond/1";

struct InputMeta {
  std::string matrix_file;
  std::string matrix_hash;
  std::string rhs_file;
  std::string rhs_hash;
};

struct LoadedProblem {
  LsProblem problem;
  InputMeta meta;
};

inline LoadedProblem load_problem(const std::string& matrix_path, const std::string& rhs_path) {
  const std::string mtext = io::read_file(matrix_path);
  const std::string btext = io::read_file(rhs_path);
  Matrix A = io::parse_matrix_market(mtext, matrix_path);
  Vector b = io::parse_vector(btext, rhs_path);
  return {LsProblem(std::move(A), std::move(b)),
          {matrix_path, io::fnv1a_hex(mtext), rhs_path, io::fnv1a_hex(btext)}};
}

inline Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline Json estimates_json(const ConditionEstimates& e) {
  Json j;
  j["chi_A_lower"] = e.chi_A_lower;
  j["chi_A_upper"] = e.chi_A_upper;
  j["chi_b"] = e.chi_b;
  return j;
}

inline Json scales_json(const ScaleFactors& s) {
  Json j;
  j["scale_A"] = s.scale_A;
  j["scale_b"] = s.scale_b;
  j["scale_r"] = s.scale_r;
  j["scale_p"] = s.scale_p;
  return j;
}

inline Json prior_json(const std::vector<PriorBoundRow>& rows) {
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json j;
    j["source"] = source_name(row.source);
    j["value"] = row.value;
    j["scale_convention"] = row.scale_convention;
    j["tight"] = row.tight;
    j["ratio_to_tight"] = row.ratio_to_tight;
    j["table1_factor"] = row.table1_factor;
    j["ratio_bound"] = row.ratio_bound;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Json analyze_report(const LsProblem& problem, const InputMeta& meta, ScalePreset preset,
                           const SamplerConfig& sampler, bool timings) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const LsCache cache(problem);
  const Geometry g = geometry(cache);
  const auto t1 = clock::now();

  Json report;
  report["schema"] = kSchema;
  Json jp;
  jp["m"] = problem.rows();
  jp["n"] = problem.cols();
  jp["matrix_file"] = meta.matrix_file;
  jp["matrix_fnv1a"] = meta.matrix_hash;
  jp["rhs_file"] = meta.rhs_file;
  jp["rhs_fnv1a"] = meta.rhs_hash;
  report["problem"] = std::move(jp);

  Json jg;
  jg["kappa"] = g.kappa;
  jg["theta"] = g.theta;
  jg["cot_theta"] = g.cot_theta;
  jg["csc_theta"] = g.csc_theta();
  jg["vds"] = g.vds;
  jg["sigma_min"] = g.sigma_min;
  jg["sigma_max"] = cache.norm_A();
  jg["norm_b"] = cache.norm_b();
  jg["norm_r"] = cache.norm_r();
  jg["norm_x"] = cache.norm_x();
  jg["norm_Ax"] = cache.norm_Ax();
  report["geometry"] = std::move(jg);

  Json jest;
  for (ScalePreset p : {ScalePreset::Relative, ScalePreset::BRelative, ScalePreset::Absolute}) {
    const ScaleFactors s = ScaleFactors::from_preset(p, cache);
    Json e;
    e["scales"] = scales_json(s);
    e["residual"] = estimates_json(residual_condition_bounds(cache, g, s));
    e["projection"] = estimates_json(projection_condition_bounds(cache, g, s));
    jest[std::string(preset_name(p))] = std::move(e);
  }
  report["estimates"] = std::move(jest);

  Json t2 = Json::array();
  for (const auto& row : table2_variants(cache, g)) {
    Json j;
    j["scale_choice"] = row.scale_choice;
    j["tight_estimate"] = row.tight_estimate;
    j["chi_b"] = row.chi_b;
    t2.push_back(std::move(j));
  }
  report["table2"] = std::move(t2);

  const auto t2s = clock::now();
  const ScaleFactors s = ScaleFactors::from_preset(preset, cache);
  const ConditionEstimates est = residual_condition_bounds(cache, g, s);
  const EmpiricalEstimate emp = empirical_condition_wrt_A(cache, s, sampler);
  const auto t3 = clock::now();
  Json je;
  je["preset"] = preset_name(preset);
  je["value"] = emp.value;
  je["lower"] = est.chi_A_lower;
  je["upper"] = est.chi_A_upper;
  je["in_interval"] =
      emp.value >= est.chi_A_lower * (1 - 1e-12) && emp.value <= est.chi_A_upper * (1 + 1e-8);
  je["seed"] = emp.seed;
  je["samples"] = emp.samples_used;
  je["refine_iterations"] = sampler.refine_iterations;
  je["origin"] = origin_name(emp.best_direction.origin);
  je["g"] = emp.best_direction.g_value;
  je["L"] = emp.best_direction.L_value;
  je["U"] = emp.best_direction.U_value;
  report["empirical"] = std::move(je);

  report["prior_bounds"] = prior_json(compare_table(cache));
  const auto t4 = clock::now();

  if (timings) {
    auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
    Json jt;
    jt["solve_ms"] = ms(t0, t1);
    jt["empirical_ms"] = ms(t2s, t3);
    jt["total_ms"] = ms(t0, t4);
    report["timings"] = std::move(jt);
  }
  return report;
}

inline Json gvl_expected_json(const GvlExample& ex) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "gvl";
  j["alpha"] = ex.alpha;
  j["beta"] = ex.beta;
  j["phi"] = ex.phi;
  j["epsilon"] = ex.epsilon;
  Json e;
  e["x"] = vector_json(ex.expected.x);
  e["r"] = vector_json(ex.expected.r);
  e["kappa"] = ex.expected.kappa;
  e["vds"] = ex.expected.vds;
  e["cot_theta"] = ex.expected.cot_theta;
  e["chi_A_upper"] = ex.expected.chi_A_upper;
  e["dr_first_order"] = vector_json(ex.expected.dr_first_order);
  e["dr_rel_first_order"] = ex.expected.dr_rel_first_order;
  j["expected"] = std::move(e);
  return j;
}

namespace detail {

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    io::write_file(path, text);
}

inline std::string csv_num(double v) { return std::isfinite(v) ? io::format_double(v) : "nan"; }

inline std::vector<double> sweep_values(const std::vector<double>& listed, double from, double to,
                                        int steps, bool log_spaced) {
  if (!listed.empty()) return listed;
  if (steps < 1) throw Error(ErrorKind::ParamOutOfRange, "--steps must be at least 1");
  if (log_spaced && !(from > 0.0 && to > 0.0))
    throw Error(ErrorKind::ParamOutOfRange, "--log needs positive endpoints");
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    out.push_back(log_spaced ? from * std::pow(to / from, t) : from + (to - from) * t);
  }
  return out;
}

}  // namespace detail

inline std::string compare_text(const std::vector<PriorBoundRow>& rows, bool csv) {
  std::ostringstream ss;
  if (csv) {
    ss << "source,value,tight,ratio_to_tight,table1_factor,ratio_bound,scale_convention\n";
    for (const auto& r : rows)
      ss << source_name(r.source) << ',' << io::format_double(r.value) << ','
         << io::format_double(r.tight) << ',' << io::format_double(r.ratio_to_tight) << ','
         << io::format_double(r.table1_factor) << ',' << io::format_double(r.ratio_bound) << ",\""
         << r.scale_convention << "\"\n";
    return ss.str();
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %14s %14s %10s %12s %11s  %s\n", "source", "value", "tight",
                "ratio", "table1_max", "ratio_bound", "convention");
  ss << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-8s %14.6e %14.6e %10.4f %12.4e %11.4e  %s\n",
                  source_name(r.source), r.value, r.tight, r.ratio_to_tight, r.table1_factor,
                  r.ratio_bound, r.scale_convention.c_str());
    ss << line;
  }
  return ss.str();
}

inline constexpr const char* kSweepHeader =
    "param,value,kappa,theta,vds,cot_theta,chi_A_lower,chi_A_upper,chi_b,empirical,wedin,stewart,"
    "gvlh_stated,tight_sum_b_relative\n";

inline std::string sweep_row(const std::string& param, double value, const LsCache& c,
                             const SamplerConfig& sampler) {
  const Geometry g = geometry(c);
  const ScaleFactors s = ScaleFactors::relative(c);
  const ConditionEstimates est = residual_condition_bounds(c, g, s);
  const EmpiricalEstimate emp = empirical_condition_wrt_A(c, s, sampler);
  std::string row = param;
  for (double v : {value, g.kappa, g.theta, g.vds, g.cot_theta, est.chi_A_lower, est.chi_A_upper,
                   est.chi_b, emp.value, wedin_estimate(c), stewart_estimate(c),
                   gvlh_estimate(g).stated, tight_sum_b_relative(c)})
    row += "," + detail::csv_num(v);
  return row + "\n";
}

inline constexpr const char* kLanczosHeader =
    "step,alpha,beta,theta,csc_theta,tight_raw,tight_orthonormal,orthogonality_defect,krylov_theta,"
    "breakdown\n";

inline std::string lanczos_csv(const LanczosRun& run) {
  std::string out = kLanczosHeader;
  for (const auto& s : run.steps) {
    out += std::to_string(s.step);
    for (double v : {s.alpha, s.beta, s.theta, s.predicted_chi, s.tight_raw, s.tight_orthonormal,
                     s.orthogonality_defect, s.krylov_theta})
      out += "," + detail::csv_num(v);
    out += s.breakdown ? ",1\n" : ",0\n";
  }
  return out;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Condition numbers of full rank least squares residuals and projections",
               "lsqcond"};
  app.require_subcommand(1);

  // analyze
  std::string matrix_path, rhs_path, out_path, scales_name = "relative";
  std::uint64_t seed = 0;
  std::size_t samples = 2000;
  int refine = 60;
  bool timings = false;
  auto* analyze = app.add_subcommand("analyze", "Full condition report as JSON");
  analyze->add_option("--matrix", matrix_path, "Matrix Market file for A")->required();
  analyze->add_option("--rhs", rhs_path, "Vector file for b")->required();
  analyze->add_option("--scales", scales_name, "relative | b-relative | absolute")
      ->check(CLI::IsMember({"relative", "b-relative", "absolute"}));
  analyze->add_option("--seed", seed, "Sampling seed");
  analyze->add_option("--samples", samples, "Uniform sphere samples");
  analyze->add_option("--refine", refine, "Golden-section iterations");
  analyze->add_option("--out", out_path, "Output file (default stdout)");
  analyze->add_flag("--timings", timings, "Include wall-clock timings (output no longer reproducible)");

  // verify
  VerifyConfig vcfg;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites; exit 0 iff all pass");
  verify->add_option("--seed", vcfg.seed, "Ensemble seed");
  verify->add_option("--problems", vcfg.problems, "Random problems per suite");
  verify->add_option("--samples", vcfg.samples, "Sphere samples per empirical estimate");

  // compare
  std::string format = "text";
  double alpha = 0.5, beta = 2.0, phi = 0.0, eps = 0.0;
  auto* compare = app.add_subcommand("compare", "Textbook estimates against the tight estimate");
  compare->add_option("--matrix", matrix_path, "Matrix Market file for A");
  compare->add_option("--rhs", rhs_path, "Vector file for b");
  compare->add_option("--alpha", alpha, "3x2 example: alpha (used without --matrix)");
  compare->add_option("--beta", beta, "3x2 example: beta");
  compare->add_option("--phi", phi, "3x2 example: phi");
  compare->add_option("--format", format, "text | csv")->check(CLI::IsMember({"text", "csv"}));
  compare->add_option("--out", out_path, "Output file (default stdout)");

  // generate
  std::string out_dir;
  auto* generate = app.add_subcommand("generate", "Write test problems to files");
  generate->require_subcommand(1);
  auto* gen_gvl = generate->add_subcommand("gvl", "3x2 example with analytic answers");
  gen_gvl->add_option("--alpha", alpha)->required();
  gen_gvl->add_option("--beta", beta)->required();
  gen_gvl->add_option("--phi", phi)->required();
  gen_gvl->add_option("--eps", eps);
  gen_gvl->add_option("--out-dir", out_dir)->required();
  EnsembleSpec espec;
  espec.m = 8;
  espec.n = 3;
  std::vector<double> sigma;
  double kappa = 100.0;
  auto* gen_ens = generate->add_subcommand("ensemble", "Random problem with prescribed spectrum");
  gen_ens->add_option("--m", espec.m);
  gen_ens->add_option("--n", espec.n);
  gen_ens->add_option("--sigma", sigma, "Singular values (overrides --kappa)")->delimiter(',');
  gen_ens->add_option("--kappa", kappa, "Graded singular values from 1 to 1/kappa");
  gen_ens->add_option("--theta", espec.theta);
  gen_ens->add_option("--mix", espec.mix);
  gen_ens->add_option("--seed", espec.seed);
  gen_ens->add_option("--norm-b", espec.norm_b);
  gen_ens->add_option("--out-dir", out_dir)->required();

  // sweep
  std::string family = "gvl", param = "beta";
  std::vector<double> values;
  double from = 1.0, to = 100.0;
  int steps = 5;
  bool log_spaced = false;
  auto* sweep = app.add_subcommand("sweep", "Vary one parameter and emit CSV");
  sweep->add_option("--family", family, "gvl | ensemble")->check(CLI::IsMember({"gvl", "ensemble"}));
  sweep->add_option("--param", param, "gvl: alpha|beta|phi; ensemble: kappa|theta|mix");
  sweep->add_option("--values", values, "Explicit parameter values")->delimiter(',');
  sweep->add_option("--from", from);
  sweep->add_option("--to", to);
  sweep->add_option("--steps", steps);
  sweep->add_flag("--log", log_spaced, "Logarithmic spacing");
  sweep->add_option("--alpha", alpha);
  sweep->add_option("--beta", beta);
  sweep->add_option("--phi", phi);
  sweep->add_option("--m", espec.m);
  sweep->add_option("--n", espec.n);
  sweep->add_option("--kappa", kappa);
  sweep->add_option("--theta", espec.theta);
  sweep->add_option("--mix", espec.mix);
  sweep->add_option("--problem-seed", espec.seed);
  sweep->add_option("--seed", seed, "Sampling seed");
  sweep->add_option("--samples", samples);
  sweep->add_option("--out", out_path);

  // lanczos
  std::string start_path;
  std::vector<double> diag;
  int lanczos_steps = 10;
  auto* lanczos = app.add_subcommand("lanczos", "Per-step conditioning of the Lanczos residuals");
  lanczos->add_option("--matrix", matrix_path, "Symmetric Matrix Market file");
  lanczos->add_option("--diag", diag, "Diagonal matrix entries")->delimiter(',');
  lanczos->add_option("--start", start_path, "Starting vector (default: normalized ones)");
  lanczos->add_option("--steps", lanczos_steps);
  lanczos->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrParse;
  }

  try {
    if (analyze->parsed()) {
      const LoadedProblem lp = load_problem(matrix_path, rhs_path);
      SamplerConfig sc;
      sc.samples = samples;
      sc.refine_iterations = refine;
      sc.seed = seed;
      const Json report = analyze_report(lp.problem, lp.meta, parse_preset(scales_name), sc, timings);
      detail::emit(to_json_text(report), out_path, out);
      return kOk;
    }

    if (verify->parsed()) {
      const auto results = run_verification(vcfg);
      bool all = true;
      for (const auto& r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
        all = all && r.passed;
      }
      out << (all ? "all suites passed\n" : "verification FAILED\n");
      return all ? kOk : kVerifyFailed;
    }

    if (compare->parsed()) {
      const LsProblem problem = !matrix_path.empty()
                                    ? load_problem(matrix_path, rhs_path).problem
                                    : gvl_example(alpha, beta, phi, 0.0).problem;
      detail::emit(compare_text(compare_table(LsCache(problem)), format == "csv"), out_path, out);
      return kOk;
    }

    if (generate->parsed()) {
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      if (gen_gvl->parsed()) {
        const GvlExample ex = gvl_example(alpha, beta, phi, eps);
        io::write_matrix((dir / "A.mtx").string(), ex.problem.A());
        io::write_vector((dir / "b.txt").string(), ex.problem.b());
        io::write_matrix((dir / "dA.mtx").string(), ex.delta_A);
        io::write_file((dir / "expected.json").string(), to_json_text(gvl_expected_json(ex)));
      } else {
        if (sigma.empty()) sigma = graded_singular_values(espec.n, kappa);
        espec.singular_values = sigma;
        const LsProblem p = random_problem(espec);
        io::write_matrix((dir / "A.mtx").string(), p.A());
        io::write_vector((dir / "b.txt").string(), p.b());
        Json j;
        j["schema"] = kSchema;
        j["kind"] = "ensemble";
        j["m"] = espec.m;
        j["n"] = espec.n;
        j["singular_values"] = espec.singular_values;
        j["theta"] = espec.theta;
        j["mix"] = espec.mix;
        j["seed"] = espec.seed;
        j["norm_b"] = espec.norm_b;
        io::write_file((dir / "spec.json").string(), to_json_text(j));
      }
      return kOk;
    }

    if (sweep->parsed()) {
      SamplerConfig sc;
      sc.samples = samples;
      sc.seed = seed;
      std::string csv = kSweepHeader;
      for (double v : detail::sweep_values(values, from, to, steps, log_spaced)) {
        if (family == "gvl") {
          double a = alpha, b = beta, p = phi;
          if (param == "alpha") a = v;
          else if (param == "beta") b = v;
          else if (param == "phi") p = v;
          else throw Error(ErrorKind::ParamOutOfRange, "gvl sweep parameter must be alpha, beta or phi");
          csv += sweep_row(param, v, LsCache(gvl_example(a, b, p, 0.0).problem), sc);
        } else {
          EnsembleSpec e = espec;
          double k = kappa;
          if (param == "kappa") k = v;
          else if (param == "theta") e.theta = v;
          else if (param == "mix") e.mix = v;
          else throw Error(ErrorKind::ParamOutOfRange, "ensemble sweep parameter must be kappa, theta or mix");
          e.singular_values = graded_singular_values(e.n, k);
          csv += sweep_row(param, v, LsCache(random_problem(e)), sc);
        }
      }
      detail::emit(csv, out_path, out);
      return kOk;
    }

    if (lanczos->parsed()) {
      Matrix T;
      if (!matrix_path.empty()) {
        T = io::read_matrix(matrix_path);
      } else if (!diag.empty()) {
        T = Eigen::Map<const Vector>(diag.data(), static_cast<Eigen::Index>(diag.size())).asDiagonal();
      } else {
        throw Error(ErrorKind::ParamOutOfRange, "lanczos needs --matrix or --diag");
      }
      Vector v1 = start_path.empty() ? Vector(Vector::Ones(T.rows())) : io::read_vector(start_path);
      if (v1.norm() > 0.0) v1.normalize();
      detail::emit(lanczos_csv(lanczos_demo(T, v1, lanczos_steps)), out_path, out);
      return kOk;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::IoError:
      case ErrorKind::ParseError:
      case ErrorKind::DimensionMismatch:
      case ErrorKind::ParamOutOfRange:
        return kIoOrParse;
      default:
        return kNumerical;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "IoError: " << e.what() << "\n";
    return kIoOrParse;
  }
  return kOk;
}

}  // namespace lsqcond::cli

#endif  // LSQCOND_TOOLS_CLI_HPP_
