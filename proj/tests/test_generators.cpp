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

#include "lsqcond/generators.hpp"

#include <cmath>
#include <array>
#include <numbers>

#include <gtest/gtest.h>

#include "lsqcond/conditioning.hpp"
#include "lsqcond/jacobian.hpp"
#include "oracles.hpp"

using namespace lsqcond;

namespace {

const double kPi = std::numbers::pi;

// Angle between b and span(columns of B), with B orthonormalized by
// modified Gram-Schmidt.
double oracle_angle(Matrix B, const Vector& b) {
  for (Eigen::Index k = 0; k < B.cols(); ++k) {
    for (Eigen::Index i = 0; i < k; ++i) B.col(k) -= B.col(i).dot(B.col(k)) * B.col(i);
    B.col(k).normalize();
  }
  const Vector inside = B * (B.transpose() * b);
  return std::acos(std::min(1.0, inside.norm() / b.norm()));
}

}  // namespace

TEST(GvlExample, WorkedValues) {
  const GvlExample ex = gvl_example(0.5, 2.0, 0.0, 0.0);
  EXPECT_EQ(ex.problem.rows(), 3);
  EXPECT_EQ(ex.problem.cols(), 2);
  EXPECT_NEAR(ex.expected.x[0], 2.0, 1e-15);
  EXPECT_NEAR(ex.expected.x[1], 0.0, 1e-15);
  EXPECT_NEAR(ex.expected.r[2], 1.0, 1e-15);
  EXPECT_NEAR(ex.expected.kappa, 2.0, 1e-15);
  EXPECT_NEAR(ex.expected.vds, 2.0, 1e-15);
  EXPECT_NEAR(ex.expected.cot_theta, 2.0, 1e-15);
  EXPECT_NEAR(ex.expected.dr_rel_first_order, 3.0, 1e-15);
  EXPECT_NEAR(gvl_example(0.5, 2.0, kPi / 2, 0.0).expected.vds, 1.0, 1e-15);
}

TEST(GvlExample, RejectsBadParameters) {
  for (auto [a, b, phi, eps] : std::vector<std::array<double, 4>>{
           {0.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, {0.5, 0.0, 0.0, 0.0},
           {0.5, 1.0, -0.1, 0.0}, {0.5, 1.0, 2.0, 0.0}, {0.5, 1.0, 0.0, -1e-9},
           {0.5, 1.0, 0.0, 5e-3}}) {
    try {
      gvl_example(a, b, phi, eps);
      FAIL() << a << " " << b << " " << phi << " " << eps;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParamOutOfRange);
    }
  }
  EXPECT_NO_THROW(gvl_example(0.5, 1.0, 0.0, 4e-3));
}

TEST(GvlExample, ExpectedRecordMatchesComputation) {
  for (double a : {0.5, 0.1, 0.01})
    for (double b : {1.0, 10.0, 100.0})
      for (double phi : {0.0, kPi / 4, kPi / 2}) {
        const GvlExample ex = gvl_example(a, b, phi, 0.0);
        const LsCache c(ex.problem);
        const Geometry g = geometry(c);
        const GvlExpected& e = ex.expected;
        EXPECT_LE((c.x() - e.x).norm(), 1e-12 * e.x.norm());
        EXPECT_LE((c.r() - e.r).norm(), 1e-12 * e.r.norm());
        EXPECT_LE(oracle::rel(g.kappa, e.kappa), 1e-12);
        EXPECT_LE(oracle::rel(g.vds, e.vds), 1e-12);
        EXPECT_LE(oracle::rel(g.cot_theta, e.cot_theta), 1e-12);
        const auto est = residual_condition_bounds(c, g, ScaleFactors::relative(c));
        EXPECT_LE(oracle::rel(est.chi_A_upper, e.chi_A_upper), 1e-12);
        // first-order change per unit eps, from the unit perturbation
        const GvlExample unit = gvl_example(a, b, phi, 1e-3 * std::min(a, b));
        const Matrix dA = unit.delta_A / unit.epsilon;
        const Vector dr = apply_residual_jacobian(c, dA).dr;
        EXPECT_LE((dr - e.dr_first_order).norm(), 1e-12 * e.dr_first_order.norm());
        EXPECT_LE(oracle::rel(dr.norm() / c.norm_r(), e.dr_rel_first_order), 1e-12);
      }
}

TEST(GvlExample, PerturbedSolveMatchesFirstOrder) {
  const GvlExample ex = gvl_example(0.5, 2.0, 0.0, 1e-6);
  const Vector dr = oracle::residual_change(ex.problem.A(), ex.delta_A, ex.problem.b());
  EXPECT_NEAR(dr.norm(), 3.0e-6, 1e-11);
}

TEST(RandomProblem, Examples) {
  EnsembleSpec spec;
  spec.m = 6;
  spec.n = 3;
  spec.singular_values = {1.0, 1.0, 1.0};
  spec.theta = 0.3;
  spec.seed = 4;
  {
    const Geometry g = geometry(LsCache(random_problem(spec)));
    EXPECT_NEAR(g.kappa, 1.0, 1e-12);
    EXPECT_NEAR(g.vds, 1.0, 1e-12);
  }
  spec.m = 5;
  spec.n = 2;
  spec.singular_values = {1.0, 1e-3};
  spec.theta = kPi / 4;
  spec.mix = 1.0;
  const LsProblem p = random_problem(spec);
  const Geometry g = geometry(LsCache(p));
  EXPECT_LE(oracle::rel(g.kappa, 1000.0), 1e-10);
  EXPECT_NEAR(g.theta, kPi / 4, 1e-10);
  EXPECT_NEAR(g.vds, 1.0, 1e-8);

  const LsProblem q = random_problem(spec);
  EXPECT_EQ(p.A(), q.A());
  EXPECT_EQ(p.b(), q.b());

  spec.mix = 0.0;
  EXPECT_LE(oracle::rel(geometry(LsCache(random_problem(spec))).vds, 1000.0), 1e-8);
}

TEST(RandomProblem, RoundTrip) {
  for (std::size_t i = 0; i < 100; ++i) {
    const EnsembleSpec spec = sample_ensemble_spec(81, i);
    const LsCache c(random_problem(spec));
    const Geometry g = geometry(c);
    std::vector<double> sigma = spec.singular_values;
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    // forming U S V^t perturbs every singular value by ~eps * sigma_max
    for (std::size_t k = 0; k < sigma.size(); ++k)
      EXPECT_LE(std::abs(c.svd().singular_values[static_cast<Eigen::Index>(k)] - sigma[k]),
                1e-12 * sigma.front())
          << i;
    EXPECT_NEAR(g.theta, spec.theta, 1e-10) << i;
    EXPECT_LE(oracle::rel(c.norm_b(), spec.norm_b), 1e-12) << i;
    EXPECT_GE(g.vds, 1.0 - 1e-12);
    EXPECT_LE(g.vds, g.kappa * (1 + 1e-12));
  }
}

TEST(RandomProblem, RejectsBadSpecs) {
  EnsembleSpec spec;
  spec.m = 3;
  spec.n = 3;
  spec.singular_values = {1.0, 1.0, 1.0};
  EXPECT_THROW(random_problem(spec), Error);
  spec.m = 4;
  spec.singular_values = {1.0, 1.0};
  EXPECT_THROW(random_problem(spec), Error);
  spec.singular_values = {1.0, 0.0, 1.0};
  EXPECT_THROW(random_problem(spec), Error);
  spec.singular_values = {1.0, 1.0, 1.0};
  spec.theta = 0.0;
  EXPECT_THROW(random_problem(spec), Error);
  spec.theta = 1.0;
  spec.mix = 1.5;
  EXPECT_THROW(random_problem(spec), Error);
}

TEST(GradedSingularValues, Endpoints) {
  const auto s = graded_singular_values(5, 1e4);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_DOUBLE_EQ(s.front(), 1.0);
  EXPECT_NEAR(s.back(), 1e-4, 1e-18);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i], s[i - 1]);
}

TEST(Lanczos, SmallDiagonalAgainstOracle) {
  const Matrix T = Vector{{1.0, 2.0, 3.0}}.asDiagonal();
  const Vector v1 = Vector::Ones(3) / std::sqrt(3.0);
  const LanczosRun run = lanczos_demo(T, v1, 2);
  ASSERT_EQ(run.steps.size(), 2u);
  EXPECT_FALSE(run.breakdown);

  // Oracle: Krylov basis by Gram-Schmidt of [v1, T v1]
  Matrix K(3, 2);
  K << v1, T * v1;
  Vector v2 = K.col(1) - v1.dot(K.col(1)) * v1;
  v2.normalize();
  const double theta1 = oracle_angle(Matrix(v1), T * v1);
  Matrix B(3, 2);
  B << v1, v2;
  const double theta2 = oracle_angle(B, T * v2);
  EXPECT_NEAR(run.steps[0].theta, theta1, 1e-10);
  EXPECT_NEAR(run.steps[1].theta, theta2, 1e-10);
  EXPECT_NEAR(run.steps[0].predicted_chi, 1.0 / std::sin(theta1), 1e-10);
  EXPECT_NEAR(run.steps[1].predicted_chi, 1.0 / std::sin(theta2), 1e-10);
  EXPECT_NEAR(run.steps[0].alpha, 2.0, 1e-14);
}

TEST(Lanczos, OrthonormalBasisCollapsesToCosecant) {
  auto rng = sample_rng(83, 0);
  Vector d(12);
  for (int i = 0; i < 12; ++i) d[i] = 1.0 + i;
  const Matrix T = d.asDiagonal();
  Vector v1 = gaussian_vector(rng, 12);
  v1.normalize();
  const LanczosRun run = lanczos_demo(T, v1, 6);
  for (const LanczosStep& s : run.steps)
    EXPECT_LE(oracle::rel(s.tight_orthonormal, s.predicted_chi), 1e-12) << s.step;
}

TEST(Lanczos, EigenvectorBreaksDownAtFirstStep) {
  const Matrix T = Vector{{1.0, 2.0, 3.0}}.asDiagonal();
  const LanczosRun run = lanczos_demo(T, Vector{{0.0, 1.0, 0.0}}, 3);
  EXPECT_TRUE(run.breakdown);
  EXPECT_EQ(run.breakdown_step, 1);
  ASSERT_EQ(run.steps.size(), 1u);
  EXPECT_TRUE(run.steps[0].breakdown);
  EXPECT_TRUE(std::isnan(run.steps[0].theta));
}

TEST(Lanczos, StopsWhenKrylovSpaceIsExhausted) {
  const Matrix T = Vector{{1.0, 2.0, 3.0, 4.0}}.asDiagonal();
  const LanczosRun run = lanczos_demo(T, Vector::Ones(4) / 2.0, 10);
  EXPECT_TRUE(run.breakdown);
  EXPECT_EQ(run.breakdown_step, 4);
}

TEST(Lanczos, OrthogonalityOnSeparatedSpectra) {
  for (int dim : {10, 20, 35, 50}) {
    Vector d(dim);
    for (int i = 0; i < dim; ++i) d[i] = 1.0 + i;
    auto rng = sample_rng(85, static_cast<std::size_t>(dim));
    const Matrix Q = [&] {
      Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, dim, dim));
      return Matrix(qr.householderQ() * Matrix::Identity(dim, dim));
    }();
    const Matrix T = Q * d.asDiagonal() * Q.transpose();
    const Matrix Ts = 0.5 * (T + T.transpose());
    Vector v1 = gaussian_vector(rng, dim);
    v1.normalize();
    const LanczosRun run = lanczos_demo(Ts, v1, dim / 2);
    for (const LanczosStep& s : run.steps) EXPECT_LE(s.orthogonality_defect, 1e-8) << dim << " " << s.step;
  }
}

TEST(Lanczos, RejectsBadInput) {
  EXPECT_THROW(lanczos_demo(Matrix{{1.0, 2.0}, {0.0, 1.0}}, Vector{{1.0, 0.0}}, 2), Error);
  EXPECT_THROW(lanczos_demo(Matrix::Identity(2, 2), Vector{{1.0, 1.0}}, 2), Error);
  EXPECT_THROW(lanczos_demo(Matrix::Identity(2, 2), Vector{{1.0, 0.0, 0.0}}, 2), Error);
}

TEST(Equilibration, Examples) {
  const Equilibration e = equilibrate_columns(Matrix{{1.0, 0.0}, {0.0, 10.0}, {0.0, 0.0}});
  EXPECT_DOUBLE_EQ(e.D[0], 1.0);
  EXPECT_DOUBLE_EQ(e.D[1], 0.1);
  EXPECT_NEAR(spectral_data(e.AD).sigma_min(), 1.0, 1e-15);

  const Matrix unitcols = Matrix::Identity(4, 2);
  EXPECT_EQ(equilibrate_columns(unitcols).D, Vector::Ones(2));

  try {
    equilibrate_columns(Matrix{{1.0, 0.0}, {1.0, 0.0}});
    FAIL();
  } catch (const Error& e2) {
    EXPECT_EQ(e2.kind(), ErrorKind::ZeroColumn);
  }
}

TEST(Equilibration, IllScaledEnsemble) {
  for (std::size_t i = 0; i < 30; ++i) {
    const LsProblem base = random_problem(sample_ensemble_spec(87, i, {12, 5, 2.0}));
    auto rng = sample_rng(88, i);
    Vector scales(base.cols());
    std::uniform_real_distribution<double> exponent(-3.0, 3.0);
    for (Eigen::Index j = 0; j < base.cols(); ++j) scales[j] = std::pow(10.0, exponent(rng));
    const LsProblem p(base.A() * scales.asDiagonal(), base.b());
    const EquilibrationReport rep = equilibration_report(p);
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      EXPECT_NEAR(rep.scaling.AD.col(j).norm(), 1.0, 1e-14);
    EXPECT_GT(rep.chi_before, 0.0);
    EXPECT_GT(rep.chi_after, 0.0);
    EXPECT_LE(rep.kappa_after, rep.kappa_before * (1 + 1e-12)) << i;
    EXPECT_LE(rep.kappa_after, std::sqrt(static_cast<double>(p.cols())) * rep.kappa_before * (1 + 1e-12));
  }
}

TEST(BlockNorm, Examples) {
  const BlockNormCase both = block_norm_case(Matrix{{1.0}}, Matrix{{1.0}}, 10, 0);
  EXPECT_NEAR(both.norm_joint_est, 2.0, 1e-14);
  EXPECT_NEAR(both.upper_ratio, 1.0, 1e-14);

  auto rng = sample_rng(89, 0);
  const Matrix A = gaussian_matrix(rng, 4, 3);
  const BlockNormCase zero = block_norm_case(A, Matrix::Zero(4, 2), 10, 0);
  EXPECT_LE(oracle::rel(zero.norm_joint_est, spectral_norm(A)), 1e-12);
  EXPECT_THROW(block_norm_case(A, Matrix::Zero(3, 2), 10, 0), Error);
}

TEST(BlockNorm, RandomBlocksInBand) {
  for (std::size_t i = 0; i < 30; ++i) {
    auto rng = sample_rng(91, i);
    const Matrix A = gaussian_matrix(rng, 4, 3);
    const Matrix B = gaussian_matrix(rng, 4, 2);
    const BlockNormCase c = block_norm_case(A, B, 20, i);
    EXPECT_GE(c.norm_joint_est, std::max(c.norm_A, c.norm_B) * (1 - 1e-12));
    EXPECT_LE(c.norm_joint_est, (c.norm_A + c.norm_B) * (1 + 1e-12));
    EXPECT_LE(c.norm_A + c.norm_B, 2.0 * c.norm_joint_est * (1 + 1e-12));
    EXPECT_GE(c.upper_ratio, 0.5);
    EXPECT_LE(c.upper_ratio, 1.0 + 1e-12);
  }
}
