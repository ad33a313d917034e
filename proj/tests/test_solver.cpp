#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "test_support.hpp"
#include "tomoct/solver.hpp"

using namespace tomoct;
using namespace tomoct::solver;
using testsupport::random_hermitian;

TEST_CASE("hermitian parameterization is an isometric bijection") {
  Rng rng(11);
  for (int dim : {2, 4, 16}) {
    const ComplexMatrix h = random_hermitian(rng, dim);
    const RealVector p = hermitian_to_params(h);
    REQUIRE(p.size() == hermitian_param_count(dim));
    CHECK(p.norm() == doctest::Approx(h.norm()).epsilon(1e-12));
    CHECK((params_to_hermitian(p, dim) - h).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(params_to_hermitian(RealVector::Zero(5), 2), validation_error);
}

TEST_CASE("project_psd clips negative eigenvalues") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  const ComplexMatrix p = project_psd(m);
  CHECK(p(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(p(1, 1)) < 1e-14);
}

TEST_CASE("project_psd fixes already-PSD matrices") {
  Rng rng(3);
  const DensityMatrix rho = testsupport::random_density(rng, 4);
  CHECK((project_psd(rho.matrix) - rho.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("project_psd on diag(3,-2,1) is the Frobenius-nearest PSD matrix") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = -2.0;
  m(2, 2) = 1.0;
  const ComplexMatrix p = project_psd(m);
  CHECK(p(0, 0).real() == doctest::Approx(3.0));
  CHECK(std::abs(p(1, 1)) < 1e-14);
  CHECK(p(2, 2).real() == doctest::Approx(1.0));
  const double dist = (p - m).norm();
  CHECK(dist == doctest::Approx(2.0).epsilon(1e-12));

  // sampling check: no random PSD matrix comes closer
  Rng rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    ComplexMatrix candidate;
    if (trial % 2 == 0) {
      const ComplexMatrix g = testsupport::random_complex(rng, 3, 3);
      candidate = g * g.adjoint();
    } else {
      ComplexMatrix jitter = random_hermitian(rng, 3);
      candidate = project_psd(p + 0.3 * jitter);
    }
    candidate = 0.5 * (candidate + candidate.adjoint().eval());
    CHECK((candidate - m).norm() >= dist - 1e-9);
  }
}

TEST_CASE("project_psd honors a positive floor") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 0.02;
  const ComplexMatrix p = project_psd(m, 0.1);
  CHECK(p(1, 1).real() == doctest::Approx(0.1));
}

TEST_CASE("project_psd rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(project_psd(m), validation_error);
}

TEST_CASE("project_affine examples") {
  RealMatrix c(1, 2);
  c << 1, 1;
  RealVector r = RealVector::Constant(1, 1.0);
  RealVector x(2);
  x << 0.6, 0.6;
  const RealVector projected = project_affine(x, c, r);
  CHECK(projected(0) == doctest::Approx(0.5));
  CHECK(projected(1) == doctest::Approx(0.5));

  RealVector feasible(2);
  feasible << 0.25, 0.75;
  CHECK((project_affine(feasible, c, r) - feasible).cwiseAbs().maxCoeff() < 1e-12);

  RealMatrix c2(2, 3);
  c2 << 1, 0, 0, 0, 1, 1;
  RealVector r2(2);
  r2 << 0, 4;
  RealVector x2(3);
  x2 << 1, 2, 3;
  const RealVector p2 = project_affine(x2, c2, r2);
  CHECK(p2(0) == doctest::Approx(0.0));
  CHECK(p2(1) == doctest::Approx(1.5));
  CHECK(p2(2) == doctest::Approx(2.5));
  CHECK((c2 * p2 - r2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("project_affine displacement lies in the row space") {
  Rng rng(5);
  RealMatrix c(2, 6);
  RealVector r(2);
  for (int i = 0; i < 2; ++i) {
    r(i) = rng.gaussian();
    for (int j = 0; j < 6; ++j) c(i, j) = rng.gaussian();
  }
  RealVector x(6);
  for (int j = 0; j < 6; ++j) x(j) = rng.gaussian();
  const RealVector p = project_affine(x, c, r);
  CHECK((c * p - r).cwiseAbs().maxCoeff() < 1e-12);
  // (p - x) orthogonal to null(c): equivalently it equals its row-space part
  const RealVector d = p - x;
  const RealMatrix gram = c * c.transpose();
  const RealVector rowspace_part = c.transpose() * gram.ldlt().solve(c * d);
  CHECK((d - rowspace_part).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("project_affine flags inconsistent systems and accepts redundant ones") {
  RealMatrix c(2, 2);
  c << 1, 0, 1, 0;
  RealVector r(2);
  r << 0, 1;
  RealVector x = RealVector::Zero(2);
  CHECK_THROWS_AS(project_affine(x, c, r), infeasibility_error);

  r << 1, 1; // duplicated row, consistent
  const RealVector p = project_affine(x, c, r);
  CHECK(p(0) == doctest::Approx(1.0));
}

TEST_CASE("solve returns the feasible unconstrained optimum untouched") {
  ComplexMatrix half = ComplexMatrix::Identity(2, 2) * 0.5;
  ConstrainedLsqProblem problem;
  problem.design = RealMatrix::Identity(4, 4);
  problem.target = hermitian_to_params(half);
  problem.psd_dim = 2;
  problem.constraints = RealMatrix::Zero(1, 4);
  problem.constraints(0, 0) = problem.constraints(0, 1) = 1.0;
  problem.rhs = RealVector::Constant(1, 1.0);

  const SolverReport report = solve(problem);
  REQUIRE(report.converged);
  CHECK((report.solution - problem.target).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(report.min_eigenvalue >= -1e-9);
  CHECK(report.objective < 1e-7);
}

TEST_CASE("solve clips an infeasible diagonal target to the cone boundary") {
  // minimize over diag(t, 1-t), t in [0,1]: the (1.2, -0.2) target projects
  // to diag(1, 0)
  ComplexMatrix target = ComplexMatrix::Zero(2, 2);
  target(0, 0) = 1.2;
  target(1, 1) = -0.2;
  ConstrainedLsqProblem problem;
  problem.design = RealMatrix::Identity(4, 4);
  problem.target = hermitian_to_params(target);
  problem.psd_dim = 2;
  problem.constraints = RealMatrix::Zero(1, 4);
  problem.constraints(0, 0) = problem.constraints(0, 1) = 1.0;
  problem.rhs = RealVector::Constant(1, 1.0);

  const SolverReport report = solve(problem);
  REQUIRE(report.converged);
  const ComplexMatrix solution = params_to_hermitian(report.solution, 2);
  CHECK(solution(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(solution(1, 1)) < 1e-7);
  CHECK(std::abs(solution(0, 1)) < 1e-7);
}

TEST_CASE("solve matches the projected-gradient oracle") {
  for (int index : {0, 1, 2}) {
    const ConstrainedLsqProblem problem = oracle::oracle_instance(index);
    const SolverReport report = solve(problem);
    REQUIRE(report.converged);
    const RealVector reference = oracle::projected_gradient(problem);
    CHECK((report.solution - reference).norm() <= 1e-6);
    const double oracle_objective = (problem.design * reference - problem.target).norm();
    CHECK(report.objective <= oracle_objective + 1e-6);
    CHECK(report.min_eigenvalue >= -1e-9);
  }
}

TEST_CASE("solve is deterministic") {
  const ConstrainedLsqProblem problem = oracle::oracle_instance(4);
  const SolverReport a = solve(problem);
  const SolverReport b = solve(problem);
  REQUIRE(a.solution.size() == b.solution.size());
  for (Eigen::Index k = 0; k < a.solution.size(); ++k) CHECK(a.solution(k) == b.solution(k));
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  CHECK(a.primal_residual == b.primal_residual);
  CHECK(a.dual_residual == b.dual_residual);
  CHECK(a.min_eigenvalue == b.min_eigenvalue);
}

TEST_CASE("solve is covariant under positive rescaling of the data") {
  ConstrainedLsqProblem problem = oracle::oracle_instance(2);
  const SolverReport base = solve(problem);
  const double s = 3.5;
  problem.design *= s;
  problem.target *= s;
  const SolverReport scaled = solve(problem);
  CHECK((scaled.solution - base.solution).norm() <= 1e-6);
  CHECK(scaled.objective == doctest::Approx(s * base.objective).epsilon(1e-6));
}

TEST_CASE("solve surfaces non-convergence and infeasibility") {
  ConstrainedLsqProblem problem = oracle::oracle_instance(0);
  SolverConfig config;
  config.max_iters = 2;
  const SolverReport report = solve(problem, config);
  CHECK_FALSE(report.converged);

  problem.constraints = RealMatrix::Zero(2, 16);
  problem.constraints(0, 0) = 1.0;
  problem.constraints(1, 0) = 1.0;
  problem.rhs = RealVector(2);
  problem.rhs << 0.0, 1.0;
  CHECK_THROWS_AS(solve(problem), infeasibility_error);
}

TEST_CASE("solver config is validated") {
  const ConstrainedLsqProblem problem = oracle::oracle_instance(0);
  SolverConfig config;
  config.penalty = 0.0;
  CHECK_THROWS_AS(solve(problem, config), validation_error);
  config = SolverConfig{};
  config.psd_floor = -1.0;
  CHECK_THROWS_AS(solve(problem, config), validation_error);
}
