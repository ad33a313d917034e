#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "test_support.hpp"
#include "tomoct/metrics.hpp"
#include "tomoct/qst.hpp"

using namespace tomoct;
using namespace tomoct::qst;

namespace {

const OperatorBasis& basis2() {
  static const OperatorBasis b = pauli_basis(2);
  return b;
}

// Record of |00> with the Z(x)Z expectation bumped by +0.06: the linear
// inversion picks up eigenvalues (1.015, 0.015, -0.015, -0.015).
MeasurementRecord crafted_invalid_record() {
  MeasurementRecord record = simulate_measurements(make_state("00"), default_two_qubit_scheme(),
                                                   0.0, 1);
  for (int k = 0; k < record.scheme.size(); ++k)
    if (record.scheme.labels[k] == "ZZ") record.values(k) += 0.06;
  return record;
}

} // namespace

TEST_CASE("default scheme measures the 15 non-identity Pauli products") {
  const MeasurementScheme scheme = default_two_qubit_scheme();
  REQUIRE(scheme.size() == 15);
  CHECK(scheme.labels.front() == "IX");
  CHECK(scheme.labels.back() == "ZZ");
  for (const ComplexMatrix& obs : scheme.observables) CHECK(is_hermitian(obs, 1e-12));
}

TEST_CASE("design matrix of a single observable picks out its basis column") {
  const MeasurementScheme scheme = scheme_from_labels({"ZI"});
  const RealMatrix design = build_design_matrix(scheme, basis2());
  REQUIRE(design.rows() == 1);
  REQUIRE(design.cols() == 16);
  for (int m = 0; m < 16; ++m)
    CHECK(design(0, m) == doctest::Approx(basis2().labels[m] == "ZI" ? 4.0 : 0.0));
}

TEST_CASE("full scheme design is 4x identity on the non-identity columns") {
  const RealMatrix design = build_design_matrix(default_two_qubit_scheme(), basis2());
  REQUIRE(design.rows() == 15);
  CHECK(design.col(0).cwiseAbs().maxCoeff() == 0.0);
  const RealMatrix free_part = design.rightCols(15);
  CHECK((free_part - 4.0 * RealMatrix::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("design rows are linear in the observable") {
  MeasurementScheme scheme;
  scheme.observables.push_back(kron(pauli(1), pauli(0)) + kron(pauli(3), pauli(0)));
  scheme.labels.push_back("XI+ZI");
  const RealMatrix design = build_design_matrix(scheme, basis2());
  int nonzero = 0;
  for (int m = 0; m < 16; ++m)
    if (std::abs(design(0, m)) > 1e-12) {
      CHECK(design(0, m) == doctest::Approx(4.0));
      ++nonzero;
    }
  CHECK(nonzero == 2);
}

TEST_CASE("noiseless simulation reproduces analytic expectations") {
  const MeasurementRecord z_record =
      simulate_measurements(make_state("00"), scheme_from_labels({"ZI"}), 0.0, 0);
  CHECK(z_record.values(0) == doctest::Approx(1.0));

  const MeasurementRecord bell =
      simulate_measurements(make_state("B1"), default_two_qubit_scheme(), 0.0, 0);
  for (int k = 0; k < bell.scheme.size(); ++k) {
    const std::string& label = bell.scheme.labels[k];
    double expected = 0.0;
    if (label == "XX" || label == "ZZ") expected = 1.0;
    if (label == "YY") expected = -1.0;
    CHECK(bell.values(k) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("simulation is deterministic per seed and clamps to the noise band") {
  const DensityMatrix rho = make_state("B1");
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const MeasurementRecord a = simulate_measurements(rho, scheme, 0.05, 42);
  const MeasurementRecord b = simulate_measurements(rho, scheme, 0.05, 42);
  for (int k = 0; k < scheme.size(); ++k) CHECK(a.values(k) == b.values(k));
  const MeasurementRecord c = simulate_measurements(rho, scheme, 0.05, 43);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);

  Rng seeds(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double sigma = 2.0;
    const MeasurementRecord loud = simulate_measurements(rho, scheme, sigma, seeds.next_u64());
    CHECK(loud.values.cwiseAbs().maxCoeff() <= 1.0 + 5.0 * sigma);
  }
}

TEST_CASE("standard reconstruction is exact on noiseless data") {
  const DensityMatrix truth = make_state("01");
  const MeasurementRecord record =
      simulate_measurements(truth, default_two_qubit_scheme(), 0.0, 0);
  const RealMatrix design = build_design_matrix(record.scheme, basis2());
  const HermitianEstimate estimate = reconstruct_standard(design, record, basis2());
  CHECK((estimate.matrix - truth.matrix).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(estimate.min_eigenvalue) < 1e-12);
}

TEST_CASE("crafted perturbation drives the standard estimate indefinite") {
  const MeasurementRecord record = crafted_invalid_record();
  const RealMatrix design = build_design_matrix(record.scheme, basis2());
  const HermitianEstimate estimate = reconstruct_standard(design, record, basis2());
  const EigResult eig = eig_hermitian(estimate.matrix);
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.015).epsilon(1e-10));
  CHECK(eig.eigenvalues(1) == doctest::Approx(0.015).epsilon(1e-10));
  CHECK(eig.eigenvalues(2) == doctest::Approx(-0.015).epsilon(1e-10));
  CHECK(eig.eigenvalues(3) == doctest::Approx(-0.015).epsilon(1e-10));
  CHECK(estimate.min_eigenvalue < 0.0);
}

TEST_CASE("noisy near-pure states go indefinite for a sizable seed fraction") {
  const DensityMatrix truth = make_state("B1");
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const RealMatrix design = build_design_matrix(scheme, basis2());
  int negative = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MeasurementRecord record = simulate_measurements(truth, scheme, 0.05, seed);
    if (reconstruct_standard(design, record, basis2()).min_eigenvalue < 0.0) ++negative;
  }
  CHECK(negative > 50); // near-pure states clip the cone almost always
}

TEST_CASE("rank-deficient schemes name the unidentifiable directions") {
  std::vector<std::string> labels;
  for (const std::string& l : default_two_qubit_scheme().labels)
    if (l != "YZ") labels.push_back(l);
  const MeasurementScheme scheme = scheme_from_labels(labels);
  const RealMatrix design = build_design_matrix(scheme, basis2());
  const MeasurementRecord record = simulate_measurements(make_state("00"), scheme, 0.0, 0);
  CHECK_THROWS_WITH_AS(reconstruct_standard(design, record, basis2()),
                       doctest::Contains("YZ"), validation_error);
}

TEST_CASE("constrained reconstruction recovers noiseless pure states") {
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const RealMatrix design = build_design_matrix(scheme, basis2());
  for (const char* name : {"00", "B1", "+-", "1+"}) {
    const DensityMatrix truth = make_state(name);
    const MeasurementRecord record = simulate_measurements(truth, scheme, 0.0, 0);
    const DensityMatrix rho = reconstruct_cco(design, record, basis2());
    CHECK(metrics::state_fidelity(rho, truth) >= 1.0 - 1e-6);
  }
}

TEST_CASE("constrained reconstruction of the crafted record clips to the cone boundary") {
  const MeasurementRecord record = crafted_invalid_record();
  const RealMatrix design = build_design_matrix(record.scheme, basis2());
  const DensityMatrix rho = reconstruct_cco(design, record, basis2());
  const EigResult eig = eig_hermitian(rho.matrix);
  CHECK(eig.eigenvalues(3) >= -1e-9);
  CHECK(eig.eigenvalues(3) <= 1e-7); // active PSD constraint leaves a zero eigenvalue
  CHECK(std::abs(rho.matrix.trace().real() - 1.0) <= 1e-9);

  const RealVector reference = oracle::projected_gradient(cco_problem(design, record, basis2()));
  const RealVector solution = solver::hermitian_to_params(rho.matrix);
  CHECK((solution - reference).norm() <= 1e-6);
}

TEST_CASE("constrained estimates beat the PSD-projected standard estimate on objective") {
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const RealMatrix design = build_design_matrix(scheme, basis2());
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix truth =
        trial % 2 == 0 ? testsupport::random_pure(rng, 4) : testsupport::random_density(rng, 4);
    const MeasurementRecord record =
        simulate_measurements(truth, scheme, 0.05, 1000 + trial);
    const solver::ConstrainedLsqProblem problem = cco_problem(design, record, basis2());

    const DensityMatrix rho = reconstruct_cco(design, record, basis2());
    const double cco_objective =
        (problem.design * solver::hermitian_to_params(rho.matrix) - problem.target).norm();

    const HermitianEstimate standard = reconstruct_standard(design, record, basis2());
    const RealVector feasible = oracle::intersection_project(
        solver::hermitian_to_params(standard.matrix), problem.constraints, problem.rhs, 4);
    const double projected_objective = (problem.design * feasible - problem.target).norm();
    CHECK(cco_objective <= projected_objective + 1e-6);
  }
}

TEST_CASE("noiseless round trip on random mixed and pure states") {
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const RealMatrix design = build_design_matrix(scheme, basis2());
  Rng rng(29);
  for (int trial = 0; trial < 12; ++trial) {
    const DensityMatrix truth =
        trial % 2 == 0 ? testsupport::random_density(rng, 4) : testsupport::random_pure(rng, 4);
    const MeasurementRecord record = simulate_measurements(truth, scheme, 0.0, 0);
    const HermitianEstimate standard = reconstruct_standard(design, record, basis2());
    CHECK((standard.matrix - truth.matrix).norm() <= 1e-6);
    const DensityMatrix constrained = reconstruct_cco(design, record, basis2());
    CHECK((constrained.matrix - truth.matrix).norm() <= 1e-6);
  }
}

TEST_CASE("infeasible optima always clip onto the cone boundary") {
  // whenever the unconstrained optimum has a negative eigenvalue, the
  // constrained optimum must sit on the boundary (some eigenvalue ~ 0)
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const RealMatrix design = build_design_matrix(scheme, basis2());
  int boundary_cases = 0;
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const MeasurementRecord record =
        simulate_measurements(make_state("B3"), scheme, 0.05, seed);
    const HermitianEstimate standard = reconstruct_standard(design, record, basis2());
    if (standard.min_eigenvalue >= -1e-9) continue;
    ++boundary_cases;
    const DensityMatrix constrained = reconstruct_cco(design, record, basis2());
    const EigResult eig = eig_hermitian(constrained.matrix);
    CHECK(eig.eigenvalues(3) >= -1e-9);
    CHECK(eig.eigenvalues(3) <= 1e-7);
  }
  CHECK(boundary_cases > 10); // near-pure noisy data is almost always infeasible
}

TEST_CASE("solver non-convergence surfaces with the report attached") {
  const MeasurementRecord record =
      simulate_measurements(make_state("B1"), default_two_qubit_scheme(), 0.05, 3);
  const RealMatrix design = build_design_matrix(record.scheme, basis2());
  solver::SolverConfig config;
  config.max_iters = 2;
  try {
    (void)reconstruct_cco(design, record, basis2(), config);
    FAIL("expected convergence_error");
  } catch (const solver::convergence_error& e) {
    CHECK_FALSE(e.report.converged);
    CHECK(e.report.iterations == 2);
  }
}

TEST_CASE("constrained outputs always satisfy the state invariants") {
  const MeasurementScheme scheme = default_two_qubit_scheme();
  const RealMatrix design = build_design_matrix(scheme, basis2());
  Rng rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const DensityMatrix truth = testsupport::random_pure(rng, 4);
    const MeasurementRecord record = simulate_measurements(truth, scheme, 0.1, 50 + trial);
    const DensityMatrix rho = reconstruct_cco(design, record, basis2());
    CHECK(hermiticity_gap(rho.matrix) <= 1e-12);
    CHECK(std::abs(rho.matrix.trace().real() - 1.0) <= 1e-9);
    const EigResult eig = eig_hermitian(rho.matrix);
    CHECK(eig.eigenvalues(3) >= -1e-9);
  }
}
