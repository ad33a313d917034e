#include "tomoct/qst.hpp"

#include <algorithm>
#include <cmath>

namespace tomoct::qst {

MeasurementScheme default_two_qubit_scheme() {
  const OperatorBasis basis = pauli_basis(2);
  MeasurementScheme scheme;
  for (int m = 1; m < basis.size(); ++m) {
    scheme.observables.push_back(basis.elements[m]);
    scheme.labels.push_back(basis.labels[m]);
  }
  return scheme;
}

MeasurementScheme scheme_from_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) throw validation_error("scheme_from_labels: empty label list");
  MeasurementScheme scheme;
  for (const std::string& label : labels) {
    if (label.empty() || label.size() > 4)
      throw validation_error("scheme_from_labels: label length must be 1..4: \"" + label + "\"");
    ComplexMatrix op = ComplexMatrix::Identity(1, 1);
    for (char c : label) {
      int digit = -1;
      switch (c) {
        case 'I': digit = 0; break;
        case 'X': digit = 1; break;
        case 'Y': digit = 2; break;
        case 'Z': digit = 3; break;
        default:
          throw validation_error("scheme_from_labels: bad Pauli letter in \"" + label + "\"");
      }
      op = kron(op, pauli(digit));
    }
    scheme.observables.push_back(std::move(op));
    scheme.labels.push_back(label);
  }
  return scheme;
}

RealMatrix build_design_matrix(const MeasurementScheme& scheme, const OperatorBasis& basis) {
  if (scheme.size() == 0) throw validation_error("build_design_matrix: empty scheme");
  const Eigen::Index dim = basis.dim();
  RealMatrix design(scheme.size(), basis.size());
  for (int k = 0; k < scheme.size(); ++k) {
    const ComplexMatrix& obs = scheme.observables[k];
    if (obs.rows() != dim || obs.cols() != dim)
      throw validation_error("build_design_matrix: observable dimension mismatch");
    if (!is_hermitian(obs, 1e-12))
      throw validation_error("build_design_matrix: observable " + std::to_string(k) +
                             " is not Hermitian");
    for (int m = 0; m < basis.size(); ++m) {
      const Complex tr = (obs * basis.elements[m]).trace();
      if (std::abs(tr.imag()) > 1e-12)
        throw numeric_error("build_design_matrix: complex trace product at (" +
                            std::to_string(k) + "," + std::to_string(m) + ")");
      design(k, m) = tr.real();
    }
  }
  return design;
}

MeasurementRecord simulate_measurements(const DensityMatrix& rho_true,
                                        const MeasurementScheme& scheme, double noise_std,
                                        std::uint64_t seed) {
  if (noise_std < 0.0) throw validation_error("simulate_measurements: noise_std must be >= 0");
  MeasurementRecord record;
  record.scheme = scheme;
  record.noise_std = noise_std;
  record.seed = seed;
  record.values.resize(scheme.size());
  Rng rng = Rng(seed).split(0x51);
  const double bound = 1.0 + 5.0 * noise_std;
  for (int k = 0; k < scheme.size(); ++k) {
    double v = expectation(scheme.observables[k], rho_true);
    if (noise_std > 0.0) v += noise_std * rng.gaussian();
    record.values(k) = std::clamp(v, -bound, bound);
  }
  return record;
}

namespace {

void check_design_record(const RealMatrix& design, const MeasurementRecord& record,
                         const OperatorBasis& basis) {
  if (design.rows() != record.values.size())
    throw validation_error("design rows do not match record length");
  if (design.cols() != basis.size())
    throw validation_error("design columns do not match basis size");
}

} // namespace

HermitianEstimate reconstruct_standard(const RealMatrix& design, const MeasurementRecord& record,
                                       const OperatorBasis& basis) {
  check_design_record(design, record, basis);
  const double c0 = 1.0 / basis.dim();
  const RealMatrix free_design = design.rightCols(design.cols() - 1);
  const RealVector adjusted = record.values - design.col(0) * c0;

  Eigen::ColPivHouseholderQR<RealMatrix> qr(free_design);
  if (qr.rank() < free_design.cols()) {
    // Identify which basis directions the scheme cannot see.
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(free_design);
    const RealMatrix kernel = cod.pseudoInverse() * free_design -
                              RealMatrix::Identity(free_design.cols(), free_design.cols());
    std::string names;
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
      if (kernel.col(j).cwiseAbs().maxCoeff() > 1e-8) {
        if (!names.empty()) names += ", ";
        names += basis.labels[j + 1];
      }
    }
    throw validation_error("reconstruct_standard: rank-deficient design; unidentifiable basis "
                           "directions: " + names);
  }

  const RealVector coeffs = qr.solve(adjusted);
  ComplexMatrix rho = c0 * ComplexMatrix::Identity(basis.dim(), basis.dim());
  for (Eigen::Index m = 0; m < coeffs.size(); ++m)
    rho += coeffs(m) * basis.elements[m + 1];
  rho = 0.5 * (rho + rho.adjoint().eval());
  return HermitianEstimate(rho);
}

solver::ConstrainedLsqProblem cco_problem(const RealMatrix& design,
                                          const MeasurementRecord& record,
                                          const OperatorBasis& basis) {
  check_design_record(design, record, basis);
  const int dim = basis.dim();
  const int n_params = solver::hermitian_param_count(dim);

  // Change of basis from Pauli coefficients to Hermitian parameters:
  // P(m, j) = trace(A_m * B_j) / 2^n, so design_h = design * P has entries
  // trace(M_k * B_j).
  RealMatrix change(basis.size(), n_params);
  for (int j = 0; j < n_params; ++j) {
    RealVector unit = RealVector::Zero(n_params);
    unit(j) = 1.0;
    const ComplexMatrix bj = solver::params_to_hermitian(unit, dim);
    for (int m = 0; m < basis.size(); ++m)
      change(m, j) = (basis.elements[m] * bj).trace().real() / dim;
  }

  solver::ConstrainedLsqProblem problem;
  problem.design = design * change;
  problem.target = record.values;
  problem.psd_dim = dim;
  problem.constraints = RealMatrix::Zero(1, n_params);
  problem.constraints.leftCols(dim).setOnes(); // unit trace
  problem.rhs = RealVector::Constant(1, 1.0);
  return problem;
}

DensityMatrix reconstruct_cco(const RealMatrix& design, const MeasurementRecord& record,
                              const OperatorBasis& basis, const solver::SolverConfig& config) {
  const solver::ConstrainedLsqProblem problem = cco_problem(design, record, basis);
  solver::SolverReport report = solver::solve(problem, config);
  if (!report.converged)
    throw solver::convergence_error("reconstruct_cco: solver did not converge within " +
                                        std::to_string(config.max_iters) + " iterations",
                                    std::move(report));
  return DensityMatrix(solver::params_to_hermitian(report.solution, basis.dim()));
}

} // namespace tomoct::qst
