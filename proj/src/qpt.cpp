#include "tomoct/qpt.hpp"

#include <cmath>

namespace tomoct::qpt {

namespace {

constexpr double kPsdTol = 1e-9;
constexpr double kCptpTol = 1e-7;

const OperatorBasis& two_qubit_basis() {
  static const OperatorBasis basis = pauli_basis(2);
  return basis;
}

} // namespace

ProcessMatrix::ProcessMatrix(ComplexMatrix chi_in, std::string tag)
    : basis_tag(std::move(tag)), chi(std::move(chi_in)) {
  if (chi.rows() != chi.cols() || chi.rows() < 1)
    throw validation_error("ProcessMatrix: chi must be square");
  const double gap = hermiticity_gap(chi);
  if (gap > 1e-10)
    throw validation_error("ProcessMatrix: hermiticity gap " + std::to_string(gap));
}

std::vector<DensityMatrix> qpt_input_states() {
  static const char letters[4] = {'0', '1', '+', '-'};
  std::vector<DensityMatrix> states;
  states.reserve(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      states.push_back(make_state(std::string{letters[a], letters[b]}));
  return states;
}

ComplexMatrix build_beta(const OperatorBasis& basis, const std::vector<DensityMatrix>& inputs) {
  const int dim = basis.dim();
  const int n_ops = basis.size();
  if (static_cast<int>(inputs.size()) != n_ops)
    throw validation_error("build_beta: need " + std::to_string(n_ops) + " input states");
  const int block = dim * dim;
  ComplexMatrix beta(inputs.size() * block, n_ops * n_ops);
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j].dim() != dim) throw validation_error("build_beta: input dimension mismatch");
    for (int m = 0; m < n_ops; ++m) {
      const ComplexMatrix left = basis.elements[m] * inputs[j].matrix;
      for (int n = 0; n < n_ops; ++n) {
        const ComplexMatrix term = left * basis.elements[n].adjoint();
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            beta(j * block + a * dim + b, m * n_ops + n) = term(a, b);
      }
    }
  }
  return beta;
}

ComplexVector stack_lambda(const std::vector<DensityMatrix>& outputs) {
  if (outputs.empty()) throw validation_error("stack_lambda: no output states");
  const Eigen::Index block = outputs[0].dim() * outputs[0].dim();
  ComplexVector lambda(block * Eigen::Index(outputs.size()));
  for (std::size_t j = 0; j < outputs.size(); ++j)
    lambda.segment(j * block, block) = vectorize(outputs[j].matrix);
  return lambda;
}

StandardChiResult reconstruct_standard_chi(const ComplexMatrix& beta,
                                           const ComplexVector& lambda) {
  if (beta.rows() != lambda.size() || beta.rows() != beta.cols())
    throw validation_error("reconstruct_standard_chi: beta must be square and match lambda");
  Eigen::FullPivLU<ComplexMatrix> lu(beta);
  if (lu.rank() < beta.cols())
    throw validation_error("reconstruct_standard_chi: singular beta (rank " +
                           std::to_string(lu.rank()) + " of " + std::to_string(beta.cols()) + ")");
  const ComplexVector chi_vec = lu.solve(lambda);
  const int n_ops = static_cast<int>(std::lround(std::sqrt(double(chi_vec.size()))));
  const ComplexMatrix raw = unvectorize(chi_vec, n_ops, n_ops);
  StandardChiResult result;
  result.hermitization_residual = hermiticity_gap(raw);
  result.chi = ProcessMatrix(0.5 * (raw + raw.adjoint().eval()));
  return result;
}

solver::ConstrainedLsqProblem cco_chi_problem(const ComplexMatrix& beta,
                                              const ComplexVector& lambda) {
  if (beta.rows() != lambda.size())
    throw validation_error("cco_chi_problem: beta rows do not match lambda");
  const int n_ops = static_cast<int>(std::lround(std::sqrt(double(beta.cols()))));
  if (Eigen::Index(n_ops) * n_ops != beta.cols())
    throw validation_error("cco_chi_problem: beta columns must be a square count");
  const OperatorBasis& basis = two_qubit_basis();
  if (n_ops != basis.size())
    throw validation_error("cco_chi_problem: expected a two-qubit beta (256 columns)");
  const int dim = basis.dim();
  const int n_params = solver::hermitian_param_count(n_ops);

  // Complex design over Hermitian parameters: column j = beta * vec(B_j),
  // then split into stacked real and imaginary rows.
  ComplexMatrix param_vecs(n_ops * n_ops, n_params);
  for (int j = 0; j < n_params; ++j) {
    RealVector unit = RealVector::Zero(n_params);
    unit(j) = 1.0;
    param_vecs.col(j) = vectorize(solver::params_to_hermitian(unit, n_ops));
  }
  const ComplexMatrix complex_design = beta * param_vecs;

  solver::ConstrainedLsqProblem problem;
  problem.design.resize(2 * complex_design.rows(), n_params);
  problem.design.topRows(complex_design.rows()) = complex_design.real();
  problem.design.bottomRows(complex_design.rows()) = complex_design.imag();
  problem.target.resize(2 * lambda.size());
  problem.target.head(lambda.size()) = lambda.real();
  problem.target.tail(lambda.size()) = lambda.imag();
  problem.psd_dim = n_ops;

  // Trace preservation: sum_mn chi(m,n) A_n^dag A_m = I, expressed in the
  // Hermitian parameterization of the dim x dim output matrix.
  const int n_out = solver::hermitian_param_count(dim);
  problem.constraints.resize(n_out, n_params);
  for (int j = 0; j < n_params; ++j) {
    RealVector unit = RealVector::Zero(n_params);
    unit(j) = 1.0;
    const ComplexMatrix bj = solver::params_to_hermitian(unit, n_ops);
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    for (int m = 0; m < n_ops; ++m)
      for (int n = 0; n < n_ops; ++n) {
        const Complex c = bj(m, n);
        if (c != Complex(0.0, 0.0))
          s += c * (basis.elements[n].adjoint() * basis.elements[m]);
      }
    problem.constraints.col(j) = solver::hermitian_to_params(0.5 * (s + s.adjoint().eval()));
  }
  problem.rhs = solver::hermitian_to_params(ComplexMatrix::Identity(dim, dim));
  return problem;
}

ProcessMatrix reconstruct_cco_chi(const ComplexMatrix& beta, const ComplexVector& lambda,
                                  const solver::SolverConfig& config) {
  const solver::ConstrainedLsqProblem problem = cco_chi_problem(beta, lambda);
  solver::SolverReport report = solver::solve(problem, config);
  if (!report.converged)
    throw solver::convergence_error("reconstruct_cco_chi: solver did not converge within " +
                                        std::to_string(config.max_iters) + " iterations",
                                    std::move(report));
  return ProcessMatrix(solver::params_to_hermitian(report.solution, problem.psd_dim));
}

double cptp_residual(const ProcessMatrix& chi, const OperatorBasis& basis) {
  const int dim = basis.dim();
  if (chi.chi.rows() != basis.size())
    throw validation_error("cptp_residual: chi does not match basis size");
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (int m = 0; m < basis.size(); ++m)
    for (int n = 0; n < basis.size(); ++n) {
      const Complex c = chi.chi(m, n);
      if (c != Complex(0.0, 0.0)) s += c * (basis.elements[n].adjoint() * basis.elements[m]);
    }
  return (s - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

KrausSet extract_kraus(const ProcessMatrix& chi, const OperatorBasis& basis, double threshold) {
  if (chi.chi.rows() != basis.size())
    throw validation_error("extract_kraus: chi does not match basis size");
  const EigResult eig = eig_hermitian(chi.chi);
  const double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (min_eig < -kPsdTol) {
    std::string negatives;
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k)
      if (eig.eigenvalues(k) < -kPsdTol) {
        if (!negatives.empty()) negatives += ", ";
        negatives += std::to_string(eig.eigenvalues(k));
      }
    throw validation_error("extract_kraus: chi is not positive semidefinite; negative "
                           "eigenvalues: " + negatives);
  }

  const double cutoff = threshold * std::max(eig.eigenvalues(0), 0.0);
  KrausSet kraus;
  const int dim = basis.dim();
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double d = eig.eigenvalues(i);
    if (d < cutoff || d <= 0.0) continue;
    ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
    for (int j = 0; j < basis.size(); ++j) op += eig.eigenvectors(j, i) * basis.elements[j];
    kraus.operators.push_back(std::sqrt(d) * op);
    kraus.weights.push_back(d);
  }
  ComplexMatrix completeness = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& op : kraus.operators) completeness += op.adjoint() * op;
  kraus.completeness_residual =
      (completeness - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  return kraus;
}

ProcessMatrix chi_from_kraus(const std::vector<ComplexMatrix>& operators,
                             const OperatorBasis& basis) {
  if (operators.empty()) throw validation_error("chi_from_kraus: empty operator list");
  const int dim = basis.dim();
  ComplexMatrix coeffs(operators.size(), basis.size()); // a(i, m)
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (operators[i].rows() != dim || operators[i].cols() != dim)
      throw validation_error("chi_from_kraus: operator dimension mismatch");
    for (int m = 0; m < basis.size(); ++m)
      coeffs(i, m) = (basis.elements[m].adjoint() * operators[i]).trace() / double(dim);
  }
  ComplexMatrix chi = coeffs.transpose() * coeffs.conjugate(); // chi(m,n) = sum_i a_im conj(a_in)
  chi = 0.5 * (chi + chi.adjoint().eval());
  return ProcessMatrix(std::move(chi));
}

ComplexMatrix channel_action(const ProcessMatrix& chi, const OperatorBasis& basis,
                             const ComplexMatrix& rho) {
  const int dim = basis.dim();
  if (rho.rows() != dim || rho.cols() != dim)
    throw validation_error("channel_action: state dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int m = 0; m < basis.size(); ++m) {
    const ComplexMatrix left = basis.elements[m] * rho;
    for (int n = 0; n < basis.size(); ++n) {
      const Complex c = chi.chi(m, n);
      if (c != Complex(0.0, 0.0)) out += c * (left * basis.elements[n].adjoint());
    }
  }
  return out;
}

DensityMatrix apply_channel(const ProcessMatrix& chi, const OperatorBasis& basis,
                            const DensityMatrix& rho) {
  const EigResult eig = eig_hermitian(chi.chi);
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -kPsdTol)
    throw validation_error("apply_channel: chi has negative eigenvalue " +
                           std::to_string(eig.eigenvalues(eig.eigenvalues.size() - 1)));
  const double tp = cptp_residual(chi, basis);
  if (tp > kCptpTol)
    throw validation_error("apply_channel: chi violates trace preservation by " +
                           std::to_string(tp));
  ComplexMatrix out = channel_action(chi, basis, rho.matrix);
  out = 0.5 * (out + out.adjoint().eval());
  // guard against accumulated roundoff in the double sum
  out /= out.trace().real();
  const ComplexMatrix cleaned = solver::project_psd(out, 0.0);
  return DensityMatrix(cleaned / cleaned.trace().real());
}

DensityMatrix apply_channel(const KrausSet& kraus, const DensityMatrix& rho, bool lenient) {
  if (kraus.operators.empty()) throw validation_error("apply_channel: empty Kraus set");
  if (!lenient && kraus.completeness_residual > 1e-6)
    throw validation_error("apply_channel: completeness residual " +
                           std::to_string(kraus.completeness_residual) +
                           " too large for strict mode");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const ComplexMatrix& op : kraus.operators) {
    if (op.rows() != rho.dim())
      throw validation_error("apply_channel: Kraus operator dimension mismatch");
    out += op * rho.matrix * op.adjoint();
  }
  out = 0.5 * (out + out.adjoint().eval());
  // trace deviation is bounded by the completeness residual; renormalize
  out /= out.trace().real();
  const ComplexMatrix cleaned = solver::project_psd(out, 0.0);
  return DensityMatrix(cleaned / cleaned.trace().real());
}

ComplexMatrix named_gate(const std::string& name) {
  const Complex i(0.0, 1.0);
  if (name == "identity") return ComplexMatrix::Identity(4, 4);
  if (name == "cnot") {
    ComplexMatrix g = ComplexMatrix::Zero(4, 4);
    g(0, 0) = 1;
    g(1, 1) = 1;
    g(2, 3) = 1;
    g(3, 2) = 1;
    return g;
  }
  if (name == "crx_pi") {
    // Rx(pi) = -iX on the target when the control qubit is |1>
    ComplexMatrix g = ComplexMatrix::Zero(4, 4);
    g(0, 0) = 1;
    g(1, 1) = 1;
    g(2, 3) = -i;
    g(3, 2) = -i;
    return g;
  }
  throw validation_error("named_gate: unknown gate \"" + name +
                         "\" (expected identity, cnot, crx_pi)");
}

ProcessMatrix ideal_chi(const ComplexMatrix& unitary, const OperatorBasis& basis) {
  const int dim = basis.dim();
  if (unitary.rows() != dim || unitary.cols() != dim)
    throw validation_error("ideal_chi: gate dimension mismatch");
  const ComplexMatrix gram = unitary.adjoint() * unitary;
  if ((gram - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw validation_error("ideal_chi: matrix is not unitary");
  ComplexVector coeffs(basis.size());
  for (int m = 0; m < basis.size(); ++m)
    coeffs(m) = (basis.elements[m].adjoint() * unitary).trace() / double(dim);
  ComplexMatrix chi = coeffs * coeffs.adjoint();
  chi = 0.5 * (chi + chi.adjoint().eval());
  return ProcessMatrix(std::move(chi));
}

// ---------------------------------------------------------------------------

std::vector<qst::MeasurementRecord> simulate_output_records(
    const std::vector<DensityMatrix>& true_outputs, double noise_std, std::uint64_t seed) {
  const qst::MeasurementScheme scheme = qst::default_two_qubit_scheme();
  std::vector<qst::MeasurementRecord> records;
  records.reserve(true_outputs.size());
  Rng root(seed);
  for (std::size_t j = 0; j < true_outputs.size(); ++j) {
    const std::uint64_t sub_seed = root.split(j).next_u64();
    records.push_back(qst::simulate_measurements(true_outputs[j], scheme, noise_std, sub_seed));
  }
  return records;
}

ProcessTomographyData assemble_tomography_data(std::vector<DensityMatrix> inputs,
                                               std::vector<qst::MeasurementRecord> records,
                                               const solver::SolverConfig& config) {
  if (inputs.size() != records.size())
    throw validation_error("assemble_tomography_data: inputs/records size mismatch");
  ProcessTomographyData data;
  data.input_states = std::move(inputs);
  data.records = std::move(records);
  const OperatorBasis& basis = two_qubit_basis();
  data.output_states.reserve(data.records.size());
  for (const qst::MeasurementRecord& record : data.records) {
    const RealMatrix design = qst::build_design_matrix(record.scheme, basis);
    data.output_states.push_back(qst::reconstruct_cco(design, record, basis, config));
  }
  data.lambda = stack_lambda(data.output_states);
  return data;
}

ProcessTomographyData simulate_gate_qpt(const ComplexMatrix& gate, double noise_std,
                                        std::uint64_t seed,
                                        const solver::SolverConfig& config) {
  std::vector<DensityMatrix> inputs = qpt_input_states();
  std::vector<DensityMatrix> true_outputs;
  true_outputs.reserve(inputs.size());
  for (const DensityMatrix& rho : inputs) {
    ComplexMatrix out = gate * rho.matrix * gate.adjoint();
    out = 0.5 * (out + out.adjoint().eval());
    true_outputs.emplace_back(out / out.trace().real());
  }
  std::vector<qst::MeasurementRecord> records =
      simulate_output_records(true_outputs, noise_std, seed);
  return assemble_tomography_data(std::move(inputs), std::move(records), config);
}

} // namespace tomoct::qpt
