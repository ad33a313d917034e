#include "tomoct/metrics.hpp"

#include <cmath>

namespace tomoct::metrics {

double state_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw validation_error("state_fidelity: dimension mismatch");
  const double norm_a = std::sqrt((a.adjoint() * a).trace().real());
  const double norm_b = std::sqrt((b.adjoint() * b).trace().real());
  if (norm_a < 1e-14 || norm_b < 1e-14)
    throw validation_error("state_fidelity: zero-norm argument");
  const double overlap = std::abs((a * b.adjoint()).trace());
  double value = overlap / (norm_a * norm_b);
  if (value > 1.0 + 1e-9)
    throw numeric_error("state_fidelity: overlap " + std::to_string(value) + " above 1");
  return std::min(value, 1.0);
}

double process_fidelity(const qpt::ProcessMatrix& a, const qpt::ProcessMatrix& b) {
  if (a.basis_tag != b.basis_tag)
    throw validation_error("process_fidelity: basis mismatch (" + a.basis_tag + " vs " +
                           b.basis_tag + ")");
  return state_fidelity(a.chi, b.chi);
}

double state_deviation(const ComplexMatrix& predicted, const ComplexMatrix& ideal) {
  if (predicted.rows() != ideal.rows() || predicted.cols() != ideal.cols())
    throw validation_error("state_deviation: shape mismatch");
  const double d2 = double(predicted.rows()) * double(predicted.cols());
  return (predicted - ideal).cwiseAbs2().sum() / d2;
}

double average_state_deviation(const qpt::ProcessMatrix& chi, const ComplexMatrix& ideal_gate,
                               const std::vector<DensityMatrix>& inputs) {
  std::vector<DensityMatrix> defaults;
  if (inputs.empty()) defaults = qpt::qpt_input_states();
  const std::vector<DensityMatrix>& states = inputs.empty() ? defaults : inputs;
  const OperatorBasis basis = pauli_basis(2);
  double total = 0.0;
  for (const DensityMatrix& rho : states) {
    const ComplexMatrix predicted = qpt::channel_action(chi, basis, rho.matrix);
    const ComplexMatrix ideal = ideal_gate * rho.matrix * ideal_gate.adjoint();
    total += state_deviation(predicted, ideal);
  }
  return total / double(states.size());
}

EigenvalueReport eigenvalue_report(const ComplexMatrix& m) {
  const EigResult eig = eig_hermitian(m);
  EigenvalueReport report;
  report.eigenvalues = eig.eigenvalues;
  report.min_eigenvalue = eig.eigenvalues(eig.eigenvalues.size() - 1);
  return report;
}

} // namespace tomoct::metrics
