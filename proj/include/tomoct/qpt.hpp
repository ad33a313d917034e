#pragma once

#include "tomoct/core.hpp"
#include "tomoct/qst.hpp"
#include "tomoct/solver.hpp"

namespace tomoct::qpt {

/// Basis tag written into chi files; fidelity comparisons require equal tags.
inline constexpr const char* kTwoQubitBasisTag = "pauli-2q-v1";

/// Process matrix chi over a fixed operator basis: the channel acts as
/// rho -> sum_mn chi(m,n) A_m rho A_n^dagger. Hermitian always; PSD and
/// trace-preserving when the channel is physical.
struct ProcessMatrix {
  std::string basis_tag = kTwoQubitBasisTag;
  ComplexMatrix chi;

  ProcessMatrix() = default;
  explicit ProcessMatrix(ComplexMatrix chi_in, std::string tag = kTwoQubitBasisTag);
};

/// Operator-sum form: rho -> sum_i E_i rho E_i^dagger with completeness
/// sum_i E_i^dagger E_i = I. weights are the chi eigenvalues the operators
/// were extracted from, descending.
struct KrausSet {
  std::vector<ComplexMatrix> operators;
  std::vector<double> weights;
  double completeness_residual = 0.0; // max |sum E_i^dag E_i - I|
};

/// The 16 two-qubit product input states |00>,|01>,|0+>,|0->,|10>,...,|-->,
/// in that fixed order. Linearly independent as operators.
std::vector<DensityMatrix> qpt_input_states();

/// Coefficient matrix beta (256 x 256) with row (j*16 + 4a + b), column
/// (m*16 + n) holding (A_m rho_j A_n^dagger)(a, b), so that
/// beta * vectorize(chi) stacks the channel outputs on all inputs.
ComplexMatrix build_beta(const OperatorBasis& basis, const std::vector<DensityMatrix>& inputs);

/// lambda: vectorized output states stacked in input order.
ComplexVector stack_lambda(const std::vector<DensityMatrix>& outputs);

struct StandardChiResult {
  ProcessMatrix chi;
  double hermitization_residual = 0.0; // asymmetry removed by (chi + chi^dag)/2
};

/// Linear inversion chi = beta^{-1} lambda, hermitized by averaging with its
/// adjoint. Eigenvalues may be negative.
StandardChiResult reconstruct_standard_chi(const ComplexMatrix& beta, const ComplexVector& lambda);

/// Constrained reconstruction over 256 real parameters with the
/// trace-preservation equalities and the PSD cone; always physical.
ProcessMatrix reconstruct_cco_chi(const ComplexMatrix& beta, const ComplexVector& lambda,
                                  const solver::SolverConfig& config = {});

/// The problem reconstruct_cco_chi solves, for solver cross-checks.
solver::ConstrainedLsqProblem cco_chi_problem(const ComplexMatrix& beta,
                                              const ComplexVector& lambda);

/// max elementwise |sum_mn chi(m,n) A_n^dagger A_m - I|.
double cptp_residual(const ProcessMatrix& chi, const OperatorBasis& basis);

/// Kraus operators from a PSD chi: E_i = sqrt(d_i) sum_j U(j,i) A_j over the
/// eigenpairs (d_i, U) of chi, keeping d_i >= threshold * d_max. Rejects
/// indefinite chi (eigenvalues below -1e-9).
KrausSet extract_kraus(const ProcessMatrix& chi, const OperatorBasis& basis,
                       double threshold = 1e-6);

/// chi(m,n) = sum_i a_im conj(a_in) with a_im = trace(A_m^dagger E_i) / 2^n;
/// PSD by construction.
ProcessMatrix chi_from_kraus(const std::vector<ComplexMatrix>& operators,
                             const OperatorBasis& basis);

/// Raw linear channel action sum_mn chi(m,n) A_m rho A_n^dagger without any
/// validity check; the output of an indefinite chi need not be a state.
ComplexMatrix channel_action(const ProcessMatrix& chi, const OperatorBasis& basis,
                             const ComplexMatrix& rho);

/// Channel application with validation: chi must be PSD and trace preserving.
DensityMatrix apply_channel(const ProcessMatrix& chi, const OperatorBasis& basis,
                            const DensityMatrix& rho);

/// Kraus-side application. Strict mode requires completeness residual
/// <= 1e-6; lenient mode renormalizes the output trace instead, for operator
/// sets stored at limited precision.
DensityMatrix apply_channel(const KrausSet& kraus, const DensityMatrix& rho,
                            bool lenient = false);

/// Named two-qubit gate unitaries: "identity", "cnot", "crx_pi"
/// (controlled Rx(pi), i.e. -iX on the target when the control is |1>).
ComplexMatrix named_gate(const std::string& name);

/// Rank-1 chi of a unitary gate: outer product of its basis-coefficient
/// vector. Throws if the matrix is not unitary.
ProcessMatrix ideal_chi(const ComplexMatrix& unitary, const OperatorBasis& basis);

// ---------------------------------------------------------------------------
// Full simulated pipeline: true outputs -> noisy measurement records ->
// constrained state tomography per output -> lambda. The reconstructed
// outputs (not the raw expectations) feed lambda, so beta stays square.

struct ProcessTomographyData {
  std::vector<DensityMatrix> input_states;
  std::vector<qst::MeasurementRecord> records; // one per input, output-state measurements
  std::vector<DensityMatrix> output_states;    // constrained tomography of each record
  ComplexVector lambda;                        // stacked vectorizations of output_states
};

/// Noisy measurement records of each true output state under the default
/// two-qubit scheme; record j uses the (seed, j) substream.
std::vector<qst::MeasurementRecord> simulate_output_records(
    const std::vector<DensityMatrix>& true_outputs, double noise_std, std::uint64_t seed);

/// Tomographs every record (constrained method) and assembles lambda.
ProcessTomographyData assemble_tomography_data(std::vector<DensityMatrix> inputs,
                                               std::vector<qst::MeasurementRecord> records,
                                               const solver::SolverConfig& config = {});

/// End-to-end simulated QPT data for a unitary gate acting on the 16
/// standard inputs.
ProcessTomographyData simulate_gate_qpt(const ComplexMatrix& gate, double noise_std,
                                        std::uint64_t seed,
                                        const solver::SolverConfig& config = {});

} // namespace tomoct::qpt
