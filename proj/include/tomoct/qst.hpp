#pragma once

#include "tomoct/core.hpp"
#include "tomoct/solver.hpp"

namespace tomoct::qst {

/// The measured operators M_k. Every observable must be Hermitian.
struct MeasurementScheme {
  std::vector<ComplexMatrix> observables;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(observables.size()); }
};

/// One simulated (or recorded) run: the expectation value of each scheme
/// observable, plus the noise level and seed that produced it.
struct MeasurementRecord {
  MeasurementScheme scheme;
  RealVector values;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

/// The 15 non-identity two-qubit Pauli products, in basis order. The identity
/// expectation is fixed at 1 and not measured.
MeasurementScheme default_two_qubit_scheme();

/// Scheme from Pauli labels like "XZ" or "IY" (letters I, X, Y, Z).
MeasurementScheme scheme_from_labels(const std::vector<std::string>& labels);

/// Design matrix A with A(k, m) = trace(M_k * A_m), so A * c reproduces the
/// expected record for rho = sum_m c_m A_m. Entries are checked real.
RealMatrix build_design_matrix(const MeasurementScheme& scheme, const OperatorBasis& basis);

/// b_k = trace(M_k * rho) + Gaussian(0, noise_std), reproducible per seed.
/// Values are clamped to [-(1 + 5 sigma), 1 + 5 sigma].
MeasurementRecord simulate_measurements(const DensityMatrix& rho_true,
                                        const MeasurementScheme& scheme, double noise_std,
                                        std::uint64_t seed);

/// Plain linear inversion: least-squares Pauli coefficients, identity
/// coefficient pinned to 1/2^n. The result is Hermitian with unit trace but
/// can be indefinite; min_eigenvalue records how badly.
HermitianEstimate reconstruct_standard(const RealMatrix& design, const MeasurementRecord& record,
                                       const OperatorBasis& basis);

/// Constrained reconstruction: least squares over the full Hermitian
/// parameterization with a unit-trace equality and a PSD cone constraint,
/// solved by tomoct::solver. Always returns a valid DensityMatrix.
DensityMatrix reconstruct_cco(const RealMatrix& design, const MeasurementRecord& record,
                              const OperatorBasis& basis,
                              const solver::SolverConfig& config = {});

/// The ConstrainedLsqProblem that reconstruct_cco solves; exposed so callers
/// can cross-check the solver against an independent method on real
/// tomography instances.
solver::ConstrainedLsqProblem cco_problem(const RealMatrix& design,
                                          const MeasurementRecord& record,
                                          const OperatorBasis& basis);

} // namespace tomoct::qst
