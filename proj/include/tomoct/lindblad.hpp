#pragma once

#include "tomoct/core.hpp"
#include "tomoct/qpt.hpp"
#include "tomoct/solver.hpp"

namespace tomoct::lindblad {

/// Time-independent master equation data. The Hamiltonian is in angular
/// frequency units (rad/s); each jump operator already carries the square
/// root of its rate (units 1/sqrt(s)).
struct LindbladModel {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> lindblad_ops;
};

/// Two-qubit NMR relaxation parameters. Times in seconds, coupling in Hz.
/// equilibrium_excited_population p in [0, 0.5] splits the longitudinal
/// relaxation into decay and excitation channels; p = 0.5 relaxes toward the
/// maximally mixed state (high-temperature limit).
struct NmrNoiseParams {
  double t1_a = 8.0;
  double t1_b = 16.5;
  double t2_a = 2.9;
  double t2_b = 0.3;
  double j_coupling_hz = 214.59; // from 1/(2J) = 2.33 ms
  double equilibrium_excited_population = 0.5;
};

/// Right-hand side of the master equation:
///   -i[H, rho] + 1/2 sum_k ([L_k rho, L_k^dag] + [L_k, rho L_k^dag]).
/// Trace-free and Hermiticity-preserving.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);

/// Matrix of the generator acting on row-major vectorized states, built
/// column by column from lindblad_rhs so the two stay consistent.
ComplexMatrix lindblad_superoperator(const LindbladModel& model);

/// Fixed-step fourth-order Runge-Kutta integration of the master equation.
///
/// The generator is linear and time independent, so the RK4 update is the
/// degree-4 Taylor polynomial of exp(dt * L) applied at every step; the
/// remainder below dt is integrated with a shortened final step. The result
/// is trace-renormalized; eigenvalues in [-1e-7, 0) are clipped to zero,
/// anything lower raises a step-size numeric_error.
DensityMatrix evolve(const DensityMatrix& rho0, const LindbladModel& model, double t, double dt);

/// Default integration step: resolves the coupling frequency with step
/// error far below the halving-difference band.
inline constexpr double kDefaultDt = 1e-5;

/// Unitary generated by the model Hamiltonian alone, exp(-i H t). The chi
/// snapshot of a noiseless model at time t equals ideal_chi of this matrix,
/// so it is the coherent reference the decaying snapshots are scored
/// against. (With the ZZ coupling at NMR strength the snapshots are far from
/// the identity channel at every sampled time even before any decoherence;
/// overlap with the plain identity oscillates with the coupling phase.)
ComplexMatrix coherent_unitary(const LindbladModel& model, double t);

/// Two-qubit NMR decoherence model: ZZ coupling Hamiltonian
/// H = 2 pi J (Z(x)Z) / 4 plus, per qubit, generalized amplitude damping
/// (sigma_minus at rate (1-p)/T1, sigma_plus at rate p/T1) and pure
/// dephasing (sigma_z at rate gamma_phi / 2 with
/// gamma_phi = 1/T2 - 1/(2 T1), which must be nonnegative).
/// Zero-rate operators are omitted.
LindbladModel nmr_noise_model(const NmrNoiseParams& params);

/// Snapshot process matrix at time t: evolves the 16 standard inputs,
/// stacks lambda, and runs the constrained chi reconstruction.
qpt::ProcessMatrix markovian_chi(const LindbladModel& model, double t, double dt = kDefaultDt,
                                 const solver::SolverConfig& config = {});

/// Snapshot chi at each time (ascending), evolving the inputs incrementally
/// between checkpoints.
std::vector<qpt::ProcessMatrix> markovian_chi_sweep(const LindbladModel& model,
                                                    const std::vector<double>& times,
                                                    double dt = kDefaultDt,
                                                    const solver::SolverConfig& config = {});

struct BellDecayRow {
  double t = 0.0;
  std::string state;                         // "B1".."B4"
  double fidelity_evolved_vs_predicted = 0.0; // direct integration vs chi prediction
  double fidelity_vs_initial = 0.0;          // evolved state vs the initial Bell state
};

/// Decoherence study of the four Bell states: at each time, the directly
/// evolved state is compared with the state predicted by applying the
/// snapshot chi to the initial state. Both paths integrate the same
/// generator, so the mutual fidelity is a self-consistency check.
std::vector<BellDecayRow> bell_decay_study(const LindbladModel& model,
                                           const std::vector<double>& times,
                                           double dt = kDefaultDt,
                                           const solver::SolverConfig& config = {});

} // namespace tomoct::lindblad
