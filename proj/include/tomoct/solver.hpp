#pragma once

#include "tomoct/core.hpp"

namespace tomoct::solver {

// ---------------------------------------------------------------------------
// Real parameterization of Hermitian matrices
//
// An m x m Hermitian matrix maps to m*m real parameters: first the m real
// diagonal entries, then for each upper-triangle entry (a,b) in row-major
// order a (re, im) pair scaled by 1/sqrt2. The scaling makes the map an
// isometry between the parameter 2-norm and the Frobenius norm, so the PSD
// projection in matrix space is exactly the Euclidean projection in
// parameter space.

int hermitian_param_count(int dim);
RealVector hermitian_to_params(const ComplexMatrix& h);
ComplexMatrix params_to_hermitian(const RealVector& p, int dim);

// ---------------------------------------------------------------------------

/// Frobenius-nearest matrix with all eigenvalues >= floor (exact nearest PSD
/// matrix when floor == 0). Input must be Hermitian.
ComplexMatrix project_psd(const ComplexMatrix& m, double floor = 0.0);

/// Euclidean projection of x onto {y : C y = r}. Redundant-but-consistent
/// rows are tolerated; an inconsistent system raises infeasibility_error.
RealVector project_affine(const RealVector& x, const RealMatrix& constraints,
                          const RealVector& rhs);

// ---------------------------------------------------------------------------

/// Least squares over a real parameter vector x whose induced Hermitian
/// matrix must be positive semidefinite, subject to affine equalities:
///
///   minimize ||design * x - target||_2
///   s.t.     constraints * x = rhs,   params_to_hermitian(x, psd_dim) >= 0
///
/// The parameter count must equal psd_dim^2 (the Hermitian parameterization
/// above is baked in).
struct ConstrainedLsqProblem {
  RealMatrix design;
  RealVector target;
  int psd_dim = 0;
  RealMatrix constraints; // may have zero rows
  RealVector rhs;
};

struct SolverConfig {
  double penalty = 1.0;       // ADMM consensus penalty
  double tol_primal = 1e-8;
  double tol_dual = 1e-8;
  int max_iters = 100000;
  double psd_floor = 0.0;     // eigenvalue clip threshold inside the PSD block
};

struct SolverReport {
  RealVector solution;
  double objective = 0.0;       // final ||design*solution - target||_2
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  double min_eigenvalue = 0.0;  // of params_to_hermitian(solution)
};

/// Raised by callers that require convergence; carries the failed report.
struct convergence_error : numeric_error {
  SolverReport report;
  convergence_error(const std::string& msg, SolverReport rep)
      : numeric_error(msg), report(std::move(rep)) {}
};

/// Solves the problem by ADMM, splitting the least-squares + affine block
/// from the PSD block. The affine constraints are folded into the x-update
/// through a KKT system factored once, so every iterate satisfies them
/// exactly. After the residual test passes, a short Dykstra refinement drives
/// the returned point onto the constraint intersection far below the stop
/// tolerances (min eigenvalue >= -1e-9, affine residual ~1e-12), so the
/// validity of the output does not degrade with looser stopping settings.
/// Deterministic: identical inputs give bit-identical reports.
SolverReport solve(const ConstrainedLsqProblem& problem, const SolverConfig& config = {});

} // namespace tomoct::solver
