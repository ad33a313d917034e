#include "tomoct/solver.hpp"

#include <cmath>

namespace tomoct::solver {

namespace {

constexpr double kSqrtHalf = 0.7071067811865475244;

void check_config(const SolverConfig& c) {
  if (c.penalty <= 0.0 || c.tol_primal <= 0.0 || c.tol_dual <= 0.0 || c.max_iters <= 0 ||
      c.psd_floor < 0.0)
    throw validation_error("SolverConfig: penalty/tolerances/max_iters must be positive, "
                           "psd_floor nonnegative");
}

} // namespace

int hermitian_param_count(int dim) { return dim * dim; }

RealVector hermitian_to_params(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealVector p(n * n);
  for (Eigen::Index a = 0; a < n; ++a) p(a) = h(a, a).real();
  Eigen::Index idx = n;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      p(idx++) = h(a, b).real() / kSqrtHalf;
      p(idx++) = h(a, b).imag() / kSqrtHalf;
    }
  }
  return p;
}

ComplexMatrix params_to_hermitian(const RealVector& p, int dim) {
  if (p.size() != Eigen::Index(dim) * dim)
    throw validation_error("params_to_hermitian: expected " + std::to_string(dim * dim) +
                           " parameters, got " + std::to_string(p.size()));
  ComplexMatrix h(dim, dim);
  for (int a = 0; a < dim; ++a) h(a, a) = p(a);
  Eigen::Index idx = dim;
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      const Complex z(p(idx) * kSqrtHalf, p(idx + 1) * kSqrtHalf);
      idx += 2;
      h(a, b) = z;
      h(b, a) = std::conj(z);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

ComplexMatrix project_psd(const ComplexMatrix& m, double floor) {
  const EigResult eig = eig_hermitian(m); // validates hermiticity
  const Eigen::Index n = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = std::max(eig.eigenvalues(k), floor);
    if (d != 0.0)
      out.noalias() += d * (eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint());
  }
  return 0.5 * (out + out.adjoint().eval());
}

RealVector project_affine(const RealVector& x, const RealMatrix& constraints,
                          const RealVector& rhs) {
  if (constraints.rows() == 0) return x;
  if (constraints.cols() != x.size() || constraints.rows() != rhs.size())
    throw validation_error("project_affine: constraint shape mismatch");

  // Orthonormalize the row space; detect inconsistency of dropped rows.
  Eigen::ColPivHouseholderQR<RealMatrix> qr(constraints.transpose());
  const Eigen::Index rank = qr.rank();
  RealMatrix q_full = qr.householderQ() * RealMatrix::Identity(constraints.cols(), rank);
  const RealMatrix basis = q_full.transpose(); // rank x n, orthonormal rows

  // A feasible point via least squares; inconsistent systems leave a residual.
  const RealVector feasible =
      Eigen::CompleteOrthogonalDecomposition<RealMatrix>(constraints).solve(rhs);
  const double res = (constraints * feasible - rhs).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  if (res > 1e-9 * scale)
    throw infeasibility_error("project_affine: inconsistent constraints, residual " +
                              std::to_string(res));

  const RealVector reduced_rhs = basis * feasible;
  return x - basis.transpose() * (basis * x - reduced_rhs);
}

// ---------------------------------------------------------------------------

namespace {

RealVector psd_project_params(const RealVector& p, int dim, double floor) {
  return hermitian_to_params(project_psd(params_to_hermitian(p, dim), floor));
}

double min_eigenvalue_of(const RealVector& p, int dim) {
  const EigResult eig = eig_hermitian(params_to_hermitian(p, dim));
  return eig.eigenvalues(eig.eigenvalues.size() - 1);
}

// Dykstra refinement between the affine set (orthonormal rows) and the PSD
// cone. Returns the affine-side point once the gap between the two
// projections is negligible, so the result satisfies the equalities exactly
// and has min eigenvalue >= -gap.
RealVector refine_to_intersection(const RealVector& v, const RealMatrix& basis,
                                  const RealVector& reduced_rhs, int dim, double floor) {
  const bool constrained = basis.rows() > 0;
  RealVector x = v;
  RealVector p = RealVector::Zero(v.size());
  RealVector q = RealVector::Zero(v.size());
  RealVector y = x;
  for (int iter = 0; iter < 2000; ++iter) {
    if (constrained) {
      const RealVector xp = x + p;
      y = xp - basis.transpose() * (basis * xp - reduced_rhs);
      p = xp - y;
    } else {
      y = x + p;
      p.setZero();
    }
    const RealVector yq = y + q;
    x = psd_project_params(yq, dim, floor);
    q = yq - x;
    if ((x - y).norm() <= 1e-12) break;
  }
  return constrained ? y : x;
}

} // namespace

SolverReport solve(const ConstrainedLsqProblem& problem, const SolverConfig& config) {
  check_config(config);
  const Eigen::Index n = problem.design.cols();
  if (n != Eigen::Index(problem.psd_dim) * problem.psd_dim)
    throw validation_error("solve: parameter count must equal psd_dim^2");
  if (problem.design.rows() != problem.target.size())
    throw validation_error("solve: design rows / target length mismatch");
  if (problem.constraints.rows() != problem.rhs.size() ||
      (problem.constraints.rows() > 0 && problem.constraints.cols() != n))
    throw validation_error("solve: constraint shape mismatch");

  // Reduce the constraints to orthonormal rows once.
  RealMatrix basis(0, n);
  RealVector reduced_rhs(0);
  if (problem.constraints.rows() > 0) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(problem.constraints.transpose());
    const Eigen::Index rank = qr.rank();
    RealMatrix q_full = qr.householderQ() * RealMatrix::Identity(n, rank);
    basis = q_full.transpose();
    const RealVector feasible =
        Eigen::CompleteOrthogonalDecomposition<RealMatrix>(problem.constraints).solve(problem.rhs);
    const double res = (problem.constraints * feasible - problem.rhs).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, problem.rhs.cwiseAbs().maxCoeff());
    if (res > 1e-9 * scale)
      throw infeasibility_error("solve: infeasible affine constraints, residual " +
                                std::to_string(res));
    reduced_rhs = basis * feasible;
  }
  const Eigen::Index m = basis.rows();

  // KKT system of the x-update, factored once:
  //   [ A^T A + rho I   B^T ] [x ]   [ A^T b + rho (z - u) ]
  //   [ B               0   ] [nu] = [ r                   ]
  RealMatrix kkt = RealMatrix::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = problem.design.transpose() * problem.design +
                            config.penalty * RealMatrix::Identity(n, n);
  if (m > 0) {
    kkt.topRightCorner(n, m) = basis.transpose();
    kkt.bottomLeftCorner(m, n) = basis;
  }
  const Eigen::PartialPivLU<RealMatrix> kkt_lu(kkt);
  const RealVector atb = problem.design.transpose() * problem.target;

  RealVector x = RealVector::Zero(n);
  RealVector z = RealVector::Zero(n);
  RealVector u = RealVector::Zero(n);
  RealVector rhs_full(n + m);
  if (m > 0) rhs_full.tail(m) = reduced_rhs;

  SolverReport report;
  double primal = 0.0, dual = 0.0;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    rhs_full.head(n) = atb + config.penalty * (z - u);
    x = kkt_lu.solve(rhs_full).head(n);

    const RealVector z_new = psd_project_params(x + u, problem.psd_dim, config.psd_floor);
    dual = config.penalty * (z_new - z).norm();
    z = z_new;
    u += x - z;
    primal = (x - z).norm();
    if (primal <= config.tol_primal && dual <= config.tol_dual) {
      report.converged = true;
      ++iter;
      break;
    }
  }

  report.solution = refine_to_intersection(x, basis, reduced_rhs, problem.psd_dim,
                                           config.psd_floor);
  report.objective = (problem.design * report.solution - problem.target).norm();
  report.iterations = iter;
  report.primal_residual = primal;
  report.dual_residual = dual;
  report.min_eigenvalue = min_eigenvalue_of(report.solution, problem.psd_dim);
  return report;
}

} // namespace tomoct::solver
