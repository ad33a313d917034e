#pragma once

// Independent reference solver for PSD-constrained least squares: projected
// gradient descent with a small fixed step, run to stagnation. Projections
// use Eigen's SelfAdjointEigenSolver and a hand-rolled Dykstra loop, so no
// code is shared with the ADMM implementation under test.

#include "tomoct/core.hpp"
#include "tomoct/solver.hpp"

#include <Eigen/Eigenvalues>

namespace tomoct::oracle {

inline RealVector psd_project_params(const RealVector& p, int dim) {
  const ComplexMatrix h = solver::params_to_hermitian(p, dim);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double d = es.eigenvalues()(k);
    if (d > 0.0) out += d * (es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
  }
  out = 0.5 * (out + out.adjoint().eval());
  return solver::hermitian_to_params(out);
}

inline RealVector affine_project(const RealVector& x, const RealMatrix& c, const RealVector& r) {
  if (c.rows() == 0) return x;
  const RealMatrix gram = c * c.transpose();
  return x - c.transpose() * gram.ldlt().solve(c * x - r);
}

/// Dykstra projection onto {Cx = r} intersected with the PSD cone.
inline RealVector intersection_project(const RealVector& v, const RealMatrix& c,
                                       const RealVector& r, int dim) {
  if (c.rows() == 0) return psd_project_params(v, dim);
  RealVector x = v;
  RealVector p = RealVector::Zero(v.size());
  RealVector q = RealVector::Zero(v.size());
  for (int iter = 0; iter < 5000; ++iter) {
    const RealVector y = affine_project(x + p, c, r);
    p = x + p - y;
    x = psd_project_params(y + q, dim);
    q = y + q - x;
    if ((x - y).norm() <= 1e-14) break;
  }
  return x;
}

/// Long-run projected gradient on 0.5 * ||Ax - b||^2 over the feasible set.
/// Stops when an update moves the iterate by less than the stagnation
/// threshold; with step 1e-4 and designs of unit scale that leaves the
/// iterate within ~1e-8 of the minimizer, far inside the 1e-6 comparison
/// tolerance used by the tests.
inline RealVector projected_gradient(const solver::ConstrainedLsqProblem& problem,
                                     double step = 1e-4, long max_iters = 1000000,
                                     double stagnation = 1e-13) {
  const RealMatrix& a = problem.design;
  const RealVector& b = problem.target;
  RealVector x = intersection_project(RealVector::Zero(a.cols()), problem.constraints,
                                      problem.rhs, problem.psd_dim);
  for (long k = 0; k < max_iters; ++k) {
    const RealVector gradient = a.transpose() * (a * x - b);
    const RealVector next = intersection_project(x - step * gradient, problem.constraints,
                                                 problem.rhs, problem.psd_dim);
    const double moved = (next - x).norm();
    x = next;
    if (moved <= stagnation) break;
  }
  return x;
}

/// Deterministic instance family for solver cross-checks: well-conditioned
/// design, target encoding a Hermitian matrix with one negative eigenvalue
/// (so the cone constraint binds), trace equality on even indices.
inline solver::ConstrainedLsqProblem oracle_instance(int index) {
  const int dim = 4;
  const int n = solver::hermitian_param_count(dim);
  Rng rng = Rng(0xACE5u).split(index);

  RealMatrix design = RealMatrix::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) design(r, c) += 0.15 / dim * rng.gaussian();

  // Hermitian target with eigenvalues (positive..., one negative), unit trace.
  ComplexMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix u = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  RealVector eigs(dim);
  for (int k = 0; k + 1 < dim; ++k) eigs(k) = 0.2 + rng.uniform();
  eigs(dim - 1) = -(0.1 + 0.3 * rng.uniform());
  eigs *= 1.0 / eigs.sum();
  ComplexMatrix target = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) target += eigs(k) * (u.col(k) * u.col(k).adjoint());
  target = 0.5 * (target + target.adjoint().eval());

  solver::ConstrainedLsqProblem problem;
  problem.design = design;
  problem.target = design * solver::hermitian_to_params(target);
  problem.psd_dim = dim;
  if (index % 2 == 0) {
    problem.constraints = RealMatrix::Zero(1, n);
    problem.constraints.leftCols(dim).setOnes();
    problem.rhs = RealVector::Constant(1, 1.0);
  } else {
    problem.constraints = RealMatrix(0, n);
    problem.rhs = RealVector(0);
  }
  return problem;
}

} // namespace tomoct::oracle
