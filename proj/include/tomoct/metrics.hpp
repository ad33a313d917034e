#pragma once

#include "tomoct/core.hpp"
#include "tomoct/qpt.hpp"

namespace tomoct::metrics {

/// Normalized Hilbert-Schmidt overlap
///   |trace(a b^dag)| / sqrt(trace(a^dag a) trace(b^dag b)),
/// clamped into [0, 1]. This is not the Uhlmann fidelity; it equals 1 exactly
/// when the arguments are proportional, is symmetric, and is invariant under
/// simultaneous unitary conjugation.
double state_fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

inline double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  return state_fidelity(a.matrix, b.matrix);
}

/// Same overlap applied to process matrices; both must carry the same basis
/// tag.
double process_fidelity(const qpt::ProcessMatrix& a, const qpt::ProcessMatrix& b);

/// Mean squared elementwise absolute deviation sum_ij |p_ij - q_ij|^2 / d^2.
double state_deviation(const ComplexMatrix& predicted, const ComplexMatrix& ideal);

/// state_deviation between the chi-predicted and the ideal-gate output,
/// averaged over the input set (defaults to the 16 standard inputs when
/// inputs is empty). chi is applied as a raw linear map so indefinite
/// (hermitized linear-inversion) process matrices can be scored too.
double average_state_deviation(const qpt::ProcessMatrix& chi, const ComplexMatrix& ideal_gate,
                               const std::vector<DensityMatrix>& inputs = {});

struct EigenvalueReport {
  RealVector eigenvalues; // descending
  double min_eigenvalue = 0.0;
};

EigenvalueReport eigenvalue_report(const ComplexMatrix& m);

} // namespace tomoct::metrics
