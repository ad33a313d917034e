#pragma once

#include "tomoct/core.hpp"
#include "tomoct/qpt.hpp"

namespace tomoct::fixtures {

/// Gates with embedded reference data: "identity", "cnot", "crx_pi".
const std::vector<std::string>& reference_gates();

/// Experimentally characterized Kraus operators for the gate, stored at
/// 4-decimal precision (3 operators for identity, 5 for the others).
const std::vector<ComplexMatrix>& reference_kraus(const std::string& gate);

/// Nonzero process-matrix eigenvalues the Kraus set was extracted from,
/// descending.
const RealVector& reference_chi_eigenvalues(const std::string& gate);

/// Reference process fidelity of the characterized chi against the ideal
/// gate chi.
double reference_process_fidelity(const std::string& gate);

/// chi rebuilt from the stored Kraus set.
qpt::ProcessMatrix reference_chi(const std::string& gate);

} // namespace tomoct::fixtures
