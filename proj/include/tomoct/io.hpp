#pragma once

#include "tomoct/core.hpp"
#include "tomoct/lindblad.hpp"
#include "tomoct/qpt.hpp"
#include "tomoct/qst.hpp"

#include <iosfwd>
#include <optional>

namespace tomoct::io {

// JSON formats (all doubles written with 17 significant digits, so files
// round-trip bit-exactly):
//   matrix  {"rows": R, "cols": C, "data": [[re, im], ...]}   row-major,
//           plus an optional "basis" tag for process matrices
//   record  {"scheme": [labels], "values": [...], "noise_std": s, "seed": k}
//   kraus   {"operators": [matrix...], "weights": [...],
//            "completeness_residual": r}
//   model   {"t1": [a, b], "t2": [a, b], "j_hz": v, "p": v}
//   bundle  {"gate": g, "unitary": matrix, "noise_std": s, "seed": k,
//            "records": [record...]}

std::string matrix_to_json(const ComplexMatrix& m,
                           const std::optional<std::string>& basis_tag = std::nullopt);
ComplexMatrix matrix_from_json(const std::string& text,
                               std::optional<std::string>* basis_tag = nullptr);

std::string record_to_json(const qst::MeasurementRecord& record);
qst::MeasurementRecord record_from_json(const std::string& text);

std::string kraus_to_json(const qpt::KrausSet& kraus);
qpt::KrausSet kraus_from_json(const std::string& text);

std::string model_to_json(const lindblad::NmrNoiseParams& params);
lindblad::NmrNoiseParams model_from_json(const std::string& text);

struct ProcessBundle {
  std::string gate; // name or "file:<path>" spelling it came from
  ComplexMatrix unitary;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::vector<qst::MeasurementRecord> records;
};

std::string bundle_to_json(const ProcessBundle& bundle);
ProcessBundle bundle_from_json(const std::string& text);

/// Whole-file helpers. Reading a missing file raises validation_error;
/// malformed JSON raises validation_error carrying the parser's position.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// One double with 17 significant digits (shared by every writer).
std::string format_double(double v);

} // namespace tomoct::io
