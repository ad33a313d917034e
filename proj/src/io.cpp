#include "tomoct/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tomoct::io {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("JSON parse error: ") + e.what());
  }
}

double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw validation_error(std::string("expected number for ") + what);
  return j.get<double>();
}

} // namespace

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string matrix_to_json(const ComplexMatrix& m, const std::optional<std::string>& basis_tag) {
  std::ostringstream out;
  out << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols();
  if (basis_tag) out << ", \"basis\": \"" << *basis_tag << "\"";
  out << ", \"data\": [";
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r != 0 || c != 0) out << ", ";
      out << "[" << format_double(m(r, c).real()) << ", " << format_double(m(r, c).imag()) << "]";
    }
  out << "]}\n";
  return out.str();
}

ComplexMatrix matrix_from_json(const std::string& text, std::optional<std::string>* basis_tag) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw validation_error("matrix JSON must contain rows, cols, data");
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  if (rows < 1 || cols < 1) throw validation_error("matrix JSON: rows and cols must be >= 1");
  const json& data = j.at("data");
  if (!data.is_array() || Eigen::Index(data.size()) != rows * cols)
    throw validation_error("matrix JSON: data must hold rows*cols [re, im] pairs");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const json& cell = data[k];
    if (!cell.is_array() || cell.size() != 2)
      throw validation_error("matrix JSON: entry " + std::to_string(k) + " is not [re, im]");
    m(k / cols, k % cols) = Complex(as_double(cell[0], "re"), as_double(cell[1], "im"));
  }
  if (basis_tag) {
    if (j.contains("basis"))
      *basis_tag = j.at("basis").get<std::string>();
    else
      basis_tag->reset();
  }
  return m;
}

std::string record_to_json(const qst::MeasurementRecord& record) {
  std::ostringstream out;
  out << "{\"scheme\": [";
  for (std::size_t k = 0; k < record.scheme.labels.size(); ++k) {
    if (k) out << ", ";
    out << "\"" << record.scheme.labels[k] << "\"";
  }
  out << "], \"values\": [";
  for (Eigen::Index k = 0; k < record.values.size(); ++k) {
    if (k) out << ", ";
    out << format_double(record.values(k));
  }
  out << "], \"noise_std\": " << format_double(record.noise_std) << ", \"seed\": " << record.seed
      << "}\n";
  return out.str();
}

qst::MeasurementRecord record_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("scheme") || !j.contains("values") ||
      !j.contains("noise_std") || !j.contains("seed"))
    throw validation_error("record JSON must contain scheme, values, noise_std, seed");
  std::vector<std::string> labels;
  for (const json& l : j.at("scheme")) labels.push_back(l.get<std::string>());
  qst::MeasurementRecord record;
  record.scheme = qst::scheme_from_labels(labels);
  const json& values = j.at("values");
  if (!values.is_array() || values.size() != labels.size())
    throw validation_error("record JSON: values length must match scheme");
  record.values.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    record.values(Eigen::Index(k)) = as_double(values[k], "values");
  record.noise_std = as_double(j.at("noise_std"), "noise_std");
  record.seed = j.at("seed").get<std::uint64_t>();
  return record;
}

std::string kraus_to_json(const qpt::KrausSet& kraus) {
  std::ostringstream out;
  out << "{\"operators\": [";
  for (std::size_t k = 0; k < kraus.operators.size(); ++k) {
    if (k) out << ", ";
    std::string m = matrix_to_json(kraus.operators[k]);
    if (!m.empty() && m.back() == '\n') m.pop_back();
    out << m;
  }
  out << "], \"weights\": [";
  for (std::size_t k = 0; k < kraus.weights.size(); ++k) {
    if (k) out << ", ";
    out << format_double(kraus.weights[k]);
  }
  out << "], \"completeness_residual\": " << format_double(kraus.completeness_residual) << "}\n";
  return out.str();
}

qpt::KrausSet kraus_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("operators"))
    throw validation_error("kraus JSON must contain operators");
  qpt::KrausSet kraus;
  for (const json& op : j.at("operators"))
    kraus.operators.push_back(matrix_from_json(op.dump()));
  if (kraus.operators.empty()) throw validation_error("kraus JSON: empty operator list");
  if (j.contains("weights")) {
    for (const json& w : j.at("weights")) kraus.weights.push_back(as_double(w, "weights"));
    if (kraus.weights.size() != kraus.operators.size())
      throw validation_error("kraus JSON: weights length must match operators");
  }
  const Eigen::Index dim = kraus.operators[0].rows();
  ComplexMatrix completeness = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& op : kraus.operators) {
    if (op.rows() != dim || op.cols() != dim)
      throw validation_error("kraus JSON: operators must share one square dimension");
    completeness += op.adjoint() * op;
  }
  kraus.completeness_residual =
      (completeness - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  return kraus;
}

std::string model_to_json(const lindblad::NmrNoiseParams& params) {
  std::ostringstream out;
  out << "{\"t1\": [" << format_double(params.t1_a) << ", " << format_double(params.t1_b)
      << "], \"t2\": [" << format_double(params.t2_a) << ", " << format_double(params.t2_b)
      << "], \"j_hz\": " << format_double(params.j_coupling_hz)
      << ", \"p\": " << format_double(params.equilibrium_excited_population) << "}\n";
  return out.str();
}

lindblad::NmrNoiseParams model_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("t1") || !j.contains("t2") || !j.contains("j_hz") ||
      !j.contains("p"))
    throw validation_error("model JSON must contain t1, t2, j_hz, p");
  const json& t1 = j.at("t1");
  const json& t2 = j.at("t2");
  if (!t1.is_array() || t1.size() != 2 || !t2.is_array() || t2.size() != 2)
    throw validation_error("model JSON: t1 and t2 must be [a, b]");
  lindblad::NmrNoiseParams params;
  params.t1_a = as_double(t1[0], "t1");
  params.t1_b = as_double(t1[1], "t1");
  params.t2_a = as_double(t2[0], "t2");
  params.t2_b = as_double(t2[1], "t2");
  params.j_coupling_hz = as_double(j.at("j_hz"), "j_hz");
  params.equilibrium_excited_population = as_double(j.at("p"), "p");
  return params;
}

std::string bundle_to_json(const ProcessBundle& bundle) {
  std::ostringstream out;
  std::string unitary = matrix_to_json(bundle.unitary);
  if (!unitary.empty() && unitary.back() == '\n') unitary.pop_back();
  out << "{\"gate\": \"" << bundle.gate << "\", \"unitary\": " << unitary
      << ", \"noise_std\": " << format_double(bundle.noise_std) << ", \"seed\": " << bundle.seed
      << ", \"records\": [";
  for (std::size_t k = 0; k < bundle.records.size(); ++k) {
    if (k) out << ", ";
    std::string r = record_to_json(bundle.records[k]);
    if (!r.empty() && r.back() == '\n') r.pop_back();
    out << r;
  }
  out << "]}\n";
  return out.str();
}

ProcessBundle bundle_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("gate") || !j.contains("unitary") || !j.contains("records"))
    throw validation_error("bundle JSON must contain gate, unitary, records");
  ProcessBundle bundle;
  bundle.gate = j.at("gate").get<std::string>();
  bundle.unitary = matrix_from_json(j.at("unitary").dump());
  bundle.noise_std = j.contains("noise_std") ? as_double(j.at("noise_std"), "noise_std") : 0.0;
  bundle.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
  for (const json& r : j.at("records")) bundle.records.push_back(record_from_json(r.dump()));
  return bundle;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write file: " + path);
  out << content;
  if (!out.good()) throw validation_error("write failed: " + path);
}

} // namespace tomoct::io
