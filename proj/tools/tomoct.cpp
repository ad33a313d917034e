// tomoct: quantum state / process tomography toolkit.
//
// Subcommands:
//   state simulate|reconstruct     two-qubit state tomography
//   process simulate|reconstruct|kraus   two-qubit process tomography
//   lindblad evolve|chi|bell-study  master-equation noise studies
//   reproduce                      embedded reference-data checklist
//
// Exit codes: 0 success, 2 validation/parse failure, 3 numeric or solver
// failure; reproduce exits 1 when a check fails.

#include <CLI11.hpp>

#include "tomoct/fixtures.hpp"
#include "tomoct/io.hpp"
#include "tomoct/lindblad.hpp"
#include "tomoct/metrics.hpp"
#include "tomoct/qpt.hpp"
#include "tomoct/qst.hpp"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace tomoct;

const OperatorBasis& basis2() {
  static const OperatorBasis basis = pauli_basis(2);
  return basis;
}

const ComplexMatrix& beta2() {
  static const ComplexMatrix beta = qpt::build_beta(basis2(), qpt::qpt_input_states());
  return beta;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  return io::read_file(path);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    io::write_file(path, content);
}

std::string join_values(const RealVector& values) {
  std::ostringstream out;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (k) out << ' ';
    out << io::format_double(values(k));
  }
  return out.str();
}

void print_spectrum_rows(const ComplexMatrix& m, const std::string& method) {
  const metrics::EigenvalueReport report = metrics::eigenvalue_report(m);
  std::cout << "eigenvalues," << method << "," << join_values(report.eigenvalues) << "\n";
  std::cout << "min_eigenvalue," << method << "," << io::format_double(report.min_eigenvalue)
            << "," << (report.min_eigenvalue < -1e-9 ? "INVALID" : "VALID") << "\n";
}

solver::SolverConfig config_with_tol(double tol) {
  solver::SolverConfig config;
  if (tol > 0.0) {
    config.tol_primal = tol;
    config.tol_dual = tol;
  }
  return config;
}

std::vector<double> parse_times(const std::string& list) {
  std::vector<double> times;
  std::stringstream stream(list);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    try {
      times.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw validation_error("bad time value \"" + token + "\"");
    }
  }
  if (times.empty()) throw validation_error("no time points given");
  return times;
}

ComplexMatrix resolve_gate(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) {
    const ComplexMatrix u = io::matrix_from_json(io::read_file(spec.substr(5)));
    if (u.rows() != 4 || u.cols() != 4)
      throw validation_error("gate file must hold a 4x4 matrix");
    return u;
  }
  return qpt::named_gate(spec);
}

int thread_budget() {
  if (const char* env = std::getenv("TOMOCT_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

/// Runs fn(0..count-1) on a small worker pool; results must be written into
/// per-index slots so the merge order is deterministic.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------

int run_state_simulate(const std::string& state, double noise_std, std::uint64_t seed,
                       const std::string& out) {
  const DensityMatrix rho = make_state(state);
  const qst::MeasurementRecord record =
      qst::simulate_measurements(rho, qst::default_two_qubit_scheme(), noise_std, seed);
  emit(out, io::record_to_json(record));
  return 0;
}

int run_state_reconstruct(const std::string& method, const std::string& in,
                          const std::string& out, const std::string& truth, double tol) {
  const qst::MeasurementRecord record = io::record_from_json(read_input(in));
  const RealMatrix design = qst::build_design_matrix(record.scheme, basis2());

  ComplexMatrix estimate;
  if (method == "standard") {
    estimate = qst::reconstruct_standard(design, record, basis2()).matrix;
  } else if (method == "cco") {
    estimate = qst::reconstruct_cco(design, record, basis2(), config_with_tol(tol)).matrix;
  } else {
    throw validation_error("method must be standard or cco");
  }
  print_spectrum_rows(estimate, method);
  if (!truth.empty())
    std::cout << "state_fidelity," << method << ","
              << io::format_double(metrics::state_fidelity(estimate, make_state(truth).matrix))
              << "\n";
  if (!out.empty()) io::write_file(out, io::matrix_to_json(estimate));
  return 0;
}

io::ProcessBundle simulate_bundle(const std::string& gate, double noise_std,
                                  std::uint64_t seed) {
  io::ProcessBundle bundle;
  bundle.gate = gate;
  bundle.unitary = resolve_gate(gate);
  bundle.noise_std = noise_std;
  bundle.seed = seed;
  std::vector<DensityMatrix> outputs;
  for (const DensityMatrix& rho : qpt::qpt_input_states()) {
    ComplexMatrix out = bundle.unitary * rho.matrix * bundle.unitary.adjoint();
    out = 0.5 * (out + out.adjoint().eval());
    outputs.emplace_back(out / out.trace().real());
  }
  bundle.records = qpt::simulate_output_records(outputs, noise_std, seed);
  return bundle;
}

int run_process_simulate(const std::string& gate, double noise_std, std::uint64_t seed,
                         const std::string& out) {
  emit(out, io::bundle_to_json(simulate_bundle(gate, noise_std, seed)));
  return 0;
}

int run_process_reconstruct(const std::string& gate, double noise_std, std::uint64_t seed,
                            const std::string& in, const std::string& method,
                            const std::string& out, double tol) {
  const io::ProcessBundle bundle =
      in.empty() ? simulate_bundle(gate, noise_std, seed) : io::bundle_from_json(read_input(in));

  const solver::SolverConfig config = config_with_tol(tol);
  const qpt::ProcessTomographyData data =
      qpt::assemble_tomography_data(qpt::qpt_input_states(), bundle.records, config);

  qpt::ProcessMatrix chi;
  if (method == "standard") {
    chi = qpt::reconstruct_standard_chi(beta2(), data.lambda).chi;
  } else if (method == "cco") {
    chi = qpt::reconstruct_cco_chi(beta2(), data.lambda, config);
  } else {
    throw validation_error("method must be standard or cco");
  }

  print_spectrum_rows(chi.chi, method);
  const qpt::ProcessMatrix ideal = qpt::ideal_chi(bundle.unitary, basis2());
  std::cout << "process_fidelity," << method << ","
            << io::format_double(metrics::process_fidelity(chi, ideal)) << "\n";
  std::cout << "avg_state_deviation," << method << ","
            << io::format_double(metrics::average_state_deviation(chi, bundle.unitary)) << "\n";
  if (!out.empty())
    io::write_file(out, io::matrix_to_json(chi.chi, std::optional<std::string>(chi.basis_tag)));
  return 0;
}

int run_process_kraus(const std::string& in, const std::string& out, double threshold) {
  std::optional<std::string> tag;
  const ComplexMatrix chi_matrix = io::matrix_from_json(read_input(in), &tag);
  const qpt::ProcessMatrix chi(chi_matrix, tag.value_or(qpt::kTwoQubitBasisTag));
  const qpt::KrausSet kraus = qpt::extract_kraus(chi, basis2(), threshold);
  std::cout << "kraus_count,," << kraus.operators.size() << "\n";
  RealVector weights(Eigen::Index(kraus.weights.size()));
  for (std::size_t k = 0; k < kraus.weights.size(); ++k)
    weights(Eigen::Index(k)) = kraus.weights[k];
  std::cout << "kraus_weights,," << join_values(weights) << "\n";
  std::cout << "completeness_residual,," << io::format_double(kraus.completeness_residual)
            << "\n";
  emit(out, io::kraus_to_json(kraus));
  return 0;
}

int run_lindblad_evolve(const std::string& model_path, const std::string& state, double t,
                        double dt, const std::string& out) {
  const lindblad::LindbladModel model =
      lindblad::nmr_noise_model(io::model_from_json(io::read_file(model_path)));
  const DensityMatrix evolved = lindblad::evolve(make_state(state), model, t, dt);
  print_spectrum_rows(evolved.matrix, "evolve");
  emit(out, io::matrix_to_json(evolved.matrix));
  return 0;
}

int run_lindblad_chi(const std::string& model_path, const std::string& times_list, double dt,
                     const std::string& out_prefix, double tol) {
  const lindblad::LindbladModel model =
      lindblad::nmr_noise_model(io::model_from_json(io::read_file(model_path)));
  const std::vector<double> times = parse_times(times_list);
  const std::vector<qpt::ProcessMatrix> snapshots =
      lindblad::markovian_chi_sweep(model, times, dt, config_with_tol(tol));

  const qpt::ProcessMatrix identity = qpt::ideal_chi(qpt::named_gate("identity"), basis2());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const qpt::ProcessMatrix coherent =
        qpt::ideal_chi(lindblad::coherent_unitary(model, times[k]), basis2());
    std::cout << "fidelity_vs_coherent," << io::format_double(times[k]) << ","
              << io::format_double(metrics::process_fidelity(snapshots[k], coherent)) << "\n";
    std::cout << "fidelity_vs_identity," << io::format_double(times[k]) << ","
              << io::format_double(metrics::process_fidelity(snapshots[k], identity)) << "\n";
    if (!out_prefix.empty()) {
      std::ostringstream name;
      name << out_prefix << "chi_t" << times[k] << ".json";
      io::write_file(name.str(), io::matrix_to_json(snapshots[k].chi,
                                                    std::optional<std::string>(
                                                        snapshots[k].basis_tag)));
    }
  }
  return 0;
}

int run_lindblad_bell_study(const std::string& model_path, const std::string& times_list,
                            double dt, const std::string& out) {
  const lindblad::LindbladModel model =
      lindblad::nmr_noise_model(io::model_from_json(io::read_file(model_path)));
  const std::vector<lindblad::BellDecayRow> rows =
      lindblad::bell_decay_study(model, parse_times(times_list), dt);
  std::ostringstream csv;
  csv << "t,state,fidelity_evolved_vs_predicted,fidelity_vs_initial\n";
  for (const lindblad::BellDecayRow& row : rows)
    csv << io::format_double(row.t) << "," << row.state << ","
        << io::format_double(row.fidelity_evolved_vs_predicted) << ","
        << io::format_double(row.fidelity_vs_initial) << "\n";
  emit(out, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce: the embedded reference checklist plus simulated-noise ensembles

struct CheckCounter {
  int failures = 0;
  void report(bool pass, const std::string& text) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << text << "\n";
    if (!pass) ++failures;
  }
};

int run_reproduce() {
  CheckCounter checks;

  for (const std::string& gate : fixtures::reference_gates()) {
    const qpt::ProcessMatrix chi = fixtures::reference_chi(gate);
    const RealVector expected = fixtures::reference_chi_eigenvalues(gate);
    const metrics::EigenvalueReport spectrum = metrics::eigenvalue_report(chi.chi);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < expected.size(); ++k)
      worst = std::max(worst, std::abs(spectrum.eigenvalues(k) - expected(k)));
    for (Eigen::Index k = expected.size(); k < spectrum.eigenvalues.size(); ++k)
      worst = std::max(worst, std::abs(spectrum.eigenvalues(k)));
    std::ostringstream line;
    line << gate << " chi eigenvalues vs reference (" << join_values(expected)
         << "): max gap " << io::format_double(worst) << " (tol 5e-3)";
    checks.report(worst <= 5e-3, line.str());

    const double fidelity =
        metrics::process_fidelity(chi, qpt::ideal_chi(resolve_gate(gate), basis2()));
    const double expected_fidelity = fixtures::reference_process_fidelity(gate);
    std::ostringstream fline;
    fline << gate << " process fidelity " << io::format_double(fidelity) << " vs reference "
          << io::format_double(expected_fidelity) << " (tol 1e-2)";
    checks.report(std::abs(fidelity - expected_fidelity) <= 1e-2, fline.str());

    ComplexMatrix completeness = ComplexMatrix::Zero(4, 4);
    for (const ComplexMatrix& op : fixtures::reference_kraus(gate))
      completeness += op.adjoint() * op;
    const double residual =
        (completeness - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff();
    std::ostringstream cline;
    cline << gate << " Kraus completeness residual " << io::format_double(residual)
          << " (tol 2e-2)";
    checks.report(residual <= 2e-2, cline.str());
  }

  // state-tomography ensemble: constrained estimates stay valid and beat the
  // linear inversion on fidelity for noisy near-pure states
  {
    const qst::MeasurementScheme scheme = qst::default_two_qubit_scheme();
    const RealMatrix design = qst::build_design_matrix(scheme, basis2());
    const std::vector<std::string> states = {"00", "B1", "B2", "0+", "+-", "1-"};
    const int runs = 48;
    std::vector<double> fidelity_standard(runs), fidelity_cco(runs), min_eigs(runs);
    std::vector<int> standard_invalid(runs, 0);
    parallel_for(runs, [&](int k) {
      const DensityMatrix truth = make_state(states[k % states.size()]);
      const qst::MeasurementRecord record =
          qst::simulate_measurements(truth, scheme, 0.05, 9000 + k);
      const HermitianEstimate standard = qst::reconstruct_standard(design, record, basis2());
      const DensityMatrix constrained = qst::reconstruct_cco(design, record, basis2());
      fidelity_standard[k] = metrics::state_fidelity(standard.matrix, truth.matrix);
      fidelity_cco[k] = metrics::state_fidelity(constrained, truth);
      min_eigs[k] = metrics::eigenvalue_report(constrained.matrix).min_eigenvalue;
      standard_invalid[k] = standard.min_eigenvalue < 0.0 ? 1 : 0;
    });
    double mean_standard = 0.0, mean_cco = 0.0, worst_eig = 0.0;
    int invalid = 0;
    for (int k = 0; k < runs; ++k) {
      mean_standard += fidelity_standard[k] / runs;
      mean_cco += fidelity_cco[k] / runs;
      worst_eig = std::min(worst_eig, min_eigs[k]);
      invalid += standard_invalid[k];
    }
    std::ostringstream line;
    line << "state ensemble (" << runs << " noisy runs): constrained mean fidelity "
         << io::format_double(mean_cco) << " >= standard " << io::format_double(mean_standard)
         << ", all outputs PSD (worst eigenvalue " << io::format_double(worst_eig)
         << "), standard indefinite in " << invalid << " runs";
    checks.report(mean_cco >= mean_standard && worst_eig >= -1e-9 && invalid > 0, line.str());
  }

  // process-tomography ensemble: deviation ordering and physical outputs
  {
    const std::vector<std::string> gates = {"identity", "cnot", "crx_pi"};
    const int runs = 6;
    std::vector<double> dev_standard(runs), dev_cco(runs), fid_standard(runs), fid_cco(runs),
        min_eigs(runs), cptp(runs);
    parallel_for(runs, [&](int k) {
      const std::string gate = gates[k % gates.size()];
      const ComplexMatrix u = resolve_gate(gate);
      const qpt::ProcessTomographyData data = qpt::simulate_gate_qpt(u, 0.05, 700 + k);
      const qpt::StandardChiResult standard =
          qpt::reconstruct_standard_chi(beta2(), data.lambda);
      const qpt::ProcessMatrix constrained = qpt::reconstruct_cco_chi(beta2(), data.lambda);
      const qpt::ProcessMatrix ideal = qpt::ideal_chi(u, basis2());
      dev_standard[k] = metrics::average_state_deviation(standard.chi, u);
      dev_cco[k] = metrics::average_state_deviation(constrained, u);
      fid_standard[k] = metrics::process_fidelity(standard.chi, ideal);
      fid_cco[k] = metrics::process_fidelity(constrained, ideal);
      min_eigs[k] = metrics::eigenvalue_report(constrained.chi).min_eigenvalue;
      cptp[k] = qpt::cptp_residual(constrained, basis2());
    });
    double mean_dev_standard = 0.0, mean_dev_cco = 0.0, mean_fid_standard = 0.0,
           mean_fid_cco = 0.0, worst_eig = 0.0, worst_cptp = 0.0;
    for (int k = 0; k < runs; ++k) {
      mean_dev_standard += dev_standard[k] / runs;
      mean_dev_cco += dev_cco[k] / runs;
      mean_fid_standard += fid_standard[k] / runs;
      mean_fid_cco += fid_cco[k] / runs;
      worst_eig = std::min(worst_eig, min_eigs[k]);
      worst_cptp = std::max(worst_cptp, cptp[k]);
    }
    std::ostringstream line;
    line << "process ensemble (" << runs << " noisy runs): constrained deviation "
         << io::format_double(mean_dev_cco) << " < standard "
         << io::format_double(mean_dev_standard) << ", constrained fidelity "
         << io::format_double(mean_fid_cco) << " >= standard "
         << io::format_double(mean_fid_standard) << ", worst eigenvalue "
         << io::format_double(worst_eig) << ", worst trace-preservation residual "
         << io::format_double(worst_cptp);
    checks.report(mean_dev_cco < mean_dev_standard && mean_fid_cco >= mean_fid_standard &&
                      worst_eig >= -1e-9 && worst_cptp <= 1e-7,
                  line.str());
  }

  // noise-dynamics smoke: snapshot at t = 0 is the identity process and the
  // two Bell-decay prediction paths agree on a fast-decay model
  {
    lindblad::NmrNoiseParams params;
    params.t1_a = 0.5;
    params.t1_b = 0.8;
    params.t2_a = 0.3;
    params.t2_b = 0.1;
    params.j_coupling_hz = 100.0;
    const lindblad::LindbladModel model = lindblad::nmr_noise_model(params);
    const double identity_fidelity = metrics::process_fidelity(
        lindblad::markovian_chi(model, 0.0, 1e-4),
        qpt::ideal_chi(qpt::named_gate("identity"), basis2()));
    std::ostringstream iline;
    iline << "noise model snapshot at t=0 is the identity process (fidelity "
          << io::format_double(identity_fidelity) << ")";
    checks.report(identity_fidelity >= 1.0 - 1e-6, iline.str());

    double worst = 1.0;
    for (const lindblad::BellDecayRow& row :
         lindblad::bell_decay_study(model, {0.02, 0.1}, 1e-4))
      worst = std::min(worst, row.fidelity_evolved_vs_predicted);
    std::ostringstream bline;
    bline << "Bell decay: integrated and chi-predicted states agree (worst fidelity "
          << io::format_double(worst) << ", tol 1e-4)";
    checks.report(worst >= 1.0 - 1e-4, bline.str());
  }

  std::cout << (checks.failures == 0 ? "reproduce: all checks passed"
                                     : "reproduce: " + std::to_string(checks.failures) +
                                           " check(s) failed")
            << "\n";
  return checks.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum state / process tomography via constrained convex optimization"};
  app.require_subcommand(1);

  std::string state, truth, method = "cco", in_path, out_path, gate = "identity";
  std::string model_path, times_list;
  double noise_std = 0.0, tol = 0.0, threshold = 1e-6;
  double t_value = 0.0, dt = lindblad::kDefaultDt;
  std::uint64_t seed = 0;

  CLI::App* state_cmd = app.add_subcommand("state", "two-qubit state tomography");
  state_cmd->require_subcommand(1);
  CLI::App* state_sim = state_cmd->add_subcommand("simulate", "emit a measurement record");
  state_sim->add_option("--state", state, "state name or ket expression")->required();
  state_sim->add_option("--noise-std", noise_std, "Gaussian noise level");
  state_sim->add_option("--seed", seed, "random seed");
  state_sim->add_option("--out", out_path, "record path (default stdout)");
  CLI::App* state_rec = state_cmd->add_subcommand("reconstruct", "reconstruct from a record");
  state_rec->add_option("--method", method, "standard|cco");
  state_rec->add_option("--in", in_path, "record path (default stdin)");
  state_rec->add_option("--out", out_path, "write the estimate as matrix JSON");
  state_rec->add_option("--truth", truth, "reference state for the fidelity row");
  state_rec->add_option("--tol", tol, "solver stop tolerance");

  CLI::App* process_cmd = app.add_subcommand("process", "two-qubit process tomography");
  process_cmd->require_subcommand(1);
  CLI::App* process_sim = process_cmd->add_subcommand("simulate", "emit a 16-record bundle");
  process_sim->add_option("--gate", gate, "identity|cnot|crx_pi|file:<unitary.json>");
  process_sim->add_option("--noise-std", noise_std, "Gaussian noise level");
  process_sim->add_option("--seed", seed, "random seed");
  process_sim->add_option("--out", out_path, "bundle path (default stdout)");
  CLI::App* process_rec = process_cmd->add_subcommand("reconstruct", "reconstruct chi");
  process_rec->add_option("--gate", gate, "gate to simulate when --in is absent");
  process_rec->add_option("--noise-std", noise_std, "noise level for fresh simulation");
  process_rec->add_option("--seed", seed, "seed for fresh simulation");
  process_rec->add_option("--in", in_path, "bundle path (otherwise simulate --gate)");
  process_rec->add_option("--method", method, "standard|cco");
  process_rec->add_option("--out", out_path, "write chi as tagged matrix JSON");
  process_rec->add_option("--tol", tol, "solver stop tolerance");
  CLI::App* process_kraus = process_cmd->add_subcommand("kraus", "chi file -> Kraus file");
  process_kraus->add_option("--in", in_path, "chi path (default stdin)");
  process_kraus->add_option("--out", out_path, "Kraus set path (default stdout)");
  process_kraus->add_option("--threshold", threshold, "relative eigenvalue cutoff");

  CLI::App* lindblad_cmd = app.add_subcommand("lindblad", "master-equation noise studies");
  lindblad_cmd->require_subcommand(1);
  CLI::App* lb_evolve = lindblad_cmd->add_subcommand("evolve", "integrate one state");
  lb_evolve->add_option("--model", model_path, "NMR model JSON")->required();
  lb_evolve->add_option("--state", state, "initial state")->required();
  lb_evolve->add_option("--t", t_value, "evolution time (s)")->required();
  lb_evolve->add_option("--dt", dt, "integration step (s)");
  lb_evolve->add_option("--out", out_path, "evolved state path (default stdout)");
  CLI::App* lb_chi = lindblad_cmd->add_subcommand("chi", "snapshot process matrices");
  lb_chi->add_option("--model", model_path, "NMR model JSON")->required();
  lb_chi->add_option("--times", times_list, "comma-separated times (s)");
  lb_chi->add_option("--t", t_value, "single time (s)");
  lb_chi->add_option("--dt", dt, "integration step (s)");
  lb_chi->add_option("--out", out_path, "prefix for chi_t<t>.json files");
  lb_chi->add_option("--tol", tol, "solver stop tolerance");
  CLI::App* lb_bell = lindblad_cmd->add_subcommand("bell-study", "Bell-state decoherence table");
  lb_bell->add_option("--model", model_path, "NMR model JSON")->required();
  lb_bell->add_option("--times", times_list, "comma-separated times (s)")->required();
  lb_bell->add_option("--dt", dt, "integration step (s)");
  lb_bell->add_option("--out", out_path, "CSV path (default stdout)");

  CLI::App* reproduce_cmd =
      app.add_subcommand("reproduce", "run the embedded reference checklist");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (state_sim->parsed()) return run_state_simulate(state, noise_std, seed, out_path);
    if (state_rec->parsed()) return run_state_reconstruct(method, in_path, out_path, truth, tol);
    if (process_sim->parsed()) return run_process_simulate(gate, noise_std, seed, out_path);
    if (process_rec->parsed())
      return run_process_reconstruct(gate, noise_std, seed, in_path, method, out_path, tol);
    if (process_kraus->parsed()) return run_process_kraus(in_path, out_path, threshold);
    if (lb_evolve->parsed())
      return run_lindblad_evolve(model_path, state, t_value, dt, out_path);
    if (lb_chi->parsed()) {
      if (times_list.empty()) times_list = io::format_double(t_value);
      return run_lindblad_chi(model_path, times_list, dt, out_path, tol);
    }
    if (lb_bell->parsed()) return run_lindblad_bell_study(model_path, times_list, dt, out_path);
    if (reproduce_cmd->parsed()) return run_reproduce();
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const solver::convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
