#include "tomoct/lindblad.hpp"

#include "tomoct/metrics.hpp"

#include <cmath>

namespace tomoct::lindblad {

namespace {

constexpr double kTraceDriftTol = 1e-9;
constexpr double kClipBand = 1e-7;

const std::vector<DensityMatrix>& standard_inputs() {
  static const std::vector<DensityMatrix> inputs = qpt::qpt_input_states();
  return inputs;
}

const ComplexMatrix& standard_beta() {
  static const ComplexMatrix beta = qpt::build_beta(pauli_basis(2), standard_inputs());
  return beta;
}

void check_model(const LindbladModel& model) {
  const Eigen::Index dim = model.hamiltonian.rows();
  if (dim < 2 || model.hamiltonian.cols() != dim)
    throw validation_error("LindbladModel: Hamiltonian must be square");
  if (!is_hermitian(model.hamiltonian, 1e-12))
    throw validation_error("LindbladModel: Hamiltonian is not Hermitian");
  for (const ComplexMatrix& op : model.lindblad_ops)
    if (op.rows() != dim || op.cols() != dim)
      throw validation_error("LindbladModel: jump operator dimension mismatch");
}

// Degree-4 Taylor polynomial of exp(h * gen): exactly the one-step RK4 map
// for a linear, time-independent right-hand side.
ComplexMatrix rk4_step_matrix(const ComplexMatrix& gen, double h) {
  const Eigen::Index n = gen.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix hg = h * gen;
  return id + hg * (id + 0.5 * hg * (id + (1.0 / 3.0) * hg * (id + 0.25 * hg)));
}

} // namespace

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
  check_model(model);
  const Eigen::Index dim = model.hamiltonian.rows();
  if (rho.rows() != dim || rho.cols() != dim)
    throw validation_error("lindblad_rhs: state dimension mismatch");
  const Complex i(0.0, 1.0);
  ComplexMatrix out = -i * (model.hamiltonian * rho - rho * model.hamiltonian);
  for (const ComplexMatrix& op : model.lindblad_ops) {
    const ComplexMatrix op_dag = op.adjoint();
    const ComplexMatrix op_dag_op = op_dag * op;
    out += op * rho * op_dag - 0.5 * (op_dag_op * rho + rho * op_dag_op);
  }
  return out;
}

ComplexMatrix lindblad_superoperator(const LindbladModel& model) {
  check_model(model);
  const Eigen::Index dim = model.hamiltonian.rows();
  ComplexMatrix superop(dim * dim, dim * dim);
  ComplexMatrix unit = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) {
      unit(a, b) = 1.0;
      superop.col(a * dim + b) = vectorize(lindblad_rhs(model, unit));
      unit(a, b) = 0.0;
    }
  return superop;
}

DensityMatrix evolve(const DensityMatrix& rho0, const LindbladModel& model, double t, double dt) {
  if (t < 0.0) throw validation_error("evolve: t must be >= 0");
  if (dt <= 0.0) throw validation_error("evolve: dt must be > 0");
  check_model(model);
  if (rho0.dim() != model.hamiltonian.rows())
    throw validation_error("evolve: state dimension mismatch");
  if (t == 0.0) return rho0;

  const ComplexMatrix gen = lindblad_superoperator(model);
  const long long steps = static_cast<long long>(std::floor(t / dt + 1e-9));
  const double remainder = t - double(steps) * dt;

  ComplexVector state = vectorize(rho0.matrix);
  if (steps > 0) {
    const ComplexMatrix step = rk4_step_matrix(gen, dt);
    for (long long k = 0; k < steps; ++k) state = step * state;
  }
  if (remainder > 1e-12 * dt) state = rk4_step_matrix(gen, remainder) * state;

  const Eigen::Index dim = rho0.dim();
  ComplexMatrix rho = unvectorize(state, dim, dim);
  const double trace_drift = std::abs(rho.trace().real() - 1.0);
  if (trace_drift > kTraceDriftTol)
    throw numeric_error("evolve: trace drift " + std::to_string(trace_drift) +
                        "; decrease dt");
  rho = 0.5 * (rho + rho.adjoint().eval());

  const EigResult eig = eig_hermitian(rho);
  const double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (min_eig < -kClipBand)
    throw numeric_error("evolve: min eigenvalue " + std::to_string(min_eig) +
                        " outside the clip band; step too coarse");
  if (min_eig < 0.0) rho = solver::project_psd(rho, 0.0);
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

ComplexMatrix coherent_unitary(const LindbladModel& model, double t) {
  check_model(model);
  const EigResult eig = eig_hermitian(model.hamiltonian);
  const Eigen::Index dim = model.hamiltonian.rows();
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  const Complex i(0.0, 1.0);
  for (Eigen::Index k = 0; k < dim; ++k)
    u += std::exp(-i * eig.eigenvalues(k) * t) *
         (eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint());
  return u;
}

LindbladModel nmr_noise_model(const NmrNoiseParams& params) {
  if (params.t1_a <= 0 || params.t1_b <= 0 || params.t2_a <= 0 || params.t2_b <= 0)
    throw validation_error("nmr_noise_model: relaxation times must be positive");
  const double p = params.equilibrium_excited_population;
  if (p < 0.0 || p > 0.5)
    throw validation_error("nmr_noise_model: equilibrium population must be in [0, 0.5]");

  LindbladModel model;
  const ComplexMatrix zz = kron(pauli(3), pauli(3));
  model.hamiltonian = (2.0 * M_PI * params.j_coupling_hz / 4.0) * zz;

  ComplexMatrix sigma_minus(2, 2), sigma_plus(2, 2);
  sigma_minus << 0, 1, 0, 0; // |0><1|
  sigma_plus << 0, 0, 1, 0;  // |1><0|
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);

  const double t1[2] = {params.t1_a, params.t1_b};
  const double t2[2] = {params.t2_a, params.t2_b};
  for (int q = 0; q < 2; ++q) {
    const double gamma_phi = 1.0 / t2[q] - 0.5 / t1[q];
    if (gamma_phi < -1e-12)
      throw validation_error("nmr_noise_model: qubit " + std::string(q == 0 ? "a" : "b") +
                             " has 1/T2 - 1/(2 T1) < 0");
    auto embed = [&](const ComplexMatrix& op) {
      return q == 0 ? kron(op, id2) : kron(id2, op);
    };
    const double down_rate = (1.0 - p) / t1[q];
    const double up_rate = p / t1[q];
    if (down_rate > 0.0) model.lindblad_ops.push_back(std::sqrt(down_rate) * embed(sigma_minus));
    if (up_rate > 0.0) model.lindblad_ops.push_back(std::sqrt(up_rate) * embed(sigma_plus));
    if (gamma_phi > 1e-12)
      model.lindblad_ops.push_back(std::sqrt(0.5 * gamma_phi) * embed(pauli(3)));
  }
  return model;
}

qpt::ProcessMatrix markovian_chi(const LindbladModel& model, double t, double dt,
                                 const solver::SolverConfig& config) {
  return markovian_chi_sweep(model, {t}, dt, config).front();
}

std::vector<qpt::ProcessMatrix> markovian_chi_sweep(const LindbladModel& model,
                                                    const std::vector<double>& times, double dt,
                                                    const solver::SolverConfig& config) {
  if (times.empty()) throw validation_error("markovian_chi_sweep: no time points");
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    if (times[k + 1] <= times[k])
      throw validation_error("markovian_chi_sweep: times must be strictly ascending");
  if (times.front() < 0.0) throw validation_error("markovian_chi_sweep: negative time");
  if (model.hamiltonian.rows() != 4)
    throw validation_error("markovian_chi_sweep: two-qubit model required");

  std::vector<DensityMatrix> states = standard_inputs();
  std::vector<qpt::ProcessMatrix> snapshots;
  snapshots.reserve(times.size());
  double t_prev = 0.0;
  for (double t : times) {
    const double delta = t - t_prev;
    if (delta > 0.0)
      for (DensityMatrix& rho : states) rho = evolve(rho, model, delta, dt);
    t_prev = t;
    const ComplexVector lambda = qpt::stack_lambda(states);
    snapshots.push_back(qpt::reconstruct_cco_chi(standard_beta(), lambda, config));
  }
  return snapshots;
}

std::vector<BellDecayRow> bell_decay_study(const LindbladModel& model,
                                           const std::vector<double>& times, double dt,
                                           const solver::SolverConfig& config) {
  const std::vector<qpt::ProcessMatrix> snapshots = markovian_chi_sweep(model, times, dt, config);
  const OperatorBasis basis = pauli_basis(2);

  std::vector<BellDecayRow> rows;
  rows.reserve(4 * times.size());
  for (int b = 1; b <= 4; ++b) {
    const std::string name = "B" + std::to_string(b);
    const DensityMatrix initial = make_state(name);
    DensityMatrix evolved = initial;
    double t_prev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double delta = times[k] - t_prev;
      if (delta > 0.0) evolved = evolve(evolved, model, delta, dt);
      t_prev = times[k];
      const DensityMatrix predicted = qpt::apply_channel(snapshots[k], basis, initial);
      BellDecayRow row;
      row.t = times[k];
      row.state = name;
      row.fidelity_evolved_vs_predicted = metrics::state_fidelity(evolved, predicted);
      row.fidelity_vs_initial = metrics::state_fidelity(evolved, initial);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

} // namespace tomoct::lindblad
