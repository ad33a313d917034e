#include "tomoct/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tomoct {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kEigHermitianTol = 1e-10;
constexpr double kPsdTol = 1e-9;

const Complex kI(0.0, 1.0);

} // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double hermiticity_gap(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_gap(m) <= tol;
}

ComplexVector vectorize(const ComplexMatrix& m) {
  ComplexVector v(m.rows() * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      v(r * m.cols() + c) = m(r, c);
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw validation_error("unvectorize: vector length " + std::to_string(v.size()) +
                           " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = v(r * cols + c);
  return m;
}

// ---------------------------------------------------------------------------

const ComplexMatrix& pauli(int index) {
  static const std::vector<ComplexMatrix> paulis = [] {
    std::vector<ComplexMatrix> p(4, ComplexMatrix(2, 2));
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -kI, kI, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  if (index < 0 || index > 3) throw validation_error("pauli index must be 0..3");
  return paulis[index];
}

OperatorBasis pauli_basis(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 4)
    throw validation_error("pauli_basis: n_qubits must be in 1..4, got " + std::to_string(n_qubits));
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};
  OperatorBasis basis;
  basis.n_qubits = n_qubits;
  const int count = 1 << (2 * n_qubits); // 4^n
  basis.elements.reserve(count);
  basis.labels.reserve(count);
  for (int m = 0; m < count; ++m) {
    // base-4 digits of m, most significant digit = first tensor factor
    ComplexMatrix elem = ComplexMatrix::Identity(1, 1);
    std::string label;
    for (int k = n_qubits - 1; k >= 0; --k) {
      const int digit = (m >> (2 * k)) & 3;
      elem = kron(elem, pauli(digit));
      label.push_back(letters[digit]);
    }
    basis.elements.push_back(std::move(elem));
    basis.labels.push_back(std::move(label));
  }
  return basis;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
    throw validation_error("DensityMatrix: matrix must be square");
  const double gap = hermiticity_gap(matrix);
  if (gap > kHermitianTol)
    throw validation_error("DensityMatrix: hermiticity gap " + std::to_string(gap));
  const double tr = matrix.trace().real();
  if (std::abs(tr - 1.0) > kHermitianTol)
    throw validation_error("DensityMatrix: trace deviates from 1 by " + std::to_string(tr - 1.0));
  const EigResult eig = eig_hermitian(matrix);
  const double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (min_eig < -kPsdTol)
    throw validation_error("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
}

HermitianEstimate::HermitianEstimate(ComplexMatrix m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
    throw validation_error("HermitianEstimate: matrix must be square");
  const double gap = hermiticity_gap(matrix);
  if (gap > kHermitianTol)
    throw validation_error("HermitianEstimate: hermiticity gap " + std::to_string(gap));
  const double tr = matrix.trace().real();
  if (std::abs(tr - 1.0) > 1e-9)
    throw validation_error("HermitianEstimate: trace deviates from 1 by " + std::to_string(tr - 1.0));
  const EigResult eig = eig_hermitian(matrix);
  min_eigenvalue = eig.eigenvalues(eig.eigenvalues.size() - 1);
}

// ---------------------------------------------------------------------------
// Ket expression parsing

namespace {

ComplexVector single_qubit_ket(char c) {
  ComplexVector v(2);
  switch (c) {
    case '0': v << 1, 0; break;
    case '1': v << 0, 1; break;
    case '+': v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0); break;
    case '-': v << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0); break;
    default:
      throw validation_error(std::string("make_state: unknown qubit letter '") + c + "'");
  }
  return v;
}

ComplexVector product_ket(const std::string& letters) {
  ComplexVector v = single_qubit_ket(letters[0]);
  for (std::size_t k = 1; k < letters.size(); ++k) {
    const ComplexVector q = single_qubit_ket(letters[k]);
    ComplexVector next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * q(0);
      next(2 * i + 1) = v(i) * q(1);
    }
    v = next;
  }
  return v;
}

ComplexVector bell_ket(int which) {
  ComplexVector v = ComplexVector::Zero(4);
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 1: v(0) = s; v(3) = s; break;  // (|00> + |11>)/sqrt2
    case 2: v(1) = s; v(2) = s; break;  // (|01> + |10>)/sqrt2
    case 3: v(0) = s; v(3) = -s; break; // (|00> - |11>)/sqrt2
    case 4: v(1) = s; v(2) = -s; break; // (|01> - |10>)/sqrt2
    default: throw validation_error("make_state: Bell index must be 1..4");
  }
  return v;
}

// Superposition grammar: sequence of terms, each
//   [sign] [decimal] [i] '|' bits '>'
// e.g. "|00>+|11>", "-0.5i|01>", "i|10>".
ComplexVector superposition_ket(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')') s.push_back(c);

  ComplexVector amps;
  std::size_t pos = 0;
  std::size_t n_qubits = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+') {
      ++pos;
    } else if (s[pos] == '-') {
      sign = -1.0;
      ++pos;
    }
    double magnitude = 1.0;
    std::size_t num_start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) ++pos;
    if (pos > num_start) magnitude = std::stod(s.substr(num_start, pos - num_start));
    bool imaginary = false;
    if (pos < s.size() && s[pos] == 'i') {
      imaginary = true;
      ++pos;
    }
    if (pos >= s.size() || s[pos] != '|')
      throw validation_error("make_state: expected '|' at position " + std::to_string(pos) +
                             " in \"" + text + "\"");
    ++pos;
    std::size_t bits_start = pos;
    while (pos < s.size() && (s[pos] == '0' || s[pos] == '1')) ++pos;
    const std::string bits = s.substr(bits_start, pos - bits_start);
    if (bits.empty() || pos >= s.size() || s[pos] != '>')
      throw validation_error("make_state: malformed ket in \"" + text + "\"");
    ++pos;

    if (n_qubits == 0) {
      n_qubits = bits.size();
      if (n_qubits > 4) throw validation_error("make_state: at most 4 qubits supported");
      amps = ComplexVector::Zero(Eigen::Index(1) << n_qubits);
    } else if (bits.size() != n_qubits) {
      throw validation_error("make_state: kets of mixed qubit count in \"" + text + "\"");
    }
    Eigen::Index index = 0;
    for (char b : bits) index = 2 * index + (b - '0');
    amps(index) += sign * magnitude * (imaginary ? kI : Complex(1.0, 0.0));
  }
  if (amps.size() == 0) throw validation_error("make_state: empty expression");
  return amps;
}

} // namespace

DensityMatrix make_state(const std::string& spec) {
  if (spec.empty()) throw validation_error("make_state: empty state spec");

  ComplexVector ket;
  if (spec.size() == 2 && (spec[0] == 'B' || spec[0] == 'b') && spec[1] >= '1' && spec[1] <= '4') {
    ket = bell_ket(spec[1] - '0');
  } else if (spec.find('|') != std::string::npos) {
    ket = superposition_ket(spec);
  } else {
    if (spec.size() > 4)
      throw validation_error("make_state: product strings support at most 4 qubits");
    ket = product_ket(spec);
  }

  const double norm = ket.norm();
  if (norm < 1e-12) throw validation_error("make_state: zero-norm state \"" + spec + "\"");
  ket /= norm;
  ComplexMatrix rho = ket * ket.adjoint();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(rho);
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for Hermitian matrices

EigResult eig_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw validation_error("eig_hermitian: matrix must be square");
  const double gap = hermiticity_gap(m);
  if (gap > kEigHermitianTol)
    throw validation_error("eig_hermitian: matrix not Hermitian, max asymmetry " +
                           std::to_string(gap));

  const Eigen::Index n = m.rows();
  ComplexMatrix h = 0.5 * (m + m.adjoint().eval());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);
  const double stop = 1e-15 * scale;
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off = std::max(off, std::abs(h(p, q)));
    if (off <= stop) break;
    if (sweep == max_sweeps - 1)
      throw numeric_error("eig_hermitian: Jacobi failed to converge");

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex beta = h(p, q);
        const double abs_beta = std::abs(beta);
        if (abs_beta <= stop * 1e-2) continue;

        const Complex phase = beta / abs_beta;
        const double alpha = h(p, p).real();
        const double gamma = h(q, q).real();
        // rotation angle zeroing the (p,q) element
        const double tau = (gamma - alpha) / (2.0 * abs_beta);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex s_phase = s * phase;       // upper entry of the rotation
        const Complex s_conj = s * std::conj(phase);

        // columns: H <- H * U with U = [[c, s*phase], [-s*conj(phase), c]]
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex hkp = h(k, p);
          const Complex hkq = h(k, q);
          h(k, p) = c * hkp - s_conj * hkq;
          h(k, q) = s_phase * hkp + c * hkq;
        }
        // rows: H <- U^dagger * H
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex hpk = h(p, k);
          const Complex hqk = h(q, k);
          h(p, k) = c * hpk - s_phase * hqk;
          h(q, k) = s_conj * hpk + c * hqk;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = Complex(h(p, p).real(), 0.0);
        h(q, q) = Complex(h(q, q).real(), 0.0);
        // accumulate eigenvectors
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s_conj * vkq;
          v(k, q) = s_phase * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return h(a, a).real() > h(b, b).real();
  });

  EigResult result;
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    result.eigenvalues(k) = h(order[k], order[k]).real();
    result.eigenvectors.col(k) = v.col(order[k]);
    // phase convention: largest-magnitude component real positive
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(result.eigenvectors(i, k));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) {
      const Complex ph = result.eigenvectors(imax, k) / best;
      result.eigenvectors.col(k) *= std::conj(ph);
    }
  }
  return result;
}

double expectation(const ComplexMatrix& observable, const DensityMatrix& rho) {
  if (observable.rows() != rho.matrix.rows() || observable.cols() != rho.matrix.cols())
    throw validation_error("expectation: dimension mismatch");
  const Complex tr = (observable * rho.matrix).trace();
  if (std::abs(tr.imag()) > 1e-10)
    throw numeric_error("expectation: imaginary residue " + std::to_string(tr.imag()));
  return tr.real();
}

// ---------------------------------------------------------------------------
// Rng

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // decorrelate trivially related seeds
  (void)splitmix64(state_);
}

Rng Rng::split(std::uint64_t stream) const {
  std::uint64_t s = state_ ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  Rng child(0);
  child.state_ = s;
  (void)splitmix64(child.state_);
  return child;
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

} // namespace tomoct
