#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tomoct {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Invalid input: bad arguments, malformed files, violated preconditions.
/// CLI maps this to exit code 2.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure: loss of precision, unexpected residues, step-size
/// problems. CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inconsistent affine constraint system.
struct infeasibility_error : validation_error {
  using validation_error::validation_error;
};

// ---------------------------------------------------------------------------
// Basic matrix helpers

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest elementwise |m(i,j) - conj(m(j,i))|; zero for exactly Hermitian m.
double hermiticity_gap(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);

/// Row-major stacking: [[a,b],[c,d]] -> (a,b,c,d). With this convention
/// vectorize(A * X * B.adjoint()) == kron(A, B.conjugate()) * vectorize(X).
ComplexVector vectorize(const ComplexMatrix& m);

/// Inverse of vectorize; throws validation_error on length mismatch.
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

// ---------------------------------------------------------------------------
// Pauli operator basis

/// Single-qubit Pauli matrix, index 0..3 = I, X, Y, Z.
const ComplexMatrix& pauli(int index);

/// Ordered tensor-product Pauli basis for n qubits.
///
/// Element m is the Kronecker product of single-qubit Paulis given by the
/// base-4 digits of m (most significant digit = first tensor factor), with
/// digit values I=0, X=1, Y=2, Z=3. The elements are unnormalized:
/// trace(A_m.adjoint() * A_n) = 2^n * delta_mn.
struct OperatorBasis {
  int n_qubits = 0;
  std::vector<ComplexMatrix> elements;
  std::vector<std::string> labels;

  int dim() const { return 1 << n_qubits; }
  int size() const { return static_cast<int>(elements.size()); }
};

/// Builds the n-qubit Pauli product basis; 1 <= n_qubits <= 4.
OperatorBasis pauli_basis(int n_qubits);

// ---------------------------------------------------------------------------
// States

/// Hermitian, unit-trace, positive-semidefinite state. The constructor
/// enforces all three (eigenvalues >= -1e-9), so holding a DensityMatrix is
/// itself the validity certificate.
struct DensityMatrix {
  ComplexMatrix matrix;

  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix m);

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Hermitian unit-trace matrix that is allowed to be indefinite; the output
/// type of plain linear-inversion tomography, which carries no positivity
/// guarantee.
struct HermitianEstimate {
  ComplexMatrix matrix;
  double min_eigenvalue = 0.0;

  HermitianEstimate() = default;
  explicit HermitianEstimate(ComplexMatrix m);
};

/// Builds the pure state |psi><psi| described by a ket expression.
///
/// Accepted forms:
///   - product strings over {0,1,+,-}, one character per qubit, e.g. "00",
///     "0-", "++1". '+' is (|0>+|1>)/sqrt2 and '-' is (|0>+i|1>)/sqrt2
///     (the +Y eigenstate, so the four letters span single-qubit operator
///     space).
///   - Bell state names "B1".."B4": (|00>+|11>)/sqrt2, (|01>+|10>)/sqrt2,
///     (|00>-|11>)/sqrt2, (|01>-|10>)/sqrt2.
///   - explicit superpositions of computational kets such as "|00>+|11>",
///     "|01>-|10>", "0.5|00>+0.5i|01>", "i|10>". The result is always
///     normalized; a zero-norm expression is an error.
DensityMatrix make_state(const std::string& spec);

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct EigResult {
  RealVector eigenvalues;     // sorted descending
  ComplexMatrix eigenvectors; // columns, unitary; column k pairs with eigenvalue k
};

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// Deterministic: fixed sweep order, eigenvalues sorted descending, and each
/// eigenvector's phase fixed so its largest-magnitude component is real
/// positive. Throws validation_error if the input's hermiticity gap exceeds
/// 1e-10.
EigResult eig_hermitian(const ComplexMatrix& m);

/// trace(observable * rho), checked real: an imaginary residue above 1e-10
/// raises numeric_error, below that it is discarded.
double expectation(const ComplexMatrix& observable, const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Deterministic random numbers

/// Splittable 64-bit generator; all randomness in the toolkit flows from one
/// seeded instance so that every run is reproducible. Gaussian variates use
/// Box-Muller on top of the raw stream, avoiding the platform-dependent
/// std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent substream keyed by (this seed, stream index).
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double gaussian(); // N(0, 1)

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace tomoct
