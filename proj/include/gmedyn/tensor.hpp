// Dense complex linear algebra for small multi-qubit systems.
//
// Basis convention used throughout the library: qubit 0 is the most
// significant bit of a computational-basis index, so |q0 q1 ... q(n-1)>
// maps to index q0*2^(n-1) + ... + q(n-1).

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gmedyn {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr int kMaxQubits = 6;

/// Number of basis states for n qubits; throws std::invalid_argument
/// outside 1..kMaxQubits.
std::size_t hilbert_dim(int n_qubits);

/// Number of qubits whose Hilbert space has dimension dim, or -1.
int qubits_for_dim(Eigen::Index dim);

double max_abs(const CMatrix& m);
double max_abs_diff(const CMatrix& a, const CMatrix& b);
/// max |h - h^dagger|
double hermiticity_error(const CMatrix& h);
CMatrix hermitize(const CMatrix& h);

/// Normalized state vector on n qubits.
class PureState {
public:
  /// Validates length 2^n and unit norm (1e-12).
  PureState(int n_qubits, CVector amplitudes);

  /// Normalizes before validating; throws on a zero vector.
  static PureState normalized(int n_qubits, CVector amplitudes);

  int n_qubits() const { return n_qubits_; }
  const CVector& amplitudes() const { return amplitudes_; }
  cplx operator[](Eigen::Index i) const { return amplitudes_[i]; }

private:
  int n_qubits_;
  CVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix on n qubits.
class DensityMatrix {
public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdTol = 1e-9;

  /// Throws std::invalid_argument if any invariant fails.
  DensityMatrix(int n_qubits, CMatrix matrix);
  explicit DensityMatrix(const PureState& psi);

  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }

private:
  int n_qubits_;
  CMatrix matrix_;
};

/// Cut M|M' of an n-qubit register.  Stored canonically: bit k of the mask
/// refers to qubit k and bit 0 is always clear, so a subset and its
/// complement produce the same Bipartition.
class Bipartition {
public:
  Bipartition(int n_qubits, std::uint32_t subset_mask);

  int n_qubits() const { return n_qubits_; }
  std::uint32_t mask() const { return mask_; }
  std::uint32_t complement_mask() const { return full_mask() ^ mask_; }
  std::uint32_t full_mask() const { return (1u << n_qubits_) - 1u; }

  /// Mask over computational-basis index bits equivalent to mask().
  std::uint32_t index_mask() const;

  /// The side with fewer qubits; ties go to the side holding qubit 0.
  std::uint32_t smaller_side() const;

  /// e.g. "A|BC", with the smaller side written first.
  std::string label() const;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

private:
  int n_qubits_;
  std::uint32_t mask_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Partial transpose over the basis-index bits in index_mask.
CMatrix partial_transpose(const CMatrix& m, std::uint32_t index_mask);
CMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& part);

/// Basis index reached by the partial transpose from matrix unit (row, col).
inline std::pair<std::uint32_t, std::uint32_t>
transposed_unit(std::uint32_t row, std::uint32_t col, std::uint32_t index_mask) {
  return {(row & ~index_mask) | (col & index_mask),
          (col & ~index_mask) | (row & index_mask)};
}

struct HermitianEigensystem {
  RVector values;  // ascending
  CMatrix vectors; // columns, orthonormal
};

/// Eigenvalues in ascending order.  Throws std::invalid_argument when h is
/// not Hermitian to 1e-10.
RVector hermitian_eigenvalues(const CMatrix& h);
HermitianEigensystem hermitian_eigensystem(const CMatrix& h);

/// Sum of |negative eigenvalues| of rho^{T_M}.
double negativity(const DensityMatrix& rho, const Bipartition& part);

} // namespace gmedyn
