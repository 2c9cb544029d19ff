#include "gmedyn/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "gmedyn/jacobi.hpp"

namespace gmedyn {

std::size_t hilbert_dim(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count must lie in 1.." + std::to_string(kMaxQubits) +
                                ", got " + std::to_string(n_qubits));
  return std::size_t{1} << n_qubits;
}

int qubits_for_dim(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n)
    if (dim == (Eigen::Index{1} << n)) return n;
  return -1;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

double hermiticity_error(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix is not square");
  return max_abs(h - h.adjoint());
}

CMatrix hermitize(const CMatrix& h) {
  return 0.5 * (h + h.adjoint());
}

// --- PureState ------------------------------------------------------------

PureState::PureState(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  const auto dim = hilbert_dim(n_qubits);
  if (static_cast<std::size_t>(amplitudes_.size()) != dim)
    throw std::invalid_argument("state vector length " + std::to_string(amplitudes_.size()) +
                                " does not match 2^" + std::to_string(n_qubits));
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("state vector is not normalized");
}

PureState PureState::normalized(int n_qubits, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  amplitudes /= norm;
  return PureState(n_qubits, std::move(amplitudes));
}

// --- DensityMatrix --------------------------------------------------------

DensityMatrix::DensityMatrix(int n_qubits, CMatrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw std::invalid_argument("density matrix shape does not match 2^" +
                                std::to_string(n_qubits));
  if (!matrix_.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
  if (hermiticity_error(matrix_) > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - cplx(1.0)) > kTraceTol)
    throw std::invalid_argument("density matrix trace differs from 1");
  const RVector ev = hermitian_eigenvalues(matrix_);
  if (ev[0] < -kPsdTol)
    throw std::invalid_argument("density matrix has eigenvalue " + std::to_string(ev[0]));
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : DensityMatrix(psi.n_qubits(), hermitize(psi.amplitudes() * psi.amplitudes().adjoint())) {}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
  return DensityMatrix(n_qubits, CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

// --- Bipartition ----------------------------------------------------------

Bipartition::Bipartition(int n_qubits, std::uint32_t subset_mask) : n_qubits_(n_qubits) {
  if (n_qubits < 2 || n_qubits > kMaxQubits)
    throw std::invalid_argument("bipartition needs 2.." + std::to_string(kMaxQubits) + " qubits");
  const std::uint32_t full = (1u << n_qubits) - 1u;
  if ((subset_mask & ~full) != 0)
    throw std::invalid_argument("bipartition mask references qubits beyond n");
  if (subset_mask == 0 || subset_mask == full)
    throw std::invalid_argument("bipartition side must be nonempty and proper");
  mask_ = (subset_mask & 1u) ? (full ^ subset_mask) : subset_mask;
}

std::uint32_t Bipartition::index_mask() const {
  std::uint32_t out = 0;
  for (int q = 0; q < n_qubits_; ++q)
    if (mask_ & (1u << q)) out |= 1u << (n_qubits_ - 1 - q);
  return out;
}

std::uint32_t Bipartition::smaller_side() const {
  const int a = std::popcount(mask_);
  const int b = n_qubits_ - a;
  return a < b ? mask_ : complement_mask();
}

std::string Bipartition::label() const {
  auto letters = [this](std::uint32_t m) {
    std::string s;
    for (int q = 0; q < n_qubits_; ++q)
      if (m & (1u << q)) s.push_back(static_cast<char>('A' + q));
    return s;
  };
  const std::uint32_t small = smaller_side();
  return letters(small) + "|" + letters(full_mask() ^ small);
}

// --- operations -----------------------------------------------------------

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_transpose(const CMatrix& m, std::uint32_t index_mask) {
  if (m.rows() != m.cols()) throw std::invalid_argument("partial_transpose: not square");
  if (index_mask >= static_cast<std::uint32_t>(m.rows()) && index_mask != 0)
    throw std::invalid_argument("partial_transpose: mask exceeds matrix dimension");
  const auto dim = static_cast<std::uint32_t>(m.rows());
  CMatrix out(m.rows(), m.cols());
  for (std::uint32_t i = 0; i < dim; ++i)
    for (std::uint32_t j = 0; j < dim; ++j) {
      const auto [r, c] = transposed_unit(i, j, index_mask);
      out(r, c) = m(i, j);
    }
  return out;
}

CMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& part) {
  if (part.n_qubits() != rho.n_qubits())
    throw std::invalid_argument("partial_transpose: bipartition is for " +
                                std::to_string(part.n_qubits()) + " qubits, state has " +
                                std::to_string(rho.n_qubits()));
  return partial_transpose(rho.matrix(), part.index_mask());
}

namespace {

// [[Re, -Im], [Im, Re]]: each eigenvalue of h appears twice.
RMatrix real_embedding(const CMatrix& h) {
  const Eigen::Index d = h.rows();
  RMatrix s(2 * d, 2 * d);
  s.topLeftCorner(d, d) = h.real();
  s.bottomRightCorner(d, d) = h.real();
  s.topRightCorner(d, d) = -h.imag();
  s.bottomLeftCorner(d, d) = h.imag();
  return s;
}

void require_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix is not square");
  if (hermiticity_error(h) > 1e-10) throw std::invalid_argument("matrix is not Hermitian");
}

} // namespace

RVector hermitian_eigenvalues(const CMatrix& h) {
  require_hermitian(h);
  const Eigen::Index d = h.rows();
  const auto sys = jacobi_eigensystem(real_embedding(hermitize(h)), false);
  RVector out(d);
  for (Eigen::Index k = 0; k < d; ++k) out[k] = 0.5 * (sys.values[2 * k] + sys.values[2 * k + 1]);
  return out;
}

HermitianEigensystem hermitian_eigensystem(const CMatrix& h) {
  require_hermitian(h);
  const Eigen::Index d = h.rows();
  const auto sys = jacobi_eigensystem(real_embedding(hermitize(h)), true);

  // Real eigenvectors [u; v] map to complex u + iv.  Each complex eigenvector
  // shows up twice (as z and iz), so within every cluster of equal
  // eigenvalues keep half of the directions, picked by pivoted Gram-Schmidt.
  const double scale = std::max(1.0, sys.values.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-8 * scale;

  HermitianEigensystem out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  Eigen::Index accepted = 0;
  Eigen::Index begin = 0;
  while (begin < 2 * d) {
    Eigen::Index end = begin + 1;
    while (end < 2 * d && sys.values[end] - sys.values[end - 1] <= cluster_tol) ++end;
    const Eigen::Index size = end - begin;
    CMatrix cand(d, size);
    for (Eigen::Index k = 0; k < size; ++k)
      for (Eigen::Index i = 0; i < d; ++i)
        cand(i, k) = cplx(sys.vectors(i, begin + k), sys.vectors(i + d, begin + k));
    const double mean = sys.values.segment(begin, size).mean();
    const Eigen::Index wanted = std::min((size + 1) / 2, d - accepted);
    for (Eigen::Index w = 0; w < wanted; ++w) {
      Eigen::Index best = 0;
      const double best_norm = cand.colwise().norm().maxCoeff(&best);
      if (best_norm < 1e-3) break;
      const CVector z = cand.col(best) / best_norm;
      out.vectors.col(accepted) = z;
      out.values[accepted] = mean;
      ++accepted;
      cand -= z * (z.adjoint() * cand);
    }
    begin = end;
  }
  if (accepted != d) throw std::runtime_error("hermitian_eigensystem: eigenvector recovery failed");
  return out;
}

double negativity(const DensityMatrix& rho, const Bipartition& part) {
  const RVector ev = hermitian_eigenvalues(partial_transpose(rho, part));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < 0.0) sum -= ev[i];
  return sum;
}

} // namespace gmedyn
