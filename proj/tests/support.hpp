// Shared helpers for the test binaries: random matrices and states drawn
// from a fixed seed, and a few independent reference computations.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "gmedyn/random.hpp"
#include "gmedyn/tensor.hpp"

namespace testing {

using gmedyn::CMatrix;
using gmedyn::CVector;
using gmedyn::cplx;
using gmedyn::RandomStream;

inline CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im);
    }
  return g;
}

inline CMatrix random_hermitian(Eigen::Index d, RandomStream& rng) {
  const CMatrix g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal
// moved into Q.
inline CMatrix random_unitary(Eigen::Index d, RandomStream& rng) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(d, d, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < d; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

// Full-rank mixed state G G^dagger / tr, with `rank` columns.
inline gmedyn::DensityMatrix random_density(int n, RandomStream& rng, Eigen::Index rank = -1) {
  const auto d = static_cast<Eigen::Index>(gmedyn::hilbert_dim(n));
  const CMatrix g = ginibre(d, rank < 0 ? d : rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return gmedyn::DensityMatrix(n, gmedyn::hermitize(rho));
}

inline CVector random_qubit(RandomStream& rng) {
  CVector v = ginibre(2, 1, rng).col(0);
  return v / v.norm();
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

// U_0 x U_1 x ... with one Haar unitary per qubit.
inline CMatrix random_local_unitary(int n, RandomStream& rng) {
  CMatrix u = CMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) u = gmedyn::kron(u, random_unitary(2, rng));
  return u;
}

inline gmedyn::DensityMatrix conjugate(const gmedyn::DensityMatrix& rho, const CMatrix& u) {
  return gmedyn::DensityMatrix(rho.n_qubits(), gmedyn::hermitize(u * rho.matrix() * u.adjoint()));
}

inline Eigen::VectorXd reference_eigenvalues(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline CMatrix pauli_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}
inline CMatrix pauli_y() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = cplx(0, -1);
  m(1, 0) = cplx(0, 1);
  return m;
}
inline CMatrix pauli_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

} // namespace testing
