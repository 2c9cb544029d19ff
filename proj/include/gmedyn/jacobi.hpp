#pragma once

#include <Eigen/Dense>

namespace gmedyn {

struct SymmetricEigensystem {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a real symmetric matrix.  Only the
/// upper triangle is read.  Sweeps continue until the off-diagonal mass
/// drops below machine precision relative to the Frobenius norm.
SymmetricEigensystem jacobi_eigensystem(const Eigen::MatrixXd& a,
                                        bool want_vectors = true,
                                        int max_sweeps = 60);

} // namespace gmedyn
