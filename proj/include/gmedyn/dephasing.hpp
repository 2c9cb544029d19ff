// Local dephasing driven by random telegraph noise.
//
// A qubit coupled along z to a telegraph signal of amplitude a and memory
// time tau keeps its populations while every coherence is multiplied by
//
//   Lambda(nu) = exp(-nu) [cos(mu nu) + sin(mu nu) / mu],
//   mu = sqrt((4 a tau)^2 - 1),   nu = t / (2 tau).
//
// Only the product a*tau enters; nu is the time variable everywhere.

#pragma once

#include <vector>

#include "gmedyn/tensor.hpp"

namespace gmedyn::dephasing {

class DephasingParams {
public:
  /// Throws std::invalid_argument unless a > 0 and tau > 0.
  DephasingParams(double a, double tau);

  double a() const { return a_; }
  double tau() const { return tau_; }
  /// (4 a tau)^2 - 1: positive for oscillating memory, negative when the
  /// memory is too short for revivals.
  double regime() const { return regime_; }
  /// sqrt(regime) when regime >= 0, otherwise sqrt(-regime).
  double mu() const;

private:
  double a_;
  double tau_;
  double regime_;
};

/// Completely positive map given by its Kraus operators.
class KrausChannel {
public:
  /// Throws std::invalid_argument if the operators are empty, ragged, or
  /// violate sum K^dagger K = I by more than 1e-12.
  explicit KrausChannel(std::vector<CMatrix> operators);

  const std::vector<CMatrix>& operators() const { return operators_; }
  Eigen::Index dim() const { return operators_.front().rows(); }
  std::size_t size() const { return operators_.size(); }

  /// max |sum K^dagger K - I|
  double completeness_error() const;

  CMatrix apply(const CMatrix& rho) const;

private:
  std::vector<CMatrix> operators_;
};

double lambda_factor(const DephasingParams& p, double nu);

/// Coherence factor in the form mu^-1 e^-nu [sin(mu nu) + mu cos(mu nu)];
/// algebraically identical to lambda_factor.
double gamma_factor(const DephasingParams& p, double nu);

/// |sin(mu nu) + mu cos(mu nu)|; vanishes exactly where gamma does.
/// Outside the oscillating regime the hyperbolic continuation is used.
double f_function(const DephasingParams& p, double nu);

/// Zeros of f (equivalently gamma) in [0, nu_max], ascending.  Empty when
/// regime <= 0.
std::vector<double> coherence_zeros(const DephasingParams& p, double nu_max);

/// Local maxima of f in (0, nu_max], ascending.
std::vector<double> f_maxima(const DephasingParams& p, double nu_max);

/// K1 = sqrt((1 + Lambda)/2) I, K2 = sqrt((1 - Lambda)/2) sigma_z.
KrausChannel single_qubit_kraus(const DephasingParams& p, double nu);

/// All 2^n tensor products of {K1, K2}; operator index bits select K2 on the
/// corresponding qubit (first operator K1 x ... x K1, last K2 x ... x K2).
KrausChannel product_channel(const DephasingParams& p, double nu, int n_qubits);

/// rho(nu) = sum_i M_i rho(0) M_i^dagger.
DensityMatrix evolve_kraus(const DensityMatrix& rho0, const DephasingParams& p, double nu);

/// Element-wise form rho_ij(nu) = gamma^{h(i,j)} rho_ij(0), h = Hamming
/// distance of the basis labels.
DensityMatrix evolve_analytic(const DensityMatrix& rho0, const DephasingParams& p, double nu);

} // namespace gmedyn::dephasing
