#include "gmedyn/dephasing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gmedyn::dephasing {

DephasingParams::DephasingParams(double a, double tau) : a_(a), tau_(tau) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("coupling a must be > 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("memory time tau must be > 0");
  const double x = 4.0 * a * tau;
  regime_ = x * x - 1.0;
}

double DephasingParams::mu() const { return std::sqrt(std::abs(regime_)); }

namespace {

void require_nu(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be finite and >= 0");
}

// sin(mu nu) / mu, continuous as mu -> 0.
double sin_over_mu(double mu, double nu) {
  const double x = mu * nu;
  if (std::abs(x) < 1e-4) return nu * (1.0 - x * x / 6.0);
  return std::sin(x) / mu;
}

double sinh_over_mu(double mu, double nu) {
  const double x = mu * nu;
  if (std::abs(x) < 1e-4) return nu * (1.0 + x * x / 6.0);
  return std::sinh(x) / mu;
}

} // namespace

double lambda_factor(const DephasingParams& p, double nu) {
  require_nu(nu);
  const double mu = p.mu();
  if (p.regime() > 0.0) return std::exp(-nu) * (std::cos(mu * nu) + sin_over_mu(mu, nu));
  if (p.regime() < 0.0) return std::exp(-nu) * (std::cosh(mu * nu) + sinh_over_mu(mu, nu));
  return std::exp(-nu) * (1.0 + nu);
}

double gamma_factor(const DephasingParams& p, double nu) {
  require_nu(nu);
  const double mu = p.mu();
  if (p.regime() > 0.0) return std::exp(-nu) * (std::sin(mu * nu) + mu * std::cos(mu * nu)) / mu;
  if (p.regime() < 0.0) return std::exp(-nu) * (std::sinh(mu * nu) + mu * std::cosh(mu * nu)) / mu;
  return std::exp(-nu) * (1.0 + nu);
}

double f_function(const DephasingParams& p, double nu) {
  require_nu(nu);
  const double mu = p.mu();
  if (p.regime() > 0.0) return std::abs(std::sin(mu * nu) + mu * std::cos(mu * nu));
  if (p.regime() < 0.0) return std::abs(std::sinh(mu * nu) + mu * std::cosh(mu * nu));
  return 1.0 + nu;
}

std::vector<double> coherence_zeros(const DephasingParams& p, double nu_max) {
  std::vector<double> out;
  if (p.regime() <= 0.0) return out;
  const double mu = p.mu();
  const double first = (std::numbers::pi - std::atan(mu)) / mu;
  for (int k = 0;; ++k) {
    const double z = first + k * std::numbers::pi / mu;
    if (z > nu_max) break;
    out.push_back(z);
  }
  return out;
}

std::vector<double> f_maxima(const DephasingParams& p, double nu_max) {
  std::vector<double> out;
  if (p.regime() <= 0.0) return out;
  const double mu = p.mu();
  const double first = std::atan(1.0 / mu) / mu;
  for (int k = 0;; ++k) {
    const double z = first + k * std::numbers::pi / mu;
    if (z > nu_max) break;
    out.push_back(z);
  }
  return out;
}

// --- KrausChannel ---------------------------------------------------------

KrausChannel::KrausChannel(std::vector<CMatrix> operators) : operators_(std::move(operators)) {
  if (operators_.empty()) throw std::invalid_argument("Kraus channel needs at least one operator");
  const Eigen::Index d = operators_.front().rows();
  for (const auto& k : operators_)
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("Kraus operators must be square and of equal dimension");
  if (completeness_error() > 1e-12)
    throw std::invalid_argument("Kraus operators violate completeness");
}

double KrausChannel::completeness_error() const {
  const Eigen::Index d = dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& k : operators_) sum.noalias() += k.adjoint() * k;
  return max_abs(sum - CMatrix::Identity(d, d));
}

CMatrix KrausChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : operators_) out.noalias() += k * rho * k.adjoint();
  return out;
}

KrausChannel single_qubit_kraus(const DephasingParams& p, double nu) {
  const double lambda = std::clamp(lambda_factor(p, nu), -1.0, 1.0);
  CMatrix k1 = CMatrix::Identity(2, 2) * std::sqrt((1.0 + lambda) / 2.0);
  CMatrix k2 = CMatrix::Zero(2, 2);
  const double s = std::sqrt((1.0 - lambda) / 2.0);
  k2(0, 0) = s;
  k2(1, 1) = -s;
  return KrausChannel({std::move(k1), std::move(k2)});
}

KrausChannel product_channel(const DephasingParams& p, double nu, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("product_channel: qubit count must lie in 1.." +
                                std::to_string(kMaxQubits));
  const auto single = single_qubit_kraus(p, nu);
  const std::size_t count = std::size_t{1} << n_qubits;
  std::vector<CMatrix> ops;
  ops.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
      const bool second = (i >> (n_qubits - 1 - q)) & 1u;
      m = kron(m, single.operators()[second ? 1 : 0]);
    }
    ops.push_back(std::move(m));
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix evolve_kraus(const DensityMatrix& rho0, const DephasingParams& p, double nu) {
  const auto channel = product_channel(p, nu, rho0.n_qubits());
  return DensityMatrix(rho0.n_qubits(), hermitize(channel.apply(rho0.matrix())));
}

DensityMatrix evolve_analytic(const DensityMatrix& rho0, const DephasingParams& p, double nu) {
  const int n = rho0.n_qubits();
  const double g = gamma_factor(p, nu);
  std::vector<double> powers(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k) powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k) - 1] * g;

  const Eigen::Index dim = rho0.dim();
  CMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto h = std::popcount(static_cast<std::uint32_t>(i ^ j));
      out(i, j) = powers[static_cast<std::size_t>(h)] * rho0(i, j);
    }
  return DensityMatrix(n, hermitize(out));
}

} // namespace gmedyn::dephasing
