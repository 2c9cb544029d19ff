#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gmedyn/dephasing.hpp"
#include "gmedyn/states.hpp"
#include "support.hpp"

using namespace gmedyn;
using namespace gmedyn::dephasing;

namespace {

const DephasingParams kSlow(1.0, 5.0); // mu = sqrt(399)
const double kMu = std::sqrt(399.0);

// Single-qubit coherence c(t) from c'(t) = -4 a^2 int_0^t exp(-(t-s)/tau) c(s) ds,
// c(0) = 1, integrated with Heun steps; the memory term is carried as
// I(t) = int_0^t exp(-(t-s)/tau) c(s) ds and advanced with the trapezoid rule.
double integro_differential_coherence(double a, double tau, double t_end, int steps) {
  const double h = t_end / steps;
  const double decay = std::exp(-h / tau);
  double c = 1.0, mem = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double dc = -4.0 * a * a * mem;
    const double c_pred = c + h * dc;
    const double mem_pred = decay * mem + 0.5 * h * (decay * c + c_pred);
    const double dc_pred = -4.0 * a * a * mem_pred;
    const double c_next = c + 0.5 * h * (dc + dc_pred);
    mem = decay * mem + 0.5 * h * (decay * c + c_next);
    c = c_next;
  }
  return c;
}

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("DephasingParams") {
  CHECK(kSlow.regime() == 399.0);
  CHECK(kSlow.mu() == doctest::Approx(kMu));
  CHECK(DephasingParams(1.0, 0.5).mu() == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(DephasingParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DephasingParams(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(DephasingParams(NAN, 1.0), std::invalid_argument);
}

TEST_CASE("Lambda at zero and its first root") {
  for (double tau : {0.05, 0.25, 0.5, 1.0, 5.0}) CHECK(lambda_factor(DephasingParams(1.0, tau), 0.0) == 1.0);
  const double closed = (std::numbers::pi - std::atan(kMu)) / kMu;
  const double root = bisect([](double nu) { return std::cos(kMu * nu) + std::sin(kMu * nu) / kMu; }, 0.05, 0.1);
  CHECK(std::abs(root - closed) <= 1e-13);
  CHECK(closed == doctest::Approx(0.08114).epsilon(1e-4));
  CHECK(std::abs(lambda_factor(kSlow, closed)) <= 1e-14);
  CHECK_THROWS_AS(lambda_factor(kSlow, -0.1), std::invalid_argument);
}

TEST_CASE("Lambda agrees with the integro-differential coherence") {
  // nu = t / (2 tau)
  const double nu = 0.05;
  const double c = integro_differential_coherence(1.0, 5.0, 2.0 * 5.0 * nu, 20000);
  CHECK(std::abs(lambda_factor(kSlow, nu) - c) <= 1e-6);
  const DephasingParams fast(1.0, 0.1); // (4 a tau)^2 < 1
  const double c2 = integro_differential_coherence(1.0, 0.1, 2.0 * 0.1 * 0.7, 20000);
  CHECK(std::abs(lambda_factor(fast, 0.7) - c2) <= 1e-6);
}

TEST_CASE("gamma equals Lambda and is bounded") {
  for (double tau : {0.1, 0.25, 0.5, 1.0, 2.0, 5.0}) {
    const DephasingParams p(1.0, tau);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double nu = 3.0 * i / 999.0;
      worst = std::max(worst, std::abs(gamma_factor(p, nu) - lambda_factor(p, nu)));
      CHECK(std::abs(lambda_factor(p, nu)) <= 1.0 + 1e-15);
      if (p.regime() > 0.0 && p.mu() >= 1.0)
        CHECK(std::abs(gamma_factor(p, nu)) <= std::exp(-nu) * (1.0 + 1.0 / p.mu()) + 1e-15);
    }
    CHECK(worst <= 1e-14);
  }
  CHECK(gamma_factor(kSlow, 0.0) == 1.0);
}

TEST_CASE("regime continuation is continuous at the boundary") {
  const DephasingParams edge(1.0, 0.25);
  CHECK(edge.regime() == 0.0);
  const DephasingParams below(1.0, 0.25 * (1 - 1e-9)), above(1.0, 0.25 * (1 + 1e-9));
  for (double nu : {0.0, 0.3, 1.0, 2.5}) {
    CHECK(lambda_factor(edge, nu) == doctest::Approx(std::exp(-nu) * (1 + nu)));
    CHECK(std::abs(lambda_factor(below, nu) - lambda_factor(edge, nu)) <= 1e-7);
    CHECK(std::abs(lambda_factor(above, nu) - lambda_factor(edge, nu)) <= 1e-7);
  }
}

TEST_CASE("Markovian gamma stays positive") {
  const DephasingParams p(1.0, 0.5);
  for (int i = 0; i <= 1000; ++i) CHECK(gamma_factor(p, 1.2 * i / 1000.0) > 0.0);
  CHECK(coherence_zeros(p, 3.0).size() == 1); // mu = sqrt 3: first zero at 1.209
  CHECK(coherence_zeros(DephasingParams(1.0, 0.2), 10.0).empty());
}

TEST_CASE("f function, zeros and maxima") {
  CHECK(f_function(kSlow, 0.0) == doctest::Approx(kMu));
  const auto zeros = coherence_zeros(kSlow, 1.0);
  REQUIRE(zeros.size() == 6);
  const double bis = bisect([](double nu) { return std::sin(kMu * nu) + kMu * std::cos(kMu * nu); }, 0.05, 0.1);
  CHECK(std::abs(zeros[0] - bis) <= 1e-13);
  for (std::size_t k = 1; k < zeros.size(); ++k)
    CHECK(zeros[k] - zeros[k - 1] == doctest::Approx(std::numbers::pi / kMu));
  for (double z : zeros) {
    CHECK(f_function(kSlow, z) <= 1e-12);
    CHECK(std::abs(gamma_factor(kSlow, z)) <= 1e-14);
  }
  // Sign changes of gamma on a fine grid bracket the zeros of f.
  std::vector<double> brackets;
  const int n = 20000;
  for (int i = 1; i <= n; ++i) {
    const double a = (i - 1.0) / n, b = double(i) / n;
    if ((gamma_factor(kSlow, a) < 0) != (gamma_factor(kSlow, b) < 0)) brackets.push_back(b);
  }
  REQUIRE(brackets.size() == zeros.size());
  for (std::size_t k = 0; k < zeros.size(); ++k) CHECK(std::abs(brackets[k] - zeros[k]) <= 1.0 / n);

  const auto peaks = f_maxima(kSlow, 1.0);
  REQUIRE(peaks.size() >= 6);
  for (double m : peaks) {
    const double h = 1e-5;
    CHECK(f_function(kSlow, m) >= f_function(kSlow, m - h));
    CHECK(f_function(kSlow, m) >= f_function(kSlow, m + h));
  }
  for (int i = 0; i <= 100; ++i) CHECK(f_function(kSlow, i / 100.0) >= 0.0);
}

TEST_CASE("single-qubit Kraus pair") {
  const auto k0 = single_qubit_kraus(kSlow, 0.0);
  REQUIRE(k0.size() == 2);
  CHECK(k0.operators()[0] == CMatrix::Identity(2, 2));
  CHECK(max_abs(k0.operators()[1]) == 0.0);
  const double z = coherence_zeros(kSlow, 1.0)[0];
  const auto kz = single_qubit_kraus(kSlow, z);
  CHECK(max_abs_diff(kz.operators()[0], CMatrix::Identity(2, 2) / std::sqrt(2.0)) <= 1e-8);
  CHECK(max_abs_diff(kz.operators()[1], testing::pauli_z() / std::sqrt(2.0)) <= 1e-8);
  for (int i = 0; i <= 200; ++i) CHECK(single_qubit_kraus(kSlow, i / 100.0).completeness_error() <= 1e-15);
  CHECK(max_abs(kron(k0.operators()[0], k0.operators()[1])) == 0.0);
}

TEST_CASE("product channel layout and completeness") {
  for (int n = 1; n <= 4; ++n) {
    const auto ch = product_channel(kSlow, 0.37, n);
    CHECK(ch.size() == (std::size_t{1} << n));
    CHECK(ch.completeness_error() <= 1e-12);
  }
  const auto single = single_qubit_kraus(kSlow, 0.37);
  const auto one = product_channel(kSlow, 0.37, 1);
  CHECK(one.operators()[0] == single.operators()[0]);
  CHECK(one.operators()[1] == single.operators()[1]);
  const auto three = product_channel(kSlow, 0.37, 3);
  const CMatrix& k1 = single.operators()[0];
  const CMatrix& k2 = single.operators()[1];
  CHECK(three.operators()[0] == kron(kron(k1, k1), k1));
  CHECK(three.operators()[1] == kron(kron(k1, k1), k2));
  CHECK(three.operators()[4] == kron(kron(k2, k1), k1));
  CHECK(three.operators()[7] == kron(kron(k2, k2), k2));
  CHECK_THROWS_AS(product_channel(kSlow, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(product_channel(kSlow, 0.1, kMaxQubits + 1), std::invalid_argument);
  std::vector<CMatrix> bad{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  CHECK_THROWS_AS(KrausChannel{bad}, std::invalid_argument);
}

TEST_CASE("GHZ coherence decays as gamma cubed") {
  const DensityMatrix ghz(states::ghz(3));
  for (int i = 0; i <= 50; ++i) {
    const double nu = i / 50.0;
    const double g = gamma_factor(kSlow, nu);
    const auto a = evolve_analytic(ghz, kSlow, nu);
    const auto k = evolve_kraus(ghz, kSlow, nu);
    CHECK(std::abs(a(0, 7) - g * g * g / 2.0) <= 1e-15);
    CHECK(std::abs(k(0, 7) - g * g * g / 2.0) <= 1e-12);
  }
  CHECK(evolve_kraus(ghz, kSlow, 0.0).matrix() == ghz.matrix());
}

TEST_CASE("diagonal states are fixed points") {
  RandomStream rng(21);
  RVector pops(8);
  for (auto& x : pops) x = rng.uniform();
  pops /= pops.sum();
  const DensityMatrix rho(3, pops.cast<cplx>().asDiagonal().toDenseMatrix());
  for (double nu : {0.0, 0.1, 0.5, 2.0}) {
    CHECK(max_abs_diff(evolve_kraus(rho, kSlow, nu).matrix(), rho.matrix()) <= 1e-15);
    CHECK(max_abs_diff(evolve_analytic(rho, kSlow, nu).matrix(), rho.matrix()) <= 1e-15);
  }
}

TEST_CASE("Kraus and element-wise evolution agree on random states") {
  RandomStream rng(22);
  for (int n : {3, 4}) {
    for (int s = 0; s < 20; ++s) {
      const DensityMatrix rho = testing::random_density(n, rng, s % 3 + 1);
      for (int i = 0; i < 50; ++i) {
        const double nu = 1.5 * i / 49.0;
        const auto a = evolve_analytic(rho, kSlow, nu);
        const auto k = evolve_kraus(rho, kSlow, nu);
        CHECK(max_abs_diff(a.matrix(), k.matrix()) <= 1e-12);
        CHECK(std::abs(k.matrix().trace() - cplx(1.0)) <= 1e-12);
        CHECK((k.matrix().diagonal() - rho.matrix().diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(hermiticity_error(k.matrix()) <= 1e-12);
        CHECK(hermitian_eigenvalues(k.matrix())[0] >= -1e-9);
      }
    }
  }
}
