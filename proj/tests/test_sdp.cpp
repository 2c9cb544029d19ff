#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "gmedyn/sdp.hpp"
#include "gmedyn/states.hpp"
#include "support.hpp"

using namespace gmedyn;
using namespace gmedyn::sdp;

namespace {

// min <rho^{T_A}, Q> over 0 <= Q <= I: a single bounded block, no equalities.
HermitianProblem decomposable_witness(const DensityMatrix& rho) {
  HermitianProblem p;
  const int q = p.add_block(4);
  p.set_objective(q, hermitize(partial_transpose(rho.matrix(), 0b10)));
  p.set_upper_bound(q, CMatrix::Identity(4, 4));
  return p;
}

// min tr(C X) s.t. tr X = 1, X >= 0: smallest eigenvalue of C.
RealProblem min_eigen_problem(const Eigen::MatrixXd& c) {
  RealProblem p;
  const int b = p.add_block(static_cast<int>(c.rows()));
  p.set_objective(b, c);
  std::vector<Entry<double>> diag;
  for (int i = 0; i < c.rows(); ++i) diag.push_back({i, i, 1.0});
  p.add_constraint({{b, diag}}, 1.0);
  return p;
}

// Only meaningful when the start is primal and dual feasible, as for
// bounded blocks without equalities.
template <class S>
void check_weak_duality(const Solution<S>& sol) {
  for (const auto& rec : sol.history) CHECK(rec.primal_objective >= rec.dual_objective - 1e-12);
}

} // namespace

TEST_CASE("embedding identities") {
  CHECK(embed_hermitian(CMatrix::Identity(2, 2)) == Eigen::MatrixXd::Identity(4, 4));
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(embed_hermitian(testing::pauli_y())).eigenvalues();
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(-1.0));
  CHECK(ev[2] == doctest::Approx(1.0));
  CHECK(ev[3] == doctest::Approx(1.0));

  RandomStream rng(1);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = testing::random_hermitian(5, rng), b = testing::random_hermitian(5, rng);
    const Eigen::MatrixXd ea = embed_hermitian(a), eb = embed_hermitian(b);
    CHECK(std::abs((ea * eb).trace() - 2.0 * (a * b).trace().real()) <= 1e-10);
    CHECK((ea * eb - embed_hermitian(a * b)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((ea - ea.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(unembed(ea), a) <= 1e-15);
    const Eigen::VectorXd ref = testing::reference_eigenvalues(a);
    const Eigen::VectorXd doubled = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ea).eigenvalues();
    for (int k = 0; k < 5; ++k) {
      CHECK(std::abs(doubled[2 * k] - ref[k]) <= 1e-10);
      CHECK(std::abs(doubled[2 * k + 1] - ref[k]) <= 1e-10);
    }
  }
}

TEST_CASE("one-dimensional program with a slack block") {
  // min x s.t. x - s = 1, x, s >= 0.
  RealProblem p;
  const int x = p.add_block(1), s = p.add_block(1);
  p.set_objective(x, Eigen::MatrixXd::Ones(1, 1));
  p.add_constraint({{x, {{0, 0, 1.0}}}, {s, {{0, 0, -1.0}}}}, 1.0);
  const auto sol = solve(p);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.primal[0](0, 0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.duality_gap <= 1e-7);
}

TEST_CASE("smallest eigenvalue program") {
  RandomStream rng(2);
  for (int d : {2, 5, 9}) {
    const Eigen::MatrixXd g = testing::random_hermitian(d, rng).real();
    const auto sol = solve(min_eigen_problem(g));
    REQUIRE(sol.status == Status::Optimal);
    const double ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues()[0];
    CHECK(std::abs(sol.primal_objective - ref) <= 1e-6);
    CHECK(sol.max_violation <= 1e-8);
    CHECK(sol.min_eigenvalue >= -1e-8);
  }
}

TEST_CASE("decomposable witness of the Bell state") {
  const DensityMatrix bell(states::ghz(2));
  const auto sol = solve(decomposable_witness(bell));
  REQUIRE(sol.status == Status::Optimal);
  CHECK(std::abs(sol.primal_objective + 0.5) <= 1e-6);
  CHECK(sol.duality_gap <= 1e-7);
  check_weak_duality(sol);

  const auto mixed = solve(decomposable_witness(DensityMatrix::maximally_mixed(2)));
  REQUIRE(mixed.status == Status::Optimal);
  CHECK(mixed.primal_objective >= -1e-7);
  CHECK(std::abs(mixed.primal_objective) <= 1e-6);
}

TEST_CASE("complex and real-embedded routes agree") {
  RandomStream rng(3);
  for (int t = 0; t < 5; ++t) {
    HermitianProblem p;
    const int a = p.add_block(3), b = p.add_block(3);
    p.set_objective(a, testing::random_hermitian(3, rng));
    p.set_objective(b, testing::random_hermitian(3, rng));
    p.set_upper_bound(a, CMatrix::Identity(3, 3));
    p.set_upper_bound(b, 2.0 * CMatrix::Identity(3, 3));
    // Tie the (0,1) entries and fix tr A + tr B = 2.
    p.add_constraint({{a, {{0, 1, cplx(1, 0)}}}, {b, {{0, 1, cplx(-1, 0)}}}}, 0.0);
    p.add_constraint({{a, {{0, 1, cplx(0, 1)}}}, {b, {{0, 1, cplx(0, -1)}}}}, 0.0);
    p.add_constraint({{a, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}}, {b, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}}},
                     2.0);
    const auto c = solve(p);
    const auto r = solve(embed_problem(p));
    REQUIRE(c.status == Status::Optimal);
    REQUIRE(r.status == Status::Optimal);
    CHECK(std::abs(c.primal_objective - r.primal_objective) <= 1e-7);
    CHECK(std::abs(c.primal[0](0, 1) - c.primal[1](0, 1)) <= 1e-8);
    CHECK(std::abs(c.primal[0].trace().real() + c.primal[1].trace().real() - 2.0) <= 1e-8);
  }
}

TEST_CASE("objective scaling covariance and determinism") {
  const DensityMatrix bell(states::ghz(2));
  RandomStream rng(4);
  const DensityMatrix rho = testing::random_density(2, rng, 1);
  auto base = decomposable_witness(rho);
  const auto s1 = solve(base);
  auto scaled = base;
  scaled.set_objective(0, 3.0 * base.objective(0));
  const auto s3 = solve(scaled);
  REQUIRE(s1.status == Status::Optimal);
  REQUIRE(s3.status == Status::Optimal);
  CHECK(std::abs(s3.primal_objective - 3.0 * s1.primal_objective) <= 1e-9 * std::max(1.0, std::abs(s3.primal_objective)) + 1e-9);
  const auto again = solve(base);
  CHECK(again.primal_objective == s1.primal_objective);
  CHECK(again.primal[0] == s1.primal[0]);
}

TEST_CASE("infeasible program is reported") {
  // x = -1 with x >= 0.
  RealProblem p;
  const int x = p.add_block(1);
  p.set_objective(x, Eigen::MatrixXd::Ones(1, 1));
  p.add_constraint({{x, {{0, 0, 1.0}}}}, -1.0);
  const auto sol = solve(p);
  CHECK(sol.status != Status::Optimal);
  CHECK(!sol.message.empty());
}

TEST_CASE("malformed problems are rejected") {
  RealProblem p;
  CHECK_THROWS_AS(solve(p), std::invalid_argument); // no blocks
  CHECK_THROWS_AS(p.add_block(0), std::invalid_argument);
  const int b = p.add_block(2);
  CHECK_THROWS_AS(p.set_objective(b, Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(p.set_objective(5, Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 1.0;
  p.set_objective(b, asym);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  p.set_upper_bound(b, -Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.set_upper_bound(b, Eigen::MatrixXd::Identity(2, 2));
  p.add_constraint({{b, {{1, 0, 1.0}}}}, 0.0); // lower triangle
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  RealProblem q;
  const int c = q.add_block(2);
  q.add_constraint({{c, {{0, 0, 1.0}}}}, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);

  HermitianProblem h;
  const int hb = h.add_block(2);
  h.add_constraint({{hb, {{0, 0, cplx(1, 1)}}}}, 0.0);
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("SDPA dump lists every block and row") {
  RealProblem p;
  const int x = p.add_block(2), y = p.add_block(1);
  p.set_objective(x, Eigen::MatrixXd::Identity(2, 2));
  p.set_upper_bound(x, Eigen::MatrixXd::Identity(2, 2));
  p.add_constraint({{x, {{0, 1, 1.0}}}, {y, {{0, 0, 1.0}}}}, 0.5);
  std::ostringstream out;
  write_sdpa(p, out);
  const std::string s = out.str();
  CHECK(s.find("4 = mDIM") != std::string::npos); // 1 + 3 bound rows
  CHECK(s.find("3 = nBLOCK") != std::string::npos);
  CHECK(s.find("2 1 2 = bLOCKsTRUCT") != std::string::npos);
  CHECK(s.find("0 1 1 1 -1") != std::string::npos);
}
