// Dense primal-dual interior-point solver for small block SDPs.
//
// Problem form (every block X_j is a Hermitian, or real symmetric, matrix):
//
//   minimize    sum_j <C_j, X_j>
//   subject to  sum_j <A_ij, X_j> = b_i          i = 1..m
//               0 <= X_j              (PSD)
//               X_j <= U_j            (only for blocks given a bound)
//
// with <A, X> = Re tr(A^dagger X).  Constraint matrices are sparse.  An upper
// bound is carried as a slack block S_j = U_j - X_j >= 0 coupled through
// X_j + S_j = U_j; that coupling is eliminated analytically inside each
// Newton step, so bounded blocks cost no more Schur-complement rows than
// unbounded ones.
//
// The solver is the infeasible path-following method with Nesterov-Todd
// scaling and Mehrotra's predictor-corrector.  It is instantiated for
// double (real symmetric blocks) and std::complex<double> (Hermitian blocks).

#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gmedyn::sdp {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One stored entry of a Hermitian coefficient matrix.  Only row <= col is
/// stored; the (col, row) entry is the conjugate.  Diagonal values must be
/// real.
template <class Scalar>
struct Entry {
  int row;
  int col;
  Scalar value;
};

template <class Scalar>
struct Term {
  int block;
  std::vector<Entry<Scalar>> entries;
};

template <class Scalar>
struct Constraint {
  std::vector<Term<Scalar>> terms;
  double rhs = 0.0;
};

template <class Scalar>
class Problem {
public:
  /// Adds a variable block of the given dimension; returns its id.
  int add_block(int dim);
  void set_objective(int block, Matrix<Scalar> c);
  /// Imposes X_block <= upper.  upper must be positive definite.
  void set_upper_bound(int block, Matrix<Scalar> upper);
  /// Adds sum_t <A_t, X_{block_t}> = rhs; returns the constraint index.
  int add_constraint(std::vector<Term<Scalar>> terms, double rhs);

  int block_count() const { return static_cast<int>(dims_.size()); }
  int block_dim(int block) const { return dims_.at(static_cast<std::size_t>(block)); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  const Matrix<Scalar>& objective(int block) const { return objective_.at(static_cast<std::size_t>(block)); }
  const std::optional<Matrix<Scalar>>& upper_bound(int block) const {
    return upper_.at(static_cast<std::size_t>(block));
  }
  const Constraint<Scalar>& constraint(int i) const { return constraints_.at(static_cast<std::size_t>(i)); }
  const std::vector<Constraint<Scalar>>& constraints() const { return constraints_; }

  /// Number of blocks including the internal slack blocks for bounds.
  int cone_count() const;

  /// Throws std::invalid_argument on any malformed part.
  void validate() const;

private:
  std::vector<int> dims_;
  std::vector<Matrix<Scalar>> objective_;
  std::vector<std::optional<Matrix<Scalar>>> upper_;
  std::vector<Constraint<Scalar>> constraints_;
};

enum class Status { Optimal, Infeasible, NumericalFailure };

const char* to_string(Status s);

struct Options {
  double gap_tolerance = 1e-8;         // relative duality gap
  double feasibility_tolerance = 1e-9; // relative residual norms
  int max_iterations = 100;
  double step_fraction = 0.98;
  double infeasibility_bound = 1e6;    // |dual objective| that signals infeasibility
  // When the iteration breaks down (cone exit, singular Schur complement,
  // iteration limit) an iterate already meeting these looser tolerances is
  // still reported as optimal.
  double acceptable_gap = 1e-8;
  double acceptable_feasibility = 1e-9;
};

struct IterationRecord {
  int iteration;
  double primal_objective;
  double dual_objective;
  double primal_infeasibility;
  double dual_infeasibility;
  double mu;
  double primal_step;
  double dual_step;
};

template <class Scalar>
struct Solution {
  Status status = Status::NumericalFailure;
  std::vector<Matrix<Scalar>> primal;     // X_j
  std::vector<Matrix<Scalar>> dual_slack; // Z_j
  Eigen::VectorXd multipliers;            // y
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;               // |primal - dual objective|
  double max_violation = 0.0;             // equalities and X <= U
  double min_eigenvalue = 0.0;            // smallest eigenvalue over all X_j
  int iterations = 0;
  std::string message;
  std::vector<IterationRecord> history;
};

template <class Scalar>
Solution<Scalar> solve(const Problem<Scalar>& problem, const Options& options = {});

using RealProblem = Problem<double>;
using HermitianProblem = Problem<std::complex<double>>;
using RealSolution = Solution<double>;
using HermitianSolution = Solution<std::complex<double>>;

/// [[Re h, -Im h], [Im h, Re h]].  Spectra double, products are preserved,
/// and tr(embed(A) embed(B)) = 2 Re tr(AB).
Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& h);

/// Hermitian matrix whose embedding is the J-symmetric part of s.
Eigen::MatrixXcd unembed(const Eigen::MatrixXd& s);

/// Same program over the real embedding: block dims double, coefficient
/// matrices become embed(.)/2 so objective and constraint values agree.
RealProblem embed_problem(const HermitianProblem& problem);

/// Writes the program in SDPA sparse format (bounds expanded into explicit
/// slack blocks and coupling rows).  Our primal is SDPA's dual, so F0 = -C.
void write_sdpa(const RealProblem& problem, std::ostream& out);

} // namespace gmedyn::sdp
