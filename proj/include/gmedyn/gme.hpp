// Genuine multipartite negativity via the PPT-mixture program:
//
//   minimize    tr(W rho)
//   subject to  W = P_M + Q_M^{T_M},  0 <= P_M <= I,  0 <= Q_M <= I
//               for every bipartition M,
//
// E(rho) = max(0, -minimum).  A negative minimum certifies that rho is not a
// PPT mixture, hence genuinely multipartite entangled.  E = 0 is not a proof
// of biseparability.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gmedyn/sdp.hpp"
#include "gmedyn/tensor.hpp"

namespace gmedyn::gme {

/// All 2^(n-1) - 1 canonical cuts, smaller side size first, then by mask
/// of the smaller side: A|BC, B|AC, C|AB for three qubits.
std::vector<Bipartition> enumerate_bipartitions(int n_qubits);

enum class Formulation {
  Hermitian,    // complex Hermitian blocks
  RealEmbedded, // same program over the 2d x 2d real embedding
};

/// Program over the blocks P_0, Q_0, P_1, Q_1, ... (block 2k = P_k,
/// block 2k+1 = Q_k, in enumerate_bipartitions order).  Consecutive pairs
/// are tied by one real equality per Hermitian matrix unit.
sdp::HermitianProblem build_ppt_mixture_sdp(const DensityMatrix& rho);

struct WitnessCertificate {
  CMatrix witness;
  std::vector<Bipartition> parts;
  std::vector<CMatrix> p; // P_M per part
  std::vector<CMatrix> q; // Q_M per part
  double value = 0.0;     // tr(W rho)

  /// max over M of |W - (P_M + Q_M^{T_M})|
  double decomposition_error() const;
  /// Smallest eigenvalue among P_M, Q_M, I - P_M, I - Q_M.
  double min_bound_eigenvalue() const;
};

struct SolverDiagnostics {
  sdp::Status status = sdp::Status::NumericalFailure;
  int iterations = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double max_violation = 0.0;
  double min_eigenvalue = 0.0;
  std::string message;
};

struct GmeResult {
  double E = 0.0;
  double raw_minimum = 0.0;
  WitnessCertificate certificate;
  SolverDiagnostics diagnostics;
};

class SolverFailure : public std::runtime_error {
public:
  explicit SolverFailure(SolverDiagnostics d);
  const SolverDiagnostics& diagnostics() const { return diag_; }

private:
  SolverDiagnostics diag_;
};

/// Solver settings used by default: the iteration aims two orders below the
/// certificate tolerances and settles for those if it stalls.
inline sdp::Options default_solver_options() {
  sdp::Options o;
  o.gap_tolerance = 1e-10;
  o.feasibility_tolerance = 1e-10;
  return o;
}

struct GmeOptions {
  Formulation formulation = Formulation::Hermitian;
  sdp::Options solver = default_solver_options();
  /// Permit 5 and 6 qubits.
  bool allow_large = false;
};

/// Raw minima above -1e-9 report E = 0.
inline constexpr double kClampThreshold = 1e-9;

/// Throws std::invalid_argument outside 2..4 qubits (2..6 with allow_large)
/// and SolverFailure when the solver does not certify an optimum.
GmeResult genuine_negativity(const DensityMatrix& rho, const GmeOptions& options = {});

/// |rho(000,111)| - sum over the three complementary pairs of
/// sqrt(rho(b,b) rho(~b,~b)).  Positive values prove genuine three-qubit
/// entanglement; for GHZ-diagonal states the converse holds too.
double ghz_criterion_value(const DensityMatrix& rho);

/// Minimum eigenvalue of rho^{T_M} at least -1e-9.
bool is_ppt(const DensityMatrix& rho, const Bipartition& part);

} // namespace gmedyn::gme
