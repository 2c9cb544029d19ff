#include "gmedyn/gme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace gmedyn::gme {

namespace {

using Entry = sdp::Entry<cplx>;

// Upper-triangle storage of coefficient a on unit (r, c).
Entry stored(std::uint32_t r, std::uint32_t c, cplx a) {
  if (r <= c) return {static_cast<int>(r), static_cast<int>(c), a};
  return {static_cast<int>(c), static_cast<int>(r), std::conj(a)};
}

void append_unit(std::vector<sdp::Term<cplx>>& terms, int p_block, int q_block, std::uint32_t mask,
                 std::uint32_t r, std::uint32_t c, cplx a, double sign) {
  terms.push_back({p_block, {stored(r, c, sign * a)}});
  const auto [tr, tc] = transposed_unit(r, c, mask);
  terms.push_back({q_block, {stored(tr, tc, sign * a)}});
}

SolverDiagnostics diagnostics_of(const auto& sol) {
  return {sol.status,       sol.iterations,    sol.primal_objective, sol.dual_objective,
          sol.duality_gap,  sol.max_violation, sol.min_eigenvalue,   sol.message};
}

} // namespace

std::vector<Bipartition> enumerate_bipartitions(int n_qubits) {
  if (n_qubits < 2 || n_qubits > kMaxQubits)
    throw std::invalid_argument("bipartitions need 2.." + std::to_string(kMaxQubits) + " qubits");
  std::vector<Bipartition> out;
  for (std::uint32_t m = 1; m < (1u << n_qubits) - 1; ++m) {
    Bipartition b(n_qubits, m);
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [](const Bipartition& x, const Bipartition& y) {
    const auto sx = x.smaller_side(), sy = y.smaller_side();
    const int px = std::popcount(sx), py = std::popcount(sy);
    if (px != py) return px < py;
    // Lexicographic in qubit labels: lowest qubit first.
    for (int k = 0; k < x.n_qubits(); ++k) {
      const bool bx = (sx >> k) & 1u, by = (sy >> k) & 1u;
      if (bx != by) return bx;
    }
    return false;
  });
  return out;
}

sdp::HermitianProblem build_ppt_mixture_sdp(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  const auto parts = enumerate_bipartitions(n);
  const auto d = static_cast<int>(rho.dim());
  const CMatrix id = CMatrix::Identity(d, d);

  sdp::HermitianProblem prob;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const int p = prob.add_block(d);
    const int q = prob.add_block(d);
    prob.set_upper_bound(p, id);
    prob.set_upper_bound(q, id);
    if (k == 0) {
      prob.set_objective(p, rho.matrix());
      prob.set_objective(q, hermitize(partial_transpose(rho.matrix(), parts[0].index_mask())));
    }
  }

  const double s = 1.0 / std::numbers::sqrt2;
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    const int p1 = static_cast<int>(2 * k), q1 = p1 + 1, p2 = p1 + 2, q2 = p1 + 3;
    const auto m1 = parts[k].index_mask(), m2 = parts[k + 1].index_mask();
    for (std::uint32_t r = 0; r < static_cast<std::uint32_t>(d); ++r)
      for (std::uint32_t c = r; c < static_cast<std::uint32_t>(d); ++c) {
        std::vector<cplx> coeffs;
        if (r == c) coeffs = {1.0};
        else coeffs = {cplx(s, 0.0), cplx(0.0, s)};
        for (const cplx a : coeffs) {
          std::vector<sdp::Term<cplx>> terms;
          append_unit(terms, p1, q1, m1, r, c, a, 1.0);
          append_unit(terms, p2, q2, m2, r, c, a, -1.0);
          prob.add_constraint(std::move(terms), 0.0);
        }
      }
  }
  return prob;
}

double WitnessCertificate::decomposition_error() const {
  double err = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k)
    err = std::max(err, max_abs_diff(witness, p[k] + partial_transpose(q[k], parts[k].index_mask())));
  return err;
}

double WitnessCertificate::min_bound_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (const CMatrix* m : {&p[k], &q[k]}) {
      const CMatrix id = CMatrix::Identity(m->rows(), m->cols());
      lo = std::min(lo, hermitian_eigenvalues(*m).minCoeff());
      lo = std::min(lo, hermitian_eigenvalues(CMatrix(id - *m)).minCoeff());
    }
  return lo;
}

SolverFailure::SolverFailure(SolverDiagnostics d)
    : std::runtime_error("PPT-mixture solve failed (" + std::string(sdp::to_string(d.status)) + "): " +
                         d.message),
      diag_(std::move(d)) {}

GmeResult genuine_negativity(const DensityMatrix& rho, const GmeOptions& options) {
  const int n = rho.n_qubits();
  const int cap = options.allow_large ? kMaxQubits : 4;
  if (n < 2 || n > cap)
    throw std::invalid_argument("genuine negativity supports 2.." + std::to_string(cap) +
                                " qubits, got " + std::to_string(n));

  const auto prob = build_ppt_mixture_sdp(rho);
  std::vector<CMatrix> blocks;
  SolverDiagnostics diag;
  if (options.formulation == Formulation::Hermitian) {
    const auto sol = sdp::solve(prob, options.solver);
    diag = diagnostics_of(sol);
    blocks = sol.primal;
  } else {
    const auto sol = sdp::solve(sdp::embed_problem(prob), options.solver);
    diag = diagnostics_of(sol);
    for (const auto& x : sol.primal) blocks.push_back(sdp::unembed(x));
  }
  if (diag.status != sdp::Status::Optimal) throw SolverFailure(diag);

  GmeResult res;
  res.diagnostics = diag;
  auto& cert = res.certificate;
  cert.parts = enumerate_bipartitions(n);
  for (std::size_t k = 0; k < cert.parts.size(); ++k) {
    cert.p.push_back(hermitize(blocks[2 * k]));
    cert.q.push_back(hermitize(blocks[2 * k + 1]));
  }
  cert.witness = hermitize(cert.p[0] + partial_transpose(cert.q[0], cert.parts[0].index_mask()));
  cert.value = (cert.witness * rho.matrix()).trace().real();
  res.raw_minimum = diag.primal_objective;
  res.E = res.raw_minimum > -kClampThreshold ? 0.0 : -res.raw_minimum;
  return res;
}

double ghz_criterion_value(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("GHZ criterion needs a three-qubit state");
  double side = 0.0;
  for (Eigen::Index b = 1; b <= 3; ++b) {
    const double x = std::max(0.0, rho(b, b).real());
    const double y = std::max(0.0, rho(7 - b, 7 - b).real());
    side += std::sqrt(x * y);
  }
  return std::abs(rho(0, 7)) - side;
}

bool is_ppt(const DensityMatrix& rho, const Bipartition& part) {
  return hermitian_eigenvalues(partial_transpose(rho, part)).minCoeff() >= -DensityMatrix::kPsdTol;
}

} // namespace gmedyn::gme
