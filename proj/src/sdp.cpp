#include "gmedyn/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gmedyn::sdp {

namespace {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline double conj_(double x) { return x; }
inline std::complex<double> conj_(std::complex<double> x) { return std::conj(x); }
inline double imag_(double) { return 0.0; }
inline double imag_(std::complex<double> x) { return x.imag(); }

template <class S>
double inner(const Matrix<S>& a, const Matrix<S>& b) {
  return std::real((a.conjugate().cwiseProduct(b)).sum());
}

template <class S>
Matrix<S> herm(const Matrix<S>& a) {
  return S(0.5) * (a + a.adjoint());
}

template <class S>
Matrix<S> identity(int n) {
  return Matrix<S>::Identity(n, n);
}

// Hermitian completion of the stored upper-triangle entries.
template <class S>
struct FullEntry {
  int row;
  int col;
  S value;
};

template <class S>
std::vector<FullEntry<S>> expand(const std::vector<Entry<S>>& entries) {
  std::vector<FullEntry<S>> out;
  out.reserve(2 * entries.size());
  for (const auto& e : entries) {
    if (e.row == e.col) {
      out.push_back({e.row, e.col, S(std::real(e.value))});
    } else {
      out.push_back({e.row, e.col, e.value});
      out.push_back({e.col, e.row, conj_(e.value)});
    }
  }
  return out;
}

template <class S>
struct BlockTerm {
  int constraint;
  std::vector<FullEntry<S>> entries;
};

template <class S>
struct Compiled {
  int m = 0;
  int blocks = 0;
  std::vector<int> dim;
  std::vector<Matrix<S>> c;
  std::vector<std::optional<Matrix<S>>> upper;
  RVec b;
  std::vector<std::vector<BlockTerm<S>>> by_block; // sorted by constraint id

  explicit Compiled(const Problem<S>& p) {
    m = p.constraint_count();
    blocks = p.block_count();
    b.resize(m);
    by_block.resize(static_cast<std::size_t>(blocks));
    for (int j = 0; j < blocks; ++j) {
      dim.push_back(p.block_dim(j));
      c.push_back(p.objective(j));
      upper.push_back(p.upper_bound(j));
    }
    for (int i = 0; i < m; ++i) {
      const auto& con = p.constraint(i);
      b[i] = con.rhs;
      for (const auto& t : con.terms) {
        auto& list = by_block[static_cast<std::size_t>(t.block)];
        auto full = expand(t.entries);
        if (!list.empty() && list.back().constraint == i) {
          list.back().entries.insert(list.back().entries.end(), full.begin(), full.end());
        } else {
          list.push_back({i, std::move(full)});
        }
      }
    }
  }

  bool bounded(int j) const { return upper[static_cast<std::size_t>(j)].has_value(); }

  // A(X)
  RVec apply(const std::vector<Matrix<S>>& x) const {
    RVec out = RVec::Zero(m);
    for (int j = 0; j < blocks; ++j)
      for (const auto& t : by_block[static_cast<std::size_t>(j)]) {
        double v = 0.0;
        for (const auto& e : t.entries) v += std::real(conj_(e.value) * x[static_cast<std::size_t>(j)](e.row, e.col));
        out[t.constraint] += v;
      }
    return out;
  }

  // (A^T y)_j
  Matrix<S> adjoint(const RVec& y, int j) const {
    const int n = dim[static_cast<std::size_t>(j)];
    Matrix<S> out = Matrix<S>::Zero(n, n);
    for (const auto& t : by_block[static_cast<std::size_t>(j)]) {
      const double yi = y[t.constraint];
      if (yi == 0.0) continue;
      for (const auto& e : t.entries) out(e.row, e.col) += yi * e.value;
    }
    return out;
  }
};

// Nesterov-Todd scaling of a cone pair: G^H Z G = G^-1 X G^-H = diag(d),
// W = G G^H satisfies W Z W = X.
template <class S>
struct Scaling {
  Matrix<S> g;
  Matrix<S> g_inv;
  RVec d;
  Matrix<S> chol_x_inv; // L_X^-1, for step lengths
  Matrix<S> chol_z_inv;
};

template <class S>
bool nt_scaling(const Matrix<S>& x, const Matrix<S>& z, Scaling<S>& out) {
  Eigen::LLT<Matrix<S>> lx(x), lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  const Matrix<S> l_x = lx.matrixL();
  const Matrix<S> l_z = lz.matrixL();
  const Eigen::Index n = x.rows();
  out.chol_x_inv = l_x.template triangularView<Eigen::Lower>().solve(Matrix<S>::Identity(n, n));
  out.chol_z_inv = l_z.template triangularView<Eigen::Lower>().solve(Matrix<S>::Identity(n, n));
  Eigen::JacobiSVD<Matrix<S>> svd(l_z.adjoint() * l_x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec sv = svd.singularValues();
  if (!(sv.minCoeff() > 0.0) || !sv.allFinite()) return false;
  const RVec root = sv.cwiseSqrt();
  out.d = sv;
  out.g = l_x * svd.matrixV() * root.cwiseInverse().asDiagonal();
  out.g_inv = root.asDiagonal() * svd.matrixV().adjoint() * out.chol_x_inv;
  return true;
}

// Largest alpha with L^-1 (M + alpha dM) L^-H >= 0, given L^-1.
template <class S>
double max_step(const Matrix<S>& chol_inv, const Matrix<S>& dm) {
  const Matrix<S> scaled = herm<S>(chol_inv * dm * chol_inv.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix<S>> es(scaled, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double min_eigenvalue_of(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(herm<double>(m), Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double min_eigenvalue_of(const Eigen::MatrixXcd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm<std::complex<double>>(m),
                                                         Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

// Per-block data for the reduced Newton operator X-part:
//   H(V) = T (Gamma o (T^H V T)) T^H
// Unbounded blocks: T = G, Gamma = 1.  Bounded blocks: T T^H = W_X,
// T Lambda T^H = W_S, Gamma = lambda lambda' / (1 + lambda lambda').
template <class S>
struct BlockOperator {
  Matrix<S> t;
  Matrix<S> t_inv;
  RMat gamma;
  RMat inv1p; // 1 / (1 + lambda lambda'), bounded blocks only
};

template <class S>
class Solver {
public:
  Solver(const Problem<S>& problem, const Options& opt) : p_(problem), opt_(opt) {}

  Solution<S> run();

private:
  struct Direction {
    std::vector<Matrix<S>> dx, ds, dz, dzs;
    RVec dy;
  };

  void residuals();
  bool build_scalings();
  bool build_schur();
  Matrix<S> rc(const Scaling<S>& sc, double sigma_mu, const Matrix<S>* corr) const;
  Direction direction(const std::vector<Matrix<S>>& rc_x, const std::vector<Matrix<S>>& rc_s) const;
  void step_lengths(const Direction& d, double& ap, double& ad) const;
  double complementarity() const;
  double complementarity_after(const Direction& d, double ap, double ad) const;
  Solution<S> finish(Status status, std::string message, int iterations);
  Solution<S> breakdown(const std::string& why, int iterations, double relgap);

  Compiled<S> p_;
  Options opt_;
  int order_ = 0; // sum of cone dimensions

  std::vector<Matrix<S>> x_, s_, z_, zs_;
  RVec y_;

  // residuals
  RVec rp_;
  std::vector<Matrix<S>> ru_, rd_;
  double pobj_ = 0, dobj_ = 0, pinf_ = 0, dinf_ = 0;

  std::vector<Scaling<S>> sx_, ss_;
  std::vector<BlockOperator<S>> op_;
  RMat schur_m_;
  Eigen::LLT<RMat> schur_;
  std::vector<IterationRecord> history_;

  // Best iterate so far that meets the acceptable tolerances; a breakdown
  // falls back to it.
  struct Snapshot {
    std::vector<Matrix<S>> x, s, z, zs;
    RVec y, rp;
    double pobj, dobj, pinf, dinf, relgap, score;
    int iteration;
  };
  std::optional<Snapshot> best_;
  void remember(double relgap, int iteration);
};

template <class S>
void Solver<S>::residuals() {
  const RVec ax = p_.apply(x_);
  rp_ = p_.b - ax;
  pobj_ = 0.0;
  dobj_ = p_.b.dot(y_);
  double ru_norm = 0.0, rd_norm = 0.0, u_norm = 0.0, c_norm = 0.0;
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    Matrix<S> rd = p_.c[jj] - p_.adjoint(y_, j) - z_[jj];
    if (p_.bounded(j)) {
      const auto& u = *p_.upper[jj];
      rd += zs_[jj];
      ru_[jj] = u - x_[jj] - s_[jj];
      ru_norm += ru_[jj].squaredNorm();
      u_norm += u.squaredNorm();
      dobj_ -= inner<S>(u, zs_[jj]);
    }
    rd_[jj] = herm<S>(rd);
    rd_norm += rd_[jj].squaredNorm();
    c_norm += p_.c[jj].squaredNorm();
    pobj_ += inner<S>(p_.c[jj], x_[jj]);
  }
  pinf_ = std::max(rp_.norm() / (1.0 + p_.b.norm()), std::sqrt(ru_norm) / (1.0 + std::sqrt(u_norm)));
  dinf_ = std::sqrt(rd_norm) / (1.0 + std::sqrt(c_norm));
}

template <class S>
bool Solver<S>::build_scalings() {
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    if (!nt_scaling<S>(x_[jj], z_[jj], sx_[jj])) return false;
    auto& op = op_[jj];
    const int n = p_.dim[jj];
    if (!p_.bounded(j)) {
      op.t = sx_[jj].g;
      op.t_inv = sx_[jj].g_inv;
      op.gamma = RMat::Ones(n, n);
      continue;
    }
    if (!nt_scaling<S>(s_[jj], zs_[jj], ss_[jj])) return false;
    // K = G_X^-1 G_S = U s V^H, so G_X^-1 W_S G_X^-H = U s^2 U^H.
    Eigen::JacobiSVD<Matrix<S>> svd(sx_[jj].g_inv * ss_[jj].g, Eigen::ComputeFullU);
    const RVec lambda = svd.singularValues().cwiseAbs2();
    op.t = sx_[jj].g * svd.matrixU();
    op.t_inv = svd.matrixU().adjoint() * sx_[jj].g_inv;
    op.gamma.resize(n, n);
    op.inv1p.resize(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double ll = lambda[a] * lambda[b];
        op.inv1p(a, b) = 1.0 / (1.0 + ll);
        op.gamma(a, b) = ll / (1.0 + ll);
      }
  }
  return true;
}

// M_ik = sum_j <A_ij, H_j(A_kj)>.  For matrix units the transformed
// coefficients factor through Omega = Arow Gamma Arow^H with
// Arow[(p, r), u] = T(p, u) conj(T(r, u)).
template <class S>
bool Solver<S>::build_schur() {
  if (p_.m == 0) return true;
  RMat m = RMat::Zero(p_.m, p_.m);
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const auto& terms = p_.by_block[jj];
    if (terms.empty()) continue;
    const int n = p_.dim[jj];
    const auto& t = op_[jj].t;
    Matrix<S> arow(n * n, n);
    for (int pp = 0; pp < n; ++pp)
      for (int r = 0; r < n; ++r)
        arow.row(pp * n + r) = t.row(pp).cwiseProduct(t.row(r).conjugate());
    const Matrix<S> ag = arow * op_[jj].gamma.template cast<S>();
    const Matrix<S> omega = ag * arow.adjoint();

    for (std::size_t a = 0; a < terms.size(); ++a) {
      const auto& ta = terms[a];
      for (std::size_t c = a; c < terms.size(); ++c) {
        const auto& tc = terms[c];
        double v = 0.0;
        for (const auto& e : ta.entries)
          for (const auto& f : tc.entries)
            v += std::real(conj_(e.value) * f.value * omega(e.row * n + f.row, e.col * n + f.col));
        m(ta.constraint, tc.constraint) += v;
        if (c != a) m(tc.constraint, ta.constraint) += v;
      }
    }
  }
  m = 0.5 * (m + m.transpose());
  schur_m_ = m;
  schur_.compute(m);
  if (schur_.info() != Eigen::Success) {
    const double shift = 1e-13 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    schur_.compute(m + shift * RMat::Identity(p_.m, p_.m));
    if (schur_.info() != Eigen::Success) return false;
  }
  return true;
}

// Right-hand side of dX + W dZ W = G U G^H where U solves the scaled
// Lyapunov equation (D U + U D)/2 = sigma mu I - D^2 - corr.
template <class S>
Matrix<S> Solver<S>::rc(const Scaling<S>& sc, double sigma_mu, const Matrix<S>* corr) const {
  const auto n = sc.d.size();
  Matrix<S> u(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      S r = (a == b) ? S(sigma_mu - sc.d[a] * sc.d[a]) : S(0.0);
      if (corr) r -= (*corr)(a, b);
      u(a, b) = S(2.0) * r / (sc.d[a] + sc.d[b]);
    }
  return herm<S>(sc.g * u * sc.g.adjoint());
}

template <class S>
typename Solver<S>::Direction Solver<S>::direction(const std::vector<Matrix<S>>& rc_x,
                                                   const std::vector<Matrix<S>>& rc_s) const {
  const auto nb = static_cast<std::size_t>(p_.blocks);
  Direction d;
  d.dx.resize(nb);
  d.ds.resize(nb);
  d.dz.resize(nb);
  d.dzs.resize(nb);
  std::vector<Matrix<S>> g0t(nb);

  for (std::size_t j = 0; j < nb; ++j) {
    const auto& op = op_[j];
    const Matrix<S> w = op.t * op.t.adjoint();
    const Matrix<S> wrw = w * rd_[j] * w;
    if (!p_.bounded(static_cast<int>(j))) {
      d.dx[j] = rc_x[j] - wrw;
    } else {
      const Matrix<S> g0 = rc_x[j] + rc_s[j] - wrw - ru_[j];
      g0t[j] = op.t_inv * g0 * op.t_inv.adjoint();
      const Matrix<S> h0 = g0t[j].cwiseProduct(op.inv1p.template cast<S>());
      d.dx[j] = rc_x[j] - wrw - op.t * h0 * op.t.adjoint();
    }
  }

  if (p_.m > 0) {
    const RVec rhs = rp_ - p_.apply(d.dx);
    d.dy = schur_.solve(rhs);
    // One step of refinement; the Schur matrix is badly conditioned near
    // the optimum.
    d.dy += schur_.solve(RVec(rhs - schur_m_ * d.dy));
  } else {
    d.dy = RVec::Zero(0);
  }

  for (std::size_t j = 0; j < nb; ++j) {
    const auto& op = op_[j];
    const int jj = static_cast<int>(j);
    const Matrix<S> v = p_.m > 0 ? p_.adjoint(d.dy, jj) : Matrix<S>::Zero(p_.dim[j], p_.dim[j]);
    const Matrix<S> vt = op.t.adjoint() * v * op.t;
    d.dx[j] = herm<S>(d.dx[j] + op.t * vt.cwiseProduct(op.gamma.template cast<S>()) * op.t.adjoint());
    if (p_.bounded(jj)) {
      const Matrix<S> inner_t = (g0t[j] + vt).cwiseProduct(op.inv1p.template cast<S>());
      d.dzs[j] = herm<S>(op.t_inv.adjoint() * inner_t * op.t_inv);
      d.ds[j] = herm<S>(ru_[j] - d.dx[j]);
      d.dz[j] = herm<S>(rd_[j] - v + d.dzs[j]);
    } else {
      d.dz[j] = herm<S>(rd_[j] - v);
    }
  }
  return d;
}

template <class S>
void Solver<S>::step_lengths(const Direction& d, double& ap, double& ad) const {
  ap = std::numeric_limits<double>::infinity();
  ad = std::numeric_limits<double>::infinity();
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    ap = std::min(ap, max_step<S>(sx_[jj].chol_x_inv, d.dx[jj]));
    ad = std::min(ad, max_step<S>(sx_[jj].chol_z_inv, d.dz[jj]));
    if (p_.bounded(j)) {
      ap = std::min(ap, max_step<S>(ss_[jj].chol_x_inv, d.ds[jj]));
      ad = std::min(ad, max_step<S>(ss_[jj].chol_z_inv, d.dzs[jj]));
    }
  }
}

template <class S>
double Solver<S>::complementarity() const {
  double sum = 0.0;
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    sum += inner<S>(x_[jj], z_[jj]);
    if (p_.bounded(j)) sum += inner<S>(s_[jj], zs_[jj]);
  }
  return sum;
}

template <class S>
double Solver<S>::complementarity_after(const Direction& d, double ap, double ad) const {
  double sum = 0.0;
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    sum += inner<S>(Matrix<S>(x_[jj] + ap * d.dx[jj]), Matrix<S>(z_[jj] + ad * d.dz[jj]));
    if (p_.bounded(j))
      sum += inner<S>(Matrix<S>(s_[jj] + ap * d.ds[jj]), Matrix<S>(zs_[jj] + ad * d.dzs[jj]));
  }
  return sum;
}

template <class S>
Solution<S> Solver<S>::finish(Status status, std::string message, int iterations) {
  Solution<S> sol;
  sol.status = status;
  sol.message = std::move(message);
  sol.iterations = iterations;
  sol.primal = x_;
  sol.dual_slack = z_;
  sol.multipliers = y_;
  sol.primal_objective = pobj_;
  sol.dual_objective = dobj_;
  sol.duality_gap = std::abs(pobj_ - dobj_);
  sol.history = std::move(history_);

  double violation = rp_.size() ? rp_.cwiseAbs().maxCoeff() : 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (int j = 0; j < p_.blocks; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    min_eig = std::min(min_eig, min_eigenvalue_of(x_[jj]));
    if (p_.bounded(j)) {
      const double slack = min_eigenvalue_of(Matrix<S>(*p_.upper[jj] - x_[jj]));
      violation = std::max(violation, -slack);
    }
  }
  sol.max_violation = std::max(0.0, violation);
  sol.min_eigenvalue = min_eig;

  if (sol.status == Status::Optimal) {
    std::ostringstream why;
    if (sol.duality_gap > 1e-7) why << " duality gap " << sol.duality_gap;
    if (sol.max_violation > 1e-8) why << " violation " << sol.max_violation;
    if (sol.min_eigenvalue < -1e-8) why << " min eigenvalue " << sol.min_eigenvalue;
    if (!why.str().empty()) {
      sol.status = Status::NumericalFailure;
      sol.message = "converged but certificate check failed:" + why.str();
    }
  }
  return sol;
}

template <class S>
void Solver<S>::remember(double relgap, int iteration) {
  if (relgap > opt_.acceptable_gap || pinf_ > opt_.acceptable_feasibility || dinf_ > opt_.acceptable_feasibility)
    return;
  const double score = std::max(relgap / opt_.acceptable_gap, std::max(pinf_, dinf_) / opt_.acceptable_feasibility);
  if (best_ && best_->score <= score) return;
  best_ = Snapshot{x_, s_, z_, zs_, y_, rp_, pobj_, dobj_, pinf_, dinf_, relgap, score, iteration};
}

template <class S>
Solution<S> Solver<S>::breakdown(const std::string& why, int iterations, double relgap) {
  remember(relgap, iterations);
  if (!best_) return finish(Status::NumericalFailure, why, iterations);
  x_ = std::move(best_->x);
  s_ = std::move(best_->s);
  z_ = std::move(best_->z);
  zs_ = std::move(best_->zs);
  y_ = std::move(best_->y);
  rp_ = std::move(best_->rp);
  pobj_ = best_->pobj;
  dobj_ = best_->dobj;
  pinf_ = best_->pinf;
  dinf_ = best_->dinf;
  std::ostringstream msg;
  msg << "converged to acceptable accuracy at iteration " << best_->iteration << " (" << why << ")";
  return finish(Status::Optimal, msg.str(), iterations);
}

template <class S>
Solution<S> Solver<S>::run() {
  const auto nb = static_cast<std::size_t>(p_.blocks);
  x_.resize(nb);
  s_.resize(nb);
  z_.resize(nb);
  zs_.resize(nb);
  ru_.resize(nb);
  rd_.resize(nb);
  sx_.resize(nb);
  ss_.resize(nb);
  op_.resize(nb);
  y_ = RVec::Zero(p_.m);

  // Bounded blocks start at the centre of the box with a feasible dual
  // (Z = C + zeta I, Z_S = zeta I); unbounded blocks at identities.
  for (std::size_t j = 0; j < nb; ++j) {
    const int n = p_.dim[j];
    const double zeta = 1.0 + p_.c[j].norm();
    order_ += n;
    if (p_.bounded(static_cast<int>(j))) {
      order_ += n;
      x_[j] = S(0.5) * *p_.upper[j];
      s_[j] = S(0.5) * *p_.upper[j];
      zs_[j] = zeta * identity<S>(n);
      z_[j] = herm<S>(p_.c[j] + zeta * identity<S>(n));
    } else {
      x_[j] = identity<S>(n);
      z_[j] = zeta * identity<S>(n);
    }
  }

  for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
    residuals();
    const double comp = complementarity();
    const double mu = comp / order_;
    const double scale = 1.0 + std::abs(pobj_) + std::abs(dobj_);
    const double relgap = std::max(std::abs(pobj_ - dobj_), std::abs(comp)) / scale;

    IterationRecord rec{iter, pobj_, dobj_, pinf_, dinf_, mu, 0.0, 0.0};
    if (!std::isfinite(pobj_) || !std::isfinite(dobj_) || !std::isfinite(mu)) {
      history_.push_back(rec);
      return finish(Status::NumericalFailure, "non-finite iterate", iter);
    }
    if (relgap <= opt_.gap_tolerance && pinf_ <= opt_.feasibility_tolerance &&
        dinf_ <= opt_.feasibility_tolerance) {
      history_.push_back(rec);
      return finish(Status::Optimal, "converged", iter);
    }
    if (dobj_ > opt_.infeasibility_bound && dinf_ <= 1e3 * opt_.feasibility_tolerance) {
      history_.push_back(rec);
      return finish(Status::Infeasible, "dual objective diverges: primal infeasible", iter);
    }
    if (pobj_ < -opt_.infeasibility_bound && pinf_ <= 1e3 * opt_.feasibility_tolerance) {
      history_.push_back(rec);
      return finish(Status::Infeasible, "primal objective diverges: dual infeasible", iter);
    }
    remember(relgap, iter);
    if (iter == opt_.max_iterations) {
      history_.push_back(rec);
      return breakdown("iteration limit reached", iter, relgap);
    }

    if (!build_scalings()) {
      history_.push_back(rec);
      return breakdown("iterate left the cone interior", iter, relgap);
    }
    if (!build_schur()) {
      history_.push_back(rec);
      return breakdown("Schur complement is not positive definite", iter, relgap);
    }

    // Predictor.
    std::vector<Matrix<S>> rc_x(nb), rc_s(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      rc_x[j] = rc(sx_[j], 0.0, nullptr);
      if (p_.bounded(static_cast<int>(j))) rc_s[j] = rc(ss_[j], 0.0, nullptr);
    }
    const Direction aff = direction(rc_x, rc_s);
    double ap = 0, ad = 0;
    step_lengths(aff, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    const double mu_aff = complementarity_after(aff, ap, ad) / order_;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term of the affine step.
    for (std::size_t j = 0; j < nb; ++j) {
      auto corr = [&](const Scaling<S>& sc, const Matrix<S>& dx, const Matrix<S>& dz) {
        const Matrix<S> sdx = sc.g_inv * dx * sc.g_inv.adjoint();
        const Matrix<S> sdz = sc.g.adjoint() * dz * sc.g;
        return Matrix<S>(S(0.5) * (sdx * sdz + sdz * sdx));
      };
      const Matrix<S> cx = corr(sx_[j], aff.dx[j], aff.dz[j]);
      rc_x[j] = rc(sx_[j], sigma * mu, &cx);
      if (p_.bounded(static_cast<int>(j))) {
        const Matrix<S> cs = corr(ss_[j], aff.ds[j], aff.dzs[j]);
        rc_s[j] = rc(ss_[j], sigma * mu, &cs);
      }
    }
    const Direction dir = direction(rc_x, rc_s);
    step_lengths(dir, ap, ad);
    ap = std::min(1.0, opt_.step_fraction * ap);
    ad = std::min(1.0, opt_.step_fraction * ad);
    rec.primal_step = ap;
    rec.dual_step = ad;
    history_.push_back(rec);

    for (std::size_t j = 0; j < nb; ++j) {
      x_[j] = herm<S>(x_[j] + ap * dir.dx[j]);
      z_[j] = herm<S>(z_[j] + ad * dir.dz[j]);
      if (p_.bounded(static_cast<int>(j))) {
        s_[j] = herm<S>(s_[j] + ap * dir.ds[j]);
        zs_[j] = herm<S>(zs_[j] + ad * dir.dzs[j]);
      }
    }
    if (p_.m > 0) y_ += ad * dir.dy;
  }
  return finish(Status::NumericalFailure, "iteration limit reached", opt_.max_iterations);
}

} // namespace

// --- Problem --------------------------------------------------------------

template <class S>
int Problem<S>::add_block(int dim) {
  if (dim < 1) throw std::invalid_argument("SDP block dimension must be positive");
  dims_.push_back(dim);
  objective_.push_back(Matrix<S>::Zero(dim, dim));
  upper_.emplace_back();
  return static_cast<int>(dims_.size()) - 1;
}

template <class S>
void Problem<S>::set_objective(int block, Matrix<S> c) {
  const auto j = static_cast<std::size_t>(block);
  if (block < 0 || j >= dims_.size()) throw std::invalid_argument("objective: unknown block");
  if (c.rows() != dims_[j] || c.cols() != dims_[j])
    throw std::invalid_argument("objective: dimension mismatch");
  objective_[j] = std::move(c);
}

template <class S>
void Problem<S>::set_upper_bound(int block, Matrix<S> upper) {
  const auto j = static_cast<std::size_t>(block);
  if (block < 0 || j >= dims_.size()) throw std::invalid_argument("upper bound: unknown block");
  if (upper.rows() != dims_[j] || upper.cols() != dims_[j])
    throw std::invalid_argument("upper bound: dimension mismatch");
  upper_[j] = std::move(upper);
}

template <class S>
int Problem<S>::add_constraint(std::vector<Term<S>> terms, double rhs) {
  constraints_.push_back({std::move(terms), rhs});
  return static_cast<int>(constraints_.size()) - 1;
}

template <class S>
int Problem<S>::cone_count() const {
  int n = block_count();
  for (const auto& u : upper_)
    if (u) ++n;
  return n;
}

template <class S>
void Problem<S>::validate() const {
  if (dims_.empty()) throw std::invalid_argument("SDP has no blocks");
  auto hermitian = [](const Matrix<S>& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  };
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (!objective_[j].allFinite() || !hermitian(objective_[j]))
      throw std::invalid_argument("objective of block " + std::to_string(j) + " is not Hermitian");
    if (upper_[j]) {
      if (!upper_[j]->allFinite() || !hermitian(*upper_[j]))
        throw std::invalid_argument("upper bound of block " + std::to_string(j) + " is not Hermitian");
      Eigen::LLT<Matrix<S>> llt(*upper_[j]);
      if (llt.info() != Eigen::Success)
        throw std::invalid_argument("upper bound of block " + std::to_string(j) +
                                    " is not positive definite");
    }
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = constraints_[i];
    if (!std::isfinite(c.rhs))
      throw std::invalid_argument("constraint " + std::to_string(i) + " has a non-finite rhs");
    if (c.terms.empty()) throw std::invalid_argument("constraint " + std::to_string(i) + " is empty");
    for (const auto& t : c.terms) {
      if (t.block < 0 || static_cast<std::size_t>(t.block) >= dims_.size())
        throw std::invalid_argument("constraint " + std::to_string(i) + " references unknown block");
      const int n = dims_[static_cast<std::size_t>(t.block)];
      for (const auto& e : t.entries) {
        if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n || e.row > e.col)
          throw std::invalid_argument("constraint " + std::to_string(i) +
                                      " has an entry outside the upper triangle");
        if (e.row == e.col && imag_(e.value) != 0.0)
          throw std::invalid_argument("constraint " + std::to_string(i) +
                                      " has a complex diagonal entry");
        if (!std::isfinite(std::abs(e.value)))
          throw std::invalid_argument("constraint " + std::to_string(i) + " has a non-finite entry");
      }
    }
  }
}

const char* to_string(Status s) {
  switch (s) {
  case Status::Optimal: return "optimal";
  case Status::Infeasible: return "infeasible";
  case Status::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

template <class S>
Solution<S> solve(const Problem<S>& problem, const Options& options) {
  problem.validate();
  Solver<S> solver(problem, options);
  return solver.run();
}

template class Problem<double>;
template class Problem<std::complex<double>>;
template Solution<double> solve(const Problem<double>&, const Options&);
template Solution<std::complex<double>> solve(const Problem<std::complex<double>>&, const Options&);

// --- real embedding -------------------------------------------------------

Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& h) {
  const Eigen::Index d = h.rows();
  Eigen::MatrixXd s(2 * d, 2 * d);
  s.topLeftCorner(d, d) = h.real();
  s.bottomRightCorner(d, d) = h.real();
  s.topRightCorner(d, d) = -h.imag();
  s.bottomLeftCorner(d, d) = h.imag();
  return s;
}

Eigen::MatrixXcd unembed(const Eigen::MatrixXd& s) {
  const Eigen::Index d = s.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (s.topLeftCorner(d, d) + s.bottomRightCorner(d, d));
  const Eigen::MatrixXd im = 0.5 * (s.bottomLeftCorner(d, d) - s.topRightCorner(d, d));
  Eigen::MatrixXcd h(d, d);
  h.real() = re;
  h.imag() = im;
  return herm<std::complex<double>>(h);
}

RealProblem embed_problem(const HermitianProblem& problem) {
  RealProblem out;
  for (int j = 0; j < problem.block_count(); ++j) {
    const int id = out.add_block(2 * problem.block_dim(j));
    out.set_objective(id, 0.5 * embed_hermitian(problem.objective(j)));
    if (const auto& u = problem.upper_bound(j)) out.set_upper_bound(id, embed_hermitian(*u));
  }
  for (const auto& c : problem.constraints()) {
    std::vector<Term<double>> terms;
    for (const auto& t : c.terms) {
      const int d = problem.block_dim(t.block);
      Term<double> rt{t.block, {}};
      // Upper triangle of embed(A)/2 for the Hermitian completion of A.
      for (const auto& e : t.entries) {
        const double re = 0.5 * e.value.real();
        const double im = 0.5 * e.value.imag();
        const int p = e.row, q = e.col;
        rt.entries.push_back({p, q, re});
        rt.entries.push_back({p + d, q + d, re});
        if (p == q) continue;
        // Entry (p, q+d) = -Im a, (q, p+d) = -Im conj(a) = +Im a.
        rt.entries.push_back({p, q + d, -im});
        rt.entries.push_back({q, p + d, im});
      }
      terms.push_back(std::move(rt));
    }
    out.add_constraint(std::move(terms), c.rhs);
  }
  return out;
}

void write_sdpa(const RealProblem& problem, std::ostream& out) {
  // Block layout: every variable block, then one slack block per bound.
  std::vector<int> slack_of(static_cast<std::size_t>(problem.block_count()), -1);
  std::vector<int> sizes;
  for (int j = 0; j < problem.block_count(); ++j) sizes.push_back(problem.block_dim(j));
  for (int j = 0; j < problem.block_count(); ++j)
    if (problem.upper_bound(j)) {
      slack_of[static_cast<std::size_t>(j)] = static_cast<int>(sizes.size());
      sizes.push_back(problem.block_dim(j));
    }

  struct Row {
    double rhs;
    std::vector<std::tuple<int, int, int, double>> entries; // block, row, col (1-based)
  };
  std::vector<Row> rows;
  for (const auto& c : problem.constraints()) {
    Row r{c.rhs, {}};
    for (const auto& t : c.terms)
      for (const auto& e : t.entries)
        // <A, X> counts an off-diagonal stored entry twice.
        r.entries.emplace_back(t.block + 1, e.row + 1, e.col + 1, e.value);
    rows.push_back(std::move(r));
  }
  for (int j = 0; j < problem.block_count(); ++j) {
    const auto& u = problem.upper_bound(j);
    if (!u) continue;
    const int n = problem.block_dim(j);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const double w = a == b ? 1.0 : 0.5;
        Row r{(*u)(a, b), {}};
        r.entries.emplace_back(j + 1, a + 1, b + 1, w);
        r.entries.emplace_back(slack_of[static_cast<std::size_t>(j)] + 1, a + 1, b + 1, w);
        rows.push_back(std::move(r));
      }
  }

  out << "* primal-dual block SDP; SDPA dual form max <F0,Y> s.t. <Fi,Y> = ci\n";
  out << rows.size() << " = mDIM\n" << sizes.size() << " = nBLOCK\n";
  for (std::size_t k = 0; k < sizes.size(); ++k) out << (k ? " " : "") << sizes[k];
  out << " = bLOCKsTRUCT\n";
  out.precision(17);
  for (std::size_t k = 0; k < rows.size(); ++k) out << (k ? " " : "") << rows[k].rhs;
  out << "\n";
  for (int j = 0; j < problem.block_count(); ++j) {
    const auto& c = problem.objective(j);
    for (int a = 0; a < c.rows(); ++a)
      for (int b = a; b < c.cols(); ++b)
        if (c(a, b) != 0.0) out << 0 << " " << j + 1 << " " << a + 1 << " " << b + 1 << " " << -c(a, b) << "\n";
  }
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (const auto& [blk, r, c, v] : rows[k].entries)
      out << k + 1 << " " << blk << " " << r << " " << c << " " << v << "\n";
}

} // namespace gmedyn::sdp
