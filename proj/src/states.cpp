#include "gmedyn/states.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gmedyn::states {

namespace {

void require_range(int n, const char* what) {
  if (n < 2 || n > kMaxQubits)
    throw std::invalid_argument(std::string(what) + ": qubit count must lie in 2.." +
                                std::to_string(kMaxQubits) + ", got " + std::to_string(n));
}

// "0011" -> 3; the first character is qubit 0.
Eigen::Index basis_index(std::string_view bits) {
  Eigen::Index idx = 0;
  for (char c : bits) idx = 2 * idx + (c == '1' ? 1 : 0);
  return idx;
}

} // namespace

PureState ghz(int n) {
  require_range(n, "ghz");
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
  CVector amp = CVector::Zero(dim);
  amp[0] = amp[dim - 1] = 1.0 / std::numbers::sqrt2;
  return PureState(n, std::move(amp));
}

PureState w(int n) {
  require_range(n, "w");
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
  CVector amp = CVector::Zero(dim);
  const double c = 1.0 / std::sqrt(static_cast<double>(n));
  for (int q = 0; q < n; ++q) amp[Eigen::Index{1} << q] = c;
  return PureState(n, std::move(amp));
}

PureState named_four_qubit(FourQubit which) {
  CVector amp = CVector::Zero(16);
  auto set = [&amp](std::string_view bits, double v) { amp[basis_index(bits)] = v; };
  switch (which) {
  case FourQubit::Dicke24:
    for (auto s : {"0011", "1100", "0101", "0110", "1001", "1010"}) set(s, 1.0);
    break;
  case FourQubit::Singlet4:
    set("0011", 1.0);
    set("1100", 1.0);
    for (auto s : {"0101", "0110", "1001", "1010"}) set(s, -0.5);
    break;
  case FourQubit::Cluster4:
    set("0000", 1.0);
    set("0011", 1.0);
    set("1100", 1.0);
    set("1111", -1.0);
    break;
  case FourQubit::Chi4:
    set("1111", std::numbers::sqrt2);
    for (auto s : {"0001", "0010", "0100", "1000"}) set(s, 1.0);
    break;
  }
  return PureState::normalized(4, std::move(amp));
}

FourQubit parse_four_qubit(std::string_view tag) {
  if (tag == "dicke24") return FourQubit::Dicke24;
  if (tag == "singlet4") return FourQubit::Singlet4;
  if (tag == "cluster4") return FourQubit::Cluster4;
  if (tag == "chi4") return FourQubit::Chi4;
  throw std::invalid_argument("unknown four-qubit state tag '" + std::string(tag) + "'");
}

PureState haar_random(int n, RandomStream& stream) {
  require_range(n, "haar_random");
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
  CVector amp(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = stream.normal();
    const double im = stream.normal();
    amp[i] = cplx(re, im);
  }
  return PureState::normalized(n, std::move(amp));
}

// --- weighted graph states ------------------------------------------------

WeightedGraph::WeightedGraph(int n_qubits, std::vector<double> phases)
    : n_qubits_(n_qubits), phases_(std::move(phases)) {
  require_range(n_qubits, "WeightedGraph");
  if (phases_.size() != edge_count(n_qubits))
    throw std::invalid_argument("weighted graph on " + std::to_string(n_qubits) + " qubits needs " +
                                std::to_string(edge_count(n_qubits)) + " phases");
  for (double phi : phases_)
    if (!(phi >= 0.0 && phi <= 2.0 * std::numbers::pi))
      throw std::invalid_argument("graph phases must lie in [0, 2 pi]");
}

std::size_t WeightedGraph::edge_index(int n, int k, int l) {
  if (k > l) std::swap(k, l);
  if (k < 0 || l >= n || k == l) throw std::invalid_argument("invalid graph edge");
  // Edges before row k: sum_{r<k} (n-1-r).
  const int before = k * (2 * n - k - 1) / 2;
  return static_cast<std::size_t>(before + (l - k - 1));
}

double WeightedGraph::phase(int k, int l) const {
  return phases_[edge_index(n_qubits_, k, l)];
}

PureState weighted_graph_state(const WeightedGraph& g) {
  const int n = g.n_qubits();
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
  const double mag = 1.0 / std::sqrt(static_cast<double>(dim));
  CVector amp(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double phase = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!((b >> (n - 1 - k)) & 1)) continue;
      for (int l = k + 1; l < n; ++l)
        if ((b >> (n - 1 - l)) & 1) phase += g.phase(k, l);
    }
    amp[b] = std::polar(mag, -phase);
  }
  return PureState::normalized(n, std::move(amp));
}

WeightedGraph random_weighted_graph(int n, RandomStream& stream) {
  require_range(n, "random_weighted_graph");
  std::vector<double> phases(WeightedGraph::edge_count(n));
  for (auto& phi : phases) phi = stream.uniform(0.0, 2.0 * std::numbers::pi);
  return WeightedGraph(n, std::move(phases));
}

} // namespace gmedyn::states
