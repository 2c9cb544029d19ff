// Benchmark input states: named multiqubit families, Haar-random pure
// states and weighted graph states.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gmedyn/random.hpp"
#include "gmedyn/tensor.hpp"

namespace gmedyn::states {

/// (|0...0> + |1...1>)/sqrt(2), n in 2..6.
PureState ghz(int n);

/// Uniform superposition of the n single-excitation strings, n in 2..6.
PureState w(int n);

enum class FourQubit { Dicke24, Singlet4, Cluster4, Chi4 };

PureState named_four_qubit(FourQubit which);

/// Parses "dicke24", "singlet4", "cluster4", "chi4".
FourQubit parse_four_qubit(std::string_view tag);

/// Complex Gaussian amplitudes (unit variance real and imaginary parts),
/// normalized.  n in 2..6.
PureState haar_random(int n, RandomStream& stream);

/// Pairwise interaction angles of a complete graph on n qubits.
class WeightedGraph {
public:
  /// phases in the order (0,1), (0,2), ..., (0,n-1), (1,2), ...; each in
  /// [0, 2 pi].
  WeightedGraph(int n_qubits, std::vector<double> phases);

  int n_qubits() const { return n_qubits_; }
  const std::vector<double>& phases() const { return phases_; }
  /// Angle on edge (k, l), k != l.
  double phase(int k, int l) const;

  static std::size_t edge_count(int n) { return static_cast<std::size_t>(n * (n - 1) / 2); }
  static std::size_t edge_index(int n, int k, int l);

private:
  int n_qubits_;
  std::vector<double> phases_;
};

/// prod_{k<l} exp(-i phi_kl |11><11|_{kl}) applied to |+>^n.
PureState weighted_graph_state(const WeightedGraph& g);

WeightedGraph random_weighted_graph(int n, RandomStream& stream);

} // namespace gmedyn::states
