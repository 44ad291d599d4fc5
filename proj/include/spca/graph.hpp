#pragma once

// Observation graphs over [n] with loops. Edge {i,j} means entries (i,j) and
// (j,i) of the matrix are observed; loop {i,i} means the diagonal entry is.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

using Edge = std::pair<std::size_t, std::size_t>;

class ObservationGraph {
 public:
  ObservationGraph() = default;
  explicit ObservationGraph(std::size_t n);

  // Edges are unordered; {j,i} and {i,j} name the same edge. Duplicates are
  // rejected with InvalidInput.
  static ObservationGraph from_edges(std::size_t n, const std::vector<Edge>& edges);
  // Nonzero entries of a symmetric 0/1 mask.
  static ObservationGraph from_mask(const SymMatrix& mask);
  static ObservationGraph complete(std::size_t n, bool loops = true);

  std::size_t n() const noexcept { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const noexcept { return mask_[i * n_ + j] != 0; }
  // Idempotent.
  void add_edge(std::size_t i, std::size_t j);
  void remove_edge(std::size_t i, std::size_t j);

  // Sorted list with i <= j.
  std::vector<Edge> edges() const;
  std::size_t edge_count() const noexcept;
  // Observed matrix entries: an off-diagonal edge counts twice, a loop once.
  std::size_t observed_entries() const noexcept { return observed_; }

  bool operator==(const ObservationGraph& o) const { return n_ == o.n_ && mask_ == o.mask_; }

 private:
  std::size_t n_ = 0;
  std::size_t observed_ = 0;
  std::vector<std::uint8_t> mask_;
};

struct BipartiteSubgraph {
  IndexSet left;
  IndexSet right;
  std::vector<Edge> edges;  // (l, r) with l in left, r in right; original labels

  // Max over all vertices of both sides of incident edge count.
  std::size_t max_degree() const;
};

SymMatrix adjacency(const ObservationGraph& g);
std::vector<std::size_t> degrees(const ObservationGraph& g);
std::size_t max_degree(const ObservationGraph& g);
std::size_t min_degree(const ObservationGraph& g);

// Eigenvalues of the Laplacian below this are treated as zero.
inline constexpr double kConnectivityTol = 1e-8;

// Second-smallest eigenvalue of D − A on the loopless graph. n >= 2.
double algebraic_connectivity(const ObservationGraph& g);
bool is_connected(const ObservationGraph& g);

ObservationGraph complement(const ObservationGraph& g);

// max{Δmax(g) − φ(g), Δmax(ḡ) − φ(ḡ)}; IrregularityUndefined if either
// difference is negative (beyond 1e-9).
double irregularity(const ObservationGraph& g);

// Order-preserving relabel onto 0..|nodes|-1.
ObservationGraph induced_subgraph(const ObservationGraph& g, const IndexSet& nodes);
BipartiteSubgraph bipartite_block(const ObservationGraph& g, const IndexSet& left);

// Samples unordered pairs and loops uniformly without replacement until the
// observed-entry count first reaches `budget`.
ObservationGraph random_graph(std::size_t n, std::size_t budget, std::uint64_t seed);

struct BucketedDraw {
  ObservationGraph graph;
  double ratio = 0.0;  // ψ(G_JJ)/φ(G_JJ)
  std::size_t tries = 0;
};

// Rejection sampling of random_graph until G_JJ is connected, ψ(G_JJ) is
// defined and ψ/φ lies in [ratio_lo, ratio_hi). BucketExhausted otherwise.
BucketedDraw random_graph_bucketed(std::size_t n, std::size_t budget, const IndexSet& support,
                                   double ratio_lo, double ratio_hi, std::size_t max_tries,
                                   std::uint64_t seed);

}  // namespace spca
