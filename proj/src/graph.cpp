#include "spca/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spca/errors.hpp"
#include "spca/numerics.hpp"
#include "spca/rng.hpp"

namespace spca {

namespace {

void check_node(std::size_t i, std::size_t n) {
  if (i >= n) {
    throw InvalidInput("node " + std::to_string(i) + " out of range for graph of size " + std::to_string(n));
  }
}

SymMatrix laplacian(const ObservationGraph& g) {
  const std::size_t n = g.n();
  SymMatrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && g.has_edge(i, j)) {
        l.set(i, j, -1.0);
        deg += 1.0;
      }
    }
    l.set(i, i, deg);
  }
  return l;
}

}  // namespace

ObservationGraph::ObservationGraph(std::size_t n) : n_(n), mask_(n * n, 0) {}

ObservationGraph ObservationGraph::from_edges(std::size_t n, const std::vector<Edge>& edges) {
  ObservationGraph g(n);
  for (const auto& [i, j] : edges) {
    check_node(i, n);
    check_node(j, n);
    if (g.has_edge(i, j)) {
      throw InvalidInput("duplicate edge {" + std::to_string(i) + ", " + std::to_string(j) + "}");
    }
    g.add_edge(i, j);
  }
  return g;
}

ObservationGraph ObservationGraph::from_mask(const SymMatrix& mask) {
  ObservationGraph g(mask.dim());
  for (std::size_t i = 0; i < mask.dim(); ++i) {
    for (std::size_t j = i; j < mask.dim(); ++j) {
      if (mask(i, j) != 0.0) g.add_edge(i, j);
    }
  }
  return g;
}

ObservationGraph ObservationGraph::complete(std::size_t n, bool loops) {
  ObservationGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = loops ? i : i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

void ObservationGraph::add_edge(std::size_t i, std::size_t j) {
  check_node(i, n_);
  check_node(j, n_);
  if (has_edge(i, j)) return;
  mask_[i * n_ + j] = 1;
  mask_[j * n_ + i] = 1;
  observed_ += (i == j) ? 1 : 2;
}

void ObservationGraph::remove_edge(std::size_t i, std::size_t j) {
  check_node(i, n_);
  check_node(j, n_);
  if (!has_edge(i, j)) return;
  mask_[i * n_ + j] = 0;
  mask_[j * n_ + i] = 0;
  observed_ -= (i == j) ? 1 : 2;
}

std::vector<Edge> ObservationGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t ObservationGraph::edge_count() const noexcept {
  std::size_t loops = 0;
  for (std::size_t i = 0; i < n_; ++i) loops += mask_[i * n_ + i];
  return loops + (observed_ - loops) / 2;
}

std::size_t BipartiteSubgraph::max_degree() const {
  std::size_t best = 0;
  auto count = [&](std::size_t v, bool on_left) {
    std::size_t c = 0;
    for (const auto& [l, r] : edges) c += on_left ? (l == v) : (r == v);
    return c;
  };
  for (std::size_t v : left) best = std::max(best, count(v, true));
  for (std::size_t v : right) best = std::max(best, count(v, false));
  return best;
}

SymMatrix adjacency(const ObservationGraph& g) {
  SymMatrix a(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = i; j < g.n(); ++j) {
      if (g.has_edge(i, j)) a.set(i, j, 1.0);
    }
  }
  return a;
}

std::vector<std::size_t> degrees(const ObservationGraph& g) {
  std::vector<std::size_t> deg(g.n(), 0);
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) deg[i] += g.has_edge(i, j);
  }
  return deg;
}

std::size_t max_degree(const ObservationGraph& g) {
  const auto deg = degrees(g);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::size_t min_degree(const ObservationGraph& g) {
  const auto deg = degrees(g);
  return deg.empty() ? 0 : *std::min_element(deg.begin(), deg.end());
}

double algebraic_connectivity(const ObservationGraph& g) {
  if (g.n() < 2) throw InvalidInput("algebraic connectivity needs at least 2 nodes");
  const EigDecomp ed = eigh(laplacian(g));
  const double phi = ed.values[g.n() - 2];
  return phi < kConnectivityTol ? 0.0 : phi;
}

bool is_connected(const ObservationGraph& g) { return algebraic_connectivity(g) > 0.0; }

ObservationGraph complement(const ObservationGraph& g) {
  ObservationGraph c(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = i; j < g.n(); ++j) {
      if (!g.has_edge(i, j)) c.add_edge(i, j);
    }
  }
  return c;
}

double irregularity(const ObservationGraph& g) {
  constexpr double kSlack = 1e-9;
  const double own = static_cast<double>(max_degree(g)) - algebraic_connectivity(g);
  const ObservationGraph gc = complement(g);
  const double comp = static_cast<double>(max_degree(gc)) - algebraic_connectivity(gc);
  if (own < -kSlack || comp < -kSlack) {
    throw IrregularityUndefined("irregularity undefined: maximum degree below algebraic connectivity");
  }
  return std::max({own, comp, 0.0});
}

ObservationGraph induced_subgraph(const ObservationGraph& g, const IndexSet& nodes) {
  if (nodes.empty()) throw InvalidInput("induced_subgraph: empty node set");
  const IndexSet idx = normalize_index_set(nodes, g.n());
  ObservationGraph sub(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a; b < idx.size(); ++b) {
      if (g.has_edge(idx[a], idx[b])) sub.add_edge(a, b);
    }
  }
  return sub;
}

BipartiteSubgraph bipartite_block(const ObservationGraph& g, const IndexSet& left) {
  const IndexSet l = normalize_index_set(left, g.n());
  if (l.empty() || l.size() == g.n()) {
    throw InvalidInput("bipartite_block: left side must be a nonempty proper subset");
  }
  BipartiteSubgraph out;
  out.left = l;
  out.right = complement_set(l, g.n());
  for (std::size_t a : out.left) {
    for (std::size_t b : out.right) {
      if (g.has_edge(a, b)) out.edges.emplace_back(a, b);
    }
  }
  return out;
}

ObservationGraph random_graph(std::size_t n, std::size_t budget, std::uint64_t seed) {
  if (budget > n * n) {
    throw InvalidInput("random_graph: budget " + std::to_string(budget) + " exceeds " + std::to_string(n * n));
  }
  std::vector<Edge> universe;
  universe.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) universe.emplace_back(i, j);
  }
  Rng rng(seed);
  ObservationGraph g(n);
  // Partial Fisher-Yates: position k receives a uniform draw from the rest.
  for (std::size_t k = 0; k < universe.size() && g.observed_entries() < budget; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, universe.size() - 1);
    std::swap(universe[k], universe[pick(rng)]);
    g.add_edge(universe[k].first, universe[k].second);
  }
  return g;
}

BucketedDraw random_graph_bucketed(std::size_t n, std::size_t budget, const IndexSet& support,
                                   double ratio_lo, double ratio_hi, std::size_t max_tries,
                                   std::uint64_t seed) {
  if (!(ratio_lo < ratio_hi)) throw InvalidInput("random_graph_bucketed: need ratio_lo < ratio_hi");
  const IndexSet j = normalize_index_set(support, n);
  if (j.size() < 2) throw InvalidInput("random_graph_bucketed: support needs at least 2 nodes");
  for (std::size_t t = 0; t < max_tries; ++t) {
    ObservationGraph g = random_graph(n, budget, derive_seed(seed, {t}));
    const ObservationGraph sub = induced_subgraph(g, j);
    const double phi = algebraic_connectivity(sub);
    if (phi <= 0.0) continue;
    double psi = 0.0;
    try {
      psi = irregularity(sub);
    } catch (const IrregularityUndefined&) {
      continue;
    }
    const double ratio = psi / phi;
    if (ratio >= ratio_lo && ratio < ratio_hi) return {std::move(g), ratio, t + 1};
  }
  throw BucketExhausted("no graph with ratio in [" + std::to_string(ratio_lo) + ", " +
                        std::to_string(ratio_hi) + ") after " + std::to_string(max_tries) + " tries");
}

}  // namespace spca
