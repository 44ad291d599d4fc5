#include "spca/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spca/errors.hpp"
#include "spca/numerics.hpp"
#include "spca/parallel.hpp"
#include "spca/rng.hpp"

namespace spca {

double tau(const SymMatrix& y) {
  if (y.dim() == 0 || max_abs(y) == 0.0) return 0.0;
  const EigDecomp ed = eigh(y);
  double norm = 0.0;
  for (double v : ed.values) norm = std::max(norm, std::fabs(v));
  const double cutoff = 1e-10 * norm;
  const std::size_t n = y.dim();
  std::vector<double> rows(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::fabs(ed.values[k]) <= cutoff) continue;
    for (std::size_t i = 0; i < n; ++i) rows[i] += ed.vectors(i, k) * ed.vectors(i, k);
  }
  return *std::max_element(rows.begin(), rows.end());
}

Theorem3Check theorem3_check(const SymMatrix& y, const ObservationGraph& g) {
  const std::size_t n = y.dim();
  if (g.n() != n) throw InvalidInput("theorem3_check: dimension mismatch");
  const double phi = algebraic_connectivity(g);
  if (phi <= 0.0) throw Disconnected("theorem3_check: graph is disconnected");
  const double psi = irregularity(g);
  const double scale = static_cast<double>(n) / phi;
  const SymMatrix diff = y - scale * hadamard(adjacency(g), y);
  const double ynorm = spectral_norm(y);
  Theorem3Check out;
  out.lhs = spectral_norm(diff);
  out.rhs = static_cast<double>(n) * tau(y) * psi / phi * ynorm;
  out.holds = out.lhs <= out.rhs + kTheorem3RelTol * std::max(out.rhs, ynorm);
  return out;
}

double tail_bound(double sigma, std::size_t m, std::size_t n, std::size_t dmax, double t) {
  const double lead = 2.0 * static_cast<double>(m + n);
  if (t <= 0.0) return lead;
  if (dmax == 0 || sigma == 0.0) return 0.0;
  return lead * std::exp(-t * t / (2.0 * sigma * sigma * static_cast<double>(dmax)));
}

TailBoundCheck theorem2_montecarlo(double sigma, const BipartiteSubgraph& pattern, double t,
                                   std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (!(sigma > 0.0)) throw InvalidInput("theorem2_montecarlo: sigma must be positive");
  if (trials < 1000) throw InvalidInput("theorem2_montecarlo: need at least 1000 trials");
  const std::size_t m = pattern.left.size();
  const std::size_t n = pattern.right.size();
  // Map original labels to block coordinates.
  auto pos = [](const IndexSet& s, std::size_t v) {
    const auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) throw InvalidInput("theorem2_montecarlo: edge endpoint not on its side");
    return static_cast<std::size_t>(it - s.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(pattern.edges.size());
  for (const auto& [l, r] : pattern.edges) cells.emplace_back(pos(pattern.left, l), pos(pattern.right, r));

  std::vector<std::uint8_t> exceed(trials, 0);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Rng rng = make_rng(seed, {trial});
    std::normal_distribution<double> noise(0.0, sigma);
    Matrix z(m, n);
    for (const auto& [a, b] : cells) z(a, b) = noise(rng);
    exceed[trial] = spectral_norm(z) >= t ? 1 : 0;
  });

  TailBoundCheck out;
  out.t = t;
  out.trials = trials;
  out.bound = tail_bound(sigma, m, n, pattern.max_degree(), t);
  std::size_t hits = 0;
  for (auto e : exceed) hits += e;
  out.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  const double p = std::min(out.bound, 1.0);
  out.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  out.holds = out.empirical <= out.bound + 3.0 * out.standard_error;
  return out;
}

}  // namespace spca
