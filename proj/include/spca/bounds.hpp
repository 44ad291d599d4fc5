#pragma once

// Checks of the two matrix-perturbation bounds: a deterministic inequality
// for masked symmetric matrices and a Monte-Carlo test of the sub-Gaussian
// tail bound on a sparsity pattern.

#include <cstdint>

#include "spca/graph.hpp"
#include "spca/matrix.hpp"

namespace spca {

// max_i Σ_{k ≤ r} v_{k,i}², r = #{|λ| > 1e-10·‖Y‖₂}; 0 for Y = 0.
double tau(const SymMatrix& y);

struct Theorem3Check {
  double lhs = 0.0;  // ‖Y − (n/φ)·A∘Y‖₂
  double rhs = 0.0;  // (n·τ·ψ/φ)·‖Y‖₂
  bool holds = false;
};

inline constexpr double kTheorem3RelTol = 1e-8;

// Disconnected if φ(G) = 0; IrregularityUndefined propagates.
Theorem3Check theorem3_check(const SymMatrix& y, const ObservationGraph& g);

struct TailBoundCheck {
  double t = 0.0;
  double bound = 0.0;      // 2(m+n)·exp(−t²/(2σ²Δmax))
  double empirical = 0.0;  // fraction of trials with ‖Z‖₂ >= t
  std::size_t trials = 0;
  double standard_error = 0.0;  // binomial SE at p = min(bound, 1)
  bool holds = false;           // empirical <= bound + 3·SE
};

double tail_bound(double sigma, std::size_t m, std::size_t n, std::size_t dmax, double t);

// Trials draw from substreams keyed by (seed, trial), so the result does not
// depend on `threads`.
TailBoundCheck theorem2_montecarlo(double sigma, const BipartiteSubgraph& pattern, double t,
                                   std::size_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace spca
