#pragma once

// The ℓ1-penalized spectrahedron program
//
//   maximize ⟨M, X⟩ − ρ‖X‖₁,₁  subject to  X ⪰ 0, tr X = 1,
//
// its KKT diagnostics and the primal-dual witness construction.

#include <cstddef>
#include <vector>

#include "spca/graph.hpp"
#include "spca/matrix.hpp"
#include "spca/numerics.hpp"

namespace spca {

inline constexpr double kDefaultSdpTol = 1e-7;
inline constexpr int kDefaultSdpMaxIter = 20000;
inline constexpr double kDefaultSupportThreshold = 1e-4;

struct SdpOptions {
  double tol = kDefaultSdpTol;
  int max_iter = kDefaultSdpMaxIter;
  double beta0 = 1.0;
  double support_threshold = kDefaultSupportThreshold;
  bool record_merit = true;
};

struct SdpSolution {
  SymMatrix x_hat;  // spectrahedron iterate; feasible up to rounding
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;  // false means NotConverged: diagnostics still valid
  IndexSet support;
  // βU/ρ at exit, a subgradient of ‖·‖₁,₁ at the sparse iterate; zero when ρ = 0.
  SymMatrix z_hat;
  double beta = 1.0;
  // Augmented-Lagrangian value per iteration (if recorded).
  std::vector<double> merit;
};

// Two-block ADMM with X = Y splitting. Holding a solver across calls warm
// starts each solve from the previous one's iterates when the dimension
// matches, which is what ρ-grid sweeps rely on.
class SdpSolver {
 public:
  explicit SdpSolver(SdpOptions opts = {});

  SdpSolution solve(const SymMatrix& m, double rho);
  void reset() noexcept;

  const SdpOptions& options() const noexcept { return opts_; }

 private:
  SdpOptions opts_;
  EighWorkspace eig_;
  bool warm_ = false;
  SymMatrix y_;
  SymMatrix u_;
  double beta_ = 1.0;
  double rho_prev_ = 0.0;
};

SdpSolution solve_sdp(const SymMatrix& m, double rho, double tol = kDefaultSdpTol,
                      int max_iter = kDefaultSdpMaxIter);

// Same program with supp(X) ⊆ support × support, embedded back into d×d.
SdpSolution solve_restricted(const SymMatrix& m, double rho, const IndexSet& support,
                             double tol = kDefaultSdpTol, int max_iter = kDefaultSdpMaxIter);

// {i : X_ii > threshold · max_j X_jj}; empty for an all-zero diagonal.
IndexSet support_of(const SymMatrix& x_hat, double threshold = kDefaultSupportThreshold);

// Back-and-forth movement of the last `window` merit values: total variation
// minus net change, relative to max(1, |last|). Zero for a monotone tail.
double merit_oscillation(const std::vector<double>& merit, std::size_t window = 50);

struct KktReport {
  double mu = 0.0;                     // ⟨M − ρẐ, X̂⟩
  double stationarity = 0.0;           // ‖(M − ρẐ)X̂ − μX̂‖max
  double trace_violation = 0.0;        // |tr X̂ − 1|
  double psd_violation = 0.0;          // max(0, −λmin(X̂))
  double dual_psd_violation = 0.0;     // max(0, λ1(M − ρẐ) − μ)
  double subgradient_violation = 0.0;  // distance of Ẑ from ∂‖X̂‖₁,₁ (max norm)
  SymMatrix z_hat;
};

// With `z` the given subgradient is checked; otherwise one is built from X̂
// (sign pattern on the support, rank-one off-block completion, clipped M/ρ
// elsewhere).
KktReport kkt_report(const SymMatrix& m, double rho, const SymMatrix& x_hat,
                     const SymMatrix* z = nullptr);

struct WitnessReport {
  bool cond_sign = false;
  bool cond_offblock = false;
  double offblock_max = 0.0;  // ‖Ẑ_{Jc,J}‖max
  bool cond_eig = false;
  double lambda1_block = 0.0;  // λ1(M_JJ − ρẑẑᵀ)
  double lambda1_full = 0.0;   // λ1(M − ρẐ)
  double diag_block_max = 0.0; // ‖Ẑ_{Jc,Jc}‖max
  bool cond_gap = false;
  double gap = 0.0;  // λ1 − λ2 of M_JJ − ρẑẑᵀ; +inf when |J| = 1
  bool certified = false;
  std::vector<double> x_hat;  // leading eigenvector on J, oriented along ẑ
};

inline constexpr double kWitnessMargin = 1e-10;

WitnessReport witness_certificate(const SymMatrix& m_star, const ObservationGraph& g,
                                  const SymMatrix& m, double rho, const IndexSet& support);

}  // namespace spca
