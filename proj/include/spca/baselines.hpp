#pragma once

// Comparison methods: diagonal thresholding, iterative thresholding and
// nuclear-norm completion followed by the SDP.

#include <cstdint>
#include <optional>
#include <string>

#include "spca/graph.hpp"
#include "spca/matrix.hpp"
#include "spca/sdp.hpp"

namespace spca {

enum class BaselineMethod { DTSPCA, ITSPCA, MC_SDP };

std::string to_string(BaselineMethod m);

struct BaselineResult {
  BaselineMethod method = BaselineMethod::DTSPCA;
  IndexSet support;
  double threshold = 0.0;         // DTSPCA: k-th largest diagonal; ITSPCA: soft threshold
  int iterations = 0;             // ITSPCA power steps or completion iterations
  bool converged = true;
  double completion_residual = 0.0;  // MC_SDP: max observed-entry violation
};

// Indices of the k largest diagonal entries (ties to the lower index).
BaselineResult dtspca(const SymMatrix& m, std::size_t k);

// Power iteration with entrywise soft thresholding. Starts from 1/√d unless
// `seed` is given, in which case the start is a random unit vector.
// ThresholdTooLarge when an iterate vanishes.
BaselineResult itspca(const SymMatrix& m, double threshold, int max_iter = 1000, double tol = 1e-8,
                      std::optional<std::uint64_t> seed = std::nullopt);

struct CompletionResult {
  SymMatrix y;
  int iterations = 0;
  bool converged = false;
  double observed_violation = 0.0;  // max over observed (i,j) of |Y_ij − M_ij|
};

inline constexpr double kCompletionTol = 1e-6;
inline constexpr int kCompletionMaxIter = 5000;

// min ‖Y‖_* s.t. Y = Yᵀ and Y_ij = M_ij on observed entries, by ADMM with
// eigenvalue soft-thresholding (β = 1).
CompletionResult complete_nuclear(const SymMatrix& m, const ObservationGraph& g, double tol = kCompletionTol,
                                  int max_iter = kCompletionMaxIter);

BaselineResult mc_then_sdp(const SymMatrix& m, const ObservationGraph& g, double rho, double tol = kDefaultSdpTol,
                           int max_iter = kDefaultSdpMaxIter);
// Reuses a completed matrix.
BaselineResult sdp_on_completion(const CompletionResult& completed, double rho, double tol = kDefaultSdpTol,
                                 int max_iter = kDefaultSdpMaxIter);

}  // namespace spca
