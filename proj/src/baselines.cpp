#include "spca/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spca/errors.hpp"
#include "spca/kernels.hpp"
#include "spca/numerics.hpp"
#include "spca/rng.hpp"

namespace spca {

std::string to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::DTSPCA:
      return "DTSPCA";
    case BaselineMethod::ITSPCA:
      return "ITSPCA";
    case BaselineMethod::MC_SDP:
      return "MC_SDP";
  }
  return "unknown";
}

BaselineResult dtspca(const SymMatrix& m, std::size_t k) {
  const std::size_t d = m.dim();
  if (k < 1 || k > d) throw InvalidInput("dtspca: k must lie in [1, d]");
  const std::vector<double> diag = m.diag();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diag[a] > diag[b]; });
  BaselineResult out;
  out.method = BaselineMethod::DTSPCA;
  out.support.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.support.begin(), out.support.end());
  out.threshold = diag[order[k - 1]];
  return out;
}

BaselineResult itspca(const SymMatrix& m, double threshold, int max_iter, double tol,
                      std::optional<std::uint64_t> seed) {
  if (!(threshold >= 0.0)) throw InvalidInput("itspca: threshold must be nonnegative");
  if (max_iter < 1) throw InvalidInput("itspca: max_iter must be positive");
  const std::size_t d = m.dim();
  if (d == 0) throw InvalidInput("itspca: empty matrix");
  const auto& k = kernels::active();

  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  if (seed) {
    Rng rng(*seed);
    std::normal_distribution<double> normal;
    for (double& x : v) x = normal(rng);
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
  }

  BaselineResult out;
  out.method = BaselineMethod::ITSPCA;
  out.threshold = threshold;
  out.converged = false;
  std::vector<double> next(d);
  std::vector<double> flipped(d);
  for (int it = 1; it <= max_iter; ++it) {
    next = matvec(m, v);
    k.soft_threshold(next.data(), next.data(), d, threshold);
    const double nn = norm2(next);
    if (nn == 0.0) throw ThresholdTooLarge("itspca: threshold removed every coordinate");
    for (double& x : next) x /= nn;
    // The iterate may alternate in sign when the top eigenvalue is negative;
    // measure the step up to sign.
    for (std::size_t i = 0; i < d; ++i) flipped[i] = -next[i];
    const double step = std::sqrt(std::min(k.sum_sq_diff(next.data(), v.data(), d),
                                           k.sum_sq_diff(flipped.data(), v.data(), d)));
    v.swap(next);
    out.iterations = it;
    if (step <= tol) {
      out.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (v[i] != 0.0) out.support.push_back(i);
  }
  return out;
}

namespace {

// Symmetric singular-value shrinkage: eigenvalues move toward 0 by t.
SymMatrix shrink_spectrum(const SymMatrix& a, double t) {
  const EigDecomp ed = eigh(a);
  const std::size_t n = a.dim();
  SymMatrix out(n);
  double* o = out.mutable_data();
  const auto& k = kernels::active();
  std::vector<double> v(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double lam = ed.values[c];
    const double shrunk = std::fabs(lam) > t ? lam - std::copysign(t, lam) : 0.0;
    if (shrunk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) v[i] = ed.vectors(i, c);
    for (std::size_t i = 0; i < n; ++i) k.axpy(shrunk * v[i], v.data() + i, o + i * n + i, n - i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) o[j * n + i] = o[i * n + j];
  }
  return out;
}

double observed_violation(const SymMatrix& y, const SymMatrix& m, const ObservationGraph& g) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) {
      if (g.has_edge(i, j)) v = std::max(v, std::fabs(y(i, j) - m(i, j)));
    }
  }
  return v;
}

}  // namespace

CompletionResult complete_nuclear(const SymMatrix& m, const ObservationGraph& g, double tol, int max_iter) {
  const std::size_t d = m.dim();
  if (g.n() != d) throw InvalidInput("complete_nuclear: dimension mismatch");
  if (g.edge_count() == 0) throw InvalidInput("complete_nuclear: graph has no edges");
  if (!(tol > 0.0) || max_iter < 1) throw InvalidInput("complete_nuclear: need tol > 0 and max_iter >= 1");
  constexpr double beta = 1.0;
  const SymMatrix mask = adjacency(g);
  const SymMatrix observed = hadamard(mask, m);
  const SymMatrix unobserved_mask = SymMatrix(d, std::vector<double>(d * d, 1.0)) - mask;
  const double scale = std::max(1.0, frobenius(observed));

  // Y: nuclear prox; W: observed entries pinned; U: scaled dual of Y = W.
  SymMatrix w = observed;
  SymMatrix u(d);
  CompletionResult out;
  for (int it = 1; it <= max_iter; ++it) {
    out.y = shrink_spectrum(w - u, 1.0 / beta);
    const SymMatrix w_prev = w;
    w = observed + hadamard(unobserved_mask, out.y + u);
    u = u + (out.y - w);
    out.iterations = it;
    const double primal = max_abs(out.y - w);
    const double dual = beta * frobenius_diff(w, w_prev) / scale;
    if (primal <= tol && dual <= tol) {
      out.converged = true;
      break;
    }
  }
  out.observed_violation = observed_violation(out.y, m, g);
  return out;
}

BaselineResult sdp_on_completion(const CompletionResult& completed, double rho, double tol, int max_iter) {
  const SdpSolution sol = solve_sdp(completed.y, rho, tol, max_iter);
  BaselineResult out;
  out.method = BaselineMethod::MC_SDP;
  out.support = sol.support;
  out.threshold = rho;
  out.iterations = completed.iterations;
  out.converged = completed.converged && sol.converged;
  out.completion_residual = completed.observed_violation;
  return out;
}

BaselineResult mc_then_sdp(const SymMatrix& m, const ObservationGraph& g, double rho, double tol, int max_iter) {
  return sdp_on_completion(complete_nuclear(m, g), rho, tol, max_iter);
}

}  // namespace spca
