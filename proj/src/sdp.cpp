#include "spca/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spca/errors.hpp"
#include "spca/kernels.hpp"

namespace spca {

namespace {

constexpr double kBalanceRatio = 10.0;
constexpr double kBetaMin = 1e-6;
constexpr double kBetaMax = 1e6;
// Rebalance at most this often; rebalancing every iteration can cycle β.
constexpr int kBalanceEvery = 5;

// a += alpha * b
void add_scaled(SymMatrix& a, double alpha, const SymMatrix& b) {
  kernels::active().axpy(alpha, b.data().data(), a.mutable_data(), a.size());
}

SymMatrix z_from_dual(const SymMatrix& u, double beta, double rho) {
  if (rho <= 0.0) return SymMatrix(u.dim());
  return (beta / rho) * u;
}

}  // namespace

SdpSolver::SdpSolver(SdpOptions opts) : opts_(opts), beta_(opts.beta0) {}

void SdpSolver::reset() noexcept {
  warm_ = false;
  eig_.reset();
}

SdpSolution SdpSolver::solve(const SymMatrix& m, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw InvalidInput("solve_sdp: rho must be finite and nonnegative");
  if (!(opts_.tol > 0.0)) throw InvalidInput("solve_sdp: tol must be positive");
  if (opts_.max_iter < 1) throw InvalidInput("solve_sdp: max_iter must be positive");
  const std::size_t d = m.dim();
  if (d == 0) throw InvalidInput("solve_sdp: empty matrix");

  if (!warm_ || y_.dim() != d) {
    y_ = SymMatrix(d);
    u_ = SymMatrix(d);
    beta_ = opts_.beta0;
    eig_.reset();
  } else if (rho_prev_ > 0.0 && rho > 0.0) {
    // Keep the implied subgradient βU/ρ fixed across the change of ρ.
    u_ = (rho / rho_prev_) * u_;
  } else {
    u_ = SymMatrix(d);
  }
  warm_ = true;
  rho_prev_ = rho;

  const auto& k = kernels::active();
  const double m_scale = std::max(1.0, frobenius(m));
  SdpSolution sol;
  SymMatrix x(d);
  SymMatrix y_prev(d);
  SymMatrix v(d);
  int it = 0;
  for (; it < opts_.max_iter; ++it) {
    // X-step: project Y − U + M/β onto the spectrahedron.
    v = y_;
    add_scaled(v, -1.0, u_);
    add_scaled(v, 1.0 / beta_, m);
    x = project_spectrahedron(v, eig_);

    // Y-step: prox of (ρ/β)‖·‖₁,₁ at X + U.
    y_prev = y_;
    v = x;
    add_scaled(v, 1.0, u_);
    k.soft_threshold(v.data().data(), y_.mutable_data(), y_.size(), rho / beta_);

    add_scaled(u_, 1.0, x);
    add_scaled(u_, -1.0, y_);

    const double xy = frobenius_diff(x, y_);
    const double primal = xy / std::max({frobenius(x), frobenius(y_), std::numeric_limits<double>::min()});
    const double dual = beta_ * frobenius_diff(y_, y_prev) / m_scale;
    sol.primal_residual = primal;
    sol.dual_residual = dual;

    if (opts_.record_merit) {
      const double lagr = -inner(m, x) + rho * l11(y_) +
                          beta_ * (k.dot(u_.data().data(), x.data().data(), x.size()) -
                                   k.dot(u_.data().data(), y_.data().data(), y_.size())) +
                          0.5 * beta_ * xy * xy;
      sol.merit.push_back(lagr);
    }

    if (primal <= opts_.tol && dual <= opts_.tol) {
      sol.converged = true;
      ++it;
      break;
    }

    if ((it + 1) % kBalanceEvery != 0) continue;
    if (primal > kBalanceRatio * dual && beta_ < kBetaMax) {
      beta_ *= 2.0;
      u_ = 0.5 * u_;
    } else if (dual > kBalanceRatio * primal && beta_ > kBetaMin) {
      beta_ *= 0.5;
      u_ = 2.0 * u_;
    }
  }

  sol.iterations = it;
  sol.x_hat = std::move(x);
  sol.objective = inner(m, sol.x_hat) - rho * l11(sol.x_hat);
  sol.support = support_of(sol.x_hat, opts_.support_threshold);
  sol.z_hat = z_from_dual(u_, beta_, rho);
  sol.beta = beta_;
  return sol;
}

SdpSolution solve_sdp(const SymMatrix& m, double rho, double tol, int max_iter) {
  SdpOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  SdpSolver solver(opts);
  return solver.solve(m, rho);
}

SdpSolution solve_restricted(const SymMatrix& m, double rho, const IndexSet& support, double tol,
                             int max_iter) {
  const IndexSet j = normalize_index_set(support, m.dim());
  if (j.empty()) throw InvalidInput("solve_restricted: empty support");
  SdpSolution sub = solve_sdp(m.principal(j), rho, tol, max_iter);
  sub.x_hat = embed(sub.x_hat, j, m.dim());
  sub.z_hat = embed(sub.z_hat, j, m.dim());
  IndexSet mapped;
  for (std::size_t i : sub.support) mapped.push_back(j[i]);
  sub.support = std::move(mapped);
  return sub;
}

IndexSet support_of(const SymMatrix& x_hat, double threshold) {
  if (!(threshold > 0.0)) throw InvalidInput("support_of: threshold must be positive");
  const std::vector<double> diag = x_hat.diag();
  double top = 0.0;
  for (double v : diag) top = std::max(top, v);
  IndexSet out;
  if (top <= 0.0) return out;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] > threshold * top) out.push_back(i);
  }
  return out;
}

double merit_oscillation(const std::vector<double>& merit, std::size_t window) {
  if (merit.empty()) return 0.0;
  const std::size_t n = std::min(window, merit.size());
  const auto first = merit.end() - static_cast<std::ptrdiff_t>(n);
  double variation = 0.0;
  for (auto it = first + 1; it != merit.end(); ++it) variation += std::fabs(*it - *(it - 1));
  const double net = std::fabs(merit.back() - *first);
  return std::max(0.0, variation - net) / std::max(1.0, std::fabs(merit.back()));
}

KktReport kkt_report(const SymMatrix& m, double rho, const SymMatrix& x_hat, const SymMatrix* z) {
  const std::size_t d = m.dim();
  if (x_hat.dim() != d) throw InvalidInput("kkt_report: dimension mismatch");
  KktReport rep;
  const double xmax = max_abs(x_hat);
  const double nz_tol = 1e-6 * xmax;

  if (z != nullptr) {
    if (z->dim() != d) throw InvalidInput("kkt_report: subgradient dimension mismatch");
    rep.z_hat = *z;
  } else if (rho > 0.0) {
    const IndexSet s = support_of(x_hat);
    const IndexSet sc = complement_set(s, d);
    rep.z_hat = SymMatrix(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        const double xv = x_hat(i, j);
        rep.z_hat.set(i, j, std::fabs(xv) > nz_tol ? std::copysign(1.0, xv)
                                                   : std::clamp(m(i, j) / rho, -1.0, 1.0));
      }
    }
    if (!s.empty() && !sc.empty()) {
      // Rank-one completion on Sc × S so that (M − ρẐ)_{Sc,S} x = 0.
      const EigDecomp ed = eigh(x_hat.principal(s));
      std::vector<double> x = ed.vector(0);
      std::vector<double> zs(s.size());
      double l1 = 0.0;
      for (std::size_t a = 0; a < s.size(); ++a) {
        zs[a] = x[a] > 0.0 ? 1.0 : (x[a] < 0.0 ? -1.0 : 0.0);
        l1 += std::fabs(x[a]);
      }
      for (std::size_t r : sc) {
        double mx = 0.0;
        for (std::size_t a = 0; a < s.size(); ++a) mx += m(r, s[a]) * x[a];
        for (std::size_t a = 0; a < s.size(); ++a) {
          if (std::fabs(x_hat(r, s[a])) > nz_tol) continue;
          rep.z_hat.set(r, s[a], mx * zs[a] / (rho * l1));
        }
      }
    }
  } else {
    rep.z_hat = SymMatrix(d);
  }

  const SymMatrix g = m - rho * rep.z_hat;
  rep.mu = inner(g, x_hat);
  const Matrix gx = matmul(g, x_hat);
  double stat = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) stat = std::max(stat, std::fabs(gx(i, j) - rep.mu * x_hat(i, j)));
  }
  rep.stationarity = stat;
  rep.trace_violation = std::fabs(x_hat.trace() - 1.0);
  const EigDecomp ex = eigh(x_hat);
  rep.psd_violation = std::max(0.0, -ex.values.back());
  const EigDecomp eg = eigh(g);
  rep.dual_psd_violation = std::max(0.0, eg.values.front() - rep.mu);

  double sub = 0.0;
  if (rho > 0.0) {
    for (std::size_t i = 0; i < d * d; ++i) {
      const double zv = rep.z_hat.data()[i];
      const double xv = x_hat.data()[i];
      sub = std::max(sub, std::fabs(zv) - 1.0);
      if (std::fabs(xv) > nz_tol) sub = std::max(sub, std::fabs(zv - std::copysign(1.0, xv)));
    }
  }
  rep.subgradient_violation = std::max(0.0, sub);
  return rep;
}

WitnessReport witness_certificate(const SymMatrix& m_star, const ObservationGraph& g, const SymMatrix& m,
                                  double rho, const IndexSet& support) {
  const std::size_t d = m.dim();
  if (m_star.dim() != d || g.n() != d) throw InvalidInput("witness_certificate: dimension mismatch");
  if (!(rho > 0.0)) throw InvalidInput("witness_certificate: rho must be positive");
  const IndexSet j = normalize_index_set(support, d);
  if (j.empty()) throw InvalidInput("witness_certificate: empty support");
  const IndexSet jc = complement_set(j, d);

  constexpr double kZeroTol = 1e-9;
  const std::vector<double> u1 = eigh(m_star).vector(0);
  std::vector<double> z(j.size());
  for (std::size_t a = 0; a < j.size(); ++a) {
    if (std::fabs(u1[j[a]]) <= kZeroTol) {
      throw InvalidInput("witness_certificate: leading eigenvector vanishes on the support");
    }
    z[a] = u1[j[a]] > 0.0 ? 1.0 : -1.0;
  }
  for (std::size_t r : jc) {
    if (std::fabs(u1[r]) > kZeroTol) {
      throw InvalidInput("witness_certificate: leading eigenvector is nonzero off the support");
    }
  }

  WitnessReport rep;
  const SymMatrix b = m.principal(j) - SymMatrix::outer(z, rho);
  const EigDecomp eb = eigh(b);
  std::vector<double> x = eb.vector(0);
  rep.lambda1_block = eb.values.front();
  rep.gap = j.size() == 1 ? std::numeric_limits<double>::infinity() : eb.values[0] - eb.values[1];
  rep.cond_gap = rep.gap > kWitnessMargin;

  bool same = true;
  bool flipped = true;
  for (std::size_t a = 0; a < j.size(); ++a) {
    same = same && x[a] * z[a] > 0.0;
    flipped = flipped && x[a] * z[a] < 0.0;
  }
  rep.cond_sign = same || flipped;
  if (flipped) {
    for (double& v : x) v = -v;
  }
  rep.x_hat = x;

  double l1 = 0.0;
  for (double v : x) l1 += std::fabs(v);

  SymMatrix zfull(d);
  for (std::size_t a = 0; a < j.size(); ++a) {
    for (std::size_t b2 = a; b2 < j.size(); ++b2) zfull.set(j[a], j[b2], z[a] * z[b2]);
  }
  double off = 0.0;
  for (std::size_t r : jc) {
    double mx = 0.0;
    for (std::size_t a = 0; a < j.size(); ++a) mx += m(r, j[a]) * x[a];
    for (std::size_t a = 0; a < j.size(); ++a) {
      const double v = mx * z[a] / (rho * l1);
      zfull.set(r, j[a], v);
      off = std::max(off, std::fabs(v));
    }
  }
  rep.offblock_max = off;
  rep.cond_offblock = off < 1.0 - kWitnessMargin;

  double diag_block = 0.0;
  for (std::size_t a = 0; a < jc.size(); ++a) {
    for (std::size_t b2 = a; b2 < jc.size(); ++b2) {
      const std::size_t r = jc[a];
      const std::size_t c = jc[b2];
      const double expect = g.has_edge(r, c) ? m_star(r, c) : 0.0;
      const double v = (m(r, c) - expect) / rho;
      zfull.set(r, c, v);
      diag_block = std::max(diag_block, std::fabs(v));
    }
  }
  rep.diag_block_max = diag_block;

  rep.lambda1_full = eigh(m - rho * zfull).values.front();
  const double scale = std::max(1.0, std::fabs(rep.lambda1_block));
  rep.cond_eig = rep.lambda1_full <= rep.lambda1_block + kWitnessMargin * scale &&
                 diag_block < 1.0 - kWitnessMargin;

  rep.certified = rep.cond_sign && rep.cond_offblock && rep.cond_eig && rep.cond_gap;
  return rep;
}

}  // namespace spca
