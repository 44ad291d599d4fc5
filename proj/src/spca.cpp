#include "spca/spca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spca/errors.hpp"
#include "spca/numerics.hpp"

namespace spca {

namespace {

constexpr double kSupportZeroTol = 1e-9;

double safe_log(std::size_t n) { return std::log(static_cast<double>(n)); }

Matrix masked_block(const SymMatrix& m, const ObservationGraph& g, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      if (g.has_edge(rows[a], cols[b])) out(a, b) = m(rows[a], cols[b]);
    }
  }
  return out;
}

}  // namespace

Recovery recover_support(const SymMatrix& m, double rho, const SdpOptions& opts) {
  if (!(rho >= 0.0)) throw InvalidInput("recover_support: rho must be nonnegative");
  Recovery out;
  if (max_abs(m) == 0.0) {
    // No entry carries signal, so no support is recoverable.
    out.solution.x_hat = (1.0 / static_cast<double>(std::max<std::size_t>(m.dim(), 1))) * SymMatrix::identity(m.dim());
    out.solution.z_hat = SymMatrix(m.dim());
    out.solution.converged = true;
    return out;
  }
  SdpSolver solver(opts);
  out.solution = solver.solve(m, rho);
  out.support = out.solution.support;
  return out;
}

double criterion_value(double explained, double baseline, std::size_t support_size, std::size_t d, double a) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidInput("criterion: a must lie in (0, 1)");
  if (baseline == 0.0) throw DegenerateBaseline("criterion: ⟨M, X̂_0⟩ is zero");
  return (1.0 - a) * explained / baseline +
         a * (1.0 - static_cast<double>(support_size) / static_cast<double>(d));
}

double criterion(const SymMatrix& m, double rho, double a, const SdpOptions& opts) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidInput("criterion: a must lie in (0, 1)");
  SdpSolver solver(opts);
  const SdpSolution base = solver.solve(m, 0.0);
  const double baseline = inner(m, base.x_hat);
  if (rho == 0.0) return criterion_value(baseline, baseline, base.support.size(), m.dim(), a);
  const SdpSolution sol = solver.solve(m, rho);
  return criterion_value(inner(m, sol.x_hat), baseline, sol.support.size(), m.dim(), a);
}

TuningTrace tune_rho(const SymMatrix& m, const std::vector<double>& grid, double a, const SdpOptions& opts) {
  if (grid.empty()) throw InvalidInput("tune_rho: empty grid");
  if (!(a > 0.0 && a < 1.0)) throw InvalidInput("tune_rho: a must lie in (0, 1)");
  for (double r : grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("tune_rho: grid values must be finite and nonnegative");
  }
  const std::size_t d = m.dim();
  TuningTrace tr;
  tr.grid = grid;
  tr.a = a;
  tr.criteria.assign(grid.size(), 0.0);
  tr.supports.assign(grid.size(), IndexSet{});
  tr.converged.assign(grid.size(), false);

  SdpSolver solver(opts);
  const SdpSolution base = solver.solve(m, 0.0);
  tr.baseline = inner(m, base.x_hat);
  if (tr.baseline == 0.0) throw DegenerateBaseline("tune_rho: ⟨M, X̂_0⟩ is zero");

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return grid[x] < grid[y]; });
  for (std::size_t idx : order) {
    const SdpSolution sol = solver.solve(m, grid[idx]);
    tr.supports[idx] = sol.support;
    tr.converged[idx] = sol.converged;
    tr.criteria[idx] = criterion_value(inner(m, sol.x_hat), tr.baseline, sol.support.size(), d, a);
  }

  const double best = *std::max_element(tr.criteria.begin(), tr.criteria.end());
  bool have = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (tr.criteria[i] < best - kCriterionTieTol) continue;
    if (!have || grid[i] > tr.chosen_rho) {
      tr.chosen_rho = grid[i];
      tr.chosen_index = i;
      have = true;
    }
  }
  tr.chosen_support = tr.supports[tr.chosen_index];
  return tr;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw InvalidInput("make_grid: need step > 0 and stop >= start");
  }
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> default_rho_grid() { return make_grid(0.025, 1.0, 0.025); }

double theoretical_rho_formula(double sigma, double dmax_cross, double dmax_offsupport, double d,
                               double offblock_max) {
  return 2.0 * sigma * std::sqrt(std::max(dmax_cross, dmax_offsupport) * std::log(d)) + offblock_max;
}

SupportGeometry support_geometry(const SymMatrix& m_star, const ObservationGraph& g, const IndexSet& support) {
  const std::size_t d = m_star.dim();
  if (g.n() != d) throw InvalidInput("graph and matrix dimensions differ");
  const IndexSet j = normalize_index_set(support, d);
  if (j.empty()) throw InvalidInput("support must be nonempty");
  const IndexSet jc = complement_set(j, d);

  SupportGeometry geo;
  geo.d = d;
  geo.s = j.size();

  const EigDecomp ed = eigh(m_star);
  const std::vector<double> u1 = ed.vector(0);
  geo.min_abs_u1 = std::numeric_limits<double>::infinity();
  for (std::size_t i : j) {
    if (std::fabs(u1[i]) <= kSupportZeroTol) throw InvalidInput("leading eigenvector vanishes on the support");
    geo.min_abs_u1 = std::min(geo.min_abs_u1, std::fabs(u1[i]));
  }
  for (std::size_t i : jc) {
    if (std::fabs(u1[i]) > kSupportZeroTol) throw InvalidInput("leading eigenvector is nonzero off the support");
  }
  geo.spectral_gap = d >= 2 ? ed.values[0] - ed.values[1] : 0.0;

  const ObservationGraph gjj = induced_subgraph(g, j);
  geo.dmax_jj = static_cast<double>(max_degree(gjj));
  if (j.size() == 1) {
    geo.phi_jj = gjj.has_edge(0, 0) ? 1.0 : 0.0;
    geo.psi_jj = 0.0;
  } else {
    geo.phi_jj = algebraic_connectivity(gjj);
  }
  geo.norm_jj = spectral_norm(m_star.principal(j));

  if (!jc.empty()) {
    geo.dmax_cross = static_cast<double>(bipartite_block(g, j).max_degree());
    geo.dmax_offsupport = static_cast<double>(max_degree(induced_subgraph(g, jc)));
    const Matrix cross = m_star.block(jc, j);
    geo.norm_cross = spectral_norm(cross);
    geo.max_cross = max_abs(cross);
    geo.norm_offsupport = spectral_norm(m_star.principal(jc));
    geo.masked_norm_cross = spectral_norm(masked_block(m_star, g, jc, j));
    geo.masked_norm_offsupport = spectral_norm(masked_block(m_star, g, jc, jc));
  }
  return geo;
}

double theoretical_rho(const SymMatrix& m_star, const ObservationGraph& g, double sigma, const IndexSet& support) {
  const std::size_t d = m_star.dim();
  if (g.n() != d) throw InvalidInput("graph and matrix dimensions differ");
  const IndexSet j = normalize_index_set(support, d);
  if (j.empty() || j.size() == d) throw InvalidInput("theoretical_rho: support must be a proper nonempty subset");
  const IndexSet jc = complement_set(j, d);
  const double cross = static_cast<double>(bipartite_block(g, j).max_degree());
  const double off = static_cast<double>(max_degree(induced_subgraph(g, jc)));
  return theoretical_rho_formula(sigma, cross, off, static_cast<double>(d), max_abs(m_star.block(jc, j)));
}

namespace {

RescaledTerms terms_from(const SupportGeometry& geo, double sigma) {
  if (geo.phi_jj <= 0.0) throw Disconnected("G_JJ is disconnected: rescaled parameter is infinite");
  const double s = static_cast<double>(geo.s);
  RescaledTerms t;
  t.irregularity_term = geo.norm_jj * geo.psi_jj;
  t.noise_jj = sigma * std::sqrt(geo.dmax_jj * safe_log(geo.s));
  t.cross_term = s * geo.norm_cross;
  t.offsupport_term = geo.norm_offsupport / std::sqrt(s);
  t.noise_cross = sigma * s * std::sqrt(std::max(geo.dmax_cross, geo.dmax_offsupport) * safe_log(geo.d));
  t.numerator = t.irregularity_term + t.noise_jj + t.cross_term + t.offsupport_term + t.noise_cross;
  t.denominator = geo.phi_jj * geo.spectral_gap * geo.min_abs_u1 / s;
  t.rescaled = t.numerator / t.denominator;
  return t;
}

SupportGeometry geometry_with_psi(const SymMatrix& m_star, const ObservationGraph& g, const IndexSet& support) {
  SupportGeometry geo = support_geometry(m_star, g, support);
  if (geo.phi_jj <= 0.0) throw Disconnected("G_JJ is disconnected");
  if (geo.s >= 2) geo.psi_jj = irregularity(induced_subgraph(g, normalize_index_set(support, m_star.dim())));
  return geo;
}

}  // namespace

RescaledTerms rescaled_terms(const SymMatrix& m_star, const ObservationGraph& g, double sigma,
                             const IndexSet& support) {
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be nonnegative");
  return terms_from(geometry_with_psi(m_star, g, support), sigma);
}

double rescaled_parameter(const SymMatrix& m_star, const ObservationGraph& g, double sigma, const IndexSet& support) {
  return rescaled_terms(m_star, g, sigma, support).rescaled;
}

bool ConditionReport::all_hold() const {
  return std::all_of(ineq.begin(), ineq.end(), [](const Inequality& q) { return q.holds; });
}

ConditionReport sufficient_conditions_report(const SymMatrix& m_star, const ObservationGraph& g, double sigma,
                                             double rho, const IndexSet& support) {
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be nonnegative");
  const SupportGeometry geo = geometry_with_psi(m_star, g, support);
  const double s = static_cast<double>(geo.s);
  const double sqrt2 = std::sqrt(2.0);

  ConditionReport rep;
  rep.spectral_gap = geo.spectral_gap;
  rep.min_abs_u1 = geo.min_abs_u1;
  rep.rescaled = terms_from(geo, sigma).rescaled;

  double xi = 0.0;
  if (geo.norm_cross > 0.0) xi = std::max(xi, geo.masked_norm_cross / geo.norm_cross - 1.0);
  if (geo.norm_offsupport > 0.0) xi = std::max(xi, geo.masked_norm_offsupport / geo.norm_offsupport - 1.0);
  rep.xi = xi;

  const double noise_cross = 2.0 * sigma * std::sqrt(geo.dmax_cross * safe_log(geo.d));
  const double base = geo.phi_jj * geo.spectral_gap;
  auto set = [&](std::size_t k, const char* name, double lhs, double rhs, bool strict) {
    rep.ineq[k] = {name, lhs, rhs, strict, strict ? lhs < rhs : lhs <= rhs};
  };
  set(0, "support block",
      geo.norm_jj * geo.psi_jj + 2.0 * sigma * std::sqrt(geo.dmax_jj * safe_log(geo.s)) + s * rho,
      base * geo.min_abs_u1 / (2.0 * sqrt2 * s), false);
  set(1, "cross-block penalty", noise_cross + geo.max_cross, rho, true);
  set(2, "cross-block spectrum", (1.0 + xi) * (noise_cross + geo.norm_cross) * (1.0 + std::sqrt(s)),
      base / (2.0 * s) * (1.0 - geo.min_abs_u1 / sqrt2), false);
  set(3, "off-support spectrum", (1.0 + xi) * geo.norm_offsupport,
      base / (2.0 * s) * (1.0 - geo.min_abs_u1 / (2.0 * sqrt2)), false);
  set(4, "off-support penalty", 2.0 * sigma * std::sqrt(geo.dmax_offsupport * safe_log(geo.d)), rho, true);
  return rep;
}

}  // namespace spca
