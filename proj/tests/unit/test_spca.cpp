#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spca/errors.hpp"
#include "spca/harness.hpp"
#include "spca/numerics.hpp"
#include "spca/spca.hpp"

using spca::SymMatrix;

namespace {

SymMatrix spike(std::size_t d, const spca::IndexSet& j, double lambda) {
  std::vector<double> u(d, 0.0);
  for (std::size_t i : j) u[i] = 1.0 / std::sqrt(static_cast<double>(j.size()));
  return SymMatrix::outer(u, lambda);
}

// Permutes rows and columns: out(p[i], p[j]) = a(i, j).
SymMatrix permute(const SymMatrix& a, const std::vector<std::size_t>& p) {
  SymMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) out.set(p[i], p[j], a(i, j));
  return out;
}

spca::ObservationGraph permute(const spca::ObservationGraph& g, const std::vector<std::size_t>& p) {
  spca::ObservationGraph out(g.n());
  for (const auto& [i, j] : g.edges()) out.add_edge(p[i], p[j]);
  return out;
}

spca::IndexSet permute(const spca::IndexSet& s, const std::vector<std::size_t>& p) {
  spca::IndexSet out;
  for (std::size_t i : s) out.push_back(p[i]);
  std::sort(out.begin(), out.end());
  return out;
}

// Synthetic instance whose G_JJ is connected.
spca::ProblemInstance connected_instance(std::size_t d, std::size_t s, double gap, std::size_t budget,
                                         std::uint64_t seed) {
  const spca::IndexSet j = spca::random_support(d, s, seed);
  const auto draw = spca::random_graph_bucketed(d, budget, j, 0.0, 1e300, 10000, seed + 1);
  return spca::gen_instance(d, j, gap, 0.0, draw.graph, seed + 2);
}

}  // namespace

TEST_CASE("recover_support examples") {
  CHECK(spca::recover_support(spike(6, {0, 1}, 5.0), 0.1).support == spca::IndexSet{0, 1});
  CHECK(spca::recover_support(SymMatrix(5), 0.3).support.empty());
  CHECK(spca::recover_support(SymMatrix::diagonal({3.0, 1.0}), 0.5).support == spca::IndexSet{0});
}

TEST_CASE("criterion arithmetic") {
  CHECK(spca::criterion_value(4.0, 4.0, 10, 10, 0.5) == doctest::Approx(0.5));
  CHECK(spca::criterion_value(0.8, 1.0, 2, 10, 0.5) == doctest::Approx(0.8));
  CHECK_THROWS_AS(spca::criterion_value(1.0, 0.0, 2, 10, 0.5), spca::DegenerateBaseline);
  CHECK_THROWS_AS(spca::criterion(SymMatrix(3), 0.1, 0.5), spca::DegenerateBaseline);
  CHECK_THROWS_AS(spca::criterion(SymMatrix::identity(3), 0.1, 1.5), spca::InvalidInput);
}

TEST_CASE("criterion prefers the sparse solution on a perturbed spike") {
  const spca::IndexSet j{2, 3, 7};
  // A constant 0.1 offset makes X̂_0 dense; ρ = 0.2 removes it.
  const SymMatrix m = spike(10, j, 5.0) + SymMatrix::outer(std::vector<double>(10, 1.0), 0.1);
  CHECK(spca::recover_support(m, 0.0).support.size() == 10);
  for (double a : {0.4, 0.5, 0.7}) {
    const double c0 = spca::criterion(m, 0.0, a);
    const double c = spca::criterion(m, 0.2, a);
    CHECK(c > c0);
  }
  CHECK(spca::recover_support(m, 0.2).support == j);
}

TEST_CASE("tune_rho grid handling and tie-breaking") {
  const SymMatrix m = spike(6, {0, 1}, 5.0);
  const auto one = spca::tune_rho(m, {0.2}, 0.5);
  CHECK(one.chosen_rho == 0.2);
  CHECK(one.chosen_index == 0);

  // Both ρ give the same support and the same explained variance
  // ratio up to the solver tolerance on this diagonal instance.
  const SymMatrix diag = SymMatrix::diagonal({1.0, 0.0, 0.0});
  const auto tie = spca::tune_rho(diag, {0.0, 0.1}, 0.5);
  CHECK(tie.supports[0] == tie.supports[1]);
  CHECK(tie.chosen_rho == 0.1);

  const auto desc = spca::tune_rho(m, {0.5, 0.1, 0.3}, 0.5);
  CHECK(desc.grid == std::vector<double>{0.5, 0.1, 0.3});
  CHECK(std::find(desc.grid.begin(), desc.grid.end(), desc.chosen_rho) != desc.grid.end());
  for (double c : desc.criteria) CHECK(c <= desc.criteria[desc.chosen_index] + spca::kCriterionTieTol);
  CHECK_THROWS_AS(spca::tune_rho(m, {}, 0.5), spca::InvalidInput);
  CHECK_THROWS_AS(spca::tune_rho(m, {-0.1}, 0.5), spca::InvalidInput);
}

TEST_CASE("default grid") {
  const auto g = spca::default_rho_grid();
  REQUIRE(g.size() == 40);
  CHECK(g.front() == doctest::Approx(0.025));
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(spca::make_grid(0.1, 0.3, 0.1).size() == 3);
}

TEST_CASE("tune_rho recovers J on a desk-scale synthetic instance") {
  const spca::IndexSet j = spca::random_support(50, 10, 1);
  const auto draw = spca::random_graph_bucketed(50, 1250, j, 0.0, 2.0, 100000, 2);
  const auto inst = spca::gen_instance(50, j, 10.0, 0.0, draw.graph, 3);
  const auto tr = spca::tune_rho(inst.m, spca::default_rho_grid(), 0.5);
  CHECK(tr.chosen_support == j);
  for (bool c : tr.converged) CHECK(c);
}

TEST_CASE("theoretical rho") {
  const spca::IndexSet j{0, 2};
  CHECK(spca::theoretical_rho(spike(5, j, 3.0), spca::ObservationGraph::complete(5), 0.0, j) == 0.0);
  CHECK(spca::theoretical_rho_formula(1.0, 4.0, 3.0, std::exp(2.0), 0.5) ==
        doctest::Approx(4.0 * std::sqrt(2.0) + 0.5).epsilon(1e-14));

  const auto inst = connected_instance(20, 5, 4.0, 200, 11);
  const spca::IndexSet jc = spca::complement_set(inst.support, 20);
  std::size_t cross = 0, off = 0;
  for (std::size_t v = 0; v < 20; ++v) {
    std::size_t dc = 0, doff = 0;
    for (std::size_t w = 0; w < 20; ++w) {
      const bool vin = std::binary_search(inst.support.begin(), inst.support.end(), v);
      const bool win = std::binary_search(inst.support.begin(), inst.support.end(), w);
      if (!inst.graph.has_edge(v, w)) continue;
      if (vin != win) ++dc;
      if (!vin && !win) ++doff;
    }
    cross = std::max(cross, dc);
    off = std::max(off, doff);
  }
  double offmax = 0.0;
  for (std::size_t r : jc)
    for (std::size_t c : inst.support) offmax = std::max(offmax, std::fabs(inst.m_star(r, c)));
  const double ref =
      2.0 * 0.7 * std::sqrt(static_cast<double>(std::max(cross, off)) * std::log(20.0)) + offmax;
  CHECK(spca::theoretical_rho(inst.m_star, inst.graph, 0.7, inst.support) == doctest::Approx(ref).epsilon(1e-12));
  CHECK_THROWS_AS(spca::theoretical_rho(inst.m_star, inst.graph, 0.7, spca::full_set(20)), spca::InvalidInput);
}

TEST_CASE("rescaled parameter on a fully observed spike") {
  const spca::IndexSet j{1, 3, 4};
  const SymMatrix m_star = spike(7, j, 2.0);
  const auto g = spca::ObservationGraph::complete(7);
  CHECK(spca::rescaled_parameter(m_star, g, 0.0, j) == doctest::Approx(0.0).scale(1.0));
  double prev = 0.0;
  for (double sigma : {0.01, 0.1, 1.0, 10.0}) {
    const double r = spca::rescaled_parameter(m_star, g, sigma, j);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("rescaled parameter term by term against independent norms") {
  const auto inst = connected_instance(50, 10, 5.0, 1250, 21);
  const auto& j = inst.support;
  const spca::IndexSet jc = spca::complement_set(j, 50);
  const auto t = spca::rescaled_terms(inst.m_star, inst.graph, 0.0, j);

  const Eigen::MatrixXd m = oracle::to_eigen(inst.m_star);
  auto sub = [&](const spca::IndexSet& r, const spca::IndexSet& c) {
    Eigen::MatrixXd out(r.size(), c.size());
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = 0; b < c.size(); ++b) out(a, b) = m(r[a], c[b]);
    return out;
  };
  const auto gjj = spca::induced_subgraph(inst.graph, j);
  const double phi = oracle::laplacian_spectrum(gjj)[1];
  const auto gc = spca::complement(gjj);
  const double psi = std::max(static_cast<double>(spca::max_degree(gjj)) - phi,
                              static_cast<double>(spca::max_degree(gc)) - std::max(0.0, oracle::laplacian_spectrum(gc)[1]));
  const auto ev = oracle::eigenvalues(inst.m_star);
  const Eigen::VectorXd u1 = oracle::top_eigenvector(inst.m_star);
  double min_u = 1e300;
  for (std::size_t i : j) min_u = std::min(min_u, std::fabs(u1(static_cast<Eigen::Index>(i))));

  CHECK(t.irregularity_term == doctest::Approx(oracle::spectral_norm(sub(j, j)) * psi).epsilon(1e-9));
  CHECK(t.noise_jj == 0.0);
  CHECK(t.noise_cross == 0.0);
  CHECK(t.cross_term == doctest::Approx(10.0 * oracle::spectral_norm(sub(jc, j))).epsilon(1e-9).scale(1e-12));
  CHECK(t.offsupport_term == doctest::Approx(oracle::spectral_norm(sub(jc, jc)) / std::sqrt(10.0)).epsilon(1e-9));
  CHECK(t.denominator == doctest::Approx(phi * (ev[0] - ev[1]) * min_u / 10.0).epsilon(1e-9));
  CHECK(min_u == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-10));
  CHECK(t.rescaled == doctest::Approx(t.numerator / t.denominator));
}

TEST_CASE("rescaled parameter errors, monotonicity and relabeling invariance") {
  const spca::IndexSet j{0, 1};
  const SymMatrix m_star = spike(4, j, 3.0);
  CHECK_THROWS_AS(spca::rescaled_parameter(m_star, spca::ObservationGraph::from_edges(4, {{0, 0}, {1, 1}}), 0.0, j),
                  spca::Disconnected);
  CHECK_THROWS_AS(spca::rescaled_parameter(m_star, spca::ObservationGraph::complete(4), 0.0, {0, 2}),
                  spca::InvalidInput);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = connected_instance(16, 4, 3.0, 150, 100 + seed);
    double r0 = 0.0;
    try {
      r0 = spca::rescaled_parameter(inst.m_star, inst.graph, 0.0, inst.support);
    } catch (const spca::IrregularityUndefined&) {
      continue;
    }
    const double r1 = spca::rescaled_parameter(inst.m_star, inst.graph, 0.5, inst.support);
    CHECK(r1 >= r0);
    std::vector<std::size_t> p(16);
    for (std::size_t i = 0; i < 16; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), spca::Rng(seed));
    const double rp = spca::rescaled_parameter(permute(inst.m_star, p), permute(inst.graph, p), 0.5,
                                               permute(inst.support, p));
    CHECK(rp == doctest::Approx(r1).epsilon(1e-8));
  }
}

TEST_CASE("sufficient conditions on the d = 2 example") {
  const SymMatrix m_star = SymMatrix::diagonal({2.0, 0.5});
  const auto g = spca::ObservationGraph::complete(2);
  const auto rep = spca::sufficient_conditions_report(m_star, g, 0.0, 0.5, {0});
  for (const auto& q : rep.ineq) {
    CHECK_FALSE(q.name.empty());
    CHECK(std::isfinite(q.lhs));
    CHECK(std::isfinite(q.rhs));
    CHECK(q.holds == (q.strict ? q.lhs < q.rhs : q.lhs <= q.rhs));
  }
  CHECK(rep.ineq[1].lhs == 0.0);
  CHECK(rep.ineq[1].rhs == 0.5);
  CHECK(rep.ineq[1].holds);
  CHECK(rep.spectral_gap == doctest::Approx(1.5));
  CHECK(rep.min_abs_u1 == 1.0);
  CHECK(rep.xi >= 0.0);
  CHECK(rep.rescaled >= 0.0);
}

TEST_CASE("sufficient conditions on a fully observed spike and under huge noise") {
  const spca::IndexSet j{0, 1, 2, 3};
  const SymMatrix m_star = spike(12, j, 10.0);
  const auto full = spca::sufficient_conditions_report(m_star, spca::ObservationGraph::complete(12), 0.0, 0.01, j);
  CHECK(full.all_hold());

  const auto inst = connected_instance(20, 4, 3.0, 250, 7);
  const auto noisy = spca::sufficient_conditions_report(inst.m_star, inst.graph, 1e6, 0.5, inst.support);
  CHECK_FALSE(noisy.ineq[0].holds);
  CHECK_FALSE(noisy.ineq[1].holds);
  CHECK_FALSE(noisy.ineq[4].holds);
  CHECK_FALSE(noisy.all_hold());
}

TEST_CASE("condition report is reproducible and scale invariant") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = connected_instance(14, 4, 6.0, 150, 300 + seed);
    spca::ConditionReport a;
    try {
      a = spca::sufficient_conditions_report(inst.m_star, inst.graph, 0.1, 0.2, inst.support);
    } catch (const spca::IrregularityUndefined&) {
      continue;
    }
    const auto b = spca::sufficient_conditions_report(inst.m_star, inst.graph, 0.1, 0.2, inst.support);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(a.ineq[k].lhs == b.ineq[k].lhs);
      CHECK(a.ineq[k].holds == b.ineq[k].holds);
    }
    // Homogeneous inequalities: scaling M*, σ and ρ by 4 keeps every flag.
    const auto c = spca::sufficient_conditions_report(4.0 * inst.m_star, inst.graph, 0.4, 0.8, inst.support);
    for (std::size_t k : {0u, 2u, 3u}) {
      CHECK(c.ineq[k].holds == a.ineq[k].holds);
      CHECK(c.ineq[k].lhs == doctest::Approx(4.0 * a.ineq[k].lhs).epsilon(1e-9).scale(1e-12));
    }
  }
}
