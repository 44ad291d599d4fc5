// Command-line front end. Support indices are 1-based here and 0-based in the
// library.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spca/baselines.hpp"
#include "spca/bounds.hpp"
#include "spca/errors.hpp"
#include "spca/graph.hpp"
#include "spca/harness.hpp"
#include "spca/kernels.hpp"
#include "spca/numerics.hpp"
#include "spca/rng.hpp"
#include "spca/sdp.hpp"
#include "spca/spca.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

std::string format_support(const spca::IndexSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k] + 1);
  return out + "}";
}

// Accepts the "{1,4,9}" form printed by the other subcommands.
spca::IndexSet parse_support(std::string text, std::size_t d) {
  std::erase(text, '{');
  std::erase(text, '}');
  spca::IndexSet out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (*end != '\0' || v < 1 || static_cast<std::size_t>(v) > d) {
      throw spca::InvalidInput("--support: '" + tok + "' is not an index in 1.." + std::to_string(d));
    }
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  if (out.empty()) throw spca::InvalidInput("--support is empty");
  return spca::normalize_index_set(out, d);
}

std::vector<spca::Bucket> parse_buckets(const std::string& text) {
  std::vector<spca::Bucket> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw spca::InvalidInput("--buckets: expected lo:hi, got '" + tok + "'");
    spca::Bucket b{std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))};
    if (!(b.lo < b.hi)) throw spca::InvalidInput("--buckets: need lo < hi in '" + tok + "'");
    out.push_back(b);
  }
  return out;
}

struct GridFlags {
  double start = 0.025;
  double stop = 1.0;
  double step = 0.025;
  std::vector<double> grid() const { return spca::make_grid(start, stop, step); }
};

void add_grid(CLI::App* app, GridFlags& g) {
  app->add_option("--grid-start", g.start, "first ρ")->capture_default_str();
  app->add_option("--grid-stop", g.stop, "last ρ (inclusive)")->capture_default_str();
  app->add_option("--grid-step", g.step, "ρ increment")->capture_default_str();
}

void print_rows(const char* label, const std::vector<spca::ExperimentRow>& rows) {
  for (const auto& r : rows) {
    std::printf("%-8s [%g, %g)  gap %-8.4g sigma %-6.3g reps %-4zu rate %-8.4g mean_rescaled %.4g%s\n", label,
                r.bucket_lo, r.bucket_hi, r.gap, r.sigma, r.reps, r.rate, r.mean_rescaled,
                r.skipped ? "  (skipped: bucket exhausted)" : "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse PCA support recovery from incomplete, noisy matrices"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  std::size_t g_d = 50, g_s = 10, g_budget = 1250;
  double g_gap = 10.0, g_sigma = 0.0;
  std::uint64_t g_seed = 0;
  std::string g_out, g_truth_out, g_mask_out;
  gen->add_option("--d", g_d)->capture_default_str();
  gen->add_option("--s", g_s)->capture_default_str();
  gen->add_option("--gap", g_gap)->capture_default_str();
  gen->add_option("--sigma", g_sigma)->capture_default_str();
  gen->add_option("--budget", g_budget, "observed entries")->capture_default_str();
  gen->add_option("--seed", g_seed)->capture_default_str();
  gen->add_option("--out", g_out, "observed matrix with NA cells")->required();
  gen->add_option("--truth-out", g_truth_out, "M* as CSV");
  gen->add_option("--mask-out", g_mask_out, "0/1 observation mask");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the penalized SDP at one ρ");
  std::string s_in, s_mask;
  double s_rho = 0.0, s_tol = spca::kDefaultSdpTol;
  int s_max_iter = spca::kDefaultSdpMaxIter;
  bool s_strict = false;
  solve->add_option("--in", s_in)->required();
  solve->add_option("--mask", s_mask);
  solve->add_option("--rho", s_rho)->required();
  solve->add_option("--tol", s_tol)->capture_default_str();
  solve->add_option("--max-iter", s_max_iter)->capture_default_str();
  solve->add_flag("--strict", s_strict, "exit 3 when the solver does not converge");

  // tune
  auto* tune = app.add_subcommand("tune", "Select ρ on a grid by the explained-variance criterion");
  std::string t_in, t_mask;
  double t_a = 0.5;
  bool t_strict = false;
  GridFlags t_grid;
  tune->add_option("--in", t_in)->required();
  tune->add_option("--mask", t_mask);
  tune->add_option("--a", t_a)->capture_default_str();
  add_grid(tune, t_grid);
  tune->add_flag("--strict", t_strict);

  // certify
  auto* cert = app.add_subcommand("certify", "Primal-dual witness and sufficient conditions");
  std::string c_truth, c_in, c_mask, c_support;
  double c_rho = 0.0, c_sigma = 0.0;
  cert->add_option("--truth", c_truth, "M* CSV")->required();
  cert->add_option("--in", c_in)->required();
  cert->add_option("--mask", c_mask);
  cert->add_option("--rho", c_rho)->required();
  cert->add_option("--support", c_support, "1-based, comma separated")->required();
  cert->add_option("--sigma", c_sigma, "noise level used by the condition report")->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Bucketed Monte-Carlo recovery experiment");
  std::string e_mode = "synthetic", e_out, e_matrix, e_buckets;
  spca::ExperimentConfig ec;
  spca::PitpropsConfig pc;
  GridFlags e_grid;
  double e_a = -1.0, e_sigma = -1.0;
  std::size_t e_budget = 0, e_reps = 0;
  bool e_no_baselines = false;
  exp->add_option("--mode", e_mode)->check(CLI::IsMember({"synthetic", "pitprops"}))->capture_default_str();
  exp->add_option("--out", e_out, "rows CSV")->required();
  exp->add_option("--matrix", e_matrix, "pitprops correlation CSV with a header of variable names");
  exp->add_option("--d", ec.d)->capture_default_str();
  exp->add_option("--s", ec.s)->capture_default_str();
  exp->add_option("--gap", ec.gap)->capture_default_str();
  exp->add_option("--sigma", e_sigma, "default 0 (synthetic) or 0.1 (pitprops)");
  exp->add_option("--budget", e_budget, "default 1250 (synthetic) or 100 (pitprops)");
  exp->add_option("--buckets", e_buckets, "lo:hi,lo:hi,... on ψ/φ of G_JJ");
  exp->add_option("--reps", e_reps, "default 20 (synthetic) or 50 (pitprops)");
  exp->add_option("--a", e_a, "default 0.5 (synthetic) or 0.4 (pitprops)");
  exp->add_option("--seed", ec.seed)->capture_default_str();
  exp->add_option("--threads", ec.threads, "0 for all cores")->capture_default_str();
  exp->add_option("--max-tries", ec.max_tries)->capture_default_str();
  exp->add_flag("--no-baselines", e_no_baselines);
  add_grid(exp, e_grid);

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Numerical checks of the perturbation bounds");
  std::string b_check;
  std::size_t b_n = 30, b_budget = 500, b_left = 10, b_trials = 10000, b_pairs = 100, b_rank = 2;
  double b_sigma = 1.0;
  std::uint64_t b_seed = 0;
  unsigned b_threads = 1;
  bnd->add_option("--check", b_check)->check(CLI::IsMember({"thm2", "thm3"}))->required();
  bnd->add_option("--n", b_n)->capture_default_str();
  bnd->add_option("--budget", b_budget)->capture_default_str();
  bnd->add_option("--left", b_left, "thm2: size of the left vertex set")->capture_default_str();
  bnd->add_option("--trials", b_trials, "thm2")->capture_default_str();
  bnd->add_option("--pairs", b_pairs, "thm3: random (Y, G) pairs")->capture_default_str();
  bnd->add_option("--rank", b_rank, "thm3: rank of Y")->capture_default_str();
  bnd->add_option("--sigma", b_sigma, "thm2")->capture_default_str();
  bnd->add_option("--seed", b_seed)->capture_default_str();
  bnd->add_option("--threads", b_threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  auto load = [](const std::string& path, const std::string& mask) {
    return spca::load_matrix_csv(path, mask.empty() ? std::nullopt : std::optional<std::string>(mask));
  };

  try {
    if (gen->parsed()) {
      const spca::ObservationGraph g = spca::random_graph(g_d, g_budget, spca::derive_seed(g_seed, {0x67}));
      const spca::ProblemInstance inst = spca::gen_instance(g_d, g_s, g_gap, g_sigma, g, g_seed);
      spca::write_text_file(g_out, spca::format_matrix_csv(inst.m, &inst.graph));
      if (!g_truth_out.empty()) spca::write_text_file(g_truth_out, spca::format_matrix_csv(inst.m_star));
      if (!g_mask_out.empty()) spca::write_text_file(g_mask_out, spca::format_mask_csv(inst.graph));
      std::printf("support %s\n", format_support(inst.support).c_str());
      std::printf("lambda1 %.10g lambda2 %.10g observed %zu of %zu\n", inst.eigenvalues[0],
                  g_d > 1 ? inst.eigenvalues[1] : 0.0, inst.graph.observed_entries(), g_d * g_d);
      return kExitOk;
    }

    if (solve->parsed()) {
      const spca::LoadedMatrix data = load(s_in, s_mask);
      spca::SdpOptions opts;
      opts.tol = s_tol;
      opts.max_iter = s_max_iter;
      const spca::Recovery r = spca::recover_support(data.m, s_rho, opts);
      const spca::SdpSolution& sol = r.solution;
      std::printf("kernels %s\n", spca::kernels::active().name);
      std::printf("support %s (size %zu)\n", format_support(r.support).c_str(), r.support.size());
      std::printf("objective %.10g\niterations %d\nprimal_residual %.3g\ndual_residual %.3g\nconverged %s\n",
                  sol.objective, sol.iterations, sol.primal_residual, sol.dual_residual,
                  sol.converged ? "yes" : "no");
      if (!sol.merit.empty()) std::printf("merit_oscillation %.3g\n", spca::merit_oscillation(sol.merit));
      if (sol.x_hat.dim() == data.m.dim() && sol.iterations > 0) {
        const spca::KktReport k = spca::kkt_report(data.m, s_rho, sol.x_hat, s_rho > 0 ? &sol.z_hat : nullptr);
        std::printf("kkt mu %.10g stationarity %.3g trace %.3g psd %.3g dual_psd %.3g subgradient %.3g\n", k.mu,
                    k.stationarity, k.trace_violation, k.psd_violation, k.dual_psd_violation,
                    k.subgradient_violation);
      }
      return (s_strict && !sol.converged) ? kExitNotConverged : kExitOk;
    }

    if (tune->parsed()) {
      const spca::LoadedMatrix data = load(t_in, t_mask);
      const spca::TuningTrace tr = spca::tune_rho(data.m, t_grid.grid(), t_a);
      bool all_converged = true;
      std::printf("%-10s %-14s %-6s %s\n", "rho", "criterion", "size", "converged");
      for (std::size_t k = 0; k < tr.grid.size(); ++k) {
        std::printf("%-10.5g %-14.8g %-6zu %s\n", tr.grid[k], tr.criteria[k], tr.supports[k].size(),
                    tr.converged[k] ? "yes" : "no");
        all_converged = all_converged && tr.converged[k];
      }
      std::printf("baseline %.10g\nchosen_rho %.6g\nsupport %s\n", tr.baseline, tr.chosen_rho,
                  format_support(tr.chosen_support).c_str());
      return (t_strict && !all_converged) ? kExitNotConverged : kExitOk;
    }

    if (cert->parsed()) {
      const spca::LoadedMatrix truth = spca::load_matrix_csv(c_truth);
      const spca::LoadedMatrix data = load(c_in, c_mask);
      if (truth.m.dim() != data.m.dim()) throw spca::InvalidInput("--truth and --in differ in dimension");
      const spca::IndexSet j = parse_support(c_support, data.m.dim());
      const spca::WitnessReport w = spca::witness_certificate(truth.m, data.graph, data.m, c_rho, j);
      std::printf("witness\n");
      std::printf("  sign consistency      %s\n", w.cond_sign ? "holds" : "fails");
      std::printf("  off-block |Z| < 1     %s (max %.6g)\n", w.cond_offblock ? "holds" : "fails", w.offblock_max);
      std::printf("  eigenvalue condition  %s (lambda1 block %.8g, full %.8g, |Z_JcJc| max %.6g)\n",
                  w.cond_eig ? "holds" : "fails", w.lambda1_block, w.lambda1_full, w.diag_block_max);
      std::printf("  block gap             %s (%.6g)\n", w.cond_gap ? "holds" : "fails", w.gap);
      std::printf("  certified             %s\n", w.certified ? "yes" : "no");
      try {
        const spca::ConditionReport cr = spca::sufficient_conditions_report(truth.m, data.graph, c_sigma, c_rho, j);
        std::printf("sufficient conditions (xi %.6g, rescaled %.6g)\n", cr.xi, cr.rescaled);
        for (const auto& q : cr.ineq) {
          std::printf("  %-22s %s  lhs %.6g %s rhs %.6g\n", q.name.c_str(), q.holds ? "holds" : "fails", q.lhs,
                      q.strict ? "<" : "<=", q.rhs);
        }
      } catch (const spca::Disconnected& e) {
        std::printf("sufficient conditions: not applicable (%s)\n", e.what());
      } catch (const spca::IrregularityUndefined& e) {
        std::printf("sufficient conditions: not applicable (%s)\n", e.what());
      }
      return kExitOk;
    }

    if (exp->parsed()) {
      const std::vector<double> grid = e_grid.grid();
      if (e_mode == "synthetic") {
        ec.sigma = e_sigma >= 0.0 ? e_sigma : 0.0;
        ec.budget = e_budget > 0 ? e_budget : 1250;
        ec.reps = e_reps > 0 ? e_reps : 20;
        ec.a = e_a >= 0.0 ? e_a : 0.5;
        ec.buckets = e_buckets.empty() ? spca::default_buckets() : parse_buckets(e_buckets);
        ec.rho_grid = grid;
        const spca::ExperimentResult res = spca::run_bucket_experiment(ec);
        spca::emit_csv(res.rows, e_out);
        print_rows("sdp", res.rows);
      } else {
        if (e_matrix.empty()) throw spca::InvalidInput("--mode pitprops needs --matrix");
        pc.matrix_path = e_matrix;
        pc.sigma = e_sigma >= 0.0 ? e_sigma : 0.1;
        pc.budget = e_budget > 0 ? e_budget : 100;
        pc.reps = e_reps > 0 ? e_reps : 50;
        pc.a = e_a >= 0.0 ? e_a : 0.4;
        if (!e_buckets.empty()) pc.buckets = parse_buckets(e_buckets);
        pc.rho_grid = grid;
        pc.seed = ec.seed;
        pc.threads = ec.threads;
        pc.max_tries = ec.max_tries;
        pc.baselines = !e_no_baselines;
        const spca::PitpropsResult res = spca::pitprops_experiment(pc);
        spca::emit_csv(res.sdp_rows, e_out);
        std::printf("support %s\n", format_support(res.support).c_str());
        print_rows("sdp", res.sdp_rows);
        print_rows("dtspca", res.dtspca_rows);
        print_rows("itspca", res.itspca_rows);
        print_rows("mc+sdp", res.mc_sdp_rows);
      }
      return kExitOk;
    }

    if (bnd->parsed()) {
      if (b_check == "thm3") {
        std::size_t violations = 0, skipped = 0;
        double worst = 0.0;
        for (std::size_t p = 0; p < b_pairs; ++p) {
          const spca::ObservationGraph g = spca::random_graph(b_n, b_budget, spca::derive_seed(b_seed, {p, 1}));
          spca::Rng rng = spca::make_rng(b_seed, {p, 2});
          std::normal_distribution<double> normal;
          spca::SymMatrix y(b_n);
          for (std::size_t r = 0; r < b_rank; ++r) {
            std::vector<double> v(b_n);
            for (double& x : v) x = normal(rng);
            y = y + normal(rng) * spca::SymMatrix::outer(v);
          }
          try {
            const spca::Theorem3Check c = spca::theorem3_check(y, g);
            violations += c.holds ? 0 : 1;
            if (c.rhs > 0) worst = std::max(worst, c.lhs / c.rhs);
          } catch (const spca::Error&) {
            ++skipped;
          }
        }
        std::printf("pairs %zu skipped %zu violations %zu max lhs/rhs %.6g\n", b_pairs, skipped, violations, worst);
        return violations == 0 ? kExitOk : 1;
      }
      const spca::ObservationGraph g = spca::random_graph(b_n, b_budget, spca::derive_seed(b_seed, {1}));
      spca::IndexSet left;
      for (std::size_t i = 0; i < b_left; ++i) left.push_back(i);
      const spca::BipartiteSubgraph pat = spca::bipartite_block(g, left);
      const double mn = static_cast<double>(pat.left.size() + pat.right.size());
      const double t = 2.0 * b_sigma * std::sqrt(static_cast<double>(pat.max_degree()) * std::log(mn));
      const spca::TailBoundCheck c = spca::theorem2_montecarlo(b_sigma, pat, t, b_trials, b_seed, b_threads);
      std::printf("m %zu n %zu dmax %zu t %.6g\nbound %.6g empirical %.6g se %.3g holds %s\n", pat.left.size(),
                  pat.right.size(), pat.max_degree(), t, c.bound, c.empirical, c.standard_error,
                  c.holds ? "yes" : "no");
      return c.holds ? kExitOk : 1;
    }
  } catch (const spca::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const spca::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: bad number (%s)\n", e.what());
    return kExitInvalid;
  }
  return kExitOk;
}
