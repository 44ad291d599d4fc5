#include "spca/harness.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "spca/baselines.hpp"
#include "spca/errors.hpp"
#include "spca/numerics.hpp"
#include "spca/parallel.hpp"
#include "spca/rng.hpp"
#include "spca/spca.hpp"

namespace spca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

std::uint64_t trial_seed(std::uint64_t seed, const Bucket& b, std::size_t rep) {
  return derive_seed(seed, {bits(b.lo), bits(b.hi), static_cast<std::uint64_t>(rep)});
}

// Rows of `q` [0, filled) are orthonormal; fills the rest with a random
// orthonormal completion by twice-applied modified Gram-Schmidt.
void complete_basis(std::vector<std::vector<double>>& q, std::size_t filled, Rng& rng) {
  const std::size_t d = q.size();
  std::normal_distribution<double> normal;
  for (std::size_t k = filled; k < d; ++k) {
    for (;;) {
      std::vector<double> v(d);
      for (double& x : v) x = normal(rng);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          const double c = dot(v, q[j]);
          for (std::size_t i = 0; i < d; ++i) v[i] -= c * q[j][i];
        }
      }
      const double nv = norm2(v);
      if (nv > 1e-8) {
        for (double& x : v) x /= nv;
        q[k] = std::move(v);
        break;
      }
    }
  }
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out = s.substr(b, e - b);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + cell.size() && std::isfinite(out);
}

bool is_na(const std::string& cell) { return cell == "NA"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Numeric table with optional header row and optional leading label column.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> cells;  // data cells only
  std::size_t first_data_line = 1;             // 1-based line number
  std::size_t col_offset = 0;                  // 1 when a label column was dropped
};

Table read_table(const std::string& text, const std::string& source) {
  std::vector<std::string> lines = split_lines(text);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(source + ": empty matrix file", 0, 0);
  Table t;
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : lines) rows.push_back(split_row(l));

  bool header = false;
  for (const auto& c : rows.front()) {
    double v = 0.0;
    if (!parse_number(c, v) && !is_na(c)) header = true;
  }
  std::size_t start = 0;
  if (header) {
    t.names = rows.front();
    start = 1;
    // R-style export: blank first header cell and a label column.
    if (!t.names.empty() && t.names.front().empty()) {
      t.names.erase(t.names.begin());
      t.col_offset = 1;
    }
  }
  t.first_data_line = start + 1;
  for (std::size_t r = start; r < rows.size(); ++r) {
    auto row = rows[r];
    if (t.col_offset == 1) {
      if (row.empty()) throw ParseError(source + ": missing label column", r + 1, 1);
      row.erase(row.begin());
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

}  // namespace

IndexSet random_support(std::size_t d, std::size_t s, std::uint64_t seed) {
  if (s < 1 || s > d) throw InvalidInput("random_support: need 1 <= s <= d");
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t k = 0; k < s; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, d - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  IndexSet out(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(out.begin(), out.end());
  return out;
}

SymMatrix observe(const SymMatrix& m_star, const ObservationGraph& g, double sigma, std::uint64_t seed) {
  if (g.n() != m_star.dim()) throw InvalidInput("observe: dimension mismatch");
  if (!(sigma >= 0.0)) throw InvalidInput("observe: sigma must be nonnegative");
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  SymMatrix m(m_star.dim());
  for (std::size_t i = 0; i < m_star.dim(); ++i) {
    for (std::size_t j = i; j < m_star.dim(); ++j) {
      if (!g.has_edge(i, j)) continue;
      const double n = sigma > 0.0 ? noise(rng) : 0.0;
      m.set(i, j, m_star(i, j) + n);
    }
  }
  return m;
}

ProblemInstance gen_instance(std::size_t d, const IndexSet& support, double gap, double sigma,
                             const ObservationGraph& graph, std::uint64_t seed) {
  if (d == 0) throw InvalidInput("gen_instance: d must be positive");
  if (graph.n() != d) throw InvalidInput("gen_instance: graph size differs from d");
  if (!(gap > 0.0) || !std::isfinite(gap)) throw InvalidInput("gen_instance: gap must be positive");
  if (!(sigma >= 0.0)) throw InvalidInput("gen_instance: sigma must be nonnegative");
  const IndexSet j = normalize_index_set(support, d);
  if (j.empty()) throw InvalidInput("gen_instance: support must be nonempty");

  Rng rng = make_rng(seed, {1});
  std::normal_distribution<double> normal;
  std::vector<double> lam(d);
  for (std::size_t k = 1; k < d; ++k) lam[k] = normal(rng);
  std::sort(lam.begin() + 1, lam.end(), std::greater<>());
  lam[0] = (d >= 2 ? lam[1] : normal(rng)) + gap;

  std::vector<std::vector<double>> q(d, std::vector<double>(d, 0.0));
  const double entry = 1.0 / std::sqrt(static_cast<double>(j.size()));
  for (std::size_t i : j) q[0][i] = entry;
  complete_basis(q, 1, rng);

  std::vector<double> flat(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double v = 0.0;
      for (std::size_t k = 0; k < d; ++k) v += lam[k] * q[k][a] * q[k][b];
      flat[a * d + b] = v;
      flat[b * d + a] = v;
    }
  }

  ProblemInstance inst;
  inst.m_star = SymMatrix(d, flat);
  inst.support = j;
  inst.sigma = sigma;
  inst.graph = graph;
  inst.seed = seed;
  inst.eigenvalues = lam;
  inst.m = observe(inst.m_star, graph, sigma, derive_seed(seed, {2}));
  return inst;
}

ProblemInstance gen_instance(std::size_t d, std::size_t s, double gap, double sigma, const ObservationGraph& graph,
                             std::uint64_t seed) {
  return gen_instance(d, random_support(d, s, derive_seed(seed, {0})), gap, sigma, graph, seed);
}

std::vector<Bucket> default_buckets() {
  std::vector<Bucket> out;
  for (int k = 0; k < 9; ++k) out.push_back({2.0 * k, 2.0 * k + 2.0});
  return out;
}

ExperimentResult run_bucket_experiment(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw InvalidInput("experiment: reps must be at least 1");
  if (cfg.buckets.empty()) throw InvalidInput("experiment: no buckets");
  if (cfg.s < 2 || cfg.s > cfg.d) throw InvalidInput("experiment: need 2 <= s <= d");
  const std::vector<double> grid = cfg.rho_grid.empty() ? default_rho_grid() : cfg.rho_grid;

  const std::size_t total = cfg.buckets.size() * cfg.reps;
  std::vector<TrialRecord> trials(total);
  parallel_for(total, cfg.threads, [&](std::size_t task) {
    const std::size_t b = task / cfg.reps;
    const std::size_t r = task % cfg.reps;
    const Bucket& bucket = cfg.buckets[b];
    const std::uint64_t base = trial_seed(cfg.seed, bucket, r);
    TrialRecord rec;
    rec.bucket = b;
    rec.rep = r;
    const IndexSet j = random_support(cfg.d, cfg.s, derive_seed(base, {0}));
    BucketedDraw draw;
    try {
      draw = random_graph_bucketed(cfg.d, cfg.budget, j, bucket.lo, bucket.hi, cfg.max_tries, derive_seed(base, {1}));
    } catch (const BucketExhausted&) {
      rec.exhausted = true;
      trials[task] = rec;
      return;
    }
    rec.ratio = draw.ratio;
    const ProblemInstance inst = gen_instance(cfg.d, j, cfg.gap, cfg.sigma, draw.graph, derive_seed(base, {2}));
    const TuningTrace trace = tune_rho(inst.m, grid, cfg.a, cfg.sdp);
    rec.chosen_rho = trace.chosen_rho;
    rec.support_size = trace.chosen_support.size();
    rec.success = trace.chosen_support == inst.support;
    try {
      rec.rescaled = rescaled_parameter(inst.m_star, inst.graph, cfg.sigma, inst.support);
    } catch (const Error&) {
      rec.rescaled = kNaN;
    }
    trials[task] = rec;
  });

  ExperimentResult out;
  for (std::size_t b = 0; b < cfg.buckets.size(); ++b) {
    ExperimentRow row;
    row.bucket_lo = cfg.buckets[b].lo;
    row.bucket_hi = cfg.buckets[b].hi;
    row.gap = cfg.gap;
    row.sigma = cfg.sigma;
    row.reps = cfg.reps;
    std::size_t wins = 0;
    double sum = 0.0;
    std::size_t finite = 0;
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      const TrialRecord& t = trials[b * cfg.reps + r];
      row.skipped = row.skipped || t.exhausted;
      wins += t.success ? 1 : 0;
      if (!t.exhausted && std::isfinite(t.rescaled)) {
        sum += t.rescaled;
        ++finite;
      }
    }
    row.rate = row.skipped ? kNaN : static_cast<double>(wins) / static_cast<double>(cfg.reps);
    row.mean_rescaled = row.skipped || finite == 0 ? kNaN : sum / static_cast<double>(finite);
    out.rows.push_back(row);
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const ExperimentRow& x, const ExperimentRow& y) { return x.bucket_lo < y.bucket_lo; });
  out.trials = std::move(trials);
  return out;
}

LoadedMatrix parse_matrix_csv(const std::string& text, const std::string& source) {
  const Table t = read_table(text, source);
  const std::size_t d = t.names.empty() ? t.cells.front().size() : t.names.size();
  if (t.cells.size() != d) {
    throw ParseError(source + ": expected " + std::to_string(d) + " data rows, found " + std::to_string(t.cells.size()),
                     t.first_data_line + std::min(t.cells.size(), d), 0);
  }
  std::vector<double> values(d * d, 0.0);
  std::vector<std::uint8_t> seen(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t line = t.first_data_line + i;
    if (t.cells[i].size() != d) {
      throw ParseError(source + ": expected " + std::to_string(d) + " columns, found " +
                           std::to_string(t.cells[i].size()),
                       line, 0);
    }
    for (std::size_t j = 0; j < d; ++j) {
      const std::string& c = t.cells[i][j];
      const std::size_t col = j + 1 + t.col_offset;
      if (is_na(c)) continue;
      double v = 0.0;
      if (!parse_number(c, v)) throw ParseError(source + ": not a number: '" + c + "'", line, col);
      values[i * d + j] = v;
      seen[i * d + j] = 1;
    }
  }
  ObservationGraph g(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const std::size_t line = t.first_data_line + i;
      const std::size_t col = j + 1 + t.col_offset;
      if (seen[i * d + j] != seen[j * d + i]) throw ParseError(source + ": NA pattern is not symmetric", line, col);
      if (!seen[i * d + j]) continue;
      const double a = values[i * d + j];
      const double b = values[j * d + i];
      if (std::fabs(a - b) > 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)})) {
        throw ParseError(source + ": matrix is not symmetric", line, col);
      }
      g.add_edge(i, j);
    }
  }
  LoadedMatrix out;
  out.m = SymMatrix(d, values);
  out.graph = std::move(g);
  out.names = t.names;
  return out;
}

SymMatrix parse_mask_csv(const std::string& text, const std::string& source) {
  const Table t = read_table(text, source);
  const std::size_t d = t.names.empty() ? t.cells.front().size() : t.names.size();
  if (t.cells.size() != d) throw ParseError(source + ": mask is not square", t.first_data_line, 0);
  std::vector<double> v(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t line = t.first_data_line + i;
    if (t.cells[i].size() != d) throw ParseError(source + ": ragged mask row", line, 0);
    for (std::size_t j = 0; j < d; ++j) {
      const std::string& c = t.cells[i][j];
      if (c != "0" && c != "1") throw ParseError(source + ": mask entries must be 0 or 1", line, j + 1 + t.col_offset);
      v[i * d + j] = c == "1" ? 1.0 : 0.0;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (v[i * d + j] != v[j * d + i]) {
        throw ParseError(source + ": mask is not symmetric", t.first_data_line + i, j + 1 + t.col_offset);
      }
    }
  }
  return SymMatrix(d, v);
}

LoadedMatrix load_matrix_csv(const std::string& path, const std::optional<std::string>& mask_path) {
  LoadedMatrix out = parse_matrix_csv(read_file(path), path);
  if (mask_path) {
    const SymMatrix mask = parse_mask_csv(read_file(*mask_path), *mask_path);
    if (mask.dim() != out.m.dim()) throw ParseError(*mask_path + ": mask size differs from matrix", 0, 0);
    const ObservationGraph mg = ObservationGraph::from_mask(mask);
    for (std::size_t i = 0; i < mask.dim(); ++i) {
      for (std::size_t j = i; j < mask.dim(); ++j) {
        if (!mg.has_edge(i, j)) out.graph.remove_edge(i, j);
      }
    }
  }
  // Zero imputation outside the observed set.
  out.m = hadamard(adjacency(out.graph), out.m);
  return out;
}

std::string format_matrix_csv(const SymMatrix& m, const ObservationGraph* g, const std::vector<std::string>& names) {
  std::string out;
  if (!names.empty()) {
    for (std::size_t j = 0; j < names.size(); ++j) out += (j ? "," : "") + names[j];
    out += "\n";
  }
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) out += ",";
      out += (g != nullptr && !g->has_edge(i, j)) ? std::string("NA") : fmt17(m(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string format_mask_csv(const ObservationGraph& g) {
  std::string out;
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) {
      if (j) out += ",";
      out += g.has_edge(i, j) ? "1" : "0";
    }
    out += "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("write to " + path + " failed");
}

std::string format_rows_csv(std::vector<ExperimentRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ExperimentRow& x, const ExperimentRow& y) { return x.bucket_lo < y.bucket_lo; });
  std::string out = "bucket_lo,bucket_hi,gap,sigma,reps,rate,mean_rescaled\n";
  for (const auto& r : rows) {
    out += fmt6(r.bucket_lo) + "," + fmt6(r.bucket_hi) + "," + fmt6(r.gap) + "," + fmt6(r.sigma) + "," +
           std::to_string(r.reps) + "," + fmt6(r.rate) + "," + fmt6(r.mean_rescaled) + "\n";
  }
  return out;
}

void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  write_text_file(path, format_rows_csv(rows));
}

std::vector<ExperimentRow> parse_rows_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || trim(lines.front()) != "bucket_lo,bucket_hi,gap,sigma,reps,rate,mean_rescaled") {
    throw ParseError("experiment CSV: missing or unexpected header", 1, 0);
  }
  std::vector<ExperimentRow> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) continue;
    const auto cells = split_row(lines[l]);
    if (cells.size() != 7) throw ParseError("experiment CSV: expected 7 columns", l + 1, 0);
    double v[7];
    for (std::size_t c = 0; c < 7; ++c) {
      const char* b = cells[c].c_str();
      char* e = nullptr;
      v[c] = std::strtod(b, &e);
      if (e != b + cells[c].size() || cells[c].empty()) {
        throw ParseError("experiment CSV: not a number: '" + cells[c] + "'", l + 1, c + 1);
      }
    }
    ExperimentRow r;
    r.bucket_lo = v[0];
    r.bucket_hi = v[1];
    r.gap = v[2];
    r.sigma = v[3];
    r.reps = static_cast<std::size_t>(v[4]);
    r.rate = v[5];
    r.mean_rescaled = v[6];
    r.skipped = std::isnan(r.rate);
    rows.push_back(r);
  }
  return rows;
}

const std::vector<std::string>& pitprops_variables() {
  static const std::vector<std::string> names = {"topdiam", "length", "moist",   "testsg", "ovensg",
                                                 "ringtop", "ringbut", "bowmax", "bowdist", "whorls",
                                                 "clear",   "knots",   "diaknot"};
  return names;
}

const std::vector<std::string>& pitprops_support_names() {
  static const std::vector<std::string> names = {"topdiam", "length", "ringbut", "bowmax", "bowdist", "whorls"};
  return names;
}

IndexSet pitprops_support(const LoadedMatrix& data) {
  if (data.m.dim() != 13) throw InvalidInput("pitprops: expected a 13x13 matrix, got d = " + std::to_string(data.m.dim()));
  if (data.names.size() != 13) throw InvalidInput("pitprops: the matrix file needs a header row of variable names");
  IndexSet j;
  for (const auto& want : pitprops_support_names()) {
    bool found = false;
    for (std::size_t i = 0; i < data.names.size(); ++i) {
      if (lower(data.names[i]) == want) {
        j.push_back(i);
        found = true;
      }
    }
    if (!found) throw InvalidInput("pitprops: variable '" + want + "' not found in header");
  }
  return normalize_index_set(j, 13);
}

PitpropsResult pitprops_experiment(const PitpropsConfig& cfg) {
  return pitprops_experiment(load_matrix_csv(cfg.matrix_path), cfg);
}

PitpropsResult pitprops_experiment(const LoadedMatrix& data, const PitpropsConfig& cfg) {
  if (cfg.reps < 1) throw InvalidInput("pitprops: reps must be at least 1");
  if (cfg.buckets.empty()) throw InvalidInput("pitprops: no buckets");
  const IndexSet j = pitprops_support(data);
  const SymMatrix& m_star = data.m;
  const std::size_t d = m_star.dim();
  const std::vector<double> grid = cfg.rho_grid.empty() ? default_rho_grid() : cfg.rho_grid;
  const std::vector<double> mc_grid = cfg.mc_rho_grid.empty() ? grid : cfg.mc_rho_grid;
  std::vector<std::size_t> ks = cfg.dtspca_k;
  if (ks.empty()) {
    for (std::size_t k = 1; k <= d; ++k) ks.push_back(k);
  }
  const std::vector<double> thresholds =
      cfg.itspca_thresholds.empty() ? make_grid(0.0, 1.5, 0.05) : cfg.itspca_thresholds;
  const EigDecomp ed = eigh(m_star);
  const double gap = ed.values[0] - ed.values[1];

  struct Outcome {
    bool exhausted = false;
    bool sdp = false;
    std::vector<std::uint8_t> dt, it, mc;
  };
  const std::size_t total = cfg.buckets.size() * cfg.reps;
  std::vector<Outcome> outcomes(total);
  parallel_for(total, cfg.threads, [&](std::size_t task) {
    const Bucket& bucket = cfg.buckets[task / cfg.reps];
    const std::uint64_t base = trial_seed(cfg.seed, bucket, task % cfg.reps);
    Outcome o;
    BucketedDraw draw;
    try {
      draw = random_graph_bucketed(d, cfg.budget, j, bucket.lo, bucket.hi, cfg.max_tries, derive_seed(base, {1}));
    } catch (const BucketExhausted&) {
      o.exhausted = true;
      outcomes[task] = std::move(o);
      return;
    }
    const SymMatrix m = observe(m_star, draw.graph, cfg.sigma, derive_seed(base, {2}));
    o.sdp = tune_rho(m, grid, cfg.a).chosen_support == j;
    if (cfg.baselines) {
      for (std::size_t k : ks) o.dt.push_back(dtspca(m, k).support == j);
      for (double th : thresholds) {
        bool ok = false;
        try {
          ok = itspca(m, th).support == j;
        } catch (const ThresholdTooLarge&) {
          ok = false;
        }
        o.it.push_back(ok);
      }
      const CompletionResult completed = complete_nuclear(m, draw.graph);
      SdpSolver solver;
      for (double rho : mc_grid) o.mc.push_back(solver.solve(completed.y, rho).support == j);
    }
    outcomes[task] = std::move(o);
  });

  PitpropsResult res;
  res.support = j;
  for (std::size_t b = 0; b < cfg.buckets.size(); ++b) {
    ExperimentRow row;
    row.bucket_lo = cfg.buckets[b].lo;
    row.bucket_hi = cfg.buckets[b].hi;
    row.gap = gap;
    row.sigma = cfg.sigma;
    row.reps = cfg.reps;
    row.mean_rescaled = kNaN;
    std::size_t wins = 0;
    std::vector<std::size_t> dt(ks.size(), 0), it(thresholds.size(), 0), mc(mc_grid.size(), 0);
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      const Outcome& o = outcomes[b * cfg.reps + r];
      if (o.exhausted) {
        row.skipped = true;
        continue;
      }
      wins += o.sdp;
      for (std::size_t q = 0; q < o.dt.size(); ++q) dt[q] += o.dt[q];
      for (std::size_t q = 0; q < o.it.size(); ++q) it[q] += o.it[q];
      for (std::size_t q = 0; q < o.mc.size(); ++q) mc[q] += o.mc[q];
    }
    const double reps = static_cast<double>(cfg.reps);
    auto best = [&](const std::vector<std::size_t>& counts) {
      const std::size_t top = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
      ExperimentRow r = row;
      r.rate = row.skipped ? kNaN : static_cast<double>(top) / reps;
      return r;
    };
    ExperimentRow sdp_row = row;
    sdp_row.rate = row.skipped ? kNaN : static_cast<double>(wins) / reps;
    res.sdp_rows.push_back(sdp_row);
    if (cfg.baselines) {
      res.dtspca_rows.push_back(best(dt));
      res.itspca_rows.push_back(best(it));
      res.mc_sdp_rows.push_back(best(mc));
    }
  }
  return res;
}

}  // namespace spca
