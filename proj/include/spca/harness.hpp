#pragma once

// Synthetic instances, Monte-Carlo experiments, CSV ingestion and output.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spca/graph.hpp"
#include "spca/matrix.hpp"
#include "spca/sdp.hpp"

namespace spca {

struct ProblemInstance {
  SymMatrix m_star;
  IndexSet support;
  double sigma = 0.0;
  ObservationGraph graph;
  SymMatrix m;  // (M* + N) on observed entries, 0 elsewhere
  std::uint64_t seed = 0;
  std::vector<double> eigenvalues;  // of M*, descending
};

// Uniform size-s subset of [d].
IndexSet random_support(std::size_t d, std::size_t s, std::uint64_t seed);

// u1 = 1/√s on `support`; other eigenvectors complete u1 to a random
// orthonormal basis; λ2..λd ~ N(0,1) and λ1 = λ2 + gap. Noise N(0, σ²) is
// drawn once per observed unordered pair.
ProblemInstance gen_instance(std::size_t d, const IndexSet& support, double gap, double sigma,
                             const ObservationGraph& graph, std::uint64_t seed);
ProblemInstance gen_instance(std::size_t d, std::size_t s, double gap, double sigma, const ObservationGraph& graph,
                             std::uint64_t seed);

// M = A∘(M* + N) with N symmetric Gaussian on observed pairs.
SymMatrix observe(const SymMatrix& m_star, const ObservationGraph& g, double sigma, std::uint64_t seed);

struct Bucket {
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentRow {
  double bucket_lo = 0.0;
  double bucket_hi = 0.0;
  double gap = 0.0;
  double sigma = 0.0;
  std::size_t reps = 0;
  double rate = 0.0;           // NaN when the bucket could not be filled
  double mean_rescaled = 0.0;  // NaN when undefined
  bool skipped = false;

  bool operator==(const ExperimentRow&) const = default;
};

// One Monte-Carlo repetition.
struct TrialRecord {
  std::size_t bucket = 0;
  std::size_t rep = 0;
  bool exhausted = false;
  bool success = false;
  double ratio = 0.0;     // ψ/φ of the accepted G_JJ
  double rescaled = 0.0;  // NaN if undefined
  double chosen_rho = 0.0;
  std::size_t support_size = 0;
};

struct ExperimentConfig {
  std::size_t d = 50;
  std::size_t s = 10;
  double gap = 10.0;
  double sigma = 0.0;
  std::size_t budget = 1250;
  std::vector<Bucket> buckets;
  std::size_t reps = 20;
  std::vector<double> rho_grid;  // empty means the default grid
  double a = 0.5;
  std::uint64_t seed = 0;
  std::size_t max_tries = 100000;
  unsigned threads = 1;  // 0: hardware concurrency
  SdpOptions sdp;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // sorted by bucket_lo
  std::vector<TrialRecord> trials;  // bucket-major, in rep order
};

// Seeds of each repetition depend only on (seed, bucket bounds, rep), never on
// the gap, the thread count or the number of repetitions, so settings that
// share buckets also share supports and graphs.
ExperimentResult run_bucket_experiment(const ExperimentConfig& cfg);

std::vector<Bucket> default_buckets();  // [0,2), [2,4), …, [16,18)

struct LoadedMatrix {
  SymMatrix m;
  ObservationGraph graph;
  std::vector<std::string> names;  // empty without a header row
};

// d×d CSV of numbers or NA, optionally led by a row of variable names. The
// NA pattern defines the unobserved entries. With a mask file (0/1 CSV) an
// entry is observed only if the mask also marks it.
LoadedMatrix load_matrix_csv(const std::string& path, const std::optional<std::string>& mask_path = std::nullopt);
LoadedMatrix parse_matrix_csv(const std::string& text, const std::string& source = "<input>");
SymMatrix parse_mask_csv(const std::string& text, const std::string& source = "<input>");

// Writes M with NA at unobserved entries; header row of names when given.
std::string format_matrix_csv(const SymMatrix& m, const ObservationGraph* g = nullptr,
                              const std::vector<std::string>& names = {});
std::string format_mask_csv(const ObservationGraph& g);
void write_text_file(const std::string& path, const std::string& text);

void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path);
std::string format_rows_csv(std::vector<ExperimentRow> rows);
std::vector<ExperimentRow> parse_rows_csv(const std::string& text);

// Variable order used to match the pitprops support by name.
const std::vector<std::string>& pitprops_variables();
const std::vector<std::string>& pitprops_support_names();

struct PitpropsConfig {
  std::string matrix_path;
  std::size_t budget = 100;
  std::vector<Bucket> buckets{{0.0, 0.2}};
  double sigma = 0.1;
  std::size_t reps = 50;
  std::vector<double> rho_grid;  // empty means the default grid
  double a = 0.4;
  std::uint64_t seed = 0;
  std::size_t max_tries = 100000;
  unsigned threads = 1;
  bool baselines = true;
  std::vector<std::size_t> dtspca_k;        // empty: 1..d
  std::vector<double> itspca_thresholds;    // empty: a default grid
  std::vector<double> mc_rho_grid;          // empty: the SDP grid
};

struct PitpropsResult {
  IndexSet support;
  std::vector<ExperimentRow> sdp_rows;
  // Best rate over each method's own tuning grid, one row per bucket.
  std::vector<ExperimentRow> dtspca_rows;
  std::vector<ExperimentRow> itspca_rows;
  std::vector<ExperimentRow> mc_sdp_rows;
};

// Support found by name; throws InvalidInput on a non-13×13 matrix or
// missing variable names.
IndexSet pitprops_support(const LoadedMatrix& data);
PitpropsResult pitprops_experiment(const PitpropsConfig& cfg);
PitpropsResult pitprops_experiment(const LoadedMatrix& data, const PitpropsConfig& cfg);

}  // namespace spca
