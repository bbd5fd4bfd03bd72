#pragma once

// Experiment orchestration: instance generation, parallel solver runs,
// aggregation and CSV output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mxl/generators.hpp"
#include "mxl/graph.hpp"
#include "mxl/metrics.hpp"
#include "mxl/solver.hpp"

namespace mxl::harness {

inline constexpr const char* kSchemaTag = "mxl1";

/// A method with its gamma grid. Mean-based methods (MA, GL) ignore gammas.
struct MethodSpec {
  Method method = Method::GL;
  std::optional<std::size_t> h;
  std::vector<double> gammas;
};

/// One fully resolved solver configuration.
struct MethodConfig {
  Method method = Method::GL;
  std::size_t h = 1;
  std::optional<double> gamma;
  std::string label;

  SolverConfig solver(Ordering ordering, std::uint64_t seed) const;
};

std::vector<MethodConfig> expand_methods(const std::vector<MethodSpec>& specs);

struct SbmBench {
  std::vector<std::size_t> sizes{125, 125, 125, 125};
  double p_in = 0.1;
  std::vector<double> ratios{2.0, 2.3, 2.5, 2.8, 3.0};  // p_in / p_out
  std::size_t informative_layers = 2;
  std::size_t noisy_layers = 0;
  double p_noise = 0.1;
};

struct LfrBench {
  std::size_t n = 128;
  std::vector<std::size_t> community_sizes{32, 32, 32, 32};
  double avg_degree = 16.0;
  std::size_t max_degree = 32;
  std::vector<double> mus{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  double degree_exponent = 2.0;
  std::size_t informative_layers = 2;
  std::size_t noisy_layers = 0;
};

enum class RealSetting { Informative, PlusNoise, FlattenPlusNoise };
const char* to_string(RealSetting s) noexcept;
RealSetting parse_real_setting(const std::string& name);

struct RealBench {
  std::vector<std::filesystem::path> datasets;
  RealSetting setting = RealSetting::Informative;
  std::vector<double> noise_ps{0.01, 0.03, 0.05};
  std::size_t noise_instances = 10;
  std::size_t knn = 10;
};

struct ExperimentConfig {
  std::string kind = "sbm";  // sbm | lfr | real
  std::vector<MethodSpec> methods;
  std::size_t samples = 10;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  std::optional<Ordering> ordering;  // default depends on the setting
  std::size_t threads = 1;
  bool timing = false;  // adds wall_ms, which makes output non-reproducible
  std::string output;
  SbmBench sbm;
  LfrBench lfr;
  RealBench real;

  /// Keys missing from the JSON keep their defaults. Relative dataset paths
  /// resolve against `base_dir`.
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);

  void validate() const;
  Ordering effective_ordering() const;
};

struct Instance {
  std::string dataset;
  std::string param_name;
  double param = 0.0;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  MultiplexGraph graph;
  Partition truth;
};

struct ResultRow {
  std::string kind = "run";  // run | mean | best | ratio
  std::string dataset;
  std::string method;
  std::size_t h = 1;
  std::optional<double> gamma;
  std::string param_name;
  double param = 0.0;
  std::optional<std::size_t> sample;
  std::optional<std::size_t> run;
  std::optional<std::uint64_t> sample_seed;
  std::optional<std::uint64_t> run_seed;
  std::size_t n_runs = 1;
  bool has_truth = true;  // false leaves accuracy and nmi blank
  double accuracy = 0.0;
  double nmi = 0.0;
  double f = 0.0;
  std::vector<double> q;
  std::size_t outer_iterations = 0;
  std::size_t list_violations = 0;
  double wall_ms = 0.0;
  std::size_t layers = 0;
};

std::vector<Instance> sbm_instances(const ExperimentConfig& cfg);
std::vector<Instance> lfr_instances(const ExperimentConfig& cfg);
std::vector<Instance> real_instances(const ExperimentConfig& cfg);

/// Builds one real dataset: edge-list layers from `layers.txt`, one kNN layer
/// per `features*.csv`, ground truth from `truth.txt`.
Instance load_real_dataset(const std::filesystem::path& dir, std::size_t knn);

/// Runs every (instance, method, run) triple on a pool of cfg.threads workers.
/// Row content is independent of the worker count.
std::vector<ResultRow> run_all(const std::vector<Instance>& instances,
                               const std::vector<MethodConfig>& methods,
                               const ExperimentConfig& cfg);

/// Mean rows per (dataset, param, method, gamma) and best-gamma rows per
/// (dataset, param, method), selected by highest mean NMI.
std::vector<ResultRow> aggregate(const std::vector<ResultRow>& runs);

/// Performance ratios over datasets, scoring each method by its best-gamma
/// mean over all of a dataset's runs.
std::vector<ResultRow> ratio_rows(const std::vector<ResultRow>& runs);

void sort_rows(std::vector<ResultRow>& rows);
std::string to_csv(const std::vector<ResultRow>& rows, bool timing = false);

// Commands; each returns the CSV text.
std::string bench_sbm(const ExperimentConfig& cfg);
std::string bench_lfr(const ExperimentConfig& cfg);
std::string bench_real(const ExperimentConfig& cfg);
/// Restricted to EVM/EVP/MVM/MVP; needs a non-empty gamma grid.
std::string gamma_sweep(const ExperimentConfig& cfg);

std::vector<ResultRow> bench_rows(const ExperimentConfig& cfg);

}  // namespace mxl::harness
