// Command-line front end: single runs, benchmark sweeps and metrics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mxl/graph.hpp"
#include "mxl/harness.hpp"
#include "mxl/metrics.hpp"
#include "mxl/solver.hpp"

namespace {

using namespace mxl;

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct RunArgs {
  std::string graph, truth, method = "GL", ordering = "natural", partition_out;
  std::optional<std::size_t> h;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
};

struct BenchArgs {
  std::string config, output, dataset, setting;
  std::optional<std::size_t> samples, threads, runs;
  std::optional<std::uint64_t> seed;
  std::vector<double> noise_ps;
  bool timing = false;
};

struct MetricsArgs {
  std::string pred, truth, norm = "geometric";
};

int cmd_run(const RunArgs& a) {
  std::optional<Partition> truth;
  if (!a.truth.empty()) truth = load_partition(a.truth);
  const MultiplexGraph g = load_multiplex(a.graph, truth ? truth->node_count() : 0);
  if (truth && truth->node_count() != g.node_count())
    throw GraphError("truth has " + std::to_string(truth->node_count()) + " nodes, graph has " +
                     std::to_string(g.node_count()));

  const Method m = parse_method(a.method);
  SolverConfig cfg = preset(m, a.h, a.gamma);
  cfg.ordering = parse_ordering(a.ordering);
  cfg.seed = a.seed;
  const SolverResult res = run(g, cfg);

  if (!a.partition_out.empty()) {
    save_partition(res.partition, a.partition_out);
  } else {
    for (NodeId i = 0; i < res.partition.node_count(); ++i)
      std::printf("%u\n", res.partition[i]);
  }

  harness::ResultRow row;
  row.dataset = std::filesystem::path(a.graph).filename().string();
  row.method = method_label(m, cfg.quality.h);
  row.h = cfg.quality.h;
  if (m != Method::MA && m != Method::GL) row.gamma = cfg.quality.gamma;
  row.param_name = "none";
  row.run = 0;
  row.run_seed = a.seed;
  row.has_truth = truth.has_value();
  if (truth) {
    row.accuracy = accuracy(res.partition, *truth);
    row.nmi = nmi(res.partition, *truth);
  }
  row.f = res.f;
  row.q = res.q;
  row.outer_iterations = res.outer_iterations;
  for (const auto& it : res.history) row.list_violations += it.list_violations;
  row.layers = g.layer_count();
  std::fputs(harness::to_csv({row}).c_str(), stdout);
  return 0;
}

int cmd_bench(const std::string& kind, const BenchArgs& a) {
  harness::ExperimentConfig cfg;
  if (!a.config.empty()) cfg = harness::ExperimentConfig::load(a.config);
  if (kind != "gamma-sweep") cfg.kind = kind;
  if (a.samples) cfg.samples = *a.samples;
  if (a.runs) cfg.runs = *a.runs;
  if (a.threads) cfg.threads = *a.threads;
  if (a.seed) cfg.seed = *a.seed;
  if (a.timing) cfg.timing = true;
  if (!a.output.empty()) cfg.output = a.output;
  if (!a.dataset.empty()) cfg.real.datasets = {a.dataset};
  if (!a.setting.empty()) cfg.real.setting = harness::parse_real_setting(a.setting);
  if (!a.noise_ps.empty()) cfg.real.noise_ps = a.noise_ps;
  if (cfg.methods.empty() && kind != "gamma-sweep")
    throw ConfigError("no methods configured (use a config file with a \"methods\" list)");

  std::string csv;
  if (kind == "gamma-sweep") csv = harness::gamma_sweep(cfg);
  else {
    cfg.validate();
    csv = harness::to_csv(harness::bench_rows(cfg), cfg.timing);
  }

  if (cfg.output.empty() || cfg.output == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw GraphError("cannot write " + cfg.output);
    out << csv;
  }
  return 0;
}

int cmd_metrics(const MetricsArgs& a) {
  const Partition pred = load_partition(a.pred);
  const Partition truth = load_partition(a.truth);
  NmiNorm norm;
  if (a.norm == "geometric") norm = NmiNorm::Geometric;
  else if (a.norm == "arithmetic") norm = NmiNorm::Arithmetic;
  else throw ConfigError("unknown NMI normalization '" + a.norm + "'");
  std::printf("accuracy,nmi\n%.17g,%.17g\n", accuracy(pred, truth), nmi(pred, truth, norm));
  return 0;
}

void add_bench_options(CLI::App* sub, BenchArgs& a, bool real) {
  sub->add_option("--config", a.config, "JSON experiment config")->check(CLI::ExistingFile);
  sub->add_option("--samples", a.samples, "Instances per grid point");
  sub->add_option("--runs", a.runs, "Runs per instance");
  sub->add_option("--threads", a.threads, "Worker threads");
  sub->add_option("--seed", a.seed, "Global seed");
  sub->add_option("-o,--output", a.output, "CSV output path (default: stdout)");
  sub->add_flag("--timing", a.timing, "Add a wall_ms column (output no longer reproducible)");
  if (real) {
    sub->add_option("--dataset", a.dataset, "Dataset directory");
    sub->add_option("--setting", a.setting, "informative | plus-noise | flatten-plus-noise");
    sub->add_option("--noise-p", a.noise_ps, "Noise-layer edge probabilities");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-aware multiobjective Louvain for multiplex networks"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one method on a graph file");
  run->set_help_flag("--help", "Print this help message and exit");
  run->add_option("--graph", run_args.graph, "Edge list: 'layer u v [w]' per line")->required();
  run->add_option("--truth", run_args.truth, "Ground-truth partition file");
  run->add_option("--method", run_args.method, "MA | MVM | MVP | EVM | EVP | GL");
  run->add_option("--h", run_args.h, "List length");
  run->add_option("--gamma", run_args.gamma, "Variance weight in (0,1)");
  run->add_option("--ordering", run_args.ordering, "community-size | random | natural");
  run->add_option("--seed", run_args.seed, "Seed for random ordering");
  run->add_option("--partition-out", run_args.partition_out, "Write the partition here");

  BenchArgs sbm_args, lfr_args, real_args, sweep_args;
  add_bench_options(app.add_subcommand("bench-sbm", "Multilayer SBM sweep"), sbm_args, false);
  add_bench_options(app.add_subcommand("bench-lfr", "Multilayer LFR sweep"), lfr_args, false);
  add_bench_options(app.add_subcommand("real", "Dataset runs with optional noise layers"),
                    real_args, true);
  add_bench_options(app.add_subcommand("gamma-sweep", "Gamma grid for EVM/EVP/MVM/MVP"),
                    sweep_args, true);

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Accuracy and NMI of a partition");
  metrics->add_option("--pred", metrics_args.pred, "Predicted partition")->required();
  metrics->add_option("--truth", metrics_args.truth, "Ground-truth partition")->required();
  metrics->add_option("--nmi-norm", metrics_args.norm, "geometric | arithmetic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (app.got_subcommand("bench-sbm")) return cmd_bench("sbm", sbm_args);
    if (app.got_subcommand("bench-lfr")) return cmd_bench("lfr", lfr_args);
    if (app.got_subcommand("real")) return cmd_bench("real", real_args);
    if (app.got_subcommand("gamma-sweep")) return cmd_bench("gamma-sweep", sweep_args);
    if (*metrics) return cmd_metrics(metrics_args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataError;
  }
  return kUsage;
}
