#include "mxl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace mxl::harness {

namespace {

using nlohmann::json;

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_mean_method(Method m) { return m == Method::MA || m == Method::GL; }

// Sort/group key shared by aggregation and output ordering.
using GroupKey = std::tuple<std::string, std::string, double, std::string, std::size_t, double>;

GroupKey group_key(const ResultRow& r) {
  return {r.dataset, r.param_name, r.param, r.method, r.h, r.gamma.value_or(-1.0)};
}

int kind_rank(const std::string& kind) {
  if (kind == "run") return 0;
  if (kind == "mean") return 1;
  if (kind == "best") return 2;
  return 3;
}

ResultRow mean_of(const std::vector<const ResultRow*>& group) {
  ResultRow out = *group.front();
  out.kind = "mean";
  out.sample.reset();
  out.run.reset();
  out.sample_seed.reset();
  out.run_seed.reset();
  out.n_runs = group.size();
  out.accuracy = out.nmi = out.f = out.wall_ms = 0.0;
  out.outer_iterations = 0;
  out.list_violations = 0;
  out.q.assign(group.front()->q.size(), 0.0);
  for (const ResultRow* r : group) {
    out.accuracy += r->accuracy;
    out.nmi += r->nmi;
    out.f += r->f;
    out.wall_ms += r->wall_ms;
    out.list_violations += r->list_violations;
    out.outer_iterations = std::max(out.outer_iterations, r->outer_iterations);
    for (std::size_t s = 0; s < out.q.size() && s < r->q.size(); ++s) out.q[s] += r->q[s];
  }
  const double n = static_cast<double>(group.size());
  out.accuracy /= n;
  out.nmi /= n;
  out.f /= n;
  out.wall_ms /= n;
  for (double& x : out.q) x /= n;
  return out;
}

Method method_from_json(const json& j) {
  return parse_method(j.at("method").get<std::string>());
}

std::vector<std::filesystem::path> feature_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("features", 0) == 0 && e.path().extension() == ".csv")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

// ---- methods ---------------------------------------------------------------

SolverConfig MethodConfig::solver(Ordering ordering, std::uint64_t seed) const {
  SolverConfig cfg = preset(method, h, gamma);
  cfg.ordering = ordering;
  cfg.seed = seed;
  return cfg;
}

std::vector<MethodConfig> expand_methods(const std::vector<MethodSpec>& specs) {
  if (specs.empty()) throw ConfigError("no methods configured");
  std::vector<MethodConfig> out;
  for (const MethodSpec& spec : specs) {
    std::size_t h = spec.h.value_or(1);
    if (spec.method == Method::MVM || spec.method == Method::MVP) h = spec.h.value_or(2);
    if (is_mean_method(spec.method)) {
      MethodConfig mc{spec.method, h, std::nullopt, method_label(spec.method, h)};
      preset(mc.method, mc.h);  // validates
      out.push_back(mc);
      continue;
    }
    if (spec.gammas.empty())
      throw ConfigError(std::string(to_string(spec.method)) + " needs a non-empty gamma grid");
    for (double g : spec.gammas) {
      MethodConfig mc{spec.method, h, g, method_label(spec.method, h)};
      preset(mc.method, mc.h, mc.gamma);
      out.push_back(mc);
    }
  }
  return out;
}

// ---- config ----------------------------------------------------------------

const char* to_string(RealSetting s) noexcept {
  switch (s) {
    case RealSetting::Informative: return "informative";
    case RealSetting::PlusNoise: return "plus-noise";
    case RealSetting::FlattenPlusNoise: return "flatten-plus-noise";
  }
  return "?";
}

RealSetting parse_real_setting(const std::string& name) {
  for (RealSetting s :
       {RealSetting::Informative, RealSetting::PlusNoise, RealSetting::FlattenPlusNoise})
    if (name == to_string(s)) return s;
  throw ConfigError("unknown real-data setting '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw GraphError(std::string("invalid experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.kind = j.value("kind", cfg.kind);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.runs = j.value("runs", cfg.runs);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.timing = j.value("timing", cfg.timing);
    cfg.output = j.value("output", cfg.output);
    if (j.contains("ordering")) cfg.ordering = parse_ordering(j.at("ordering").get<std::string>());
    for (const json& m : j.value("methods", json::array())) {
      MethodSpec spec;
      spec.method = method_from_json(m);
      if (m.contains("h")) spec.h = m.at("h").get<std::size_t>();
      if (m.contains("gammas")) spec.gammas = m.at("gammas").get<std::vector<double>>();
      if (m.contains("gamma")) spec.gammas.push_back(m.at("gamma").get<double>());
      cfg.methods.push_back(spec);
    }
    if (j.contains("sbm")) {
      const json& s = j.at("sbm");
      cfg.sbm.sizes = s.value("sizes", cfg.sbm.sizes);
      cfg.sbm.p_in = s.value("p_in", cfg.sbm.p_in);
      cfg.sbm.ratios = s.value("ratios", cfg.sbm.ratios);
      cfg.sbm.informative_layers = s.value("informative_layers", cfg.sbm.informative_layers);
      cfg.sbm.noisy_layers = s.value("noisy_layers", cfg.sbm.noisy_layers);
      cfg.sbm.p_noise = s.value("p_noise", cfg.sbm.p_noise);
    }
    if (j.contains("lfr")) {
      const json& s = j.at("lfr");
      cfg.lfr.n = s.value("n", cfg.lfr.n);
      cfg.lfr.community_sizes = s.value("community_sizes", cfg.lfr.community_sizes);
      cfg.lfr.avg_degree = s.value("avg_degree", cfg.lfr.avg_degree);
      cfg.lfr.max_degree = s.value("max_degree", cfg.lfr.max_degree);
      cfg.lfr.mus = s.value("mus", cfg.lfr.mus);
      cfg.lfr.degree_exponent = s.value("degree_exponent", cfg.lfr.degree_exponent);
      cfg.lfr.informative_layers = s.value("informative_layers", cfg.lfr.informative_layers);
      cfg.lfr.noisy_layers = s.value("noisy_layers", cfg.lfr.noisy_layers);
    }
    if (j.contains("real")) {
      const json& s = j.at("real");
      for (const auto& d : s.value("datasets", std::vector<std::string>{})) {
        std::filesystem::path p(d);
        cfg.real.datasets.push_back(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
      }
      if (s.contains("setting")) cfg.real.setting = parse_real_setting(s.at("setting").get<std::string>());
      cfg.real.noise_ps = s.value("noise_ps", cfg.real.noise_ps);
      cfg.real.noise_instances = s.value("noise_instances", cfg.real.noise_instances);
      cfg.real.knn = s.value("knn", cfg.real.knn);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path.parent_path());
}

void ExperimentConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (kind != "sbm" && kind != "lfr" && kind != "real")
    throw ConfigError("kind must be sbm, lfr or real");
  expand_methods(methods);
  if (kind == "sbm" && sbm.ratios.empty()) throw ConfigError("empty p/q grid");
  if (kind == "lfr" && lfr.mus.empty()) throw ConfigError("empty mu grid");
  if (kind == "real") {
    if (real.datasets.empty()) throw ConfigError("no datasets configured");
    for (const auto& d : real.datasets)
      if (!std::filesystem::is_directory(d))
        throw GraphError("dataset directory not found: " + d.string());
    if (real.setting != RealSetting::Informative && real.noise_ps.empty())
      throw ConfigError("noise settings need at least one noise probability");
    if (real.noise_instances < 1) throw ConfigError("noise_instances must be >= 1");
  }
}

Ordering ExperimentConfig::effective_ordering() const {
  if (ordering) return *ordering;
  if (kind == "sbm") return sbm.noisy_layers > 0 ? Ordering::Random : Ordering::CommunitySize;
  if (kind == "lfr") return lfr.noisy_layers > 0 ? Ordering::Random : Ordering::CommunitySize;
  return Ordering::Random;
}

// ---- instances -------------------------------------------------------------

std::vector<Instance> sbm_instances(const ExperimentConfig& cfg) {
  const std::size_t points = cfg.sbm.ratios.size();
  std::vector<Instance> out(points * cfg.samples);
  for (const double r : cfg.sbm.ratios)
    if (!(r >= 1.0)) throw GraphError("p/q ratios must be >= 1");
  SbmSpec probe;
  probe.sizes = cfg.sbm.sizes;
  probe.p_in = cfg.sbm.p_in;
  probe.p_out = cfg.sbm.p_in / cfg.sbm.ratios.front();
  probe.informative_layers = cfg.sbm.informative_layers;
  probe.noisy_layers = cfg.sbm.noisy_layers;
  probe.p_noise = cfg.sbm.p_noise;
  probe.validate();

  std::vector<std::string> errors(out.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(cfg.threads))
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    try {
      const std::size_t point = idx / cfg.samples, sample = idx % cfg.samples;
      SbmSpec spec = probe;
      spec.p_out = cfg.sbm.p_in / cfg.sbm.ratios[point];
      spec.seed = derive_seed(cfg.seed, 100 + point, sample);
      GeneratedGraph gen = gen_sbm(spec);
      out[idx] = Instance{"sbm", "p/q", cfg.sbm.ratios[point], sample, spec.seed,
                          std::move(gen.graph), std::move(gen.truth)};
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GraphError(e);
  return out;
}

std::vector<Instance> lfr_instances(const ExperimentConfig& cfg) {
  const std::size_t points = cfg.lfr.mus.size();
  if (cfg.lfr.informative_layers + cfg.lfr.noisy_layers == 0)
    throw GraphError("LFR bench needs at least one layer");
  LfrSpec base;
  base.n = cfg.lfr.n;
  base.community_sizes = cfg.lfr.community_sizes;
  base.avg_degree = cfg.lfr.avg_degree;
  base.max_degree = cfg.lfr.max_degree;
  base.degree_exponent = cfg.lfr.degree_exponent;
  for (double mu : cfg.lfr.mus) {
    base.mu = mu;
    base.validate();
  }

  std::vector<Instance> out(points * cfg.samples);
  std::vector<std::string> errors(out.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(cfg.threads))
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    try {
      const std::size_t point = idx / cfg.samples, sample = idx % cfg.samples;
      LfrSpec spec = base;
      spec.mu = cfg.lfr.mus[point];
      spec.seed = derive_seed(cfg.seed, 200 + point, sample);
      const Partition truth = lfr_membership(spec);
      std::vector<Layer> layers;
      for (std::size_t s = 0; s < cfg.lfr.informative_layers; ++s) {
        LfrSpec ls = spec;
        ls.seed = derive_seed(spec.seed, 1, s);
        layers.push_back(gen_lfr_layer(ls, truth));
      }
      for (std::size_t s = 0; s < cfg.lfr.noisy_layers; ++s) {
        LfrSpec ls = spec;
        ls.noisy = true;
        ls.mu = 0.0;
        ls.seed = derive_seed(spec.seed, 2, s);
        layers.push_back(gen_lfr_layer(ls, Partition::all_in_one(spec.n)));
      }
      out[idx] = Instance{"lfr", "mu", spec.mu, sample, spec.seed,
                          stack_layers(std::move(layers)), truth};
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GraphError(e);
  return out;
}

Instance load_real_dataset(const std::filesystem::path& dir, std::size_t knn) {
  const auto truth_path = dir / "truth.txt";
  if (!std::filesystem::exists(truth_path))
    throw GraphError("dataset " + dir.string() + " has no truth.txt (metrics need ground truth)");
  Partition truth = load_partition(truth_path);
  const std::size_t n = truth.node_count();

  std::vector<Layer> layers;
  if (const auto edge_path = dir / "layers.txt"; std::filesystem::exists(edge_path)) {
    MultiplexGraph g = load_multiplex(edge_path, n);
    if (g.node_count() != n)
      throw GraphError(edge_path.string() + " references nodes beyond the ground truth");
    layers.assign(g.layers().begin(), g.layers().end());
  }
  for (const auto& f : feature_files(dir)) {
    FeatureMatrix fm = load_features_csv(f);
    if (fm.rows != n)
      throw GraphError(f.string() + " has " + std::to_string(fm.rows) + " rows, expected " +
                       std::to_string(n));
    layers.push_back(build_knn_layer(fm, knn));
  }
  if (layers.empty()) throw GraphError("dataset " + dir.string() + " has no layers");
  Instance inst;
  inst.dataset = dir.filename().string();
  if (inst.dataset.empty()) inst.dataset = dir.parent_path().filename().string();
  inst.graph = MultiplexGraph(std::move(layers));
  inst.truth = std::move(truth);
  return inst;
}

std::vector<Instance> real_instances(const ExperimentConfig& cfg) {
  std::vector<Instance> out;
  for (std::size_t d = 0; d < cfg.real.datasets.size(); ++d) {
    const Instance base = load_real_dataset(cfg.real.datasets[d], cfg.real.knn);
    if (cfg.real.setting == RealSetting::Informative) {
      Instance inst = base;
      inst.param_name = "noise_p";
      inst.param = 0.0;
      inst.seed = derive_seed(cfg.seed, 300 + d);
      out.push_back(std::move(inst));
      continue;
    }
    for (std::size_t pi = 0; pi < cfg.real.noise_ps.size(); ++pi) {
      for (std::size_t s = 0; s < cfg.real.noise_instances; ++s) {
        Instance inst;
        inst.dataset = base.dataset;
        inst.param_name = "noise_p";
        inst.param = cfg.real.noise_ps[pi];
        inst.sample = s;
        inst.seed = derive_seed(cfg.seed, 300 + d, pi, s);
        std::vector<Layer> layers;
        if (cfg.real.setting == RealSetting::PlusNoise)
          layers.assign(base.graph.layers().begin(), base.graph.layers().end());
        else
          layers.push_back(flatten(base.graph));
        layers.push_back(gen_er(base.graph.node_count(), inst.param, inst.seed));
        inst.graph = stack_layers(std::move(layers));
        inst.truth = base.truth;
        out.push_back(std::move(inst));
      }
    }
  }
  return out;
}

// ---- runs ------------------------------------------------------------------

std::vector<ResultRow> run_all(const std::vector<Instance>& instances,
                               const std::vector<MethodConfig>& methods,
                               const ExperimentConfig& cfg) {
  const Ordering ordering = cfg.effective_ordering();
  const std::size_t jobs = instances.size() * methods.size() * cfg.runs;
  std::vector<ResultRow> rows(jobs);
  std::vector<std::string> errors(jobs);

#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(cfg.threads))
  for (std::size_t job = 0; job < jobs; ++job) {
    try {
      const std::size_t run = job % cfg.runs;
      const std::size_t mi = (job / cfg.runs) % methods.size();
      const std::size_t ii = job / (cfg.runs * methods.size());
      const Instance& inst = instances[ii];
      const MethodConfig& mc = methods[mi];
      const std::uint64_t run_seed = derive_seed(inst.seed, 0x52554eULL, run);

      const auto start = std::chrono::steady_clock::now();
      const SolverResult res = mxl::run(inst.graph, mc.solver(ordering, run_seed));
      const auto stop = std::chrono::steady_clock::now();

      ResultRow& row = rows[job];
      row.dataset = inst.dataset;
      row.method = mc.label;
      row.h = mc.h;
      row.gamma = mc.gamma;
      row.param_name = inst.param_name;
      row.param = inst.param;
      row.sample = inst.sample;
      row.run = run;
      row.sample_seed = inst.seed;
      row.run_seed = run_seed;
      row.accuracy = accuracy(res.partition, inst.truth);
      row.nmi = nmi(res.partition, inst.truth);
      row.f = res.f;
      row.q = res.q;
      row.outer_iterations = res.outer_iterations;
      for (const auto& it : res.history) row.list_violations += it.list_violations;
      row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      row.layers = inst.graph.layer_count();
    } catch (const std::exception& e) {
      errors[job] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GraphError(e);
  return rows;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    const auto ka = std::make_tuple(kind_rank(a.kind), group_key(a), a.sample.value_or(0),
                                    a.run.value_or(0));
    const auto kb = std::make_tuple(kind_rank(b.kind), group_key(b), b.sample.value_or(0),
                                    b.run.value_or(0));
    return ka < kb;
  });
}

std::vector<ResultRow> aggregate(const std::vector<ResultRow>& runs) {
  std::vector<ResultRow> sorted = runs;
  sort_rows(sorted);
  std::map<GroupKey, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : sorted)
    if (r.kind == "run") groups[group_key(r)].push_back(&r);

  std::vector<ResultRow> out;
  using PointKey = std::tuple<std::string, std::string, double, std::string, std::size_t>;
  std::map<PointKey, ResultRow> best;
  for (const auto& [key, group] : groups) {
    ResultRow mean = mean_of(group);
    out.push_back(mean);
    const PointKey pk{mean.dataset, mean.param_name, mean.param, mean.method, mean.h};
    auto it = best.find(pk);
    if (it == best.end() || mean.nmi > it->second.nmi) best[pk] = mean;
  }
  for (auto& [key, row] : best) {
    row.kind = "best";
    out.push_back(row);
  }
  return out;
}

std::vector<ResultRow> ratio_rows(const std::vector<ResultRow>& runs) {
  // Mean over every run of a dataset, then best gamma per (dataset, method).
  std::vector<ResultRow> pooled;
  for (const ResultRow& r : runs) {
    if (r.kind != "run") continue;
    ResultRow p = r;
    p.param_name = "all";
    p.param = 0.0;
    pooled.push_back(std::move(p));
  }
  ScoreTable table;
  std::map<std::string, std::size_t> list_size;
  for (const ResultRow& b : aggregate(pooled))
    if (b.kind == "best") {
      table[b.method][b.dataset] = Scores{b.accuracy, b.nmi};
      list_size[b.method] = b.h;
    }

  std::vector<ResultRow> out;
  for (const auto& [method, ratio] : performance_ratios(table)) {
    ResultRow r;
    r.kind = "ratio";
    r.dataset = "*";
    r.method = method;
    r.h = list_size.at(method);
    r.param_name = "all";
    r.n_runs = table.at(method).size();
    r.accuracy = ratio.accuracy;
    r.nmi = ratio.nmi;
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_csv(const std::vector<ResultRow>& rows, bool timing) {
  std::string out =
      "schema,kind,dataset,method,h,gamma,param_name,param,sample,run,sample_seed,run_seed,"
      "n_runs,accuracy,nmi,f,q,outer_iterations,list_violations";
  if (timing) out += ",wall_ms";
  out += '\n';
  auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  for (const ResultRow& r : rows) {
    std::string q;
    for (std::size_t s = 0; s < r.q.size(); ++s) {
      if (s) q += ';';
      q += fmt_double(r.q[s]);
    }
    out += kSchemaTag;
    for (const std::string& field :
         {r.kind, r.dataset, r.method, std::to_string(r.h),
          r.gamma ? fmt_double(*r.gamma) : std::string(), r.param_name, fmt_double(r.param),
          opt(r.sample), opt(r.run), opt(r.sample_seed), opt(r.run_seed), std::to_string(r.n_runs),
          r.has_truth ? fmt_double(r.accuracy) : std::string(),
          r.has_truth ? fmt_double(r.nmi) : std::string(), fmt_double(r.f), q,
          std::to_string(r.outer_iterations), std::to_string(r.list_violations)}) {
      out += ',';
      out += field;
    }
    if (timing) out += ',' + fmt_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

// ---- commands --------------------------------------------------------------

std::vector<ResultRow> bench_rows(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto methods = expand_methods(cfg.methods);
  std::vector<Instance> instances;
  if (cfg.kind == "sbm") instances = sbm_instances(cfg);
  else if (cfg.kind == "lfr") instances = lfr_instances(cfg);
  else instances = real_instances(cfg);
  std::vector<ResultRow> rows = run_all(instances, methods, cfg);
  auto agg = aggregate(rows);
  rows.insert(rows.end(), agg.begin(), agg.end());
  if (cfg.kind == "real") {
    auto ratios = ratio_rows(rows);
    rows.insert(rows.end(), ratios.begin(), ratios.end());
  }
  sort_rows(rows);
  return rows;
}

std::string bench_sbm(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.kind = "sbm";
  return to_csv(bench_rows(c), c.timing);
}

std::string bench_lfr(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.kind = "lfr";
  return to_csv(bench_rows(c), c.timing);
}

std::string bench_real(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.kind = "real";
  return to_csv(bench_rows(c), c.timing);
}

std::string gamma_sweep(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  if (c.methods.empty()) {
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
    c.methods = {{Method::EVM, 1, grid}, {Method::EVP, 1, grid}, {Method::MVM, 2, grid},
                 {Method::MVP, 2, grid}};
  }
  for (const MethodSpec& m : c.methods) {
    if (is_mean_method(m.method))
      throw ConfigError("gamma-sweep supports EVM, EVP, MVM and MVP only");
    if (m.gammas.empty()) throw ConfigError("gamma-sweep needs a non-empty gamma grid");
  }
  return to_csv(bench_rows(c), c.timing);
}

}  // namespace mxl::harness
