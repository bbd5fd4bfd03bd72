#include "mxl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "mxl/kernels.hpp"

namespace mxl {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphError("cannot write file: " + path.string());
  out << text;
  if (!out) throw GraphError("write failed: " + path.string());
}

std::vector<std::string_view> split_tokens(std::string_view line, char sep = 0) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_sep = [sep](char ch) {
    return sep ? ch == sep : (ch == ' ' || ch == '\t' || ch == '\r');
  };
  while (i <= line.size()) {
    if (!sep) {
      while (i < line.size() && is_sep(line[i])) ++i;
      if (i == line.size()) break;
    }
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    tokens.push_back(line.substr(i, j - i));
    i = j + 1;
    if (!sep && j == line.size()) break;
  }
  return tokens;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Visits each line with its 1-based number, comments stripped.
template <class Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    fn(line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : GraphError(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

// ---- Layer -----------------------------------------------------------------

Layer Layer::from_edges(std::size_t n, std::span<const Edge> edges, Duplicates dup) {
  struct Half {
    NodeId u, v;
    double w;
  };
  std::vector<Half> halves;
  halves.reserve(edges.size() * 2);
  Layer layer;
  layer.self_loops_.assign(n, 0.0);
  std::vector<char> has_loop(n, 0);

  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") out of range for " + std::to_string(n) + " nodes");
    if (!(e.w >= 0.0) || !std::isfinite(e.w))
      throw GraphError("negative or non-finite weight on edge (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + ")");
    if (e.u == e.v) {
      if (has_loop[e.u] && dup == Duplicates::Reject)
        throw GraphError("duplicate self-loop at node " + std::to_string(e.u));
      has_loop[e.u] = 1;
      layer.self_loops_[e.u] += e.w;
      continue;
    }
    halves.push_back({e.u, e.v, e.w});
    halves.push_back({e.v, e.u, e.w});
  }
  std::sort(halves.begin(), halves.end(), [](const Half& a, const Half& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  layer.offsets_.assign(n + 1, 0);
  layer.targets_.reserve(halves.size());
  layer.weights_.reserve(halves.size());
  for (std::size_t i = 0; i < halves.size();) {
    std::size_t j = i + 1;
    double w = halves[i].w;
    while (j < halves.size() && halves[j].u == halves[i].u && halves[j].v == halves[i].v) {
      if (dup == Duplicates::Reject)
        throw GraphError("duplicate edge (" + std::to_string(halves[i].u) + "," +
                         std::to_string(halves[i].v) + ")");
      w += halves[j].w;
      ++j;
    }
    if (w > 0.0) {
      layer.targets_.push_back(halves[i].v);
      layer.weights_.push_back(w);
      ++layer.offsets_[halves[i].u + 1];
    }
    i = j;
  }
  std::partial_sum(layer.offsets_.begin(), layer.offsets_.end(), layer.offsets_.begin());

  layer.degrees_.assign(n, 0.0);
  double twice_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t e = layer.offsets_[i]; e < layer.offsets_[i + 1]; ++e) d += layer.weights_[e];
    d += 2.0 * layer.self_loops_[i];
    layer.degrees_[i] = d;
    twice_m += d;
  }
  layer.total_weight_ = 0.5 * twice_m;
  return layer;
}

double Layer::weight(NodeId i, NodeId j) const {
  if (i == j) return self_loops_[i];
  auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0.0;
  return weights(i)[static_cast<std::size_t>(it - nb.begin())];
}

std::vector<Edge> Layer::edges() const {
  std::vector<Edge> out;
  for (NodeId i = 0; i < node_count(); ++i) {
    if (self_loops_[i] > 0.0) out.push_back({i, i, self_loops_[i]});
    auto nb = neighbors(i);
    auto ws = weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e)
      if (nb[e] > i) out.push_back({i, nb[e], ws[e]});
  }
  return out;
}

std::size_t Layer::edge_count() const noexcept {
  std::size_t loops = 0;
  for (double w : self_loops_) loops += w > 0.0;
  return targets_.size() / 2 + loops;
}

// ---- MultiplexGraph --------------------------------------------------------

MultiplexGraph::MultiplexGraph(std::vector<Layer> layers, std::vector<std::size_t> node_size)
    : layers_(std::move(layers)), node_size_(std::move(node_size)) {
  if (layers_.empty()) throw GraphError("multiplex needs at least one layer");
  n_ = layers_.front().node_count();
  for (std::size_t s = 0; s < layers_.size(); ++s) {
    if (layers_[s].node_count() != n_)
      throw GraphError("layer " + std::to_string(s) + " has " +
                       std::to_string(layers_[s].node_count()) + " nodes, expected " +
                       std::to_string(n_));
    if (!(layers_[s].total_weight() > 0.0)) throw GraphError("empty layer " + std::to_string(s));
  }
  if (node_size_.empty()) node_size_.assign(n_, 1);
  if (node_size_.size() != n_) throw GraphError("node_size length does not match node count");
  for (std::size_t sz : node_size_)
    if (sz < 1) throw GraphError("node_size must be >= 1");
}

// ---- Partition -------------------------------------------------------------

Partition Partition::from_labels(std::span<const CommunityId> labels) {
  Partition p;
  p.label_.resize(labels.size());
  std::unordered_map<CommunityId, CommunityId> remap;
  remap.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = remap.try_emplace(labels[i], static_cast<CommunityId>(remap.size()));
    p.label_[i] = it->second;
  }
  p.count_ = remap.size();
  return p;
}

Partition Partition::from_contiguous(std::vector<CommunityId> labels) {
  Partition p;
  CommunityId max_label = 0;
  for (CommunityId c : labels) max_label = std::max(max_label, c);
  std::size_t c = labels.empty() ? 0 : static_cast<std::size_t>(max_label) + 1;
  std::vector<char> used(c, 0);
  for (CommunityId l : labels) used[l] = 1;
  for (std::size_t i = 0; i < c; ++i)
    if (!used[i]) throw GraphError("partition label " + std::to_string(i) + " is unused");
  p.label_ = std::move(labels);
  p.count_ = c;
  return p;
}

Partition Partition::singletons(std::size_t n) {
  std::vector<CommunityId> labels(n);
  std::iota(labels.begin(), labels.end(), CommunityId{0});
  return from_contiguous(std::move(labels));
}

Partition Partition::all_in_one(std::size_t n) {
  return from_contiguous(std::vector<CommunityId>(n, 0));
}

std::vector<std::size_t> Partition::community_sizes() const {
  std::vector<std::size_t> sizes(count_, 0);
  for (CommunityId c : label_) ++sizes[c];
  return sizes;
}

// ---- I/O -------------------------------------------------------------------

MultiplexGraph parse_multiplex(const std::string& text, const std::string& origin,
                               std::size_t min_nodes) {
  std::vector<std::vector<Edge>> per_layer;
  std::vector<std::unordered_set<std::uint64_t>> seen;
  std::size_t n = min_nodes;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto tok = split_tokens(line);
    if (tok.empty()) return;
    if (tok.size() != 3 && tok.size() != 4)
      throw ParseError(origin, line_no, "expected 'layer src dst [weight]'");
    std::uint32_t layer = 0;
    NodeId u = 0, v = 0;
    double w = 1.0;
    if (!parse_number(tok[0], layer) || !parse_number(tok[1], u) || !parse_number(tok[2], v))
      throw ParseError(origin, line_no, "layer and node ids must be non-negative integers");
    if (tok.size() == 4 && !parse_number(tok[3], w))
      throw ParseError(origin, line_no, "malformed weight '" + std::string(tok[3]) + "'");
    if (!std::isfinite(w)) throw ParseError(origin, line_no, "non-finite weight");
    if (w < 0.0) throw ParseError(origin, line_no, "negative weight");
    if (layer >= per_layer.size()) {
      per_layer.resize(layer + 1);
      seen.resize(layer + 1);
    }
    std::uint64_t key = (std::uint64_t{std::min(u, v)} << 32) | std::max(u, v);
    if (!seen[layer].insert(key).second)
      throw ParseError(origin, line_no,
                       "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") in layer " + std::to_string(layer));
    per_layer[layer].push_back({u, v, w});
    n = std::max<std::size_t>(n, std::size_t{std::max(u, v)} + 1);
  });

  if (per_layer.empty()) throw ParseError(origin, 0, "no edges");
  std::vector<Layer> layers;
  layers.reserve(per_layer.size());
  for (std::size_t s = 0; s < per_layer.size(); ++s) {
    if (per_layer[s].empty()) throw GraphError("empty layer " + std::to_string(s));
    layers.push_back(Layer::from_edges(n, per_layer[s]));
  }
  return MultiplexGraph(std::move(layers));
}

MultiplexGraph load_multiplex(const std::filesystem::path& path, std::size_t min_nodes) {
  return parse_multiplex(read_file(path), path.string(), min_nodes);
}

std::string format_multiplex(const MultiplexGraph& g) {
  std::string out;
  for (std::size_t s = 0; s < g.layer_count(); ++s) {
    for (const Edge& e : g.layer(s).edges()) {
      out += std::to_string(s);
      out += ' ';
      out += std::to_string(e.u);
      out += ' ';
      out += std::to_string(e.v);
      out += ' ';
      out += format_double(e.w);
      out += '\n';
    }
  }
  return out;
}

void save_multiplex(const MultiplexGraph& g, const std::filesystem::path& path) {
  write_file(path, format_multiplex(g));
}

Partition load_partition(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<CommunityId> labels;
  std::size_t pending_blank = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty()) {
      ++pending_blank;
      return;
    }
    if (pending_blank)
      throw ParseError(path.string(), line_no - 1, "blank line inside label file");
    CommunityId c = 0;
    if (!parse_number(line, c))
      throw ParseError(path.string(), line_no, "expected a non-negative integer label");
    labels.push_back(c);
  });
  if (labels.empty()) throw ParseError(path.string(), 0, "no labels");
  return Partition::from_labels(labels);
}

void save_partition(const Partition& p, const std::filesystem::path& path) {
  std::string out;
  for (CommunityId c : p.labels()) {
    out += std::to_string(c);
    out += '\n';
  }
  write_file(path, out);
}

FeatureMatrix load_features_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  FeatureMatrix f;
  bool first = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    auto tok = split_tokens(line, ',');
    std::vector<double> row;
    row.reserve(tok.size());
    bool numeric = true;
    for (auto t : tok) {
      double x = 0.0;
      if (!parse_number(trim(t), x)) {
        numeric = false;
        break;
      }
      row.push_back(x);
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        return;
      }
      throw ParseError(path.string(), line_no, "non-numeric feature value");
    }
    first = false;
    if (f.rows == 0) f.cols = row.size();
    if (row.size() != f.cols)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(f.cols) + " columns, got " +
                           std::to_string(row.size()));
    f.values.insert(f.values.end(), row.begin(), row.end());
    ++f.rows;
  });
  if (f.rows == 0) throw ParseError(path.string(), 0, "no feature rows");
  return f;
}

// ---- transformations -------------------------------------------------------

Layer build_knn_layer(const FeatureMatrix& features, std::size_t knn) {
  const std::size_t n = features.rows;
  if (knn == 0) throw GraphError("knn must be positive");
  if (knn >= n)
    throw GraphError("knn (" + std::to_string(knn) + ") must be smaller than node count (" +
                     std::to_string(n) + ")");
  const std::vector<double> corr = kernels::correlation_matrix(features);

  // Correlations within 1e-12 of each other count as ties.
  std::vector<std::vector<NodeId>> nearest(n);
  std::vector<std::pair<long long, NodeId>> cand;
  for (std::size_t u = 0; u < n; ++u) {
    cand.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      const auto key = static_cast<long long>(std::nearbyint(corr[u * n + v] * 1e12));
      cand.emplace_back(-key, static_cast<NodeId>(v));
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(knn), cand.end());
    for (std::size_t r = 0; r < knn; ++r) nearest[u].push_back(cand[r].second);
  }

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> present;
  for (std::size_t u = 0; u < n; ++u)
    for (NodeId v : nearest[u]) {
      const NodeId a = std::min(static_cast<NodeId>(u), v), b = std::max(static_cast<NodeId>(u), v);
      if (present.insert((std::uint64_t{a} << 32) | b).second) edges.push_back({a, b, 1.0});
    }
  return Layer::from_edges(n, edges);
}

MultiplexGraph contract(const MultiplexGraph& g, const Partition& p) {
  if (p.node_count() != g.node_count())
    throw GraphError("partition size does not match graph node count");
  const std::size_t c = p.community_count();
  std::vector<std::vector<NodeId>> members(c);
  for (NodeId i = 0; i < g.node_count(); ++i) members[p[i]].push_back(i);

  std::vector<Layer> layers(g.layer_count());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t s = 0; s < g.layer_count(); ++s) {
    const Layer& layer = g.layer(s);
    std::vector<double> acc(c, 0.0);
    std::vector<CommunityId> touched;
    std::vector<Edge> edges;
    for (CommunityId a = 0; a < c; ++a) {
      double loop = 0.0;
      double internal_twice = 0.0;
      for (NodeId i : members[a]) {
        loop += layer.self_loop(i);
        auto nb = layer.neighbors(i);
        auto ws = layer.weights(i);
        for (std::size_t e = 0; e < nb.size(); ++e) {
          const CommunityId b = p[nb[e]];
          if (b == a) {
            internal_twice += ws[e];
          } else {
            if (acc[b] == 0.0) touched.push_back(b);
            acc[b] += ws[e];
          }
        }
      }
      loop += 0.5 * internal_twice;
      if (loop > 0.0) edges.push_back({a, a, loop});
      std::sort(touched.begin(), touched.end());
      for (CommunityId b : touched) {
        if (b > a) edges.push_back({a, b, acc[b]});
        acc[b] = 0.0;
      }
      touched.clear();
    }
    layers[s] = Layer::from_edges(c, edges);
  }

  std::vector<std::size_t> sizes(c, 0);
  for (NodeId i = 0; i < g.node_count(); ++i) sizes[p[i]] += g.node_size(i);
  return MultiplexGraph(std::move(layers), std::move(sizes));
}

Layer flatten(const MultiplexGraph& g) {
  std::vector<Edge> all;
  for (const Layer& layer : g.layers()) {
    auto e = layer.edges();
    all.insert(all.end(), e.begin(), e.end());
  }
  return Layer::from_edges(g.node_count(), all, Layer::Duplicates::Merge);
}

Partition expand_partition(const Partition& coarse, std::span<const CommunityId> mapping) {
  std::vector<CommunityId> labels(mapping.size());
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (mapping[i] >= coarse.node_count())
      throw GraphError("mapping of node " + std::to_string(i) + " references unknown coarse node " +
                       std::to_string(mapping[i]));
    labels[i] = coarse[mapping[i]];
  }
  std::vector<char> used(coarse.community_count(), 0);
  std::size_t distinct = 0;
  for (CommunityId l : labels) distinct += !std::exchange(used[l], 1);
  if (distinct == coarse.community_count()) return Partition::from_contiguous(std::move(labels));
  return Partition::from_labels(labels);
}

MultiplexGraph stack_layers(std::vector<Layer> layers) {
  if (layers.empty()) throw GraphError("stack_layers needs at least one layer");
  for (const Layer& l : layers)
    if (l.node_count() != layers.front().node_count())
      throw GraphError("cannot stack layers with different node counts (" +
                       std::to_string(layers.front().node_count()) + " vs " +
                       std::to_string(l.node_count()) + ")");
  return MultiplexGraph(std::move(layers));
}

}  // namespace mxl
