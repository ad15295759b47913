// Copyright 2026 The LSC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsc/wug.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "lsc/error.hpp"
#include "lsc/text.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

UsagePair make_pair_key(const std::string& a, const std::string& b) { return a < b ? UsagePair{a, b} : UsagePair{b, a}; }

double median(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("median of empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EdgeMap aggregate_judgments(std::span<const Judgment> judgments) {
  std::map<UsagePair, std::vector<double>> values;
  for (const auto& j : judgments) {
    if (j.value == 0) continue;
    values[make_pair_key(j.usage1, j.usage2)].push_back(j.value);
  }
  EdgeMap edges;
  for (auto& [pair, v] : values) edges[pair] = EdgeWeight{median(v), v.size()};
  return edges;
}

std::optional<std::size_t> WordUsageGraph::index_of(const std::string& identifier) const {
  auto it = index_.find(identifier);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordUsageGraph build_wug(std::string lemma, std::vector<Usage> usages, const EdgeMap& edges) {
  WordUsageGraph g;
  g.lemma_ = std::move(lemma);
  g.nodes_ = std::move(usages);
  for (std::size_t i = 0; i < g.nodes_.size(); ++i)
    if (!g.index_.emplace(g.nodes_[i].identifier, i).second)
      throw IntegrityError("duplicate usage identifier '" + g.nodes_[i].identifier + "' in graph " + g.lemma_);
  for (const auto& [pair, w] : edges) {
    if (pair.first == pair.second) throw IntegrityError("self-loop on usage '" + pair.first + "'");
    auto a = g.index_.find(pair.first);
    auto b = g.index_.find(pair.second);
    if (a == g.index_.end() || b == g.index_.end())
      throw IntegrityError("edge (" + pair.first + ", " + pair.second + ") references an unknown usage in graph " +
                           g.lemma_);
    if (!(w.median >= 1.0 && w.median <= 4.0))
      throw IntegrityError("edge weight " + format_double(w.median) + " outside [1, 4]");
    g.edges_.push_back(Edge{std::min(a->second, b->second), std::max(a->second, b->second), w.median, w.judgments});
  }
  return g;
}

std::map<std::string, int> Clustering::assignment(const WordUsageGraph& g) const {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < g.node_count(); ++i) out[g.nodes()[i].identifier] = labels.at(i);
  return out;
}

double clustering_loss(const WordUsageGraph& g, std::span<const int> labels, double threshold) {
  double loss = 0.0;
  for (const auto& e : g.edges()) {
    const double w = e.weight - threshold;
    if (labels[e.u] == labels[e.v]) {
      if (w < 0) loss -= w;
    } else if (w > 0) {
      loss += w;
    }
  }
  return loss;
}

namespace {

constexpr double kEps = 1e-9;

inline double edge_cost(double w, bool same) { return same ? (w < 0 ? -w : 0.0) : (w > 0 ? w : 0.0); }

struct Neighbor {
  int node;
  double w;
};

// A connected component of the judged graph, nodes local 0..m-1.
struct Component {
  std::vector<std::size_t> global;
  std::vector<std::vector<Neighbor>> adj;
};

int count_labels(const std::vector<int>& labels) {
  std::set<int> s(labels.begin(), labels.end());
  return static_cast<int>(s.size());
}

// Relabels by order of first appearance.
std::vector<int> canonical(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

double component_loss(const Component& c, const std::vector<int>& labels) {
  double loss = 0.0;
  for (std::size_t v = 0; v < c.adj.size(); ++v)
    for (const auto& nb : c.adj[v])
      if (static_cast<std::size_t>(nb.node) > v) loss += edge_cost(nb.w, labels[v] == labels[nb.node]);
  return loss;
}

struct Candidate {
  std::vector<int> labels;
  double loss = std::numeric_limits<double>::infinity();
  int clusters = 0;

  bool better_than(const Candidate& o) const {
    if (loss < o.loss - kEps) return true;
    if (loss > o.loss + kEps) return false;
    if (clusters != o.clusters) return clusters < o.clusters;
    return labels < o.labels;
  }
};

Candidate exact_search(const Component& c) {
  const int m = static_cast<int>(c.adj.size());
  Candidate best;
  std::vector<int> labels(m, -1);
  std::function<void(int, int, double)> rec = [&](int i, int used, double partial) {
    if (partial > best.loss + kEps) return;
    if (used > best.clusters && std::abs(partial - best.loss) <= kEps) return;
    if (i == m) {
      Candidate cand{labels, partial, used};
      if (cand.better_than(best)) best = std::move(cand);
      return;
    }
    for (int l = 0; l <= used; ++l) {
      double add = 0.0;
      for (const auto& nb : c.adj[i])
        if (nb.node < i) add += edge_cost(nb.w, labels[nb.node] == l);
      labels[i] = l;
      rec(i + 1, std::max(used, l + 1), partial + add);
    }
    labels[i] = -1;
  };
  best.clusters = m + 1;
  rec(0, 0, 0.0);
  return best;
}

class Annealer {
 public:
  Annealer(const Component& c, const ClusterParams& p) : c_(c), p_(p), m_(static_cast<int>(c.adj.size())) {}

  Candidate run() {
    Candidate best;
    best.clusters = m_ + 1;
    const int restarts = std::max(1, p_.restarts);
    for (int r = 0; r < restarts; ++r) {
      std::mt19937_64 rng(p_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
      init(r, rng);
      anneal(rng);
      descend();
      Candidate cand;
      cand.labels = canonical(labels_);
      cand.loss = component_loss(c_, cand.labels);
      cand.clusters = count_labels(cand.labels);
      if (cand.better_than(best)) best = std::move(cand);
    }
    return best;
  }

 private:
  void set_labels(std::vector<int> labels) {
    labels_ = std::move(labels);
    size_.assign(m_, 0);
    for (int l : labels_) ++size_[l];
  }

  void init(int restart, std::mt19937_64& rng) {
    std::vector<int> labels(m_);
    if (restart % 3 == 0) {
      // Components of positive (above-threshold) edges.
      std::iota(labels.begin(), labels.end(), 0);
      std::function<int(int)> find = [&](int x) { return labels[x] == x ? x : labels[x] = find(labels[x]); };
      for (int v = 0; v < m_; ++v)
        for (const auto& nb : c_.adj[v])
          if (nb.w > 0) labels[find(v)] = find(nb.node);
      for (int v = 0; v < m_; ++v) labels[v] = find(v);
    } else if (restart % 3 == 1) {
      std::iota(labels.begin(), labels.end(), 0);
    } else {
      const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m_));
      for (auto& l : labels) l = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    }
    set_labels(canonical(labels));
  }

  double move_delta(int v, int to) const {
    const int from = labels_[v];
    double d = 0.0;
    for (const auto& nb : c_.adj[v]) {
      const int lu = labels_[nb.node];
      d += edge_cost(nb.w, lu == to) - edge_cost(nb.w, lu == from);
    }
    return d;
  }

  int empty_label() const {
    for (int l = 0; l < m_; ++l)
      if (size_[l] == 0) return l;
    return -1;
  }

  void apply(int v, int to) {
    --size_[labels_[v]];
    labels_[v] = to;
    ++size_[to];
  }

  void anneal(std::mt19937_64& rng) {
    const long steps = p_.max_iters > 0 ? p_.max_iters : 400L * m_;
    const double t0 = 1.0;
    const double t_end = 0.01;
    const double cool = std::pow(t_end / t0, 1.0 / static_cast<double>(std::max(1L, steps)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double temp = t0;
    for (long s = 0; s < steps; ++s, temp *= cool) {
      const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(m_));
      int to;
      if (c_.adj[v].empty() || unif(rng) < 0.1) {
        if (size_[labels_[v]] == 1) continue;
        to = empty_label();
      } else {
        to = labels_[c_.adj[v][rng() % c_.adj[v].size()].node];
      }
      if (to < 0 || to == labels_[v]) continue;
      const double d = move_delta(v, to);
      if (d <= 0 || unif(rng) < std::exp(-d / temp)) apply(v, to);
    }
  }

  // Greedy single-node moves and cluster merges until neither improves.
  void descend() {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int v = 0; v < m_; ++v) {
        int best_to = -1;
        double best_d = -kEps;
        std::set<int> targets;
        for (const auto& nb : c_.adj[v]) targets.insert(labels_[nb.node]);
        if (size_[labels_[v]] > 1) targets.insert(empty_label());
        for (int to : targets) {
          if (to < 0 || to == labels_[v]) continue;
          const double d = move_delta(v, to);
          if (d < best_d) {
            best_d = d;
            best_to = to;
          }
        }
        if (best_to >= 0) {
          apply(v, best_to);
          improved = true;
        }
      }
      std::map<std::pair<int, int>, double> between;
      for (int v = 0; v < m_; ++v)
        for (const auto& nb : c_.adj[v])
          if (nb.node > v && labels_[v] != labels_[nb.node])
            between[{std::min(labels_[v], labels_[nb.node]), std::max(labels_[v], labels_[nb.node])}] += nb.w;
      // Merging a and b changes the loss by -sum(w') over edges between them.
      auto it = std::max_element(between.begin(), between.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
      if (it != between.end() && it->second > kEps) {
        const auto [a, b] = it->first;
        for (int v = 0; v < m_; ++v)
          if (labels_[v] == b) apply(v, a);
        improved = true;
      }
    }
  }

  const Component& c_;
  const ClusterParams& p_;
  int m_;
  std::vector<int> labels_;
  std::vector<int> size_;
};

std::vector<Component> components(const WordUsageGraph& g, double threshold, std::vector<bool>& isolated) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<Neighbor>> adj(n);
  for (const auto& e : g.edges()) {
    const double w = e.weight - threshold;
    adj[e.u].push_back({static_cast<int>(e.v), w});
    adj[e.v].push_back({static_cast<int>(e.u), w});
  }
  isolated.assign(n, false);
  std::vector<int> comp(n, -1);
  std::vector<Component> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (adj[s].empty()) {
      isolated[s] = true;
      continue;
    }
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<std::size_t> members;
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (const auto& nb : adj[v])
        if (comp[nb.node] < 0) {
          comp[nb.node] = id;
          stack.push_back(static_cast<std::size_t>(nb.node));
        }
    }
    std::sort(members.begin(), members.end());
    Component c;
    c.global = members;
    std::map<std::size_t, int> local;
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
    c.adj.resize(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (const auto& nb : adj[members[i]]) c.adj[i].push_back({local.at(static_cast<std::size_t>(nb.node)), nb.w});
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

Clustering cluster_wug(const WordUsageGraph& g, const ClusterParams& params) {
  if (g.node_count() == 0) throw PreconditionError("cannot cluster an empty graph");
  std::vector<bool> isolated;
  auto comps = components(g, params.threshold, isolated);

  std::vector<int> raw(g.node_count(), -1);
  int next = 0;
  for (const auto& c : comps) {
    const bool exact = params.method == ClusterParams::Method::exact ||
                       (params.method == ClusterParams::Method::automatic && c.global.size() <= params.exact_limit);
    Candidate best = exact ? exact_search(c) : Annealer(c, params).run();
    for (std::size_t i = 0; i < c.global.size(); ++i) raw[c.global[i]] = next + best.labels[i];
    next += best.clusters;
  }
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (isolated[v]) raw[v] = next++;

  Clustering out;
  out.labels = canonical(raw);
  out.cluster_count = count_labels(out.labels);
  out.loss = clustering_loss(g, out.labels, params.threshold);
  double total = 0.0;
  for (const auto& e : g.edges()) total += std::abs(e.weight - params.threshold);
  out.normalized_loss = total > 0 ? out.loss / total : 0.0;
  return out;
}

ConnectivityReport check_cluster_connectivity(const WordUsageGraph& g, const Clustering& c) {
  const int k = c.cluster_count;
  std::set<std::pair<int, int>> judged;
  for (const auto& e : g.edges()) {
    int a = c.labels[e.u], b = c.labels[e.v];
    if (a != b) judged.insert({std::min(a, b), std::max(a, b)});
  }
  ConnectivityReport r;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (!judged.count({a, b})) r.missing_pairs.push_back({a, b});
  if (k <= 1) return r;
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [a, b] : judged) parent[find(a)] = find(b);
  for (int a = 1; a < k; ++a)
    if (find(a) != find(0)) r.connected = false;
  return r;
}

std::size_t uncompared_multi_clusters(const WordUsageGraph& g, const Clustering& c) {
  std::vector<int> size(c.cluster_count, 0);
  for (int l : c.labels) ++size[l];
  std::size_t n = 0;
  for (const auto& [a, b] : check_cluster_connectivity(g, c).missing_pairs)
    if (size[a] > 1 && size[b] > 1) ++n;
  return n;
}

std::pair<SenseFrequencyDistribution, SenseFrequencyDistribution> split_distributions(const WordUsageGraph& g,
                                                                                       const Clustering& c) {
  SenseFrequencyDistribution d1{Period::C1, Eigen::VectorXi::Zero(c.cluster_count)};
  SenseFrequencyDistribution d2{Period::C2, Eigen::VectorXi::Zero(c.cluster_count)};
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    auto& d = g.nodes()[i].period == Period::C1 ? d1 : d2;
    ++d.counts[c.labels[i]];
  }
  return {d1, d2};
}

std::vector<Judgment> read_judgments(const std::filesystem::path& path) {
  auto table = TsvTable::read(path);
  const auto c1 = table.column("identifier1");
  const auto c2 = table.column("identifier2");
  const auto ca = table.column("annotator");
  const auto cj = table.column("judgment");
  const bool has_comment = table.has_column("comment");
  const bool has_lemma = table.has_column("lemma");
  std::vector<Judgment> out;
  out.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    Judgment j;
    j.usage1 = table.at(r, c1);
    j.usage2 = table.at(r, c2);
    j.annotator = table.at(r, ca);
    double v = parse_double(table.at(r, cj), table.source(), table.line_of(r));
    if (v != std::floor(v) || v < 0 || v > 4)
      throw ParseError(table.source(), table.line_of(r), "judgment must be one of 0,1,2,3,4");
    j.value = static_cast<int>(v);
    if (j.usage1 == j.usage2) throw ParseError(table.source(), table.line_of(r), "judgment pairs a usage with itself");
    if (has_comment) j.comment = table.at(r, "comment");
    if (has_lemma) j.lemma = normalize_lemma(table.at(r, "lemma"));
    out.push_back(std::move(j));
  }
  return out;
}

void write_judgments(const std::vector<Judgment>& judgments, const std::filesystem::path& path, std::uint64_t seed) {
  TsvWriter w(path, seed, {"identifier1", "identifier2", "annotator", "judgment", "comment", "lemma"});
  for (const auto& j : judgments)
    w.row({j.usage1, j.usage2, j.annotator, std::to_string(j.value), j.comment, j.lemma});
}

std::string safe_file_name(const std::string& lemma) {
  std::string out;
  for (char c : lemma) out += (c == '/' || c == '\\' || c == '\0') ? '_' : c;
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_wug(const WordUsageGraph& g, const std::filesystem::path& root, std::uint64_t seed) {
  const auto dir = root / safe_file_name(g.lemma());
  std::filesystem::create_directories(dir);
  {
    TsvWriter w(dir / "nodes.tsv", seed, {"identifier", "grouping"}, {{"lemma", g.lemma()}});
    for (const auto& u : g.nodes()) w.row({u.identifier, u.period == Period::C1 ? "1" : "2"});
  }
  TsvWriter w(dir / "edges.tsv", seed, {"identifier1", "identifier2", "weight", "judgments"}, {{"lemma", g.lemma()}});
  for (const auto& e : g.edges())
    w.row({g.nodes()[e.u].identifier, g.nodes()[e.v].identifier, format_double(e.weight),
           std::to_string(e.judgments)});
}

WordUsageGraph read_wug(const std::filesystem::path& lemma_dir) {
  auto nodes = TsvTable::read(lemma_dir / "nodes.tsv");
  auto edges = TsvTable::read(lemma_dir / "edges.tsv");
  std::string lemma = lemma_dir.filename().string();
  if (auto it = nodes.meta().find("lemma"); it != nodes.meta().end()) lemma = it->second;
  std::vector<Usage> usages;
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    Usage u;
    u.lemma = lemma;
    u.identifier = nodes.at(r, "identifier");
    try {
      u.period = parse_period(nodes.at(r, "grouping"));
    } catch (const FormatError& e) {
      throw ParseError(nodes.source(), nodes.line_of(r), e.what());
    }
    usages.push_back(std::move(u));
  }
  EdgeMap map;
  const bool has_count = edges.has_column("judgments");
  for (std::size_t r = 0; r < edges.size(); ++r) {
    EdgeWeight w;
    w.median = parse_double(edges.at(r, "weight"), edges.source(), edges.line_of(r));
    w.judgments = has_count ? static_cast<std::size_t>(
                                  parse_double(edges.at(r, "judgments"), edges.source(), edges.line_of(r)))
                            : 1;
    map[make_pair_key(edges.at(r, "identifier1"), edges.at(r, "identifier2"))] = w;
  }
  return build_wug(lemma, std::move(usages), map);
}

std::vector<std::filesystem::path> list_wug_dirs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) throw NotFoundError("graph directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "nodes.tsv")) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

void write_clustering(const WordUsageGraph& g, const Clustering& c, const std::filesystem::path& path,
                      std::uint64_t seed) {
  TsvWriter w(path, seed, {"identifier", "cluster"}, {{"lemma", g.lemma()}});
  for (std::size_t i = 0; i < g.node_count(); ++i) w.row({g.nodes()[i].identifier, std::to_string(c.labels[i])});
}

Clustering read_clustering(const WordUsageGraph& g, const std::filesystem::path& path, double threshold) {
  auto table = TsvTable::read(path);
  std::vector<int> raw(g.node_count(), -1);
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto idx = g.index_of(table.at(r, "identifier"));
    if (!idx) throw IntegrityError(path.string() + ": unknown usage '" + table.at(r, "identifier") + "'");
    raw[*idx] = static_cast<int>(parse_double(table.at(r, "cluster"), table.source(), table.line_of(r)));
  }
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i] < 0) throw IntegrityError(path.string() + ": usage '" + g.nodes()[i].identifier + "' has no cluster");
  Clustering c;
  c.labels = canonical(raw);
  c.cluster_count = count_labels(c.labels);
  c.loss = clustering_loss(g, c.labels, threshold);
  double total = 0.0;
  for (const auto& e : g.edges()) total += std::abs(e.weight - threshold);
  c.normalized_loss = total > 0 ? c.loss / total : 0.0;
  return c;
}

}  // namespace lsc
