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

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lsc/corpus.hpp"

namespace lsc {

// One annotator's relatedness judgment on a usage pair. Value 0 means
// "cannot decide"; 1..4 is the DURel relatedness scale.
struct Judgment {
  std::string usage1;
  std::string usage2;
  std::string annotator;
  int value = 0;
  std::string lemma;  // optional; filled by readers when known
  std::string comment;
};

using UsagePair = std::pair<std::string, std::string>;  // ordered so first < second

UsagePair make_pair_key(const std::string& a, const std::string& b);

struct EdgeWeight {
  double median = 0.0;
  std::size_t judgments = 0;  // non-zero judgments behind the median
};

using EdgeMap = std::map<UsagePair, EdgeWeight>;

double median(std::vector<double> values);

// Drops 0 judgments and takes the per-pair median. Pairs judged only with 0
// produce no edge.
EdgeMap aggregate_judgments(std::span<const Judgment> judgments);

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
  std::size_t judgments = 0;
};

class WordUsageGraph {
 public:
  WordUsageGraph() = default;

  const std::string& lemma() const { return lemma_; }
  const std::vector<Usage>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::optional<std::size_t> index_of(const std::string& identifier) const;

  friend WordUsageGraph build_wug(std::string lemma, std::vector<Usage> usages, const EdgeMap& edges);

 private:
  std::string lemma_;
  std::vector<Usage> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Throws IntegrityError on duplicate node ids, self-loops, dangling edge
// endpoints or weights outside [1, 4].
WordUsageGraph build_wug(std::string lemma, std::vector<Usage> usages, const EdgeMap& edges);

struct Clustering {
  std::vector<int> labels;  // parallel to graph nodes, dense from 0
  int cluster_count = 0;
  double loss = 0.0;
  double normalized_loss = 0.0;

  std::map<std::string, int> assignment(const WordUsageGraph& g) const;
};

struct ClusterParams {
  enum class Method { automatic, exact, anneal };
  double threshold = 2.5;
  int restarts = 20;
  int max_iters = 0;  // annealing steps per restart; 0 = 400 per node
  std::uint64_t seed = 0;
  Method method = Method::automatic;
  std::size_t exact_limit = 10;  // automatic: exact search up to this many nodes per component
};

// Correlation-clustering loss of a labeling with weights shifted by threshold.
double clustering_loss(const WordUsageGraph& g, std::span<const int> labels, double threshold);

Clustering cluster_wug(const WordUsageGraph& g, const ClusterParams& params = {});

struct ConnectivityReport {
  bool connected = true;
  std::vector<std::pair<int, int>> missing_pairs;  // unjudged cluster pairs, i < j
};

ConnectivityReport check_cluster_connectivity(const WordUsageGraph& g, const Clustering& c);

// Number of unjudged pairs among clusters with more than one usage.
std::size_t uncompared_multi_clusters(const WordUsageGraph& g, const Clustering& c);

struct SenseFrequencyDistribution {
  Period period = Period::C1;
  Eigen::VectorXi counts;
};

std::pair<SenseFrequencyDistribution, SenseFrequencyDistribution> split_distributions(const WordUsageGraph& g,
                                                                                       const Clustering& c);

// Judgment TSV: identifier1 identifier2 annotator judgment comment [lemma].
std::vector<Judgment> read_judgments(const std::filesystem::path& path);
void write_judgments(const std::vector<Judgment>& judgments, const std::filesystem::path& path, std::uint64_t seed);

// Graph directory layout: <dir>/<lemma>/nodes.tsv (identifier grouping) and
// <dir>/<lemma>/edges.tsv (identifier1 identifier2 weight judgments).
void write_wug(const WordUsageGraph& g, const std::filesystem::path& dir, std::uint64_t seed);
WordUsageGraph read_wug(const std::filesystem::path& lemma_dir);
std::vector<std::filesystem::path> list_wug_dirs(const std::filesystem::path& dir);

// Clustering TSV: identifier cluster.
void write_clustering(const WordUsageGraph& g, const Clustering& c, const std::filesystem::path& path,
                      std::uint64_t seed);
Clustering read_clustering(const WordUsageGraph& g, const std::filesystem::path& path, double threshold = 2.5);

std::string safe_file_name(const std::string& lemma);

}  // namespace lsc
