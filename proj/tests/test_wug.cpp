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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "lsc/error.hpp"
#include "lsc/wug.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lsc;

namespace {

Judgment judge(const std::string& a, const std::string& b, const std::string& who, int v) {
  Judgment j;
  j.usage1 = a;
  j.usage2 = b;
  j.annotator = who;
  j.value = v;
  j.lemma = "w";
  return j;
}

std::vector<Usage> make_usages(int n, int c1_count) {
  std::vector<Usage> out;
  for (int i = 0; i < n; ++i) {
    Usage u;
    u.lemma = "w";
    u.identifier = "u" + std::to_string(i);
    u.period = i < c1_count ? Period::C1 : Period::C2;
    out.push_back(u);
  }
  return out;
}

void add_edge(EdgeMap& m, int a, int b, double w) {
  m[make_pair_key("u" + std::to_string(a), "u" + std::to_string(b))] = {w, 1};
}

}  // namespace

TEST_CASE("median aggregation drops cannot-decide judgments") {
  const std::vector<Judgment> js = {judge("a", "b", "x", 4), judge("b", "a", "y", 4), judge("a", "b", "z", 1),
                                    judge("a", "c", "x", 3), judge("a", "c", "y", 4), judge("b", "c", "x", 0),
                                    judge("b", "c", "y", 2), judge("c", "d", "x", 0)};
  const auto e = aggregate_judgments(js);
  CHECK(e.at(make_pair_key("a", "b")).median == 4.0);
  CHECK(e.at(make_pair_key("a", "b")).judgments == 3);
  CHECK(e.at(make_pair_key("a", "c")).median == 3.5);
  CHECK(e.at(make_pair_key("b", "c")).median == 2.0);
  CHECK_FALSE(e.count(make_pair_key("c", "d")));
}

TEST_CASE("median aggregation matches a sorting oracle and ignores order") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> val(0, 4), count(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Judgment> js;
    std::vector<double> nonzero;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      const int v = val(rng);
      js.push_back(judge("p", "q", "a" + std::to_string(i), v));
      if (v) nonzero.push_back(v);
    }
    auto e = aggregate_judgments(js);
    if (nonzero.empty()) {
      CHECK(e.empty());
      continue;
    }
    CHECK(e.at({"p", "q"}).median == oracle::median(nonzero));
    std::shuffle(js.begin(), js.end(), rng);
    for (auto& j : js) j.annotator = "b" + j.annotator;
    CHECK(aggregate_judgments(js).at({"p", "q"}).median == oracle::median(nonzero));
  }
}

TEST_CASE("graph construction") {
  EdgeMap edges;
  int added = 0;
  for (int i = 0; i < 40 && added < 120; ++i)
    for (int j = i + 1; j < 40 && added < 120; j += 7, ++added) add_edge(edges, i, j, 3.0);
  const auto g = build_wug("w", make_usages(40, 20), edges);
  CHECK(g.node_count() == 40);
  CHECK(g.edge_count() == 120);
  CHECK(build_wug("w", make_usages(40, 20), {}).edge_count() == 0);

  EdgeMap dangling;
  dangling[make_pair_key("u0", "zz")] = {3.0, 1};
  CHECK_THROWS_AS(build_wug("w", make_usages(3, 1), dangling), IntegrityError);
  EdgeMap bad;
  add_edge(bad, 0, 1, 5.0);
  CHECK_THROWS_AS(build_wug("w", make_usages(3, 1), bad), IntegrityError);
  auto dup = make_usages(3, 1);
  dup[2].identifier = "u0";
  CHECK_THROWS_AS(build_wug("w", dup, {}), IntegrityError);
}

TEST_CASE("two cliques joined by weak edges form two clusters") {
  EdgeMap e;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      add_edge(e, a, b, 4);
      add_edge(e, a + 3, b + 3, 4);
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) add_edge(e, a, b, 1);
  const auto g = build_wug("w", make_usages(6, 3), e);
  for (auto method : {ClusterParams::Method::automatic, ClusterParams::Method::anneal}) {
    ClusterParams p;
    p.method = method;
    const auto c = cluster_wug(g, p);
    CHECK(c.cluster_count == 2);
    CHECK(c.loss == 0.0);
    CHECK(c.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
  }
}

TEST_CASE("a single node is one cluster") {
  const auto c = cluster_wug(build_wug("w", make_usages(1, 1), {}));
  CHECK(c.cluster_count == 1);
  CHECK(c.loss == 0.0);
}

TEST_CASE("isolated nodes become singletons") {
  EdgeMap e;
  add_edge(e, 0, 1, 4);
  const auto c = cluster_wug(build_wug("w", make_usages(4, 2), e));
  CHECK(c.cluster_count == 3);
  CHECK(c.labels[0] == c.labels[1]);
  CHECK(c.labels[2] != c.labels[3]);
}

TEST_CASE("clustering loss equals the brute-force optimum on small graphs") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(2, 8);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_wug(rng, size(rng), 0.6, trial % 2 == 0);
    const double best = oracle::min_partition_loss(static_cast<int>(g.node_count()), oracle::edges_of(g));
    for (auto method : {ClusterParams::Method::exact, ClusterParams::Method::anneal}) {
      ClusterParams p;
      p.method = method;
      p.seed = static_cast<std::uint64_t>(trial);
      const auto c = cluster_wug(g, p);
      CHECK(c.loss == doctest::Approx(best).epsilon(1e-12));
      CHECK(c.loss == doctest::Approx(oracle::partition_loss(oracle::edges_of(g), c.labels, 2.5)));
    }
  }
}

TEST_CASE("clustering loss properties") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_wug(rng, 12, 0.4, false);
    const auto c = cluster_wug(g);
    const auto n = g.node_count();
    std::vector<int> singletons(n), one(n, 0);
    for (std::size_t i = 0; i < n; ++i) singletons[i] = static_cast<int>(i);
    CHECK(c.loss <= clustering_loss(g, singletons, 2.5) + 1e-12);
    CHECK(c.loss <= clustering_loss(g, one, 2.5) + 1e-12);
    std::vector<int> relabeled = c.labels;
    for (auto& l : relabeled) l = c.cluster_count - 1 - l;
    CHECK(clustering_loss(g, relabeled, 2.5) == doctest::Approx(c.loss));

    const auto [d1, d2] = split_distributions(g, c);
    CHECK(d1.counts.sum() + d2.counts.sum() == static_cast<int>(n));
    for (int k = 0; k < c.cluster_count; ++k)
      CHECK(d1.counts(k) + d2.counts(k) == std::count(c.labels.begin(), c.labels.end(), k));
  }
}

TEST_CASE("clustering is deterministic for a seed") {
  std::mt19937_64 rng(3);
  const auto g = oracle::random_wug(rng, 20, 0.3, false);
  ClusterParams p;
  p.seed = 17;
  CHECK(cluster_wug(g, p).labels == cluster_wug(g, p).labels);
}

TEST_CASE("cluster connectivity") {
  Clustering c;
  c.labels = {0, 0, 1, 1};
  c.cluster_count = 2;
  EdgeMap e;
  add_edge(e, 0, 1, 4);
  add_edge(e, 1, 2, 1);
  CHECK(check_cluster_connectivity(build_wug("w", make_usages(4, 2), e), c).connected);

  Clustering c3;
  c3.labels = {0, 1, 2};
  c3.cluster_count = 3;
  EdgeMap e3;
  add_edge(e3, 0, 1, 1);
  const auto r = check_cluster_connectivity(build_wug("w", make_usages(3, 2), e3), c3);
  CHECK_FALSE(r.connected);
  const std::vector<std::pair<int, int>> expected = {{0, 2}, {1, 2}};
  CHECK(r.missing_pairs == expected);

  Clustering one;
  one.labels = {0, 0};
  one.cluster_count = 1;
  CHECK(check_cluster_connectivity(build_wug("w", make_usages(2, 1), {}), one).connected);
}

TEST_CASE("sense frequency distributions per period") {
  const auto usages = make_usages(40, 20);
  Clustering c;
  c.cluster_count = 2;
  c.labels.assign(40, 0);
  for (int i = 20; i < 40; ++i) c.labels[i] = i < 23 ? 0 : 1;
  const auto g = build_wug("servidor", usages, {});
  const auto [d1, d2] = split_distributions(g, c);
  CHECK(d1.counts == Eigen::Vector2i(20, 0));
  CHECK(d2.counts == Eigen::Vector2i(3, 17));

  const auto g1 = build_wug("w", make_usages(10, 10), {});
  Clustering c1;
  c1.labels.assign(10, 0);
  c1.cluster_count = 1;
  CHECK(split_distributions(g1, c1).second.counts.sum() == 0);

  const auto g2 = build_wug("w", make_usages(20, 10), {});
  Clustering c2;
  c2.labels.assign(20, 0);
  c2.cluster_count = 1;
  const auto [a, b] = split_distributions(g2, c2);
  CHECK(a.counts(0) == 10);
  CHECK(b.counts(0) == 10);
}

TEST_CASE("graph and clustering files round trip") {
  testutil::TempDir dir("wug");
  std::mt19937_64 rng(8);
  const auto g = oracle::random_wug(rng, 9, 0.5, false);
  write_wug(g, dir.path(), 3);
  const auto dirs = list_wug_dirs(dir.path());
  REQUIRE(dirs.size() == 1);
  const auto back = read_wug(dirs[0]);
  CHECK(back.lemma() == "w");
  CHECK(back.node_count() == g.node_count());
  REQUIRE(back.edge_count() == g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) CHECK(back.edges()[i].weight == g.edges()[i].weight);
  const auto c = cluster_wug(g);
  write_clustering(g, c, dir / "c.tsv", 3);
  const auto c2 = read_clustering(back, dir / "c.tsv");
  CHECK(c2.labels == c.labels);
  CHECK(c2.loss == doctest::Approx(c.loss));
}

TEST_CASE("judgment files reject values outside the scale") {
  testutil::TempDir dir("wug");
  testutil::write_file(dir / "j.tsv", "identifier1\tidentifier2\tannotator\tjudgment\tcomment\na\tb\tx\t5\t\n");
  CHECK_THROWS_AS(read_judgments(dir / "j.tsv"), ParseError);
  testutil::write_file(dir / "k.tsv", "identifier1\tidentifier2\tannotator\tjudgment\tcomment\na\tb\tx\t3\t\n");
  const auto js = read_judgments(dir / "k.tsv");
  REQUIRE(js.size() == 1);
  CHECK(js[0].value == 3);
}
