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

#include <Eigen/Dense>
#include <random>

#include "lsc/baselines.hpp"
#include "lsc/error.hpp"
#include "lsc/procrustes.hpp"
#include "lsc/sgns.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lsc;

namespace {

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

EmbeddingMatrixd random_embedding(std::mt19937_64& rng, int n, int d, const std::string& prefix = "w") {
  std::normal_distribution<double> g;
  EmbeddingMatrixd::Matrix m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  std::vector<std::string> vocab;
  for (int i = 0; i < n; ++i) vocab.push_back(prefix + std::to_string(i));
  return {vocab, m};
}

// Two groups of words that only co-occur within their group.
std::vector<std::vector<std::string>> grouped_sentences(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 2), grp(0, 1);
  std::vector<std::vector<std::string>> out;
  for (int s = 0; s < 600; ++s) {
    const std::string g = grp(rng) ? "a" : "b";
    std::vector<std::string> sent;
    for (int k = 0; k < 8; ++k) sent.push_back(g + std::to_string(pick(rng) + 1));
    out.push_back(sent);
  }
  return out;
}

double cosine(const EmbeddingMatrix& e, const std::string& a, const std::string& b) {
  const auto va = e.vectors.row(*e.row_of(a)).cast<double>();
  const auto vb = e.vectors.row(*e.row_of(b)).cast<double>();
  return va.dot(vb) / (va.norm() * vb.norm());
}

SgnsParams small_params() {
  SgnsParams p;
  p.dim = 20;
  p.window = 3;
  p.epochs = 5;
  p.subsample = 0;
  return p;
}

}  // namespace

TEST_CASE("Procrustes recovers a planted rotation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto src = random_embedding(rng, 50, 10);
    const Eigen::MatrixXd q = random_orthogonal(rng, 10);
    const EmbeddingMatrixd tgt(src.vocab, src.vectors * q);
    const auto a = orthogonal_procrustes(src, tgt);
    CHECK((a.aligned.vectors - tgt.vectors).norm() < 1e-9);
    CHECK((a.rotation - q).norm() < 1e-9);
  }
}

TEST_CASE("Procrustes of a space onto itself is the identity") {
  std::mt19937_64 rng(6);
  const auto src = random_embedding(rng, 20, 5);
  const auto a = orthogonal_procrustes(src, src);
  CHECK((a.rotation - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
  CHECK((a.aligned.vectors - src.vectors).norm() < 1e-10);
}

TEST_CASE("Procrustes rotation matches the polar-decomposition oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_embedding(rng, 5, 3);
    const auto t = random_embedding(rng, 5, 3);
    ProcrustesOptions raw{false, false};
    const auto a = orthogonal_procrustes(s, t, raw);
    const Eigen::MatrixXd r = oracle::polar_rotation(s.vectors.transpose() * t.vectors);
    CHECK((a.rotation - r).norm() < 1e-9);
    const double residual = (a.aligned.vectors - t.vectors).norm();
    CHECK(residual == doctest::Approx((s.vectors * r - t.vectors).norm()).epsilon(1e-9));
    // With preprocessing the rotation is solved on the normalized, centered rows.
    const auto b = orthogonal_procrustes(s, t);
    const Eigen::MatrixXd rb = oracle::polar_rotation(preprocess_rows(s.vectors, {}).transpose() *
                                                      preprocess_rows(t.vectors, {}));
    // Centering can leave the 5x3 cross product poorly conditioned.
    CHECK((b.rotation - rb).norm() < 1e-7);
  }
}

TEST_CASE("Procrustes aligns on the shared vocabulary only") {
  std::mt19937_64 rng(8);
  auto src = random_embedding(rng, 30, 4);
  const Eigen::MatrixXd q = random_orthogonal(rng, 4);
  // Target rows in reverse order plus a word the source lacks.
  const EmbeddingMatrixd::Matrix rotated = src.vectors * q;
  std::vector<std::string> tv_vocab(src.vocab.rbegin(), src.vocab.rend());
  tv_vocab.push_back("extra");
  EmbeddingMatrixd::Matrix with_extra(31, 4);
  with_extra << rotated.colwise().reverse(), Eigen::RowVectorXd::Ones(4);
  const EmbeddingMatrixd tgt(tv_vocab, with_extra);
  const auto a = orthogonal_procrustes(src, tgt);
  CHECK(a.shared.size() == 30);
  CHECK((a.rotation - q).norm() < 1e-6);
  const EmbeddingMatrixd other({"x"}, EmbeddingMatrixd::Matrix::Ones(1, 4));
  CHECK_THROWS_AS(orthogonal_procrustes(src, other), PreconditionError);
}

TEST_CASE("cosine change scores") {
  EmbeddingMatrix::Matrix a(2, 3), b(2, 3);
  a << 1, 2, 3, 1, 0, 0;
  b << 1, 2, 3, -1, 0, 0;
  const EmbeddingMatrix e1({"same", "flip"}, a), e2({"same", "flip"}, b);
  const auto p = cosine_change_scores(e1, e2, {"same", "flip", "gone"});
  CHECK(p.values.at("same") == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(p.values.at("flip") == doctest::Approx(2.0));
  CHECK(p.skipped == std::vector<std::string>{"gone"});
}

TEST_CASE("cosine change is invariant under a common rotation") {
  std::mt19937_64 rng(9);
  const auto e1 = random_embedding(rng, 10, 6).cast<float>();
  const auto e2 = random_embedding(rng, 10, 6).cast<float>();
  const Eigen::MatrixXf q = random_orthogonal(rng, 6).cast<float>();
  const EmbeddingMatrix r1(e1.vocab, e1.vectors * q), r2(e2.vocab, e2.vectors * q);
  const auto a = cosine_change_scores(e1, e2, e1.vocab);
  const auto b = cosine_change_scores(r1, r2, e1.vocab);
  for (const auto& [w, v] : a.values) CHECK(b.values.at(w) == doctest::Approx(v).epsilon(1e-5));
}

TEST_CASE("SGNS separates words from disjoint contexts") {
  SgnsTrainer t(grouped_sentences(1), small_params(), 3);
  t.train();
  const auto e = t.embeddings();
  double intra = 0, inter = 0;
  int ni = 0, nx = 0;
  for (const std::string g : {"a", "b"})
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j) {
        intra += cosine(e, g + std::to_string(i), g + std::to_string(j));
        ++ni;
      }
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      inter += cosine(e, "a" + std::to_string(i), "b" + std::to_string(j));
      ++nx;
    }
  CHECK(intra / ni > inter / nx + 0.2);
}

TEST_CASE("SGNS with zero epochs returns the initialization") {
  auto p = small_params();
  const SgnsTrainer untouched(grouped_sentences(2), p, 11);
  p.epochs = 0;
  SgnsTrainer t(grouped_sentences(2), p, 11);
  t.train();
  CHECK(t.epochs_done() == 0);
  CHECK(t.embeddings().vectors == untouched.embeddings().vectors);
}

TEST_CASE("SGNS is bitwise deterministic with one worker") {
  SgnsTrainer a(grouped_sentences(3), small_params(), 5);
  SgnsTrainer b(grouped_sentences(3), small_params(), 5);
  a.train();
  b.train();
  CHECK(a.vocab() == b.vocab());
  CHECK(a.embeddings().vectors == b.embeddings().vectors);
  SgnsTrainer c(grouped_sentences(3), small_params(), 6);
  c.train();
  CHECK(a.embeddings().vectors != c.embeddings().vectors);
}

TEST_CASE("SGNS probe objective does not increase across epochs") {
  auto p = small_params();
  p.epochs = 6;
  SgnsTrainer t(grouped_sentences(4), p, 9);
  const auto probe = t.make_probe(500, 1);
  double prev = t.objective(probe);
  for (int e = 0; e < p.epochs; ++e) {
    t.train_epoch();
    const double cur = t.objective(probe);
    CHECK(cur <= prev * 1.02 + 1e-9);
    prev = cur;
  }
}

TEST_CASE("embedding files round trip") {
  testutil::TempDir dir("emb");
  std::mt19937_64 rng(10);
  const auto e = random_embedding(rng, 7, 3).cast<float>();
  save_embeddings(e, dir / "e.emb");
  const auto back = load_embeddings(dir / "e.emb");
  CHECK(back.vocab == e.vocab);
  CHECK(back.vectors == e.vectors);
  testutil::write_file(dir / "bad.emb", "NOTMAGIC");
  CHECK_THROWS(load_embeddings(dir / "bad.emb"));
}
