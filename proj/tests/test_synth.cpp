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

#include <set>

#include "lsc/synth.hpp"
#include "lsc/tsv.hpp"
#include "test_util.hpp"

using namespace lsc;

namespace {

SynthConfig small_config(std::uint64_t seed) {
  SynthConfig c;
  c.vocab_size = 120;
  c.sentences = 800;
  c.planted_changes = 3;
  c.annotated_words = 5;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("synthetic corpora are byte-identical for a seed") {
  testutil::TempDir a("synth"), b("synth");
  const auto cfg = small_config(4);
  write_synthetic(generate_synthetic(cfg), cfg, a.path());
  write_synthetic(generate_synthetic(cfg), cfg, b.path());
  for (const char* f : {"c1.raw.txt", "c2.lemma.txt", "c1.conllu", "manifest.tsv", "annotation/judgments.tsv",
                        "annotation/uses.tsv"})
    CHECK(testutil::read_file(a / f) == testutil::read_file(b / f));
  auto other = cfg;
  other.seed = 5;
  testutil::TempDir c("synth");
  write_synthetic(generate_synthetic(other), other, c.path());
  CHECK(testutil::read_file(a / "c1.lemma.txt") != testutil::read_file(c / "c1.lemma.txt"));
}

TEST_CASE("synthetic layers load back consistently") {
  testutil::TempDir dir("synth");
  const auto cfg = small_config(6);
  const auto data = generate_synthetic(cfg);
  write_synthetic(data, cfg, dir.path());
  const auto c1 = load_corpus({{Layer::conllu, dir / "c1.conllu"},
                               {Layer::raw, dir / "c1.raw.txt"},
                               {Layer::token, dir / "c1.token.txt"},
                               {Layer::lemma, dir / "c1.lemma.txt"},
                               {Layer::pos, dir / "c1.pos.txt"}},
                              Period::C1);
  CHECK(c1.sentences().size() == cfg.sentences);
  CHECK(c1.token_count() == data.c1.token_count());

  const auto manifest = TsvTable::read(dir / "manifest.tsv");
  std::set<std::string> planted;
  for (std::size_t r = 0; r < manifest.size(); ++r)
    if (manifest.at(r, "planted") == "1") planted.insert(manifest.at(r, "lemma"));
  CHECK(planted.size() == cfg.planted_changes);
  for (const auto& p : data.planted) {
    CHECK(planted.count(p.lemma));
    CHECK(p.old_topic != p.new_topic);
  }
}

TEST_CASE("no planted changes means no manifest positives") {
  auto cfg = small_config(7);
  cfg.planted_changes = 0;
  const auto data = generate_synthetic(cfg);
  CHECK(data.planted.empty());
  CHECK_FALSE(data.usages.empty());
}
