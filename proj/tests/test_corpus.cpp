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
#include <set>

#include "lsc/corpus.hpp"
#include "lsc/error.hpp"
#include "lsc/text.hpp"
#include "test_util.hpp"

using namespace lsc;
using testutil::TempDir;
using testutil::write_file;

namespace {

const char* kConllu =
    "# sent_id = s1\n"
    "# text = El gato duerme.\n"
    "1\tEl\tel\tDET\t_\tDefinite=Def\t2\tdet\t_\t_\n"
    "2\tgato\tgato\tNOUN\t_\tCase=Nom|Number=Sing\t3\tnsubj\t_\t_\n"
    "3\tduerme\tdormir\tVERB\t_\tTense=Pres\t0\troot\t_\tSpaceAfter=No\n"
    "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n"
    "\n"
    "# sent_id = s2\n"
    "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "1\tde\tde\tADP\t_\t_\t3\tcase\t_\t_\n"
    "2\tel\tel\tDET\t_\t_\t3\tdet\t_\t_\n"
    "3\tGatos\tGato\tNOUN\t_\tNumber=Plur\t0\troot\t_\t_\n"
    "\n";

Corpus lemma_pos_corpus(const TempDir& dir) {
  write_file(dir / "c.lemma.txt", "el gato correr\nel gato dormir\n");
  write_file(dir / "c.pos.txt", "DET NOUN VERB\nDET NOUN VERB\n");
  return load_corpus({{Layer::lemma, dir / "c.lemma.txt"}, {Layer::pos, dir / "c.pos.txt"}}, Period::C1);
}

Corpus corpus_with_occurrences(const std::string& lemma, int occurrences, int filler) {
  Corpus c(Period::C1);
  c.mark_layer(Layer::token);
  c.mark_layer(Layer::lemma);
  c.mark_layer(Layer::raw);
  for (int i = 0; i < occurrences + filler; ++i) {
    SentenceRecord s;
    s.sentence_id = std::to_string(i + 1);
    const bool hit = i < occurrences;
    std::vector<std::pair<std::string, std::string>> words = {
        {"Los", "el"}, {hit ? "sexos" : "perros", hit ? lemma : "perro"}, {"corren", "correr"}, {";", ";"}};
    for (const auto& [surface, lem] : words) {
      Token t;
      t.surface = surface;
      t.lemma = lem;
      s.tokens.push_back(t);
    }
    s.raw_text = "Los " + s.tokens[1].surface + " corren;";
    c.add_sentence(s);
  }
  return c;
}

}  // namespace

TEST_CASE("line layers parse one sentence per line") {
  TempDir dir("corpus");
  write_file(dir / "l.txt", "el gato correr\nel perro dormir\n");
  const auto c = load_corpus(dir / "l.txt", Layer::lemma, Period::C1);
  CHECK(c.sentences().size() == 2);
  CHECK(c.token_count() == 6);
  CHECK(c.sentences()[1].tokens[1].lemma == "perro");
}

TEST_CASE("comment lines and blank lines are skipped in line layers") {
  TempDir dir("corpus");
  write_file(dir / "l.txt", "# lsc-toolkit version=0.1.0 seed=1\nel gato\n\nel perro\n");
  const auto c = load_corpus(dir / "l.txt", Layer::lemma, Period::C2);
  CHECK(c.sentences().size() == 2);
  CHECK(c.period() == Period::C2);
}

TEST_CASE("CoNLL-U parsing keeps morphology, skips multiword ranges") {
  TempDir dir("corpus");
  write_file(dir / "c.conllu", kConllu);
  const auto c = load_corpus(dir / "c.conllu", Layer::conllu, Period::C1);
  REQUIRE(c.sentences().size() == 2);
  const auto& s1 = c.sentences()[0];
  CHECK(s1.sentence_id == "s1");
  CHECK(s1.raw_text == "El gato duerme.");
  REQUIRE(s1.tokens.size() == 4);
  CHECK(s1.tokens[1].morph.at("Case") == "Nom");
  CHECK(s1.tokens[1].deprel == "nsubj");
  CHECK(s1.tokens[1].head == 3);
  CHECK(c.sentences()[1].tokens.size() == 3);
  CHECK(c.has(Layer::lemma));
  CHECK(c.has(Layer::pos));
}

TEST_CASE("CoNLL-U with a wrong column count reports the line") {
  TempDir dir("corpus");
  write_file(dir / "bad.conllu", "# sent_id = a\n1\tgato\tgato\tNOUN\n\n");
  try {
    load_corpus(dir / "bad.conllu", Layer::conllu, Period::C1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("layer token counts must agree") {
  TempDir dir("corpus");
  write_file(dir / "t.txt", "el gato corre\n");
  write_file(dir / "l.txt", "el gato correr ya\n");
  CHECK_THROWS_AS(load_corpus({{Layer::token, dir / "t.txt"}, {Layer::lemma, dir / "l.txt"}}, Period::C1),
                  IntegrityError);
}

TEST_CASE("frequency counts with and without a POS filter") {
  TempDir dir("corpus");
  const auto c = lemma_pos_corpus(dir);
  const auto filtered = frequency_counts(c, content_pos());
  CHECK(filtered.lemma_freq == std::map<std::string, std::int64_t>{{"correr", 1}, {"dormir", 1}, {"gato", 2}});
  CHECK(filtered.total_tokens == 6);
  const auto all = frequency_counts(c);
  CHECK(all.lemma_freq.at("el") == 2);

  const auto empty = frequency_counts(Corpus(Period::C1));
  CHECK(empty.lemma_freq.empty());
  CHECK(empty.total_tokens == 0);
}

TEST_CASE("frequency counts fold case and exclude punctuation from the total") {
  TempDir dir("corpus");
  write_file(dir / "c.conllu", kConllu);
  const auto c = load_corpus(dir / "c.conllu", Layer::conllu, Period::C1);
  const auto all = frequency_counts(c);
  CHECK(all.lemma_freq.at("gato") == 2);  // "gato" and "Gato"
  CHECK(all.total_tokens == 6);
  std::int64_t sum = 0;
  for (const auto& [l, n] : all.lemma_freq) sum += n;
  CHECK(sum == all.total_tokens);
  std::int64_t filtered_sum = 0;
  for (const auto& [l, n] : frequency_counts(c, content_pos()).lemma_freq) filtered_sum += n;
  CHECK(filtered_sum <= sum);
}

TEST_CASE("target selection") {
  VocabStats s1, s2;
  s1.lemma_freq = {{"a", 40}, {"b", 39}};
  s2.lemma_freq = {{"a", 73}, {"b", 100}};
  CHECK(select_targets(s1, s2, 40, 73) == std::vector<std::string>{"a"});
  CHECK(select_targets(s1, s2, 0, 0) == std::vector<std::string>{"a", "b"});
  VocabStats d;
  d.lemma_freq = {{"c", 100}};
  CHECK(select_targets(s1, d, 0, 0).empty());
  CHECK(proportional_threshold(40, 1000, 1825) == 73);
}

TEST_CASE("target selection is monotone in both thresholds") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> freq(0, 60);
  for (int trial = 0; trial < 50; ++trial) {
    VocabStats s1, s2;
    for (int i = 0; i < 30; ++i) {
      if (freq(rng) > 10) s1.lemma_freq["w" + std::to_string(i)] = freq(rng);
      if (freq(rng) > 10) s2.lemma_freq["w" + std::to_string(i)] = freq(rng);
    }
    const int m1 = freq(rng), m2 = freq(rng);
    const auto base = select_targets(s1, s2, m1, m2);
    for (const auto& w : base) {
      CHECK(s1.lemma_freq.count(w));
      CHECK(s2.lemma_freq.count(w));
    }
    const std::set<std::string> base_set(base.begin(), base.end());
    for (const auto& w : select_targets(s1, s2, m1 + 5, m2)) CHECK(base_set.count(w));
    for (const auto& w : select_targets(s1, s2, m1, m2 + 5)) CHECK(base_set.count(w));
  }
}

TEST_CASE("usage sampling is seeded and reports undersampling") {
  const auto c = corpus_with_occurrences("sexo", 100, 20);
  const auto a = sample_usages(c, "sexo", 20, 7);
  const auto b = sample_usages(c, "sexo", 20, 7);
  REQUIRE(a.usages.size() == 20);
  CHECK_FALSE(a.undersampled);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.usages.size(); ++i) {
    ids.insert(a.usages[i].identifier);
    CHECK(a.usages[i].identifier == b.usages[i].identifier);
    CHECK(a.usages[i].target == b.usages[i].target);
  }
  CHECK(ids.size() == 20);

  const auto few = sample_usages(corpus_with_occurrences("sexo", 12, 5), "sexo", 20, 1);
  CHECK(few.usages.size() == 12);
  CHECK(few.undersampled);
  CHECK(few.available == 12);

  CHECK_THROWS_AS(sample_usages(c, "ausente", 20, 1), NotFoundError);
}

TEST_CASE("sampled spans always validate") {
  const auto c = corpus_with_occurrences("sexo", 30, 0);
  const auto lex = build_surface_lexicon(c);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const auto& u : sample_usages(c, "sexo", 10, seed).usages) {
      const auto v = validate_target_index(u, &lex);
      CHECK(v.status != ValidationResult::Status::mismatch);
      CHECK(v.text == "sexos");
      const auto w = validate_target_index(u);
      CHECK(w.status != ValidationResult::Status::mismatch);
    }
  }
}

TEST_CASE("target span validation") {
  Usage u;
  u.lemma = "sexo";
  u.context = "…entre personas de diferentes sexos; y también…";
  const auto ctx = to_u32(u.context);
  const auto start = ctx.find(U"sexos");
  REQUIRE(start != std::u32string::npos);

  u.target = {start, start + 6};
  auto r = validate_target_index(u);
  CHECK(r.status == ValidationResult::Status::corrected_span);
  CHECK(r.span.end == start + 5);
  CHECK(r.text == "sexos");

  u.target = {start, start + 5};
  CHECK(validate_target_index(u).status == ValidationResult::Status::ok);

  const auto d = ctx.find(U"diferentes");
  u.target = {d, d + 10};
  CHECK(validate_target_index(u).status == ValidationResult::Status::mismatch);

  u.target = {start + 1, start + 5};
  CHECK(validate_target_index(u).status == ValidationResult::Status::mismatch);
  u.target = {start, ctx.size() + 1};
  CHECK(validate_target_index(u).status == ValidationResult::Status::mismatch);
}

TEST_CASE("usage TSV round trip") {
  TempDir dir("corpus");
  Usage u;
  u.lemma = "gato";
  u.pos = "NOUN";
  u.period = Period::C2;
  u.identifier = "gato-C2-3-1";
  u.sentence_id = "3";
  u.context = "El gato duerme.";
  u.target = {3, 7};
  write_usages({u}, dir / "uses.tsv", 4);
  const auto back = read_usages(dir / "uses.tsv");
  REQUIRE(back.size() == 1);
  CHECK(back[0].identifier == u.identifier);
  CHECK(back[0].period == Period::C2);
  CHECK(back[0].target == u.target);
  CHECK(back[0].context == u.context);
  CHECK(testutil::read_file(dir / "uses.tsv").rfind("# lsc-toolkit version=", 0) == 0);
}

TEST_CASE("vocabulary statistics round trip") {
  TempDir dir("corpus");
  const auto stats = frequency_counts(lemma_pos_corpus(dir), content_pos());
  write_vocab_stats(stats, dir / "v.tsv", 0);
  const auto back = read_vocab_stats(dir / "v.tsv");
  CHECK(back.lemma_freq == stats.lemma_freq);
  CHECK(back.total_tokens == stats.total_tokens);
}
