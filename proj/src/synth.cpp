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

#include "lsc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "lsc/error.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

namespace {

// Portable uniform draws straight from the engine output.
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  std::mt19937_64 engine;
};

struct WeightedTable {
  std::vector<std::size_t> items;
  std::vector<double> cumulative;

  void add(std::size_t item, double w) {
    items.push_back(item);
    cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + w);
  }
  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return items[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), items.size() - 1)];
  }
};

const char* kPos[] = {"NOUN", "VERB", "ADJ", "ADV"};
const char* kDeprels[] = {"nsubj", "obj", "obl", "nmod", "amod", "advmod"};

std::string word_name(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%03zu", prefix, i);
  return buf;
}

Token make_token(const std::string& lemma, const std::string& pos, std::size_t topic, std::size_t topics, Rng& rng) {
  Token t;
  t.lemma = lemma;
  t.pos = pos;
  t.surface = lemma;
  const double plural_p = static_cast<double>(topic + 1) / static_cast<double>(topics + 1);
  if (pos == "NOUN" || pos == "ADJ") {
    const bool plural = rng.uniform() < plural_p;
    t.morph["Number"] = plural ? "Plur" : "Sing";
    if (plural) t.surface += "s";
  } else if (pos == "VERB") {
    const bool past = rng.uniform() < plural_p;
    t.morph["Tense"] = past ? "Past" : "Pres";
    if (past) t.surface += "ó";
  } else if (pos == "DET") {
    t.morph["Definite"] = "Def";
  }
  if (pos == "DET")
    t.deprel = "det";
  else
    t.deprel = kDeprels[(topic + (rng.uniform() < 0.3 ? 1 : 0)) % 6];
  return t;
}

}  // namespace

SynthData generate_synthetic(const SynthConfig& cfg) {
  if (cfg.topics < 2) throw PreconditionError("synthetic generator needs at least two topics");
  const std::size_t function_words = std::max<std::size_t>(1, cfg.vocab_size / 25);
  if (cfg.vocab_size <= function_words + cfg.topics) throw PreconditionError("vocabulary too small");
  const std::size_t content = cfg.vocab_size - function_words;
  if (cfg.planted_changes > content) throw PreconditionError("more planted changes than content words");
  if (cfg.sentence_length < 3) throw PreconditionError("sentence length must be at least 3");

  Rng rng(cfg.seed);
  SynthData data;
  std::vector<std::string> func;
  for (std::size_t i = 0; i < function_words; ++i) func.push_back(word_name('f', i));
  for (std::size_t i = 0; i < content; ++i) data.content_words.push_back(word_name('w', i));

  std::vector<double> base_weight(content);
  for (auto& w : base_weight) w = 0.5 + rng.uniform();
  std::vector<std::size_t> home(content);
  for (std::size_t i = 0; i < content; ++i) home[i] = i % cfg.topics;

  std::vector<std::size_t> order(content);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine);
  std::vector<std::size_t> planted_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.planted_changes));
  std::sort(planted_idx.begin(), planted_idx.end());
  std::vector<std::size_t> new_topic(content, 0);
  std::set<std::size_t> planted_set(planted_idx.begin(), planted_idx.end());
  for (std::size_t i : planted_idx) {
    new_topic[i] = (home[i] + 1 + rng.below(cfg.topics - 1)) % cfg.topics;
    data.planted.push_back({data.content_words[i], home[i], new_topic[i]});
  }

  auto build_tables = [&](bool modern) {
    std::vector<WeightedTable> tables(cfg.topics);
    for (std::size_t i = 0; i < content; ++i) {
      if (modern && planted_set.count(i)) {
        tables[home[i]].add(i, base_weight[i] * (1.0 - cfg.shift));
        tables[new_topic[i]].add(i, base_weight[i] * cfg.shift);
      } else {
        tables[home[i]].add(i, base_weight[i]);
      }
    }
    return tables;
  };

  auto generate = [&](Corpus& corpus, std::vector<std::size_t>& topics, bool modern) {
    const auto tables = build_tables(modern);
    for (Layer l : {Layer::raw, Layer::token, Layer::lemma, Layer::pos, Layer::conllu}) corpus.mark_layer(l);
    for (std::size_t s = 0; s < cfg.sentences; ++s) {
      const std::size_t topic = rng.below(cfg.topics);
      topics.push_back(topic);
      SentenceRecord rec;
      rec.sentence_id = std::to_string(s + 1);
      for (std::size_t k = 0; k + 1 < cfg.sentence_length; ++k) {
        Token t;
        if (rng.uniform() < 0.25) {
          t = make_token(func[rng.below(func.size())], "DET", topic, cfg.topics, rng);
        } else {
          const std::size_t w = tables[topic].draw(rng);
          t = make_token(data.content_words[w], kPos[(w / cfg.topics) % 4], topic, cfg.topics, rng);
        }
        t.head = k == 0 ? 0 : 1;
        rec.tokens.push_back(std::move(t));
      }
      Token stop;
      stop.surface = stop.lemma = ".";
      stop.pos = "PUNCT";
      stop.deprel = "punct";
      stop.head = 1;
      rec.tokens.push_back(stop);
      for (std::size_t k = 0; k + 1 < rec.tokens.size(); ++k) {
        if (k) rec.raw_text += ' ';
        rec.raw_text += rec.tokens[k].surface;
      }
      rec.raw_text += '.';
      corpus.add_sentence(std::move(rec));
    }
  };
  generate(data.c1, data.topics_c1, false);
  generate(data.c2, data.topics_c2, true);

  // Simulated annotation: planted words plus random stable words.
  std::vector<std::size_t> annotated = planted_idx;
  for (std::size_t i : order)
    if (annotated.size() < cfg.annotated_words && !planted_set.count(i)) annotated.push_back(i);
  annotated.resize(std::min(annotated.size(), cfg.annotated_words));
  std::sort(annotated.begin(), annotated.end());

  for (std::size_t wi : annotated) {
    const std::string& lemma = data.content_words[wi];
    std::vector<Usage> word_usages;
    std::vector<std::size_t> usage_topic;
    for (const Corpus* c : {&data.c1, &data.c2}) {
      const auto& topics = c == &data.c1 ? data.topics_c1 : data.topics_c2;
      SampleResult sample;
      try {
        sample = sample_usages(*c, lemma, cfg.usages_per_period, cfg.seed + wi);
      } catch (const NotFoundError&) {
        continue;
      }
      for (auto& u : sample.usages) {
        usage_topic.push_back(topics[std::stoul(u.sentence_id) - 1]);
        word_usages.push_back(std::move(u));
      }
    }
    const std::size_t n = word_usages.size();
    if (n < 2) continue;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({a, b});
    std::shuffle(pairs.begin(), pairs.end(), rng.engine);
    pairs.resize(std::min(pairs.size(), cfg.pairs_per_word));
    for (const auto& [a, b] : pairs) {
      const int truth = usage_topic[a] == usage_topic[b] ? 4 : 1;
      for (std::size_t k = 0; k < cfg.annotators; ++k) {
        int v = truth;
        const double u = rng.uniform();
        if (u < 0.02)
          v = 0;
        else if (u < 0.02 + cfg.annotation_noise)
          v = truth == 4 ? 3 : 2;
        Judgment j;
        j.usage1 = word_usages[a].identifier;
        j.usage2 = word_usages[b].identifier;
        j.annotator = "annotator" + std::to_string(k + 1);
        j.value = v;
        j.lemma = lemma;
        data.judgments.push_back(std::move(j));
      }
    }
    for (auto& u : word_usages) data.usages.push_back(std::move(u));
  }
  return data;
}

void write_synthetic(const SynthData& data, const SynthConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "annotation");
  for (const auto& [corpus, name] : {std::pair{&data.c1, "c1"}, std::pair{&data.c2, "c2"}}) {
    for (Layer l : {Layer::raw, Layer::token, Layer::lemma, Layer::pos})
      write_layer(*corpus, l, dir / (std::string(name) + "." + to_string(l) + ".txt"), cfg.seed);
    write_layer(*corpus, Layer::conllu, dir / (std::string(name) + ".conllu"), cfg.seed);
  }
  {
    TsvWriter w(dir / "manifest.tsv", cfg.seed, {"lemma", "planted", "old_topic", "new_topic"},
                {{"vocab_size", std::to_string(cfg.vocab_size)}, {"planted_changes", std::to_string(cfg.planted_changes)}});
    std::set<std::string> planted;
    for (const auto& p : data.planted) {
      planted.insert(p.lemma);
      w.row({p.lemma, "1", std::to_string(p.old_topic), std::to_string(p.new_topic)});
    }
    std::set<std::string> annotated;
    for (const auto& u : data.usages) annotated.insert(u.lemma);
    for (const auto& l : annotated)
      if (!planted.count(l)) w.row({l, "0", "", ""});
  }
  write_usages(data.usages, dir / "annotation" / "uses.tsv", cfg.seed);
  write_judgments(data.judgments, dir / "annotation" / "judgments.tsv", cfg.seed);
}

}  // namespace lsc
