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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lsc {

enum class Period { C1, C2 };

std::string to_string(Period p);
// Accepts "1", "2", "C1", "C2" (case-insensitive).
Period parse_period(std::string_view s);

enum class Layer { raw, token, lemma, pos, conllu };

std::string to_string(Layer l);
Layer parse_layer(std::string_view s);

using FeatureMap = std::map<std::string, std::string>;

struct Token {
  std::string surface;
  std::string lemma;
  std::string pos;  // UPOS
  FeatureMap morph;
  std::string deprel;
  int head = -1;
};

struct SentenceRecord {
  std::string sentence_id;
  std::vector<Token> tokens;
  std::string raw_text;
};

class Corpus {
 public:
  explicit Corpus(Period period) : period_(period) {}

  Period period() const { return period_; }
  const std::vector<SentenceRecord>& sentences() const { return sentences_; }
  const std::set<Layer>& layers() const { return layers_; }
  bool has(Layer l) const { return layers_.count(l) > 0; }
  std::size_t token_count() const;

  // Builders used by loaders and the synthetic generator.
  void add_sentence(SentenceRecord s) { sentences_.push_back(std::move(s)); }
  void mark_layer(Layer l) { layers_.insert(l); }

  // Merges another layer of the same corpus, aligned by sentence position.
  // Throws IntegrityError on sentence or token count mismatch.
  void merge(const Corpus& other);

 private:
  Period period_;
  std::vector<SentenceRecord> sentences_;
  std::set<Layer> layers_;
};

// Line-per-sentence layers (raw, token, lemma, pos) are whitespace-tokenized
// with one sentence per line; lines starting with "# " are comments. The
// conllu layer is standard 10-column CoNLL-U and fills token, lemma, pos and
// morph-syntax at once.
Corpus load_corpus(const std::filesystem::path& path, Layer layer, Period period);

// Loads several layers of one corpus and merges them.
Corpus load_corpus(const std::map<Layer, std::filesystem::path>& sources, Period period);

void write_layer(const Corpus& corpus, Layer layer, const std::filesystem::path& path, std::uint64_t seed);

using PosSet = std::set<std::string>;

const PosSet& content_pos();

struct VocabStats {
  Period period = Period::C1;
  std::map<std::string, std::int64_t> lemma_freq;  // keys are normalized lemmas
  std::int64_t total_tokens = 0;  // non-punctuation tokens
};

VocabStats frequency_counts(const Corpus& corpus, const std::optional<PosSet>& pos_filter = std::nullopt);

void write_vocab_stats(const VocabStats& stats, const std::filesystem::path& path, std::uint64_t seed);
VocabStats read_vocab_stats(const std::filesystem::path& path);

std::vector<std::string> select_targets(const VocabStats& stats1, const VocabStats& stats2, std::int64_t min1,
                                        std::int64_t min2);

// The second threshold scaled to corpus size: round(min1 * total2 / total1).
std::int64_t proportional_threshold(std::int64_t min1, std::int64_t total1, std::int64_t total2);

// Character offsets are Unicode code points, end exclusive.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct Usage {
  std::string lemma;
  std::string pos;
  Period period = Period::C1;
  std::string identifier;
  std::string sentence_id;
  std::string context;
  Span target;
};

struct SampleResult {
  std::vector<Usage> usages;
  std::size_t available = 0;
  bool undersampled = false;
};

SampleResult sample_usages(const Corpus& corpus, const std::string& lemma, std::size_t count, std::uint64_t seed);

// Normalized surface form -> normalized lemmas it was tagged with.
using SurfaceLexicon = std::map<std::string, std::set<std::string>>;
SurfaceLexicon build_surface_lexicon(const Corpus& corpus);

struct ValidationResult {
  enum class Status { ok, corrected_span, mismatch };
  Status status = Status::mismatch;
  Span span;         // the valid span (original or corrected)
  std::string text;  // context text under span
  std::string reason;
};

// Checks that usage.target covers a surface form of usage.lemma. When a
// lexicon is given it decides lemma membership; otherwise a shared-prefix
// heuristic on normalized forms is used.
ValidationResult validate_target_index(const Usage& usage, const SurfaceLexicon* lexicon = nullptr);

std::string format_span(const Span& s);
Span parse_span(std::string_view s);

inline const std::vector<std::string> kUsageColumns = {"lemma", "pos", "grouping", "identifier", "context",
                                                       "indexes_target_token"};

void write_usages(const std::vector<Usage>& usages, const std::filesystem::path& path, std::uint64_t seed);
// Header-driven: extra columns (e.g. date, description) are ignored.
std::vector<Usage> read_usages(const std::filesystem::path& path);

}  // namespace lsc
