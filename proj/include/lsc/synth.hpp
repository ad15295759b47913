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
#include <string>
#include <vector>

#include "lsc/corpus.hpp"
#include "lsc/wug.hpp"

namespace lsc {

// Topic-mixture generator for desk-scale end-to-end runs. Every content word
// belongs to one topic; a sentence draws its content words from a single
// topic. Planted words move most of their C2 occurrences to a second topic.
struct SynthConfig {
  std::size_t vocab_size = 500;  // content + function words
  std::size_t sentences = 6000;  // per corpus
  std::size_t sentence_length = 12;
  std::size_t topics = 10;
  std::size_t planted_changes = 5;
  double shift = 0.8;  // share of a planted word's C2 occurrences in its new topic
  std::uint64_t seed = 1;

  // Simulated annotation.
  std::size_t annotated_words = 12;  // planted words first, then random stable words
  std::size_t usages_per_period = 20;
  std::size_t annotators = 3;
  std::size_t pairs_per_word = 160;
  double annotation_noise = 0.1;
};

struct PlantedChange {
  std::string lemma;
  std::size_t old_topic = 0;
  std::size_t new_topic = 0;
};

struct SynthData {
  Corpus c1{Period::C1};
  Corpus c2{Period::C2};
  std::vector<std::size_t> topics_c1;  // per sentence
  std::vector<std::size_t> topics_c2;
  std::vector<std::string> content_words;
  std::vector<PlantedChange> planted;
  std::vector<Usage> usages;
  std::vector<Judgment> judgments;
};

SynthData generate_synthetic(const SynthConfig& config);

// Writes c{1,2}.{raw,token,lemma,pos}.txt, c{1,2}.conllu, manifest.tsv and
// annotation/{uses,judgments}.tsv under dir.
void write_synthetic(const SynthData& data, const SynthConfig& config, const std::filesystem::path& dir);

}  // namespace lsc
