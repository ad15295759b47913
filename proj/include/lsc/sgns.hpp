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
#include <string>
#include <unordered_map>
#include <vector>

#include "lsc/corpus.hpp"
#include "lsc/embedding.hpp"

namespace lsc {

struct SgnsParams {
  int dim = 100;
  int window = 10;
  int epochs = 5;
  int negatives = 5;
  double subsample = 1e-3;
  double alpha = 0.025;  // linearly decayed to min_alpha over training
  double min_alpha = 0.0001;
  int min_count = 1;
  int workers = 1;  // >1: lock-free asynchronous updates, not reproducible
};

// One (center, context) pair with fixed negatives, used to monitor the
// negative-sampling objective across epochs.
struct SgnsProbe {
  int center = 0;
  int context = 0;
  std::vector<int> negatives;
};

// Skip-gram with negative sampling over sentences of (normalized) lemmas.
class SgnsTrainer {
 public:
  SgnsTrainer(std::vector<std::vector<std::string>> sentences, const SgnsParams& params, std::uint64_t seed);

  void train_epoch();
  void train() {
    while (epochs_done_ < params_.epochs) train_epoch();
  }

  int epochs_done() const { return epochs_done_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  EmbeddingMatrix embeddings() const;

  std::vector<SgnsProbe> make_probe(std::size_t count, std::uint64_t seed) const;
  // Mean of -log s(u_o . v_c) - sum log s(-u_n . v_c) over the probe.
  double objective(const std::vector<SgnsProbe>& probe) const;

 private:
  void train_range(std::size_t begin, std::size_t end, std::uint64_t seed, std::int64_t words_before);
  std::int64_t draw_negative(std::uint64_t& state) const;

  SgnsParams params_;
  std::vector<std::string> vocab_;
  std::vector<std::int64_t> counts_;
  std::vector<std::vector<int>> sentences_;
  std::int64_t train_words_ = 0;
  std::vector<int> unigram_table_;
  EmbeddingMatrix::Matrix in_;   // word vectors
  EmbeddingMatrix::Matrix out_;  // context (negative-sampling) vectors
  std::uint64_t seed_;
  int epochs_done_ = 0;
};

// Sentences of normalized lemmas from the lemma layer.
std::vector<std::vector<std::string>> lemma_sentences(const Corpus& corpus);

EmbeddingMatrix train_sgns(const Corpus& corpus, const SgnsParams& params, std::uint64_t seed);

}  // namespace lsc
