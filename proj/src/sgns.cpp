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

#include "lsc/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <thread>

#include "lsc/error.hpp"
#include "lsc/text.hpp"

namespace lsc {

namespace {

constexpr std::size_t kUnigramTableSize = 1'000'000;

// word2vec's linear congruential generator; portable and cheap.
inline std::uint64_t next_random(std::uint64_t& state) {
  state = state * 25214903917ULL + 11ULL;
  return state;
}

inline float uniform01(std::uint64_t& state) {
  return static_cast<float>((next_random(state) >> 16) & 0xFFFF) / 65536.0f;
}

inline float sigmoid(float x) {
  if (x > 30.0f) return 1.0f;
  if (x < -30.0f) return 0.0f;
  return 1.0f / (1.0f + std::exp(-x));
}

inline double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

}  // namespace

SgnsTrainer::SgnsTrainer(std::vector<std::vector<std::string>> sentences, const SgnsParams& params,
                         std::uint64_t seed)
    : params_(params), seed_(seed) {
  if (params_.dim < 1 || params_.window < 1 || params_.negatives < 0 || params_.epochs < 0)
    throw PreconditionError("invalid SGNS hyperparameters");
  std::map<std::string, std::int64_t> freq;
  for (const auto& s : sentences)
    for (const auto& w : s) ++freq[w];
  std::vector<std::pair<std::string, std::int64_t>> entries;
  for (auto& [w, c] : freq)
    if (c >= params_.min_count) entries.emplace_back(w, c);
  if (entries.empty()) throw PreconditionError("SGNS: empty vocabulary");
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::unordered_map<std::string, int> index;
  for (const auto& [w, c] : entries) {
    index.emplace(w, static_cast<int>(vocab_.size()));
    vocab_.push_back(w);
    counts_.push_back(c);
  }
  for (const auto& s : sentences) {
    std::vector<int> ids;
    ids.reserve(s.size());
    for (const auto& w : s)
      if (auto it = index.find(w); it != index.end()) ids.push_back(it->second);
    train_words_ += static_cast<std::int64_t>(ids.size());
    if (!ids.empty()) sentences_.push_back(std::move(ids));
  }

  // Negative sampling table over unigram^0.75.
  double norm = 0.0;
  for (auto c : counts_) norm += std::pow(static_cast<double>(c), 0.75);
  unigram_table_.resize(kUnigramTableSize);
  std::size_t w = 0;
  double cum = std::pow(static_cast<double>(counts_[0]), 0.75) / norm;
  for (std::size_t a = 0; a < kUnigramTableSize; ++a) {
    unigram_table_[a] = static_cast<int>(w);
    if (static_cast<double>(a) / kUnigramTableSize > cum && w + 1 < counts_.size()) {
      ++w;
      cum += std::pow(static_cast<double>(counts_[w]), 0.75) / norm;
    }
  }

  const auto v = static_cast<Eigen::Index>(vocab_.size());
  in_.resize(v, params_.dim);
  out_ = EmbeddingMatrix::Matrix::Zero(v, params_.dim);
  std::uint64_t state = seed_ ^ 0x5DEECE66DULL;
  for (Eigen::Index i = 0; i < v; ++i)
    for (Eigen::Index j = 0; j < params_.dim; ++j) in_(i, j) = (uniform01(state) - 0.5f) / static_cast<float>(params_.dim);
}

std::int64_t SgnsTrainer::draw_negative(std::uint64_t& state) const {
  return unigram_table_[(next_random(state) >> 16) % kUnigramTableSize];
}

void SgnsTrainer::train_range(std::size_t begin, std::size_t end, std::uint64_t seed, std::int64_t words_before) {
  const int dim = params_.dim;
  const double total = static_cast<double>(train_words_) * std::max(1, params_.epochs);
  const double sample_t = params_.subsample * static_cast<double>(train_words_);
  std::uint64_t state = seed;
  std::vector<float> grad(static_cast<std::size_t>(dim));
  std::vector<int> kept;
  std::int64_t processed = words_before;
  for (std::size_t si = begin; si < end; ++si) {
    const auto& sent = sentences_[si];
    const float alpha = static_cast<float>(
        std::max(params_.min_alpha, params_.alpha - (params_.alpha - params_.min_alpha) * processed / total));
    processed += static_cast<std::int64_t>(sent.size());
    kept.clear();
    for (int w : sent) {
      if (params_.subsample > 0) {
        const double f = static_cast<double>(counts_[w]);
        const double keep = (std::sqrt(f / sample_t) + 1.0) * sample_t / f;
        if (keep < uniform01(state)) continue;
      }
      kept.push_back(w);
    }
    const int n = static_cast<int>(kept.size());
    for (int pos = 0; pos < n; ++pos) {
      const int center = kept[pos];
      const int b = static_cast<int>(next_random(state) % static_cast<std::uint64_t>(params_.window));
      const int reach = params_.window - b;
      for (int c = std::max(0, pos - reach); c <= std::min(n - 1, pos + reach); ++c) {
        if (c == pos) continue;
        float* l1 = in_.row(kept[c]).data();
        std::fill(grad.begin(), grad.end(), 0.0f);
        for (int d = 0; d <= params_.negatives; ++d) {
          int target;
          float label;
          if (d == 0) {
            target = center;
            label = 1.0f;
          } else {
            target = static_cast<int>(draw_negative(state));
            if (target == center) continue;
            label = 0.0f;
          }
          float* l2 = out_.row(target).data();
          float dot = 0.0f;
          for (int k = 0; k < dim; ++k) dot += l1[k] * l2[k];
          const float g = (label - sigmoid(dot)) * alpha;
          for (int k = 0; k < dim; ++k) grad[k] += g * l2[k];
          for (int k = 0; k < dim; ++k) l2[k] += g * l1[k];
        }
        for (int k = 0; k < dim; ++k) l1[k] += grad[k];
      }
    }
  }
}

void SgnsTrainer::train_epoch() {
  const std::int64_t before = train_words_ * epochs_done_;
  const std::uint64_t epoch_seed = seed_ * 1000003ULL + static_cast<std::uint64_t>(epochs_done_) * 7919ULL + 1ULL;
  const int workers = std::max(1, params_.workers);
  if (workers == 1) {
    train_range(0, sentences_.size(), epoch_seed, before);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (sentences_.size() + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      const std::size_t b = std::min(sentences_.size(), chunk * t);
      const std::size_t e = std::min(sentences_.size(), b + chunk);
      // Learning rate progress is approximated per worker.
      threads.emplace_back([this, b, e, epoch_seed, before, t] { train_range(b, e, epoch_seed + t, before); });
    }
    for (auto& th : threads) th.join();
  }
  ++epochs_done_;
}

EmbeddingMatrix SgnsTrainer::embeddings() const { return EmbeddingMatrix(vocab_, in_); }

std::vector<SgnsProbe> SgnsTrainer::make_probe(std::size_t count, std::uint64_t seed) const {
  std::vector<SgnsProbe> probe;
  std::uint64_t state = seed + 12345;
  if (sentences_.empty()) return probe;
  std::size_t guard = 0;
  while (probe.size() < count && guard++ < count * 100) {
    const auto& s = sentences_[next_random(state) % sentences_.size()];
    if (s.size() < 2) continue;
    const std::size_t pos = next_random(state) % s.size();
    std::size_t off = 1 + next_random(state) % static_cast<std::uint64_t>(params_.window);
    std::size_t ctx = (next_random(state) & 1) ? pos + off : (pos >= off ? pos - off : pos + off);
    if (ctx >= s.size() || ctx == pos) continue;
    SgnsProbe p;
    p.center = s[pos];
    p.context = s[ctx];
    for (int k = 0; k < params_.negatives; ++k) p.negatives.push_back(static_cast<int>(draw_negative(state)));
    probe.push_back(std::move(p));
  }
  return probe;
}

double SgnsTrainer::objective(const std::vector<SgnsProbe>& probe) const {
  if (probe.empty()) return 0.0;
  double loss = 0.0;
  for (const auto& p : probe) {
    const auto v = in_.row(p.context).cast<double>();
    loss -= log_sigmoid(v.dot(out_.row(p.center).cast<double>()));
    for (int n : p.negatives) loss -= log_sigmoid(-v.dot(out_.row(n).cast<double>()));
  }
  return loss / static_cast<double>(probe.size());
}

std::vector<std::vector<std::string>> lemma_sentences(const Corpus& corpus) {
  if (!corpus.has(Layer::lemma)) throw PreconditionError("SGNS training requires the lemma layer");
  std::unordered_map<std::string, std::string> cache;
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.sentences().size());
  for (const auto& s : corpus.sentences()) {
    std::vector<std::string> words;
    words.reserve(s.tokens.size());
    for (const auto& t : s.tokens) {
      auto it = cache.find(t.lemma);
      if (it == cache.end()) it = cache.emplace(t.lemma, normalize_lemma(t.lemma)).first;
      words.push_back(it->second);
    }
    out.push_back(std::move(words));
  }
  return out;
}

EmbeddingMatrix train_sgns(const Corpus& corpus, const SgnsParams& params, std::uint64_t seed) {
  if (corpus.token_count() == 0) throw PreconditionError("SGNS: empty corpus");
  SgnsTrainer trainer(lemma_sentences(corpus), params, seed);
  trainer.train();
  return trainer.embeddings();
}

void save_embeddings(const EmbeddingMatrix& e, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write("LSCEMB01", 8);
  auto put_u64 = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put_u64(static_cast<std::uint64_t>(e.vectors.rows()));
  put_u64(static_cast<std::uint64_t>(e.vectors.cols()));
  for (Eigen::Index i = 0; i < e.vectors.rows(); ++i)
    for (Eigen::Index j = 0; j < e.vectors.cols(); ++j) {
      std::uint32_t bits;
      const float f = e.vectors(i, j);
      std::memcpy(&bits, &f, 4);
      unsigned char b[4];
      for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
      out.write(reinterpret_cast<const char*>(b), 4);
    }
  std::ofstream vocab(path.string() + ".vocab", std::ios::binary);
  for (const auto& w : e.vocab) vocab << w << '\n';
  if (!out || !vocab) throw Error("write failed: " + path.string());
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "LSCEMB01", 8) != 0) throw FormatError(path.string() + ": bad embedding magic");
  auto get_u64 = [&] {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  };
  const auto rows = get_u64();
  const auto dim = get_u64();
  EmbeddingMatrix::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      unsigned char b[4];
      in.read(reinterpret_cast<char*>(b), 4);
      std::uint32_t bits = 0;
      for (int k = 0; k < 4; ++k) bits |= static_cast<std::uint32_t>(b[k]) << (8 * k);
      float f;
      std::memcpy(&f, &bits, 4);
      m(i, j) = f;
    }
  if (!in) throw FormatError(path.string() + ": truncated embedding file");
  std::ifstream vin(path.string() + ".vocab", std::ios::binary);
  if (!vin) throw NotFoundError("missing vocabulary sidecar " + path.string() + ".vocab");
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(vin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.push_back(line);
  }
  return EmbeddingMatrix(std::move(vocab), std::move(m));
}

}  // namespace lsc
