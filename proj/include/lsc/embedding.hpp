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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lsc/error.hpp"

namespace lsc {

// Word vectors, one row per vocabulary entry.
template <typename Scalar>
struct BasicEmbeddingMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::vector<std::string> vocab;
  Matrix vectors;

  BasicEmbeddingMatrix() = default;
  BasicEmbeddingMatrix(std::vector<std::string> words, Matrix m) : vocab(std::move(words)), vectors(std::move(m)) {
    if (static_cast<Eigen::Index>(vocab.size()) != vectors.rows())
      throw PreconditionError("embedding: vocabulary size does not match row count");
    if (!vectors.allFinite()) throw PreconditionError("embedding: non-finite entries");
    reindex();
  }

  Eigen::Index dim() const { return vectors.cols(); }
  std::size_t size() const { return vocab.size(); }

  std::optional<Eigen::Index> row_of(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < vocab.size(); ++i) index_.emplace(vocab[i], static_cast<Eigen::Index>(i));
  }

  template <typename Other>
  BasicEmbeddingMatrix<Other> cast() const {
    return BasicEmbeddingMatrix<Other>(vocab, vectors.template cast<Other>());
  }

 private:
  std::unordered_map<std::string, Eigen::Index> index_;
};

using EmbeddingMatrix = BasicEmbeddingMatrix<float>;
using EmbeddingMatrixd = BasicEmbeddingMatrix<double>;

// Binary layout (little-endian): magic "LSCEMB01", uint64 rows, uint64 dim,
// then rows*dim float32 values row-major. The vocabulary is written to the
// sidecar file <path>.vocab, one word per line in row order.
void save_embeddings(const EmbeddingMatrix& e, const std::filesystem::path& path);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

}  // namespace lsc
