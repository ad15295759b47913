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

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lsc/embedding.hpp"
#include "lsc/error.hpp"

namespace lsc {

struct ProcrustesOptions {
  bool normalize = true;  // unit-length rows before solving
  bool center = true;     // column mean-centering on the shared vocabulary
};

// Rows of `m` scaled to unit length (zero rows left as is), then optionally
// column-centered.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> preprocess_rows(
    const Eigen::MatrixBase<Derived>& m, const ProcrustesOptions& opts) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = m;
  if (opts.normalize) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const Scalar norm = out.row(i).norm();
      if (norm > Scalar(0)) out.row(i) /= norm;
    }
  }
  if (opts.center) out.rowwise() -= out.colwise().mean();
  return out;
}

// Orthogonal Q minimizing ||S Q - T||_F: Q = U V^T for S^T T = U Sigma V^T.
template <typename DerivedS, typename DerivedT>
Eigen::Matrix<typename DerivedS::Scalar, Eigen::Dynamic, Eigen::Dynamic> procrustes_rotation(
    const Eigen::MatrixBase<DerivedS>& source, const Eigen::MatrixBase<DerivedT>& target) {
  using Scalar = typename DerivedS::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (source.cols() != target.cols() || source.rows() != target.rows())
    throw PreconditionError("procrustes: shape mismatch");
  const Mat cross = source.transpose() * target;
  Eigen::JacobiSVD<Mat> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

template <typename Scalar>
struct Alignment {
  BasicEmbeddingMatrix<Scalar> aligned;  // full source vocabulary, rotated
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rotation;
  std::vector<std::string> shared;
};

// Solves the rotation on the shared vocabulary (after preprocessing) and
// applies it to every source row.
template <typename Scalar>
Alignment<Scalar> orthogonal_procrustes(const BasicEmbeddingMatrix<Scalar>& source,
                                        const BasicEmbeddingMatrix<Scalar>& target,
                                        const ProcrustesOptions& opts = {}) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (source.dim() != target.dim()) throw PreconditionError("procrustes: embedding dimensions differ");
  Alignment<Scalar> out;
  std::vector<Eigen::Index> rows_s, rows_t;
  for (std::size_t i = 0; i < source.vocab.size(); ++i) {
    if (auto j = target.row_of(source.vocab[i])) {
      out.shared.push_back(source.vocab[i]);
      rows_s.push_back(static_cast<Eigen::Index>(i));
      rows_t.push_back(*j);
    }
  }
  if (out.shared.empty()) throw PreconditionError("procrustes: no shared vocabulary");
  const Mat s = source.vectors(rows_s, Eigen::all);
  const Mat t = target.vectors(rows_t, Eigen::all);
  out.rotation = procrustes_rotation(preprocess_rows(s, opts), preprocess_rows(t, opts));
  out.aligned = BasicEmbeddingMatrix<Scalar>(source.vocab, source.vectors * out.rotation);
  return out;
}

}  // namespace lsc
