// Copyright 2026 The Sticktionary Authors.
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

// Token embedding providers used by the semantic similarity metrics.

#ifndef STICKTIONARY_EMBEDDING_H_
#define STICKTIONARY_EMBEDDING_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "sticktionary/text.h"

namespace sticktionary {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual Eigen::Index dimension() const = 0;

  // One unit-norm row per token.
  virtual Eigen::MatrixXd Embed(const TokenSequence& seq) const = 0;

  // Sentence vector. Defaults to the normalized mean of the token rows.
  virtual Eigen::VectorXd Pooled(const TokenSequence& seq) const;
};

// Deterministic pseudo-random unit vector per token string, derived from a
// seeded hash. Needs no model files.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(uint64_t seed = 0, Eigen::Index dim = 32);

  Eigen::Index dimension() const override { return dim_; }
  Eigen::MatrixXd Embed(const TokenSequence& seq) const override;

  Eigen::VectorXd TokenVector(const std::string& token) const;

 private:
  uint64_t seed_;
  Eigen::Index dim_;
};

// Fixed token -> vector table. Vectors are normalized on insertion.
// Unknown tokens throw NotFound.
class TableEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit TableEmbeddingProvider(Eigen::Index dim) : dim_(dim) {}

  // Text format: "<token> <v1> ... <vd>" per line, the first line may be a
  // "<count> <dim>" header.
  static TableEmbeddingProvider FromFile(const std::string& path);

  void Add(const std::string& token, const Eigen::Ref<const Eigen::VectorXd>& v);

  Eigen::Index dimension() const override { return dim_; }
  Eigen::MatrixXd Embed(const TokenSequence& seq) const override;

 private:
  Eigen::Index dim_;
  std::unordered_map<std::string, Eigen::VectorXd> table_;
};

// Contextual embeddings computed offline (for example by a BERT encoder) and
// keyed by the space-joined token string. One JSON object per line:
//   {"text": "...", "tokens": [[...], ...], "pooled": [...]}
// Missing texts throw NotFound.
class PrecomputedEmbeddingProvider : public EmbeddingProvider {
 public:
  static PrecomputedEmbeddingProvider FromFile(const std::string& path);

  Eigen::Index dimension() const override { return dim_; }
  Eigen::MatrixXd Embed(const TokenSequence& seq) const override;
  Eigen::VectorXd Pooled(const TokenSequence& seq) const override;

 private:
  struct Entry {
    Eigen::MatrixXd tokens;
    Eigen::VectorXd pooled;
  };
  const Entry& Lookup(const TokenSequence& seq) const;

  Eigen::Index dim_ = 0;
  std::map<std::string, Entry> entries_;
};

// Row-normalizes in place; zero rows are left untouched.
template <typename Derived>
void NormalizeRows(Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto norm = m.row(r).norm();
    if (norm > 0) m.row(r) /= norm;
  }
}

}  // namespace sticktionary

#endif  // STICKTIONARY_EMBEDDING_H_
