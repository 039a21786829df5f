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

#include "sticktionary/embedding.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "sticktionary/hash.h"
#include "sticktionary/status.h"

namespace sticktionary {

Eigen::VectorXd EmbeddingProvider::Pooled(const TokenSequence& seq) const {
  if (seq.empty()) return Eigen::VectorXd::Zero(dimension());
  Eigen::VectorXd mean = Embed(seq).colwise().mean().transpose();
  const double norm = mean.norm();
  if (norm > 0) mean /= norm;
  return mean;
}

HashEmbeddingProvider::HashEmbeddingProvider(uint64_t seed, Eigen::Index dim)
    : seed_(seed), dim_(dim) {
  if (dim <= 0) throw InvalidArgumentError("embedding dimension must be > 0");
}

Eigen::VectorXd HashEmbeddingProvider::TokenVector(const std::string& token) const {
  StableRng rng(MixSeed(seed_, Fnv1a64(token)));
  Eigen::VectorXd v(dim_);
  // Box-Muller; pairs of normals.
  for (Eigen::Index i = 0; i < dim_; i += 2) {
    const double u1 = 1.0 - rng.Uniform();
    const double u2 = rng.Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    v[i] = radius * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < dim_) v[i + 1] = radius * std::sin(2.0 * std::numbers::pi * u2);
  }
  return v.normalized();
}

Eigen::MatrixXd HashEmbeddingProvider::Embed(const TokenSequence& seq) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(seq.size()), dim_);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    out.row(r) = TokenVector(seq.tokens[r]).transpose();
  }
  return out;
}

void TableEmbeddingProvider::Add(const std::string& token,
                                 const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != dim_) {
    throw InvalidArgumentError("vector for '" + token + "' has dimension " +
                               std::to_string(v.size()) + ", expected " +
                               std::to_string(dim_));
  }
  const double norm = v.norm();
  if (norm == 0) throw InvalidArgumentError("zero vector for '" + token + "'");
  table_[token] = v / norm;
}

Eigen::MatrixXd TableEmbeddingProvider::Embed(const TokenSequence& seq) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(seq.size()), dim_);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const auto it = table_.find(seq.tokens[r]);
    if (it == table_.end()) {
      throw NotFoundError("no embedding for token '" + seq.tokens[r] + "'");
    }
    out.row(r) = it->second.transpose();
  }
  return out;
}

TableEmbeddingProvider TableEmbeddingProvider::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding table " + path);
  std::string line;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    double x;
    while (fields >> x) values.push_back(x);
    if (line_no == 1 && values.size() == 1) continue;  // word2vec header
    if (values.empty()) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": token without vector");
    }
    rows.emplace_back(std::move(token), std::move(values));
  }
  if (rows.empty()) throw ValidationError(path + ": no vectors");
  TableEmbeddingProvider provider(static_cast<Eigen::Index>(rows[0].second.size()));
  for (const auto& [token, values] : rows) {
    provider.Add(token, Eigen::Map<const Eigen::VectorXd>(
                            values.data(), static_cast<Eigen::Index>(values.size())));
  }
  return provider;
}

PrecomputedEmbeddingProvider PrecomputedEmbeddingProvider::FromFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path);
  PrecomputedEmbeddingProvider provider;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      const auto& tokens = j.at("tokens");
      const auto& pooled = j.at("pooled");
      const auto dim = static_cast<Eigen::Index>(pooled.size());
      if (provider.dim_ == 0) provider.dim_ = dim;
      if (dim != provider.dim_ || dim == 0) {
        throw ValidationError(where + ": inconsistent dimension");
      }
      Entry entry;
      entry.tokens.resize(static_cast<Eigen::Index>(tokens.size()), dim);
      for (Eigen::Index r = 0; r < entry.tokens.rows(); ++r) {
        const auto& row = tokens[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != dim) {
          throw ValidationError(where + ": inconsistent dimension");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
          entry.tokens(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
      }
      NormalizeRows(entry.tokens);
      entry.pooled.resize(dim);
      for (Eigen::Index c = 0; c < dim; ++c) {
        entry.pooled[c] = pooled[static_cast<std::size_t>(c)].get<double>();
      }
      if (entry.pooled.norm() > 0) entry.pooled.normalize();
      provider.entries_[NormalizeNfc(j.at("text").get<std::string>())] =
          std::move(entry);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return provider;
}

const PrecomputedEmbeddingProvider::Entry& PrecomputedEmbeddingProvider::Lookup(
    const TokenSequence& seq) const {
  const auto it = entries_.find(Join(seq));
  if (it == entries_.end()) {
    throw NotFoundError("no precomputed embedding for '" + Join(seq) + "'");
  }
  return it->second;
}

Eigen::MatrixXd PrecomputedEmbeddingProvider::Embed(const TokenSequence& seq) const {
  return Lookup(seq).tokens;
}

Eigen::VectorXd PrecomputedEmbeddingProvider::Pooled(const TokenSequence& seq) const {
  return Lookup(seq).pooled;
}

}  // namespace sticktionary
