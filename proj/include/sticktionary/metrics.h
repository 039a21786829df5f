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

// Similarity metrics between short queries and the interannotator report
// built on them.

#ifndef STICKTIONARY_METRICS_H_
#define STICKTIONARY_METRICS_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sticktionary/embedding.h"
#include "sticktionary/records.h"
#include "sticktionary/text.h"

namespace sticktionary {

// Substituted for zero modified n-gram precisions.
inline constexpr double kBleuEpsilon = 1e-9;

// Sentence BLEU: geometric mean of clipped n-gram precisions times the
// brevity penalty. Orders beyond the candidate length are dropped
// (effective order), zero precisions are replaced by kBleuEpsilon.
// Empty candidate scores 0; an empty reference list throws InvalidArgument.
double Bleu(const TokenSequence& candidate,
            std::span<const TokenSequence> references, std::size_t max_n = 4);

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

// F1 of the chosen ROUGE variant. 0 when either side is empty or has no
// n-grams of the requested order.
double Rouge(const TokenSequence& candidate, const TokenSequence& reference,
             RougeVariant variant);

std::size_t LongestCommonSubsequence(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b);

// Cosine of the pooled vectors. Throws InvalidArgument on empty input.
double CosineSim(const TokenSequence& a, const TokenSequence& b,
                 const EmbeddingProvider& provider);

struct BertScoreResult {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

inline double HarmonicMean(double p, double r) {
  return (p <= 0 || r <= 0) ? 0.0 : 2 * p * r / (p + r);
}

// Greedy matching over a candidate x reference cosine matrix: precision is
// the mean row maximum, recall the mean column maximum.
template <typename Derived>
BertScoreResult GreedyMatch(const Eigen::MatrixBase<Derived>& similarity) {
  BertScoreResult out;
  if (similarity.rows() == 0 || similarity.cols() == 0) return out;
  out.precision = similarity.rowwise().maxCoeff().mean();
  out.recall = similarity.colwise().maxCoeff().mean();
  out.f1 = HarmonicMean(out.precision, out.recall);
  return out;
}

// BERTScore-style greedy matching without IDF weighting or rescaling.
// Throws InvalidArgument on empty input.
BertScoreResult BertScore(const TokenSequence& candidate,
                          const TokenSequence& reference,
                          const EmbeddingProvider& provider);

struct MetricReport {
  double bleu = 0;
  double rouge1 = 0;
  double rouge2 = 0;
  double rougeL = 0;
  double cosine = 0;
  double bert_p = 0;
  double bert_r = 0;
  double bert_f1 = 0;

  std::size_t stickers = 0;  // records that contributed
  std::size_t pairs = 0;     // annotator pairs evaluated
  std::size_t skipped = 0;   // records with fewer than two annotators
  std::vector<std::string> warnings;
};

// Scores one candidate/reference pair on every metric.
MetricReport PairReport(const TokenSequence& candidate,
                        const TokenSequence& reference,
                        const EmbeddingProvider& provider);

// For each record, every unordered pair of distinct annotators is scored on
// their space-joined query strings (earlier annotator as candidate). Pair
// scores are averaged per sticker, then macro-averaged across stickers.
// bert_f1 is the harmonic mean of the averaged precision and recall.
// Each annotator's queries joined in record order, one sequence per
// annotator in order of first appearance.
std::vector<TokenSequence> AnnotatorTexts(const QueryRecord& record,
                                          const Segmenter* zh_segmenter = nullptr);

MetricReport InterannotatorReport(std::span<const QueryRecord> records,
                                  const EmbeddingProvider& provider,
                                  const Segmenter* zh_segmenter = nullptr);

void WriteReportCsvHeader(std::ostream& out);
void WriteReportCsvRow(std::ostream& out, const std::string& label,
                       const MetricReport& report);
// One JSON object on one line.
void WriteReportJsonLine(std::ostream& out, const std::string& label,
                         const MetricReport& report);

}  // namespace sticktionary

#endif  // STICKTIONARY_METRICS_H_
