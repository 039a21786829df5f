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

#include "sticktionary/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "json.hpp"
#include "sticktionary/status.h"

namespace sticktionary {

double Bleu(const TokenSequence& candidate,
            std::span<const TokenSequence> references, std::size_t max_n) {
  if (references.empty()) {
    throw InvalidArgumentError("BLEU needs at least one reference");
  }
  if (max_n == 0) throw InvalidArgumentError("BLEU max_n must be >= 1");
  if (candidate.empty()) return 0.0;

  const std::size_t order = std::min(max_n, candidate.size());
  double log_sum = 0;
  for (std::size_t n = 1; n <= order; ++n) {
    const NGramCounts cand = NGrams(candidate, n);
    NGramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : NGrams(ref, n)) {
        int& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    int matched = 0;
    int total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (const auto it = max_ref.find(gram); it != max_ref.end()) {
        matched += std::min(count, it->second);
      }
    }
    const double precision =
        matched == 0 ? kBleuEpsilon : static_cast<double>(matched) / total;
    log_sum += std::log(precision);
  }

  const auto c = static_cast<double>(candidate.size());
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& ref : references) {
    const auto r = static_cast<double>(ref.size());
    if (std::abs(r - c) < std::abs(closest - c) ||
        (std::abs(r - c) == std::abs(closest - c) && r < closest)) {
      closest = r;
    }
  }
  const double brevity = c > closest ? 1.0 : std::exp(1.0 - closest / c);
  return brevity * std::exp(log_sum / static_cast<double>(order));
}

std::size_t LongestCommonSubsequence(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

double F1(double overlap, double candidate_total, double reference_total) {
  if (overlap <= 0 || candidate_total <= 0 || reference_total <= 0) return 0.0;
  return HarmonicMean(overlap / candidate_total, overlap / reference_total);
}

double RougeN(const TokenSequence& candidate, const TokenSequence& reference,
              std::size_t n) {
  const NGramCounts cand = NGrams(candidate, n);
  const NGramCounts ref = NGrams(reference, n);
  int overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (const auto it = ref.find(gram); it != ref.end()) {
      overlap += std::min(count, it->second);
    }
  }
  const auto total = [](const NGramCounts& counts) {
    int sum = 0;
    for (const auto& [gram, count] : counts) sum += count;
    return sum;
  };
  return F1(overlap, total(cand), total(ref));
}

void RequireNonEmpty(const TokenSequence& a, const TokenSequence& b,
                     const char* metric) {
  if (a.empty() || b.empty()) {
    throw InvalidArgumentError(std::string(metric) + " needs non-empty sequences");
  }
}

}  // namespace

double Rouge(const TokenSequence& candidate, const TokenSequence& reference,
             RougeVariant variant) {
  if (candidate.empty() || reference.empty()) return 0.0;
  switch (variant) {
    case RougeVariant::kRouge1:
      return RougeN(candidate, reference, 1);
    case RougeVariant::kRouge2:
      return RougeN(candidate, reference, 2);
    case RougeVariant::kRougeL:
      return F1(static_cast<double>(
                    LongestCommonSubsequence(candidate.tokens, reference.tokens)),
                static_cast<double>(candidate.size()),
                static_cast<double>(reference.size()));
  }
  return 0.0;
}

double CosineSim(const TokenSequence& a, const TokenSequence& b,
                 const EmbeddingProvider& provider) {
  RequireNonEmpty(a, b, "cosine similarity");
  const Eigen::VectorXd u = provider.Pooled(a);
  const Eigen::VectorXd v = provider.Pooled(b);
  const double denom = u.norm() * v.norm();
  return denom > 0 ? u.dot(v) / denom : 0.0;
}

BertScoreResult BertScore(const TokenSequence& candidate,
                          const TokenSequence& reference,
                          const EmbeddingProvider& provider) {
  RequireNonEmpty(candidate, reference, "BERTScore");
  const Eigen::MatrixXd c = provider.Embed(candidate);
  const Eigen::MatrixXd r = provider.Embed(reference);
  return GreedyMatch(c * r.transpose());
}

MetricReport PairReport(const TokenSequence& candidate,
                        const TokenSequence& reference,
                        const EmbeddingProvider& provider) {
  MetricReport report;
  report.bleu = Bleu(candidate, std::span<const TokenSequence>(&reference, 1));
  report.rouge1 = Rouge(candidate, reference, RougeVariant::kRouge1);
  report.rouge2 = Rouge(candidate, reference, RougeVariant::kRouge2);
  report.rougeL = Rouge(candidate, reference, RougeVariant::kRougeL);
  report.cosine = CosineSim(candidate, reference, provider);
  const BertScoreResult bert = BertScore(candidate, reference, provider);
  report.bert_p = bert.precision;
  report.bert_r = bert.recall;
  report.bert_f1 = bert.f1;
  report.pairs = 1;
  return report;
}

namespace {

void Accumulate(MetricReport& sum, const MetricReport& x) {
  sum.bleu += x.bleu;
  sum.rouge1 += x.rouge1;
  sum.rouge2 += x.rouge2;
  sum.rougeL += x.rougeL;
  sum.cosine += x.cosine;
  sum.bert_p += x.bert_p;
  sum.bert_r += x.bert_r;
}

void Scale(MetricReport& r, double factor) {
  r.bleu *= factor;
  r.rouge1 *= factor;
  r.rouge2 *= factor;
  r.rougeL *= factor;
  r.cosine *= factor;
  r.bert_p *= factor;
  r.bert_r *= factor;
}

}  // namespace

std::vector<TokenSequence> AnnotatorTexts(const QueryRecord& record,
                                          const Segmenter* zh_segmenter) {
  std::vector<TokenSequence> joined;
  for (const auto& annotator : Annotators(record)) {
    std::string text;
    for (const auto& q : record.queries) {
      if (q.annotator_id != annotator) continue;
      if (!text.empty()) text += ' ';
      text += q.text;
    }
    joined.push_back(Tokenize(text, record.language, zh_segmenter));
  }
  return joined;
}

MetricReport InterannotatorReport(std::span<const QueryRecord> records,
                                  const EmbeddingProvider& provider,
                                  const Segmenter* zh_segmenter) {
  MetricReport total;
  for (const auto& record : records) {
    const std::vector<std::string> annotators = Annotators(record);
    if (annotators.size() < 2) {
      ++total.skipped;
      total.warnings.push_back("sticker " + record.sticker_id +
                               ": fewer than two annotators, skipped");
      continue;
    }
    const std::vector<TokenSequence> joined = AnnotatorTexts(record, zh_segmenter);

    MetricReport sticker;
    for (std::size_t i = 0; i < joined.size(); ++i) {
      for (std::size_t j = i + 1; j < joined.size(); ++j) {
        if (joined[i].empty() || joined[j].empty()) {
          total.warnings.push_back("sticker " + record.sticker_id +
                                   ": annotator text has no tokens, pair skipped");
          continue;
        }
        Accumulate(sticker, PairReport(joined[i], joined[j], provider));
        ++sticker.pairs;
      }
    }
    if (sticker.pairs == 0) {
      ++total.skipped;
      continue;
    }
    Scale(sticker, 1.0 / static_cast<double>(sticker.pairs));
    Accumulate(total, sticker);
    total.pairs += sticker.pairs;
    ++total.stickers;
  }
  if (total.stickers > 0) Scale(total, 1.0 / static_cast<double>(total.stickers));
  total.bert_f1 = HarmonicMean(total.bert_p, total.bert_r);
  return total;
}

void WriteReportCsvHeader(std::ostream& out) {
  out << "label,bleu,rouge1,rouge2,rougeL,cosine,bert_p,bert_r,bert_f1,"
         "stickers,pairs,skipped\n";
}

void WriteReportCsvRow(std::ostream& out, const std::string& label,
                       const MetricReport& r) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << label << std::fixed << std::setprecision(6) << ',' << r.bleu << ','
      << r.rouge1 << ',' << r.rouge2 << ',' << r.rougeL << ',' << r.cosine << ','
      << r.bert_p << ',' << r.bert_r << ',' << r.bert_f1 << ',' << r.stickers
      << ',' << r.pairs << ',' << r.skipped << '\n';
  out.flags(flags);
  out.precision(precision);
}

void WriteReportJsonLine(std::ostream& out, const std::string& label,
                         const MetricReport& r) {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["bleu"] = r.bleu;
  j["rouge1"] = r.rouge1;
  j["rouge2"] = r.rouge2;
  j["rougeL"] = r.rougeL;
  j["cosine"] = r.cosine;
  j["bert_p"] = r.bert_p;
  j["bert_r"] = r.bert_r;
  j["bert_f1"] = r.bert_f1;
  j["stickers"] = r.stickers;
  j["pairs"] = r.pairs;
  j["skipped"] = r.skipped;
  j["warnings"] = r.warnings;
  out << j.dump() << '\n';
}

}  // namespace sticktionary
