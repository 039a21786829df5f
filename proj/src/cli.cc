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

#include "sticktionary/cli.h"

#include <pthread.h>
#include <signal.h>

#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sticktionary/curation.h"
#include "sticktionary/dataset.h"
#include "sticktionary/embedding.h"
#include "sticktionary/metrics.h"
#include "sticktionary/retrieval.h"
#include "sticktionary/server.h"
#include "sticktionary/simulate.h"
#include "sticktionary/status.h"

namespace sticktionary {

namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = CollapseWhitespace(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Output goes to `path`, or to `fallback` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw IoError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }
  void Close() {
    if (file_) {
      file_->close();
      if (!*file_) throw IoError("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::unique_ptr<Segmenter> LoadZhSegmenter(const std::string& lexicon) {
  if (lexicon.empty()) return nullptr;
  return std::make_unique<LexiconSegmenter>(LexiconSegmenter::FromFile(lexicon));
}

std::unique_ptr<EmbeddingProvider> LoadProvider(const std::string& descriptor) {
  if (descriptor == "hash") return std::make_unique<HashEmbeddingProvider>();
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  if (kind == "hash" && !arg.empty()) {
    return std::make_unique<HashEmbeddingProvider>(std::stoull(arg));
  }
  if (kind == "table" && !arg.empty()) {
    return std::make_unique<TableEmbeddingProvider>(TableEmbeddingProvider::FromFile(arg));
  }
  if (kind == "precomputed" && !arg.empty()) {
    return std::make_unique<PrecomputedEmbeddingProvider>(
        PrecomputedEmbeddingProvider::FromFile(arg));
  }
  throw InvalidArgumentError("unknown provider '" + descriptor +
                             "' (hash[:seed] | table:PATH | precomputed:PATH)");
}

std::vector<QueryRecord> LoadRecords(const std::string& path, bool release, Language lang) {
  return release ? ImportRelease(path, lang) : ImportJsonl(path);
}

int RunServe(const ServerConfig& config, std::ostream& err) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  GameService service(config);
  HttpServer server(service);
  const int port = server.Bind();
  err << "listening on http://" << config.host << ":" << port << " data="
      << config.data_dir << std::endl;

  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  server.Listen();
  // Wake the watcher if the server stopped on its own.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  err << "shutdown complete" << std::endl;
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sticker query collection, curation and evaluation toolkit", "sticktionary"};
  app.require_subcommand(1);

  // curate
  auto* curate = app.add_subcommand("curate", "Filter conversations into an annotation task pool");
  std::string curate_in, curate_out, prefixes = "/,!", zh_lexicon;
  FilterOptions filter;
  bool no_dedupe = false;
  curate->add_option("--in", curate_in, "Conversation JSONL")->required();
  curate->add_option("--out", curate_out, "Task pool JSONL")->required();
  curate->add_option("--min-context-words", filter.min_context_words)->capture_default_str();
  curate->add_option("--command-prefixes", prefixes, "Comma separated")->capture_default_str();
  curate->add_option("--min-mean-utterance", filter.min_mean_utterance)->capture_default_str();
  curate->add_flag("--no-dedupe", no_dedupe, "Keep repeated sticker/context pairs");
  curate->add_option("--zh-lexicon", zh_lexicon, "Word list for Chinese segmentation");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the game service");
  std::string config_path;
  std::optional<int> serve_port;
  std::optional<std::string> serve_data, serve_ui;
  serve->add_option("--config", config_path, "JSON config file");
  serve->add_option("--port", serve_port);
  serve->add_option("--data-dir", serve_data);
  serve->add_option("--ui-dir", serve_ui, "Static client bundle");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Drive two scripted bots through the game");
  SimulationOptions sim;
  std::string sim_log, sim_records, sim_lang = "en";
  simulate->add_option("--tasks", sim.tasks)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--log", sim_log, "Event log output")->required();
  simulate->add_option("--records", sim_records, "Finalized records output");
  simulate->add_option("--lang", sim_lang)->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Recall@K of query sources against a pool");
  std::string eval_pool, eval_queries, eval_k = "1,5,10,50", eval_lang = "en";
  evaluate->add_option("--pool", eval_pool, "Query-source file indexed per sticker")->required();
  evaluate->add_option("--queries", eval_queries, "Query-source file of trials")->required();
  evaluate->add_option("--k", eval_k, "Comma separated cutoffs")->capture_default_str();
  evaluate->add_option("--lang", eval_lang)->capture_default_str();
  evaluate->add_option("--zh-lexicon", zh_lexicon);

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Interannotator agreement report");
  std::string met_dataset, provider_arg = "hash", met_format = "csv", met_lang = "en";
  bool met_release = false;
  metrics->add_option("--dataset", met_dataset)->required();
  metrics->add_option("--provider", provider_arg,
                      "hash[:seed] | table:PATH | precomputed:PATH")->capture_default_str();
  metrics->add_option("--format", met_format)->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  metrics->add_flag("--release", met_release, "Read the public release format");
  metrics->add_option("--lang", met_lang, "Language of a release file")->capture_default_str();
  metrics->add_option("--zh-lexicon", zh_lexicon);

  // stats
  auto* stats = app.add_subcommand("stats", "Dataset statistics as CSV");
  std::vector<std::string> stat_datasets;
  std::string stat_lang;
  bool stat_release = false;
  stats->add_option("--dataset", stat_datasets, "Dataset file(s)")->required();
  stats->add_option("--lang", stat_lang, "Only this language");
  stats->add_flag("--release", stat_release, "Read the public release format");
  stats->add_option("--zh-lexicon", zh_lexicon);

  // freq
  auto* freq = app.add_subcommand("freq", "Most common query terms as CSV");
  std::string freq_dataset, freq_lang = "en", freq_stop = "none";
  std::size_t freq_top = 10;
  bool freq_release = false;
  freq->add_option("--dataset", freq_dataset)->required();
  freq->add_option("--lang", freq_lang)->capture_default_str();
  freq->add_option("--top", freq_top)->capture_default_str();
  freq->add_option("--stopwords", freq_stop, "none | bundled | PATH")->capture_default_str();
  freq->add_flag("--release", freq_release, "Read the public release format");
  freq->add_option("--zh-lexicon", zh_lexicon);

  // finalize
  auto* finalize = app.add_subcommand("finalize", "Build records from a game data directory");
  std::string fin_dir, fin_out;
  uint64_t fin_seed = 0;
  finalize->add_option("--data-dir", fin_dir)->required();
  finalize->add_option("--out", fin_out, "Records JSONL (stdout when omitted)");
  finalize->add_option("--seed", fin_seed, "Engine seed the log was written with");

  // review
  auto* review = app.add_subcommand("review", "Record an admin decision on a task");
  std::string rev_dir, rev_task;
  bool rev_approve = false, rev_reject = false;
  std::vector<std::string> rev_drop;
  review->add_option("--data-dir", rev_dir)->required();
  review->add_option("--task", rev_task)->required();
  auto* approve_flag = review->add_flag("--approve", rev_approve);
  review->add_flag("--reject", rev_reject)->excludes(approve_flag);
  review->add_option("--drop-query", rev_drop, "Query text to exclude (repeatable)");

  // export
  auto* exporter = app.add_subcommand("export", "Validate and rewrite records in release form");
  std::string exp_in, exp_out;
  exporter->add_option("--in", exp_in)->required();
  exporter->add_option("--out", exp_out)->required();

  // import
  auto* importer = app.add_subcommand("import", "Convert a public release file to records");
  std::string imp_in, imp_out, imp_lang = "en";
  importer->add_option("--in", imp_in)->required();
  importer->add_option("--out", imp_out)->required();
  importer->add_option("--lang", imp_lang)->capture_default_str();

  // tokens
  auto* tokens = app.add_subcommand("tokens", "Distinct per-annotator token sequences, one per line");
  std::string tok_dataset, tok_lang = "en";
  bool tok_release = false;
  tokens->add_option("--dataset", tok_dataset)->required();
  tokens->add_option("--lang", tok_lang)->capture_default_str();
  tokens->add_flag("--release", tok_release, "Read the public release format");
  tokens->add_option("--zh-lexicon", zh_lexicon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*curate) {
      filter.command_prefixes = SplitList(prefixes);
      const auto zh = LoadZhSegmenter(zh_lexicon);
      const IngestResult ingest = IngestConversations(curate_in);
      for (const auto& s : ingest.skipped) {
        err << curate_in << ":" << s.line << ": skipped: " << s.reason << "\n";
      }
      const auto occurrences = FilterContexts(ingest.conversations, filter, zh.get());
      const auto tasks = BuildTaskPool(occurrences, !no_dedupe);
      WriteTaskPool(curate_out, tasks);
      err << "conversations=" << ingest.conversations.size()
          << " occurrences=" << occurrences.size() << " tasks=" << tasks.size() << "\n";
    } else if (*serve) {
      ServerConfig config = LoadServerConfig(config_path, ProcessEnvironment());
      if (serve_port) config.port = *serve_port;
      if (serve_data) config.data_dir = *serve_data;
      if (serve_ui) config.ui_dir = *serve_ui;
      return RunServe(config, err);
    } else if (*simulate) {
      sim.language = ParseLanguage(sim_lang);
      std::ofstream truncate(sim_log, std::ios::trunc);
      if (!truncate) throw IoError("cannot write " + sim_log);
      truncate.close();
      FileEventLog log(sim_log, /*fsync=*/false);
      const SimulationResult result = RunSimulation(sim, &log);
      if (!sim_records.empty()) ExportJsonl(result.finalized.records, sim_records);
      std::size_t completed = 0, review_count = 0;
      for (const auto& [id, t] : result.state.tasks) {
        completed += t.task.status == TaskStatus::kCompleted;
        review_count += t.task.status == TaskStatus::kReview;
      }
      out << "events,tasks,completed,review,records,violations\n"
          << result.events.size() << "," << result.state.tasks.size() << "," << completed
          << "," << review_count << "," << result.finalized.records.size() << ","
          << result.violations.size() << "\n";
      for (const auto& v : result.violations) err << "violation: " << v << "\n";
      return result.violations.empty() ? kExitOk : kExitFailure;
    } else if (*evaluate) {
      const Language lang = ParseLanguage(eval_lang);
      const auto zh = LoadZhSegmenter(zh_lexicon);
      std::vector<std::size_t> ks;
      for (const auto& k : SplitList(eval_k)) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(k, &used);
        if (used != k.size()) throw InvalidArgumentError("bad cutoff '" + k + "'");
        ks.push_back(v);
      }
      const auto pool = ReadQuerySource(eval_pool);
      const Index index = Index::Build(CandidatePool(pool), lang, zh.get());
      std::vector<std::string> sources;
      std::map<std::string, std::vector<Trial>> trials;
      for (const auto& q : ReadQuerySource(eval_queries)) {
        if (!trials.contains(q.source_name)) sources.push_back(q.source_name);
        trials[q.source_name].push_back({q.query_text, q.sticker_id});
      }
      out << "source,trials";
      for (auto k : ks) out << ",R@" << k;
      out << "\n";
      for (const auto& name : sources) {
        const auto recall = RecallAtK(index, trials[name], ks);
        out << name << "," << trials[name].size();
        for (auto k : ks) {
          out << "," << std::fixed << std::setprecision(6) << recall.at(k);
        }
        out << "\n";
      }
    } else if (*metrics) {
      const auto zh = LoadZhSegmenter(zh_lexicon);
      const auto provider = LoadProvider(provider_arg);
      const auto records = LoadRecords(met_dataset, met_release, ParseLanguage(met_lang));
      if (met_format == "csv") WriteReportCsvHeader(out);
      for (Language lang : {Language::kEn, Language::kZh}) {
        std::vector<QueryRecord> subset;
        for (const auto& r : records) {
          if (r.language == lang) subset.push_back(r);
        }
        if (subset.empty()) continue;
        const MetricReport report = InterannotatorReport(subset, *provider, zh.get());
        for (const auto& w : report.warnings) err << "warning: " << w << "\n";
        const std::string label(LanguageName(lang));
        if (met_format == "csv") {
          WriteReportCsvRow(out, label, report);
        } else {
          WriteReportJsonLine(out, label, report);
        }
      }
    } else if (*stats) {
      const auto zh = LoadZhSegmenter(zh_lexicon);
      std::vector<DatasetStats> rows;
      for (Language lang : {Language::kEn, Language::kZh}) {
        if (!stat_lang.empty() && ParseLanguage(stat_lang) != lang) continue;
        std::vector<QueryRecord> subset;
        for (const auto& path : stat_datasets) {
          for (auto& r : LoadRecords(path, stat_release, ParseLanguage(
                                                             stat_lang.empty() ? "en" : stat_lang))) {
            if (r.language == lang) subset.push_back(std::move(r));
          }
        }
        if (!subset.empty()) rows.push_back(StatsSummary(subset, lang, zh.get()));
      }
      WriteStatsCsv(out, rows);
    } else if (*freq) {
      const Language lang = ParseLanguage(freq_lang);
      const auto zh = LoadZhSegmenter(zh_lexicon);
      std::set<std::string> custom;
      const std::set<std::string>* stopwords = nullptr;
      if (freq_stop == "bundled") {
        stopwords = &BundledStopwords(lang);
      } else if (freq_stop != "none") {
        std::istringstream lines(ReadFile(freq_stop));
        for (std::string line; std::getline(lines, line);) {
          line = CollapseWhitespace(line);
          if (!line.empty() && line[0] != '#') custom.insert(FoldCase(line));
        }
        stopwords = &custom;
      }
      auto records = LoadRecords(freq_dataset, freq_release, lang);
      std::erase_if(records, [&](const QueryRecord& r) { return r.language != lang; });
      const auto rows = TermFrequency(records, lang, freq_top, stopwords, zh.get());
      WriteFrequencyCsv(out, rows);
    } else if (*finalize) {
      const DataDirLayout layout = Layout(fin_dir);
      const std::vector<GameEvent> events = ReadEventLog(layout.events);
      const GameEngine engine = GameEngine::Replay(LoadSetup(fin_dir, fin_seed), events);
      std::vector<ReviewDecision> decisions;
      CorrectionMap corrections;
      if (std::filesystem::exists(layout.reviews)) decisions = ReadReviewDecisions(layout.reviews);
      if (std::filesystem::exists(layout.corrections)) {
        corrections = ReadCorrections(layout.corrections);
      }
      const FinalizeResult result = FinalizeRecords(engine.state(), decisions, corrections);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      if (fin_out.empty()) {
        for (const auto& r : result.records) out << RecordToJsonLine(r) << "\n";
      } else {
        ExportJsonl(result.records, fin_out);
      }
      err << "records=" << result.records.size() << "\n";
    } else if (*review) {
      if (rev_approve == rev_reject) throw InvalidArgumentError("pass --approve or --reject");
      const DataDirLayout layout = Layout(rev_dir);
      ReviewDecision d{rev_task, rev_approve, rev_drop};
      std::ofstream file(layout.reviews, std::ios::app);
      if (!file) throw IoError("cannot write " + layout.reviews);
      file << ReviewDecisionToJsonLine(d) << "\n";
      file.close();
      if (!file) throw IoError("write failed: " + layout.reviews);
    } else if (*exporter) {
      ExportJsonl(ImportJsonl(exp_in), exp_out);
    } else if (*tokens) {
      const Language lang = ParseLanguage(tok_lang);
      const auto zh = LoadZhSegmenter(zh_lexicon);
      std::set<std::string> seen;
      for (const auto& r : LoadRecords(tok_dataset, tok_release, lang)) {
        if (r.language != lang) continue;
        for (const auto& seq : AnnotatorTexts(r, zh.get())) {
          const std::string key = Join(seq);
          if (!key.empty() && seen.insert(key).second) out << key << "\n";
        }
      }
    } else if (*importer) {
      const auto records = ImportRelease(imp_in, ParseLanguage(imp_lang));
      ExportJsonl(records, imp_out);
      err << "records=" << records.size() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace sticktionary
