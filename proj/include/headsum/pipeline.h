#pragma once

#include <string>
#include <utility>
#include <vector>

#include "headsum/config.h"
#include "headsum/corpus.h"
#include "headsum/metrics.h"
#include "headsum/model.h"
#include "headsum/oracle.h"
#include "headsum/rerank.h"
#include "headsum/trainer.h"
#include "headsum/vocab.h"

namespace headsum {

struct MetricCell {
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rouge_l = 0.0;
  double bleu = 0.0;
};

/// One table row: metrics against the abstractive reference and, for
/// documents with non-empty oracle labels, against the oracle-extractive
/// reference. Selection rows also carry PRF against the oracle labels.
struct SystemReport {
  std::string system;
  MetricCell abstractive;
  MetricCell extractive;
  bool has_prf = false;
  PRF document_prf;
  PRF sentence_prf;
};

struct SourceReport {
  std::string source;  // "all" or a source tag
  int articles = 0;
  int extractive_articles = 0;  // with non-empty oracle labels
  std::vector<SystemReport> rows;
};

struct MetricsReport {
  std::string split;  // which corpus file was evaluated
  int documents = 0;
  std::vector<SourceReport> sources;  // "all" first, then tags in name order
  std::vector<std::pair<std::string, std::string>> exclusions;  // id, reason
  std::vector<double> epoch_losses;  // empty when a checkpoint was reused
};

const SystemReport& find_row(const MetricsReport& report, const std::string& system,
                             const std::string& source = "all");

struct PipelineOptions {
  std::string checkpoint_path;   // reuse instead of training when non-empty
  bool write_artifacts = true;   // emit files under cfg.out_dir
  bool quiet = true;             // suppress progress lines on stderr
};

/// Tokenized corpora, oracle labels, and a trained (or loaded) model.
struct Session {
  Vocabulary vocab;
  Parameters params;
  std::vector<Document> train_docs;
  std::vector<ExtractiveLabels> train_labels;
  std::vector<Document> eval_docs;
  std::vector<ExtractiveLabels> eval_labels;
  std::string eval_split;  // "test", "validation", or "train"
  TrainReport train_report;
  std::vector<std::pair<std::string, std::string>> exclusions;
};

Session prepare_session(const ExperimentConfig& cfg, const PipelineOptions& options = {});

/// Scores the session's evaluation split with the oracle row, every
/// requested baseline, and every requested system, then evaluates all of
/// them against both references.
MetricsReport evaluate_session(const ExperimentConfig& cfg, const Session& session,
                               const PipelineOptions& options = {});

/// ingest -> oracle labeling -> training (or checkpoint reuse) -> scoring
/// -> evaluation; artifacts land in cfg.out_dir.
MetricsReport run_pipeline(const ExperimentConfig& cfg, const PipelineOptions& options = {});

/// Seeded line-level partition of split.input into train/validation/test
/// files under cfg.out_dir.
void split_corpus(const ExperimentConfig& cfg);

std::string report_to_json(const MetricsReport& report);
std::string report_to_text(const MetricsReport& report);

/// Concatenated content tokens of the sentences at the given 1-based
/// indices.
std::vector<TokenId> selected_tokens(const Document& doc, const std::vector<int>& indices);

/// Concatenated content tokens of the abstractive summary sentences.
std::vector<TokenId> abstractive_tokens(const Document& doc);

PrfCounts selection_counts(const std::vector<int>& selected,
                           const std::vector<int>& labeled);

}  // namespace headsum
