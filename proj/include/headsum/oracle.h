#pragma once

#include <string>
#include <vector>

#include "headsum/corpus.h"
#include "headsum/metrics.h"

namespace headsum {

struct OracleConfig {
  int tau = 4;  // maximum selected sentence count

  void validate() const;
};

/// Greedy extractive ground truth: 1-based sentence indices, strictly
/// ascending, at most tau of them. Empty when no sentence improves the
/// score in the first round.
struct ExtractiveLabels {
  std::string document_id;
  std::vector<int> indices;
};

struct OracleRound {
  int picked_index = 0;      // 1-based
  double rouge_total = 0.0;  // ROUGE-1 F1 + ROUGE-2 F1 after the pick
};

struct OracleTrace {
  std::vector<OracleRound> rounds;  // in pick order
  double final_rouge1 = 0.0;
  double final_rouge2 = 0.0;
};

/// Greedy selection maximizing ROUGE-1 + ROUGE-2 of the selected set's
/// per-sentence n-gram bag union against the abstractive summary's union.
/// Each round commits the best strictly-improving sentence (lowest index
/// wins ties) and stops when none improves or |Y| = tau.
ExtractiveLabels oracle_labels(const Document& doc, const OracleConfig& config,
                               OracleTrace* trace = nullptr);

/// Per-sentence binary targets (size = sentence count) from label indices.
std::vector<int> label_mask(const ExtractiveLabels& labels, std::size_t n_sentences);

void save_labels(const std::string& path, const std::vector<ExtractiveLabels>& labels);
std::vector<ExtractiveLabels> load_labels(const std::string& path);

}  // namespace headsum
