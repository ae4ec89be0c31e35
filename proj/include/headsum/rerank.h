#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "headsum/corpus.h"
#include "headsum/model.h"

namespace headsum {

enum class AggregationMode {
  kSimpleAverage,
  kHarmonicMean,
  kWeighted,
  kSelectionOnly,
  kSimilarityOnly,
};

struct AggregationConfig {
  AggregationMode mode = AggregationMode::kSimpleAverage;
  double alpha = 0.5;  // weighted mode only
  double threshold = 0.5;

  void validate() const;
  /// Stable system name: "sa", "hm", "weighted@0.25", "sel-only", "hl-cos".
  std::string label() const;
};

AggregationMode parse_mode(const std::string& name);

struct SentenceScore {
  int index = 0;          // 1-based
  double sel_score = 0.0;  // sigmoid-head probability
  double raw_sim = 0.0;    // headline cosine in [-1, 1]
  double sim_score = 0.0;  // max(0, raw_sim)
  double prob = 0.0;       // aggregated probability
};

struct SentenceScores {
  std::string document_id;
  std::vector<SentenceScore> per_sentence;
};

struct SummarySelection {
  std::string document_id;
  std::vector<int> indices;  // ascending, 1-based
};

/// Clamped to [-1, 1]; zero-norm input scores 0 with a diagnostic.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Combines a selection and a similarity probability, both in [0, 1].
double aggregate(double sel, double sim, const AggregationConfig& cfg);

/// Model outputs that every aggregation mode shares: one encoder pass for
/// the body, one for the headline.
struct BaseScores {
  std::string document_id;
  std::vector<double> sel;
  std::vector<double> raw_sim;
};

BaseScores base_scores(const Document& doc, const Parameters& params);

SentenceScores apply_aggregation(const BaseScores& base, const AggregationConfig& cfg);

/// Indices with prob >= threshold (inclusive), ascending.
SummarySelection select_summary(const SentenceScores& scores, double threshold);

/// First min(n, sentence count) sentences.
SummarySelection lead_n(const Document& doc, int n);

/// Similarity-only scoring: prob = max(0, cosine(headline state, sentence
/// state)).
SentenceScores hl_cos_scores(const Document& doc, const Parameters& params);

/// The headline's content tokens, used verbatim as a predicted summary.
std::vector<TokenId> headline_as_summary(const Document& doc);

}  // namespace headsum
