#include "headsum/rerank.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "headsum/encoder.h"
#include "headsum/errors.h"

namespace headsum {

void AggregationConfig::validate() const {
  if (mode == AggregationMode::kWeighted && (alpha < 0.0 || alpha > 1.0)) {
    throw ConfigError("aggregation alpha must be in [0, 1]");
  }
  if (threshold < 0.0 || threshold > 1.0) {
    throw ConfigError("aggregation threshold must be in [0, 1]");
  }
}

std::string AggregationConfig::label() const {
  switch (mode) {
    case AggregationMode::kSimpleAverage:
      return "sa";
    case AggregationMode::kHarmonicMean:
      return "hm";
    case AggregationMode::kWeighted: {
      std::ostringstream out;
      out << "weighted@" << alpha;
      return out.str();
    }
    case AggregationMode::kSelectionOnly:
      return "sel-only";
    case AggregationMode::kSimilarityOnly:
      return "hl-cos";
  }
  return "unknown";
}

AggregationMode parse_mode(const std::string& name) {
  if (name == "sa") return AggregationMode::kSimpleAverage;
  if (name == "hm") return AggregationMode::kHarmonicMean;
  if (name == "weighted") return AggregationMode::kWeighted;
  if (name == "sel-only") return AggregationMode::kSelectionOnly;
  if (name == "hl-cos" || name == "sim-only") return AggregationMode::kSimilarityOnly;
  throw ConfigError("unknown aggregation mode: " + name);
}

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: dimension mismatch");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    std::fprintf(stderr, "warning: cosine of zero-norm vector, scoring 0\n");
    return 0.0;
  }
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

double aggregate(double sel, double sim, const AggregationConfig& cfg) {
  if (sel < 0.0 || sel > 1.0 || sim < 0.0 || sim > 1.0) {
    throw std::invalid_argument("aggregate: scores must be in [0, 1]");
  }
  switch (cfg.mode) {
    case AggregationMode::kSimpleAverage:
      return (sel + sim) / 2.0;
    case AggregationMode::kHarmonicMean:
      return sel + sim == 0.0 ? 0.0 : 2.0 * sel * sim / (sel + sim);
    case AggregationMode::kWeighted:
      cfg.validate();
      return cfg.alpha * sel + (1.0 - cfg.alpha) * sim;
    case AggregationMode::kSelectionOnly:
      return sel;
    case AggregationMode::kSimilarityOnly:
      return sim;
  }
  throw ConfigError("aggregate: unknown mode");
}

BaseScores base_scores(const Document& doc, const Parameters& params) {
  EncodedDocument enc = encode(doc, params);
  enc.headline_state = encode_headline(doc, params);

  BaseScores base;
  base.document_id = doc.id;
  base.sel = selection_scores(enc, params);
  base.raw_sim.reserve(base.sel.size());
  for (Eigen::Index i = 0; i < enc.cls_states.rows(); ++i) {
    base.raw_sim.push_back(cosine(enc.headline_state, enc.cls_states.row(i).transpose()));
  }
  return base;
}

SentenceScores apply_aggregation(const BaseScores& base, const AggregationConfig& cfg) {
  cfg.validate();
  SentenceScores scores;
  scores.document_id = base.document_id;
  scores.per_sentence.reserve(base.sel.size());
  for (std::size_t i = 0; i < base.sel.size(); ++i) {
    SentenceScore s;
    s.index = static_cast<int>(i) + 1;
    s.sel_score = base.sel[i];
    s.raw_sim = base.raw_sim[i];
    s.sim_score = std::max(0.0, base.raw_sim[i]);
    s.prob = aggregate(s.sel_score, s.sim_score, cfg);
    scores.per_sentence.push_back(s);
  }
  return scores;
}

SummarySelection select_summary(const SentenceScores& scores, double threshold) {
  SummarySelection selection;
  selection.document_id = scores.document_id;
  for (const auto& s : scores.per_sentence) {
    if (s.prob >= threshold) selection.indices.push_back(s.index);
  }
  return selection;
}

SummarySelection lead_n(const Document& doc, int n) {
  if (n < 1) throw ConfigError("lead_n: n must be >= 1");
  SummarySelection selection;
  selection.document_id = doc.id;
  const int count = std::min(n, static_cast<int>(doc.sentences.size()));
  for (int i = 1; i <= count; ++i) selection.indices.push_back(i);
  return selection;
}

SentenceScores hl_cos_scores(const Document& doc, const Parameters& params) {
  AggregationConfig cfg;
  cfg.mode = AggregationMode::kSimilarityOnly;
  return apply_aggregation(base_scores(doc, params), cfg);
}

std::vector<TokenId> headline_as_summary(const Document& doc) {
  return doc.headline.content_ids();
}

}  // namespace headsum
