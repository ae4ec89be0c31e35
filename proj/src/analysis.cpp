#include "headsum/analysis.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "headsum/encoder.h"
#include "headsum/errors.h"
#include "headsum/rerank.h"

namespace headsum {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

namespace {

struct ScoredEval {
  Session session;
  std::vector<BaseScores> base;  // aligned with session.eval_docs
};

ScoredEval score_eval(const ExperimentConfig& cfg, const PipelineOptions& options) {
  ScoredEval scored;
  scored.session = prepare_session(cfg, options);
  scored.base.reserve(scored.session.eval_docs.size());
  for (const auto& doc : scored.session.eval_docs) {
    scored.base.push_back(base_scores(doc, scored.session.params));
  }
  return scored;
}

std::vector<AlphaPoint> sweep_points(const ScoredEval& scored,
                                     const std::vector<double>& grid, double threshold) {
  std::vector<AlphaPoint> points;
  points.reserve(grid.size());
  for (double alpha : grid) {
    AggregationConfig agg;
    agg.mode = AggregationMode::kWeighted;
    agg.alpha = alpha;
    agg.threshold = threshold;

    std::vector<PrfCounts> counts;
    for (std::size_t i = 0; i < scored.base.size(); ++i) {
      const auto& labels = scored.session.eval_labels[i].indices;
      if (labels.empty()) continue;
      const SummarySelection selection =
          select_summary(apply_aggregation(scored.base[i], agg), threshold);
      counts.push_back(selection_counts(selection.indices, labels));
    }
    if (counts.empty()) {
      throw DataError("alpha sweep: no documents with extractive labels");
    }
    AlphaPoint point;
    point.alpha = alpha;
    point.document_prf = aggregate_prf(counts, PrfMode::kDocument);
    point.sentence_prf = aggregate_prf(counts, PrfMode::kSentence);
    points.push_back(point);
  }
  return points;
}

ClassSimilarity summarize_class(const std::vector<double>& values) {
  ClassSimilarity summary;
  summary.count = values.size();
  summary.q1 = quantile(values, 0.25);
  summary.median = quantile(values, 0.5);
  summary.q3 = quantile(values, 0.75);
  return summary;
}

void write_embeddings(const ExperimentConfig& cfg, const Session& session) {
  const fs::path path = fs::path(cfg.out_dir) / "embeddings.tsv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write embedding dump: " + path.string());
  char buffer[64];
  for (std::size_t i = 0; i < session.eval_docs.size(); ++i) {
    const Document& doc = session.eval_docs[i];
    const auto& indices = session.eval_labels[i].indices;
    const std::unordered_set<int> labeled(indices.begin(), indices.end());
    const EncodedDocument enc = encode(doc, session.params);
    for (Eigen::Index row = 0; row < enc.cls_states.rows(); ++row) {
      const int index = static_cast<int>(row) + 1;
      out << doc.id << '\t' << index << '\t' << (labeled.count(index) ? 1 : 0);
      for (Eigen::Index c = 0; c < enc.cls_states.cols(); ++c) {
        std::snprintf(buffer, sizeof buffer, "%.8g", enc.cls_states(row, c));
        out << '\t' << buffer;
      }
      out << '\n';
    }
  }
}

}  // namespace

AnalysisBundle alpha_sweep(const ExperimentConfig& cfg, const std::vector<double>& grid,
                           const PipelineOptions& options) {
  if (grid.empty()) throw std::invalid_argument("alpha_sweep: empty grid");
  for (double alpha : grid) {
    if (alpha < 0.0 || alpha > 1.0) {
      throw std::invalid_argument("alpha_sweep: alpha outside [0, 1]");
    }
  }
  const ScoredEval scored = score_eval(cfg, options);

  AnalysisBundle bundle;
  bundle.alpha_sweep = sweep_points(scored, grid, cfg.threshold);

  if (options.write_artifacts) {
    fs::create_directories(cfg.out_dir);
    ordered_json root;
    root["alphaSweep"] = ordered_json::array();
    for (const auto& point : bundle.alpha_sweep) {
      root["alphaSweep"].push_back(ordered_json{
          {"alpha", point.alpha},
          {"documentF1", point.document_prf.f1},
          {"sentenceF1", point.sentence_prf.f1}});
    }
    std::ofstream out(fs::path(cfg.out_dir) / "alpha_sweep.json",
                      std::ios::binary | std::ios::trunc);
    out << root.dump(2) << '\n';
    if (!out) throw DataError("cannot write alpha sweep under " + cfg.out_dir);
  }
  return bundle;
}

AnalysisBundle analyze_similarity(const ExperimentConfig& cfg,
                                  const PipelineOptions& options) {
  const ScoredEval scored = score_eval(cfg, options);
  const Session& session = scored.session;

  AnalysisBundle bundle;
  bundle.alpha_sweep = sweep_points(scored, cfg.analysis.alpha_grid, cfg.threshold);

  std::vector<double> positive, negative;
  for (std::size_t i = 0; i < scored.base.size(); ++i) {
    const auto& indices = session.eval_labels[i].indices;
    const std::unordered_set<int> labeled(indices.begin(), indices.end());
    const auto& sims = scored.base[i].raw_sim;
    for (std::size_t s = 0; s < sims.size(); ++s) {
      (labeled.count(static_cast<int>(s) + 1) ? positive : negative).push_back(sims[s]);
    }
  }
  if (positive.empty() || negative.empty()) {
    throw DataError("similarity analysis needs at least one sentence per class");
  }
  bundle.positive = summarize_class(positive);
  bundle.negative = summarize_class(negative);

  const int grid_points = cfg.analysis.grid_points;
  bundle.grid_axis.resize(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    bundle.grid_axis[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(grid_points - 1);
  }
  AggregationConfig sa{AggregationMode::kSimpleAverage, 0.5, cfg.threshold};
  AggregationConfig hm{AggregationMode::kHarmonicMean, 0.5, cfg.threshold};
  bundle.sa_grid.assign(static_cast<std::size_t>(grid_points),
                        std::vector<double>(static_cast<std::size_t>(grid_points)));
  bundle.hm_grid = bundle.sa_grid;
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const double sel = bundle.grid_axis[static_cast<std::size_t>(i)];
      const double sim = bundle.grid_axis[static_cast<std::size_t>(j)];
      bundle.sa_grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          aggregate(sel, sim, sa);
      bundle.hm_grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          aggregate(sel, sim, hm);
    }
  }

  std::size_t max_index = 0;
  for (const auto& doc : session.eval_docs) {
    max_index = std::max(max_index, doc.sentences.size());
  }
  max_index = std::min(max_index, static_cast<std::size_t>(cfg.analysis.per_index_limit));
  for (const auto& system : cfg.systems) {
    std::vector<PRF> series;
    for (std::size_t index = 1; index <= max_index; ++index) {
      PrfCounts pooled;
      for (std::size_t i = 0; i < scored.base.size(); ++i) {
        const auto& labels = session.eval_labels[i].indices;
        if (labels.empty()) continue;
        if (index > session.eval_docs[i].sentences.size()) continue;
        const SummarySelection selection =
            select_summary(apply_aggregation(scored.base[i], system), system.threshold);
        const bool selected =
            std::find(selection.indices.begin(), selection.indices.end(),
                      static_cast<int>(index)) != selection.indices.end();
        const bool labeled = std::find(labels.begin(), labels.end(),
                                       static_cast<int>(index)) != labels.end();
        if (selected && labeled) ++pooled.tp;
        if (selected && !labeled) ++pooled.fp;
        if (!selected && labeled) ++pooled.fn;
      }
      series.push_back(prf(pooled.tp, pooled.fp, pooled.fn));
    }
    bundle.per_index[system.label()] = std::move(series);
  }

  if (options.write_artifacts) {
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "analysis.json",
                      std::ios::binary | std::ios::trunc);
    out << analysis_to_json(bundle);
    if (!out) throw DataError("cannot write analysis under " + cfg.out_dir);
    if (cfg.analysis.dump_embeddings) write_embeddings(cfg, session);
  }
  return bundle;
}

namespace {

ordered_json prf_to_json(const PRF& prf) {
  return ordered_json{
      {"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}

ordered_json class_to_json(const ClassSimilarity& c) {
  return ordered_json{{"count", c.count}, {"q1", c.q1}, {"median", c.median}, {"q3", c.q3}};
}

}  // namespace

std::string analysis_to_json(const AnalysisBundle& bundle) {
  ordered_json root;
  root["alphaSweep"] = ordered_json::array();
  for (const auto& point : bundle.alpha_sweep) {
    root["alphaSweep"].push_back(ordered_json{{"alpha", point.alpha},
                                              {"document", prf_to_json(point.document_prf)},
                                              {"sentence", prf_to_json(point.sentence_prf)}});
  }
  root["similarity"] =
      ordered_json{{"positive", class_to_json(bundle.positive)},
                   {"negative", class_to_json(bundle.negative)}};
  root["gridAxis"] = bundle.grid_axis;
  root["saGrid"] = bundle.sa_grid;
  root["hmGrid"] = bundle.hm_grid;
  root["perIndex"] = ordered_json::object();
  for (const auto& [system, series] : bundle.per_index) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
      ordered_json row = prf_to_json(series[i]);
      row["index"] = i + 1;
      rows.push_back(std::move(row));
    }
    root["perIndex"][system] = std::move(rows);
  }
  return root.dump(2) + "\n";
}

}  // namespace headsum
