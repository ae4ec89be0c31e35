#pragma once

#include <map>
#include <string>
#include <vector>

#include "headsum/config.h"
#include "headsum/metrics.h"
#include "headsum/pipeline.h"

namespace headsum {

struct AlphaPoint {
  double alpha = 0.0;
  PRF document_prf;
  PRF sentence_prf;
};

struct ClassSimilarity {
  std::size_t count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct AnalysisBundle {
  std::vector<AlphaPoint> alpha_sweep;
  ClassSimilarity positive;  // sentences the oracle labeled
  ClassSimilarity negative;
  std::vector<double> grid_axis;
  std::vector<std::vector<double>> sa_grid;  // [sel][sim]
  std::vector<std::vector<double>> hm_grid;
  std::map<std::string, std::vector<PRF>> per_index;  // system -> pooled PRF by sentence index
};

/// Weighted-aggregation evaluation at every alpha in the grid, on the
/// session's evaluation split. Endpoints reproduce the sel-only and hl-cos
/// selections exactly.
AnalysisBundle alpha_sweep(const ExperimentConfig& cfg, const std::vector<double>& grid,
                           const PipelineOptions& options = {});

/// Headline-similarity distribution split by oracle class, SA/HM
/// aggregation surfaces, the configured alpha sweep, per-index PRF series,
/// and an optional embedding dump.
AnalysisBundle analyze_similarity(const ExperimentConfig& cfg,
                                  const PipelineOptions& options = {});

std::string analysis_to_json(const AnalysisBundle& bundle);

/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double q);

}  // namespace headsum
