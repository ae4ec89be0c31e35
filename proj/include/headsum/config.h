#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "headsum/corpus.h"
#include "headsum/model.h"
#include "headsum/oracle.h"
#include "headsum/rerank.h"
#include "headsum/trainer.h"

namespace headsum {

struct AnalysisConfig {
  std::vector<double> alpha_grid;  // defaults to 0, 0.1, ..., 1
  int grid_points = 101;
  bool dump_embeddings = false;
  int per_index_limit = 10;
};

/// One experiment: corpus paths, admission filter, oracle and model
/// settings, optimizer settings, systems and baselines to evaluate.
/// Unknown config keys are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  std::string train_path;
  std::string validation_path;
  std::string test_path;
  CorpusFilter filter;
  std::string delimiters = ".!?\n";
  int vocab_size_cap = 30000;

  OracleConfig oracle;
  ModelConfig model;  // vocab_size stays 0 until the vocabulary is built
  TrainConfig train;

  std::vector<AggregationConfig> systems;
  std::vector<std::string> baselines;  // "lead-<n>", "hl", "hl-cos"
  double threshold = 0.5;

  std::string split_input;
  std::vector<double> split_fractions = {0.8, 0.1, 0.1};

  AnalysisConfig analysis;

  void validate() const;
};

ExperimentConfig default_config();

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

/// Sentence count of a "lead-<n>" baseline name.
int lead_baseline_count(const std::string& baseline);

}  // namespace headsum
