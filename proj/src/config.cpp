#include "headsum/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "headsum/errors.h"

namespace headsum {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

void parse_corpus_section(const json& section, ExperimentConfig& cfg) {
  check_keys(section,
             {"train", "validation", "test", "minSentences", "maxSentences", "minTokens",
              "maxTokens", "delimiters", "vocabSize"},
             "corpus");
  if (section.contains("train")) cfg.train_path = section.at("train").get<std::string>();
  if (section.contains("validation")) {
    cfg.validation_path = section.at("validation").get<std::string>();
  }
  if (section.contains("test")) cfg.test_path = section.at("test").get<std::string>();
  if (section.contains("minSentences")) {
    cfg.filter.min_sentences = section.at("minSentences").get<int>();
  }
  if (section.contains("maxSentences")) {
    cfg.filter.max_sentences = section.at("maxSentences").get<int>();
  }
  if (section.contains("minTokens")) cfg.filter.min_tokens = section.at("minTokens").get<int>();
  if (section.contains("maxTokens")) cfg.filter.max_tokens = section.at("maxTokens").get<int>();
  if (section.contains("delimiters")) {
    cfg.delimiters = section.at("delimiters").get<std::string>();
  }
  if (section.contains("vocabSize")) cfg.vocab_size_cap = section.at("vocabSize").get<int>();
}

void parse_model_section(const json& section, ExperimentConfig& cfg) {
  check_keys(section, {"d", "heads", "layers", "maxPositions", "lnEpsilon"}, "model");
  if (section.contains("d")) cfg.model.d = section.at("d").get<int>();
  if (section.contains("heads")) cfg.model.heads = section.at("heads").get<int>();
  if (section.contains("layers")) cfg.model.layers = section.at("layers").get<int>();
  if (section.contains("maxPositions")) {
    cfg.model.max_positions = section.at("maxPositions").get<int>();
  }
  if (section.contains("lnEpsilon")) {
    cfg.model.ln_epsilon = section.at("lnEpsilon").get<double>();
  }
}

void parse_train_section(const json& section, ExperimentConfig& cfg) {
  check_keys(section, {"epochs", "learningRate", "beta1", "beta2", "adamEpsilon"}, "train");
  if (section.contains("epochs")) cfg.train.epochs = section.at("epochs").get<int>();
  if (section.contains("learningRate")) {
    cfg.train.learning_rate = section.at("learningRate").get<double>();
  }
  if (section.contains("beta1")) cfg.train.beta1 = section.at("beta1").get<double>();
  if (section.contains("beta2")) cfg.train.beta2 = section.at("beta2").get<double>();
  if (section.contains("adamEpsilon")) {
    cfg.train.adam_epsilon = section.at("adamEpsilon").get<double>();
  }
}

void parse_systems_section(const json& section, ExperimentConfig& cfg) {
  cfg.systems.clear();
  for (const auto& entry : section) {
    check_keys(entry, {"mode", "alpha"}, "systems entry");
    AggregationConfig system;
    system.mode = parse_mode(entry.at("mode").get<std::string>());
    if (entry.contains("alpha")) {
      if (system.mode != AggregationMode::kWeighted) {
        throw ConfigError("systems entry: alpha is only valid with mode \"weighted\"");
      }
      system.alpha = entry.at("alpha").get<double>();
    } else if (system.mode == AggregationMode::kWeighted) {
      throw ConfigError("systems entry: mode \"weighted\" requires alpha");
    }
    cfg.systems.push_back(system);
  }
}

void parse_analysis_section(const json& section, ExperimentConfig& cfg) {
  check_keys(section, {"alphaGrid", "gridPoints", "dumpEmbeddings", "perIndexLimit"},
             "analysis");
  if (section.contains("alphaGrid")) {
    cfg.analysis.alpha_grid = section.at("alphaGrid").get<std::vector<double>>();
  }
  if (section.contains("gridPoints")) {
    cfg.analysis.grid_points = section.at("gridPoints").get<int>();
  }
  if (section.contains("dumpEmbeddings")) {
    cfg.analysis.dump_embeddings = section.at("dumpEmbeddings").get<bool>();
  }
  if (section.contains("perIndexLimit")) {
    cfg.analysis.per_index_limit = section.at("perIndexLimit").get<int>();
  }
}

}  // namespace

int lead_baseline_count(const std::string& baseline) {
  const std::string prefix = "lead-";
  if (baseline.rfind(prefix, 0) != 0) {
    throw ConfigError("unknown baseline: " + baseline);
  }
  const std::string digits = baseline.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("baseline " + baseline + ": expected lead-<count>");
  }
  const int n = std::stoi(digits);
  if (n < 1) throw ConfigError("baseline " + baseline + ": count must be >= 1");
  return n;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.systems = {
      {AggregationMode::kSelectionOnly, 0.5, 0.5},
      {AggregationMode::kHarmonicMean, 0.5, 0.5},
      {AggregationMode::kSimpleAverage, 0.5, 0.5},
  };
  cfg.baselines = {"oracle", "lead-2", "hl", "hl-cos"};
  for (int i = 0; i <= 10; ++i) {
    cfg.analysis.alpha_grid.push_back(static_cast<double>(i) / 10.0);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) throw ConfigError(origin + ": not valid JSON");
  if (!root.is_object()) throw ConfigError(origin + ": expected a JSON object");

  ExperimentConfig cfg = default_config();
  try {
    check_keys(root,
               {"seed", "outDir", "corpus", "oracle", "model", "train", "systems",
                "baselines", "threshold", "split", "analysis"},
               origin);
    if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("outDir")) cfg.out_dir = root.at("outDir").get<std::string>();
    if (root.contains("corpus")) parse_corpus_section(root.at("corpus"), cfg);
    if (root.contains("oracle")) {
      check_keys(root.at("oracle"), {"tau"}, "oracle");
      if (root.at("oracle").contains("tau")) {
        cfg.oracle.tau = root.at("oracle").at("tau").get<int>();
      }
    }
    if (root.contains("model")) parse_model_section(root.at("model"), cfg);
    if (root.contains("train")) parse_train_section(root.at("train"), cfg);
    if (root.contains("systems")) parse_systems_section(root.at("systems"), cfg);
    if (root.contains("baselines")) {
      cfg.baselines = root.at("baselines").get<std::vector<std::string>>();
    }
    if (root.contains("threshold")) cfg.threshold = root.at("threshold").get<double>();
    if (root.contains("split")) {
      const json& split = root.at("split");
      check_keys(split, {"input", "fractions"}, "split");
      if (split.contains("input")) cfg.split_input = split.at("input").get<std::string>();
      if (split.contains("fractions")) {
        cfg.split_fractions = split.at("fractions").get<std::vector<double>>();
      }
    }
    if (root.contains("analysis")) parse_analysis_section(root.at("analysis"), cfg);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  for (auto& system : cfg.systems) system.threshold = cfg.threshold;
  cfg.model.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

void ExperimentConfig::validate() const {
  filter.validate();
  oracle.validate();
  train.validate();

  ModelConfig model_check = model;
  if (model_check.vocab_size == 0) model_check.vocab_size = 1;
  model_check.validate();

  if (vocab_size_cap <= kReservedTokens) {
    throw ConfigError("corpus vocabSize must exceed the reserved token count");
  }
  if (delimiters.empty()) throw ConfigError("corpus delimiters must be non-empty");
  if (threshold < 0.0 || threshold > 1.0) {
    throw ConfigError("threshold must be in [0, 1]");
  }
  for (const auto& system : systems) system.validate();
  for (const auto& baseline : baselines) {
    if (baseline != "oracle" && baseline != "hl" && baseline != "hl-cos") {
      lead_baseline_count(baseline);
    }
  }
  if (split_fractions.size() != 3) {
    throw ConfigError("split fractions must have exactly 3 entries");
  }
  double total = 0.0;
  for (double f : split_fractions) {
    if (f < 0.0) throw ConfigError("split fractions must be non-negative");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  if (analysis.grid_points < 2) throw ConfigError("analysis gridPoints must be >= 2");
  if (analysis.per_index_limit < 1) {
    throw ConfigError("analysis perIndexLimit must be >= 1");
  }
  if (analysis.alpha_grid.empty()) throw ConfigError("analysis alphaGrid must be non-empty");
  for (double a : analysis.alpha_grid) {
    if (a < 0.0 || a > 1.0) throw ConfigError("analysis alphaGrid values must be in [0, 1]");
  }
}

}  // namespace headsum
