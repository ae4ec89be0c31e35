#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "headsum/analysis.h"
#include "headsum/checkpoint.h"
#include "headsum/config.h"
#include "headsum/errors.h"
#include "headsum/pipeline.h"
#include "headsum/tokenizer.h"

namespace fs = std::filesystem;
using namespace headsum;

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::string checkpoint;
  std::vector<std::string> systems;
  std::string alpha_grid;
  int tau = 0;
  long long seed = 0;
  bool verbose = false;
};

struct CommonOpts {
  CLI::Option* out = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* systems = nullptr;
  CLI::Option* alpha_grid = nullptr;
};

CommonOpts add_common(CLI::App* cmd, CommonArgs& args, bool with_checkpoint) {
  CommonOpts opts;
  cmd->add_option("--config", args.config, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  opts.out = cmd->add_option("--out", args.out, "output directory override");
  opts.tau = cmd->add_option("--tau", args.tau, "oracle tau override");
  opts.seed = cmd->add_option("--seed", args.seed, "seed override");
  opts.systems = cmd->add_option("--systems", args.systems,
                                 "systems override, e.g. sel-only,sa,weighted@0.25")
                     ->delimiter(',');
  opts.alpha_grid =
      cmd->add_option("--alpha-grid", args.alpha_grid, "comma-separated alpha values");
  if (with_checkpoint) {
    cmd->add_option("--checkpoint", args.checkpoint, "reuse a trained checkpoint")
        ->check(CLI::ExistingFile);
  }
  cmd->add_flag("--verbose", args.verbose, "progress lines on stderr");
  return opts;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) {
      try {
        grid.push_back(std::stod(piece));
      } catch (const std::exception&) {
        throw ConfigError("bad alpha value: " + piece);
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (grid.empty()) throw ConfigError("alpha grid is empty");
  return grid;
}

AggregationConfig parse_system_spec(const std::string& spec, double threshold) {
  AggregationConfig cfg;
  cfg.threshold = threshold;
  const std::size_t at = spec.find('@');
  if (at == std::string::npos) {
    cfg.mode = parse_mode(spec);
    if (cfg.mode == AggregationMode::kWeighted) {
      throw ConfigError("system " + spec + ": weighted needs weighted@<alpha>");
    }
  } else {
    cfg.mode = parse_mode(spec.substr(0, at));
    if (cfg.mode != AggregationMode::kWeighted) {
      throw ConfigError("system " + spec + ": only weighted takes @<alpha>");
    }
    try {
      cfg.alpha = std::stod(spec.substr(at + 1));
    } catch (const std::exception&) {
      throw ConfigError("system " + spec + ": bad alpha");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig resolve_config(const CommonArgs& args, const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(args.config);
  if (opts.out->count()) cfg.out_dir = args.out;
  if (opts.tau->count()) cfg.oracle.tau = args.tau;
  if (opts.seed->count()) {
    cfg.seed = static_cast<std::uint64_t>(args.seed);
    cfg.model.seed = cfg.seed;
  }
  if (opts.systems->count()) {
    cfg.systems.clear();
    for (const auto& spec : args.systems) {
      cfg.systems.push_back(parse_system_spec(spec, cfg.threshold));
    }
  }
  if (opts.alpha_grid->count()) cfg.analysis.alpha_grid = parse_grid(args.alpha_grid);
  cfg.validate();
  return cfg;
}

PipelineOptions pipeline_options(const CommonArgs& args) {
  PipelineOptions options;
  options.checkpoint_path = args.checkpoint;
  options.quiet = !args.verbose;
  return options;
}

int cmd_split(const ExperimentConfig& cfg) {
  split_corpus(cfg);
  std::printf("wrote %s/{train,validation,test}.jsonl\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_oracle(const ExperimentConfig& cfg) {
  if (cfg.train_path.empty()) throw ConfigError("corpus train path not configured");
  const auto tokenizer = make_default_tokenizer();
  const LoadResult loaded = load_corpus(cfg.train_path, cfg.filter);
  const Vocabulary vocab =
      Vocabulary::build(surface_streams(loaded.articles, *tokenizer, cfg.delimiters),
                        static_cast<std::size_t>(cfg.vocab_size_cap));
  SplitOptions split_options;
  split_options.delimiters = cfg.delimiters;
  split_options.max_positions = cfg.model.max_positions;
  const TokenizedCorpus corpus =
      tokenize_corpus(loaded.articles, *tokenizer, vocab, cfg.filter, split_options);

  std::vector<ExtractiveLabels> labels;
  std::size_t empty = 0;
  for (const auto& doc : corpus.documents) {
    labels.push_back(oracle_labels(doc, cfg.oracle));
    if (labels.back().indices.empty()) ++empty;
  }
  fs::create_directories(cfg.out_dir);
  vocab.save((fs::path(cfg.out_dir) / "vocab.txt").string());
  save_labels((fs::path(cfg.out_dir) / "labels_train.jsonl").string(), labels);
  std::printf("labeled %zu documents (%zu with empty labels, %zu excluded by filter)\n",
              labels.size(), empty, corpus.excluded.size());
  return 0;
}

int cmd_train(const ExperimentConfig& cfg, const PipelineOptions& options) {
  const Session session = prepare_session(cfg, options);
  fs::create_directories(cfg.out_dir);
  const fs::path out_dir(cfg.out_dir);
  session.vocab.save((out_dir / "vocab.txt").string());
  save_checkpoint((out_dir / "checkpoint.bin").string(), session.params, "vocab.txt");
  save_labels((out_dir / "labels_train.jsonl").string(), session.train_labels);
  if (!session.train_report.epoch_losses.empty()) {
    std::printf("trained %d documents, %zu epochs, final loss %.6f\n",
                session.train_report.documents_trained,
                session.train_report.epoch_losses.size(),
                session.train_report.epoch_losses.back());
  }
  std::printf("wrote %s\n", (out_dir / "checkpoint.bin").string().c_str());
  return 0;
}

int cmd_score(const ExperimentConfig& cfg, const PipelineOptions& options) {
  const Session session = prepare_session(cfg, options);
  evaluate_session(cfg, session, options);
  std::printf("wrote score dumps under %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const PipelineOptions& options) {
  const MetricsReport report = run_pipeline(cfg, options);
  std::fputs(report_to_text(report).c_str(), stdout);
  std::printf("wrote %s/report.json\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const PipelineOptions& options) {
  const AnalysisBundle bundle = alpha_sweep(cfg, cfg.analysis.alpha_grid, options);
  std::printf("%8s %12s %12s\n", "alpha", "docF1", "sentF1");
  for (const auto& point : bundle.alpha_sweep) {
    std::printf("%8.3f %12.4f %12.4f\n", point.alpha, point.document_prf.f1,
                point.sentence_prf.f1);
  }
  return 0;
}

int cmd_analyze(const ExperimentConfig& cfg, const PipelineOptions& options) {
  const AnalysisBundle bundle = analyze_similarity(cfg, options);
  std::printf("positive class: %zu sentences, median rawSim %.4f (q1 %.4f, q3 %.4f)\n",
              bundle.positive.count, bundle.positive.median, bundle.positive.q1,
              bundle.positive.q3);
  std::printf("negative class: %zu sentences, median rawSim %.4f (q1 %.4f, q3 %.4f)\n",
              bundle.negative.count, bundle.negative.median, bundle.negative.q1,
              bundle.negative.q3);
  std::printf("wrote %s/analysis.json\n", cfg.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"headline-guided extractive summarization toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* split = app.add_subcommand("split", "partition a corpus file into splits");
  const auto split_opts = add_common(split, args, false);
  auto* oracle = app.add_subcommand("oracle", "generate extractive labels");
  const auto oracle_opts = add_common(oracle, args, false);
  auto* train = app.add_subcommand("train", "train the sentence classifier");
  const auto train_opts = add_common(train, args, false);
  auto* score = app.add_subcommand("score", "dump per-sentence scores");
  const auto score_opts = add_common(score, args, true);
  auto* eval = app.add_subcommand("eval", "full pipeline run with metric report");
  const auto eval_opts = add_common(eval, args, true);
  auto* sweep = app.add_subcommand("sweep-alpha", "evaluate weighted aggregation per alpha");
  const auto sweep_opts = add_common(sweep, args, true);
  auto* analyze = app.add_subcommand("analyze", "similarity distributions and surfaces");
  const auto analyze_opts = add_common(analyze, args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (split->parsed()) return cmd_split(resolve_config(args, split_opts));
    if (oracle->parsed()) return cmd_oracle(resolve_config(args, oracle_opts));
    if (train->parsed()) {
      return cmd_train(resolve_config(args, train_opts), pipeline_options(args));
    }
    if (score->parsed()) {
      return cmd_score(resolve_config(args, score_opts), pipeline_options(args));
    }
    if (eval->parsed()) {
      return cmd_eval(resolve_config(args, eval_opts), pipeline_options(args));
    }
    if (sweep->parsed()) {
      return cmd_sweep(resolve_config(args, sweep_opts), pipeline_options(args));
    }
    if (analyze->parsed()) {
      return cmd_analyze(resolve_config(args, analyze_opts), pipeline_options(args));
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
