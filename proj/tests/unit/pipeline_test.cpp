#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "headsum/config.h"
#include "headsum/errors.h"
#include "headsum/pipeline.h"
#include "support/synthetic.h"

#ifdef TEST_CLI_PATH
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;
using headsum::ExperimentConfig;
using headsum::MetricsReport;
using headsum::PipelineOptions;

namespace {

ExperimentConfig small_config(const synth::TempDir& dir) {
  auto cfg = headsum::default_config();
  cfg.seed = 17;
  cfg.out_dir = dir.file("out");
  cfg.model.d = 8;
  cfg.model.heads = 2;
  cfg.model.layers = 1;
  cfg.model.max_positions = 128;
  cfg.train.epochs = 1;
  return cfg;
}

ExperimentConfig topic_config(const synth::TempDir& dir) {
  auto cfg = small_config(dir);
  cfg.train_path = dir.file("train.jsonl");
  cfg.test_path = dir.file("test.jsonl");
  synth::write_corpus(cfg.train_path, synth::topic_articles(71, 10, "c"));
  synth::write_corpus(cfg.test_path, synth::topic_articles(72, 6, "x"));
  return cfg;
}

PipelineOptions no_artifacts() {
  PipelineOptions options;
  options.write_artifacts = false;
  return options;
}

}  // namespace

TEST_CASE("the pipeline reports every requested baseline and system") {
  synth::TempDir dir("pipe_rows");
  auto cfg = topic_config(dir);
  auto report = headsum::run_pipeline(cfg);

  CHECK(report.split == "test");
  CHECK(report.documents == 6);
  REQUIRE_FALSE(report.sources.empty());
  CHECK(report.sources[0].source == "all");

  std::vector<std::string> names;
  for (const auto& row : report.sources[0].rows) names.push_back(row.system);
  CHECK(names == std::vector<std::string>{"oracle", "lead-2", "hl", "hl-cos",
                                          "sel-only", "hm", "sa"});

  // The oracle selections reproduce their own reference exactly.
  const auto& oracle = headsum::find_row(report, "oracle");
  CHECK(oracle.extractive.rouge1 == doctest::Approx(1.0));
  CHECK(oracle.extractive.rouge2 == doctest::Approx(1.0));
  CHECK(oracle.extractive.rouge_l == doctest::Approx(1.0));
  CHECK(oracle.extractive.bleu == doctest::Approx(1.0));
  CHECK_FALSE(oracle.has_prf);
  CHECK_FALSE(headsum::find_row(report, "hl").has_prf);
  CHECK(headsum::find_row(report, "lead-2").has_prf);
  CHECK(headsum::find_row(report, "sa").has_prf);

  for (const auto& row : report.sources[0].rows) {
    for (const auto* cell : {&row.abstractive, &row.extractive}) {
      CHECK(cell->rouge1 >= 0.0);
      CHECK(cell->rouge1 <= 1.0);
      CHECK(cell->bleu >= 0.0);
      CHECK(cell->bleu <= 1.0);
    }
  }

  // Fresh runs record per-epoch losses.
  CHECK(report.epoch_losses.size() == 1);

  // Artifacts land under the output directory.
  const fs::path out(cfg.out_dir);
  for (const char* name : {"vocab.txt", "checkpoint.bin", "labels_train.jsonl",
                           "labels_test.jsonl", "report.json", "report.txt",
                           "scores_sa.jsonl", "scores_hm.jsonl",
                           "scores_sel-only.jsonl"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
}

TEST_CASE("sources group rows by article tag") {
  synth::TempDir dir("pipe_sources");
  auto cfg = topic_config(dir);
  auto report = headsum::run_pipeline(cfg, no_artifacts());

  REQUIRE(report.sources.size() == 3);
  CHECK(report.sources[0].source == "all");
  CHECK(report.sources[1].source == "daily");
  CHECK(report.sources[2].source == "weekly");
  CHECK(report.sources[1].articles + report.sources[2].articles ==
        report.sources[0].articles);
  for (const auto& source : report.sources) {
    CHECK(source.rows.size() == report.sources[0].rows.size());
  }
}

TEST_CASE("a model-free request skips training entirely") {
  synth::TempDir dir("pipe_lead");
  auto cfg = topic_config(dir);
  cfg.systems.clear();
  cfg.baselines = {"lead-2"};
  auto report = headsum::run_pipeline(cfg, no_artifacts());
  REQUIRE(report.sources[0].rows.size() == 1);
  CHECK(report.sources[0].rows[0].system == "lead-2");
  CHECK(report.epoch_losses.empty());
}

TEST_CASE("documents without extractive references are counted out") {
  synth::TempDir dir("pipe_empty");
  auto docs = synth::topic_articles(73, 4, "c");
  synth::RawDoc stray;
  stray.id = "stray-1";
  stray.source = "daily";
  stray.headline = "nothing shared here";
  stray.body = "alpha beta gamma. delta epsilon zeta. eta theta iota.";
  // No trailing period: the period is a token and would overlap every body
  // sentence, giving the oracle a nonzero first-round gain.
  stray.summary = "omicron sigma upsilon";
  docs.push_back(stray);

  auto cfg = small_config(dir);
  cfg.train_path = dir.file("all.jsonl");
  synth::write_corpus(cfg.train_path, docs);
  cfg.systems.clear();
  cfg.baselines = {"oracle", "lead-2"};

  auto report = headsum::run_pipeline(cfg, no_artifacts());
  CHECK(report.split == "train");
  CHECK(report.documents == 5);
  CHECK(report.sources[0].extractive_articles == 4);
  bool noted = false;
  for (const auto& [id, reason] : report.exclusions) {
    if (id == "stray-1" && reason.find("empty oracle labels") != std::string::npos) {
      noted = true;
    }
  }
  CHECK(noted);
}

TEST_CASE("a reused checkpoint reproduces the fresh report") {
  synth::TempDir dir("pipe_ckpt");
  auto cfg = topic_config(dir);
  cfg.train.epochs = 2;
  auto fresh = headsum::run_pipeline(cfg);

  PipelineOptions reuse;
  reuse.checkpoint_path = (fs::path(cfg.out_dir) / "checkpoint.bin").string();
  reuse.write_artifacts = false;
  auto cfg2 = cfg;
  cfg2.out_dir = dir.file("out2");
  auto loaded = headsum::run_pipeline(cfg2, reuse);

  CHECK(loaded.epoch_losses.empty());
  REQUIRE(loaded.sources.size() == fresh.sources.size());
  for (std::size_t s = 0; s < fresh.sources.size(); ++s) {
    const auto& fs_ = fresh.sources[s];
    const auto& ls = loaded.sources[s];
    CHECK(fs_.source == ls.source);
    CHECK(fs_.articles == ls.articles);
    REQUIRE(fs_.rows.size() == ls.rows.size());
    for (std::size_t r = 0; r < fs_.rows.size(); ++r) {
      CHECK(fs_.rows[r].system == ls.rows[r].system);
      CHECK(fs_.rows[r].abstractive.rouge1 == ls.rows[r].abstractive.rouge1);
      CHECK(fs_.rows[r].abstractive.bleu == ls.rows[r].abstractive.bleu);
      CHECK(fs_.rows[r].extractive.rouge2 == ls.rows[r].extractive.rouge2);
      CHECK(fs_.rows[r].sentence_prf.f1 == ls.rows[r].sentence_prf.f1);
    }
  }

  // The checkpoint refuses configs it cannot serve.
  auto wrong = cfg2;
  wrong.model.d = 16;
  CHECK_THROWS_AS(headsum::run_pipeline(wrong, reuse), headsum::ConfigError);
}

TEST_CASE("identical configurations yield identical reports") {
  synth::TempDir dir("pipe_repro");
  auto cfg = topic_config(dir);
  auto first = headsum::run_pipeline(cfg, no_artifacts());
  auto second = headsum::run_pipeline(cfg, no_artifacts());
  CHECK(headsum::report_to_json(first) == headsum::report_to_json(second));
}

TEST_CASE("the evaluation split prefers test, then validation, then train") {
  synth::TempDir dir("pipe_split_pref");
  auto cfg = small_config(dir);
  cfg.systems.clear();
  cfg.baselines = {"lead-2"};
  cfg.train_path = dir.file("train.jsonl");
  synth::write_corpus(cfg.train_path, synth::topic_articles(74, 4, "c"));

  auto report = headsum::run_pipeline(cfg, no_artifacts());
  CHECK(report.split == "train");

  cfg.validation_path = dir.file("validation.jsonl");
  synth::write_corpus(cfg.validation_path, synth::topic_articles(75, 3, "v"));
  report = headsum::run_pipeline(cfg, no_artifacts());
  CHECK(report.split == "validation");
  CHECK(report.documents == 3);

  cfg.test_path = dir.file("test.jsonl");
  synth::write_corpus(cfg.test_path, synth::topic_articles(76, 2, "x"));
  report = headsum::run_pipeline(cfg, no_artifacts());
  CHECK(report.split == "test");
  CHECK(report.documents == 2);
}

TEST_CASE("report json carries the full table") {
  synth::TempDir dir("pipe_json");
  auto cfg = topic_config(dir);
  auto report = headsum::run_pipeline(cfg, no_artifacts());

  auto root = nlohmann::json::parse(headsum::report_to_json(report));
  CHECK(root.at("split") == "test");
  CHECK(root.at("documents") == 6);
  REQUIRE(root.at("sources").is_array());
  const auto& all = root.at("sources").at(0);
  CHECK(all.at("source") == "all");
  CHECK(all.at("articles") == 6);
  const auto& first_row = all.at("rows").at(0);
  CHECK(first_row.at("system") == "oracle");
  CHECK(first_row.at("abstractive").contains("rouge1"));
  CHECK(first_row.at("extractive").contains("bleu"));
  CHECK_FALSE(first_row.contains("documentPrf"));
  const auto& sa_row = all.at("rows").back();
  CHECK(sa_row.at("system") == "sa");
  CHECK(sa_row.contains("documentPrf"));
  CHECK(sa_row.at("sentencePrf").contains("f1"));
  CHECK(root.contains("epochLosses"));

  auto text = headsum::report_to_text(report);
  CHECK(text.find("source: all") != std::string::npos);
  CHECK(text.find("sel-only") != std::string::npos);
  CHECK(text.find("docF1") != std::string::npos);
}

TEST_CASE("find_row rejects unknown systems and sources") {
  synth::TempDir dir("pipe_find");
  auto cfg = topic_config(dir);
  cfg.systems.clear();
  cfg.baselines = {"lead-2"};
  auto report = headsum::run_pipeline(cfg, no_artifacts());
  CHECK_NOTHROW(headsum::find_row(report, "lead-2"));
  CHECK_THROWS_AS(headsum::find_row(report, "sa"), std::invalid_argument);
  CHECK_THROWS_AS(headsum::find_row(report, "lead-2", "nosuch"),
                  std::invalid_argument);
}

TEST_CASE("token extraction helpers flatten content tokens") {
  headsum::Document doc;
  doc.id = "tok";
  doc.sentences.push_back(synth::wrap({3, 4}));
  doc.sentences.push_back(synth::wrap({5, 6, 7}));
  doc.summary_sentences.push_back(synth::bare({3, 4}));
  doc.summary_sentences.push_back(synth::bare({9}));

  CHECK(headsum::selected_tokens(doc, {1, 2}) ==
        std::vector<headsum::TokenId>{3, 4, 5, 6, 7});
  CHECK(headsum::selected_tokens(doc, {2}) ==
        std::vector<headsum::TokenId>{5, 6, 7});
  CHECK(headsum::selected_tokens(doc, {}).empty());
  CHECK_THROWS_AS(headsum::selected_tokens(doc, {3}), headsum::DataError);
  CHECK(headsum::abstractive_tokens(doc) ==
        std::vector<headsum::TokenId>{3, 4, 9});
}

TEST_CASE("selection counts compare index sets") {
  auto counts = headsum::selection_counts({1, 3}, {1, 2});
  CHECK(counts.tp == 1);
  CHECK(counts.fp == 1);
  CHECK(counts.fn == 1);
  counts = headsum::selection_counts({}, {});
  CHECK(counts.tp == 0);
  CHECK(counts.fp == 0);
  CHECK(counts.fn == 0);
}

TEST_CASE("split_corpus partitions lines by the configured fractions") {
  synth::TempDir dir("pipe_split");
  const auto input = dir.file("all.jsonl");
  {
    std::ofstream out(input);
    for (int i = 0; i < 10; ++i) {
      out << R"({"id": "d)" << i << R"("})" << "\n";
    }
  }
  auto cfg = headsum::default_config();
  cfg.seed = 5;
  cfg.out_dir = dir.file("splits");
  cfg.split_input = input;
  cfg.split_fractions = {0.5, 0.25, 0.25};
  headsum::split_corpus(cfg);

  auto count_lines = [](const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    int n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
  };
  const fs::path out(cfg.out_dir);
  CHECK(count_lines((out / "train.jsonl").string()) == 5);
  CHECK(count_lines((out / "validation.jsonl").string()) == 3);
  CHECK(count_lines((out / "test.jsonl").string()) == 2);

  // Same seed, same partition.
  auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  const auto before = slurp(out / "train.jsonl");
  headsum::split_corpus(cfg);
  CHECK(slurp(out / "train.jsonl") == before);

  cfg.split_input = dir.file("missing.jsonl");
  CHECK_THROWS_AS(headsum::split_corpus(cfg), headsum::DataError);
}

#ifdef TEST_CLI_PATH

namespace {

int run_cli(const std::string& args) {
  const std::string command =
      std::string(TEST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("the command line tool maps failures to exit codes") {
  synth::TempDir dir("pipe_cli");
  const auto train = dir.file("train.jsonl");
  synth::write_corpus(train, synth::topic_articles(77, 4, "c"));

  const auto good = dir.file("good.json");
  {
    std::ofstream out(good);
    out << R"({"outDir": ")" << dir.file("out") << R"(",
               "corpus": {"train": ")" << train << R"("},
               "systems": [], "baselines": ["lead-2"]})";
  }
  CHECK(run_cli("eval --config " + good) == 0);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate --config " + good) == 1);

  const auto bad_json = dir.file("bad.json");
  {
    std::ofstream out(bad_json);
    out << "{ not json";
  }
  CHECK(run_cli("eval --config " + bad_json) == 1);

  const auto missing_corpus = dir.file("missing.json");
  {
    std::ofstream out(missing_corpus);
    out << R"({"outDir": ")" << dir.file("out3") << R"(",
               "corpus": {"train": ")" << dir.file("nope.jsonl") << R"("},
               "systems": [], "baselines": ["lead-2"]})";
  }
  CHECK(run_cli("eval --config " + missing_corpus) == 2);
}

#endif  // TEST_CLI_PATH
