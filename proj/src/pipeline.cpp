#include "headsum/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "headsum/checkpoint.h"
#include "headsum/encoder.h"
#include "headsum/errors.h"
#include "headsum/rng.h"
#include "headsum/tokenizer.h"

namespace headsum {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<TokenId> selected_tokens(const Document& doc, const std::vector<int>& indices) {
  std::vector<TokenId> out;
  for (int idx : indices) {
    const auto content = doc.sentence_content(idx);
    out.insert(out.end(), content.begin(), content.end());
  }
  return out;
}

std::vector<TokenId> abstractive_tokens(const Document& doc) {
  std::vector<TokenId> out;
  for (const auto& sentence : doc.summary_sentences) {
    for (TokenId id : sentence.ids) {
      if (!is_marker(id)) out.push_back(id);
    }
  }
  return out;
}

PrfCounts selection_counts(const std::vector<int>& selected,
                           const std::vector<int>& labeled) {
  const std::unordered_set<int> labels(labeled.begin(), labeled.end());
  PrfCounts counts;
  for (int idx : selected) {
    if (labels.count(idx)) {
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  counts.fn = static_cast<long>(labeled.size()) - counts.tp;
  return counts;
}

namespace {

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path not configured");
  if (!fs::exists(path)) throw DataError(what + " file not found: " + path);
}

void note(const PipelineOptions& options, const std::string& line) {
  if (!options.quiet) std::fprintf(stderr, "%s\n", line.c_str());
}

std::vector<ExtractiveLabels> label_corpus(const std::vector<Document>& docs,
                                           const OracleConfig& cfg) {
  std::vector<ExtractiveLabels> labels;
  labels.reserve(docs.size());
  for (const auto& doc : docs) labels.push_back(oracle_labels(doc, cfg));
  return labels;
}

TokenizedCorpus ingest_articles(const std::vector<RawArticle>& articles,
                                const ExperimentConfig& cfg, const Tokenizer& tokenizer,
                                const Vocabulary& vocab, Session& session) {
  SplitOptions split_options;
  split_options.delimiters = cfg.delimiters;
  split_options.max_positions = cfg.model.max_positions;
  TokenizedCorpus corpus =
      tokenize_corpus(articles, tokenizer, vocab, cfg.filter, split_options);
  for (const auto& excluded : corpus.excluded) session.exclusions.push_back(excluded);
  return corpus;
}

LoadResult load_stage(const std::string& path, const ExperimentConfig& cfg,
                      Session& session) {
  LoadResult loaded = load_corpus(path, cfg.filter);
  for (const auto& err : loaded.stats.errors) {
    session.exclusions.emplace_back("<load:" + path + ">", err);
  }
  return loaded;
}

// Lead-n, hl and oracle rows never consult the encoder, so a config
// requesting only those runs without a training stage.
bool config_needs_model(const ExperimentConfig& cfg) {
  if (!cfg.systems.empty()) return true;
  for (const auto& baseline : cfg.baselines) {
    if (baseline == "hl-cos") return true;
  }
  return false;
}

}  // namespace

Session prepare_session(const ExperimentConfig& cfg, const PipelineOptions& options) {
  cfg.validate();
  Session session;
  const auto tokenizer = make_default_tokenizer();
  const bool reuse = !options.checkpoint_path.empty();

  std::string eval_path = cfg.train_path;
  session.eval_split = "train";
  if (!cfg.test_path.empty()) {
    eval_path = cfg.test_path;
    session.eval_split = "test";
  } else if (!cfg.validation_path.empty()) {
    eval_path = cfg.validation_path;
    session.eval_split = "validation";
  }

  if (reuse) {
    note(options, "[checkpoint] loading " + options.checkpoint_path);
    Checkpoint ckpt = load_checkpoint(options.checkpoint_path);
    fs::path vocab_path = ckpt.vocab_ref;
    if (vocab_path.is_relative()) {
      vocab_path = fs::path(options.checkpoint_path).parent_path() / vocab_path;
    }
    session.vocab = Vocabulary::load(vocab_path.string());
    if (static_cast<int>(session.vocab.size()) != ckpt.params.config.vocab_size) {
      throw ConfigError("checkpoint incompatible: vocabulary has " +
                        std::to_string(session.vocab.size()) + " entries, config expects " +
                        std::to_string(ckpt.params.config.vocab_size));
    }
    ModelConfig expected = cfg.model;
    expected.vocab_size = ckpt.params.config.vocab_size;
    expected.ln_epsilon = ckpt.params.config.ln_epsilon;
    if (!ckpt.params.config.compatible_with(expected)) {
      throw ConfigError("checkpoint incompatible with configured model dimensions");
    }
    session.params = std::move(ckpt.params);
  } else {
    require_file(cfg.train_path, "train corpus");
    note(options, "[ingest] " + cfg.train_path);
    LoadResult loaded = load_stage(cfg.train_path, cfg, session);
    session.vocab =
        Vocabulary::build(surface_streams(loaded.articles, *tokenizer, cfg.delimiters),
                          static_cast<std::size_t>(cfg.vocab_size_cap));
    TokenizedCorpus train_corpus =
        ingest_articles(loaded.articles, cfg, *tokenizer, session.vocab, session);
    session.train_docs = std::move(train_corpus.documents);
    if (session.train_docs.empty()) {
      throw DataError("train corpus admitted no documents: " + cfg.train_path);
    }
    note(options, "[oracle] labeling " + std::to_string(session.train_docs.size()) +
                      " documents");
    session.train_labels = label_corpus(session.train_docs, cfg.oracle);

    ModelConfig model_config = cfg.model;
    model_config.vocab_size = static_cast<int>(session.vocab.size());
    model_config.seed = cfg.seed;
    TrainConfig train_config = cfg.train;
    if (!config_needs_model(cfg)) train_config.epochs = 0;
    note(options, "[train] " + std::to_string(train_config.epochs) + " epochs");
    EpochCallback on_epoch = nullptr;
    if (!options.quiet) {
      on_epoch = [](int epoch, double loss) {
        std::fprintf(stderr, "[train] epoch %d loss %.6f\n", epoch, loss);
      };
    }
    session.params = train(session.train_docs, session.train_labels, model_config,
                           train_config, &session.train_report, on_epoch);
    for (const auto& excluded : session.train_report.excluded) {
      session.exclusions.push_back(excluded);
    }
  }

  if (session.eval_split == "train" && !reuse) {
    session.eval_docs = session.train_docs;
    session.eval_labels = session.train_labels;
  } else {
    require_file(eval_path, session.eval_split + " corpus");
    note(options, "[ingest] " + eval_path);
    LoadResult loaded = load_stage(eval_path, cfg, session);
    TokenizedCorpus eval_corpus =
        ingest_articles(loaded.articles, cfg, *tokenizer, session.vocab, session);
    session.eval_docs = std::move(eval_corpus.documents);
    if (session.eval_docs.empty()) {
      throw DataError("evaluation corpus admitted no documents: " + eval_path);
    }
    session.eval_labels = label_corpus(session.eval_docs, cfg.oracle);
  }
  return session;
}

namespace {

struct RowSpec {
  enum class Kind { kOracle, kLead, kHeadline, kAggregation };
  std::string name;
  Kind kind = Kind::kAggregation;
  int lead = 0;
  AggregationConfig agg;
};

std::vector<RowSpec> build_rows(const ExperimentConfig& cfg) {
  std::vector<RowSpec> rows;
  for (const auto& baseline : cfg.baselines) {
    RowSpec row;
    row.name = baseline;
    if (baseline == "oracle") {
      row.kind = RowSpec::Kind::kOracle;
    } else if (baseline == "hl") {
      row.kind = RowSpec::Kind::kHeadline;
    } else if (baseline == "hl-cos") {
      row.kind = RowSpec::Kind::kAggregation;
      row.agg.mode = AggregationMode::kSimilarityOnly;
      row.agg.threshold = cfg.threshold;
    } else {
      row.kind = RowSpec::Kind::kLead;
      row.lead = lead_baseline_count(baseline);
    }
    rows.push_back(row);
  }
  for (const auto& system : cfg.systems) {
    RowSpec row;
    row.kind = RowSpec::Kind::kAggregation;
    row.agg = system;
    row.name = system.label();
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("no systems or baselines requested");
  return rows;
}

struct DocEval {
  const Document* doc = nullptr;
  std::vector<int> labels;
  std::vector<TokenId> abs_ref;
  std::vector<TokenId> ext_ref;  // empty when labels are empty
  BaseScores base;               // filled only when aggregation rows exist
};

struct RowMetrics {
  MetricCell abstractive;
  MetricCell extractive;
  std::vector<PrfCounts> counts;
};

void accumulate(MetricCell& cell, const std::vector<TokenId>& pred,
                const std::vector<TokenId>& ref) {
  cell.rouge1 += rouge_n(ngrams(pred, 1), ngrams(ref, 1));
  cell.rouge2 += rouge_n(ngrams(pred, 2), ngrams(ref, 2));
  cell.rouge_l += rouge_l(pred, ref);
  cell.bleu += bleu(pred, ref);
}

void divide(MetricCell& cell, int n) {
  if (n == 0) return;
  cell.rouge1 /= n;
  cell.rouge2 /= n;
  cell.rouge_l /= n;
  cell.bleu /= n;
}

std::vector<int> row_selection(const RowSpec& row, const DocEval& doc) {
  switch (row.kind) {
    case RowSpec::Kind::kOracle:
      return doc.labels;
    case RowSpec::Kind::kLead: {
      SummarySelection lead = lead_n(*doc.doc, row.lead);
      return lead.indices;
    }
    case RowSpec::Kind::kAggregation: {
      const SentenceScores scores = apply_aggregation(doc.base, row.agg);
      return select_summary(scores, row.agg.threshold).indices;
    }
    case RowSpec::Kind::kHeadline:
      return {};
  }
  return {};
}

SystemReport finish_row(const RowSpec& row, RowMetrics& acc, int articles,
                        int extractive_articles) {
  SystemReport report;
  report.system = row.name;
  divide(acc.abstractive, articles);
  divide(acc.extractive, extractive_articles);
  report.abstractive = acc.abstractive;
  report.extractive = acc.extractive;
  report.has_prf =
      row.kind == RowSpec::Kind::kLead || row.kind == RowSpec::Kind::kAggregation;
  if (report.has_prf && !acc.counts.empty()) {
    report.document_prf = aggregate_prf(acc.counts, PrfMode::kDocument);
    report.sentence_prf = aggregate_prf(acc.counts, PrfMode::kSentence);
  }
  return report;
}

}  // namespace

MetricsReport evaluate_session(const ExperimentConfig& cfg, const Session& session,
                               const PipelineOptions& options) {
  const std::vector<RowSpec> rows = build_rows(cfg);
  const bool needs_model = std::any_of(rows.begin(), rows.end(), [](const RowSpec& r) {
    return r.kind == RowSpec::Kind::kAggregation;
  });

  note(options, "[score] " + std::to_string(session.eval_docs.size()) + " documents");
  std::vector<DocEval> docs;
  docs.reserve(session.eval_docs.size());
  for (std::size_t i = 0; i < session.eval_docs.size(); ++i) {
    DocEval d;
    d.doc = &session.eval_docs[i];
    d.labels = session.eval_labels[i].indices;
    d.abs_ref = abstractive_tokens(*d.doc);
    d.ext_ref = selected_tokens(*d.doc, d.labels);
    if (needs_model) d.base = base_scores(*d.doc, session.params);
    docs.push_back(std::move(d));
  }

  std::map<std::string, std::vector<const DocEval*>> groups;
  std::vector<const DocEval*> all;
  for (const auto& d : docs) {
    all.push_back(&d);
    if (!d.doc->source.empty()) groups[d.doc->source].push_back(&d);
  }

  MetricsReport report;
  report.split = session.eval_split;
  report.documents = static_cast<int>(docs.size());
  report.exclusions = session.exclusions;
  report.epoch_losses = session.train_report.epoch_losses;
  for (const auto& doc : docs) {
    if (doc.labels.empty()) {
      report.exclusions.emplace_back(doc.doc->id,
                                     "empty oracle labels: no extractive reference");
    }
  }

  std::vector<std::pair<std::string, std::vector<const DocEval*>>> sources;
  sources.emplace_back("all", all);
  for (const auto& [tag, members] : groups) sources.emplace_back(tag, members);

  for (const auto& [tag, members] : sources) {
    SourceReport source_report;
    source_report.source = tag;
    source_report.articles = static_cast<int>(members.size());
    for (const auto* d : members) {
      if (!d->labels.empty()) ++source_report.extractive_articles;
    }
    for (const auto& row : rows) {
      RowMetrics acc;
      for (const auto* d : members) {
        const std::vector<int> selection = row_selection(row, *d);
        const std::vector<TokenId> pred = row.kind == RowSpec::Kind::kHeadline
                                              ? headline_as_summary(*d->doc)
                                              : selected_tokens(*d->doc, selection);
        accumulate(acc.abstractive, pred, d->abs_ref);
        if (!d->labels.empty()) {
          accumulate(acc.extractive, pred, d->ext_ref);
          if (row.kind == RowSpec::Kind::kLead ||
              row.kind == RowSpec::Kind::kAggregation) {
            acc.counts.push_back(selection_counts(selection, d->labels));
          }
        }
      }
      source_report.rows.push_back(finish_row(row, acc, source_report.articles,
                                              source_report.extractive_articles));
    }
    report.sources.push_back(std::move(source_report));
  }

  if (options.write_artifacts) {
    fs::create_directories(cfg.out_dir);
    for (const auto& row : rows) {
      if (row.kind != RowSpec::Kind::kAggregation) continue;
      const fs::path path = fs::path(cfg.out_dir) / ("scores_" + row.name + ".jsonl");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot write score dump: " + path.string());
      for (const auto& d : docs) {
        const SentenceScores scores = apply_aggregation(d.base, row.agg);
        const std::unordered_set<int> labeled(d.labels.begin(), d.labels.end());
        for (const auto& s : scores.per_sentence) {
          json record{{"documentId", d.doc->id},          {"index", s.index},
                      {"selScore", s.sel_score},          {"rawSim", s.raw_sim},
                      {"prob", s.prob},                   {"selected", s.prob >= row.agg.threshold},
                      {"label", labeled.count(s.index) ? 1 : 0}};
          out << record.dump() << '\n';
        }
      }
    }
  }
  return report;
}

MetricsReport run_pipeline(const ExperimentConfig& cfg, const PipelineOptions& options) {
  const Session session = prepare_session(cfg, options);
  MetricsReport report = evaluate_session(cfg, session, options);

  if (options.write_artifacts) {
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    session.vocab.save((out_dir / "vocab.txt").string());
    if (options.checkpoint_path.empty()) {
      save_checkpoint((out_dir / "checkpoint.bin").string(), session.params, "vocab.txt");
      save_labels((out_dir / "labels_train.jsonl").string(), session.train_labels);
    }
    save_labels((out_dir / ("labels_" + session.eval_split + ".jsonl")).string(),
                session.eval_labels);
    std::ofstream json_out(out_dir / "report.json", std::ios::binary | std::ios::trunc);
    json_out << report_to_json(report);
    std::ofstream text_out(out_dir / "report.txt", std::ios::binary | std::ios::trunc);
    text_out << report_to_text(report);
    if (!json_out || !text_out) throw DataError("cannot write report under " + cfg.out_dir);
  }
  return report;
}

void split_corpus(const ExperimentConfig& cfg) {
  require_file(cfg.split_input, "split input");
  std::ifstream in(cfg.split_input, std::ios::binary);
  if (!in) throw DataError("cannot open split input: " + cfg.split_input);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw DataError("split input is empty: " + cfg.split_input);

  std::mt19937_64 g(cfg.seed);
  rng::shuffle(lines, g);

  const auto n = static_cast<double>(lines.size());
  std::size_t n_train = static_cast<std::size_t>(cfg.split_fractions[0] * n + 0.5);
  std::size_t n_validation = static_cast<std::size_t>(cfg.split_fractions[1] * n + 0.5);
  n_train = std::min(n_train, lines.size());
  n_validation = std::min(n_validation, lines.size() - n_train);

  fs::create_directories(cfg.out_dir);
  const fs::path out_dir(cfg.out_dir);
  const struct {
    const char* name;
    std::size_t begin, end;
  } parts[] = {
      {"train.jsonl", 0, n_train},
      {"validation.jsonl", n_train, n_train + n_validation},
      {"test.jsonl", n_train + n_validation, lines.size()},
  };
  for (const auto& part : parts) {
    std::ofstream out(out_dir / part.name, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(std::string("cannot write split file: ") + part.name);
    for (std::size_t i = part.begin; i < part.end; ++i) out << lines[i] << '\n';
  }
}

const SystemReport& find_row(const MetricsReport& report, const std::string& system,
                             const std::string& source) {
  for (const auto& source_report : report.sources) {
    if (source_report.source != source) continue;
    for (const auto& row : source_report.rows) {
      if (row.system == system) return row;
    }
  }
  throw std::invalid_argument("report has no row " + system + " under source " + source);
}

namespace {

ordered_json cell_to_json(const MetricCell& cell) {
  return ordered_json{{"rouge1", cell.rouge1},
                      {"rouge2", cell.rouge2},
                      {"rougeL", cell.rouge_l},
                      {"bleu", cell.bleu}};
}

ordered_json prf_to_json(const PRF& prf) {
  return ordered_json{
      {"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
  ordered_json root;
  root["split"] = report.split;
  root["documents"] = report.documents;
  root["sources"] = ordered_json::array();
  for (const auto& source : report.sources) {
    ordered_json source_json;
    source_json["source"] = source.source;
    source_json["articles"] = source.articles;
    source_json["extractiveArticles"] = source.extractive_articles;
    source_json["rows"] = ordered_json::array();
    for (const auto& row : source.rows) {
      ordered_json row_json;
      row_json["system"] = row.system;
      row_json["abstractive"] = cell_to_json(row.abstractive);
      row_json["extractive"] = cell_to_json(row.extractive);
      if (row.has_prf) {
        row_json["documentPrf"] = prf_to_json(row.document_prf);
        row_json["sentencePrf"] = prf_to_json(row.sentence_prf);
      }
      source_json["rows"].push_back(std::move(row_json));
    }
    root["sources"].push_back(std::move(source_json));
  }
  root["exclusions"] = ordered_json::array();
  for (const auto& [id, reason] : report.exclusions) {
    root["exclusions"].push_back(ordered_json{{"id", id}, {"reason", reason}});
  }
  if (!report.epoch_losses.empty()) root["epochLosses"] = report.epoch_losses;
  return root.dump(2) + "\n";
}

std::string report_to_text(const MetricsReport& report) {
  std::ostringstream out;
  char buffer[256];
  for (const auto& source : report.sources) {
    out << "source: " << source.source << " (" << source.articles << " articles, "
        << source.extractive_articles << " with extractive reference)\n\n";
    std::snprintf(buffer, sizeof buffer, "%-16s %8s %8s %8s %8s %8s %8s %8s %8s\n",
                  "system", "absR1", "absR2", "absRL", "absBLEU", "extR1", "extR2",
                  "extRL", "extBLEU");
    out << buffer;
    for (const auto& row : source.rows) {
      std::snprintf(buffer, sizeof buffer,
                    "%-16s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n",
                    row.system.c_str(), row.abstractive.rouge1, row.abstractive.rouge2,
                    row.abstractive.rouge_l, row.abstractive.bleu, row.extractive.rouge1,
                    row.extractive.rouge2, row.extractive.rouge_l, row.extractive.bleu);
      out << buffer;
    }
    out << '\n';
    std::snprintf(buffer, sizeof buffer, "%-16s %8s %8s %8s %8s %8s %8s\n", "system",
                  "docP", "docR", "docF1", "sentP", "sentR", "sentF1");
    out << buffer;
    for (const auto& row : source.rows) {
      if (!row.has_prf) continue;
      std::snprintf(buffer, sizeof buffer, "%-16s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n",
                    row.system.c_str(), row.document_prf.precision, row.document_prf.recall,
                    row.document_prf.f1, row.sentence_prf.precision,
                    row.sentence_prf.recall, row.sentence_prf.f1);
      out << buffer;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace headsum
