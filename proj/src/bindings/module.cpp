#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <Eigen/Dense>

#include "headsum/analysis.h"
#include "headsum/config.h"
#include "headsum/metrics.h"
#include "headsum/oracle.h"
#include "headsum/pipeline.h"
#include "headsum/rerank.h"
#include "headsum/text.h"
#include "headsum/tokenizer.h"

namespace py = pybind11;
using namespace headsum;

namespace {

TokenSeq seq_from_ids(const std::vector<TokenId>& ids) {
  TokenSeq seq;
  seq.ids = ids;
  return seq;
}

Document document_from_ids(const std::vector<std::vector<TokenId>>& sentences,
                           const std::vector<std::vector<TokenId>>& summary) {
  Document doc;
  doc.id = "py";
  for (const auto& s : sentences) doc.sentences.push_back(seq_from_ids(s));
  for (const auto& s : summary) doc.summary_sentences.push_back(seq_from_ids(s));
  return doc;
}

AggregationConfig make_agg(const std::string& mode, double alpha, double threshold) {
  AggregationConfig cfg;
  cfg.mode = parse_mode(mode);
  cfg.alpha = alpha;
  cfg.threshold = threshold;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "headline-guided extractive summarization core";

  m.def("normalize_text", &normalize_text, py::arg("text"));
  m.def(
      "split_sentences",
      [](const std::string& text, const std::string& delimiters) {
        return split_sentences(text, delimiters);
      },
      py::arg("text"), py::arg("delimiters") = ".!?\n");
  m.def(
      "tokenize",
      [](const std::string& text) { return make_default_tokenizer()->split(text); },
      py::arg("text"));

  m.def(
      "rouge_n",
      [](const std::vector<TokenId>& pred, const std::vector<TokenId>& target, int n) {
        return rouge_n(ngrams(pred, n), ngrams(target, n));
      },
      py::arg("pred"), py::arg("target"), py::arg("n") = 1);
  m.def(
      "rouge_l",
      [](const std::vector<TokenId>& pred, const std::vector<TokenId>& target) {
        return rouge_l(std::span<const TokenId>(pred), std::span<const TokenId>(target));
      },
      py::arg("pred"), py::arg("target"));
  m.def(
      "bleu",
      [](const std::vector<TokenId>& pred, const std::vector<TokenId>& target, int max_n) {
        return bleu(std::span<const TokenId>(pred), std::span<const TokenId>(target), max_n);
      },
      py::arg("pred"), py::arg("target"), py::arg("max_n") = 4);
  m.def(
      "prf",
      [](long tp, long fp, long fn) {
        const PRF result = prf(tp, fp, fn);
        return py::make_tuple(result.precision, result.recall, result.f1);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"));

  m.def(
      "oracle_indices",
      [](const std::vector<std::vector<TokenId>>& sentences,
         const std::vector<std::vector<TokenId>>& summary, int tau) {
        OracleConfig cfg;
        cfg.tau = tau;
        return oracle_labels(document_from_ids(sentences, summary), cfg).indices;
      },
      py::arg("sentences"), py::arg("summary"), py::arg("tau") = 4);

  m.def(
      "cosine",
      [](const std::vector<double>& u, const std::vector<double>& v) {
        const Eigen::Map<const Eigen::VectorXd> mu(u.data(),
                                                   static_cast<Eigen::Index>(u.size()));
        const Eigen::Map<const Eigen::VectorXd> mv(v.data(),
                                                   static_cast<Eigen::Index>(v.size()));
        return cosine(Eigen::VectorXd(mu), Eigen::VectorXd(mv));
      },
      py::arg("u"), py::arg("v"));
  m.def(
      "aggregate",
      [](double sel, double sim, const std::string& mode, double alpha) {
        return aggregate(sel, sim, make_agg(mode, alpha, 0.5));
      },
      py::arg("sel"), py::arg("sim"), py::arg("mode") = "sa", py::arg("alpha") = 0.5);
  m.def(
      "select",
      [](const std::vector<double>& probs, double threshold) {
        std::vector<int> indices;
        for (std::size_t i = 0; i < probs.size(); ++i) {
          if (probs[i] >= threshold) indices.push_back(static_cast<int>(i) + 1);
        }
        return indices;
      },
      py::arg("probs"), py::arg("threshold") = 0.5);

  m.def(
      "run_pipeline",
      [](const std::string& config_path, const std::string& checkpoint) {
        PipelineOptions options;
        options.checkpoint_path = checkpoint;
        return report_to_json(run_pipeline(load_config(config_path), options));
      },
      py::arg("config_path"), py::arg("checkpoint") = "");
  m.def(
      "alpha_sweep",
      [](const std::string& config_path, const std::vector<double>& grid,
         const std::string& checkpoint) {
        PipelineOptions options;
        options.checkpoint_path = checkpoint;
        const ExperimentConfig cfg = load_config(config_path);
        return analysis_to_json(
            alpha_sweep(cfg, grid.empty() ? cfg.analysis.alpha_grid : grid, options));
      },
      py::arg("config_path"), py::arg("grid") = std::vector<double>{},
      py::arg("checkpoint") = "");
  m.def(
      "analyze",
      [](const std::string& config_path, const std::string& checkpoint) {
        PipelineOptions options;
        options.checkpoint_path = checkpoint;
        return analysis_to_json(analyze_similarity(load_config(config_path), options));
      },
      py::arg("config_path"), py::arg("checkpoint") = "");
}
