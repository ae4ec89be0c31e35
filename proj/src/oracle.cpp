#include "headsum/oracle.h"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "headsum/errors.h"

namespace headsum {

using nlohmann::json;

void OracleConfig::validate() const {
  if (tau < 1) throw ConfigError("oracle tau must be >= 1");
}

ExtractiveLabels oracle_labels(const Document& doc, const OracleConfig& config,
                               OracleTrace* trace) {
  config.validate();
  if (doc.sentences.empty()) {
    throw std::invalid_argument("oracle_labels: document has no sentences: " + doc.id);
  }
  if (doc.summary_sentences.empty()) {
    throw std::invalid_argument("oracle_labels: document has no summary: " + doc.id);
  }

  const int n = static_cast<int>(doc.sentences.size());

  std::vector<NgramBag> uni(static_cast<std::size_t>(n));
  std::vector<NgramBag> bi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    uni[static_cast<std::size_t>(i)] = ngrams(doc.sentences[static_cast<std::size_t>(i)], 1);
    bi[static_cast<std::size_t>(i)] = ngrams(doc.sentences[static_cast<std::size_t>(i)], 2);
  }
  NgramBag abs_uni{1, {}, 0}, abs_bi{2, {}, 0};
  for (const auto& s : doc.summary_sentences) {
    merge_into(abs_uni, ngrams(s, 1));
    merge_into(abs_bi, ngrams(s, 2));
  }

  std::vector<bool> selected(static_cast<std::size_t>(n), false);
  NgramBag sel_uni{1, {}, 0}, sel_bi{2, {}, 0};
  double best_total = 0.0;
  double final_r1 = 0.0, final_r2 = 0.0;
  std::vector<int> picks;

  while (static_cast<int>(picks.size()) < config.tau) {
    int best_index = -1;
    double best_candidate = best_total;
    double best_r1 = 0.0, best_r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      if (selected[static_cast<std::size_t>(i)]) continue;
      NgramBag cand_uni = sel_uni;
      NgramBag cand_bi = sel_bi;
      merge_into(cand_uni, uni[static_cast<std::size_t>(i)]);
      merge_into(cand_bi, bi[static_cast<std::size_t>(i)]);
      double r1 = rouge_n(cand_uni, abs_uni);
      double r2 = rouge_n(cand_bi, abs_bi);
      double total = r1 + r2;
      if (total > best_candidate) {  // strict improvement; ties keep lowest index
        best_candidate = total;
        best_index = i;
        best_r1 = r1;
        best_r2 = r2;
      }
    }
    if (best_index < 0) break;

    selected[static_cast<std::size_t>(best_index)] = true;
    merge_into(sel_uni, uni[static_cast<std::size_t>(best_index)]);
    merge_into(sel_bi, bi[static_cast<std::size_t>(best_index)]);
    best_total = best_candidate;
    final_r1 = best_r1;
    final_r2 = best_r2;
    picks.push_back(best_index + 1);
    if (trace) trace->rounds.push_back(OracleRound{best_index + 1, best_candidate});
  }

  if (trace) {
    trace->final_rouge1 = final_r1;
    trace->final_rouge2 = final_r2;
  }

  ExtractiveLabels labels;
  labels.document_id = doc.id;
  labels.indices = picks;
  std::sort(labels.indices.begin(), labels.indices.end());
  return labels;
}

std::vector<int> label_mask(const ExtractiveLabels& labels, std::size_t n_sentences) {
  std::vector<int> mask(n_sentences, 0);
  for (int idx : labels.indices) {
    if (idx < 1 || static_cast<std::size_t>(idx) > n_sentences) {
      throw DataError("label index " + std::to_string(idx) +
                      " out of range for document " + labels.document_id);
    }
    mask[static_cast<std::size_t>(idx - 1)] = 1;
  }
  return mask;
}

void save_labels(const std::string& path, const std::vector<ExtractiveLabels>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write labels file: " + path);
  for (const auto& l : labels) {
    json record;
    record["documentId"] = l.document_id;
    record["indices"] = l.indices;
    out << record.dump() << '\n';
  }
}

std::vector<ExtractiveLabels> load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open labels file: " + path);
  std::vector<ExtractiveLabels> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.contains("documentId") ||
        !record.contains("indices")) {
      throw DataError("labels file " + path + ": malformed record at line " +
                      std::to_string(lineno));
    }
    ExtractiveLabels l;
    l.document_id = record["documentId"].get<std::string>();
    l.indices = record["indices"].get<std::vector<int>>();
    if (!std::is_sorted(l.indices.begin(), l.indices.end())) {
      throw DataError("labels file " + path + ": indices not ascending at line " +
                      std::to_string(lineno));
    }
    labels.push_back(std::move(l));
  }
  return labels;
}

}  // namespace headsum
