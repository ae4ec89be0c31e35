#include "headsum/corpus.h"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "headsum/errors.h"
#include "headsum/text.h"

namespace headsum {

using nlohmann::json;

void CorpusFilter::validate() const {
  if (min_sentences > max_sentences) {
    throw ConfigError("corpus filter: min_sentences > max_sentences");
  }
  if (min_tokens > max_tokens) {
    throw ConfigError("corpus filter: min_tokens > max_tokens");
  }
  if (min_sentences < 1 || min_tokens < 0) {
    throw ConfigError("corpus filter: bounds must be positive");
  }
}

int Document::body_positions() const {
  int n = 0;
  for (const auto& s : sentences) n += static_cast<int>(s.size());
  return n;
}

int Document::body_content_tokens() const {
  int n = 0;
  for (const auto& s : sentences) n += static_cast<int>(s.content_size());
  return n;
}

std::vector<TokenId> Document::sentence_content(int index_1based) const {
  if (index_1based < 1 || index_1based > static_cast<int>(sentences.size())) {
    throw DataError("sentence index out of range: " + std::to_string(index_1based) +
                    " in document " + id);
  }
  return sentences[static_cast<std::size_t>(index_1based - 1)].content_ids();
}

namespace {

std::optional<std::string> normalized_field(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) return std::nullopt;
  std::string value = normalize_text(it->get<std::string>());
  if (value.empty()) return std::nullopt;
  return value;
}

}  // namespace

LoadResult load_corpus(const std::string& path, const CorpusFilter& filter) {
  filter.validate();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);

  LoadResult result;
  std::unordered_set<std::string> seen_bodies;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ++result.stats.total_records;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      ++result.stats.dropped_malformed;
      result.stats.errors.push_back("line " + std::to_string(lineno) +
                                    ": malformed record");
      continue;
    }

    auto id = record.find("id");
    if (id == record.end() || !id->is_string() || id->get<std::string>().empty()) {
      ++result.stats.dropped_missing;
      result.stats.errors.push_back("line " + std::to_string(lineno) +
                                    ": missing or empty 'id'");
      continue;
    }
    RawArticle article;
    article.id = id->get<std::string>();
    if (!seen_ids.insert(article.id).second) {
      ++result.stats.dropped_duplicate;
      result.stats.errors.push_back("line " + std::to_string(lineno) +
                                    ": duplicate id '" + article.id + "'");
      continue;
    }

    const char* missing_key = nullptr;
    if (auto v = normalized_field(record, "headline")) article.headline = std::move(*v);
    else missing_key = "headline";
    if (!missing_key) {
      if (auto v = normalized_field(record, "body")) article.body = std::move(*v);
      else missing_key = "body";
    }
    if (!missing_key) {
      if (auto v = normalized_field(record, "summary")) article.summary = std::move(*v);
      else missing_key = "summary";
    }
    if (missing_key) {
      ++result.stats.dropped_missing;
      result.stats.errors.push_back("line " + std::to_string(lineno) +
                                    ": missing or empty '" + missing_key + "'");
      continue;
    }

    if (!seen_bodies.insert(article.body).second) {
      ++result.stats.dropped_duplicate;
      continue;
    }

    if (auto src = record.find("source"); src != record.end() && src->is_string()) {
      article.source = src->get<std::string>();
    }
    if (auto pre = record.find("body_sentences");
        pre != record.end() && pre->is_array()) {
      for (const auto& item : *pre) {
        if (!item.is_string()) continue;
        std::string sentence = normalize_text(item.get<std::string>());
        if (!sentence.empty()) article.body_sentences.push_back(std::move(sentence));
      }
    }
    result.articles.push_back(std::move(article));
  }
  return result;
}

std::vector<std::string> split_sentences(const std::string& text,
                                         const std::string& delimiters) {
  std::vector<std::string> sentences;
  std::string current;
  for (char c : text) {
    current.push_back(c);
    if (delimiters.find(c) != std::string::npos) {
      std::string trimmed = normalize_text(current);
      if (!trimmed.empty() &&
          trimmed.find_first_not_of(delimiters + ' ') != std::string::npos) {
        sentences.push_back(std::move(trimmed));
      }
      current.clear();
    }
  }
  std::string trimmed = normalize_text(current);
  if (!trimmed.empty() &&
      trimmed.find_first_not_of(delimiters + ' ') != std::string::npos) {
    sentences.push_back(std::move(trimmed));
  }
  return sentences;
}

namespace {

TokenSeq with_markers(TokenSeq content) {
  TokenSeq seq;
  seq.ids.reserve(content.size() + 2);
  seq.surfaces.reserve(content.size() + 2);
  seq.ids.push_back(kClsId);
  seq.surfaces.push_back(kClsSurface);
  for (std::size_t i = 0; i < content.size(); ++i) {
    seq.ids.push_back(content.ids[i]);
    seq.surfaces.push_back(std::move(content.surfaces[i]));
  }
  seq.ids.push_back(kSepId);
  seq.surfaces.push_back(kSepSurface);
  return seq;
}

DocumentBuild excluded(const std::string& diagnostic) {
  DocumentBuild build;
  build.excluded = true;
  build.diagnostic = diagnostic;
  return build;
}

}  // namespace

DocumentBuild split_and_tokenize(const RawArticle& article, const Tokenizer& tokenizer,
                                 const Vocabulary& vocab, const CorpusFilter& filter,
                                 const SplitOptions& options) {
  filter.validate();
  if (options.max_positions < 3) {
    throw ConfigError("max_positions must be at least 3");
  }

  // Pre-split input takes precedence over the delimiter splitter.
  std::vector<std::string> sentence_texts = article.body_sentences;
  if (sentence_texts.empty()) {
    sentence_texts = split_sentences(article.body, options.delimiters);
  }
  if (sentence_texts.empty()) {
    return excluded("sentence splitter produced no sentences");
  }

  Document doc;
  doc.id = article.id;
  doc.source = article.source;
  doc.headline = with_markers(tokenizer.tokenize(article.headline, vocab));

  bool truncated = false;
  int positions = 0;
  for (const auto& text : sentence_texts) {
    TokenSeq content = tokenizer.tokenize(text, vocab);
    if (content.empty()) continue;
    int width = static_cast<int>(content.size()) + 2;
    if (positions + width > options.max_positions) {
      if (doc.sentences.empty()) {
        // A single over-long sentence: keep what fits.
        int keep = options.max_positions - 2;
        content.ids.resize(static_cast<std::size_t>(keep));
        content.surfaces.resize(static_cast<std::size_t>(keep));
        width = keep + 2;
      } else {
        truncated = true;
        break;
      }
    }
    positions += width;
    doc.sentences.push_back(with_markers(std::move(content)));
  }
  if (doc.sentences.empty()) {
    return excluded("no sentence survived tokenization");
  }

  for (const auto& text : split_sentences(article.summary, options.delimiters)) {
    TokenSeq content = tokenizer.tokenize(text, vocab);
    if (!content.empty()) doc.summary_sentences.push_back(std::move(content));
  }
  if (doc.summary_sentences.empty()) {
    // Summary had no delimiter: treat the whole text as one sentence.
    TokenSeq content = tokenizer.tokenize(article.summary, vocab);
    if (!content.empty()) doc.summary_sentences.push_back(std::move(content));
  }

  const int n_sentences = static_cast<int>(doc.sentences.size());
  const int n_tokens = doc.body_content_tokens();
  std::string note = truncated ? " (body truncated to fit max_positions)" : "";
  if (n_sentences < filter.min_sentences) {
    return excluded("sentence count " + std::to_string(n_sentences) +
                    " < min_sentences " + std::to_string(filter.min_sentences) + note);
  }
  if (n_sentences > filter.max_sentences) {
    return excluded("sentence count " + std::to_string(n_sentences) +
                    " > max_sentences " + std::to_string(filter.max_sentences) + note);
  }
  if (n_tokens < filter.min_tokens) {
    return excluded("body token count " + std::to_string(n_tokens) +
                    " < min_tokens " + std::to_string(filter.min_tokens) + note);
  }
  if (n_tokens > filter.max_tokens) {
    return excluded("body token count " + std::to_string(n_tokens) +
                    " > max_tokens " + std::to_string(filter.max_tokens) + note);
  }

  DocumentBuild build;
  build.document = std::move(doc);
  return build;
}

TokenizedCorpus tokenize_corpus(const std::vector<RawArticle>& articles,
                                const Tokenizer& tokenizer, const Vocabulary& vocab,
                                const CorpusFilter& filter, const SplitOptions& options) {
  TokenizedCorpus corpus;
  for (const auto& article : articles) {
    DocumentBuild build = split_and_tokenize(article, tokenizer, vocab, filter, options);
    if (build.document) {
      corpus.documents.push_back(std::move(*build.document));
    } else {
      corpus.excluded.emplace_back(article.id, build.diagnostic);
    }
  }
  return corpus;
}

std::vector<std::vector<std::string>> surface_streams(
    const std::vector<RawArticle>& articles, const Tokenizer& tokenizer,
    const std::string& delimiters) {
  std::vector<std::vector<std::string>> streams;
  streams.reserve(articles.size());
  for (const auto& article : articles) {
    std::vector<std::string> stream = tokenizer.split(article.headline);
    const std::vector<std::string> texts = article.body_sentences.empty()
        ? split_sentences(article.body, delimiters)
        : article.body_sentences;
    for (const auto& text : texts) {
      auto toks = tokenizer.split(text);
      stream.insert(stream.end(), toks.begin(), toks.end());
    }
    auto summary_toks = tokenizer.split(article.summary);
    stream.insert(stream.end(), summary_toks.begin(), summary_toks.end());
    streams.push_back(std::move(stream));
  }
  return streams;
}

}  // namespace headsum
