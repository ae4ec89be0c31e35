#pragma once

#include <optional>
#include <string>
#include <vector>

#include "headsum/tokenizer.h"
#include "headsum/tokens.h"
#include "headsum/vocab.h"

namespace headsum {

/// One news item as read from a corpus file, text already normalized.
struct RawArticle {
  std::string id;
  std::string headline;
  std::string body;
  std::string summary;
  std::string source;                       // optional outlet tag, may be empty
  std::vector<std::string> body_sentences;  // optional pre-split body
};

/// Article-level admission bounds. Sentence counts bound the sentence list,
/// token counts bound the total content tokens of the body (markers
/// excluded).
struct CorpusFilter {
  int min_sentences = 3;
  int max_sentences = 30;
  int min_tokens = 1;
  int max_tokens = 512;

  void validate() const;
};

/// A tokenized article ready for the encoder.
struct Document {
  std::string id;
  std::string source;
  TokenSeq headline;                    // <cls> ... <sep>
  std::vector<TokenSeq> sentences;      // each <cls> ... <sep>
  std::vector<TokenSeq> summary_sentences;  // reference, no markers

  int body_positions() const;           // occupied encoder positions
  int body_content_tokens() const;      // marker-free token count
  std::vector<TokenId> sentence_content(int index_1based) const;
};

struct LoadStats {
  std::size_t total_records = 0;
  std::size_t dropped_missing = 0;    // required field absent or empty
  std::size_t dropped_duplicate = 0;  // duplicate body or id, first kept
  std::size_t dropped_malformed = 0;  // unparseable record
  std::vector<std::string> errors;    // per-record diagnostics, non-fatal

  std::size_t dropped() const {
    return dropped_missing + dropped_duplicate + dropped_malformed;
  }
};

struct LoadResult {
  std::vector<RawArticle> articles;
  LoadStats stats;
};

/// Reads a line-delimited JSON corpus file. Field text is normalized;
/// records with missing or empty required fields are dropped, exact
/// duplicate bodies keep the first occurrence, malformed lines are
/// collected as per-record errors.
LoadResult load_corpus(const std::string& path, const CorpusFilter& filter);

/// Sentence splitting + tokenization options.
struct SplitOptions {
  std::string delimiters = ".!?\n";  // sentence-final cues, kept with the sentence
  int max_positions = 512;           // model capacity; body truncated to fit
};

/// split_and_tokenize outcome: either an admitted Document or an exclusion
/// with the violated bound named.
struct DocumentBuild {
  std::optional<Document> document;
  bool excluded = false;
  std::string diagnostic;
};

DocumentBuild split_and_tokenize(const RawArticle& article, const Tokenizer& tokenizer,
                                 const Vocabulary& vocab, const CorpusFilter& filter,
                                 const SplitOptions& options);

/// Splits text on the configured delimiter set; delimiters stay attached to
/// their sentence; blank pieces are dropped.
std::vector<std::string> split_sentences(const std::string& text,
                                         const std::string& delimiters);

struct TokenizedCorpus {
  std::vector<Document> documents;
  std::vector<std::pair<std::string, std::string>> excluded;  // id, diagnostic
};

TokenizedCorpus tokenize_corpus(const std::vector<RawArticle>& articles,
                                const Tokenizer& tokenizer, const Vocabulary& vocab,
                                const CorpusFilter& filter, const SplitOptions& options);

/// Surface-token streams of all article fields, for vocabulary building.
std::vector<std::vector<std::string>> surface_streams(
    const std::vector<RawArticle>& articles, const Tokenizer& tokenizer,
    const std::string& delimiters);

}  // namespace headsum
