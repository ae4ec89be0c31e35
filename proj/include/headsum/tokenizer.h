#pragma once

#include <memory>
#include <string>
#include <vector>

#include "headsum/tokens.h"
#include "headsum/vocab.h"

namespace headsum {

/// Pluggable word tokenizer. Implementations define how text is cut into
/// surface tokens; `tokenize` pairs the surfaces with ids from a fixed
/// vocabulary (unknown surfaces map to <unk>).
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  virtual std::vector<std::string> split(const std::string& text) const = 0;

  TokenSeq tokenize(const std::string& text, const Vocabulary& vocab) const;
};

/// Default tokenizer: Unicode-aware split on whitespace, with punctuation
/// code points emitted as single-character tokens. No lowercasing.
class WhitespacePunctTokenizer : public Tokenizer {
 public:
  std::vector<std::string> split(const std::string& text) const override;
};

std::unique_ptr<Tokenizer> make_default_tokenizer();

}  // namespace headsum
