#include "headsum/tokenizer.h"

#include "headsum/text.h"

namespace headsum {

TokenSeq Tokenizer::tokenize(const std::string& text, const Vocabulary& vocab) const {
  TokenSeq seq;
  for (auto& surface : split(text)) {
    seq.ids.push_back(vocab.id_of(surface));
    seq.surfaces.push_back(std::move(surface));
  }
  return seq;
}

namespace {

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x00A0 || cp == 0x3000;
}

bool is_punct_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
  }
  switch (cp) {
    case 0x00A1:  // inverted exclamation
    case 0x00AB:  // left guillemet
    case 0x00BB:  // right guillemet
    case 0x00BF:  // inverted question mark
    case 0x3001:  // ideographic comma
    case 0x3002:  // ideographic full stop
      return true;
    default:
      break;
  }
  // General punctuation block (dashes, quotes, ellipsis, bullets).
  return cp >= 0x2010 && cp <= 0x2027;
}

}  // namespace

std::vector<std::string> WhitespacePunctTokenizer::split(const std::string& text) const {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = utf8::decode(text, i);
    if (is_space_cp(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (is_punct_cp(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      std::string punct;
      utf8::append(punct, cp);
      tokens.push_back(std::move(punct));
      continue;
    }
    utf8::append(current, cp);
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::unique_ptr<Tokenizer> make_default_tokenizer() {
  return std::make_unique<WhitespacePunctTokenizer>();
}

}  // namespace headsum
