#include "headsum/vocab.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "headsum/errors.h"

namespace headsum {

Vocabulary::Vocabulary() {
  append(kUnkSurface);
  append(kClsSurface);
  append(kSepSurface);
}

void Vocabulary::append(const std::string& surface) {
  ids_.emplace(surface, static_cast<TokenId>(surfaces_.size()));
  surfaces_.push_back(surface);
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_streams,
                             std::size_t max_size) {
  if (max_size < kReservedTokens) {
    throw ConfigError("vocabulary size must be at least " +
                      std::to_string(kReservedTokens));
  }
  // std::map keeps the tie-break (equal counts -> lexicographic) stable.
  std::map<std::string, std::size_t> freq;
  for (const auto& stream : token_streams) {
    for (const auto& tok : stream) {
      if (tok.empty() || tok == kUnkSurface || tok == kClsSurface ||
          tok == kSepSurface) {
        continue;
      }
      ++freq[tok];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> entries(freq.begin(), freq.end());
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  Vocabulary vocab;
  for (const auto& [tok, count] : entries) {
    (void)count;
    if (vocab.size() >= max_size) break;
    vocab.append(tok);
  }
  return vocab;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vocabulary file: " + path);
  Vocabulary vocab;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno < kReservedTokens) {
      if (line != vocab.surfaces_[lineno]) {
        throw DataError("vocabulary file " + path + ": line " +
                        std::to_string(lineno) + " must be the reserved token '" +
                        vocab.surfaces_[lineno] + "', got '" + line + "'");
      }
    } else {
      if (line.empty()) {
        throw DataError("vocabulary file " + path + ": empty token at line " +
                        std::to_string(lineno));
      }
      if (vocab.ids_.count(line)) {
        throw DataError("vocabulary file " + path + ": duplicate token '" + line +
                        "' at line " + std::to_string(lineno));
      }
      vocab.append(line);
    }
    ++lineno;
  }
  if (lineno < kReservedTokens) {
    throw DataError("vocabulary file " + path + ": missing reserved tokens");
  }
  return vocab;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary file: " + path);
  for (const auto& tok : surfaces_) {
    if (tok.find('\n') != std::string::npos) {
      throw DataError("vocabulary token contains a newline: '" + tok + "'");
    }
    out << tok << '\n';
  }
}

TokenId Vocabulary::id_of(const std::string& surface) const {
  auto it = ids_.find(surface);
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& surface) const {
  return ids_.count(surface) > 0;
}

const std::string& Vocabulary::surface(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= surfaces_.size()) {
    throw DataError("token id out of range: " + std::to_string(id));
  }
  return surfaces_[static_cast<std::size_t>(id)];
}

}  // namespace headsum
