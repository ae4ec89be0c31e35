#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "headsum/tokens.h"

namespace headsum {

/// Fixed token-string <-> id table. Ids 0..2 are always the reserved
/// <unk>/<cls>/<sep> slots. File format: UTF-8, one token per line,
/// line number = token id.
class Vocabulary {
 public:
  /// A vocabulary holding only the three reserved tokens.
  Vocabulary();

  /// Builds a vocabulary from surface-token streams: reserved slots first,
  /// then tokens by descending frequency (ties broken lexicographically)
  /// up to max_size entries total.
  static Vocabulary build(const std::vector<std::vector<std::string>>& token_streams,
                          std::size_t max_size);

  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

  /// Id for a surface string; kUnkId when absent.
  TokenId id_of(const std::string& surface) const;
  const std::string& surface(TokenId id) const;
  bool contains(const std::string& surface) const;

  std::size_t size() const { return surfaces_.size(); }

 private:
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, TokenId> ids_;

  void append(const std::string& surface);
};

}  // namespace headsum
