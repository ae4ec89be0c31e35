#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace headsum {

using TokenId = std::int32_t;

// Reserved vocabulary slots. Every vocabulary starts with these three
// surfaces, in this order.
inline constexpr TokenId kUnkId = 0;  // out-of-vocabulary token
inline constexpr TokenId kClsId = 1;  // sentence-start marker
inline constexpr TokenId kSepId = 2;  // sentence-boundary marker
inline constexpr int kReservedTokens = 3;

inline constexpr const char* kUnkSurface = "<unk>";
inline constexpr const char* kClsSurface = "<cls>";
inline constexpr const char* kSepSurface = "<sep>";

inline bool is_marker(TokenId id) { return id == kClsId || id == kSepId; }

/// A tokenized piece of text: parallel id and surface sequences.
struct TokenSeq {
  std::vector<TokenId> ids;
  std::vector<std::string> surfaces;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }

  /// Token ids with the <cls>/<sep> markers removed.
  std::vector<TokenId> content_ids() const {
    std::vector<TokenId> out;
    out.reserve(ids.size());
    for (TokenId id : ids) {
      if (!is_marker(id)) out.push_back(id);
    }
    return out;
  }

  /// Number of non-marker tokens.
  std::size_t content_size() const {
    std::size_t n = 0;
    for (TokenId id : ids) {
      if (!is_marker(id)) ++n;
    }
    return n;
  }
};

}  // namespace headsum
