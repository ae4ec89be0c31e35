#pragma once

#include <cstdint>
#include <string>

namespace headsum {

/// Cleans raw article text. Removes HTML tags (inner text kept), control
/// and zero-width characters; replaces backslashes with spaces; collapses
/// consecutive whitespace to a single space; trims. Idempotent.
std::string normalize_text(const std::string& raw);

namespace utf8 {

/// Decodes the code point starting at `pos` and advances `pos` past it.
/// Invalid bytes are returned verbatim as single-byte code points so no
/// input is ever lost.
char32_t decode(const std::string& s, std::size_t& pos);

/// Appends `cp` to `out` as UTF-8.
void append(std::string& out, char32_t cp);

}  // namespace utf8

}  // namespace headsum
