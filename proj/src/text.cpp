#include "headsum/text.h"

namespace headsum {

namespace utf8 {

char32_t decode(const std::string& s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) -> std::uint8_t {
    return static_cast<std::uint8_t>(s[i]);
  };
  std::uint8_t b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    // Stray continuation or invalid lead byte: pass through as-is.
    ++pos;
    return b0;
  }
  if (pos + extra >= s.size()) {
    // Truncated sequence at end of string.
    ++pos;
    return b0;
  }
  char32_t out = cp;
  for (int i = 1; i <= extra; ++i) {
    std::uint8_t bi = byte(pos + i);
    if ((bi & 0xC0) != 0x80) {
      ++pos;
      return b0;  // malformed continuation, pass lead byte through
    }
    out = (out << 6) | (bi & 0x3F);
  }
  pos += 1 + extra;
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace utf8

namespace {

// Removes <...> spans; inner text of elements is kept, the tags themselves
// go away. A '<' with no later '>' is ordinary text.
std::string strip_tags(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      std::size_t close = s.find('>', i + 1);
      if (close != std::string::npos) {
        i = close + 1;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

bool is_zero_width(char32_t cp) {
  return cp == 0x200B || cp == 0x200C || cp == 0x200D || cp == 0x2060 ||
         cp == 0xFEFF;
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x00A0 || cp == 0x3000;
}

bool is_control_cp(char32_t cp) {
  // C0/C1 controls and DEL; tab/newline/etc. are handled as whitespace first.
  return cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F);
}

}  // namespace

std::string normalize_text(const std::string& raw) {
  std::string s = strip_tags(raw);

  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  bool any = false;
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp = utf8::decode(s, i);
    if (cp == '\\' || is_space_cp(cp)) {
      pending_space = true;
      continue;
    }
    if (is_zero_width(cp) || is_control_cp(cp)) continue;
    if (pending_space && any) out.push_back(' ');
    pending_space = false;
    any = true;
    utf8::append(out, cp);
  }
  return out;
}

}  // namespace headsum
