#include <doctest.h>

#include <random>
#include <string>

#include "headsum/rng.h"
#include "headsum/text.h"

using headsum::normalize_text;

TEST_CASE("html tags are removed and inner text kept") {
  CHECK(normalize_text("a<b>x</b>b") == "axb");
  CHECK(normalize_text("<p>hello <i>there</i></p>") == "hello there");
  CHECK(normalize_text("5 < 6 and plain") == "5 < 6 and plain");
  CHECK(normalize_text("unclosed < stays") == "unclosed < stays");
}

TEST_CASE("backslashes become spaces") {
  CHECK(normalize_text("a\\b") == "a b");
  CHECK(normalize_text("a\\\\b") == "a b");
  CHECK(normalize_text("\\leading and trailing\\") == "leading and trailing");
}

TEST_CASE("whitespace collapses and trims") {
  CHECK(normalize_text("  H\xc3\xa9llo   World  ") == "H\xc3\xa9llo World");
  CHECK(normalize_text("a\t\n b") == "a b");
  CHECK(normalize_text("\n\n") == "");
  CHECK(normalize_text("") == "");
}

TEST_CASE("control and zero-width characters are dropped") {
  CHECK(normalize_text("a\x01\x02z") == "az");
  CHECK(normalize_text("a\xe2\x80\x8b" "z") == "az");  // U+200B
  CHECK(normalize_text("\xef\xbb\xbfword") == "word");  // BOM
  CHECK(normalize_text("a\x7f" "z") == "az");
}

TEST_CASE("non-breaking and ideographic spaces count as whitespace") {
  CHECK(normalize_text("a\xc2\xa0z") == "a z");        // U+00A0
  CHECK(normalize_text("a\xe3\x80\x80z") == "a z");    // U+3000
}

TEST_CASE("normalization is idempotent on random noise") {
  std::mt19937_64 g(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    const int len = static_cast<int>(headsum::rng::uniform_below(g, 40));
    for (int i = 0; i < len; ++i) {
      s.push_back(static_cast<char>(headsum::rng::uniform_below(g, 256)));
    }
    const std::string once = normalize_text(s);
    CHECK(normalize_text(once) == once);
  }
}

TEST_CASE("utf8 codec round-trips code points") {
  for (char32_t cp : {U'a', U'é', U'ก', U'中', U'\U0001F600'}) {
    std::string buf;
    headsum::utf8::append(buf, cp);
    std::size_t pos = 0;
    CHECK(headsum::utf8::decode(buf, pos) == cp);
    CHECK(pos == buf.size());
  }
}

TEST_CASE("invalid utf8 bytes pass through byte by byte") {
  std::string s = "\xff\xfe";
  std::size_t pos = 0;
  CHECK(headsum::utf8::decode(s, pos) == 0xFF);
  CHECK(pos == 1);
  CHECK(headsum::utf8::decode(s, pos) == 0xFE);
  CHECK(pos == 2);

  std::string truncated = "\xe0\xa0";  // three-byte lead, one continuation
  pos = 0;
  CHECK(headsum::utf8::decode(truncated, pos) == 0xE0);
  CHECK(pos == 1);
}
