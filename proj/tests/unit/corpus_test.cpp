#include <doctest.h>

#include <fstream>

#include "headsum/corpus.h"
#include "headsum/errors.h"
#include "headsum/tokenizer.h"
#include "headsum/vocab.h"
#include "support/synthetic.h"

using headsum::CorpusFilter;
using headsum::load_corpus;
using headsum::split_sentences;
using headsum::SplitOptions;
using headsum::Vocabulary;

namespace {

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& line : lines) out << line << "\n";
}

headsum::RawArticle article(const std::string& body, int) {
  headsum::RawArticle a;
  a.id = "x";
  a.headline = "head line";
  a.body = body;
  a.summary = "a summary sentence.";
  return a;
}

}  // namespace

TEST_CASE("load_corpus keeps valid records in file order") {
  synth::TempDir dir("corpus");
  const auto path = dir.file("ok.jsonl");
  write_lines(path, {
      R"({"id":"a","headline":"h1","body":"b1","summary":"s1"})",
      R"({"id":"b","headline":"h2","body":"b2","summary":"s2","source":"tag"})",
      R"({"id":"c","headline":"h3","body":"b3","summary":"s3"})",
  });
  auto result = load_corpus(path, CorpusFilter{});
  REQUIRE(result.articles.size() == 3);
  CHECK(result.stats.total_records == 3);
  CHECK(result.stats.dropped() == 0);
  CHECK(result.articles[0].id == "a");
  CHECK(result.articles[1].source == "tag");
  CHECK(result.articles[2].id == "c");
}

TEST_CASE("load_corpus drops records with missing or empty required fields") {
  synth::TempDir dir("corpus_missing");
  const auto path = dir.file("m.jsonl");
  write_lines(path, {
      R"({"id":"a","headline":"h","body":"b"})",
      R"({"id":"b","headline":"","body":"b","summary":"s"})",
      R"({"headline":"h","body":"b","summary":"s"})",
  });
  auto result = load_corpus(path, CorpusFilter{});
  CHECK(result.articles.empty());
  CHECK(result.stats.dropped_missing == 3);
  CHECK(result.stats.errors.size() == 3);
  CHECK(result.stats.errors[0].find("summary") != std::string::npos);
}

TEST_CASE("load_corpus keeps the first of duplicate bodies and ids") {
  synth::TempDir dir("corpus_dup");
  const auto path = dir.file("d.jsonl");
  write_lines(path, {
      R"({"id":"a","headline":"h1","body":"same body","summary":"s1"})",
      R"({"id":"b","headline":"h2","body":"same body","summary":"s2"})",
      R"({"id":"a","headline":"h3","body":"other","summary":"s3"})",
  });
  auto result = load_corpus(path, CorpusFilter{});
  REQUIRE(result.articles.size() == 1);
  CHECK(result.articles[0].id == "a");
  CHECK(result.articles[0].headline == "h1");
  CHECK(result.stats.dropped_duplicate == 2);
}

TEST_CASE("load_corpus collects malformed lines as non-fatal errors") {
  synth::TempDir dir("corpus_bad");
  const auto path = dir.file("b.jsonl");
  write_lines(path, {
      "not json at all",
      R"({"id":"a","headline":"h","body":"b","summary":"s"})",
      R"([1,2,3])",
  });
  auto result = load_corpus(path, CorpusFilter{});
  CHECK(result.articles.size() == 1);
  CHECK(result.stats.dropped_malformed == 2);
  CHECK_THROWS_AS(load_corpus(dir.file("absent.jsonl"), CorpusFilter{}),
                  headsum::DataError);
}

TEST_CASE("split_sentences keeps delimiters attached and drops blanks") {
  CHECK(split_sentences("A. B! C? D", ".!?\n") ==
        std::vector<std::string>{"A.", "B!", "C?", "D"});
  CHECK(split_sentences("one.. two.", ".!?\n") ==
        std::vector<std::string>{"one.", "two."});
  CHECK(split_sentences("line one\nline two", "\n") ==
        std::vector<std::string>{"line one", "line two"});
  CHECK(split_sentences("...", ".!?\n").empty());
  CHECK(split_sentences("", ".!?\n").empty());
}

TEST_CASE("split_and_tokenize wraps sentences in markers") {
  auto vocab = Vocabulary::build({{"one", "two", "three", "four"}}, 100);
  auto tokenizer = headsum::make_default_tokenizer();
  auto built = headsum::split_and_tokenize(article("one two. three four. one four.", 0),
                                           *tokenizer, vocab, CorpusFilter{},
                                           SplitOptions{});
  REQUIRE(built.document.has_value());
  const auto& doc = *built.document;
  REQUIRE(doc.sentences.size() == 3);
  for (const auto& sentence : doc.sentences) {
    CHECK(sentence.ids.front() == headsum::kClsId);
    CHECK(sentence.ids.back() == headsum::kSepId);
  }
  CHECK(doc.headline.ids.front() == headsum::kClsId);
  CHECK(doc.sentences[0].content_ids() ==
        std::vector<headsum::TokenId>{vocab.id_of("one"), vocab.id_of("two"),
                                      vocab.id_of(".")});
  // Summary sentences carry no markers.
  for (const auto& sentence : doc.summary_sentences) {
    for (auto id : sentence.ids) CHECK_FALSE(headsum::is_marker(id));
  }
}

TEST_CASE("pre-split records bypass the sentence splitter") {
  auto vocab = Vocabulary::build({{"alpha", "beta", "gamma"}}, 100);
  auto tokenizer = headsum::make_default_tokenizer();
  auto a = article("ignored. by the. splitter entirely.", 0);
  a.body_sentences = {"alpha beta", "beta gamma", "gamma alpha"};
  auto built = headsum::split_and_tokenize(a, *tokenizer, vocab, CorpusFilter{},
                                           SplitOptions{});
  REQUIRE(built.document.has_value());
  REQUIRE(built.document->sentences.size() == 3);
  CHECK(built.document->sentences[0].content_ids() ==
        std::vector<headsum::TokenId>{vocab.id_of("alpha"), vocab.id_of("beta")});
}

TEST_CASE("filter violations flag documents with the violated bound named") {
  auto vocab = Vocabulary::build({{"w"}}, 100);
  auto tokenizer = headsum::make_default_tokenizer();

  auto too_few = headsum::split_and_tokenize(article("w. w.", 0), *tokenizer, vocab,
                                             CorpusFilter{}, SplitOptions{});
  CHECK(too_few.excluded);
  CHECK_FALSE(too_few.document.has_value());
  CHECK(too_few.diagnostic.find("sentence") != std::string::npos);

  std::string many;
  for (int i = 0; i < 31; ++i) many += "w. ";
  auto too_many = headsum::split_and_tokenize(article(many, 0), *tokenizer, vocab,
                                              CorpusFilter{}, SplitOptions{});
  CHECK(too_many.excluded);
  CHECK(too_many.diagnostic.find("sentence") != std::string::npos);

  CorpusFilter tokens_needed;
  tokens_needed.min_tokens = 50;
  auto too_short = headsum::split_and_tokenize(article("w. w. w.", 0), *tokenizer,
                                               vocab, tokens_needed, SplitOptions{});
  CHECK(too_short.excluded);
  CHECK(too_short.diagnostic.find("token") != std::string::npos);

  auto no_sentences = headsum::split_and_tokenize(article("...", 0), *tokenizer, vocab,
                                                  CorpusFilter{}, SplitOptions{});
  CHECK(no_sentences.excluded);
}

TEST_CASE("body truncates to the position budget by dropping sentences") {
  auto vocab = Vocabulary::build({{"w"}}, 100);
  auto tokenizer = headsum::make_default_tokenizer();
  SplitOptions options;
  options.max_positions = 12;  // three sentences of four positions each
  auto built = headsum::split_and_tokenize(article("w. w. w. w. w.", 0), *tokenizer,
                                           vocab, CorpusFilter{}, options);
  REQUIRE(built.document.has_value());
  CHECK(built.document->sentences.size() == 3);
  CHECK(built.document->body_positions() <= 12);
}

TEST_CASE("tokenize_corpus reports exclusions alongside admitted documents") {
  auto vocab = Vocabulary::build({{"w"}}, 100);
  auto tokenizer = headsum::make_default_tokenizer();
  std::vector<headsum::RawArticle> articles = {article("w. w. w.", 0)};
  articles.push_back(article("w.", 0));
  articles[0].id = "keep";
  articles[1].id = "drop";
  auto corpus = headsum::tokenize_corpus(articles, *tokenizer, vocab, CorpusFilter{},
                                         SplitOptions{});
  REQUIRE(corpus.documents.size() == 1);
  CHECK(corpus.documents[0].id == "keep");
  REQUIRE(corpus.excluded.size() == 1);
  CHECK(corpus.excluded[0].first == "drop");
}

TEST_CASE("document helpers expose content views") {
  synth::RecoveryCase rc = [] {
    std::mt19937_64 g(1);
    return synth::recovery_case(g, 4, 2);
  }();
  const auto& doc = rc.doc;
  CHECK(doc.body_positions() > 0);
  CHECK(doc.body_content_tokens() ==
        doc.body_positions() - 2 * static_cast<int>(doc.sentences.size()));
  CHECK(doc.sentence_content(1) == doc.sentences[0].content_ids());
  CHECK_THROWS_AS(doc.sentence_content(0), headsum::DataError);
  CHECK_THROWS_AS(doc.sentence_content(99), headsum::DataError);
}
