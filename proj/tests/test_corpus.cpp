#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "zipfaug/corpus.hpp"
#include "helpers.hpp"

using namespace zipfaug;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream os(path, std::ios::binary);
  os << content;
  return path;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace

TEST_CASE("tokenize splits on whitespace") {
  auto tokens = tokenize("tail gas incinerator");
  REQUIRE(surfaces(tokens) == std::vector<std::string>{"tail", "gas", "incinerator"});
  REQUIRE(tokens[2].position == 2);
}

TEST_CASE("tokenize of empty text is empty") {
  REQUIRE(tokenize("").empty());
  REQUIRE(tokenize("   \t ").empty());
}

TEST_CASE("tokenize detaches boundary punctuation") {
  auto tokens = tokenize("vinyl chloride, hydrogen");
  REQUIRE(surfaces(tokens) == std::vector<std::string>{"vinyl", "chloride", ",", "hydrogen"});

  REQUIRE(surfaces(tokenize("(leak).")) == std::vector<std::string>{"(", "leak", ")", "."});
  // interior punctuation stays
  REQUIRE(surfaces(tokenize("oil-spill")) == std::vector<std::string>{"oil-spill"});
}

TEST_CASE("tokenize is idempotent over re-joined surfaces") {
  std::mt19937 rng(7);
  std::vector<std::string> pool = {"pump", "valve,", "(tank)", "a.b", "...", "x1!", "gas"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int words = 1 + static_cast<int>(rng() % 6);
    for (int w = 0; w < words; ++w) {
      if (w) text += ' ';
      text += pool[rng() % pool.size()];
    }
    auto first = tokenize(text);
    std::string joined;
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (i) joined += ' ';
      joined += first[i].surface;
    }
    auto second = tokenize(joined);
    REQUIRE(surfaces(first) == surfaces(second));
  }
}

TEST_CASE("ingest plain-lines puts each line in one sentence") {
  auto path = write_temp("zipfaug_plain.txt", "a b.\nc d.\n");
  auto corpus = ingest(path, CorpusFormat::PlainLines);
  REQUIRE(corpus.documents.size() == 1);
  REQUIRE(corpus.documents[0].sentences.size() == 2);
  REQUIRE(corpus.documents[0].sentences[0].text() == "a b .");
  std::filesystem::remove(path);
}

TEST_CASE("ingest of an empty file yields an empty corpus") {
  auto path = write_temp("zipfaug_empty.txt", "");
  auto corpus = ingest(path, CorpusFormat::PlainLines);
  REQUIRE(corpus.documents.empty());
  std::filesystem::remove(path);
}

TEST_CASE("ingest plain-lines treats blank lines as document boundaries") {
  auto path = write_temp("zipfaug_blocks.txt", "a b\nc d\n\ne f\n");
  auto corpus = ingest(path, CorpusFormat::PlainLines);
  REQUIRE(corpus.documents.size() == 2);
  REQUIRE(corpus.documents[0].sentences.size() == 2);
  REQUIRE(corpus.documents[1].sentences.size() == 1);
  REQUIRE(corpus.documents[0].doc_id != corpus.documents[1].doc_id);
  std::filesystem::remove(path);
}

TEST_CASE("ingest conll-bio keeps token labels") {
  auto path = write_temp("zipfaug_conll.txt", "boiler B-EQU\nleaks O\n\npump B-EQU\n");
  auto corpus = ingest(path, CorpusFormat::ConllBio);
  REQUIRE(corpus.documents.size() == 1);
  REQUIRE(corpus.documents[0].sentences.size() == 2);
  const auto& first = corpus.documents[0].sentences[0];
  REQUIRE(first.tokens[0].surface == "boiler");
  REQUIRE(first.tokens[0].label == "B-EQU");
  REQUIRE(first.tokens[1].label == "O");
  std::filesystem::remove(path);
}

TEST_CASE("ingest conll-bio splits documents at double blank lines") {
  auto path = write_temp("zipfaug_conll2.txt", "a O\n\n\nb O\n");
  auto corpus = ingest(path, CorpusFormat::ConllBio);
  REQUIRE(corpus.documents.size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("ingest conll-bio rejects malformed rows with the line number") {
  auto path = write_temp("zipfaug_bad.txt", "a O\nb\n");
  REQUIRE_THROWS_WITH(ingest(path, CorpusFormat::ConllBio),
                      Catch::Matchers::ContainsSubstring(":2:"));
  auto path3 = write_temp("zipfaug_bad3.txt", "a O extra O\n");
  REQUIRE_THROWS_WITH(ingest(path3, CorpusFormat::ConllBio),
                      Catch::Matchers::ContainsSubstring(":1:"));
  std::filesystem::remove(path);
  std::filesystem::remove(path3);
}

TEST_CASE("ingest rejects an unreadable path") {
  REQUIRE_THROWS_AS(ingest("/nonexistent/zipfaug/corpus.txt", CorpusFormat::PlainLines),
                    std::runtime_error);
}

TEST_CASE("conll-bio round trip reproduces token sequences") {
  auto path = write_temp("zipfaug_rt.txt", "a b c\nd e\n\nf g\n");
  auto corpus = ingest(path, CorpusFormat::PlainLines);
  std::ostringstream os;
  write_conll_bio(corpus, os);
  auto back = write_temp("zipfaug_rt2.txt", os.str());
  auto corpus2 = ingest(back, CorpusFormat::ConllBio);
  REQUIRE(corpus2.documents.size() == corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    REQUIRE(corpus2.documents[d].sentences.size() == corpus.documents[d].sentences.size());
    for (std::size_t s = 0; s < corpus.documents[d].sentences.size(); ++s)
      REQUIRE(corpus2.documents[d].sentences[s].text() ==
              corpus.documents[d].sentences[s].text());
  }
  std::filesystem::remove(path);
  std::filesystem::remove(back);
}

TEST_CASE("build_frequency_table counts, sorts and ranks") {
  std::vector<std::string> items = {"a", "a", "b"};
  auto table = build_frequency_table(items);
  REQUIRE(table.total_rank() == 2);
  REQUIRE(table.total_tokens() == 3.0);
  REQUIRE(table.entries()[0].item == "a");
  REQUIRE(table.entries()[0].frequency == 2.0);
  REQUIRE(table.entries()[0].rank == 1);
  REQUIRE(table.entries()[1].item == "b");
  REQUIRE(table.entries()[1].rank == 2);
}

TEST_CASE("build_frequency_table singleton") {
  auto table = build_frequency_table(std::vector<std::string>{"x"});
  REQUIRE(table.total_rank() == 1);
  REQUIRE(table.entries()[0].item == "x");
  REQUIRE(table.entries()[0].frequency == 1.0);
}

TEST_CASE("frequency ties break lexicographically") {
  auto table = build_frequency_table(std::vector<std::string>{"b", "a"});
  REQUIRE(table.entries()[0].item == "a");
  REQUIRE(table.entries()[1].item == "b");
}

TEST_CASE("empty input gives an empty table") {
  auto table = build_frequency_table(std::vector<std::string>{});
  REQUIRE(table.total_rank() == 0);
  REQUIRE(table.empty());
}

TEST_CASE("frequency table invariants hold on random multisets") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> items;
    const int n = 1 + static_cast<int>(rng() % 400);
    for (int i = 0; i < n; ++i) items.push_back("w" + std::to_string(rng() % 60));
    auto table = build_frequency_table(items);
    double sum = 0;
    for (std::size_t i = 0; i < table.entries().size(); ++i) {
      const auto& e = table.entries()[i];
      REQUIRE(e.rank == i + 1);
      REQUIRE(e.frequency >= 1.0);
      if (i > 0) REQUIRE(e.frequency <= table.entries()[i - 1].frequency);
      sum += e.frequency;
    }
    REQUIRE(sum == static_cast<double>(n));
    REQUIRE(table.total_tokens() == static_cast<double>(n));

    // permutation invariance
    auto shuffled = items;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto table2 = build_frequency_table(shuffled);
    REQUIRE(table2.total_rank() == table.total_rank());
    for (std::size_t i = 0; i < table.entries().size(); ++i) {
      REQUIRE(table2.entries()[i].item == table.entries()[i].item);
      REQUIRE(table2.entries()[i].frequency == table.entries()[i].frequency);
    }
  }
}

TEST_CASE("rank lookup") {
  auto table = build_frequency_table(std::vector<std::string>{"a", "a", "b"});
  REQUIRE(table.rank_of("a") == 1);
  REQUIRE(table.rank_of("b") == 2);
  REQUIRE_FALSE(table.rank_of("zz").has_value());
}
