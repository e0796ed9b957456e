#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zipfaug/strings.hpp"

namespace zipfaug {

// Literal marker bytes used by the two training-corpus serializations.
inline constexpr std::string_view kMaskMarker = "[MASK]";
inline constexpr std::string_view kSepMarker = "[SEP]";
inline constexpr std::string_view kClsMarker = "[CLS]";
inline constexpr std::string_view kEosMarker = "[EOS]";

inline constexpr std::array<std::string_view, 4> kAllMarkers = {kMaskMarker, kSepMarker,
                                                                kClsMarker, kEosMarker};

struct MarkerParseError : std::runtime_error {
  std::size_t offset;
  MarkerParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (byte offset " + std::to_string(off) + ")"), offset(off) {}
};

inline bool contains_marker(std::string_view text) {
  for (auto m : kAllMarkers)
    if (text.find(m) != std::string_view::npos) return true;
  return false;
}

// Article-per-record corpus: [MASK] l1 [SEP] l2 ... [SEP] ln [CLS] per article.
struct ArticleCorpus {
  std::vector<std::vector<std::string>> articles;

  bool operator==(const ArticleCorpus& other) const = default;
};

inline std::string serialize_articles(const ArticleCorpus& corpus) {
  std::string out;
  for (std::size_t a = 0; a < corpus.articles.size(); ++a) {
    const auto& lines = corpus.articles[a];
    if (lines.empty())
      throw std::invalid_argument("article " + std::to_string(a) + " has no lines");
    out += kMaskMarker;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      if (contains_marker(lines[l]))
        throw std::invalid_argument("article " + std::to_string(a) + ", line " +
                                    std::to_string(l) + " contains a marker literal");
      if (l) out += kSepMarker;
      out += lines[l];
    }
    out += kClsMarker;
  }
  return out;
}

namespace detail {

struct MarkerHit {
  std::size_t pos = std::string_view::npos;
  std::string_view marker;
};

inline MarkerHit find_next_marker(std::string_view text, std::size_t from) {
  MarkerHit hit;
  for (auto m : kAllMarkers) {
    auto p = text.find(m, from);
    if (p != std::string_view::npos && p < hit.pos) {
      hit.pos = p;
      hit.marker = m;
    }
  }
  return hit;
}

}  // namespace detail

inline ArticleCorpus parse_articles(std::string_view text) {
  ArticleCorpus corpus;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text.compare(pos, kMaskMarker.size(), kMaskMarker) != 0)
      throw MarkerParseError("expected [MASK] at article start", pos);
    pos += kMaskMarker.size();
    std::vector<std::string> lines;
    while (true) {
      auto hit = detail::find_next_marker(text, pos);
      if (hit.pos == std::string_view::npos)
        throw MarkerParseError("article not terminated by [CLS]", pos);
      if (hit.marker != kSepMarker && hit.marker != kClsMarker)
        throw MarkerParseError("unexpected marker inside article", hit.pos);
      lines.emplace_back(text.substr(pos, hit.pos - pos));
      pos = hit.pos + hit.marker.size();
      if (hit.marker == kClsMarker) break;
    }
    corpus.articles.push_back(std::move(lines));
  }
  return corpus;
}

// Title/content corpus: y [SEP] x [EOS] per pair, content before title.
// Pairs with a title under 2 words or content under 100 words are rejected.
class TitledCorpus {
 public:
  struct Pair {
    std::string title;
    std::string content;
    bool operator==(const Pair&) const = default;
  };

  void add(std::string title, std::string content) {
    if (split_whitespace(title).size() < 2)
      throw std::invalid_argument("title must contain at least 2 words: \"" + title + "\"");
    if (split_whitespace(content).size() < 100)
      throw std::invalid_argument("content must contain at least 100 words");
    pairs_.push_back(Pair{std::move(title), std::move(content)});
  }

  const std::vector<Pair>& pairs() const { return pairs_; }
  bool operator==(const TitledCorpus&) const = default;

 private:
  std::vector<Pair> pairs_;
};

inline std::string serialize_titled(const TitledCorpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.pairs().size(); ++i) {
    const auto& [title, content] = corpus.pairs()[i];
    if (contains_marker(title) || contains_marker(content))
      throw std::invalid_argument("pair " + std::to_string(i) + " contains a marker literal");
    out += content;
    out += kSepMarker;
    out += title;
    out += kEosMarker;
  }
  return out;
}

inline TitledCorpus parse_titled(std::string_view text) {
  TitledCorpus corpus;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto sep = detail::find_next_marker(text, pos);
    if (sep.pos == std::string_view::npos)
      throw MarkerParseError("sample missing [SEP] separator", pos);
    if (sep.marker != kSepMarker)
      throw MarkerParseError("expected [SEP] after sample content", sep.pos);
    std::string content(text.substr(pos, sep.pos - pos));
    pos = sep.pos + kSepMarker.size();
    auto eos = detail::find_next_marker(text, pos);
    if (eos.pos == std::string_view::npos)
      throw MarkerParseError("sample not terminated by [EOS]", pos);
    if (eos.marker != kEosMarker)
      throw MarkerParseError("expected [EOS] after sample title", eos.pos);
    std::string title(text.substr(pos, eos.pos - pos));
    pos = eos.pos + kEosMarker.size();
    corpus.add(std::move(title), std::move(content));
  }
  return corpus;
}

}  // namespace zipfaug
