#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "zipfaug/strings.hpp"

namespace zipfaug {

struct Token {
  std::string surface;
  std::size_t position = 0;
  std::string label = "O";  // BIO label; "O" unless read from an annotated file
};

struct Sentence {
  std::vector<Token> tokens;
  std::string doc_id;
  std::size_t sent_id = 0;

  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i].surface;
    }
    return out;
  }
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
};

struct Corpus {
  std::vector<Document> documents;
  std::string type_tag;

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& d : documents) n += d.sentences.size();
    return n;
  }

  std::vector<Sentence> sentences() const {
    std::vector<Sentence> out;
    out.reserve(sentence_count());
    for (const auto& d : documents)
      out.insert(out.end(), d.sentences.begin(), d.sentences.end());
    return out;
  }
};

enum class CorpusFormat { PlainLines, ConllBio };

inline std::optional<CorpusFormat> parse_format(const std::string& name) {
  if (name == "plain-lines") return CorpusFormat::PlainLines;
  if (name == "conll-bio") return CorpusFormat::ConllBio;
  return std::nullopt;
}

// Whitespace split, then leading/trailing ASCII punctuation peels off as
// single-character tokens. Interior punctuation (hyphens, apostrophes) stays.
// Re-tokenizing the space-joined surfaces is a fixed point.
inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  for (const std::string& word : split_whitespace(text)) {
    std::size_t begin = 0;
    std::size_t end = word.size();
    std::vector<std::string> lead;
    std::vector<std::string> trail;
    while (begin < end && is_ascii_punct(word[begin]))
      lead.push_back(std::string(1, word[begin++]));
    while (end > begin && is_ascii_punct(word[end - 1]))
      trail.push_back(std::string(1, word[--end]));
    for (auto& p : lead) out.push_back(Token{std::move(p)});
    if (end > begin) out.push_back(Token{word.substr(begin, end - begin)});
    for (auto it = trail.rbegin(); it != trail.rend(); ++it)
      out.push_back(Token{std::move(*it)});
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].position = i;
  return out;
}

namespace detail {

inline void flush_sentence(Document& doc, Sentence& sent) {
  if (sent.tokens.empty()) return;
  sent.sent_id = doc.sentences.size();
  doc.sentences.push_back(std::move(sent));
  sent = Sentence{};
}

inline void flush_document(Corpus& corpus, Document& doc, const std::string& file_tag,
                           std::size_t& block) {
  if (doc.sentences.empty()) return;
  doc.doc_id = file_tag + "#" + std::to_string(block++);
  for (auto& s : doc.sentences) s.doc_id = doc.doc_id;
  corpus.documents.push_back(std::move(doc));
  doc = Document{};
}

inline void ingest_plain_lines(Corpus& corpus, std::istream& in, const std::string& file_tag) {
  Document doc;
  Sentence sent;
  std::size_t block = 0;
  std::string line;
  while (std::getline(in, line)) {
    line = rstrip(line);
    if (line.empty()) {
      flush_document(corpus, doc, file_tag, block);
      continue;
    }
    sent.tokens = tokenize(line);
    flush_sentence(doc, sent);
  }
  flush_document(corpus, doc, file_tag, block);
}

inline void ingest_conll_bio(Corpus& corpus, std::istream& in, const std::string& file_tag) {
  Document doc;
  Sentence sent;
  std::size_t block = 0;
  std::size_t line_no = 0;
  int blanks = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    line = rstrip(line);
    if (line.empty()) {
      ++blanks;
      flush_sentence(doc, sent);
      if (blanks >= 2) flush_document(corpus, doc, file_tag, block);
      continue;
    }
    blanks = 0;
    auto cols = split_whitespace(line);
    if (cols.size() != 2)
      throw std::runtime_error(file_tag + ":" + std::to_string(line_no) +
                               ": malformed conll-bio row, expected `token label`, got " +
                               std::to_string(cols.size()) + " column(s)");
    Token tok;
    tok.surface = cols[0];
    tok.label = cols[1];
    tok.position = sent.tokens.size();
    sent.tokens.push_back(std::move(tok));
  }
  flush_sentence(doc, sent);
  flush_document(corpus, doc, file_tag, block);
}

}  // namespace detail

inline Corpus ingest(const std::filesystem::path& path, CorpusFormat format,
                     const std::string& type_tag = "") {
  Corpus corpus;
  corpus.type_tag = type_tag;
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open corpus file: " + file.string());
    const std::string file_tag = file.filename().string();
    if (format == CorpusFormat::PlainLines)
      detail::ingest_plain_lines(corpus, in, file_tag);
    else
      detail::ingest_conll_bio(corpus, in, file_tag);
  }
  return corpus;
}

inline void write_conll_bio(const Corpus& corpus, std::ostream& os) {
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (d) os << "\n";  // second blank line: document boundary
    for (const auto& sent : corpus.documents[d].sentences) {
      for (const auto& tok : sent.tokens) os << tok.surface << ' ' << tok.label << "\n";
      os << "\n";
    }
  }
}

inline void write_plain_lines(const std::vector<Sentence>& sentences, std::ostream& os) {
  for (const auto& s : sentences) os << s.text() << "\n";
}

struct FrequencyEntry {
  std::string item;
  double frequency = 0;  // integral count for corpus tables; real-valued for synthetic ones
  std::size_t rank = 0;
};

// Ranked item-frequency table. Ranks run 1..r_t with no gaps and frequencies
// are non-increasing in rank; construction validates both.
class FrequencyTable {
 public:
  FrequencyTable() = default;

  explicit FrequencyTable(std::vector<FrequencyEntry> entries) : entries_(std::move(entries)) {
    total_ = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.rank != i + 1)
        throw std::invalid_argument("frequency table ranks must be contiguous from 1");
      if (e.frequency <= 0.0)
        throw std::invalid_argument("frequency table frequencies must be positive");
      if (i > 0 && e.frequency > entries_[i - 1].frequency)
        throw std::invalid_argument("frequency table frequencies must be non-increasing");
      if (!rank_index_.emplace(e.item, e.rank).second)
        throw std::invalid_argument("frequency table items must be unique: " + e.item);
      total_ += e.frequency;
    }
  }

  // Entries already sorted by decreasing frequency; assigns ranks 1..n.
  static FrequencyTable from_ordered(std::vector<std::pair<std::string, double>> ordered) {
    std::vector<FrequencyEntry> entries;
    entries.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i)
      entries.push_back(FrequencyEntry{std::move(ordered[i].first), ordered[i].second, i + 1});
    return FrequencyTable(std::move(entries));
  }

  const std::vector<FrequencyEntry>& entries() const { return entries_; }
  double total_tokens() const { return total_; }
  std::size_t total_rank() const { return entries_.size(); }  // r_t
  bool empty() const { return entries_.empty(); }

  std::optional<std::size_t> rank_of(const std::string& item) const {
    auto it = rank_index_.find(item);
    if (it == rank_index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<FrequencyEntry> entries_;
  double total_ = 0;
  std::unordered_map<std::string, std::size_t> rank_index_;
};

// Counts distinct items, sorts by descending frequency with ties broken by
// ascending item order, and assigns ranks 1..r_t.
template <typename Range>
FrequencyTable build_frequency_table(const Range& items) {
  std::map<std::string, double> counts;
  for (const auto& item : items) counts[std::string(item)] += 1.0;
  std::vector<std::pair<std::string, double>> ordered(counts.begin(), counts.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return FrequencyTable::from_ordered(std::move(ordered));
}

inline std::vector<std::string> word_list(const Corpus& corpus) {
  std::vector<std::string> words;
  for (const auto& doc : corpus.documents)
    for (const auto& sent : doc.sentences)
      for (const auto& tok : sent.tokens) words.push_back(tok.surface);
  return words;
}

inline FrequencyTable word_frequency_table(const Corpus& corpus) {
  return build_frequency_table(word_list(corpus));
}

}  // namespace zipfaug
