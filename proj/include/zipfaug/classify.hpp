#pragma once

#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "zipfaug/corpus.hpp"
#include "zipfaug/zipf.hpp"

namespace zipfaug {

// Vocabulary split at r0: ranks 1..r0 are common, the rest rare.
struct WordClassMap {
  std::unordered_set<std::string> common;
  std::unordered_set<std::string> rare;
  std::size_t r0 = 0;
  std::size_t r_t = 0;

  bool is_common(const std::string& surface) const { return common.count(surface) != 0; }
};

struct SentencePartition {
  std::vector<Sentence> common_sentences;
  std::vector<Sentence> rare_sentences;
};

inline WordClassMap classify_words(const FrequencyTable& table, const SplitPoint& split) {
  if (split.r0 < 1 || split.r0 > table.total_rank())
    throw std::domain_error("r0 must lie in [1, r_t]");
  WordClassMap map;
  map.r0 = split.r0;
  map.r_t = table.total_rank();
  for (const auto& e : table.entries()) {
    if (e.rank <= split.r0)
      map.common.insert(e.item);
    else
      map.rare.insert(e.item);
  }
  return map;
}

// tau = w_c / w_h - r0 / r_t, where w_c counts common-word occurrences (with
// multiplicity) and w_h is the sentence token count. Out-of-vocabulary tokens
// count as rare.
inline double tau(const Sentence& sentence, const WordClassMap& map) {
  if (sentence.tokens.empty()) throw std::domain_error("tau is undefined for an empty sentence");
  std::size_t common_occurrences = 0;
  for (const auto& tok : sentence.tokens)
    if (map.is_common(tok.surface)) ++common_occurrences;
  const double w_c = static_cast<double>(common_occurrences);
  const double w_h = static_cast<double>(sentence.tokens.size());
  const double ratio = static_cast<double>(map.r0) / static_cast<double>(map.r_t);
  return w_c / w_h - ratio;
}

// Common iff tau > 0; the boundary tau == 0 goes to the rare class. Input
// order is preserved within each class.
inline SentencePartition partition_sentences(const std::vector<Sentence>& sentences,
                                             const WordClassMap& map) {
  SentencePartition partition;
  for (const auto& s : sentences) {
    if (tau(s, map) > 0)
      partition.common_sentences.push_back(s);
    else
      partition.rare_sentences.push_back(s);
  }
  return partition;
}

}  // namespace zipfaug
