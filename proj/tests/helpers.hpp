#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "zipfaug/corpus.hpp"

namespace testutil {

// Exact synthetic table f(r) = c / r^alpha over ranks 1..r_t.
inline zipfaug::FrequencyTable make_zipf_table(double alpha, double c, std::size_t r_t) {
  std::vector<std::pair<std::string, double>> items;
  items.reserve(r_t);
  for (std::size_t r = 1; r <= r_t; ++r)
    items.emplace_back("w" + std::to_string(r), c * std::pow(static_cast<double>(r), -alpha));
  return zipfaug::FrequencyTable::from_ordered(std::move(items));
}

inline zipfaug::Sentence make_sentence(const std::string& text, const std::string& doc_id = "doc",
                                       std::size_t sent_id = 0) {
  zipfaug::Sentence s;
  s.tokens = zipfaug::tokenize(text);
  s.doc_id = doc_id;
  s.sent_id = sent_id;
  return s;
}

// Continuous maximizer of the classical-law curvature, used as the
// independent oracle for the numeric argmax.
inline double closed_form_r0(double alpha, double c) {
  return std::pow(c * c * alpha * alpha * (2.0 * alpha + 1.0) / (alpha + 2.0),
                  1.0 / (2.0 * alpha + 2.0));
}

}  // namespace testutil
