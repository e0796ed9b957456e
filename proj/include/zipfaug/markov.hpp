#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "zipfaug/corpus.hpp"

namespace zipfaug {

// Order-k token Markov chain with additive smoothing. Sentence starts are
// padded with k boundary symbols; every sentence contributes one end symbol.
class MarkovModel {
 public:
  static constexpr const char* kBoundary = "<s>";
  static constexpr const char* kEnd = "</s>";

  MarkovModel() = default;

  int order() const { return order_; }
  double smoothing() const { return smoothing_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  // Smoothed P(next | last k tokens of context). Tokens outside the
  // vocabulary have probability zero; they are never sampled.
  double probability(const std::vector<std::string>& context, const std::string& next) const {
    auto idx = index_of(next);
    if (idx < 0) return 0.0;
    const std::string key = context_key(context);
    const auto* dist = find_dist(key);
    const double total = dist ? totals_.at(key) : 0.0;
    double count = 0;
    if (dist) {
      auto it = dist->find(static_cast<int>(idx));
      if (it != dist->end()) count = static_cast<double>(it->second);
    }
    const double v = static_cast<double>(vocab_.size());
    if (smoothing_ == 0) return total > 0 ? count / total : 0.0;
    return (count + smoothing_) / (total + smoothing_ * v);
  }

 private:
  int order_ = 2;
  double smoothing_ = 0.01;
  std::vector<std::string> vocab_;  // sorted; ids are indices
  std::unordered_map<std::string, int> vocab_index_;
  // context key -> next-token counts, keyed by vocab id (ordered for
  // deterministic sampling walks)
  std::unordered_map<std::string, std::map<int, std::uint64_t>> transitions_;
  std::unordered_map<std::string, std::uint64_t> totals_;

  long index_of(const std::string& token) const {
    auto it = vocab_index_.find(token);
    return it == vocab_index_.end() ? -1 : it->second;
  }

  const std::map<int, std::uint64_t>* find_dist(const std::string& key) const {
    auto it = transitions_.find(key);
    return it == transitions_.end() ? nullptr : &it->second;
  }

  // Last `order_` tokens, left-padded with the boundary symbol.
  std::string context_key(const std::vector<std::string>& context) const {
    std::string key;
    const std::size_t k = static_cast<std::size_t>(order_);
    for (std::size_t i = 0; i < k; ++i) {
      if (i) key += '\x1f';
      const std::size_t need = k - i;
      key += need > context.size() ? kBoundary : context[context.size() - need];
    }
    return key;
  }

  friend MarkovModel train_markov(const std::vector<Sentence>& sentences, int k,
                                  double smoothing);
  friend std::vector<std::string> generate(const MarkovModel& model,
                                           const std::vector<std::string>& prompt,
                                           std::size_t max_len, std::uint64_t seed);
};

inline MarkovModel train_markov(const std::vector<Sentence>& sentences, int k,
                                double smoothing) {
  if (k < 1) throw std::invalid_argument("markov order must be >= 1");
  if (smoothing < 0) throw std::invalid_argument("smoothing must be >= 0");
  if (sentences.empty()) throw std::invalid_argument("markov training set is empty");

  MarkovModel model;
  model.order_ = k;
  model.smoothing_ = smoothing;

  std::map<std::string, int> vocab_sorted;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens) vocab_sorted.emplace(t.surface, 0);
  vocab_sorted.emplace(MarkovModel::kEnd, 0);
  for (auto& [token, id] : vocab_sorted) {
    id = static_cast<int>(model.vocab_.size());
    model.vocab_.push_back(token);
    model.vocab_index_.emplace(token, id);
  }

  for (const auto& s : sentences) {
    std::vector<std::string> seq(static_cast<std::size_t>(k), MarkovModel::kBoundary);
    for (const auto& t : s.tokens) seq.push_back(t.surface);
    seq.push_back(MarkovModel::kEnd);
    for (std::size_t i = static_cast<std::size_t>(k); i < seq.size(); ++i) {
      std::vector<std::string> ctx(seq.begin() + (i - k), seq.begin() + i);
      const std::string key = model.context_key(ctx);
      const int next = model.vocab_index_.at(seq[i]);
      model.transitions_[key][next] += 1;
      model.totals_[key] += 1;
    }
  }
  return model;
}

// Samples a continuation of `prompt` (the prompt itself is not echoed),
// stopping at the end symbol or after max_len tokens. Identical
// (model, prompt, max_len, seed) yield identical output.
inline std::vector<std::string> generate(const MarkovModel& model,
                                         const std::vector<std::string>& prompt,
                                         std::size_t max_len, std::uint64_t seed) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::string> window(static_cast<std::size_t>(model.order_),
                                  MarkovModel::kBoundary);
  for (const auto& t : prompt) window.push_back(t);

  std::vector<std::string> out;
  const double v = static_cast<double>(model.vocab_.size());
  while (out.size() < max_len) {
    const std::string key = model.context_key(window);
    const auto* dist = model.find_dist(key);
    const double total = dist ? static_cast<double>(model.totals_.at(key)) : 0.0;
    int picked = -1;
    if (model.smoothing_ == 0) {
      if (!dist || total <= 0) break;  // dead end without smoothing
      std::uniform_real_distribution<double> u(0.0, total);
      double x = u(rng);
      for (const auto& [id, count] : *dist) {
        x -= static_cast<double>(count);
        if (x < 0) {
          picked = id;
          break;
        }
      }
      if (picked < 0) picked = dist->rbegin()->first;
    } else {
      std::uniform_real_distribution<double> u(0.0, total + model.smoothing_ * v);
      double x = u(rng);
      if (dist) {
        for (const auto& [id, count] : *dist) {
          const double w = static_cast<double>(count) + model.smoothing_;
          if (x < w) {
            picked = id;
            break;
          }
          x -= w;
        }
      }
      if (picked < 0) {
        // Landed in the smoothed mass of unobserved tokens: x / smoothing
        // selects the j-th vocabulary id not present in the distribution.
        std::size_t j = static_cast<std::size_t>(x / model.smoothing_);
        std::size_t id = 0;
        auto it = dist ? dist->begin() : decltype(dist->begin()){};
        auto end = dist ? dist->end() : decltype(dist->end()){};
        while (id < model.vocab_.size()) {
          if (dist && it != end && static_cast<int>(id) == it->first) {
            ++it;
            ++id;
            continue;
          }
          if (j == 0) break;
          --j;
          ++id;
        }
        picked = static_cast<int>(std::min(id, model.vocab_.size() - 1));
      }
    }
    const std::string& token = model.vocab_[static_cast<std::size_t>(picked)];
    if (token == MarkovModel::kEnd) break;
    out.push_back(token);
    window.push_back(token);
  }
  return out;
}

}  // namespace zipfaug
