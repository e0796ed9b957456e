#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zipfaug/classify.hpp"
#include "zipfaug/markov.hpp"
#include "zipfaug/strings.hpp"

namespace zipfaug {

struct GeneratorRequest {
  std::string prompt;
  std::size_t max_length = 500;
  std::size_t num_return = 1;
  std::uint64_t seed = 0;
};

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> generate(const GeneratorRequest& request) = 0;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9E3779B97F4A7C15ull * (b + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

class MarkovGenerator : public TextGenerator {
 public:
  explicit MarkovGenerator(MarkovModel model) : model_(std::move(model)) {}

  std::string id() const override { return "markov-k" + std::to_string(model_.order()); }

  std::vector<std::string> generate(const GeneratorRequest& request) override {
    std::vector<std::string> outputs;
    const auto prompt_tokens = split_whitespace(request.prompt);
    for (std::size_t j = 0; j < request.num_return; ++j) {
      auto tokens = zipfaug::generate(model_, prompt_tokens, request.max_length,
                                      mix_seed(request.seed, j));
      outputs.push_back(join(tokens));
    }
    return outputs;
  }

  const MarkovModel& model() const { return model_; }

 private:
  MarkovModel model_;
};

enum class GenerationKind { Expanded, Inductive };

inline const char* to_string(GenerationKind k) {
  return k == GenerationKind::Expanded ? "expanded" : "inductive";
}

struct GeneratedSentence {
  std::vector<std::string> tokens;
  GenerationKind kind = GenerationKind::Expanded;
  std::string source_doc_id;
  std::size_t source_sent_id = 0;
  std::string backend_id;
  std::uint64_t seed = 0;
};

struct GenerationFailure {
  std::string source_doc_id;
  std::size_t source_sent_id = 0;
  GenerationKind kind = GenerationKind::Expanded;
  std::string reason;
};

struct GenerationBatch {
  std::vector<GeneratedSentence> outputs;
  std::size_t n_inductive = 0;
  std::size_t n_expanded = 0;
  std::vector<GenerationFailure> failures;
};

struct OrchestrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrchestratorConfig {
  std::size_t expanded_max_tokens = 500;
  std::size_t inductive_max_tokens = 64;
  std::string inductive_prompt_prefix = "summarize :";
  double failure_threshold = 0.10;  // abort above this source failure rate
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

namespace detail {

struct GenTask {
  GenerationKind kind = GenerationKind::Expanded;
  const Sentence* source = nullptr;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  std::size_t max_tokens = 0;
  std::string prompt;
};

}  // namespace detail

// One inductive output per common sentence, two expanded outputs (distinct
// seeds) per rare sentence, expanded outputs truncated to the configured cap.
// A rare sentence whose replicas do not both succeed is dropped entirely so
// the 2x count law stays exact; failures are recorded, never silently lost.
inline GenerationBatch orchestrate(const SentencePartition& partition, TextGenerator& backend,
                                   const OrchestratorConfig& config = {}) {
  std::vector<detail::GenTask> tasks;
  std::uint64_t ordinal = 0;
  for (const auto& s : partition.common_sentences) {
    detail::GenTask t;
    t.kind = GenerationKind::Inductive;
    t.source = &s;
    t.seed = mix_seed(config.seed, ordinal++);
    t.max_tokens = config.inductive_max_tokens;
    t.prompt = config.inductive_prompt_prefix.empty()
                   ? s.text()
                   : config.inductive_prompt_prefix + " " + s.text();
    tasks.push_back(std::move(t));
  }
  for (const auto& s : partition.rare_sentences) {
    for (std::size_t replica = 0; replica < 2; ++replica) {
      detail::GenTask t;
      t.kind = GenerationKind::Expanded;
      t.source = &s;
      t.replica = replica;
      t.seed = mix_seed(config.seed, ordinal++);
      t.max_tokens = config.expanded_max_tokens;
      t.prompt = s.text();
      tasks.push_back(std::move(t));
    }
  }

  std::vector<std::optional<std::vector<std::string>>> results(tasks.size());
  std::vector<std::string> errors(tasks.size());
  auto run_task = [&](std::size_t i) {
    const auto& t = tasks[i];
    GeneratorRequest req;
    req.prompt = t.prompt;
    req.max_length = t.max_tokens;
    req.num_return = 1;
    req.seed = t.seed;
    try {
      auto outs = backend.generate(req);
      if (outs.size() != 1)
        throw OrchestrationError("backend returned " + std::to_string(outs.size()) +
                                 " outputs for a single-output request");
      auto tokens = split_whitespace(outs[0]);
      if (tokens.size() > t.max_tokens) tokens.resize(t.max_tokens);
      results[i] = std::move(tokens);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(tasks.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < tasks.size(); i += threads) run_task(i);
      });
    for (auto& th : pool) th.join();
  }

  GenerationBatch batch;
  const std::string backend_id = backend.id();
  std::size_t failed_sources = 0;
  std::size_t i = 0;
  for (; i < partition.common_sentences.size(); ++i) {
    const auto& t = tasks[i];
    if (results[i]) {
      GeneratedSentence g;
      g.tokens = std::move(*results[i]);
      g.kind = GenerationKind::Inductive;
      g.source_doc_id = t.source->doc_id;
      g.source_sent_id = t.source->sent_id;
      g.backend_id = backend_id;
      g.seed = t.seed;
      batch.outputs.push_back(std::move(g));
      ++batch.n_inductive;
    } else {
      ++failed_sources;
      batch.failures.push_back(GenerationFailure{t.source->doc_id, t.source->sent_id,
                                                 GenerationKind::Inductive, errors[i]});
    }
  }
  for (std::size_t r = 0; r < partition.rare_sentences.size(); ++r) {
    const std::size_t first = i + 2 * r;
    const auto& t0 = tasks[first];
    if (results[first] && results[first + 1]) {
      for (std::size_t replica = 0; replica < 2; ++replica) {
        const auto& t = tasks[first + replica];
        GeneratedSentence g;
        g.tokens = std::move(*results[first + replica]);
        g.kind = GenerationKind::Expanded;
        g.source_doc_id = t.source->doc_id;
        g.source_sent_id = t.source->sent_id;
        g.backend_id = backend_id;
        g.seed = t.seed;
        batch.outputs.push_back(std::move(g));
        ++batch.n_expanded;
      }
    } else {
      ++failed_sources;
      for (std::size_t replica = 0; replica < 2; ++replica)
        if (!results[first + replica])
          batch.failures.push_back(GenerationFailure{t0.source->doc_id, t0.source->sent_id,
                                                     GenerationKind::Expanded,
                                                     errors[first + replica]});
    }
  }

  const std::size_t total_sources =
      partition.common_sentences.size() + partition.rare_sentences.size();
  if (total_sources > 0) {
    const double rate = static_cast<double>(failed_sources) / static_cast<double>(total_sources);
    if (rate > config.failure_threshold) {
      std::string msg = "generation failure rate " + std::to_string(rate) + " exceeds threshold " +
                        std::to_string(config.failure_threshold) + " (" +
                        std::to_string(failed_sources) + "/" + std::to_string(total_sources) +
                        " sources failed";
      if (!batch.failures.empty()) msg += "; first: " + batch.failures.front().reason;
      msg += ")";
      throw OrchestrationError(msg);
    }
  }
  return batch;
}

}  // namespace zipfaug
