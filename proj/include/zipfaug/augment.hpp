#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zipfaug/classify.hpp"
#include "zipfaug/corpus.hpp"
#include "zipfaug/generator.hpp"
#include "zipfaug/labeler.hpp"
#include "zipfaug/zipf.hpp"

namespace zipfaug {

enum class Provenance { Raw, Generated };

inline const char* to_string(Provenance p) {
  return p == Provenance::Raw ? "raw" : "generated";
}

struct LabeledSentence {
  Sentence sentence;  // token labels carry the BIO tags
  Provenance provenance = Provenance::Raw;

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(sentence.tokens.size());
    for (const auto& t : sentence.tokens) out.push_back(t.label);
    return out;
  }
};

struct LabeledDataset {
  std::vector<LabeledSentence> sentences;
  std::vector<std::string> categories;  // sorted category universe

  std::map<std::string, std::size_t> entity_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& c : categories) counts[c] = 0;
    for (const auto& ls : sentences)
      for (const auto& t : ls.sentence.tokens)
        if (t.label.size() > 2 && t.label[0] == 'B' && t.label[1] == '-')
          counts[t.label.substr(2)] += 1;
    return counts;
  }

  std::size_t total_entities() const {
    std::size_t total = 0;
    for (const auto& [cat, n] : entity_counts()) total += n;
    return total;
  }
};

namespace detail {

inline std::vector<std::string> observed_categories(const std::vector<LabeledSentence>& sentences) {
  std::set<std::string> cats;
  for (const auto& ls : sentences)
    for (const auto& t : ls.sentence.tokens)
      if (t.label.size() > 2 && (t.label[0] == 'B' || t.label[0] == 'I') && t.label[1] == '-')
        cats.insert(t.label.substr(2));
  return {cats.begin(), cats.end()};
}

inline std::vector<std::string> category_universe(const std::vector<LabeledSentence>& sentences) {
  std::set<std::string> cats(entity_categories().begin(), entity_categories().end());
  for (auto& c : observed_categories(sentences)) cats.insert(c);
  return {cats.begin(), cats.end()};
}

inline std::string sentence_key(const Sentence& s) {
  std::string key;
  for (const auto& t : s.tokens) {
    key += t.surface;
    key += '\x1f';
  }
  return key;
}

}  // namespace detail

// Builds a dataset from an ingested corpus, validating BIO well-formedness.
inline LabeledDataset dataset_from_corpus(const Corpus& corpus, Provenance provenance) {
  LabeledDataset ds;
  for (const auto& doc : corpus.documents)
    for (const auto& sent : doc.sentences) {
      LabeledSentence ls{sent, provenance};
      if (!bio_well_formed(ls.labels()))
        throw std::invalid_argument("sentence " + sent.doc_id + "/" +
                                    std::to_string(sent.sent_id) +
                                    " has a malformed BIO label sequence");
      ds.sentences.push_back(std::move(ls));
    }
  ds.categories = detail::category_universe(ds.sentences);
  return ds;
}

inline void write_dataset_conll(const LabeledDataset& dataset, std::ostream& os) {
  for (const auto& ls : dataset.sentences) {
    for (const auto& t : ls.sentence.tokens) os << t.surface << ' ' << t.label << "\n";
    os << "\n";
  }
}

struct ImbalanceReport {
  bool has_entities = false;
  std::map<std::string, std::size_t> category_counts;
  FrequencyTable entity_table;       // items are "surface\tcategory"
  std::size_t n_entity_mentions = 0; // total labeled spans
  std::size_t freq1_count = 0;       // distinct entities occurring once
  double freq1_share = 0;            // freq1_count / r_t
  std::optional<ClassicalFit> fit;   // absent when r_t < 2
  std::string fit_note;
  ExclusionCurve exclusion;
};

// Extracts entity surfaces from the BIO labels, fits the entity-level
// frequency-rank distribution, and runs the progressive-exclusion sweep.
inline ImbalanceReport imbalance_report(const LabeledDataset& dataset,
                                        long exclusion_n_max = 40) {
  if (dataset.sentences.empty())
    throw std::invalid_argument("imbalance report needs a non-empty dataset");
  ImbalanceReport report;
  report.category_counts = dataset.entity_counts();

  std::vector<std::string> mentions;
  for (const auto& ls : dataset.sentences) {
    std::vector<BIORecord> records;
    records.reserve(ls.sentence.tokens.size());
    for (const auto& t : ls.sentence.tokens) records.push_back(BIORecord{t.surface, t.label});
    for (const auto& span : spans_from_bio(records))
      mentions.push_back(span.surface + '\t' + span.category);
  }
  report.n_entity_mentions = mentions.size();
  if (mentions.empty()) return report;  // empty-report marker, not an error

  report.has_entities = true;
  report.entity_table = build_frequency_table(mentions);
  for (const auto& e : report.entity_table.entries())
    if (e.frequency == 1.0) ++report.freq1_count;
  report.freq1_share =
      static_cast<double>(report.freq1_count) / static_cast<double>(report.entity_table.total_rank());
  try {
    report.fit = fit_classical(report.entity_table);
  } catch (const InsufficientData& e) {
    report.fit_note = e.what();
  }
  if (report.fit) report.exclusion = progressive_exclusion(report.entity_table, exclusion_n_max);
  return report;
}

// Concatenation; generated sentences that duplicate an already-present token
// sequence are dropped. Raw sentences are never removed.
inline LabeledDataset merge(const LabeledDataset& raw, const LabeledDataset& generated) {
  if (raw.categories != generated.categories)
    throw std::invalid_argument("tagset mismatch: datasets carry different category sets");
  LabeledDataset out;
  out.categories = raw.categories;
  std::set<std::string> seen;
  for (const auto& ls : raw.sentences) {
    seen.insert(detail::sentence_key(ls.sentence));
    out.sentences.push_back(ls);
  }
  for (const auto& ls : generated.sentences) {
    if (!seen.insert(detail::sentence_key(ls.sentence)).second) continue;
    out.sentences.push_back(ls);
  }
  return out;
}

// Random, seed-deterministic partition into train/test/validation whose sizes
// are within one sentence of the exact proportions.
inline std::array<LabeledDataset, 3> split_dataset(const LabeledDataset& dataset, double train,
                                                   double test, double val,
                                                   std::uint64_t seed) {
  if (train <= 0 || test <= 0 || val <= 0)
    throw std::invalid_argument("split ratios must be positive");
  if (std::abs(train + test + val - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");
  const std::size_t n = dataset.sentences.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto dn = static_cast<double>(n);
  const std::size_t c1 = static_cast<std::size_t>(std::llround(dn * train));
  const std::size_t c12 = static_cast<std::size_t>(std::llround(dn * (train + test)));
  std::vector<int> bucket(n, 2);
  for (std::size_t i = 0; i < n; ++i) bucket[order[i]] = i < c1 ? 0 : (i < c12 ? 1 : 2);

  std::array<LabeledDataset, 3> out;
  for (auto& d : out) d.categories = dataset.categories;
  for (std::size_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(bucket[i])].sentences.push_back(dataset.sentences[i]);
  return out;
}

enum class ResampleMode { Ros, Rus };

struct ResampleResult {
  LabeledDataset dataset;
  bool reached_target = true;
  std::string note;
};

// ROS duplicates sentences containing the target (minority) category until
// its entity count reaches the current majority count; RUS removes sentences
// whose entities all belong to other categories until none of them exceeds
// the target count. Both are deterministic per seed and degrade to a
// best-effort result with a note when the target cannot be reached.
inline ResampleResult resample(const LabeledDataset& dataset, ResampleMode mode,
                               const std::string& target, std::uint64_t seed) {
  auto counts = dataset.entity_counts();
  auto it = counts.find(target);
  if (it == counts.end() || it->second == 0)
    throw std::invalid_argument("resample target category `" + target +
                                "` is not present in the dataset");
  std::mt19937_64 rng(seed);

  auto sentence_counts = [&](const LabeledSentence& ls) {
    std::map<std::string, std::size_t> c;
    for (const auto& t : ls.sentence.tokens)
      if (t.label.size() > 2 && t.label[0] == 'B' && t.label[1] == '-')
        c[t.label.substr(2)] += 1;
    return c;
  };
  auto max_other = [&](const std::map<std::string, std::size_t>& c) {
    std::size_t best = 0;
    for (const auto& [cat, n] : c)
      if (cat != target) best = std::max(best, n);
    return best;
  };

  ResampleResult result;
  result.dataset.categories = dataset.categories;

  if (mode == ResampleMode::Ros) {
    result.dataset.sentences = dataset.sentences;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < dataset.sentences.size(); ++i)
      if (sentence_counts(dataset.sentences[i]).count(target)) candidates.push_back(i);
    const std::size_t cap = 50 * (dataset.sentences.size() + 10);
    std::size_t added = 0;
    while (counts[target] < max_other(counts)) {
      if (added >= cap) {
        result.reached_target = false;
        result.note = "oversampling capped after " + std::to_string(added) +
                      " duplications without reaching the majority count";
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const auto& chosen = dataset.sentences[candidates[pick(rng)]];
      result.dataset.sentences.push_back(chosen);
      for (const auto& [cat, n] : sentence_counts(chosen)) counts[cat] += n;
      ++added;
    }
    return result;
  }

  // RUS
  std::vector<bool> removed(dataset.sentences.size(), false);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < dataset.sentences.size(); ++i) {
    auto c = sentence_counts(dataset.sentences[i]);
    if (!c.empty() && c.count(target) == 0) candidates.push_back(i);
  }
  while (max_other(counts) > counts[target]) {
    if (candidates.empty()) {
      result.reached_target = false;
      result.note = "undersampling exhausted removable sentences before reaching balance";
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const std::size_t slot = pick(rng);
    const std::size_t idx = candidates[slot];
    candidates[slot] = candidates.back();
    candidates.pop_back();
    removed[idx] = true;
    for (const auto& [cat, n] : sentence_counts(dataset.sentences[idx])) counts[cat] -= n;
  }
  for (std::size_t i = 0; i < dataset.sentences.size(); ++i)
    if (!removed[i]) result.dataset.sentences.push_back(dataset.sentences[i]);
  return result;
}

struct SweepRow {
  int offset_pct = 0;
  std::string label;
  bool feasible = false;
  std::size_t r0 = 0;
  std::size_t n_common = 0;
  std::size_t n_rare = 0;
  std::size_t n_inductive = 0;
  std::size_t n_expanded = 0;
};

struct SweepReport {
  std::size_t baseline_r0 = 0;
  std::string formula;
  std::vector<SweepRow> rows;
};

// Shifts r0 by a percentage of the one-sided rank span (r0-1 below, r_t-r0
// above), re-partitions, and records the implied generation counts without
// generating. Offsets beyond +-50% or shifts leaving [1, r_t] mark the row
// infeasible.
inline SweepReport r0_sweep(const Corpus& corpus, const FrequencyTable& table,
                            const SplitPoint& baseline, const std::vector<int>& offsets_pct) {
  SweepReport report;
  report.baseline_r0 = baseline.r0;
  report.formula =
      "r0' = r0 + round(pct/100 * span), span = r0-1 below r0 and r_t-r0 above";
  const auto sentences = corpus.sentences();
  const long r_t = static_cast<long>(table.total_rank());
  for (int pct : offsets_pct) {
    SweepRow row;
    row.offset_pct = pct;
    row.label = (pct > 0 ? "+" : "") + std::to_string(pct) + "%";
    const long span = pct < 0 ? static_cast<long>(baseline.r0) - 1
                              : r_t - static_cast<long>(baseline.r0);
    const long shifted = static_cast<long>(baseline.r0) +
                         std::lround(static_cast<double>(pct) / 100.0 *
                                     static_cast<double>(span));
    if (pct < -50 || pct > 50 || shifted < 1 || shifted > r_t) {
      report.rows.push_back(std::move(row));
      continue;
    }
    row.feasible = true;
    row.r0 = static_cast<std::size_t>(shifted);
    auto map = classify_words(table, SplitPoint{row.r0, SplitMethod::Manual});
    auto partition = partition_sentences(sentences, map);
    row.n_common = partition.common_sentences.size();
    row.n_rare = partition.rare_sentences.size();
    row.n_inductive = row.n_common;
    row.n_expanded = 2 * row.n_rare;
    report.rows.push_back(std::move(row));
  }
  return report;
}

enum class ZipfLaw { Classical, Extended };

inline const char* to_string(ZipfLaw law) {
  return law == ZipfLaw::Classical ? "classical" : "extended";
}

struct StageError : std::runtime_error {
  std::string stage;
  StageError(const std::string& stage_name, const std::string& msg)
      : std::runtime_error("[" + stage_name + "] " + msg), stage(stage_name) {}
};

struct PipelineConfig {
  ZipfLaw law = ZipfLaw::Classical;
  std::optional<std::pair<long, long>> beta_grid;  // default grid when absent
  int markov_order = 2;
  double markov_smoothing = 0.01;
  std::shared_ptr<TextGenerator> backend;  // null: markov trained on the corpus
  OrchestratorConfig generation;
  std::vector<CompiledRule> rules;
  bool use_builtin_rules = true;
  PosLexicon pos_lexicon;
  std::string default_pos = "n";
  TriggerLexicon triggers;
  BioGranularity granularity = BioGranularity::Word;
  long exclusion_n_max = 40;
};

struct PipelineResult {
  // fit stage
  FrequencyTable word_table;
  std::optional<ClassicalFit> classical_fit;
  std::optional<ExtendedFit> extended_fit;
  SplitPoint split;
  // partition + generation stages
  SentencePartition partition;
  GenerationBatch batch;
  std::string backend_id;
  // labeling stage
  LabeledDataset generated;  // labeled generated sentences only
  std::size_t spans_labeled = 0;
  std::size_t spans_rejected_by_trigger = 0;
  std::size_t outputs_without_spans = 0;
  // merge stage
  LabeledDataset raw;
  LabeledDataset augmented;
  std::size_t duplicates_removed = 0;
  // reports
  ImbalanceReport before;
  ImbalanceReport after;
  std::vector<std::pair<std::string, double>> stage_ms;
};

// Fig-1 pipeline: fit -> r0 -> word classes -> sentence partition ->
// generation -> rule labeling (trigger-verified) -> merge -> reports.
// Generated sentences that end up with no verified span are not added to the
// dataset; an empty rule set therefore leaves the dataset unchanged.
// On a stage error, `result` keeps the output of every completed stage so
// callers can persist partial artifacts before surfacing the failure.
inline void run_pipeline_into(const Corpus& corpus, const PipelineConfig& config,
                              PipelineResult& result) {
  auto stage = [&result](const char* name, auto&& fn) {
    const auto started = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - started);
    result.stage_ms.emplace_back(name, elapsed.count());
  };

  stage("fit", [&] {
    result.word_table = word_frequency_table(corpus);
    if (config.law == ZipfLaw::Classical) {
      result.classical_fit = fit_classical(result.word_table);
      result.split = find_r0_classical(*result.classical_fit, result.word_table.total_rank());
    } else {
      auto grid = config.beta_grid ? *config.beta_grid : default_beta_grid(result.word_table);
      result.extended_fit = fit_extended(result.word_table, grid.first, grid.second);
      result.split = find_r0_extended(*result.extended_fit);
    }
  });

  WordClassMap word_classes;
  stage("word-classes",
        [&] { word_classes = classify_words(result.word_table, result.split); });

  stage("partition", [&] {
    result.partition = partition_sentences(corpus.sentences(), word_classes);
  });

  std::shared_ptr<TextGenerator> backend = config.backend;
  stage("generation", [&] {
    if (!backend) {
      auto model =
          train_markov(corpus.sentences(), config.markov_order, config.markov_smoothing);
      backend = std::make_shared<MarkovGenerator>(std::move(model));
    }
    result.backend_id = backend->id();
    result.batch = orchestrate(result.partition, *backend, config.generation);
  });

  stage("labeling", [&] {
    std::vector<CompiledRule> rules;
    if (config.use_builtin_rules) {
      rules.push_back(builtin_material_rule());
      rules.push_back(builtin_equipment_rule());
    }
    for (const auto& r : config.rules) rules.push_back(r);

    for (std::size_t out_idx = 0; out_idx < result.batch.outputs.size(); ++out_idx) {
      const auto& g = result.batch.outputs[out_idx];
      Sentence sent;
      sent.doc_id = std::string(to_string(g.kind)) + ":" + g.source_doc_id + "/" +
                    std::to_string(g.source_sent_id);
      sent.sent_id = out_idx;
      for (std::size_t i = 0; i < g.tokens.size(); ++i)
        sent.tokens.push_back(Token{g.tokens[i], i});
      if (sent.tokens.empty()) {
        ++result.outputs_without_spans;
        continue;
      }
      auto units = pos_tag(sent, config.pos_lexicon, config.default_pos);
      auto spans = apply_rules(rules, units);
      std::vector<EntitySpan> verified;
      for (auto& span : spans) {
        if (verify_triggers(span, config.triggers))
          verified.push_back(std::move(span));
        else
          ++result.spans_rejected_by_trigger;
      }
      if (verified.empty()) {
        ++result.outputs_without_spans;
        continue;
      }
      auto records = emit_bio(sent, verified, config.granularity);
      Sentence labeled;
      labeled.doc_id = sent.doc_id;
      labeled.sent_id = sent.sent_id;
      for (std::size_t i = 0; i < records.size(); ++i)
        labeled.tokens.push_back(Token{records[i].token, i, records[i].label});
      result.spans_labeled += verified.size();
      result.generated.sentences.push_back(
          LabeledSentence{std::move(labeled), Provenance::Generated});
    }
  });

  stage("merge", [&] {
    result.raw = dataset_from_corpus(corpus, Provenance::Raw);
    result.generated.categories = result.raw.categories;
    result.augmented = merge(result.raw, result.generated);
    result.duplicates_removed = result.raw.sentences.size() +
                                result.generated.sentences.size() -
                                result.augmented.sentences.size();
  });

  stage("report", [&] {
    result.before = imbalance_report(result.raw, config.exclusion_n_max);
    result.after = imbalance_report(result.augmented, config.exclusion_n_max);
  });
}

inline PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config) {
  PipelineResult result;
  run_pipeline_into(corpus, config, result);
  return result;
}

}  // namespace zipfaug
