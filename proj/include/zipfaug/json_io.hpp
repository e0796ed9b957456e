#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipfaug/augment.hpp"

namespace zipfaug {

using json = nlohmann::json;

inline json to_json(const RankRange& range) {
  return json{{"lo", range.lo}, {"hi", range.hi}};
}

inline json to_json(const ClassicalFit& fit) {
  return json{{"method", "classical"},
              {"alpha", fit.alpha},
              {"c", fit.c},
              {"r_squared", fit.r_squared},
              {"domain", to_json(fit.fit_domain)}};
}

inline json to_json(const ExtendedFit& fit) {
  return json{{"method", "extended"},
              {"alpha", fit.alpha},
              {"c", fit.c},
              {"beta", fit.beta},
              {"r_squared", fit.r_squared},
              {"domain", to_json(fit.fit_domain)}};
}

inline json fit_report_json(const std::optional<ClassicalFit>& classical,
                            const std::optional<ExtendedFit>& extended, const SplitPoint& split,
                            std::size_t r_t) {
  json out = classical ? to_json(*classical) : to_json(*extended);
  out["r0"] = split.r0;
  out["r0_method"] = to_string(split.method);
  out["r_t"] = r_t;
  return out;
}

struct FitFile {
  std::string method;
  double alpha = 0;
  double c = 0;
  double beta = 0;
  double r_squared = 0;
  std::size_t r0 = 0;
  std::size_t r_t = 0;
};

inline FitFile parse_fit_file(const json& j) {
  FitFile f;
  try {
    f.method = j.at("method").get<std::string>();
    f.alpha = j.at("alpha").get<double>();
    f.c = j.at("c").get<double>();
    if (j.contains("beta")) f.beta = j.at("beta").get<double>();
    f.r_squared = j.at("r_squared").get<double>();
    f.r0 = j.at("r0").get<std::size_t>();
    f.r_t = j.at("r_t").get<std::size_t>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed fit report: ") + e.what());
  }
  if (f.method != "classical" && f.method != "extended")
    throw std::invalid_argument("fit report method must be classical or extended");
  if (f.r0 < 1 || f.r0 > f.r_t) throw std::invalid_argument("fit report r0 outside [1, r_t]");
  return f;
}

inline json to_json(const ExclusionCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points)
    points.push_back(json{{"n", p.excluded}, {"r_squared", p.r_squared}, {"survivors", p.survivors}});
  return points;
}

inline json to_json(const ImbalanceReport& report) {
  json out;
  out["has_entities"] = report.has_entities;
  out["category_counts"] = report.category_counts;
  out["n_entity_mentions"] = report.n_entity_mentions;
  out["n_distinct_entities"] = report.entity_table.total_rank();
  out["freq1_count"] = report.freq1_count;
  out["freq1_share"] = report.freq1_share;
  if (report.fit)
    out["fit"] = to_json(*report.fit);
  else
    out["fit"] = nullptr;
  if (!report.fit_note.empty()) out["fit_note"] = report.fit_note;
  out["exclusion"] = to_json(report.exclusion);
  return out;
}

inline json to_json(const SweepReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row{{"offset", r.label},     {"offset_pct", r.offset_pct},
             {"feasible", r.feasible}, {"r0", r.r0},
             {"n_common", r.n_common}, {"n_rare", r.n_rare},
             {"n_inductive", r.n_inductive}, {"n_expanded", r.n_expanded}};
    rows.push_back(std::move(row));
  }
  return json{{"baseline_r0", report.baseline_r0}, {"formula", report.formula}, {"rows", rows}};
}

inline void sweep_to_csv(const SweepReport& report, std::ostream& os) {
  os << "offset_pct,feasible,r0,n_common,n_rare,n_inductive,n_expanded\n";
  for (const auto& r : report.rows)
    os << r.offset_pct << ',' << (r.feasible ? 1 : 0) << ',' << r.r0 << ',' << r.n_common << ','
       << r.n_rare << ',' << r.n_inductive << ',' << r.n_expanded << "\n";
}

inline json to_json(const GenerationFailure& failure) {
  return json{{"source_doc_id", failure.source_doc_id},
              {"source_sent_id", failure.source_sent_id},
              {"kind", to_string(failure.kind)},
              {"reason", failure.reason}};
}

inline void write_generated_jsonl(const GenerationBatch& batch, std::ostream& os) {
  for (const auto& g : batch.outputs) {
    json row{{"kind", to_string(g.kind)},
             {"source_doc_id", g.source_doc_id},
             {"source_sent_id", g.source_sent_id},
             {"backend", g.backend_id},
             {"seed", g.seed},
             {"text", join(g.tokens)}};
    os << row.dump() << "\n";
  }
}

inline json generation_counts_json(const GenerationBatch& batch) {
  json failures = json::array();
  for (const auto& f : batch.failures) failures.push_back(to_json(f));
  return json{{"n_inductive", batch.n_inductive},
              {"n_expanded", batch.n_expanded},
              {"n_failed", batch.failures.size()},
              {"failures", failures}};
}

// Rule files: JSON array of {family, body, category, priority?}; lower
// priority values are applied first and win overlap conflicts.
inline std::vector<RuleSpec> load_rule_specs(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("rule file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw std::invalid_argument("rule file must be a JSON array");
  std::vector<RuleSpec> specs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    RuleSpec spec;
    try {
      spec.family = row.at("family").get<std::string>();
      spec.body = row.at("body").get<std::string>();
      spec.category = row.at("category").get<std::string>();
      spec.priority = row.value("priority", static_cast<int>(i));
    } catch (const json::exception& e) {
      throw std::invalid_argument("rule " + std::to_string(i) + ": " + e.what());
    }
    specs.push_back(std::move(spec));
  }
  std::stable_sort(specs.begin(), specs.end(),
                   [](const RuleSpec& a, const RuleSpec& b) { return a.priority < b.priority; });
  return specs;
}

inline std::vector<CompiledRule> compile_rules(const std::vector<RuleSpec>& specs) {
  std::vector<CompiledRule> rules;
  rules.reserve(specs.size());
  for (const auto& s : specs) rules.push_back(compile_rule(s));
  return rules;
}

// Trigger lexicon: JSON object {category: [trigger words]}.
inline TriggerLexicon load_triggers(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("trigger file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("trigger file must be a JSON object");
  TriggerLexicon lex;
  for (const auto& [category, words] : j.items()) {
    if (!words.is_array())
      throw std::invalid_argument("trigger entry `" + category + "` must be an array");
    for (const auto& w : words) lex[category].push_back(w.get<std::string>());
  }
  return lex;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write file: " + path.string());
  os << content;
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("file " + path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace zipfaug
