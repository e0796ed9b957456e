// zipfaug: Zipf-law-driven augmentation toolkit for imbalanced
// sequence-labeling corpora. Subcommands expose each pipeline stage (fit,
// classify, generate, label, report, sweep) plus the end-to-end augment run.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/validation error.
// Logs go to stderr; every data artifact is a file under --out.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zipfaug/augment.hpp"
#include "zipfaug/json_io.hpp"
#include "zipfaug/markers.hpp"
#include "zipfaug/remote.hpp"

namespace fs = std::filesystem;
using zipfaug::json;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string corpus;
  std::string format = "plain-lines";
  std::string type_tag;
  std::string law = "classical";
  std::string beta_grid;  // "lo..hi"
  std::string backend = "markov";
  int markov_order = 2;
  double markov_smoothing = 0.01;
  std::string endpoint;
  int timeout_ms = 5000;
  int retries = 2;
  int backoff_ms = 100;
  std::size_t expanded_len = 500;
  std::size_t inductive_len = 64;
  std::string inductive_prefix = "summarize :";
  double failure_threshold = 0.10;
  std::string rules_path;
  bool no_builtin_rules = false;
  std::string pos_lexicon_path;
  std::string triggers_path;
  std::string default_pos = "n";
  std::string tagset = "chinese";
  std::string granularity = "word";
  long exclusion_max = 40;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  // per-command inputs
  std::string fit_report;
  std::string dataset;
  std::string input;
  std::string offsets = "-50,-30,-20,-10,0,10,20,30,50";
  std::string resample_mode;
  std::string resample_target = "MAT";
};

template <typename T>
void take(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void apply_config_file(Options& opt) {
  if (opt.config_path.empty()) return;
  json j = zipfaug::load_json_file(opt.config_path);
  take(j, "corpus", opt.corpus);
  take(j, "format", opt.format);
  take(j, "type_tag", opt.type_tag);
  take(j, "law", opt.law);
  take(j, "beta_grid", opt.beta_grid);
  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    take(b, "type", opt.backend);
    take(b, "order", opt.markov_order);
    take(b, "smoothing", opt.markov_smoothing);
    take(b, "endpoint", opt.endpoint);
    take(b, "timeout_ms", opt.timeout_ms);
    take(b, "retries", opt.retries);
    take(b, "backoff_ms", opt.backoff_ms);
  }
  if (j.contains("generation")) {
    const auto& g = j.at("generation");
    take(g, "expanded_len", opt.expanded_len);
    take(g, "inductive_len", opt.inductive_len);
    take(g, "prefix", opt.inductive_prefix);
    take(g, "failure_threshold", opt.failure_threshold);
  }
  take(j, "rules", opt.rules_path);
  take(j, "no_builtin_rules", opt.no_builtin_rules);
  take(j, "pos_lexicon", opt.pos_lexicon_path);
  take(j, "triggers", opt.triggers_path);
  take(j, "default_pos", opt.default_pos);
  take(j, "tagset", opt.tagset);
  take(j, "granularity", opt.granularity);
  take(j, "exclusion_max", opt.exclusion_max);
  take(j, "seed", opt.seed);
  take(j, "threads", opt.threads);
  take(j, "out", opt.out);
  take(j, "offsets", opt.offsets);

  // input paths in a config file are relative to the file itself
  const auto base = fs::path(opt.config_path).parent_path();
  for (std::string* path : {&opt.corpus, &opt.rules_path, &opt.pos_lexicon_path,
                            &opt.triggers_path, &opt.fit_report, &opt.dataset, &opt.input}) {
    if (path->empty()) continue;
    fs::path p(*path);
    if (p.is_relative()) *path = (base / p).lexically_normal().string();
  }
}

json options_json(const Options& o) {
  return json{{"corpus", o.corpus},
              {"format", o.format},
              {"type_tag", o.type_tag},
              {"law", o.law},
              {"beta_grid", o.beta_grid},
              {"backend",
               {{"type", o.backend},
                {"order", o.markov_order},
                {"smoothing", o.markov_smoothing},
                {"endpoint", o.endpoint},
                {"timeout_ms", o.timeout_ms},
                {"retries", o.retries},
                {"backoff_ms", o.backoff_ms}}},
              {"generation",
               {{"expanded_len", o.expanded_len},
                {"inductive_len", o.inductive_len},
                {"prefix", o.inductive_prefix},
                {"failure_threshold", o.failure_threshold}}},
              {"rules", o.rules_path},
              {"no_builtin_rules", o.no_builtin_rules},
              {"pos_lexicon", o.pos_lexicon_path},
              {"triggers", o.triggers_path},
              {"default_pos", o.default_pos},
              {"tagset", o.tagset},
              {"granularity", o.granularity},
              {"exclusion_max", o.exclusion_max},
              {"seed", o.seed},
              {"threads", o.threads}};
}

zipfaug::CorpusFormat parse_format_or_throw(const std::string& name) {
  auto f = zipfaug::parse_format(name);
  if (!f) throw ValidationError("unknown corpus format: " + name);
  return *f;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string(what) + " path is required");
  if (!fs::exists(path)) throw ValidationError(std::string(what) + " not found: " + path);
}

zipfaug::Corpus load_corpus(const Options& opt) {
  require_file(opt.corpus, "corpus");
  return zipfaug::ingest(opt.corpus, parse_format_or_throw(opt.format), opt.type_tag);
}

std::pair<long, long> parse_beta_grid(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos)
    throw ValidationError("beta grid must be `lo..hi`, got: " + text);
  try {
    return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ValidationError("beta grid must be `lo..hi`, got: " + text);
  }
}

std::vector<int> parse_offsets(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError("offsets must be comma-separated integers, got: " + text);
    }
  }
  if (out.empty()) throw ValidationError("offset list is empty");
  return out;
}

zipfaug::Tagset tagset_from_name(const std::string& name) {
  if (name == "chinese") return zipfaug::chinese_tagset();
  if (name == "penn") return zipfaug::penn_tagset();
  if (name == "open") return zipfaug::open_tagset();
  throw ValidationError("unknown tagset: " + name + " (expected chinese, penn or open)");
}

zipfaug::BioGranularity granularity_from_name(const std::string& name) {
  if (name == "word") return zipfaug::BioGranularity::Word;
  if (name == "char") return zipfaug::BioGranularity::Character;
  throw ValidationError("unknown granularity: " + name + " (expected word or char)");
}

fs::path ensure_out_dir(const Options& opt) {
  fs::path dir = opt.out.empty() ? fs::path("zipfaug-run") : fs::path(opt.out);
  fs::create_directories(dir);
  return dir;
}

void write_json_file(const fs::path& path, const json& j) {
  zipfaug::write_text_file(path, j.dump(2) + "\n");
}

void log_stage(const std::string& msg) { std::cerr << "[zipfaug] " << msg << "\n"; }

struct FitOutcome {
  zipfaug::FrequencyTable table;
  std::optional<zipfaug::ClassicalFit> classical;
  std::optional<zipfaug::ExtendedFit> extended;
  zipfaug::SplitPoint split;
};

FitOutcome run_fit(const zipfaug::Corpus& corpus, const Options& opt) {
  FitOutcome out;
  out.table = zipfaug::word_frequency_table(corpus);
  if (opt.law == "classical") {
    out.classical = zipfaug::fit_classical(out.table);
    out.split = zipfaug::find_r0_classical(*out.classical, out.table.total_rank());
  } else if (opt.law == "extended") {
    auto grid = opt.beta_grid.empty() ? zipfaug::default_beta_grid(out.table)
                                      : parse_beta_grid(opt.beta_grid);
    out.extended = zipfaug::fit_extended(out.table, grid.first, grid.second);
    out.split = zipfaug::find_r0_extended(*out.extended);
  } else {
    throw ValidationError("unknown law: " + opt.law + " (expected classical or extended)");
  }
  return out;
}

std::vector<zipfaug::CompiledRule> load_rules(const Options& opt) {
  std::vector<zipfaug::CompiledRule> rules;
  if (!opt.no_builtin_rules) {
    rules.push_back(zipfaug::builtin_material_rule());
    rules.push_back(zipfaug::builtin_equipment_rule());
  }
  if (!opt.rules_path.empty()) {
    require_file(opt.rules_path, "rule file");
    std::ifstream in(opt.rules_path);
    for (auto& rule : zipfaug::compile_rules(zipfaug::load_rule_specs(in)))
      rules.push_back(std::move(rule));
  }
  return rules;
}

zipfaug::PosLexicon load_pos_lexicon(const Options& opt) {
  zipfaug::PosLexicon lexicon;
  if (!opt.pos_lexicon_path.empty()) {
    require_file(opt.pos_lexicon_path, "pos lexicon");
    std::ifstream in(opt.pos_lexicon_path);
    lexicon = zipfaug::PosLexicon::load(in, tagset_from_name(opt.tagset));
  }
  return lexicon;
}

zipfaug::TriggerLexicon load_trigger_lexicon(const Options& opt) {
  zipfaug::TriggerLexicon triggers;
  if (!opt.triggers_path.empty()) {
    require_file(opt.triggers_path, "trigger lexicon");
    std::ifstream in(opt.triggers_path);
    triggers = zipfaug::load_triggers(in);
  }
  return triggers;
}

std::shared_ptr<zipfaug::TextGenerator> make_backend(const Options& opt,
                                                     const zipfaug::Corpus& corpus) {
  if (opt.backend == "markov") {
    auto model =
        zipfaug::train_markov(corpus.sentences(), opt.markov_order, opt.markov_smoothing);
    return std::make_shared<zipfaug::MarkovGenerator>(std::move(model));
  }
  if (opt.backend == "remote") {
    if (opt.endpoint.empty()) throw ValidationError("remote backend needs --endpoint");
    zipfaug::RemoteConfig rc;
    rc.endpoint = opt.endpoint;
    rc.timeout_ms = opt.timeout_ms;
    rc.max_retries = opt.retries;
    rc.backoff_ms = opt.backoff_ms;
    return std::make_shared<zipfaug::RemoteGenerator>(rc);
  }
  throw ValidationError("unknown backend: " + opt.backend + " (expected markov or remote)");
}

// GPT2r-style training file: every document serialized as one article.
void write_article_corpus(const zipfaug::Corpus& corpus, const fs::path& path) {
  zipfaug::ArticleCorpus articles;
  for (const auto& doc : corpus.documents) {
    std::vector<std::string> lines;
    for (const auto& s : doc.sentences) lines.push_back(s.text());
    if (!lines.empty()) articles.articles.push_back(std::move(lines));
  }
  zipfaug::write_text_file(path, zipfaug::serialize_articles(articles));
}

zipfaug::OrchestratorConfig orchestrator_config(const Options& opt) {
  zipfaug::OrchestratorConfig cfg;
  cfg.expanded_max_tokens = opt.expanded_len;
  cfg.inductive_max_tokens = opt.inductive_len;
  cfg.inductive_prompt_prefix = opt.inductive_prefix;
  cfg.failure_threshold = opt.failure_threshold;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  return cfg;
}

zipfaug::SentencePartition partition_with_fit(const zipfaug::Corpus& corpus,
                                              const zipfaug::FitFile& fit,
                                              zipfaug::FrequencyTable& table_out) {
  table_out = zipfaug::word_frequency_table(corpus);
  if (fit.r0 > table_out.total_rank())
    throw std::runtime_error("fit report r0 " + std::to_string(fit.r0) +
                             " exceeds corpus vocabulary size " +
                             std::to_string(table_out.total_rank()));
  const auto method = fit.method == "classical" ? zipfaug::SplitMethod::ClassicalCurvature
                                                : zipfaug::SplitMethod::ExtendedBeta;
  auto classes = zipfaug::classify_words(table_out, zipfaug::SplitPoint{fit.r0, method});
  return zipfaug::partition_sentences(corpus.sentences(), classes);
}

// ---- subcommand handlers ---------------------------------------------------

int cmd_fit(const Options& opt) {
  auto corpus = load_corpus(opt);
  log_stage("fit: " + std::to_string(corpus.sentence_count()) + " sentences");
  auto outcome = run_fit(corpus, opt);
  auto dir = ensure_out_dir(opt);
  write_json_file(dir / "fit.json",
                  zipfaug::fit_report_json(outcome.classical, outcome.extended, outcome.split,
                                           outcome.table.total_rank()));
  log_stage("fit: wrote " + (dir / "fit.json").string());
  return 0;
}

int cmd_classify(const Options& opt) {
  auto corpus = load_corpus(opt);
  require_file(opt.fit_report, "fit report");
  auto fit = zipfaug::parse_fit_file(zipfaug::load_json_file(opt.fit_report));
  zipfaug::FrequencyTable table;
  auto partition = partition_with_fit(corpus, fit, table);
  auto dir = ensure_out_dir(opt);
  {
    std::ofstream common(dir / "common.txt"), rare(dir / "rare.txt");
    zipfaug::write_plain_lines(partition.common_sentences, common);
    zipfaug::write_plain_lines(partition.rare_sentences, rare);
  }
  write_json_file(dir / "classify_summary.json",
                  json{{"r0", fit.r0},
                       {"r_t", table.total_rank()},
                       {"n_common", partition.common_sentences.size()},
                       {"n_rare", partition.rare_sentences.size()}});
  log_stage("classify: " + std::to_string(partition.common_sentences.size()) + " common / " +
            std::to_string(partition.rare_sentences.size()) + " rare");
  return 0;
}

int cmd_generate(const Options& opt) {
  auto corpus = load_corpus(opt);
  require_file(opt.fit_report, "fit report");
  auto fit = zipfaug::parse_fit_file(zipfaug::load_json_file(opt.fit_report));
  zipfaug::FrequencyTable table;
  auto partition = partition_with_fit(corpus, fit, table);
  auto backend = make_backend(opt, corpus);
  log_stage("generate: backend " + backend->id());
  auto batch = zipfaug::orchestrate(partition, *backend, orchestrator_config(opt));
  auto dir = ensure_out_dir(opt);
  {
    std::ofstream os(dir / "generated.jsonl", std::ios::binary);
    zipfaug::write_generated_jsonl(batch, os);
  }
  write_json_file(dir / "generation_counts.json", zipfaug::generation_counts_json(batch));
  write_article_corpus(corpus, dir / "corpus_articles.txt");
  log_stage("generate: " + std::to_string(batch.n_inductive) + " inductive, " +
            std::to_string(batch.n_expanded) + " expanded, " +
            std::to_string(batch.failures.size()) + " failed");
  return 0;
}

int cmd_label(const Options& opt) {
  Options in_opt = opt;
  in_opt.corpus = opt.input;
  require_file(in_opt.corpus, "input");
  auto corpus = zipfaug::ingest(in_opt.corpus, parse_format_or_throw(opt.format), opt.type_tag);
  auto rules = load_rules(opt);
  auto lexicon = load_pos_lexicon(opt);
  auto triggers = load_trigger_lexicon(opt);
  const auto granularity = granularity_from_name(opt.granularity);

  std::size_t n_spans = 0, n_rejected = 0;
  zipfaug::Corpus labeled = corpus;
  for (auto& doc : labeled.documents)
    for (auto& sent : doc.sentences) {
      auto units = zipfaug::pos_tag(sent, lexicon, opt.default_pos);
      auto spans = zipfaug::apply_rules(rules, units);
      std::vector<zipfaug::EntitySpan> verified;
      for (auto& span : spans) {
        if (zipfaug::verify_triggers(span, triggers))
          verified.push_back(std::move(span));
        else
          ++n_rejected;
      }
      auto records = zipfaug::emit_bio(sent, verified, granularity);
      n_spans += verified.size();
      zipfaug::Sentence replacement;
      replacement.doc_id = sent.doc_id;
      replacement.sent_id = sent.sent_id;
      for (std::size_t i = 0; i < records.size(); ++i)
        replacement.tokens.push_back(zipfaug::Token{records[i].token, i, records[i].label});
      sent = std::move(replacement);
    }

  auto dir = ensure_out_dir(opt);
  {
    std::ofstream os(dir / "labeled.conll", std::ios::binary);
    zipfaug::write_conll_bio(labeled, os);
  }
  write_json_file(dir / "label_summary.json",
                  json{{"n_sentences", corpus.sentence_count()},
                       {"n_spans", n_spans},
                       {"n_rejected_by_trigger", n_rejected}});
  log_stage("label: " + std::to_string(n_spans) + " spans (" + std::to_string(n_rejected) +
            " rejected by triggers)");
  return 0;
}

int cmd_report(const Options& opt) {
  Options in_opt = opt;
  in_opt.corpus = opt.dataset;
  require_file(in_opt.corpus, "dataset");
  auto corpus = zipfaug::ingest(in_opt.corpus, zipfaug::CorpusFormat::ConllBio, opt.type_tag);
  auto dataset = zipfaug::dataset_from_corpus(corpus, zipfaug::Provenance::Raw);
  auto report = zipfaug::imbalance_report(dataset, opt.exclusion_max);
  auto dir = ensure_out_dir(opt);
  write_json_file(dir / "report.json", zipfaug::to_json(report));
  {
    std::ofstream os(dir / "exclusion.csv", std::ios::binary);
    zipfaug::exclusion_to_csv(report.exclusion, os);
  }
  log_stage("report: " + std::to_string(report.n_entity_mentions) + " entity mentions, " +
            std::to_string(report.entity_table.total_rank()) + " distinct");
  return 0;
}

int cmd_sweep(const Options& opt) {
  auto corpus = load_corpus(opt);
  require_file(opt.fit_report, "fit report");
  auto fit = zipfaug::parse_fit_file(zipfaug::load_json_file(opt.fit_report));
  auto offsets = parse_offsets(opt.offsets);
  auto table = zipfaug::word_frequency_table(corpus);
  const auto method = fit.method == "classical" ? zipfaug::SplitMethod::ClassicalCurvature
                                                : zipfaug::SplitMethod::ExtendedBeta;
  auto report =
      zipfaug::r0_sweep(corpus, table, zipfaug::SplitPoint{fit.r0, method}, offsets);
  auto dir = ensure_out_dir(opt);
  write_json_file(dir / "sweep.json", zipfaug::to_json(report));
  {
    std::ofstream os(dir / "sweep.csv", std::ios::binary);
    zipfaug::sweep_to_csv(report, os);
  }
  log_stage("sweep: " + std::to_string(report.rows.size()) + " rows");
  return 0;
}

int cmd_augment(const Options& opt) {
  const auto started = std::chrono::steady_clock::now();
  auto corpus = load_corpus(opt);
  auto dir = ensure_out_dir(opt);

  if (!opt.resample_mode.empty()) {
    // re-sampling baseline instead of generation
    if (opt.resample_mode != "ros" && opt.resample_mode != "rus")
      throw ValidationError("resample mode must be ros or rus");
    auto dataset = zipfaug::dataset_from_corpus(corpus, zipfaug::Provenance::Raw);
    auto mode = opt.resample_mode == "ros" ? zipfaug::ResampleMode::Ros
                                           : zipfaug::ResampleMode::Rus;
    auto result = zipfaug::resample(dataset, mode, opt.resample_target, opt.seed);
    {
      std::ofstream os(dir / "augmented.conll", std::ios::binary);
      zipfaug::write_dataset_conll(result.dataset, os);
    }
    json manifest{{"mode", "resample-" + opt.resample_mode},
                  {"target", opt.resample_target},
                  {"reached_target", result.reached_target},
                  {"note", result.note},
                  {"config", options_json(opt)},
                  {"counts_before", dataset.entity_counts()},
                  {"counts_after", result.dataset.entity_counts()},
                  {"n_sentences", result.dataset.sentences.size()}};
    write_json_file(dir / "manifest.json", manifest);
    log_stage("augment: resample baseline written");
    return 0;
  }

  zipfaug::PipelineConfig config;
  if (opt.law == "classical") {
    config.law = zipfaug::ZipfLaw::Classical;
  } else if (opt.law == "extended") {
    config.law = zipfaug::ZipfLaw::Extended;
  } else {
    throw ValidationError("unknown law: " + opt.law);
  }
  if (!opt.beta_grid.empty()) config.beta_grid = parse_beta_grid(opt.beta_grid);
  config.markov_order = opt.markov_order;
  config.markov_smoothing = opt.markov_smoothing;
  if (opt.backend != "markov") config.backend = make_backend(opt, corpus);
  config.generation = orchestrator_config(opt);
  config.use_builtin_rules = false;  // load_rules already adds the builtins
  config.rules = load_rules(opt);
  config.pos_lexicon = load_pos_lexicon(opt);
  config.default_pos = opt.default_pos;
  config.triggers = load_trigger_lexicon(opt);
  config.granularity = granularity_from_name(opt.granularity);
  config.exclusion_n_max = opt.exclusion_max;

  log_stage("augment: running pipeline on " + std::to_string(corpus.sentence_count()) +
            " sentences");
  zipfaug::PipelineResult result;
  try {
    zipfaug::run_pipeline_into(corpus, config, result);
  } catch (const zipfaug::StageError& e) {
    // keep whatever the completed stages produced for inspection
    if (result.classical_fit || result.extended_fit)
      write_json_file(dir / "fit.json",
                      zipfaug::fit_report_json(result.classical_fit, result.extended_fit,
                                               result.split,
                                               result.word_table.total_rank()));
    if (!result.partition.common_sentences.empty() ||
        !result.partition.rare_sentences.empty()) {
      std::ofstream common(dir / "common.txt"), rare(dir / "rare.txt");
      zipfaug::write_plain_lines(result.partition.common_sentences, common);
      zipfaug::write_plain_lines(result.partition.rare_sentences, rare);
    }
    if (!result.batch.outputs.empty()) {
      std::ofstream os(dir / "generated.jsonl", std::ios::binary);
      zipfaug::write_generated_jsonl(result.batch, os);
    }
    write_json_file(dir / "manifest.json", json{{"mode", "pipeline"},
                                                {"failed_stage", e.stage},
                                                {"error", e.what()},
                                                {"config", options_json(opt)}});
    log_stage("augment: failed at stage `" + e.stage + "`; partial artifacts kept in " +
              dir.string());
    throw;
  }

  write_json_file(dir / "fit.json",
                  zipfaug::fit_report_json(result.classical_fit, result.extended_fit,
                                           result.split, result.word_table.total_rank()));
  {
    std::ofstream common(dir / "common.txt"), rare(dir / "rare.txt");
    zipfaug::write_plain_lines(result.partition.common_sentences, common);
    zipfaug::write_plain_lines(result.partition.rare_sentences, rare);
  }
  write_json_file(dir / "classify_summary.json",
                  json{{"r0", result.split.r0},
                       {"r_t", result.word_table.total_rank()},
                       {"n_common", result.partition.common_sentences.size()},
                       {"n_rare", result.partition.rare_sentences.size()}});
  {
    std::ofstream os(dir / "generated.jsonl", std::ios::binary);
    zipfaug::write_generated_jsonl(result.batch, os);
  }
  write_json_file(dir / "generation_counts.json",
                  zipfaug::generation_counts_json(result.batch));
  {
    std::ofstream os(dir / "labeled_generated.conll", std::ios::binary);
    zipfaug::write_dataset_conll(result.generated, os);
  }
  {
    std::ofstream os(dir / "augmented.conll", std::ios::binary);
    zipfaug::write_dataset_conll(result.augmented, os);
  }
  write_article_corpus(corpus, dir / "corpus_articles.txt");
  write_json_file(dir / "report_before.json", zipfaug::to_json(result.before));
  write_json_file(dir / "report_after.json", zipfaug::to_json(result.after));
  {
    std::ofstream os(dir / "exclusion_before.csv", std::ios::binary);
    zipfaug::exclusion_to_csv(result.before.exclusion, os);
    std::ofstream os2(dir / "exclusion_after.csv", std::ios::binary);
    zipfaug::exclusion_to_csv(result.after.exclusion, os2);
  }

  json timings = json::object();
  for (const auto& [stage, ms] : result.stage_ms) timings[stage] = ms;
  timings["total"] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  json manifest{
      {"mode", "pipeline"},
      {"config", options_json(opt)},
      {"law", opt.law},
      {"backend_id", result.backend_id},
      {"seed", opt.seed},
      {"r0", result.split.r0},
      {"r_t", result.word_table.total_rank()},
      {"n_common", result.partition.common_sentences.size()},
      {"n_rare", result.partition.rare_sentences.size()},
      {"n_inductive", result.batch.n_inductive},
      {"n_expanded", result.batch.n_expanded},
      {"n_generation_failures", result.batch.failures.size()},
      {"spans_labeled", result.spans_labeled},
      {"spans_rejected_by_trigger", result.spans_rejected_by_trigger},
      {"outputs_without_spans", result.outputs_without_spans},
      {"duplicates_removed", result.duplicates_removed},
      {"counts_before", result.before.category_counts},
      {"counts_after", result.after.category_counts},
      {"n_sentences_raw", result.raw.sentences.size()},
      {"n_sentences_augmented", result.augmented.sentences.size()},
      {"files",
       {"fit.json", "common.txt", "rare.txt", "classify_summary.json", "generated.jsonl",
        "generation_counts.json", "corpus_articles.txt", "labeled_generated.conll",
        "augmented.conll", "report_before.json", "report_after.json",
        "exclusion_before.csv", "exclusion_after.csv"}},
      {"timings_ms", timings}};
  write_json_file(dir / "manifest.json", manifest);
  log_stage("augment: wrote " + (dir / "manifest.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  // Config file values become defaults; explicit flags then win over them.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") opt.config_path = argv[i + 1];
  try {
    apply_config_file(opt);
  } catch (const std::exception& e) {
    std::cerr << "zipfaug: config error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Zipf-law-driven augmentation for imbalanced sequence-labeling corpora"};
  app.require_subcommand(1);
  app.add_option("--config", opt.config_path, "JSON config file (flags override it)");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "JSON config file (flags override it)");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--threads", opt.threads, "max worker threads");
  };
  auto add_corpus = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", opt.corpus, "corpus path (file or directory)");
    cmd->add_option("--format", opt.format, "corpus format: plain-lines or conll-bio");
    cmd->add_option("--type-tag", opt.type_tag, "free-form corpus label");
  };
  auto add_law = [&](CLI::App* cmd) {
    cmd->add_option("--law", opt.law, "zipf law: classical or extended");
    cmd->add_option("--beta-grid", opt.beta_grid, "extended-law beta grid, e.g. -200..0");
  };
  auto add_backend = [&](CLI::App* cmd) {
    cmd->add_option("--backend", opt.backend, "generator backend: markov or remote");
    cmd->add_option("--markov-order", opt.markov_order, "markov context length k");
    cmd->add_option("--markov-smoothing", opt.markov_smoothing, "additive smoothing");
    cmd->add_option("--endpoint", opt.endpoint, "remote generator URL");
    cmd->add_option("--timeout-ms", opt.timeout_ms, "remote request timeout");
    cmd->add_option("--retries", opt.retries, "remote retry count");
    cmd->add_option("--backoff-ms", opt.backoff_ms, "remote retry backoff");
    cmd->add_option("--expanded-len", opt.expanded_len, "expanded sentence token cap");
    cmd->add_option("--inductive-len", opt.inductive_len, "inductive sentence token cap");
    cmd->add_option("--prefix", opt.inductive_prefix, "inductive prompt prefix");
    cmd->add_option("--failure-threshold", opt.failure_threshold,
                    "abort above this generation failure rate");
  };
  auto add_labeling = [&](CLI::App* cmd) {
    cmd->add_option("--rules", opt.rules_path, "rule file (JSON array)");
    cmd->add_flag("--no-builtin-rules", opt.no_builtin_rules,
                  "disable the built-in material/equipment rules");
    cmd->add_option("--pos-lexicon", opt.pos_lexicon_path, "pos lexicon (surface<TAB>tag)");
    cmd->add_option("--triggers", opt.triggers_path, "trigger lexicon (JSON object)");
    cmd->add_option("--default-pos", opt.default_pos, "fallback pos tag");
    cmd->add_option("--tagset", opt.tagset, "tagset: chinese, penn or open");
    cmd->add_option("--granularity", opt.granularity, "BIO granularity: word or char");
  };

  auto* fit = app.add_subcommand("fit", "fit Zipf's law and locate r0");
  add_corpus(fit);
  add_law(fit);
  add_common(fit);

  auto* classify = app.add_subcommand("classify", "split sentences at r0 into common/rare");
  add_corpus(classify);
  classify->add_option("--fit", opt.fit_report, "fit report JSON from `fit`");
  add_common(classify);

  auto* generate = app.add_subcommand("generate", "generate auxiliary sentences");
  add_corpus(generate);
  generate->add_option("--fit", opt.fit_report, "fit report JSON from `fit`");
  add_backend(generate);
  add_common(generate);

  auto* label = app.add_subcommand("label", "rule-label sentences and emit conll-bio");
  label->add_option("--input", opt.input, "plain-lines input file");
  label->add_option("--format", opt.format, "input format: plain-lines or conll-bio");
  add_labeling(label);
  add_common(label);

  auto* augment = app.add_subcommand("augment", "run the full augmentation pipeline");
  add_corpus(augment);
  add_law(augment);
  add_backend(augment);
  add_labeling(augment);
  augment->add_option("--exclusion-max", opt.exclusion_max, "progressive-exclusion sweep cap");
  augment->add_option("--resample", opt.resample_mode,
                      "skip generation; run a ros/rus re-sampling baseline");
  augment->add_option("--resample-target", opt.resample_target,
                      "minority category for --resample");
  add_common(augment);

  auto* report = app.add_subcommand("report", "entity-level imbalance report");
  report->add_option("--dataset", opt.dataset, "conll-bio dataset path");
  report->add_option("--exclusion-max", opt.exclusion_max, "progressive-exclusion sweep cap");
  add_common(report);

  auto* sweep = app.add_subcommand("sweep", "r0 sensitivity sweep");
  add_corpus(sweep);
  sweep->add_option("--fit", opt.fit_report, "fit report JSON from `fit`");
  sweep->add_option("--offsets", opt.offsets, "comma-separated offset percentages");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "zipfaug: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*fit) return cmd_fit(opt);
    if (*classify) return cmd_classify(opt);
    if (*generate) return cmd_generate(opt);
    if (*label) return cmd_label(opt);
    if (*augment) return cmd_augment(opt);
    if (*report) return cmd_report(opt);
    if (*sweep) return cmd_sweep(opt);
  } catch (const ValidationError& e) {
    std::cerr << "zipfaug: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "zipfaug: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "zipfaug: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
