// Acceptance suite: one pass/fail line per criterion, exit 0 only when every
// criterion passes. Criterion 8 runs against the open Resume NER dataset when
// ZIPFAUG_RESUME points at it (conll format, BMES or BIO labels); otherwise it
// runs on a synthetic heavy-tailed fixture.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipfaug/augment.hpp"
#include "zipfaug/json_io.hpp"
#include "zipfaug/markers.hpp"

namespace fs = std::filesystem;
using namespace zipfaug;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& msg) {
    if (cond) return;
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }

  void note(const std::string& msg) {
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Continuous maximizer of the classical-law curvature (independent oracle).
double closed_form_r0(double alpha, double c) {
  return std::pow(c * c * alpha * alpha * (2.0 * alpha + 1.0) / (alpha + 2.0),
                  1.0 / (2.0 * alpha + 2.0));
}

FrequencyTable exact_zipf_table(double alpha, double c, std::size_t r_t) {
  std::vector<std::pair<std::string, double>> items;
  for (std::size_t r = 1; r <= r_t; ++r)
    items.emplace_back("w" + std::to_string(r), c * std::pow(static_cast<double>(r), -alpha));
  return FrequencyTable::from_ordered(std::move(items));
}

// --- criterion 1 -----------------------------------------------------------

Check criterion_zipf_recovery() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  for (double alpha : {0.7, 1.0, 1.3}) {
    auto fit = fit_classical(exact_zipf_table(alpha, 1e6, 5000));
    check.expect(std::abs(fit.alpha - alpha) <= 1e-6,
                 "exact alpha=" + fmt(alpha) + " recovered " + fmt(fit.alpha));
    check.expect(fit.r_squared >= 1.0 - 1e-9,
                 "exact alpha=" + fmt(alpha) + " r2=" + fmt(fit.r_squared));
  }
  for (double alpha : {0.7, 1.0, 1.3}) {
    std::vector<double> weights(5000);
    for (std::size_t r = 1; r <= 5000; ++r)
      weights[r - 1] = std::pow(static_cast<double>(r), -alpha);
    std::mt19937_64 rng(2027);
    std::discrete_distribution<int> dist(weights.begin(), weights.end());
    std::vector<std::string> tokens;
    tokens.reserve(1000000);
    for (int i = 0; i < 1000000; ++i)
      tokens.push_back("w" + std::to_string(dist(rng)));

    // the deployment path: count tokens, rank empirically, fit
    auto fit = fit_classical(build_frequency_table(tokens));
    check.expect(std::abs(fit.alpha - alpha) <= 0.05,
                 "noisy alpha=" + fmt(alpha) + " recovered " + fmt(fit.alpha) +
                     " (empirical re-ranking biases the tail slope at this alpha/sample"
                     " size; see decisions ledger)");
    check.expect(fit.r_squared >= 0.95,
                 "noisy alpha=" + fmt(alpha) + " r2=" + fmt(fit.r_squared));
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 10.0, "runtime " + fmt(elapsed) + "s exceeds 10s");
  check.note("runtime " + fmt(elapsed) + "s");
  return check;
}

// --- criterion 2 -----------------------------------------------------------

Check criterion_r0_oracle() {
  Check check;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> alpha_d(0.5, 1.5);
  std::uniform_real_distribution<double> log_c(2.0, 5.0);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    ClassicalFit fit;
    fit.alpha = alpha_d(rng);
    fit.c = std::pow(10.0, log_c(rng));
    const double star = closed_form_r0(fit.alpha, fit.c);
    const std::size_t r_t =
        std::max<std::size_t>(50, static_cast<std::size_t>(3.0 * star) + 10);
    const auto split = find_r0_classical(fit, r_t);
    if (std::llabs(static_cast<long long>(split.r0) - std::llround(star)) > 1) ++mismatches;
  }
  check.expect(mismatches == 0,
               std::to_string(mismatches) + "/1000 draws off the closed form by > 1 rank");

  ClassicalFit petroleum;
  petroleum.alpha = 0.965;
  petroleum.c = 51756.0;
  const auto split = find_r0_classical(petroleum, 5416);
  check.expect(split.r0 >= 243 && split.r0 <= 247,
               "petroleum parameters give r0=" + std::to_string(split.r0) + ", expected ~245");
  const double rel =
      std::abs(static_cast<double>(split.r0) - 239.0) / 239.0;
  check.expect(rel <= 0.05, "published r0 239 deviates " + fmt(100 * rel) + "% (> 5%)");
  check.note("implementation r0=" + std::to_string(split.r0) +
             ", published 239 within " + fmt(100 * rel) + "%");
  return check;
}

// --- criterion 3 -----------------------------------------------------------

Check criterion_extended_r0() {
  Check check;
  const std::vector<std::pair<double, std::size_t>> published = {
      {-81.0, 81}, {-87.0, 87}, {-30.0, 30}, {-65.0, 65}};
  for (auto [beta, expected] : published) {
    ExtendedFit fit;
    fit.alpha = 0.1;
    fit.c = 70.0;
    fit.beta = beta;
    fit.fit_domain = RankRange{static_cast<std::size_t>(-beta) + 1, 6524};
    check.expect(find_r0_extended(fit).r0 == expected,
                 "beta=" + fmt(beta) + " did not negate to " + std::to_string(expected));
  }

  std::vector<std::pair<std::string, double>> items;
  for (std::size_t r = 1; r <= 20; ++r)
    items.emplace_back("h" + std::to_string(r), 400.0 - 5.0 * static_cast<double>(r));
  for (std::size_t r = 21; r <= 2000; ++r)
    items.emplace_back("t" + std::to_string(r),
                       100.0 / std::sqrt(static_cast<double>(r) - 20.0));
  auto table = FrequencyTable::from_ordered(std::move(items));
  auto fit = fit_extended(table, -100, 0);
  check.expect(std::abs(fit.beta + 20.0) <= 1.0,
               "planted beta -20 recovered as " + fmt(fit.beta));
  check.expect(find_r0_extended(fit).r0 >= 19 && find_r0_extended(fit).r0 <= 21,
               "recovered r0 outside 20 +- 1");
  return check;
}

// --- criterion 4 -----------------------------------------------------------

class EchoBackend : public TextGenerator {
 public:
  std::string id() const override { return "echo"; }
  std::vector<std::string> generate(const GeneratorRequest& req) override {
    return std::vector<std::string>(req.num_return, req.prompt);
  }
};

SentencePartition sized_partition(std::size_t n_common, std::size_t n_rare) {
  SentencePartition p;
  for (std::size_t i = 0; i < n_common; ++i) {
    Sentence s;
    s.tokens = tokenize("c " + std::to_string(i));
    s.doc_id = "c";
    s.sent_id = i;
    p.common_sentences.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < n_rare; ++i) {
    Sentence s;
    s.tokens = tokenize("r " + std::to_string(i));
    s.doc_id = "r";
    s.sent_id = i;
    p.rare_sentences.push_back(std::move(s));
  }
  return p;
}

Check criterion_count_law() {
  Check check;
  EchoBackend backend;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n_common = rng() % 10;
    const std::size_t n_rare = rng() % 10;
    auto batch = orchestrate(sized_partition(n_common, n_rare), backend);
    check.expect(batch.n_inductive == n_common && batch.n_expanded == 2 * n_rare,
                 "count law broke at " + std::to_string(n_common) + "/" +
                     std::to_string(n_rare));
  }
  // the published petroleum/classical row: 1603 common + 3122 rare
  auto batch = orchestrate(sized_partition(1603, 3122), backend);
  check.expect(batch.n_inductive == 1603,
               "expected 1603 inductive, got " + std::to_string(batch.n_inductive));
  check.expect(batch.n_expanded == 6244,
               "expected 6244 expanded, got " + std::to_string(batch.n_expanded));
  check.note("1603/3122 -> " + std::to_string(batch.n_inductive) + "/" +
             std::to_string(batch.n_expanded));
  return check;
}

// --- criterion 5 -----------------------------------------------------------

PosLexicon worked_lexicon() {
  PosLexicon lex;
  lex.add("high", "a");
  lex.add("alarm", "n");
  lex.add("sulfur generation", "n");
  lex.add("waste heat", "n");
  lex.add("boiler", "n");
  lex.add("liquid level", "n");
  lex.add("too", "ug");
  lex.add("low", "a");
  lex.add("vinyl chloride", "nz");
  lex.add(",", "x");
  lex.add("hydrogen sulfide", "n");
  lex.add("and", "c");
  lex.add("sulfur dioxide", "nz");
  lex.add("exceed the standard", "v");
  return lex;
}

Check criterion_labeling_golden() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  const auto lexicon = worked_lexicon();
  const std::vector<CompiledRule> rules = {builtin_material_rule(), builtin_equipment_rule()};

  Sentence one;
  one.tokens = tokenize("high alarm sulfur generation waste heat boiler liquid level too low");
  auto bio_one = emit_bio(one, apply_rules(rules, pos_tag(one, lexicon, "n")));
  std::vector<std::string> got_one;
  for (const auto& r : bio_one) got_one.push_back(r.token + "/" + r.label);
  const std::vector<std::string> expected_one = {
      "high/B-EQU", "alarm/I-EQU",  "sulfur/I-EQU", "generation/I-EQU",
      "waste/I-EQU", "heat/I-EQU",  "boiler/I-EQU", "liquid/O",
      "level/O",     "too/O",       "low/O"};
  check.expect(got_one == expected_one, "worked example #1 BIO row mismatch");

  Sentence two;
  two.tokens = tokenize("vinyl chloride , hydrogen sulfide and sulfur dioxide exceed the standard");
  auto bio_two = emit_bio(two, apply_rules(rules, pos_tag(two, lexicon, "n")));
  std::vector<std::string> got_two;
  for (const auto& r : bio_two) got_two.push_back(r.token + "/" + r.label);
  const std::vector<std::string> expected_two = {
      "vinyl/B-MAT", "chloride/I-MAT", ",/O",          "hydrogen/O",
      "sulfide/O",   "and/O",          "sulfur/B-MAT", "dioxide/I-MAT",
      "exceed/O",    "the/O",          "standard/O"};
  check.expect(got_two == expected_two, "worked example #2 BIO row mismatch");

  auto rule = compile_rule(RuleSpec{
      "keyword-pattern",
      "^[Who]$books$[*]$[What]$from$[Where]$to$[Where]$[*]$[Time]*$", "CON", 0});
  Sentence booking;
  booking.tokens = tokenize("Johnson books a flight from Washington to London tomorrow");
  auto matches = rule.match(pos_tag(booking, PosLexicon{}, "n"));
  std::map<std::string, std::vector<std::string>> bound;
  for (const auto& m : matches) bound[m.slot].push_back(m.span.surface);
  check.expect(bound["Who"] == std::vector<std::string>{"Johnson"}, "Who binding wrong");
  check.expect(bound["Where"] == std::vector<std::string>{"Washington", "London"},
               "Where bindings wrong");
  check.expect(bound["Time"] == std::vector<std::string>{"tomorrow"}, "Time binding wrong");

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + "s exceeds 1s");
  return check;
}

// --- criterion 6 -----------------------------------------------------------

Check criterion_round_trips() {
  Check check;
  std::mt19937 rng(606);
  auto random_line = [&rng](bool allow_empty) {
    static const std::string charset =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:-_'";
    const std::size_t len = (allow_empty ? 0 : 1) + rng() % 30;
    std::string out;
    for (std::size_t i = 0; i < len; ++i) out += charset[rng() % charset.size()];
    return out;
  };
  std::size_t article_failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    ArticleCorpus corpus;
    const std::size_t articles = rng() % 4;
    for (std::size_t a = 0; a < articles; ++a) {
      std::vector<std::string> lines;
      const std::size_t n = 1 + rng() % 4;
      for (std::size_t l = 0; l < n; ++l) lines.push_back(random_line(true));
      corpus.articles.push_back(std::move(lines));
    }
    if (!(parse_articles(serialize_articles(corpus)) == corpus)) ++article_failures;
  }
  check.expect(article_failures == 0,
               std::to_string(article_failures) + "/10000 article round trips failed");

  auto random_words = [&rng](std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += "w" + std::to_string(rng() % 4096);
    }
    return out;
  };
  std::size_t titled_failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    TitledCorpus corpus;
    const std::size_t n = rng() % 3;
    for (std::size_t i = 0; i < n; ++i)
      corpus.add(random_words(2 + rng() % 6), random_words(100 + rng() % 30));
    if (!(parse_titled(serialize_titled(corpus)) == corpus)) ++titled_failures;
  }
  check.expect(titled_failures == 0,
               std::to_string(titled_failures) + "/10000 titled round trips failed");
  return check;
}

// --- criterion 7 -----------------------------------------------------------

Check criterion_bio_well_formed() {
  Check check;
  std::mt19937 rng(707);
  const std::vector<std::string> tags = {"n", "nz", "a", "q", "v", "x", "ug", "c", "i"};
  const std::vector<std::string> cats = {"EQU", "MAT", "CON", "STA"};
  std::size_t violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    Sentence sent;
    const std::size_t n = 1 + rng() % 14;
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) text += ' ';
      text += "t" + std::to_string(rng() % 40);
    }
    sent.tokens = tokenize(text);

    std::vector<TaggedToken> units;
    for (std::size_t i = 0; i < sent.tokens.size(); ++i)
      units.push_back(TaggedToken{sent.tokens[i].surface, tags[rng() % tags.size()], i, i + 1});

    std::vector<CompiledRule> rules = {builtin_material_rule(), builtin_equipment_rule()};
    if (rng() % 2)
      rules.push_back(compile_rule(RuleSpec{
          "pos-sequence", tags[rng() % tags.size()] + " " + tags[rng() % tags.size()],
          cats[rng() % cats.size()], 1}));
    if (rng() % 2)
      rules.push_back(compile_rule(RuleSpec{"regular-expression",
                                            "t" + std::to_string(rng() % 40),
                                            cats[rng() % cats.size()], 2}));
    if (rng() % 3 == 0)
      rules.push_back(compile_rule(RuleSpec{"dependency-constraint",
                                            "word-length < " + std::to_string(2 + rng() % 4),
                                            cats[rng() % cats.size()], 3}));

    auto spans = apply_rules(rules, units);
    const auto granularity =
        rng() % 4 == 0 ? BioGranularity::Character : BioGranularity::Word;
    auto records = emit_bio(sent, spans, granularity);
    std::vector<std::string> labels;
    for (const auto& r : records) labels.push_back(r.label);
    if (!bio_well_formed(labels)) ++violations;
  }
  check.expect(violations == 0,
               std::to_string(violations) + "/10000 fuzzed labelings emitted orphan I-X");
  return check;
}

// --- criterion 8 -----------------------------------------------------------

std::string bmes_to_bio(const std::string& label) {
  if (label.size() < 2 || label[1] != '-') return label == "O" ? label : label;
  switch (label[0]) {
    case 'M': return "I" + label.substr(1);
    case 'E': return "I" + label.substr(1);
    case 'S': return "B" + label.substr(1);
    default: return label;
  }
}

Check criterion_entity_level(const char* resume_path) {
  Check check;
  if (resume_path != nullptr) {
    auto corpus = ingest(resume_path, CorpusFormat::ConllBio);
    for (auto& doc : corpus.documents)
      for (auto& sent : doc.sentences)
        for (auto& tok : sent.tokens) tok.label = bmes_to_bio(tok.label);
    auto dataset = dataset_from_corpus(corpus, Provenance::Raw);
    auto report = imbalance_report(dataset, 40);
    check.expect(report.freq1_count == 5159 && report.entity_table.total_rank() == 6156,
                 "freq-1 share is " + std::to_string(report.freq1_count) + "/" +
                     std::to_string(report.entity_table.total_rank()) +
                     ", expected 5159/6156");
    check.expect(report.fit.has_value(), "entity fit missing");
    if (report.fit)
      check.expect(std::abs(report.fit->r_squared - 0.750) <= 0.01,
                   "full-fit R2 " + fmt(report.fit->r_squared) + " not within 0.750 +- 0.01");
    double r2_at_1 = -1, best = -1;
    std::size_t best_n = 0;
    for (const auto& p : report.exclusion.points) {
      if (p.excluded == 1) r2_at_1 = p.r_squared;
      if (p.r_squared > best) {
        best = p.r_squared;
        best_n = p.excluded;
      }
    }
    check.expect(std::abs(r2_at_1 - 0.946) <= 0.01,
                 "n=1 R2 " + fmt(r2_at_1) + " not within 0.946 +- 0.01");
    check.expect(best > 0.97 && best_n >= 15 && best_n <= 35,
                 "best R2 " + fmt(best) + " at n=" + std::to_string(best_n) +
                     ", expected > 0.97 near 25");
    check.note("resume dataset: " + std::to_string(report.freq1_count) + "/" +
               std::to_string(report.entity_table.total_rank()) + " freq-1");
    return check;
  }

  // synthetic heavy-tailed fixture
  LabeledDataset ds;
  ds.categories = {"CON", "EQU", "MAT", "STA"};
  std::size_t id = 0;
  auto add_mentions = [&](const std::string& surface, std::size_t times) {
    for (std::size_t k = 0; k < times; ++k) {
      LabeledSentence ls;
      ls.sentence.tokens = {Token{surface, 0, "B-MAT"}, Token{"seen", 1, "O"}};
      ls.sentence.doc_id = "synth";
      ls.sentence.sent_id = id++;
      ds.sentences.push_back(std::move(ls));
    }
  };
  for (std::size_t r = 1; r <= 30; ++r)
    add_mentions("head" + std::to_string(r),
                 static_cast<std::size_t>(std::llround(400.0 / static_cast<double>(r))));
  for (std::size_t i = 0; i < 300; ++i) add_mentions("tail" + std::to_string(i), 1);

  auto report = imbalance_report(ds, 10);
  check.expect(report.has_entities, "fixture produced no entities");
  check.expect(report.entity_table.total_rank() == 330, "fixture has wrong entity count");
  check.expect(report.freq1_count == 300, "fixture freq-1 count wrong");
  check.expect(std::abs(report.freq1_share - 300.0 / 330.0) < 1e-12,
               "freq-1 share " + fmt(report.freq1_share) + " != 300/330");
  check.expect(report.fit.has_value(), "fixture fit missing");
  check.expect(!report.exclusion.points.empty(), "fixture exclusion curve empty");
  if (report.fit && !report.exclusion.points.empty()) {
    check.expect(report.exclusion.points[0].excluded == 0 &&
                     report.exclusion.points[0].r_squared == report.fit->r_squared,
                 "n=0 row is not the identity fit");
    for (std::size_t i = 1; i < report.exclusion.points.size(); ++i)
      check.expect(report.exclusion.points[i].survivors <=
                       report.exclusion.points[i - 1].survivors,
                   "survivor counts increased");
    if (report.exclusion.points.size() > 1)
      check.expect(report.exclusion.points[1].r_squared > report.fit->r_squared,
                   "dropping the freq-1 plateau did not improve the fit");
  }
  check.note("synthetic fixture (set ZIPFAUG_RESUME to run the dataset-gated check)");
  return check;
}

// --- criterion 9 -----------------------------------------------------------

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

nlohmann::json manifest_without_timings(const fs::path& path) {
  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  j.erase("timings_ms");
  return j;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

Check criterion_end_to_end() {
  Check check;
  const fs::path data_dir = ZIPFAUG_DATA_DIR;
  const std::string cli = ZIPFAUG_CLI_PATH;
  const fs::path run_a = fs::temp_directory_path() / "zipfaug-acceptance-a";
  const fs::path run_b = fs::temp_directory_path() / "zipfaug-acceptance-b";
  fs::remove_all(run_a);
  fs::remove_all(run_b);

  const std::string base = cli + " augment --config " + (data_dir / "config.json").string() +
                           " --corpus " + (data_dir / "synthetic_hazop.conll").string() +
                           " --rules " + (data_dir / "rules.json").string() +
                           " --pos-lexicon " + (data_dir / "pos_lexicon.tsv").string() +
                           " --triggers " + (data_dir / "triggers.json").string() +
                           " --seed 11";
  const auto start = std::chrono::steady_clock::now();
  check.expect(run_command(base + " --out " + run_a.string() + " >/dev/null 2>&1") == 0,
               "first augment run failed");
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 60.0, "augment took " + fmt(elapsed) + "s (>= 60s)");
  check.expect(run_command(base + " --out " + run_b.string() + " >/dev/null 2>&1") == 0,
               "second augment run failed");

  if (!check.ok) return check;

  auto manifest = manifest_without_timings(run_a / "manifest.json");
  const auto& before = manifest.at("counts_before");
  const auto& after = manifest.at("counts_after");
  check.expect(after.at("MAT").get<std::size_t>() > before.at("MAT").get<std::size_t>(),
               "MAT count did not strictly increase");
  check.expect(after.at("EQU").get<std::size_t>() > before.at("EQU").get<std::size_t>(),
               "EQU count did not strictly increase");
  check.expect(after.at("CON") == before.at("CON"), "CON count changed");
  check.expect(after.at("STA") == before.at("STA"), "STA count changed");

  bool identical = manifest == manifest_without_timings(run_b / "manifest.json");
  for (const auto& entry : fs::directory_iterator(run_a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    if (!same_bytes(entry.path(), run_b / name)) {
      identical = false;
      check.note("file differs between runs: " + name.string());
    }
  }
  check.expect(identical, "runs with identical seeds are not byte-identical");
  check.note("runtime " + fmt(elapsed) + "s, MAT " + before.at("MAT").dump() + "->" +
             after.at("MAT").dump() + ", EQU " + before.at("EQU").dump() + "->" +
             after.at("EQU").dump());
  return check;
}

}  // namespace

int main(int argc, char** argv) {
  const char* resume = std::getenv("ZIPFAUG_RESUME");
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--resume") resume = argv[i + 1];

  struct Criterion {
    int number;
    std::string name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Zipf recovery (exact and noisy)", criterion_zipf_recovery},
      {2, "r0 oracle equivalence", criterion_r0_oracle},
      {3, "extended-law r0", criterion_extended_r0},
      {4, "generation count law", criterion_count_law},
      {5, "labeling golden examples", criterion_labeling_golden},
      {6, "serializer round trips", criterion_round_trips},
      {7, "BIO well-formedness under fuzz", criterion_bio_well_formed},
      {8, "entity-level Zipf analysis", [resume] { return criterion_entity_level(resume); }},
      {9, "end-to-end augmentation run", criterion_end_to_end},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.note(std::string("exception: ") + e.what());
    }
    std::cout << (check.ok ? "PASS" : "FAIL") << " criterion " << criterion.number << ": "
              << criterion.name;
    if (!check.detail.empty()) std::cout << " [" << check.detail << "]";
    std::cout << "\n";
    if (!check.ok) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
