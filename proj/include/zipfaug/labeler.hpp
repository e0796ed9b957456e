#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zipfaug/corpus.hpp"
#include "zipfaug/strings.hpp"

namespace zipfaug {

inline const std::vector<std::string>& entity_categories() {
  static const std::vector<std::string> kCategories = {"CON", "EQU", "MAT", "STA"};
  return kCategories;
}

inline bool is_entity_category(const std::string& c) {
  const auto& all = entity_categories();
  return std::find(all.begin(), all.end(), c) != all.end();
}

struct Tagset {
  std::string name;
  std::unordered_set<std::string> tags;  // empty set = open tagset

  bool allows(const std::string& tag) const { return tags.empty() || tags.count(tag) != 0; }
};

inline Tagset chinese_tagset() {
  return Tagset{"chinese",
                {"n", "nz", "ng", "nr", "ns", "nt", "a", "ad", "an", "ug", "uj", "ul",
                 "c",  "v",  "vd", "vn", "x",  "i",  "q", "d",  "m",  "p",  "u",  "r",
                 "t",  "s",  "f",  "b",  "e",  "y",  "o", "z",  "w",  "j",  "l",  "un"}};
}

inline Tagset penn_tagset() {
  return Tagset{"penn", {"NNP", "NNPS", "NN",  "NNS", "VB",  "VBD", "VBG", "VBN", "VBP",
                         "VBZ", "IN",   "JJ",  "JJR", "JJS", "RB",  "RBR", "RBS", "DT",
                         "CC",  "CD",   "PRP", "PRP$", "MD", "TO",  "UH",  "WDT", "WP",
                         "WRB", "POS",  "SYM", "FW",  "EX",  "LS",  "PDT", "RP",  "."}};
}

inline Tagset open_tagset() { return Tagset{"open", {}}; }

// A tagged unit covering raw tokens [begin, end). Multiword lexicon entries
// produce units spanning several raw tokens, the way "sulfur generation"
// carries a single noun tag.
struct TaggedToken {
  std::string surface;
  std::string pos;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// word -> tag map with longest-match multiword lookup.
class PosLexicon {
 public:
  void add(const std::string& surface, const std::string& tag) {
    const auto words = split_whitespace(surface);
    if (words.empty()) throw std::invalid_argument("empty lexicon surface");
    entries_[join(words)] = tag;
    max_words_ = std::max(max_words_, words.size());
  }

  static PosLexicon load(std::istream& in, const Tagset& tagset = open_tagset()) {
    PosLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = rstrip(line);
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw std::runtime_error("pos lexicon line " + std::to_string(line_no) +
                                 ": expected `surface<TAB>tag`");
      const std::string surface = line.substr(0, tab);
      const std::string tag = rstrip(line.substr(tab + 1));
      if (!tagset.allows(tag))
        throw std::runtime_error("pos lexicon line " + std::to_string(line_no) + ": tag `" +
                                 tag + "` not in tagset `" + tagset.name + "`");
      lex.add(surface, tag);
    }
    return lex;
  }

  std::optional<std::string> lookup(const std::string& surface) const {
    auto it = entries_.find(surface);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t max_words() const { return max_words_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
  std::size_t max_words_ = 1;
};

// Longest-match lexicon tagging; tokens not covered by any entry get
// default_pos. Every raw token is covered by exactly one unit.
inline std::vector<TaggedToken> pos_tag(const Sentence& sentence, const PosLexicon& lexicon,
                                        const std::string& default_pos) {
  std::vector<TaggedToken> units;
  const std::size_t n = sentence.tokens.size();
  std::size_t i = 0;
  while (i < n) {
    bool matched = false;
    const std::size_t longest = std::min(lexicon.max_words(), n - i);
    for (std::size_t len = longest; len >= 1 && !matched; --len) {
      std::string candidate;
      for (std::size_t j = 0; j < len; ++j) {
        if (j) candidate += ' ';
        candidate += sentence.tokens[i + j].surface;
      }
      if (auto tag = lexicon.lookup(candidate)) {
        units.push_back(TaggedToken{std::move(candidate), *tag, i, i + len});
        i += len;
        matched = true;
      }
    }
    if (!matched) {
      units.push_back(TaggedToken{sentence.tokens[i].surface, default_pos, i, i + 1});
      ++i;
    }
  }
  return units;
}

// Entity span over raw token indices, inclusive on both ends.
struct EntitySpan {
  std::size_t first = 0;
  std::size_t last = 0;
  std::string surface;
  std::string category;
  bool operator==(const EntitySpan&) const = default;
};

namespace detail {

inline EntitySpan span_from_units(const std::vector<TaggedToken>& units, std::size_t u_first,
                                  std::size_t u_last, const std::string& category) {
  EntitySpan span;
  span.first = units[u_first].begin;
  span.last = units[u_last].end - 1;
  for (std::size_t u = u_first; u <= u_last; ++u) {
    if (u > u_first) span.surface += ' ';
    span.surface += units[u].surface;
  }
  span.category = category;
  return span;
}

}  // namespace detail

// Every maximal run of consecutive nz-tagged units becomes one MAT span.
inline std::vector<EntitySpan> label_materials(const std::vector<TaggedToken>& tagged) {
  std::vector<EntitySpan> spans;
  std::size_t u = 0;
  while (u < tagged.size()) {
    if (tagged[u].pos != "nz") {
      ++u;
      continue;
    }
    std::size_t end = u;
    while (end + 1 < tagged.size() && tagged[end + 1].pos == "nz") ++end;
    spans.push_back(detail::span_from_units(tagged, u, end, "MAT"));
    u = end + 1;
  }
  return spans;
}

// Noun-block equipment labeling: locate each maximal run of noun/idiom units,
// drop the final noun unless a quantifier follows the block, then prepend an
// immediately preceding adjective. Blocks that shrink to nothing emit no span.
inline std::vector<EntitySpan> label_equipment(const std::vector<TaggedToken>& tagged) {
  std::vector<EntitySpan> spans;
  auto is_noun = [](const TaggedToken& t) { return t.pos == "n" || t.pos == "i"; };
  std::size_t u = 0;
  while (u < tagged.size()) {
    if (!is_noun(tagged[u])) {
      ++u;
      continue;
    }
    std::size_t block_end = u;  // inclusive
    while (block_end + 1 < tagged.size() && is_noun(tagged[block_end + 1])) ++block_end;
    const bool quantifier_after =
        block_end + 1 < tagged.size() && tagged[block_end + 1].pos == "q";
    std::size_t keep_end = block_end;
    bool empty = false;
    if (!quantifier_after) {
      if (keep_end == u)
        empty = true;
      else
        --keep_end;
    }
    if (!empty) {
      std::size_t keep_begin = u;
      if (u > 0 && tagged[u - 1].pos == "a") keep_begin = u - 1;
      spans.push_back(detail::span_from_units(tagged, keep_begin, keep_end, "EQU"));
    }
    u = block_end + 1;
  }
  return spans;
}

struct RuleSpec {
  std::string family;
  std::string body;
  std::string category;
  int priority = 0;
};

struct RuleGrammarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuleMatch {
  EntitySpan span;
  std::string slot;  // capture-variable name for keyword/layout families
};

struct CompiledRule {
  std::string family;
  std::string category;
  std::function<std::vector<RuleMatch>(const std::vector<TaggedToken>&)> matcher;

  std::vector<RuleMatch> match(const std::vector<TaggedToken>& tagged) const {
    return matcher(tagged);
  }
};

namespace detail {

inline std::vector<RuleMatch> wrap_spans(std::vector<EntitySpan> spans) {
  std::vector<RuleMatch> out;
  out.reserve(spans.size());
  for (auto& s : spans) out.push_back(RuleMatch{std::move(s), ""});
  return out;
}

// --- pos-sequence family -------------------------------------------------

inline CompiledRule compile_pos_sequence(const RuleSpec& spec) {
  std::string body = spec.body;
  // accept the union sign as an alternation separator
  for (std::string::size_type p = 0; (p = body.find("\xE2\x88\xAA", p)) != std::string::npos;)
    body.replace(p, 3, "|");
  std::vector<std::set<std::string>> positions;
  for (const auto& slot : split_whitespace(body)) {
    std::set<std::string> alts;
    std::size_t start = 0;
    while (start <= slot.size()) {
      auto bar = slot.find('|', start);
      std::string tag = slot.substr(start, bar == std::string::npos ? bar : bar - start);
      if (tag.empty())
        throw RuleGrammarError("pos-sequence: empty tag alternative in `" + slot + "`");
      alts.insert(tag);
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    positions.push_back(std::move(alts));
  }
  if (positions.empty()) throw RuleGrammarError("pos-sequence: empty rule body");

  CompiledRule rule{spec.family, spec.category, nullptr};
  rule.matcher = [positions, category = spec.category](const std::vector<TaggedToken>& tagged) {
    std::vector<RuleMatch> out;
    if (tagged.size() < positions.size()) return out;
    for (std::size_t start = 0; start + positions.size() <= tagged.size(); ++start) {
      bool ok = true;
      for (std::size_t i = 0; i < positions.size() && ok; ++i)
        ok = positions[i].count(tagged[start + i].pos) != 0;
      if (ok)
        out.push_back(RuleMatch{
            span_from_units(tagged, start, start + positions.size() - 1, category), ""});
    }
    return out;
  };
  return rule;
}

// --- regular-expression family -------------------------------------------

inline CompiledRule compile_regex(const RuleSpec& spec) {
  if (spec.body.empty()) throw RuleGrammarError("regular-expression: empty rule body");
  std::regex re;
  try {
    re = std::regex(spec.body, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw RuleGrammarError(std::string("regular-expression: ") + e.what());
  }
  CompiledRule rule{spec.family, spec.category, nullptr};
  rule.matcher = [re, category = spec.category](const std::vector<TaggedToken>& tagged) {
    std::vector<RuleMatch> out;
    for (std::size_t u = 0; u < tagged.size(); ++u)
      if (std::regex_match(tagged[u].surface, re))
        out.push_back(RuleMatch{span_from_units(tagged, u, u, category), ""});
    return out;
  };
  return rule;
}

// --- keyword-pattern family ----------------------------------------------
//
// Grammar: `^` anchors the match at the sentence start, `$` terminates each
// word or slot, literal words match exactly, `[Name]` captures one-or-more
// units, `[Name]*` captures zero-or-more, `[*]` skips zero-or-more. The
// pattern always consumes through the end of the sentence; slots take the
// shortest capture that lets the rest of the pattern succeed.

struct KeywordElement {
  enum class Type { Literal, Variable, Wildcard };
  Type type = Type::Literal;
  std::string text;
  bool optional = false;
};

struct KeywordPattern {
  bool anchored = false;
  std::vector<KeywordElement> elements;
};

inline KeywordPattern parse_keyword_pattern(const std::string& body) {
  KeywordPattern pat;
  std::string rest = body;
  if (!rest.empty() && rest[0] == '^') {
    pat.anchored = true;
    rest = rest.substr(1);
  }
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    auto dollar = rest.find('$', pos);
    std::string segment =
        rest.substr(pos, dollar == std::string::npos ? dollar : dollar - pos);
    pos = dollar == std::string::npos ? rest.size() + 1 : dollar + 1;
    if (segment.empty()) continue;
    if (segment == "[*]") {
      pat.elements.push_back({KeywordElement::Type::Wildcard, "", false});
      continue;
    }
    if (segment[0] == '[') {
      auto close = segment.find(']');
      if (close == std::string::npos)
        throw RuleGrammarError("keyword-pattern: unclosed `[` in `" + segment + "`");
      std::string name = segment.substr(1, close - 1);
      if (name.empty())
        throw RuleGrammarError("keyword-pattern: empty capture name in `" + segment + "`");
      std::string tail = segment.substr(close + 1);
      bool optional = false;
      if (tail == "*")
        optional = true;
      else if (!tail.empty())
        throw RuleGrammarError("keyword-pattern: unexpected `" + tail + "` after `[" + name +
                               "]`");
      pat.elements.push_back({KeywordElement::Type::Variable, name, optional});
      continue;
    }
    for (const auto& word : split_whitespace(segment))
      pat.elements.push_back({KeywordElement::Type::Literal, word, false});
  }
  if (pat.elements.empty()) throw RuleGrammarError("keyword-pattern: empty rule body");
  return pat;
}

struct KeywordBinding {
  std::string name;
  std::size_t u_first = 0;
  std::size_t u_last = 0;  // inclusive
};

inline bool keyword_match_from(const std::vector<TaggedToken>& tagged,
                               const KeywordPattern& pat, std::size_t u, std::size_t e,
                               std::vector<KeywordBinding>& bindings) {
  if (e == pat.elements.size()) return u == tagged.size();
  const auto& elem = pat.elements[e];
  if (elem.type == KeywordElement::Type::Literal) {
    if (u < tagged.size() && tagged[u].surface == elem.text)
      return keyword_match_from(tagged, pat, u + 1, e + 1, bindings);
    return false;
  }
  const std::size_t min_len =
      (elem.type == KeywordElement::Type::Wildcard || elem.optional) ? 0 : 1;
  for (std::size_t len = min_len; u + len <= tagged.size(); ++len) {
    const bool binds = elem.type == KeywordElement::Type::Variable && len > 0;
    if (binds) bindings.push_back({elem.text, u, u + len - 1});
    if (keyword_match_from(tagged, pat, u + len, e + 1, bindings)) return true;
    if (binds) bindings.pop_back();
  }
  return false;
}

inline CompiledRule compile_keyword(const RuleSpec& spec) {
  const KeywordPattern pat = parse_keyword_pattern(spec.body);
  CompiledRule rule{spec.family, spec.category, nullptr};
  rule.matcher = [pat, category = spec.category](const std::vector<TaggedToken>& tagged) {
    std::vector<RuleMatch> out;
    const std::size_t max_start = pat.anchored ? 0 : tagged.size();
    for (std::size_t start = 0; start <= max_start; ++start) {
      std::vector<KeywordBinding> bindings;
      if (keyword_match_from(tagged, pat, start, 0, bindings)) {
        for (const auto& b : bindings)
          out.push_back(
              RuleMatch{span_from_units(tagged, b.u_first, b.u_last, category), b.name});
        break;  // first successful start wins
      }
    }
    return out;
  };
  return rule;
}

// --- dependency-constraint family ----------------------------------------
//
// Full dependency matching needs an external parse; the built-in demo
// predicate is the word-length bound from the rule schema.

inline CompiledRule compile_dependency(const RuleSpec& spec) {
  static const std::regex kLenRe(R"(^\s*word-length\s*<\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(spec.body, m, kLenRe))
    throw RuleGrammarError(
        "dependency-constraint: built-in predicate is `word-length < N`, got `" + spec.body +
        "`");
  const std::size_t bound = static_cast<std::size_t>(std::stoul(m[1].str()));
  CompiledRule rule{spec.family, spec.category, nullptr};
  rule.matcher = [bound, category = spec.category](const std::vector<TaggedToken>& tagged) {
    std::vector<RuleMatch> out;
    for (std::size_t u = 0; u < tagged.size(); ++u)
      if (utf8_chars(tagged[u].surface).size() < bound)
        out.push_back(RuleMatch{span_from_units(tagged, u, u, category), ""});
    return out;
  };
  return rule;
}

// --- horn-rule family ------------------------------------------------------
//
// Demo semantics for `antecedent => consequent`: when the antecedent surface
// occurs in the sentence, every unit matching the consequent surface is
// labeled.

inline CompiledRule compile_horn(const RuleSpec& spec) {
  auto arrow = spec.body.find("=>");
  if (arrow == std::string::npos)
    throw RuleGrammarError("horn-rule: expected `antecedent => consequent`, got `" + spec.body +
                           "`");
  const std::string antecedent = join(split_whitespace(spec.body.substr(0, arrow)));
  const std::string consequent = join(split_whitespace(spec.body.substr(arrow + 2)));
  if (antecedent.empty() || consequent.empty())
    throw RuleGrammarError("horn-rule: antecedent and consequent must be non-empty");
  CompiledRule rule{spec.family, spec.category, nullptr};
  rule.matcher = [antecedent, consequent,
                  category = spec.category](const std::vector<TaggedToken>& tagged) {
    std::vector<RuleMatch> out;
    bool fired = false;
    for (const auto& t : tagged)
      if (t.surface == antecedent) {
        fired = true;
        break;
      }
    if (!fired) return out;
    for (std::size_t u = 0; u < tagged.size(); ++u)
      if (tagged[u].surface == consequent)
        out.push_back(RuleMatch{span_from_units(tagged, u, u, category), ""});
    return out;
  };
  return rule;
}

// --- layout-template family -------------------------------------------------
//
// Colon-separated slots `[Name]N` (count defaults to 1) that must consume the
// sentence exactly; each slot emits its capture.

struct LayoutSlot {
  std::string name;
  std::size_t count = 1;
};

inline CompiledRule compile_layout(const RuleSpec& spec) {
  std::vector<LayoutSlot> slots;
  std::size_t pos = 0;
  const std::string& body = spec.body;
  while (pos <= body.size()) {
    auto colon = body.find(':', pos);
    std::string segment = body.substr(pos, colon == std::string::npos ? colon : colon - pos);
    pos = colon == std::string::npos ? body.size() + 1 : colon + 1;
    std::string trimmed = join(split_whitespace(segment), "");
    if (trimmed.empty()) continue;
    if (trimmed.front() != '[')
      throw RuleGrammarError("layout-template: slot must start with `[`: `" + segment + "`");
    auto close = trimmed.find(']');
    if (close == std::string::npos)
      throw RuleGrammarError("layout-template: unclosed `[` in `" + segment + "`");
    LayoutSlot slot;
    slot.name = trimmed.substr(1, close - 1);
    if (slot.name.empty())
      throw RuleGrammarError("layout-template: empty slot name in `" + segment + "`");
    std::string count = trimmed.substr(close + 1);
    if (!count.empty()) {
      for (char c : count)
        if (c < '0' || c > '9')
          throw RuleGrammarError("layout-template: bad slot count `" + count + "`");
      slot.count = std::stoul(count);
      if (slot.count == 0)
        throw RuleGrammarError("layout-template: slot count must be positive");
    }
    slots.push_back(std::move(slot));
  }
  if (slots.empty()) throw RuleGrammarError("layout-template: empty rule body");

  CompiledRule rule{spec.family, spec.category, nullptr};
  rule.matcher = [slots, category = spec.category](const std::vector<TaggedToken>& tagged) {
    std::vector<RuleMatch> out;
    std::size_t total = 0;
    for (const auto& s : slots) total += s.count;
    if (total != tagged.size()) return out;
    std::size_t u = 0;
    for (const auto& s : slots) {
      out.push_back(RuleMatch{span_from_units(tagged, u, u + s.count - 1, category), s.name});
      u += s.count;
    }
    return out;
  };
  return rule;
}

}  // namespace detail

inline CompiledRule compile_rule(const RuleSpec& spec) {
  if (!is_entity_category(spec.category))
    throw std::invalid_argument("rule category must be one of EQU/MAT/CON/STA, got `" +
                                spec.category + "`");
  if (spec.family == "pos-sequence") return detail::compile_pos_sequence(spec);
  if (spec.family == "regular-expression") return detail::compile_regex(spec);
  if (spec.family == "keyword-pattern") return detail::compile_keyword(spec);
  if (spec.family == "dependency-constraint") return detail::compile_dependency(spec);
  if (spec.family == "horn-rule") return detail::compile_horn(spec);
  if (spec.family == "layout-template") return detail::compile_layout(spec);
  throw RuleGrammarError("unknown rule family `" + spec.family + "`");
}

inline CompiledRule builtin_material_rule() {
  CompiledRule rule{"builtin", "MAT", nullptr};
  rule.matcher = [](const std::vector<TaggedToken>& tagged) {
    return detail::wrap_spans(label_materials(tagged));
  };
  return rule;
}

inline CompiledRule builtin_equipment_rule() {
  CompiledRule rule{"builtin", "EQU", nullptr};
  rule.matcher = [](const std::vector<TaggedToken>& tagged) {
    return detail::wrap_spans(label_equipment(tagged));
  };
  return rule;
}

// Union of all rule matches with deterministic conflict resolution:
// overlapping spans of one category merge to the widest cover, overlaps
// across categories go to the earlier rule in the list.
inline std::vector<EntitySpan> apply_rules(const std::vector<CompiledRule>& rules,
                                           const std::vector<TaggedToken>& tagged) {
  struct Candidate {
    EntitySpan span;
    std::size_t rule_idx;
  };
  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < rules.size(); ++r)
    for (auto& m : rules[r].match(tagged)) candidates.push_back({std::move(m.span), r});

  // raw token surfaces, for rebuilding merged-span text
  std::vector<std::string> raw;
  for (const auto& unit : tagged)
    for (auto& w : split_whitespace(unit.surface)) raw.push_back(std::move(w));

  std::vector<Candidate> merged;
  for (const auto& category : entity_categories()) {
    std::vector<Candidate> group;
    for (const auto& c : candidates)
      if (c.span.category == category) group.push_back(c);
    std::sort(group.begin(), group.end(), [](const Candidate& a, const Candidate& b) {
      if (a.span.first != b.span.first) return a.span.first < b.span.first;
      return a.span.last > b.span.last;
    });
    for (std::size_t i = 0; i < group.size();) {
      Candidate cur = group[i];
      std::size_t j = i + 1;
      while (j < group.size() && group[j].span.first <= cur.span.last) {
        cur.span.last = std::max(cur.span.last, group[j].span.last);
        cur.rule_idx = std::min(cur.rule_idx, group[j].rule_idx);
        ++j;
      }
      cur.span.surface.clear();
      for (std::size_t t = cur.span.first; t <= cur.span.last; ++t) {
        if (t > cur.span.first) cur.span.surface += ' ';
        cur.span.surface += raw[t];
      }
      merged.push_back(std::move(cur));
      i = j;
    }
  }

  std::sort(merged.begin(), merged.end(), [](const Candidate& a, const Candidate& b) {
    if (a.rule_idx != b.rule_idx) return a.rule_idx < b.rule_idx;
    return a.span.first < b.span.first;
  });
  std::vector<EntitySpan> accepted;
  for (auto& c : merged) {
    bool clash = false;
    for (const auto& s : accepted)
      if (c.span.first <= s.last && s.first <= c.span.last) {
        clash = true;
        break;
      }
    if (!clash) accepted.push_back(std::move(c.span));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.first < b.first; });
  return accepted;
}

using TriggerLexicon = std::map<std::string, std::vector<std::string>>;

// True when the span surface contains one of its category's trigger words,
// or when the category has no triggers configured (verification disabled).
inline bool verify_triggers(const EntitySpan& span, const TriggerLexicon& lexicon) {
  auto it = lexicon.find(span.category);
  if (it == lexicon.end() || it->second.empty()) return true;
  for (const auto& trigger : it->second)
    if (span.surface.find(trigger) != std::string::npos) return true;
  return false;
}

enum class BioGranularity { Word, Character };

struct BIORecord {
  std::string token;
  std::string label;
  bool operator==(const BIORecord&) const = default;
};

inline bool bio_well_formed(const std::vector<std::string>& labels) {
  std::string open;  // category of the span in progress
  for (const auto& label : labels) {
    if (label == "O") {
      open.clear();
      continue;
    }
    if (label.size() < 3 || (label[0] != 'B' && label[0] != 'I') || label[1] != '-')
      return false;
    const std::string category = label.substr(2);
    if (label[0] == 'I' && category != open) return false;
    open = category;
  }
  return true;
}

inline std::vector<BIORecord> emit_bio(const Sentence& sentence,
                                       const std::vector<EntitySpan>& spans,
                                       BioGranularity granularity = BioGranularity::Word) {
  const std::size_t n = sentence.tokens.size();
  std::vector<const EntitySpan*> by_token(n, nullptr);
  for (const auto& span : spans) {
    if (span.first > span.last || span.last >= n)
      throw std::logic_error("entity span out of sentence bounds");
    for (std::size_t t = span.first; t <= span.last; ++t) {
      if (by_token[t])
        throw std::logic_error("overlapping entity spans reached BIO emission");
      by_token[t] = &span;
    }
  }
  std::vector<BIORecord> records;
  for (std::size_t t = 0; t < n; ++t) {
    const auto* span = by_token[t];
    const bool starts = span && t == span->first;
    if (granularity == BioGranularity::Word) {
      std::string label = span ? (starts ? "B-" : "I-") + span->category : "O";
      records.push_back(BIORecord{sentence.tokens[t].surface, std::move(label)});
    } else {
      const auto chars = utf8_chars(sentence.tokens[t].surface);
      for (std::size_t c = 0; c < chars.size(); ++c) {
        std::string label =
            span ? ((starts && c == 0) ? "B-" : "I-") + span->category : "O";
        records.push_back(BIORecord{chars[c], std::move(label)});
      }
    }
  }
  return records;
}

// Inverse of emit_bio at word granularity; rejects orphan I-X labels.
inline std::vector<EntitySpan> spans_from_bio(const std::vector<BIORecord>& records) {
  std::vector<EntitySpan> spans;
  for (std::size_t t = 0; t < records.size(); ++t) {
    const std::string& label = records[t].label;
    if (label == "O") continue;
    if (label.size() < 3 || (label[0] != 'B' && label[0] != 'I') || label[1] != '-')
      throw std::invalid_argument("malformed BIO label `" + label + "`");
    const std::string category = label.substr(2);
    if (label[0] == 'B') {
      EntitySpan span;
      span.first = span.last = t;
      span.surface = records[t].token;
      span.category = category;
      spans.push_back(std::move(span));
    } else {
      if (spans.empty() || spans.back().last != t - 1 || spans.back().category != category)
        throw std::invalid_argument("orphan I label `" + label + "` at token " +
                                    std::to_string(t));
      spans.back().last = t;
      spans.back().surface += ' ';
      spans.back().surface += records[t].token;
    }
  }
  return spans;
}

}  // namespace zipfaug
