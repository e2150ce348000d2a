#include "parrot/validation.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <json.hpp>
#include <sstream>

#include "parrot/error.hpp"
#include "parrot/kernels.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> tokens_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && utf8::is_space(s[i])) ++i;
    const std::size_t b = i;
    while (i < s.size() && !utf8::is_space(s[i])) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::vector<char32_t> code_points(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto d = utf8::decode(s, i);
    out.push_back(d.cp);
    i += d.length;
  }
  return out;
}

bool opening_quote(char32_t c) { return c == '"' || c == '\'' || c == 0x201C || c == 0x2018 || c == 0xAB; }
bool closing_quote(char32_t c) { return c == '"' || c == '\'' || c == 0x201D || c == 0x2019 || c == 0xBB; }
bool terminal(char32_t c) { return c == '.' || c == '!' || c == '?'; }

double param(const ValidationRule& r, const char* key, double fallback) {
  auto it = r.parameters.find(key);
  return it == r.parameters.end() ? fallback : it->second;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && utf8::is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && utf8::is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Returns true when the rule passes.
bool evaluate(const ValidationRule& rule, std::string_view text,
              const std::vector<std::string_view>& tokens, const std::vector<char32_t>& cps) {
  const auto& id = rule.ruleId;
  if (id == "non_empty") return !trim(text).empty();
  if (id == "max_characters") return static_cast<double>(cps.size()) <= param(rule, "max", 2000);
  if (id == "token_count") {
    const auto n = static_cast<double>(tokens.size());
    return n >= param(rule, "min", 1) && n <= param(rule, "max", 200);
  }
  if (id == "alphabetic_ratio") {
    std::size_t visible = 0, alpha = 0;
    for (char32_t c : cps) {
      if (c < 0x80 && utf8::is_space(static_cast<char>(c))) continue;
      ++visible;
      alpha += utf8::is_alpha(c);
    }
    return visible > 0 && static_cast<double>(alpha) / static_cast<double>(visible) >= param(rule, "min", 0.5);
  }
  if (id == "initial_character") {
    const auto t = trim(text);
    if (t.empty()) return false;
    const char32_t c = utf8::decode(t, 0).cp;
    return utf8::is_alpha(c) || utf8::is_digit(c) || opening_quote(c);
  }
  if (id == "terminal_punctuation") {
    auto t = code_points(trim(text));
    if (t.empty()) return false;
    if (terminal(t.back())) return true;
    return t.size() >= 2 && closing_quote(t.back()) && terminal(t[t.size() - 2]);
  }
  if (id == "single_char_token_run") {
    const auto limit = static_cast<std::size_t>(param(rule, "max_run", 5));
    std::size_t run = 0;
    for (auto tok : tokens) {
      run = utf8::length(tok) == 1 ? run + 1 : 0;
      if (run >= limit) return false;
    }
    return true;
  }
  if (id == "balanced_brackets") {
    long depth = 0;
    std::size_t ascii_quotes = 0, open_curly = 0, close_curly = 0;
    for (char32_t c : cps) {
      if (c == '(') ++depth;
      if (c == ')' && --depth < 0) return false;
      ascii_quotes += c == '"';
      open_curly += c == 0x201C;
      close_curly += c == 0x201D;
    }
    return depth == 0 && ascii_quotes % 2 == 0 && open_curly == close_curly;
  }
  if (id == "max_token_length") {
    const auto limit = param(rule, "max", 50);
    for (auto tok : tokens) {
      if (static_cast<double>(utf8::length(tok)) > limit) return false;
    }
    return true;
  }
  throw Error(ErrorCode::validation_failed, "unknown validation rule '" + id + "'");
}

const std::vector<std::string_view>& known_rules() {
  static const std::vector<std::string_view> ids = {
      "non_empty",          "max_characters",        "token_count",
      "alphabetic_ratio",   "initial_character",     "terminal_punctuation",
      "single_char_token_run", "balanced_brackets",  "max_token_length"};
  return ids;
}

json rules_json(const std::vector<ValidationRule>& rules) {
  json arr = json::array();
  for (const auto& r : rules) {
    arr.push_back({{"id", r.ruleId},
                   {"description", r.description},
                   {"enabled", r.enabled},
                   {"parameters", r.parameters}});
  }
  return arr;
}

}  // namespace

RuleSet RuleSet::defaults() {
  RuleSet set;
  set.version_ = "default-1";
  set.rules_ = {
      {"non_empty", "Non-empty after trimming whitespace", true, {}},
      {"max_characters", "At most `max` characters", true, {{"max", 2000}}},
      {"token_count", "Between `min` and `max` whitespace-separated tokens", true,
       {{"min", 1}, {"max", 200}}},
      {"alphabetic_ratio", "Share of letters among non-whitespace characters is at least `min`",
       true, {{"min", 0.5}}},
      {"initial_character", "Starts with a letter, digit or opening quote", true, {}},
      {"terminal_punctuation", "Ends with . ! or ?, optionally followed by a closing quote", true, {}},
      {"single_char_token_run", "No run of `max_run` or more single-character tokens", true,
       {{"max_run", 5}}},
      {"balanced_brackets", "Balanced round brackets and double quotes", true, {}},
      {"max_token_length", "Longest token has at most `max` characters", true, {{"max", 50}}},
  };
  return set;
}

RuleSet RuleSet::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::validation_failed, std::string("invalid rule set: ") + e.what());
  }
  RuleSet set;
  const json& rules = doc.is_array() ? doc : doc.value("rules", json::array());
  for (const auto& r : rules) {
    ValidationRule rule;
    rule.ruleId = r.at("id").get<std::string>();
    if (std::find(known_rules().begin(), known_rules().end(), rule.ruleId) == known_rules().end()) {
      throw Error(ErrorCode::validation_failed, "unknown validation rule '" + rule.ruleId + "'");
    }
    if (set.find(rule.ruleId)) {
      throw Error(ErrorCode::validation_failed, "duplicate validation rule '" + rule.ruleId + "'");
    }
    rule.description = r.value("description", "");
    rule.enabled = r.value("enabled", true);
    if (r.contains("parameters")) {
      for (const auto& [k, v] : r["parameters"].items()) rule.parameters[k] = v.get<double>();
    }
    set.rules_.push_back(std::move(rule));
  }
  if (doc.is_object() && doc.contains("version")) {
    set.version_ = doc["version"].get<std::string>();
  } else {
    set.rehash_version();
  }
  return set;
}

RuleSet RuleSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::not_found, "cannot read rule set '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string RuleSet::to_json() const {
  return json{{"version", version_}, {"rules", rules_json(rules_)}}.dump(2);
}

ValidationRule* RuleSet::find(std::string_view ruleId) {
  for (auto& r : rules_) {
    if (r.ruleId == ruleId) return &r;
  }
  return nullptr;
}

const ValidationRule* RuleSet::find(std::string_view ruleId) const {
  return const_cast<RuleSet*>(this)->find(ruleId);
}

void RuleSet::set_enabled(std::string_view ruleId, bool enabled) {
  auto* r = find(ruleId);
  if (!r) throw Error(ErrorCode::not_found, "no rule '" + std::string(ruleId) + "'");
  if (r->enabled == enabled) return;
  r->enabled = enabled;
  rehash_version();
}

void RuleSet::rehash_version() {
  version_ = "rules-" + compute_md5(rules_json(rules_).dump()).substr(0, 12);
}

ValidationReport validate_sentence(std::string_view text, const RuleSet& rules) {
  const auto tokens = tokens_of(text);
  const auto cps = code_points(text);
  ValidationReport report;
  for (const auto& rule : rules.rules()) {
    if (rule.enabled && !evaluate(rule, text, tokens, cps)) report.failedRuleIds.push_back(rule.ruleId);
  }
  report.valid = report.failedRuleIds.empty();
  return report;
}

std::vector<std::uint8_t> ensure_validity(Repository& repo, std::span<const SentenceId> ids,
                                          const RuleSet& rules) {
  const auto cached = repo.cached_validity(ids, rules.version());
  std::vector<SentenceId> missing;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!cached[i]) missing.push_back(ids[i]);
  }
  std::vector<std::uint8_t> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = cached[i].value_or(false);
  if (missing.empty()) return out;

  const auto sentences = repo.sentences_by_id(missing);
  const auto results = kernels::parallel::validate_batch(sentences, rules);
  std::vector<std::pair<SentenceId, bool>> fresh;
  fresh.reserve(missing.size());
  std::unordered_map<std::int64_t, bool> by_id;
  for (std::size_t i = 0; i < missing.size(); ++i) {
    fresh.emplace_back(missing[i], results[i] != 0);
    by_id[missing[i].value] = results[i] != 0;
  }
  repo.store_validity(fresh, rules.version());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!cached[i]) out[i] = by_id.at(ids[i].value);
  }
  return out;
}

CorpusValidation validate_corpus(Repository& repo, const Scope& scope, const RuleSet& rules) {
  const auto data = repo.scope_data(scope);
  const auto distinct = kernels::parallel::distinct_ids(data.occurrences);
  const auto valid = ensure_validity(repo, distinct, rules);
  CorpusValidation out;
  out.ruleSetVersion = rules.version();
  out.distinctChecked = distinct.size();
  for (auto v : valid) out.distinctValid += v;
  if (out.distinctChecked) {
    out.validPct = 100.0 * static_cast<double>(out.distinctValid) / static_cast<double>(out.distinctChecked);
  }
  return out;
}

}  // namespace parrot
