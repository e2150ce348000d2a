#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parrot/store.hpp"

namespace parrot {

struct ValidationRule {
  std::string ruleId;
  std::string description;
  bool enabled = true;
  std::map<std::string, double> parameters;
};

// Ordered, versioned collection of rules. The version string keys the
// per-sentence validity cache and is echoed in every valid-only metric.
class RuleSet {
 public:
  static RuleSet defaults();
  static RuleSet from_json(std::string_view json);
  static RuleSet load(const std::filesystem::path& path);
  std::string to_json() const;

  const std::string& version() const { return version_; }
  const std::vector<ValidationRule>& rules() const { return rules_; }
  ValidationRule* find(std::string_view ruleId);
  const ValidationRule* find(std::string_view ruleId) const;

  // Toggling a rule changes the version so cached results are not reused.
  void set_enabled(std::string_view ruleId, bool enabled);

 private:
  void rehash_version();

  std::string version_;
  std::vector<ValidationRule> rules_;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> failedRuleIds;
};

// Evaluates every enabled rule; no short-circuit.
ValidationReport validate_sentence(std::string_view text, const RuleSet& rules);

struct CorpusValidation {
  std::uint64_t distinctChecked = 0;
  std::uint64_t distinctValid = 0;
  std::optional<double> validPct;
  std::string ruleSetVersion;
};

// Validity of each id under `rules`, served from the repository cache when
// the cached version matches and computed (and cached) otherwise.
std::vector<std::uint8_t> ensure_validity(Repository& repo, std::span<const SentenceId> ids,
                                          const RuleSet& rules);

CorpusValidation validate_corpus(Repository& repo, const Scope& scope, const RuleSet& rules);

}  // namespace parrot
