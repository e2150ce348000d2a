#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parrot/kernels.hpp"
#include "parrot/store.hpp"
#include "parrot/validation.hpp"

namespace parrot {

// Sentence-repetition metrics for one scope. Percentages are kept at full
// precision and are absent when the scope has no sentences.
struct CorpusMetrics {
  std::string scope;
  std::uint64_t documents = 0;
  std::uint64_t textCharacters = 0;  // Unicode scalar values
  std::uint64_t textBytes = 0;
  std::uint64_t sentences = 0;
  std::uint64_t distinctSentences = 0;
  std::optional<double> distinctPct;
  std::uint64_t dSentencesWithRepetitions = 0;
  std::optional<double> withRepetitionsPct;
  std::uint64_t uniqueDSentences = 0;
  std::optional<double> uniquePct;
  std::optional<double> nonUniquePct;
  bool validOnly = false;
  std::optional<std::string> ruleSetVersion;

  bool operator==(const CorpusMetrics&) const = default;
};

CorpusMetrics metrics_from_counts(const ScopeData& data, const kernels::OccurrenceSummary& summary);

struct MetricsOptions {
  bool validOnly = false;
  const RuleSet* rules = nullptr;  // defaults when null and validOnly
  int threads = 0;
};

// Repetition is counted within the scope: a sentence "with repetitions" is
// referenced more than once by the scope's documents. Requires a quiesced,
// deduped store.
CorpusMetrics compute_metrics(Repository& repo, const Scope& scope, const MetricsOptions& options = {});

// Distinct sentences referenced by both sources. Unknown tags are not_found.
std::uint64_t common_distinct_sentences(const Repository& repo, const std::string& sourceA,
                                        const std::string& sourceB);
std::uint64_t common_distinct_all(const Repository& repo, std::span<const std::string> sources);

// Lower-triangular matrix (row i holds columns 0..i) plus the intersection
// over all sources.
struct CommonMatrix {
  std::vector<std::string> sources;
  std::vector<std::vector<std::uint64_t>> counts;
  std::uint64_t all = 0;
};

CommonMatrix common_matrix(const Repository& repo, std::span<const std::string> sources);

std::string format_percent(const std::optional<double>& pct);
std::string render_metrics_table(std::span<const CorpusMetrics> columns,
                                 std::span<const std::string> headers);
std::string render_common_matrix(const CommonMatrix& matrix);

}  // namespace parrot
