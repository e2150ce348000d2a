#include "parrot/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "parrot/error.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

namespace {

std::optional<double> pct(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::vector<SentenceId> distinct_of(const Repository& repo, const std::string& source) {
  if (!repo.has_source(source)) throw Error(ErrorCode::not_found, "unknown source '" + source + "'");
  const auto data = repo.scope_data(SourceScope{source});
  return kernels::parallel::distinct_ids(data.occurrences);
}

std::vector<SentenceId> intersect(const std::vector<SentenceId>& a, const std::vector<SentenceId>& b) {
  std::vector<SentenceId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Pads to a display width counted in code points.
std::string pad(const std::string& s, std::size_t width, bool left) {
  const auto len = utf8::length(s);
  if (len >= width) return s;
  const std::string fill(width - len, ' ');
  return left ? s + fill : fill + s;
}

std::string with_commas(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

}  // namespace

CorpusMetrics metrics_from_counts(const ScopeData& data, const kernels::OccurrenceSummary& s) {
  CorpusMetrics m;
  m.documents = data.documents;
  m.textCharacters = data.characters;
  m.textBytes = data.bytes;
  m.sentences = s.sentences;
  m.distinctSentences = s.distinct;
  m.dSentencesWithRepetitions = s.withRepetitions;
  m.uniqueDSentences = s.unique;
  if (m.sentences > 0) {
    m.distinctPct = pct(m.distinctSentences, m.sentences);
    m.withRepetitionsPct = pct(m.dSentencesWithRepetitions, m.distinctSentences);
    m.uniquePct = pct(m.uniqueDSentences, m.distinctSentences);
    m.nonUniquePct = pct(m.sentences - m.uniqueDSentences, m.sentences);
  }
  return m;
}

CorpusMetrics compute_metrics(Repository& repo, const Scope& scope, const MetricsOptions& options) {
  auto data = repo.scope_data(scope);
  std::optional<std::string> version;
  if (options.validOnly) {
    const RuleSet fallback = RuleSet::defaults();
    const RuleSet& rules = options.rules ? *options.rules : fallback;
    const auto distinct = kernels::parallel::distinct_ids(data.occurrences, options.threads);
    const auto valid = ensure_validity(repo, distinct, rules);
    std::vector<SentenceId> keep;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      if (valid[i]) keep.push_back(distinct[i]);
    }
    std::erase_if(data.occurrences, [&](SentenceId id) {
      return !std::binary_search(keep.begin(), keep.end(), id);
    });
    version = rules.version();
  }
  auto m = metrics_from_counts(data, kernels::parallel::summarize_occurrences(data.occurrences, options.threads));
  m.scope = describe(scope);
  m.validOnly = options.validOnly;
  m.ruleSetVersion = version;
  return m;
}

std::uint64_t common_distinct_sentences(const Repository& repo, const std::string& sourceA,
                                        const std::string& sourceB) {
  const auto a = distinct_of(repo, sourceA);
  if (sourceA == sourceB) return a.size();
  return intersect(a, distinct_of(repo, sourceB)).size();
}

std::uint64_t common_distinct_all(const Repository& repo, std::span<const std::string> sources) {
  if (sources.empty()) throw Error(ErrorCode::validation_failed, "at least one source required");
  auto acc = distinct_of(repo, sources[0]);
  for (std::size_t i = 1; i < sources.size() && !acc.empty(); ++i) {
    acc = intersect(acc, distinct_of(repo, sources[i]));
  }
  return acc.size();
}

CommonMatrix common_matrix(const Repository& repo, std::span<const std::string> sources) {
  if (sources.empty()) throw Error(ErrorCode::validation_failed, "at least one source required");
  CommonMatrix m;
  m.sources.assign(sources.begin(), sources.end());
  std::vector<std::vector<SentenceId>> sets;
  for (const auto& s : sources) sets.push_back(distinct_of(repo, s));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<std::uint64_t> row;
    for (std::size_t j = 0; j <= i; ++j) {
      row.push_back(i == j ? sets[i].size() : intersect(sets[i], sets[j]).size());
    }
    m.counts.push_back(std::move(row));
  }
  auto acc = sets[0];
  for (std::size_t i = 1; i < sets.size(); ++i) acc = intersect(acc, sets[i]);
  m.all = acc.size();
  return m;
}

std::string format_percent(const std::optional<double>& pct) {
  if (!pct) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", *pct);
  return buf;
}

std::string render_metrics_table(std::span<const CorpusMetrics> columns,
                                 std::span<const std::string> headers) {
  using Getter = std::string (*)(const CorpusMetrics&);
  const std::vector<std::pair<std::string, Getter>> rows = {
      {"#documents", [](const CorpusMetrics& m) { return with_commas(m.documents); }},
      {"#text characters (UTF-8)", [](const CorpusMetrics& m) { return with_commas(m.textCharacters); }},
      {"#sentences", [](const CorpusMetrics& m) { return with_commas(m.sentences); }},
      {"#distinct sentences", [](const CorpusMetrics& m) { return with_commas(m.distinctSentences); }},
      {"#distinct sentences %", [](const CorpusMetrics& m) { return format_percent(m.distinctPct); }},
      {"#d.sentences with repetitions",
       [](const CorpusMetrics& m) { return with_commas(m.dSentencesWithRepetitions); }},
      {"#d.sentences with repetitions %",
       [](const CorpusMetrics& m) { return format_percent(m.withRepetitionsPct); }},
      {"#unique d.sentences", [](const CorpusMetrics& m) { return with_commas(m.uniqueDSentences); }},
      {"#unique d.sentences %", [](const CorpusMetrics& m) { return format_percent(m.uniquePct); }},
      {"#non-unique sentences %", [](const CorpusMetrics& m) { return format_percent(m.nonUniquePct); }},
  };
  std::size_t label_width = 0;
  for (const auto& [label, g] : rows) label_width = std::max(label_width, label.size());
  std::vector<std::size_t> widths;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::size_t w = c < headers.size() ? utf8::length(headers[c]) : 0;
    for (const auto& [label, g] : rows) w = std::max(w, g(columns[c]).size());
    widths.push_back(w);
  }
  std::ostringstream out;
  out << pad("", label_width, true);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << "  " << pad(c < headers.size() ? headers[c] : "", widths[c], false);
  }
  out << '\n';
  for (const auto& [label, g] : rows) {
    out << pad(label, label_width, true);
    for (std::size_t c = 0; c < columns.size(); ++c) out << "  " << pad(g(columns[c]), widths[c], false);
    out << '\n';
  }
  return out.str();
}

std::string render_common_matrix(const CommonMatrix& m) {
  const std::string corner = "Common #distinct sentences";
  std::size_t label_width = corner.size();
  for (const auto& s : m.sources) label_width = std::max(label_width, utf8::length(s));
  std::vector<std::size_t> widths;
  for (std::size_t j = 0; j < m.sources.size(); ++j) {
    std::size_t w = utf8::length(m.sources[j]);
    for (std::size_t i = j; i < m.sources.size(); ++i) w = std::max(w, with_commas(m.counts[i][j]).size());
    widths.push_back(w);
  }
  std::ostringstream out;
  out << pad(corner, label_width, true);
  for (std::size_t j = 0; j < m.sources.size(); ++j) out << "  " << pad(m.sources[j], widths[j], false);
  out << '\n';
  for (std::size_t i = 0; i < m.sources.size(); ++i) {
    out << pad(m.sources[i], label_width, true);
    for (std::size_t j = 0; j < m.sources.size(); ++j) {
      out << "  " << pad(j <= i ? with_commas(m.counts[i][j]) : "", widths[j], false);
    }
    out << '\n';
  }
  out << "Common #distinct sentences (all sources): " << with_commas(m.all) << '\n';
  return out.str();
}

}  // namespace parrot
