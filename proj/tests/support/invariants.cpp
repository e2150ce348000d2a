#include "invariants.hpp"

namespace parrot::testing {

namespace {

void expect_pct(std::vector<std::string>& out, const char* name, const std::optional<double>& got,
                std::uint64_t num, std::uint64_t den) {
  if (!got) {
    out.push_back(std::string(name) + " missing");
    return;
  }
  // recomputed with the same expression so equality is exact
  const double want = 100.0 * static_cast<double>(num) / static_cast<double>(den);
  if (*got != want) out.push_back(std::string(name) + " mismatch");
}

}  // namespace

std::vector<std::string> metric_identity_violations(const CorpusMetrics& m) {
  std::vector<std::string> out;
  if (m.distinctSentences != m.uniqueDSentences + m.dSentencesWithRepetitions) {
    out.push_back("distinct != unique + withRepetitions");
  }
  if (m.distinctSentences > m.sentences) out.push_back("distinct > sentences");
  // each repeated sentence occurs at least twice
  if (m.sentences < m.uniqueDSentences + 2 * m.dSentencesWithRepetitions) {
    out.push_back("sentences < unique + 2*withRepetitions");
  }
  if (m.sentences == 0) {
    if (m.distinctPct || m.withRepetitionsPct || m.uniquePct || m.nonUniquePct) {
      out.push_back("percentages present for an empty scope");
    }
    return out;
  }
  expect_pct(out, "distinctPct", m.distinctPct, m.distinctSentences, m.sentences);
  expect_pct(out, "withRepetitionsPct", m.withRepetitionsPct, m.dSentencesWithRepetitions, m.distinctSentences);
  expect_pct(out, "uniquePct", m.uniquePct, m.uniqueDSentences, m.distinctSentences);
  expect_pct(out, "nonUniquePct", m.nonUniquePct, m.sentences - m.uniqueDSentences, m.sentences);
  return out;
}

std::vector<std::string> growth_violations(const CorpusMetrics& before, const CorpusMetrics& after) {
  std::vector<std::string> out;
  if (after.documents != before.documents + 1) out.push_back("documents did not grow by one");
  if (after.sentences < before.sentences) out.push_back("sentences decreased");
  if (after.distinctSentences < before.distinctSentences) out.push_back("distinct decreased");
  if (after.dSentencesWithRepetitions < before.dSentencesWithRepetitions) out.push_back("withRepetitions decreased");
  if (after.textCharacters < before.textCharacters) out.push_back("characters decreased");
  return out;
}

}  // namespace parrot::testing
