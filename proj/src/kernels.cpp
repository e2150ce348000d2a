#include "parrot/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <unordered_map>

#include "parrot/error.hpp"

namespace parrot::kernels {

namespace serial {

OccurrenceSummary summarize_occurrences(std::span<const SentenceId> occurrences) {
  std::unordered_map<std::int64_t, std::uint64_t> counts;
  counts.reserve(occurrences.size());
  for (SentenceId id : occurrences) ++counts[id.value];
  OccurrenceSummary s;
  s.sentences = occurrences.size();
  s.distinct = counts.size();
  for (const auto& [id, n] : counts) {
    if (n == 1) {
      ++s.unique;
    } else {
      ++s.withRepetitions;
    }
  }
  return s;
}

std::vector<SentenceId> distinct_ids(std::span<const SentenceId> occurrences) {
  std::vector<SentenceId> out(occurrences.begin(), occurrences.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint8_t> validate_batch(std::span<const Sentence> sentences, const RuleSet& rules) {
  std::vector<std::uint8_t> out(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    out[i] = validate_sentence(sentences[i].plainText, rules).valid;
  }
  return out;
}

std::vector<PreparedDocument> prepare_batch(std::span<const DocumentMeta> metas,
                                            std::span<const PlainText> contents,
                                            const SentenceTokenizer& tokenizer) {
  std::vector<PreparedDocument> out;
  out.reserve(metas.size());
  for (std::size_t i = 0; i < metas.size(); ++i) {
    out.push_back(prepare_document(metas[i], contents[i], tokenizer));
  }
  return out;
}

std::vector<BatchItem> ingest_batch(Repository& repo, std::span<const DocumentMeta> metas,
                                    std::span<const PlainText> contents,
                                    const SentenceTokenizer& tokenizer) {
  std::vector<BatchItem> out(metas.size());
  for (std::size_t i = 0; i < metas.size(); ++i) {
    try {
      auto [id, stats] = ingest_document(repo, metas[i], contents[i], tokenizer);
      out[i].id = id;
      out[i].stats = stats;
    } catch (const Error& e) {
      out[i].error = e.code();
      out[i].message = e.what();
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

namespace {

int team(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

struct IdRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
};

IdRange id_range(std::span<const SentenceId> ids, int threads) {
  std::int64_t lo = INT64_MAX, hi = INT64_MIN;
  const auto n = static_cast<std::int64_t>(ids.size());
#pragma omp parallel for num_threads(team(threads)) reduction(min : lo) reduction(max : hi)
  for (std::int64_t i = 0; i < n; ++i) {
    lo = std::min(lo, ids[i].value);
    hi = std::max(hi, ids[i].value);
  }
  return n ? IdRange{lo, hi} : IdRange{};
}

// Dense per-id occurrence counts over [range.lo, range.hi].
std::vector<std::uint32_t> dense_counts(std::span<const SentenceId> ids, IdRange range, int threads) {
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(range.hi - range.lo + 1), 0);
  const auto n = static_cast<std::int64_t>(ids.size());
  std::uint32_t* c = counts.data();
#pragma omp parallel for num_threads(team(threads)) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
#pragma omp atomic update
    ++c[ids[i].value - range.lo];
  }
  return counts;
}

// Dense counting needs memory proportional to the id span; sparse inputs
// (test hooks, hand-built id lists) go through a sort instead.
bool too_sparse(IdRange range, std::size_t n) {
  return static_cast<std::uint64_t>(range.hi - range.lo) > 8 * static_cast<std::uint64_t>(n) + (1u << 20);
}

std::vector<std::pair<SentenceId, std::uint64_t>> sorted_runs(std::span<const SentenceId> ids) {
  std::vector<SentenceId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<SentenceId, std::uint64_t>> runs;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    runs.emplace_back(sorted[i], j - i);
    i = j;
  }
  return runs;
}

}  // namespace

OccurrenceSummary summarize_occurrences(std::span<const SentenceId> occurrences, int threads) {
  OccurrenceSummary s;
  s.sentences = occurrences.size();
  if (occurrences.empty()) return s;
  const auto range = id_range(occurrences, threads);
  if (too_sparse(range, occurrences.size())) {
    for (const auto& [id, n] : sorted_runs(occurrences)) {
      ++s.distinct;
      s.unique += n == 1;
      s.withRepetitions += n > 1;
    }
    return s;
  }
  const auto counts = dense_counts(occurrences, range, threads);
  std::uint64_t distinct = 0, unique = 0, repeated = 0;
  const auto m = static_cast<std::int64_t>(counts.size());
#pragma omp parallel for num_threads(team(threads)) reduction(+ : distinct, unique, repeated)
  for (std::int64_t k = 0; k < m; ++k) {
    const auto c = counts[k];
    distinct += c != 0;
    unique += c == 1;
    repeated += c > 1;
  }
  s.distinct = distinct;
  s.unique = unique;
  s.withRepetitions = repeated;
  return s;
}

std::vector<SentenceId> distinct_ids(std::span<const SentenceId> occurrences, int threads) {
  if (occurrences.empty()) return {};
  const auto range = id_range(occurrences, threads);
  if (too_sparse(range, occurrences.size())) {
    std::vector<SentenceId> out;
    for (const auto& [id, n] : sorted_runs(occurrences)) out.push_back(id);
    return out;
  }
  const auto counts = dense_counts(occurrences, range, threads);
  const int nt = team(threads);
  const auto m = static_cast<std::int64_t>(counts.size());

  // Each thread compacts one contiguous slice; slices concatenate in order.
  std::vector<std::vector<SentenceId>> parts(nt);
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    const int size = omp_get_num_threads();
    const std::int64_t begin = m * t / size;
    const std::int64_t end = m * (t + 1) / size;
    auto& part = parts[t];
    for (std::int64_t k = begin; k < end; ++k) {
      if (counts[k]) part.push_back(SentenceId{range.lo + k});
    }
  }
  std::vector<SentenceId> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<std::uint8_t> validate_batch(std::span<const Sentence> sentences, const RuleSet& rules,
                                         int threads) {
  std::vector<std::uint8_t> out(sentences.size());
  const auto n = static_cast<std::int64_t>(sentences.size());
#pragma omp parallel for num_threads(team(threads)) schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = validate_sentence(sentences[i].plainText, rules).valid;
  }
  return out;
}

std::vector<PreparedDocument> prepare_batch(std::span<const DocumentMeta> metas,
                                            std::span<const PlainText> contents,
                                            const SentenceTokenizer& tokenizer, int threads) {
  std::vector<PreparedDocument> out(metas.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(metas.size());
#pragma omp parallel for num_threads(team(threads)) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = prepare_document(metas[i], contents[i], tokenizer);
    } catch (...) {
#pragma omp critical(prepare_batch_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<BatchItem> ingest_batch(Repository& repo, std::span<const DocumentMeta> metas,
                                    std::span<const PlainText> contents,
                                    const SentenceTokenizer& tokenizer, int threads) {
  std::vector<BatchItem> out(metas.size());
  const auto n = static_cast<std::int64_t>(metas.size());
#pragma omp parallel for num_threads(team(threads)) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto prepared = prepare_document(metas[i], contents[i], tokenizer);
      auto [id, stats] = repo.commit_document(prepared);
      out[i].id = id;
      out[i].stats = stats;
    } catch (const Error& e) {
      out[i].error = e.code();
      out[i].message = e.what();
    } catch (const std::exception& e) {
      out[i].error = ErrorCode::internal;
      out[i].message = e.what();
    }
  }
  return out;
}

}  // namespace parallel

}  // namespace parrot::kernels
