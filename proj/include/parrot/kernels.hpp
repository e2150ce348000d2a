#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial that shares no code with the OpenMP version in
// kernels::parallel; tests compare the two and bench/ times them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parrot/error.hpp"
#include "parrot/store.hpp"
#include "parrot/validation.hpp"

namespace parrot::kernels {

struct OccurrenceSummary {
  std::uint64_t sentences = 0;         // occurrences
  std::uint64_t distinct = 0;          // distinct ids
  std::uint64_t withRepetitions = 0;   // ids seen more than once
  std::uint64_t unique = 0;            // ids seen exactly once

  bool operator==(const OccurrenceSummary&) const = default;
};

// Outcome of one document in a batch ingestion.
struct BatchItem {
  std::optional<DocumentId> id;
  IngestStats stats;
  std::optional<ErrorCode> error;
  std::string message;
};

namespace serial {

OccurrenceSummary summarize_occurrences(std::span<const SentenceId> occurrences);

// Sorted ascending, without duplicates.
std::vector<SentenceId> distinct_ids(std::span<const SentenceId> occurrences);

std::vector<std::uint8_t> validate_batch(std::span<const Sentence> sentences, const RuleSet& rules);

std::vector<PreparedDocument> prepare_batch(std::span<const DocumentMeta> metas,
                                            std::span<const PlainText> contents,
                                            const SentenceTokenizer& tokenizer = {});

std::vector<BatchItem> ingest_batch(Repository& repo, std::span<const DocumentMeta> metas,
                                    std::span<const PlainText> contents,
                                    const SentenceTokenizer& tokenizer = {});

}  // namespace serial

namespace parallel {

// threads == 0 uses the OpenMP default team size.
OccurrenceSummary summarize_occurrences(std::span<const SentenceId> occurrences, int threads = 0);

std::vector<SentenceId> distinct_ids(std::span<const SentenceId> occurrences, int threads = 0);

std::vector<std::uint8_t> validate_batch(std::span<const Sentence> sentences, const RuleSet& rules,
                                         int threads = 0);

std::vector<PreparedDocument> prepare_batch(std::span<const DocumentMeta> metas,
                                            std::span<const PlainText> contents,
                                            const SentenceTokenizer& tokenizer = {},
                                            int threads = 0);

// Workers prepare and commit concurrently. Concurrent commits may create
// duplicate sentences; run dedup_pass afterwards.
std::vector<BatchItem> ingest_batch(Repository& repo, std::span<const DocumentMeta> metas,
                                    std::span<const PlainText> contents,
                                    const SentenceTokenizer& tokenizer = {}, int threads = 0);

}  // namespace parallel

}  // namespace parrot::kernels
