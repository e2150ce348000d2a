#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "parrot/extraction.hpp"
#include "parrot/md5.hpp"
#include "parrot/tokenizer.hpp"

namespace parrot {

template <class Tag>
struct Id {
  std::int64_t value = 0;

  auto operator<=>(const Id&) const = default;
};

struct DocumentTag;
struct SentenceTag;
struct TranslationTag;
using DocumentId = Id<DocumentTag>;
using SentenceId = Id<SentenceTag>;
using TranslationId = Id<TranslationTag>;

struct IdHash {
  template <class Tag>
  std::size_t operator()(Id<Tag> id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

// Microseconds since the Unix epoch.
using Timestamp = std::int64_t;
Timestamp now_micros();
std::string format_timestamp(Timestamp ts);

struct Document {
  DocumentId id;
  std::string sourceTag;
  std::string name;
  std::string mimeType;
  PlainText content;
  std::uint64_t textCharacterCount = 0;
  std::uint64_t byteCount = 0;
  Timestamp createdAt = 0;
};

struct DocumentSummary {
  DocumentId id;
  std::string sourceTag;
  std::string name;
  std::string mimeType;
  std::uint64_t textCharacterCount = 0;
  std::uint64_t byteCount = 0;
  std::uint64_t sentenceCount = 0;
  Timestamp createdAt = 0;
};

struct Sentence {
  SentenceId id;
  std::string plainText;
  Md5Digest md5hash;
  std::string languageTag;

  bool operator==(const Sentence&) const = default;
};

struct SentenceSource {
  DocumentId documentId;
  SentenceId sentenceId;
  std::uint64_t startOffset = 0;
};

struct SentenceTranslation {
  TranslationId id;
  SentenceId sentenceId;
  std::string targetLanguage;
  std::string translatedText;
  std::string contributor;
  std::int64_t votes = 0;
  Timestamp createdAt = 0;
};

struct IngestStats {
  std::uint64_t sentences = 0;
  std::uint64_t newDistinct = 0;
  std::uint64_t reusedDistinct = 0;

  IngestStats& operator+=(const IngestStats& o) {
    sentences += o.sentences;
    newDistinct += o.newDistinct;
    reusedDistinct += o.reusedDistinct;
    return *this;
  }
  bool operator==(const IngestStats&) const = default;
};

struct DocumentMeta {
  std::string sourceTag;
  std::string name;
  std::string mimeType{kMimePlain};
  std::string languageTag = "en";
};

struct PreparedSentence {
  std::string text;
  Md5Digest hash;
};

// A document after extraction, tokenization and hashing; everything an
// ingestion commit needs and nothing that touches the store.
struct PreparedDocument {
  DocumentMeta meta;
  PlainText content;
  std::uint64_t characters = 0;
  std::vector<PreparedSentence> sentences;
};

PreparedDocument prepare_document(DocumentMeta meta, PlainText content,
                                  const SentenceTokenizer& tokenizer = {});

struct PageRequest {
  std::uint64_t page = 1;  // 1-based
  std::uint64_t pageSize = 20;
};

inline constexpr std::uint64_t kMaxPageSize = 1000;

template <class T>
struct Page {
  std::vector<T> items;
  std::uint64_t page = 1;
  std::uint64_t pageSize = 0;
  std::uint64_t total = 0;
};

void check_page_request(const PageRequest& req);

struct DocumentFilter {
  std::optional<std::string> sourceTag;
  std::optional<std::string> nameSubstring;
};

struct SentenceFilter {
  std::optional<std::string> textSubstring;
  std::optional<std::string> languageTag;
  std::optional<std::uint64_t> minOccurrences;
};

struct SentenceHit {
  Sentence sentence;
  std::uint64_t occurrenceCount = 0;
};

struct DocumentDetail {
  struct Entry {
    std::uint64_t startOffset = 0;
    Sentence sentence;
    std::uint64_t occurrenceCount = 0;        // global, all documents
    std::vector<DocumentSummary> otherDocuments;  // small sample
  };
  Document document;
  std::vector<Entry> sentences;
};

struct SentenceDetail {
  Sentence sentence;
  std::uint64_t occurrenceCount = 0;
  std::vector<DocumentSummary> documents;
  std::vector<SentenceTranslation> translations;
};

inline constexpr std::size_t kDocumentSampleSize = 5;

struct AllDocuments {};
struct SourceScope {
  std::string sourceTag;
};
struct DocumentSet {
  std::vector<DocumentId> ids;
};
using Scope = std::variant<AllDocuments, SourceScope, DocumentSet>;

std::string describe(const Scope& scope);

// Raw material for metric computation over one scope.
struct ScopeData {
  std::uint64_t documents = 0;
  std::uint64_t characters = 0;
  std::uint64_t bytes = 0;
  std::vector<SentenceId> occurrences;  // one entry per SentenceSource row
};

struct AuditFinding {
  std::string check;
  std::string subject;
  std::string detail;
};

struct AuditReport {
  std::uint64_t documents = 0;
  std::uint64_t sentences = 0;
  std::uint64_t sources = 0;
  std::uint64_t translations = 0;
  std::uint64_t duplicateGroups = 0;  // informational; cleared by dedup_pass
  std::vector<AuditFinding> findings;

  bool ok() const { return findings.empty(); }
};

struct StoreCounts {
  std::uint64_t documents = 0;
  std::uint64_t sentences = 0;
  std::uint64_t sources = 0;
  std::uint64_t translations = 0;
};

// Persistence contract. Implementations must make commit_document atomic
// and must never enforce uniqueness of sentence text at insert time:
// lookups go through the (md5, language) index followed by exact text
// comparison, and concurrent inserts of the same text are merged later by
// dedup_pass.
class Repository {
 public:
  virtual ~Repository() = default;

  // Throws already_ingested when (sourceTag, name) exists.
  virtual std::pair<DocumentId, IngestStats> commit_document(const PreparedDocument& doc) = 0;

  virtual std::optional<Sentence> find_sentence(std::string_view text,
                                                std::string_view languageTag) const = 0;

  // Requires no concurrent ingestion for the affected language.
  virtual std::uint64_t dedup_pass(const std::optional<std::string>& languageTag) = 0;

  virtual Page<DocumentSummary> list_documents(const DocumentFilter& filter,
                                               const PageRequest& req) const = 0;
  virtual DocumentDetail get_document(DocumentId id) const = 0;
  virtual Page<SentenceHit> list_sentences(const SentenceFilter& filter,
                                           const PageRequest& req) const = 0;
  virtual SentenceDetail get_sentence(SentenceId id) const = 0;
  virtual std::uint64_t occurrence_count(SentenceId id) const = 0;

  // Resubmitting an identical (sentence, language, text) endorses the
  // existing record instead of inserting.
  virtual SentenceTranslation add_translation(SentenceId sentence, const std::string& targetLanguage,
                                              const std::string& text,
                                              const std::string& contributor) = 0;
  virtual SentenceTranslation vote_translation(TranslationId id, std::int64_t delta) = 0;
  virtual std::vector<SentenceTranslation> translations(
      SentenceId sentence, const std::optional<std::string>& targetLanguage) const = 0;

  virtual ScopeData scope_data(const Scope& scope) const = 0;
  virtual bool has_source(std::string_view sourceTag) const = 0;
  virtual std::vector<std::string> source_tags() const = 0;
  virtual std::vector<Sentence> sentences_by_id(std::span<const SentenceId> ids) const = 0;
  virtual std::vector<DocumentId> document_ids(const DocumentFilter& filter) const = 0;

  // Validation cache, keyed by rule-set version.
  virtual std::vector<std::optional<bool>> cached_validity(std::span<const SentenceId> ids,
                                                           std::string_view version) const = 0;
  virtual void store_validity(std::span<const std::pair<SentenceId, bool>> results,
                              std::string_view version) = 0;

  virtual AuditReport audit() const = 0;
  virtual StoreCounts counts() const = 0;

  // Test hooks. They bypass lookup (and optionally hashing) so collision and
  // duplicate scenarios can be built deterministically.
  virtual SentenceId insert_sentence_unchecked(const std::string& text, const std::string& languageTag,
                                               std::optional<Md5Digest> forcedHash) = 0;
  virtual DocumentId insert_document_unchecked(const DocumentMeta& meta, const PlainText& content,
                                               std::span<const SentenceId> sentences) = 0;
};

// prepare_document + commit_document.
std::pair<DocumentId, IngestStats> ingest_document(Repository& repo, const DocumentMeta& meta,
                                                   const PlainText& content,
                                                   const SentenceTokenizer& tokenizer = {});

void audit_hash_integrity(const Sentence& s, AuditReport& report);

}  // namespace parrot

namespace parrot {

// Best first: votes desc, then newest, then highest id.
void rank_translations(std::vector<SentenceTranslation>& candidates);

}  // namespace parrot
