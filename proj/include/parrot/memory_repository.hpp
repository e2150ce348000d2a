#pragma once

#include <map>
#include <shared_mutex>
#include <unordered_map>

#include "parrot/store.hpp"

namespace parrot {

// Process-local repository. Lookups during ingestion run under a shared
// lock and the commit under an exclusive one, so two workers can both miss
// a sentence and insert it twice; dedup_pass merges such rows.
class MemoryRepository final : public Repository {
 public:
  std::pair<DocumentId, IngestStats> commit_document(const PreparedDocument& doc) override;
  std::optional<Sentence> find_sentence(std::string_view text,
                                        std::string_view languageTag) const override;
  std::uint64_t dedup_pass(const std::optional<std::string>& languageTag) override;

  Page<DocumentSummary> list_documents(const DocumentFilter& filter,
                                       const PageRequest& req) const override;
  DocumentDetail get_document(DocumentId id) const override;
  Page<SentenceHit> list_sentences(const SentenceFilter& filter,
                                   const PageRequest& req) const override;
  SentenceDetail get_sentence(SentenceId id) const override;
  std::uint64_t occurrence_count(SentenceId id) const override;

  SentenceTranslation add_translation(SentenceId sentence, const std::string& targetLanguage,
                                      const std::string& text,
                                      const std::string& contributor) override;
  SentenceTranslation vote_translation(TranslationId id, std::int64_t delta) override;
  std::vector<SentenceTranslation> translations(
      SentenceId sentence, const std::optional<std::string>& targetLanguage) const override;

  ScopeData scope_data(const Scope& scope) const override;
  bool has_source(std::string_view sourceTag) const override;
  std::vector<std::string> source_tags() const override;
  std::vector<Sentence> sentences_by_id(std::span<const SentenceId> ids) const override;
  std::vector<DocumentId> document_ids(const DocumentFilter& filter) const override;

  std::vector<std::optional<bool>> cached_validity(std::span<const SentenceId> ids,
                                                   std::string_view version) const override;
  void store_validity(std::span<const std::pair<SentenceId, bool>> results,
                      std::string_view version) override;

  AuditReport audit() const override;
  StoreCounts counts() const override;

  SentenceId insert_sentence_unchecked(const std::string& text, const std::string& languageTag,
                                       std::optional<Md5Digest> forcedHash) override;
  DocumentId insert_document_unchecked(const DocumentMeta& meta, const PlainText& content,
                                       std::span<const SentenceId> sentences) override;

 private:
  struct DocumentRow {
    Document doc;
    std::vector<SentenceId> sentences;  // by startOffset
  };
  struct SentenceRow {
    Sentence sentence;
    std::vector<DocumentId> occurrences;  // one per SentenceSource row
    std::vector<TranslationId> translations;
    std::optional<bool> valid;
    std::string validVersion;
  };

  const DocumentRow& document_row(DocumentId id) const;
  const SentenceRow& sentence_row(SentenceId id) const;
  SentenceRow* sentence_row_mut(SentenceId id);
  bool alive(SentenceId id) const;
  std::optional<SentenceId> lookup_locked(std::string_view text, std::string_view lang,
                                          const Md5Digest& hash) const;
  SentenceId insert_sentence_locked(const std::string& text, const std::string& lang,
                                    const Md5Digest& hash);
  DocumentId insert_document_locked(const DocumentMeta& meta, const PlainText& content,
                                    std::uint64_t characters);
  DocumentSummary summary(const DocumentRow& row) const;

  mutable std::shared_mutex mutex_;
  std::vector<DocumentRow> documents_;  // id = index + 1
  std::map<std::pair<std::string, std::string>, DocumentId> document_names_;
  std::map<std::string, std::uint64_t, std::less<>> source_counts_;
  std::vector<std::optional<SentenceRow>> sentences_;  // id = index + 1
  std::unordered_map<Md5Digest, std::vector<SentenceId>, Md5DigestHash> hash_index_;
  std::vector<std::optional<SentenceTranslation>> translations_;  // id = index + 1
  std::uint64_t live_sentences_ = 0;
  std::uint64_t source_rows_ = 0;
  Timestamp last_timestamp_ = 0;
};

}  // namespace parrot
