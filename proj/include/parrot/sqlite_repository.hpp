#pragma once

#include <filesystem>
#include <memory>
#include <mutex>

#include "parrot/store.hpp"

namespace parrot {

// Single-file embedded store. All access goes through one connection
// guarded by a mutex, so commits are serialized; document preparation
// (extraction, tokenization, hashing) is where ingestion parallelism lives.
class SqliteRepository final : public Repository {
 public:
  // ":memory:" opens a private in-memory database.
  explicit SqliteRepository(const std::filesystem::path& path);
  ~SqliteRepository() override;

  SqliteRepository(const SqliteRepository&) = delete;
  SqliteRepository& operator=(const SqliteRepository&) = delete;

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
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable std::mutex mutex_;
};

}  // namespace parrot
