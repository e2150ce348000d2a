#include "parrot/memory_repository.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <unordered_set>

#include "parrot/error.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

namespace {

Error not_found(std::string_view what, std::int64_t id) {
  return Error(ErrorCode::not_found, std::string(what) + " " + std::to_string(id) + " not found");
}

template <class T>
Page<T> paginate(std::vector<T> all, const PageRequest& req) {
  Page<T> page;
  page.page = req.page;
  page.pageSize = req.pageSize;
  page.total = all.size();
  const std::uint64_t first = (req.page - 1) * req.pageSize;
  if (first < all.size()) {
    const auto last = std::min<std::uint64_t>(all.size(), first + req.pageSize);
    page.items.assign(std::make_move_iterator(all.begin() + first),
                      std::make_move_iterator(all.begin() + last));
  }
  return page;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return utf8::is_space(c); });
}

}  // namespace

const MemoryRepository::DocumentRow& MemoryRepository::document_row(DocumentId id) const {
  if (id.value < 1 || id.value > static_cast<std::int64_t>(documents_.size())) {
    throw not_found("document", id.value);
  }
  return documents_[id.value - 1];
}

const MemoryRepository::SentenceRow& MemoryRepository::sentence_row(SentenceId id) const {
  if (id.value < 1 || id.value > static_cast<std::int64_t>(sentences_.size()) ||
      !sentences_[id.value - 1]) {
    throw not_found("sentence", id.value);
  }
  return *sentences_[id.value - 1];
}

bool MemoryRepository::alive(SentenceId id) const {
  return id.value >= 1 && id.value <= static_cast<std::int64_t>(sentences_.size()) &&
         sentences_[id.value - 1].has_value();
}

MemoryRepository::SentenceRow* MemoryRepository::sentence_row_mut(SentenceId id) {
  if (id.value < 1 || id.value > static_cast<std::int64_t>(sentences_.size())) return nullptr;
  auto& slot = sentences_[id.value - 1];
  return slot ? &*slot : nullptr;
}

std::optional<SentenceId> MemoryRepository::lookup_locked(std::string_view text,
                                                          std::string_view lang,
                                                          const Md5Digest& hash) const {
  auto it = hash_index_.find(hash);
  if (it == hash_index_.end()) return std::nullopt;
  for (SentenceId id : it->second) {
    const auto& row = *sentences_[id.value - 1];
    if (row.sentence.languageTag == lang && row.sentence.plainText == text) return id;
  }
  return std::nullopt;
}

SentenceId MemoryRepository::insert_sentence_locked(const std::string& text, const std::string& lang,
                                                    const Md5Digest& hash) {
  const SentenceId id{static_cast<std::int64_t>(sentences_.size()) + 1};
  SentenceRow row;
  row.sentence = Sentence{id, text, hash, lang};
  sentences_.emplace_back(std::move(row));
  hash_index_[hash].push_back(id);
  ++live_sentences_;
  return id;
}

DocumentId MemoryRepository::insert_document_locked(const DocumentMeta& meta,
                                                    const PlainText& content,
                                                    std::uint64_t characters) {
  const DocumentId id{static_cast<std::int64_t>(documents_.size()) + 1};
  DocumentRow row;
  row.doc.id = id;
  row.doc.sourceTag = meta.sourceTag;
  row.doc.name = meta.name;
  row.doc.mimeType = meta.mimeType;
  row.doc.content = content;
  row.doc.textCharacterCount = characters;
  row.doc.byteCount = content.text.size();
  last_timestamp_ = std::max(now_micros(), last_timestamp_ + 1);
  row.doc.createdAt = last_timestamp_;
  documents_.push_back(std::move(row));
  document_names_.emplace(std::pair{meta.sourceTag, meta.name}, id);
  ++source_counts_[meta.sourceTag];
  return id;
}

std::pair<DocumentId, IngestStats> MemoryRepository::commit_document(const PreparedDocument& doc) {
  const auto& meta = doc.meta;
  auto already = [&] {
    return Error(ErrorCode::already_ingested,
                 "document '" + meta.name + "' already ingested for source '" + meta.sourceTag + "'",
                 {{"sourceTag", meta.sourceTag}, {"name", meta.name}});
  };

  // Phase 1: lookups under a shared lock. A sentence inserted by another
  // worker after this point is missed; dedup_pass repairs that.
  std::vector<std::optional<SentenceId>> found(doc.sentences.size());
  {
    std::shared_lock lock(mutex_);
    if (document_names_.contains({meta.sourceTag, meta.name})) throw already();
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      const auto& s = doc.sentences[i];
      if (seen.insert(s.text).second) found[i] = lookup_locked(s.text, meta.languageTag, s.hash);
    }
  }

  // Phase 2: one exclusive section makes the whole document visible at once.
  std::unique_lock lock(mutex_);
  if (document_names_.contains({meta.sourceTag, meta.name})) throw already();
  const DocumentId id = insert_document_locked(meta, doc.content, doc.characters);
  auto& row = documents_.back();
  row.sentences.reserve(doc.sentences.size());

  IngestStats stats;
  std::unordered_map<std::string_view, SentenceId> local;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto& s = doc.sentences[i];
    SentenceId sid;
    if (auto it = local.find(s.text); it != local.end()) {
      sid = it->second;
      ++stats.reusedDistinct;
    } else {
      auto hit = found[i];
      if (hit && !sentence_row_mut(*hit)) hit = lookup_locked(s.text, meta.languageTag, s.hash);
      if (hit) {
        sid = *hit;
        ++stats.reusedDistinct;
      } else {
        sid = insert_sentence_locked(s.text, meta.languageTag, s.hash);
        ++stats.newDistinct;
      }
      local.emplace(s.text, sid);
    }
    row.sentences.push_back(sid);
    sentence_row_mut(sid)->occurrences.push_back(id);
    ++stats.sentences;
  }
  source_rows_ += stats.sentences;
  return {id, stats};
}

std::optional<Sentence> MemoryRepository::find_sentence(std::string_view text,
                                                        std::string_view languageTag) const {
  const auto hash = md5(text);
  std::shared_lock lock(mutex_);
  auto id = lookup_locked(text, languageTag, hash);
  if (!id) return std::nullopt;
  return sentences_[id->value - 1]->sentence;
}

std::uint64_t MemoryRepository::dedup_pass(const std::optional<std::string>& languageTag) {
  std::unique_lock lock(mutex_);
  std::uint64_t merged = 0;
  for (auto& [hash, ids] : hash_index_) {
    if (ids.size() < 2) continue;
    std::sort(ids.begin(), ids.end());
    std::vector<SentenceId> keep;
    for (SentenceId id : ids) {
      auto& row = *sentences_[id.value - 1];
      if (languageTag && row.sentence.languageTag != *languageTag) {
        keep.push_back(id);
        continue;
      }
      auto survivor_it = std::find_if(keep.begin(), keep.end(), [&](SentenceId k) {
        const auto& s = sentences_[k.value - 1]->sentence;
        return s.languageTag == row.sentence.languageTag && s.plainText == row.sentence.plainText;
      });
      if (survivor_it == keep.end()) {
        keep.push_back(id);
        continue;
      }
      auto& survivor = *sentences_[survivor_it->value - 1];

      for (DocumentId doc : row.occurrences) {
        for (auto& sid : documents_[doc.value - 1].sentences) {
          if (sid == id) sid = *survivor_it;
        }
      }
      survivor.occurrences.insert(survivor.occurrences.end(), row.occurrences.begin(),
                                  row.occurrences.end());
      std::sort(survivor.occurrences.begin(), survivor.occurrences.end());

      for (TranslationId tid : row.translations) {
        auto& t = translations_[tid.value - 1];
        const bool duplicate = std::any_of(
            survivor.translations.begin(), survivor.translations.end(), [&](TranslationId o) {
              const auto& other = *translations_[o.value - 1];
              return other.targetLanguage == t->targetLanguage &&
                     other.translatedText == t->translatedText;
            });
        if (duplicate) {
          t.reset();
        } else {
          t->sentenceId = *survivor_it;
          survivor.translations.push_back(tid);
        }
      }
      sentences_[id.value - 1].reset();
      --live_sentences_;
      ++merged;
    }
    ids = std::move(keep);
  }
  return merged;
}

DocumentSummary MemoryRepository::summary(const DocumentRow& row) const {
  const auto& d = row.doc;
  return DocumentSummary{d.id,        d.sourceTag,           d.name,
                         d.mimeType,  d.textCharacterCount,  d.byteCount,
                         row.sentences.size(), d.createdAt};
}

Page<DocumentSummary> MemoryRepository::list_documents(const DocumentFilter& filter,
                                                       const PageRequest& req) const {
  check_page_request(req);
  std::shared_lock lock(mutex_);
  std::vector<DocumentSummary> all;
  for (const auto& row : documents_) {
    if (filter.sourceTag && row.doc.sourceTag != *filter.sourceTag) continue;
    if (filter.nameSubstring && row.doc.name.find(*filter.nameSubstring) == std::string::npos) continue;
    all.push_back(summary(row));
  }
  return paginate(std::move(all), req);
}

DocumentDetail MemoryRepository::get_document(DocumentId id) const {
  std::shared_lock lock(mutex_);
  const auto& row = document_row(id);
  DocumentDetail detail;
  detail.document = row.doc;
  detail.sentences.reserve(row.sentences.size());
  for (std::size_t i = 0; i < row.sentences.size(); ++i) {
    const auto& srow = sentence_row(row.sentences[i]);
    DocumentDetail::Entry entry;
    entry.startOffset = i;
    entry.sentence = srow.sentence;
    entry.occurrenceCount = srow.occurrences.size();
    std::set<DocumentId> others;
    for (DocumentId d : srow.occurrences) {
      if (d != id) others.insert(d);
      if (others.size() >= kDocumentSampleSize) break;
    }
    for (DocumentId d : others) entry.otherDocuments.push_back(summary(documents_[d.value - 1]));
    detail.sentences.push_back(std::move(entry));
  }
  return detail;
}

Page<SentenceHit> MemoryRepository::list_sentences(const SentenceFilter& filter,
                                                   const PageRequest& req) const {
  check_page_request(req);
  std::shared_lock lock(mutex_);
  std::vector<SentenceHit> all;
  for (const auto& slot : sentences_) {
    if (!slot) continue;
    const auto& s = slot->sentence;
    if (filter.languageTag && s.languageTag != *filter.languageTag) continue;
    if (filter.minOccurrences && slot->occurrences.size() < *filter.minOccurrences) continue;
    if (filter.textSubstring && s.plainText.find(*filter.textSubstring) == std::string::npos) continue;
    all.push_back({s, slot->occurrences.size()});
  }
  return paginate(std::move(all), req);
}

SentenceDetail MemoryRepository::get_sentence(SentenceId id) const {
  std::shared_lock lock(mutex_);
  const auto& row = sentence_row(id);
  SentenceDetail detail;
  detail.sentence = row.sentence;
  detail.occurrenceCount = row.occurrences.size();
  std::set<DocumentId> docs(row.occurrences.begin(), row.occurrences.end());
  for (DocumentId d : docs) detail.documents.push_back(summary(documents_[d.value - 1]));
  for (TranslationId t : row.translations) detail.translations.push_back(*translations_[t.value - 1]);
  rank_translations(detail.translations);
  return detail;
}

std::uint64_t MemoryRepository::occurrence_count(SentenceId id) const {
  std::shared_lock lock(mutex_);
  return sentence_row(id).occurrences.size();
}

SentenceTranslation MemoryRepository::add_translation(SentenceId sentence,
                                                      const std::string& targetLanguage,
                                                      const std::string& text,
                                                      const std::string& contributor) {
  if (blank(text)) throw Error(ErrorCode::validation_failed, "translation text must not be empty");
  if (blank(targetLanguage)) throw Error(ErrorCode::validation_failed, "target language required");
  std::unique_lock lock(mutex_);
  sentence_row(sentence);
  auto* row = sentence_row_mut(sentence);
  for (TranslationId tid : row->translations) {
    auto& t = *translations_[tid.value - 1];
    if (t.targetLanguage == targetLanguage && t.translatedText == text) {
      ++t.votes;
      return t;
    }
  }
  SentenceTranslation t;
  t.id = TranslationId{static_cast<std::int64_t>(translations_.size()) + 1};
  t.sentenceId = sentence;
  t.targetLanguage = targetLanguage;
  t.translatedText = text;
  t.contributor = contributor;
  last_timestamp_ = std::max(now_micros(), last_timestamp_ + 1);
  t.createdAt = last_timestamp_;
  translations_.push_back(t);
  row->translations.push_back(t.id);
  return t;
}

SentenceTranslation MemoryRepository::vote_translation(TranslationId id, std::int64_t delta) {
  std::unique_lock lock(mutex_);
  if (id.value < 1 || id.value > static_cast<std::int64_t>(translations_.size()) ||
      !translations_[id.value - 1]) {
    throw not_found("translation", id.value);
  }
  auto& t = *translations_[id.value - 1];
  if (t.votes + delta < 0) throw Error(ErrorCode::validation_failed, "votes cannot become negative");
  t.votes += delta;
  return t;
}

std::vector<SentenceTranslation> MemoryRepository::translations(
    SentenceId sentence, const std::optional<std::string>& targetLanguage) const {
  std::shared_lock lock(mutex_);
  std::vector<SentenceTranslation> out;
  for (TranslationId tid : sentence_row(sentence).translations) {
    const auto& t = *translations_[tid.value - 1];
    if (!targetLanguage || t.targetLanguage == *targetLanguage) out.push_back(t);
  }
  rank_translations(out);
  return out;
}

ScopeData MemoryRepository::scope_data(const Scope& scope) const {
  std::shared_lock lock(mutex_);
  ScopeData data;
  auto add = [&](const DocumentRow& row) {
    ++data.documents;
    data.characters += row.doc.textCharacterCount;
    data.bytes += row.doc.byteCount;
    data.occurrences.insert(data.occurrences.end(), row.sentences.begin(), row.sentences.end());
  };
  if (std::holds_alternative<AllDocuments>(scope)) {
    for (const auto& row : documents_) add(row);
  } else if (const auto* src = std::get_if<SourceScope>(&scope)) {
    if (!source_counts_.contains(src->sourceTag)) {
      throw Error(ErrorCode::not_found, "unknown source '" + src->sourceTag + "'");
    }
    for (const auto& row : documents_) {
      if (row.doc.sourceTag == src->sourceTag) add(row);
    }
  } else {
    std::set<DocumentId> ids(std::get<DocumentSet>(scope).ids.begin(),
                             std::get<DocumentSet>(scope).ids.end());
    for (DocumentId id : ids) add(document_row(id));
  }
  return data;
}

bool MemoryRepository::has_source(std::string_view sourceTag) const {
  std::shared_lock lock(mutex_);
  return source_counts_.find(sourceTag) != source_counts_.end();
}

std::vector<std::string> MemoryRepository::source_tags() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [tag, n] : source_counts_) out.push_back(tag);
  return out;
}

std::vector<Sentence> MemoryRepository::sentences_by_id(std::span<const SentenceId> ids) const {
  std::shared_lock lock(mutex_);
  std::vector<Sentence> out;
  out.reserve(ids.size());
  for (SentenceId id : ids) out.push_back(sentence_row(id).sentence);
  return out;
}

std::vector<DocumentId> MemoryRepository::document_ids(const DocumentFilter& filter) const {
  std::shared_lock lock(mutex_);
  std::vector<DocumentId> out;
  for (const auto& row : documents_) {
    if (filter.sourceTag && row.doc.sourceTag != *filter.sourceTag) continue;
    if (filter.nameSubstring && row.doc.name.find(*filter.nameSubstring) == std::string::npos) continue;
    out.push_back(row.doc.id);
  }
  return out;
}

std::vector<std::optional<bool>> MemoryRepository::cached_validity(std::span<const SentenceId> ids,
                                                                   std::string_view version) const {
  std::shared_lock lock(mutex_);
  std::vector<std::optional<bool>> out;
  out.reserve(ids.size());
  for (SentenceId id : ids) {
    const auto& row = sentence_row(id);
    out.push_back(row.validVersion == version ? row.valid : std::nullopt);
  }
  return out;
}

void MemoryRepository::store_validity(std::span<const std::pair<SentenceId, bool>> results,
                                      std::string_view version) {
  std::unique_lock lock(mutex_);
  for (const auto& [id, valid] : results) {
    if (auto* row = sentence_row_mut(id)) {
      row->valid = valid;
      row->validVersion = std::string(version);
    }
  }
}

AuditReport MemoryRepository::audit() const {
  std::shared_lock lock(mutex_);
  AuditReport report;
  report.documents = documents_.size();
  report.sentences = live_sentences_;
  report.sources = source_rows_;

  std::uint64_t per_document_total = 0;
  for (const auto& row : documents_) {
    per_document_total += row.sentences.size();
    const auto subject = "document:" + std::to_string(row.doc.id.value);
    if (utf8::length(row.doc.content.text) != row.doc.textCharacterCount) {
      report.findings.push_back({"character_count", subject, "stored count differs from content"});
    }
    for (std::size_t i = 0; i < row.sentences.size(); ++i) {
      if (!alive(row.sentences[i])) {
        report.findings.push_back({"referential_integrity", subject,
                                   "offset " + std::to_string(i) + " references missing sentence " +
                                       std::to_string(row.sentences[i].value)});
      }
    }
  }
  std::uint64_t back_refs = 0;
  for (const auto& slot : sentences_) {
    if (!slot) continue;
    audit_hash_integrity(slot->sentence, report);
    back_refs += slot->occurrences.size();
    for (TranslationId t : slot->translations) {
      const auto& tr = translations_[t.value - 1];
      if (!tr || tr->sentenceId != slot->sentence.id) {
        report.findings.push_back({"referential_integrity",
                                   "translation:" + std::to_string(t.value),
                                   "does not resolve to its sentence"});
      }
    }
  }
  for (const auto& t : translations_) report.translations += t.has_value();
  if (per_document_total != source_rows_ || back_refs != source_rows_) {
    report.findings.push_back({"conservation", "store",
                               "per-document sentences " + std::to_string(per_document_total) +
                                   ", occurrence back-references " + std::to_string(back_refs) +
                                   ", source rows " + std::to_string(source_rows_)});
  }
  for (const auto& [hash, ids] : hash_index_) {
    std::set<std::pair<std::string_view, std::string_view>> groups;
    for (SentenceId id : ids) {
      const auto& s = sentences_[id.value - 1]->sentence;
      if (!groups.emplace(s.languageTag, s.plainText).second) ++report.duplicateGroups;
    }
  }
  return report;
}

StoreCounts MemoryRepository::counts() const {
  std::shared_lock lock(mutex_);
  StoreCounts c;
  c.documents = documents_.size();
  c.sentences = live_sentences_;
  c.sources = source_rows_;
  for (const auto& t : translations_) c.translations += t.has_value();
  return c;
}

SentenceId MemoryRepository::insert_sentence_unchecked(const std::string& text,
                                                       const std::string& languageTag,
                                                       std::optional<Md5Digest> forcedHash) {
  std::unique_lock lock(mutex_);
  return insert_sentence_locked(text, languageTag, forcedHash ? *forcedHash : md5(text));
}

DocumentId MemoryRepository::insert_document_unchecked(const DocumentMeta& meta,
                                                       const PlainText& content,
                                                       std::span<const SentenceId> sentences) {
  std::unique_lock lock(mutex_);
  if (document_names_.contains({meta.sourceTag, meta.name})) {
    throw Error(ErrorCode::already_ingested, "document already ingested");
  }
  for (SentenceId s : sentences) sentence_row(s);
  const DocumentId id = insert_document_locked(meta, content, utf8::length(content.text));
  auto& row = documents_.back();
  for (SentenceId s : sentences) {
    row.sentences.push_back(s);
    sentence_row_mut(s)->occurrences.push_back(id);
  }
  source_rows_ += sentences.size();
  return id;
}

}  // namespace parrot
