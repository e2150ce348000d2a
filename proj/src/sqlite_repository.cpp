#include "parrot/sqlite_repository.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <unordered_map>

#include "parrot/error.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

namespace {

constexpr const char* kSchema = R"sql(
PRAGMA journal_mode = WAL;
PRAGMA synchronous = NORMAL;
PRAGMA foreign_keys = OFF;
CREATE TABLE IF NOT EXISTS document (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  source_tag TEXT NOT NULL,
  name TEXT NOT NULL,
  mime_type TEXT NOT NULL,
  content TEXT NOT NULL,
  char_count INTEGER NOT NULL,
  byte_count INTEGER NOT NULL,
  sentence_count INTEGER NOT NULL,
  created_at INTEGER NOT NULL,
  UNIQUE (source_tag, name)
);
CREATE TABLE IF NOT EXISTS sentence (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  plain_text TEXT NOT NULL,
  md5hash BLOB NOT NULL,
  language TEXT NOT NULL,
  valid INTEGER,
  valid_version TEXT
);
CREATE INDEX IF NOT EXISTS sentence_md5 ON sentence (md5hash, language);
CREATE TABLE IF NOT EXISTS sentence_source (
  document_id INTEGER NOT NULL,
  sentence_id INTEGER NOT NULL,
  start_offset INTEGER NOT NULL,
  PRIMARY KEY (document_id, start_offset)
) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS source_sentence ON sentence_source (sentence_id, document_id);
CREATE TABLE IF NOT EXISTS sentence_translation (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  sentence_id INTEGER NOT NULL,
  target_language TEXT NOT NULL,
  translated_text TEXT NOT NULL,
  contributor TEXT NOT NULL,
  votes INTEGER NOT NULL DEFAULT 0,
  created_at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS translation_sentence ON sentence_translation (sentence_id, target_language);
)sql";

[[noreturn]] void fail(sqlite3* db, std::string_view what) {
  throw Error(ErrorCode::internal, std::string(what) + ": " + sqlite3_errmsg(db));
}

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail(db, "prepare");
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
    next_ = 1;
    return *this;
  }
  Statement& bind(std::int64_t v) {
    sqlite3_bind_int64(stmt_, next_++, v);
    return *this;
  }
  Statement& bind(std::string_view v) {
    sqlite3_bind_text(stmt_, next_++, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(const std::string& v) { return bind(std::string_view(v)); }
  Statement& bind(const char* v) { return bind(std::string_view(v)); }
  Statement& bind(const Md5Digest& d) {
    sqlite3_bind_blob(stmt_, next_++, d.bytes.data(), 16, SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(const std::optional<std::string>& v) {
    if (v) return bind(std::string_view(*v));
    sqlite3_bind_null(stmt_, next_++);
    return *this;
  }
  Statement& bind(const std::optional<std::uint64_t>& v) {
    if (v) return bind(static_cast<std::int64_t>(*v));
    sqlite3_bind_null(stmt_, next_++);
    return *this;
  }

  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail(db_, "step");
  }
  void run() {
    while (step()) {
    }
  }

  std::int64_t i64(int col) const { return sqlite3_column_int64(stmt_, col); }
  bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
  std::string text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, sqlite3_column_bytes(stmt_, col)) : std::string();
  }
  Md5Digest digest(int col) const {
    Md5Digest d;
    if (sqlite3_column_bytes(stmt_, col) == 16) {
      std::memcpy(d.bytes.data(), sqlite3_column_blob(stmt_, col), 16);
    }
    return d;
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
  int next_ = 1;
};

Error not_found(std::string_view what, std::int64_t id) {
  return Error(ErrorCode::not_found, std::string(what) + " " + std::to_string(id) + " not found");
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return utf8::is_space(c); });
}

constexpr const char* kSummaryColumns =
    "id, source_tag, name, mime_type, char_count, byte_count, sentence_count, created_at";

DocumentSummary read_summary(const Statement& st, int c = 0) {
  DocumentSummary s;
  s.id = DocumentId{st.i64(c)};
  s.sourceTag = st.text(c + 1);
  s.name = st.text(c + 2);
  s.mimeType = st.text(c + 3);
  s.textCharacterCount = st.i64(c + 4);
  s.byteCount = st.i64(c + 5);
  s.sentenceCount = st.i64(c + 6);
  s.createdAt = st.i64(c + 7);
  return s;
}

Sentence read_sentence(const Statement& st, int c = 0) {
  return Sentence{SentenceId{st.i64(c)}, st.text(c + 1), st.digest(c + 2), st.text(c + 3)};
}

SentenceTranslation read_translation(const Statement& st) {
  SentenceTranslation t;
  t.id = TranslationId{st.i64(0)};
  t.sentenceId = SentenceId{st.i64(1)};
  t.targetLanguage = st.text(2);
  t.translatedText = st.text(3);
  t.contributor = st.text(4);
  t.votes = st.i64(5);
  t.createdAt = st.i64(6);
  return t;
}

}  // namespace

struct SqliteRepository::Impl {
  sqlite3* db = nullptr;
  std::unordered_map<const char*, std::unique_ptr<Statement>> cache;
  Timestamp last_timestamp = 0;

  ~Impl() {
    cache.clear();
    if (db) sqlite3_close(db);
  }

  Statement& sql(const char* text) {
    auto& slot = cache[text];
    if (!slot) slot = std::make_unique<Statement>(db, text);
    return slot->reset();
  }

  void exec(const char* text) {
    char* err = nullptr;
    if (sqlite3_exec(db, text, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      throw Error(ErrorCode::internal, "sqlite: " + msg);
    }
  }

  Timestamp next_timestamp() {
    last_timestamp = std::max(now_micros(), last_timestamp + 1);
    return last_timestamp;
  }

  std::optional<SentenceId> lookup(std::string_view text, std::string_view lang,
                                   const Md5Digest& hash) {
    auto& st = sql("SELECT id, plain_text FROM sentence WHERE md5hash = ? AND language = ? ORDER BY id");
    st.bind(hash).bind(lang);
    while (st.step()) {
      if (st.text(1) == text) return SentenceId{st.i64(0)};
    }
    return std::nullopt;
  }

  SentenceId insert_sentence(std::string_view text, std::string_view lang, const Md5Digest& hash) {
    sql("INSERT INTO sentence (plain_text, md5hash, language) VALUES (?, ?, ?)")
        .bind(text).bind(hash).bind(lang).run();
    return SentenceId{sqlite3_last_insert_rowid(db)};
  }

  bool document_exists(std::string_view source, std::string_view name) {
    auto& st = sql("SELECT 1 FROM document WHERE source_tag = ? AND name = ?");
    st.bind(source).bind(name);
    return st.step();
  }

  DocumentId insert_document(const DocumentMeta& meta, const PlainText& content,
                             std::uint64_t characters, std::uint64_t sentences) {
    sql("INSERT INTO document (source_tag, name, mime_type, content, char_count, byte_count, "
        "sentence_count, created_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(meta.sourceTag).bind(meta.name).bind(meta.mimeType).bind(content.text)
        .bind(static_cast<std::int64_t>(characters))
        .bind(static_cast<std::int64_t>(content.text.size()))
        .bind(static_cast<std::int64_t>(sentences)).bind(next_timestamp()).run();
    return DocumentId{sqlite3_last_insert_rowid(db)};
  }

  void insert_source(DocumentId doc, SentenceId sentence, std::uint64_t offset) {
    sql("INSERT INTO sentence_source (document_id, sentence_id, start_offset) VALUES (?, ?, ?)")
        .bind(doc.value).bind(sentence.value).bind(static_cast<std::int64_t>(offset)).run();
  }

  Sentence sentence(SentenceId id) {
    auto& st = sql("SELECT id, plain_text, md5hash, language FROM sentence WHERE id = ?");
    st.bind(id.value);
    if (!st.step()) throw not_found("sentence", id.value);
    return read_sentence(st);
  }

  std::uint64_t occurrences(SentenceId id) {
    auto& st = sql("SELECT COUNT(*) FROM sentence_source WHERE sentence_id = ?");
    st.bind(id.value);
    st.step();
    return st.i64(0);
  }

  DocumentSummary summary(DocumentId id) {
    auto& st = sql("SELECT id, source_tag, name, mime_type, char_count, byte_count, sentence_count, "
                   "created_at FROM document WHERE id = ?");
    st.bind(id.value);
    if (!st.step()) throw not_found("document", id.value);
    return read_summary(st);
  }

  std::vector<SentenceTranslation> translations(SentenceId id, const std::optional<std::string>& lang) {
    auto& st = sql("SELECT id, sentence_id, target_language, translated_text, contributor, votes, "
                   "created_at FROM sentence_translation WHERE sentence_id = ?1 AND "
                   "(?2 IS NULL OR target_language = ?2)");
    st.bind(id.value).bind(lang);
    std::vector<SentenceTranslation> out;
    while (st.step()) out.push_back(read_translation(st));
    rank_translations(out);
    return out;
  }

  std::optional<SentenceTranslation> translation(TranslationId id) {
    auto& st = sql("SELECT id, sentence_id, target_language, translated_text, contributor, votes, "
                   "created_at FROM sentence_translation WHERE id = ?");
    st.bind(id.value);
    if (!st.step()) return std::nullopt;
    return read_translation(st);
  }

  // Rolls back unless committed.
  class Transaction {
   public:
    explicit Transaction(Impl& impl) : impl_(impl) { impl_.exec("BEGIN IMMEDIATE"); }
    ~Transaction() {
      if (!done_) sqlite3_exec(impl_.db, "ROLLBACK", nullptr, nullptr, nullptr);
    }
    void commit() {
      impl_.exec("COMMIT");
      done_ = true;
    }

   private:
    Impl& impl_;
    bool done_ = false;
  };
};

SqliteRepository::SqliteRepository(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
  if (sqlite3_open_v2(path.string().c_str(), &impl_->db,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                      nullptr) != SQLITE_OK) {
    const std::string msg = impl_->db ? sqlite3_errmsg(impl_->db) : "open failed";
    throw Error(ErrorCode::internal, "cannot open store '" + path.string() + "': " + msg);
  }
  sqlite3_busy_timeout(impl_->db, 10'000);
  impl_->exec(kSchema);
  auto& st = impl_->sql(
      "SELECT MAX(t) FROM (SELECT MAX(created_at) AS t FROM document UNION ALL "
      "SELECT MAX(created_at) FROM sentence_translation)");
  if (st.step() && !st.is_null(0)) impl_->last_timestamp = st.i64(0);
}

SqliteRepository::~SqliteRepository() = default;

std::pair<DocumentId, IngestStats> SqliteRepository::commit_document(const PreparedDocument& doc) {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  Impl::Transaction txn(impl);
  if (impl.document_exists(doc.meta.sourceTag, doc.meta.name)) {
    throw Error(ErrorCode::already_ingested,
                "document '" + doc.meta.name + "' already ingested for source '" +
                    doc.meta.sourceTag + "'",
                {{"sourceTag", doc.meta.sourceTag}, {"name", doc.meta.name}});
  }
  const DocumentId id =
      impl.insert_document(doc.meta, doc.content, doc.characters, doc.sentences.size());
  IngestStats stats;
  std::unordered_map<std::string_view, SentenceId> local;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto& s = doc.sentences[i];
    SentenceId sid;
    if (auto it = local.find(s.text); it != local.end()) {
      sid = it->second;
      ++stats.reusedDistinct;
    } else if (auto hit = impl.lookup(s.text, doc.meta.languageTag, s.hash)) {
      sid = *hit;
      ++stats.reusedDistinct;
      local.emplace(s.text, sid);
    } else {
      sid = impl.insert_sentence(s.text, doc.meta.languageTag, s.hash);
      ++stats.newDistinct;
      local.emplace(s.text, sid);
    }
    impl.insert_source(id, sid, i);
    ++stats.sentences;
  }
  txn.commit();
  return {id, stats};
}

std::optional<Sentence> SqliteRepository::find_sentence(std::string_view text,
                                                        std::string_view languageTag) const {
  const auto hash = md5(text);
  std::lock_guard lock(mutex_);
  auto id = impl_->lookup(text, languageTag, hash);
  if (!id) return std::nullopt;
  return impl_->sentence(*id);
}

std::uint64_t SqliteRepository::dedup_pass(const std::optional<std::string>& languageTag) {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  Impl::Transaction txn(impl);

  std::vector<std::pair<Md5Digest, std::string>> groups;
  {
    auto& st = impl.sql(
        "SELECT md5hash, language FROM sentence WHERE (?1 IS NULL OR language = ?1) "
        "GROUP BY md5hash, language HAVING COUNT(*) > 1");
    st.bind(languageTag);
    while (st.step()) groups.emplace_back(st.digest(0), st.text(1));
  }

  std::uint64_t merged = 0;
  for (const auto& [hash, lang] : groups) {
    std::vector<std::pair<std::int64_t, std::string>> rows;
    {
      auto& st = impl.sql("SELECT id, plain_text FROM sentence WHERE md5hash = ? AND language = ? ORDER BY id");
      st.bind(hash).bind(lang);
      while (st.step()) rows.emplace_back(st.i64(0), st.text(1));
    }
    std::map<std::string_view, std::int64_t> survivors;
    for (const auto& [id, text] : rows) {
      auto [it, inserted] = survivors.emplace(text, id);
      if (inserted) continue;
      const std::int64_t keep = it->second;
      impl.sql("UPDATE sentence_source SET sentence_id = ? WHERE sentence_id = ?").bind(keep).bind(id).run();
      for (const auto& t : impl.translations(SentenceId{id}, std::nullopt)) {
        auto& dup = impl.sql("SELECT 1 FROM sentence_translation WHERE sentence_id = ? AND "
                             "target_language = ? AND translated_text = ?");
        dup.bind(keep).bind(t.targetLanguage).bind(t.translatedText);
        if (dup.step()) {
          impl.sql("DELETE FROM sentence_translation WHERE id = ?").bind(t.id.value).run();
        } else {
          impl.sql("UPDATE sentence_translation SET sentence_id = ? WHERE id = ?")
              .bind(keep).bind(t.id.value).run();
        }
      }
      impl.sql("DELETE FROM sentence WHERE id = ?").bind(id).run();
      ++merged;
    }
  }
  txn.commit();
  return merged;
}

Page<DocumentSummary> SqliteRepository::list_documents(const DocumentFilter& filter,
                                                       const PageRequest& req) const {
  check_page_request(req);
  std::lock_guard lock(mutex_);
  Page<DocumentSummary> page;
  page.page = req.page;
  page.pageSize = req.pageSize;
  {
    auto& st = impl_->sql("SELECT COUNT(*) FROM document WHERE (?1 IS NULL OR source_tag = ?1) AND "
                          "(?2 IS NULL OR instr(name, ?2) > 0)");
    st.bind(filter.sourceTag).bind(filter.nameSubstring);
    st.step();
    page.total = st.i64(0);
  }
  auto& st = impl_->sql(
      "SELECT id, source_tag, name, mime_type, char_count, byte_count, sentence_count, created_at "
      "FROM document WHERE (?1 IS NULL OR source_tag = ?1) AND (?2 IS NULL OR instr(name, ?2) > 0) "
      "ORDER BY id LIMIT ?3 OFFSET ?4");
  st.bind(filter.sourceTag).bind(filter.nameSubstring)
      .bind(static_cast<std::int64_t>(req.pageSize))
      .bind(static_cast<std::int64_t>((req.page - 1) * req.pageSize));
  while (st.step()) page.items.push_back(read_summary(st));
  return page;
}

DocumentDetail SqliteRepository::get_document(DocumentId id) const {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  DocumentDetail detail;
  {
    auto& st = impl.sql("SELECT id, source_tag, name, mime_type, content, char_count, byte_count, "
                        "created_at FROM document WHERE id = ?");
    st.bind(id.value);
    if (!st.step()) throw not_found("document", id.value);
    auto& d = detail.document;
    d.id = DocumentId{st.i64(0)};
    d.sourceTag = st.text(1);
    d.name = st.text(2);
    d.mimeType = st.text(3);
    d.content = PlainText{st.text(4)};
    d.textCharacterCount = st.i64(5);
    d.byteCount = st.i64(6);
    d.createdAt = st.i64(7);
  }
  {
    auto& st = impl.sql(
        "SELECT ss.start_offset, s.id, s.plain_text, s.md5hash, s.language, "
        "(SELECT COUNT(*) FROM sentence_source x WHERE x.sentence_id = s.id) "
        "FROM sentence_source ss JOIN sentence s ON s.id = ss.sentence_id "
        "WHERE ss.document_id = ? ORDER BY ss.start_offset");
    st.bind(id.value);
    while (st.step()) {
      DocumentDetail::Entry e;
      e.startOffset = st.i64(0);
      e.sentence = read_sentence(st, 1);
      e.occurrenceCount = st.i64(5);
      detail.sentences.push_back(std::move(e));
    }
  }
  for (auto& e : detail.sentences) {
    std::vector<DocumentId> others;
    auto& st = impl.sql("SELECT DISTINCT document_id FROM sentence_source WHERE sentence_id = ? "
                        "AND document_id <> ? ORDER BY document_id LIMIT ?");
    st.bind(e.sentence.id.value).bind(id.value).bind(static_cast<std::int64_t>(kDocumentSampleSize));
    while (st.step()) others.push_back(DocumentId{st.i64(0)});
    for (DocumentId d : others) e.otherDocuments.push_back(impl.summary(d));
  }
  return detail;
}

Page<SentenceHit> SqliteRepository::list_sentences(const SentenceFilter& filter,
                                                   const PageRequest& req) const {
  check_page_request(req);
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  static constexpr const char* kFiltered =
      "SELECT s.id, s.plain_text, s.md5hash, s.language, "
      "(SELECT COUNT(*) FROM sentence_source x WHERE x.sentence_id = s.id) AS c FROM sentence s "
      "WHERE (?1 IS NULL OR instr(s.plain_text, ?1) > 0) AND (?2 IS NULL OR s.language = ?2) "
      "AND (?3 IS NULL OR c >= ?3)";
  Page<SentenceHit> page;
  page.page = req.page;
  page.pageSize = req.pageSize;
  {
    static const std::string count_sql = std::string("SELECT COUNT(*) FROM (") + kFiltered + ")";
    auto& st = impl.sql(count_sql.c_str());
    st.bind(filter.textSubstring).bind(filter.languageTag).bind(filter.minOccurrences);
    st.step();
    page.total = st.i64(0);
  }
  static const std::string page_sql = std::string(kFiltered) + " ORDER BY s.id LIMIT ?4 OFFSET ?5";
  auto& st = impl.sql(page_sql.c_str());
  st.bind(filter.textSubstring).bind(filter.languageTag).bind(filter.minOccurrences)
      .bind(static_cast<std::int64_t>(req.pageSize))
      .bind(static_cast<std::int64_t>((req.page - 1) * req.pageSize));
  while (st.step()) page.items.push_back({read_sentence(st), static_cast<std::uint64_t>(st.i64(4))});
  return page;
}

SentenceDetail SqliteRepository::get_sentence(SentenceId id) const {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  SentenceDetail detail;
  detail.sentence = impl.sentence(id);
  detail.occurrenceCount = impl.occurrences(id);
  std::vector<DocumentId> docs;
  {
    auto& st = impl.sql("SELECT DISTINCT document_id FROM sentence_source WHERE sentence_id = ? ORDER BY document_id");
    st.bind(id.value);
    while (st.step()) docs.push_back(DocumentId{st.i64(0)});
  }
  for (DocumentId d : docs) detail.documents.push_back(impl.summary(d));
  detail.translations = impl.translations(id, std::nullopt);
  return detail;
}

std::uint64_t SqliteRepository::occurrence_count(SentenceId id) const {
  std::lock_guard lock(mutex_);
  impl_->sentence(id);
  return impl_->occurrences(id);
}

SentenceTranslation SqliteRepository::add_translation(SentenceId sentence,
                                                      const std::string& targetLanguage,
                                                      const std::string& text,
                                                      const std::string& contributor) {
  if (blank(text)) throw Error(ErrorCode::validation_failed, "translation text must not be empty");
  if (blank(targetLanguage)) throw Error(ErrorCode::validation_failed, "target language required");
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  Impl::Transaction txn(impl);
  impl.sentence(sentence);
  std::optional<std::int64_t> existing;
  {
    auto& st = impl.sql("SELECT id FROM sentence_translation WHERE sentence_id = ? AND "
                        "target_language = ? AND translated_text = ?");
    st.bind(sentence.value).bind(targetLanguage).bind(text);
    if (st.step()) existing = st.i64(0);
  }
  std::int64_t id;
  if (existing) {
    id = *existing;
    impl.sql("UPDATE sentence_translation SET votes = votes + 1 WHERE id = ?").bind(id).run();
  } else {
    impl.sql("INSERT INTO sentence_translation (sentence_id, target_language, translated_text, "
             "contributor, votes, created_at) VALUES (?, ?, ?, ?, 0, ?)")
        .bind(sentence.value).bind(targetLanguage).bind(text).bind(contributor)
        .bind(impl.next_timestamp()).run();
    id = sqlite3_last_insert_rowid(impl.db);
  }
  auto out = *impl.translation(TranslationId{id});
  txn.commit();
  return out;
}

SentenceTranslation SqliteRepository::vote_translation(TranslationId id, std::int64_t delta) {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  auto t = impl.translation(id);
  if (!t) throw not_found("translation", id.value);
  if (t->votes + delta < 0) throw Error(ErrorCode::validation_failed, "votes cannot become negative");
  impl.sql("UPDATE sentence_translation SET votes = votes + ? WHERE id = ?").bind(delta).bind(id.value).run();
  t->votes += delta;
  return *t;
}

std::vector<SentenceTranslation> SqliteRepository::translations(
    SentenceId sentence, const std::optional<std::string>& targetLanguage) const {
  std::lock_guard lock(mutex_);
  impl_->sentence(sentence);
  return impl_->translations(sentence, targetLanguage);
}

ScopeData SqliteRepository::scope_data(const Scope& scope) const {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  ScopeData data;
  auto read_totals = [&](Statement& st) {
    st.step();
    data.documents += st.i64(0);
    data.characters += st.i64(1);
    data.bytes += st.i64(2);
  };
  auto read_occurrences = [&](Statement& st) {
    while (st.step()) data.occurrences.push_back(SentenceId{st.i64(0)});
  };
  if (std::holds_alternative<AllDocuments>(scope)) {
    read_totals(impl.sql("SELECT COUNT(*), IFNULL(SUM(char_count), 0), IFNULL(SUM(byte_count), 0) FROM document"));
    read_occurrences(impl.sql("SELECT sentence_id FROM sentence_source"));
  } else if (const auto* src = std::get_if<SourceScope>(&scope)) {
    auto& st = impl.sql("SELECT COUNT(*), IFNULL(SUM(char_count), 0), IFNULL(SUM(byte_count), 0) "
                        "FROM document WHERE source_tag = ?");
    st.bind(src->sourceTag);
    read_totals(st);
    if (data.documents == 0) throw Error(ErrorCode::not_found, "unknown source '" + src->sourceTag + "'");
    auto& occ = impl.sql("SELECT ss.sentence_id FROM sentence_source ss JOIN document d ON "
                         "d.id = ss.document_id WHERE d.source_tag = ?");
    occ.bind(src->sourceTag);
    read_occurrences(occ);
  } else {
    auto ids = std::get<DocumentSet>(scope).ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (DocumentId id : ids) {
      auto& st = impl.sql("SELECT COUNT(*), IFNULL(SUM(char_count), 0), IFNULL(SUM(byte_count), 0) "
                          "FROM document WHERE id = ?");
      st.bind(id.value);
      const auto before = data.documents;
      read_totals(st);
      if (data.documents == before) throw not_found("document", id.value);
      auto& occ = impl.sql("SELECT sentence_id FROM sentence_source WHERE document_id = ?");
      occ.bind(id.value);
      read_occurrences(occ);
    }
  }
  return data;
}

bool SqliteRepository::has_source(std::string_view sourceTag) const {
  std::lock_guard lock(mutex_);
  auto& st = impl_->sql("SELECT 1 FROM document WHERE source_tag = ? LIMIT 1");
  st.bind(sourceTag);
  return st.step();
}

std::vector<std::string> SqliteRepository::source_tags() const {
  std::lock_guard lock(mutex_);
  auto& st = impl_->sql("SELECT DISTINCT source_tag FROM document ORDER BY source_tag");
  std::vector<std::string> out;
  while (st.step()) out.push_back(st.text(0));
  return out;
}

std::vector<Sentence> SqliteRepository::sentences_by_id(std::span<const SentenceId> ids) const {
  std::lock_guard lock(mutex_);
  std::vector<Sentence> out;
  out.reserve(ids.size());
  for (SentenceId id : ids) out.push_back(impl_->sentence(id));
  return out;
}

std::vector<DocumentId> SqliteRepository::document_ids(const DocumentFilter& filter) const {
  std::lock_guard lock(mutex_);
  auto& st = impl_->sql("SELECT id FROM document WHERE (?1 IS NULL OR source_tag = ?1) AND "
                        "(?2 IS NULL OR instr(name, ?2) > 0) ORDER BY id");
  st.bind(filter.sourceTag).bind(filter.nameSubstring);
  std::vector<DocumentId> out;
  while (st.step()) out.push_back(DocumentId{st.i64(0)});
  return out;
}

std::vector<std::optional<bool>> SqliteRepository::cached_validity(std::span<const SentenceId> ids,
                                                                   std::string_view version) const {
  std::lock_guard lock(mutex_);
  std::vector<std::optional<bool>> out;
  out.reserve(ids.size());
  for (SentenceId id : ids) {
    auto& st = impl_->sql("SELECT valid, valid_version FROM sentence WHERE id = ?");
    st.bind(id.value);
    if (!st.step()) throw not_found("sentence", id.value);
    if (!st.is_null(0) && st.text(1) == version) {
      out.push_back(st.i64(0) != 0);
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

void SqliteRepository::store_validity(std::span<const std::pair<SentenceId, bool>> results,
                                      std::string_view version) {
  std::lock_guard lock(mutex_);
  Impl::Transaction txn(*impl_);
  for (const auto& [id, valid] : results) {
    impl_->sql("UPDATE sentence SET valid = ?, valid_version = ? WHERE id = ?")
        .bind(std::int64_t{valid}).bind(version).bind(id.value).run();
  }
  txn.commit();
}

AuditReport SqliteRepository::audit() const {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  AuditReport report;
  auto scalar = [&](const char* q) {
    auto& st = impl.sql(q);
    st.step();
    return static_cast<std::uint64_t>(st.i64(0));
  };
  report.documents = scalar("SELECT COUNT(*) FROM document");
  report.sentences = scalar("SELECT COUNT(*) FROM sentence");
  report.sources = scalar("SELECT COUNT(*) FROM sentence_source");
  report.translations = scalar("SELECT COUNT(*) FROM sentence_translation");
  report.duplicateGroups = scalar(
      "SELECT IFNULL(SUM(c - 1), 0) FROM (SELECT COUNT(*) AS c FROM sentence "
      "GROUP BY md5hash, language, plain_text HAVING c > 1)");

  if (auto n = scalar("SELECT COUNT(*) FROM sentence_source ss LEFT JOIN sentence s ON "
                      "s.id = ss.sentence_id WHERE s.id IS NULL")) {
    report.findings.push_back({"referential_integrity", "sentence_source",
                               std::to_string(n) + " rows reference missing sentences"});
  }
  if (auto n = scalar("SELECT COUNT(*) FROM sentence_source ss LEFT JOIN document d ON "
                      "d.id = ss.document_id WHERE d.id IS NULL")) {
    report.findings.push_back({"referential_integrity", "sentence_source",
                               std::to_string(n) + " rows reference missing documents"});
  }
  if (auto n = scalar("SELECT COUNT(*) FROM sentence_translation t LEFT JOIN sentence s ON "
                      "s.id = t.sentence_id WHERE s.id IS NULL")) {
    report.findings.push_back({"referential_integrity", "sentence_translation",
                               std::to_string(n) + " rows reference missing sentences"});
  }
  const auto per_document = scalar("SELECT IFNULL(SUM(sentence_count), 0) FROM document");
  if (per_document != report.sources) {
    report.findings.push_back({"conservation", "store",
                               "per-document sentences " + std::to_string(per_document) +
                                   " != source rows " + std::to_string(report.sources)});
  }
  {
    auto& st = impl.sql(
        "SELECT d.id FROM document d LEFT JOIN (SELECT document_id, COUNT(*) AS c, "
        "MAX(start_offset) AS m FROM sentence_source GROUP BY document_id) x ON x.document_id = d.id "
        "WHERE IFNULL(x.c, 0) <> d.sentence_count OR (x.c IS NOT NULL AND x.m + 1 <> x.c)");
    while (st.step()) {
      report.findings.push_back({"sequence_offsets", "document:" + std::to_string(st.i64(0)),
                                 "start offsets are not consecutive from 0"});
    }
  }
  {
    auto& st = impl.sql("SELECT id, content, char_count FROM document");
    while (st.step()) {
      if (utf8::length(st.text(1)) != static_cast<std::uint64_t>(st.i64(2))) {
        report.findings.push_back({"character_count", "document:" + std::to_string(st.i64(0)),
                                   "stored count differs from content"});
      }
    }
  }
  {
    auto& st = impl.sql("SELECT id, plain_text, md5hash, language FROM sentence");
    while (st.step()) audit_hash_integrity(read_sentence(st), report);
  }
  return report;
}

StoreCounts SqliteRepository::counts() const {
  std::lock_guard lock(mutex_);
  StoreCounts c;
  auto scalar = [&](const char* q) {
    auto& st = impl_->sql(q);
    st.step();
    return static_cast<std::uint64_t>(st.i64(0));
  };
  c.documents = scalar("SELECT COUNT(*) FROM document");
  c.sentences = scalar("SELECT COUNT(*) FROM sentence");
  c.sources = scalar("SELECT COUNT(*) FROM sentence_source");
  c.translations = scalar("SELECT COUNT(*) FROM sentence_translation");
  return c;
}

SentenceId SqliteRepository::insert_sentence_unchecked(const std::string& text,
                                                       const std::string& languageTag,
                                                       std::optional<Md5Digest> forcedHash) {
  std::lock_guard lock(mutex_);
  return impl_->insert_sentence(text, languageTag, forcedHash ? *forcedHash : md5(text));
}

DocumentId SqliteRepository::insert_document_unchecked(const DocumentMeta& meta,
                                                       const PlainText& content,
                                                       std::span<const SentenceId> sentences) {
  std::lock_guard lock(mutex_);
  auto& impl = *impl_;
  Impl::Transaction txn(impl);
  if (impl.document_exists(meta.sourceTag, meta.name)) {
    throw Error(ErrorCode::already_ingested, "document already ingested");
  }
  for (SentenceId s : sentences) impl.sentence(s);
  const DocumentId id = impl.insert_document(meta, content, utf8::length(content.text), sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) impl.insert_source(id, sentences[i], i);
  txn.commit();
  return id;
}

}  // namespace parrot
