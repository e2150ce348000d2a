#include "parrot/store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "parrot/error.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

Timestamp now_micros() {
  using namespace std::chrono;
  return duration_cast<microseconds>(system_clock::now().time_since_epoch()).count();
}

std::string format_timestamp(Timestamp ts) {
  const std::time_t secs = static_cast<std::time_t>(ts / 1'000'000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<long long>(ts % 1'000'000));
  return buf;
}

PreparedDocument prepare_document(DocumentMeta meta, PlainText content,
                                  const SentenceTokenizer& tokenizer) {
  if (!satisfies_plain_text_invariants(content.text)) {
    throw Error(ErrorCode::validation_failed, "document content is not normalized plain text",
                {{"name", meta.name}});
  }
  PreparedDocument doc;
  doc.meta = std::move(meta);
  doc.characters = utf8::length(content.text);
  auto spans = tokenizer.split(content);
  doc.sentences.reserve(spans.size());
  for (auto& s : spans) {
    auto hash = md5(s.text);
    doc.sentences.push_back({std::move(s.text), hash});
  }
  doc.content = std::move(content);
  return doc;
}

void check_page_request(const PageRequest& req) {
  if (req.page < 1) throw Error(ErrorCode::validation_failed, "page must be >= 1");
  if (req.pageSize < 1 || req.pageSize > kMaxPageSize) {
    throw Error(ErrorCode::validation_failed,
                "pageSize must be between 1 and " + std::to_string(kMaxPageSize));
  }
}

std::string describe(const Scope& scope) {
  struct {
    std::string operator()(const AllDocuments&) const { return "all"; }
    std::string operator()(const SourceScope& s) const { return "source:" + s.sourceTag; }
    std::string operator()(const DocumentSet& d) const {
      return "documents:" + std::to_string(d.ids.size());
    }
  } visitor;
  return std::visit(visitor, scope);
}

std::pair<DocumentId, IngestStats> ingest_document(Repository& repo, const DocumentMeta& meta,
                                                   const PlainText& content,
                                                   const SentenceTokenizer& tokenizer) {
  return repo.commit_document(prepare_document(meta, content, tokenizer));
}

void audit_hash_integrity(const Sentence& s, AuditReport& report) {
  if (md5(s.plainText) != s.md5hash) {
    report.findings.push_back({"hash_integrity", "sentence:" + std::to_string(s.id.value),
                               "stored md5 " + s.md5hash.hex() + " != " + compute_md5(s.plainText)});
  }
}

}  // namespace parrot

namespace parrot {

void rank_translations(std::vector<SentenceTranslation>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.createdAt != b.createdAt) return a.createdAt > b.createdAt;
    return a.id > b.id;
  });
}

}  // namespace parrot
