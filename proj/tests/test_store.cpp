#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "parrot/error.hpp"
#include "parrot/sqlite_repository.hpp"
#include "parrot/store.hpp"
#include "synthetic.hpp"

using namespace parrot;

namespace {

const char* kKinds[] = {"memory", "sqlite"};

std::string parrots() {
  std::ifstream in(PARROT_TEST_DATA "/parrots.txt");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DocumentMeta meta(const std::string& name, const std::string& source = "ex", const std::string& lang = "en") {
  return {source, name, "text/plain", lang};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("ingest the figure example") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    const auto [id, stats] = ingest_document(*repo, meta("parrots.txt"), PlainText{parrots()});
    CHECK(stats == IngestStats{4, 3, 1});
    const auto detail = repo->get_document(id);
    CHECK(detail.document.textCharacterCount == 140);
    CHECK(detail.document.byteCount == 140);
    REQUIRE(detail.sentences.size() == 4);
    CHECK(detail.sentences[0].sentence.id == detail.sentences[3].sentence.id);
    CHECK(detail.sentences[0].occurrenceCount == 2);
    CHECK(detail.sentences[1].occurrenceCount == 1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(detail.sentences[i].startOffset == i);
    CHECK(detail.sentences[0].sentence.md5hash == md5("When parrots do it, it's parroting."));

    CHECK(code_of([&] { ingest_document(*repo, meta("parrots.txt"), PlainText{parrots()}); }) ==
          ErrorCode::already_ingested);
    CHECK(repo->counts().documents == 1);
    CHECK(repo->audit().ok());

    // a second source reuses all three sentences
    const auto second = ingest_document(*repo, meta("parrots.txt", "other"), PlainText{parrots()}).second;
    CHECK(second == IngestStats{4, 0, 4});
    CHECK(repo->counts().sentences == 3);
  }
}

TEST_CASE("lookup is exact and language scoped") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    ingest_document(*repo, meta("a"), PlainText{"Hello there. General Kenobi."});
    CHECK(repo->find_sentence("Hello there.", "en").has_value());
    CHECK_FALSE(repo->find_sentence("hello there.", "en").has_value());
    CHECK_FALSE(repo->find_sentence("Hello there.", "pt").has_value());
    const auto [id, stats] = ingest_document(*repo, meta("b", "ex", "pt"), PlainText{"Hello there."});
    CHECK(stats.newDistinct == 1);
  }
}

TEST_CASE("forced hash collisions keep texts apart") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    // b is stored under a's digest, so the bucket holds two different texts
    const auto h = md5("First text.");
    const auto b = repo->insert_sentence_unchecked("Second text.", "en", h);
    const auto a = repo->insert_sentence_unchecked("First text.", "en", h);
    CHECK(a != b);
    CHECK(repo->find_sentence("First text.", "en")->id == a);
    CHECK_FALSE(repo->find_sentence("Second text.", "en").has_value());
    CHECK(repo->dedup_pass(std::nullopt) == 0);
    const auto report = repo->audit();
    // the audit notices stored hashes that are not md5(text)
    CHECK_FALSE(report.ok());
  }
}

TEST_CASE("dedup merges duplicates, lowest id wins") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    const auto a = repo->insert_sentence_unchecked("Same.", "en", std::nullopt);
    const auto b = repo->insert_sentence_unchecked("Same.", "en", std::nullopt);
    const auto c = repo->insert_sentence_unchecked("Other.", "en", std::nullopt);
    const auto d1 = repo->insert_document_unchecked(meta("d1"), PlainText{"Same. Other."}, std::vector{b, c});
    const auto d2 = repo->insert_document_unchecked(meta("d2"), PlainText{"Same."}, std::vector{a});
    repo->add_translation(a, "pt", "Igual.", "x");
    repo->add_translation(b, "pt", "Igual.", "y");
    repo->add_translation(b, "pt", "O mesmo.", "y");
    CHECK(repo->audit().duplicateGroups == 1);
    CHECK(repo->dedup_pass(std::string("en")) == 1);
    CHECK(repo->audit().ok());
    CHECK(repo->audit().duplicateGroups == 0);
    CHECK(repo->counts().sentences == 2);
    CHECK(repo->find_sentence("Same.", "en")->id == a);
    CHECK(repo->get_document(d1).sentences[0].sentence.id == a);
    CHECK(repo->get_document(d2).sentences[0].sentence.id == a);
    CHECK(repo->occurrence_count(a) == 2);
    CHECK(repo->translations(a, "pt").size() == 2);
    CHECK(repo->dedup_pass(std::nullopt) == 0);
  }
}

TEST_CASE("dedup respects the language filter") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    repo->insert_sentence_unchecked("Sim.", "pt", std::nullopt);
    repo->insert_sentence_unchecked("Sim.", "pt", std::nullopt);
    CHECK(repo->dedup_pass(std::string("en")) == 0);
    CHECK(repo->dedup_pass(std::string("pt")) == 1);
  }
}

TEST_CASE("pagination is stable and complete") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    testing::CorpusSpec spec;
    spec.documents = 47;
    spec.poolSize = 300;
    for (const auto& d : testing::zipf_corpus(spec)) ingest_document(*repo, d.meta, d.content);
    for (std::uint64_t size : {1, 7, 20, 1000}) {
      std::set<std::int64_t> seen;
      std::uint64_t total = 0;
      for (std::uint64_t page = 1;; ++page) {
        const auto p = repo->list_documents({}, {page, size});
        total = p.total;
        if (p.items.empty()) break;
        for (const auto& d : p.items) CHECK(seen.insert(d.id.value).second);
      }
      CHECK(seen.size() == 47);
      CHECK(total == 47);
    }
    std::set<std::int64_t> sentences;
    const auto all = repo->counts().sentences;
    for (std::uint64_t page = 1;; ++page) {
      const auto p = repo->list_sentences({}, {page, 13});
      if (p.items.empty()) break;
      for (const auto& s : p.items) CHECK(sentences.insert(s.sentence.id.value).second);
    }
    CHECK(sentences.size() == all);
    CHECK(repo->list_documents({}, {999, 10}).items.empty());
    CHECK(code_of([&] { repo->list_documents({}, {0, 10}); }) == ErrorCode::validation_failed);
    CHECK(code_of([&] { repo->list_documents({}, {1, kMaxPageSize + 1}); }) == ErrorCode::validation_failed);
  }
}

TEST_CASE("search filters") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    ingest_document(*repo, meta("parrots.txt"), PlainText{parrots()});
    ingest_document(*repo, meta("other.txt", "src2"), PlainText{"Completely different."});
    SentenceFilter f;
    f.textSubstring = "parrot";
    CHECK(repo->list_sentences(f, {}).total == 1);
    f = {};
    f.minOccurrences = 2;
    const auto hits = repo->list_sentences(f, {});
    REQUIRE(hits.total == 1);
    CHECK(hits.items[0].occurrenceCount == 2);
    DocumentFilter df;
    df.sourceTag = "src2";
    CHECK(repo->list_documents(df, {}).total == 1);
    df = {};
    df.nameSubstring = "parrot";
    CHECK(repo->list_documents(df, {}).items.at(0).name == "parrots.txt");
    CHECK(repo->source_tags() == std::vector<std::string>{"ex", "src2"});
    CHECK(code_of([&] { repo->get_document(DocumentId{99}); }) == ErrorCode::not_found);
    CHECK(code_of([&] { repo->get_sentence(SentenceId{99}); }) == ErrorCode::not_found);
  }
}

TEST_CASE("translations: endorsement, votes and ranking") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    ingest_document(*repo, meta("a"), PlainText{"Hello."});
    const auto sid = repo->find_sentence("Hello.", "en")->id;
    const auto t1 = repo->add_translation(sid, "pt", "Olá.", "ana");
    CHECK(t1.votes == 0);
    const auto again = repo->add_translation(sid, "pt", "Olá.", "rui");
    CHECK(again.id == t1.id);
    CHECK(again.votes == 1);
    const auto t2 = repo->add_translation(sid, "pt", "Oi.", "rui");
    CHECK(t2.id != t1.id);
    CHECK(t2.createdAt > t1.createdAt);
    auto list = repo->translations(sid, std::string("pt"));
    rank_translations(list);
    CHECK(list.front().id == t1.id);
    repo->vote_translation(t2.id, 1);
    repo->vote_translation(t2.id, 1);
    list = repo->translations(sid, std::string("pt"));
    rank_translations(list);
    CHECK(list.front().id == t2.id);
    CHECK(code_of([&] { repo->add_translation(sid, "pt", "  ", "x"); }) == ErrorCode::validation_failed);
    CHECK(code_of([&] { repo->add_translation(SentenceId{42}, "pt", "x", "x"); }) == ErrorCode::not_found);
    CHECK(code_of([&] { repo->vote_translation(TranslationId{42}, 1); }) == ErrorCode::not_found);
    CHECK(repo->get_sentence(sid).translations.size() == 2);
  }
}

TEST_CASE("scope data") {
  for (const char* kind : kKinds) {
    CAPTURE(kind);
    auto repo = testing::make_repository(kind);
    const auto a = ingest_document(*repo, meta("a"), PlainText{"One. Two."}).first;
    ingest_document(*repo, meta("b", "s2"), PlainText{"Two. Three. Three."});
    CHECK(repo->scope_data(AllDocuments{}).occurrences.size() == 5);
    CHECK(repo->scope_data(SourceScope{"s2"}).occurrences.size() == 3);
    CHECK(repo->scope_data(DocumentSet{{a}}).characters == 9);
    CHECK(code_of([&] { repo->scope_data(SourceScope{"nope"}); }) == ErrorCode::not_found);
    CHECK(repo->scope_data(DocumentSet{{}}).documents == 0);
  }
}

TEST_CASE("sqlite store persists across reopen") {
  const auto dir = std::filesystem::temp_directory_path() / "parrot_store_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto file = dir / "store.db";
  {
    SqliteRepository repo(file);
    ingest_document(repo, meta("parrots.txt"), PlainText{parrots()});
    repo.add_translation(repo.find_sentence("When parrots do it, it's parroting.", "en")->id, "pt", "Papagaio.", "x");
  }
  {
    SqliteRepository repo(file);
    CHECK(repo.counts().documents == 1);
    CHECK(repo.counts().sentences == 3);
    CHECK(repo.counts().translations == 1);
    CHECK(repo.audit().ok());
    CHECK(ingest_document(repo, meta("more"), PlainText{parrots()}).second == IngestStats{4, 0, 4});
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("prepare_document rejects invalid plain text") {
  CHECK(code_of([] { prepare_document(meta("x"), PlainText{"bad\x01"}); }) == ErrorCode::validation_failed);
  const auto p = prepare_document(meta("x"), PlainText{"A b. C d."});
  CHECK(p.sentences.size() == 2);
  CHECK(p.characters == 9);
}
