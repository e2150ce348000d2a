#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parrot/store.hpp"
#include "parrot/tokenizer.hpp"

namespace parrot {

struct TranslationSegment {
  enum class Status { translated, missing };

  std::string sentenceText;
  std::uint64_t startOffset = 0;
  Status status = Status::missing;
  std::optional<SentenceId> sentenceId;  // set when the sentence is stored
  std::vector<SentenceTranslation> candidates;  // best first
};

std::string_view to_string(TranslationSegment::Status status);

struct TranslationResult {
  std::vector<TranslationSegment> segments;
  std::optional<double> coveragePct;  // absent for empty input
  std::string sourceLanguage;
  std::string targetLanguage;
};

struct LanguagePair {
  std::string source;
  std::string target;

  bool operator==(const LanguagePair&) const = default;
};

std::vector<LanguagePair> default_language_pairs();
// "en:pt,pt:en"
std::vector<LanguagePair> parse_language_pairs(std::string_view spec);
std::string describe_language_pairs(const std::vector<LanguagePair>& pairs);

// Exact search-only translation over the sentence store. Segments are
// returned in input order; no paragraph reconstruction is attempted.
class Translator {
 public:
  explicit Translator(Repository& repo, std::vector<LanguagePair> pairs = default_language_pairs(),
                      SentenceTokenizer tokenizer = SentenceTokenizer{});

  TranslationResult translate_text(const PlainText& text, const std::string& sourceLanguage,
                                   const std::string& targetLanguage) const;

  SentenceTranslation add_translation(SentenceId sentence, const std::string& targetLanguage,
                                      const std::string& translatedText, const std::string& contributor);
  SentenceTranslation vote(TranslationId id, std::int64_t delta = 1);

  const std::vector<LanguagePair>& pairs() const { return pairs_; }
  void check_pair(const std::string& source, const std::string& target) const;

 private:
  Repository& repo_;
  std::vector<LanguagePair> pairs_;
  SentenceTokenizer tokenizer_;
};

}  // namespace parrot
