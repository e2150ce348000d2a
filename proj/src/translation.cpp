#include "parrot/translation.hpp"

#include <algorithm>

#include "parrot/error.hpp"

namespace parrot {

std::string_view to_string(TranslationSegment::Status status) {
  return status == TranslationSegment::Status::translated ? "translated" : "missing";
}

std::vector<LanguagePair> default_language_pairs() { return {{"en", "pt"}, {"pt", "en"}}; }

std::vector<LanguagePair> parse_language_pairs(std::string_view spec) {
  std::vector<LanguagePair> pairs;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const auto item = spec.substr(start, end - start);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size()) {
      throw Error(ErrorCode::validation_failed, "language pair must look like src:dst",
                  {{"pair", std::string(item)}});
    }
    pairs.push_back({std::string(item.substr(0, colon)), std::string(item.substr(colon + 1))});
    start = end + 1;
  }
  return pairs;
}

std::string describe_language_pairs(const std::vector<LanguagePair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    if (!out.empty()) out += ',';
    out += p.source + ":" + p.target;
  }
  return out;
}

Translator::Translator(Repository& repo, std::vector<LanguagePair> pairs, SentenceTokenizer tokenizer)
    : repo_(repo), pairs_(std::move(pairs)), tokenizer_(std::move(tokenizer)) {}

void Translator::check_pair(const std::string& source, const std::string& target) const {
  if (std::find(pairs_.begin(), pairs_.end(), LanguagePair{source, target}) == pairs_.end()) {
    throw Error(ErrorCode::validation_failed, "unsupported language pair " + source + ":" + target,
                {{"supportedPairs", describe_language_pairs(pairs_)}});
  }
}

TranslationResult Translator::translate_text(const PlainText& text, const std::string& sourceLanguage,
                                             const std::string& targetLanguage) const {
  check_pair(sourceLanguage, targetLanguage);
  TranslationResult result;
  result.sourceLanguage = sourceLanguage;
  result.targetLanguage = targetLanguage;
  std::size_t translated = 0;
  for (auto& span : tokenizer_.split(text.text)) {
    TranslationSegment seg;
    seg.sentenceText = std::move(span.text);
    seg.startOffset = span.startOffset;
    if (auto s = repo_.find_sentence(seg.sentenceText, sourceLanguage)) {
      seg.sentenceId = s->id;
      seg.candidates = repo_.translations(s->id, targetLanguage);
      rank_translations(seg.candidates);
    }
    if (!seg.candidates.empty()) {
      seg.status = TranslationSegment::Status::translated;
      ++translated;
    }
    result.segments.push_back(std::move(seg));
  }
  if (!result.segments.empty()) {
    result.coveragePct = 100.0 * static_cast<double>(translated) / static_cast<double>(result.segments.size());
  }
  return result;
}

SentenceTranslation Translator::add_translation(SentenceId sentence, const std::string& targetLanguage,
                                                const std::string& translatedText,
                                                const std::string& contributor) {
  return repo_.add_translation(sentence, targetLanguage, translatedText, contributor);
}

SentenceTranslation Translator::vote(TranslationId id, std::int64_t delta) {
  if (delta != 1) throw Error(ErrorCode::validation_failed, "votes change by +1");
  return repo_.vote_translation(id, delta);
}

}  // namespace parrot
