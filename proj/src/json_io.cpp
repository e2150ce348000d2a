#include "parrot/json_io.hpp"

namespace parrot {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void to_json(json& j, const IngestStats& v) {
  j = json{{"sentences", v.sentences}, {"newDistinct", v.newDistinct}, {"reusedDistinct", v.reusedDistinct}};
}

void to_json(json& j, const DocumentSummary& v) {
  j = json{{"id", v.id},
           {"sourceTag", v.sourceTag},
           {"name", v.name},
           {"mimeType", v.mimeType},
           {"textCharacterCount", v.textCharacterCount},
           {"byteCount", v.byteCount},
           {"sentenceCount", v.sentenceCount},
           {"createdAt", format_timestamp(v.createdAt)}};
}

void to_json(json& j, const Sentence& v) {
  j = json{{"id", v.id}, {"plainText", v.plainText}, {"md5hash", v.md5hash.hex()}, {"languageTag", v.languageTag}};
}

void to_json(json& j, const SentenceTranslation& v) {
  j = json{{"id", v.id},
           {"sentenceId", v.sentenceId},
           {"targetLanguage", v.targetLanguage},
           {"translatedText", v.translatedText},
           {"contributor", v.contributor},
           {"votes", v.votes},
           {"createdAt", format_timestamp(v.createdAt)}};
}

void to_json(json& j, const SentenceHit& v) {
  j = v.sentence;
  j["occurrenceCount"] = v.occurrenceCount;
}

void to_json(json& j, const DocumentDetail& v) {
  const auto& d = v.document;
  j = json{{"id", d.id},
           {"sourceTag", d.sourceTag},
           {"name", d.name},
           {"mimeType", d.mimeType},
           {"textCharacterCount", d.textCharacterCount},
           {"byteCount", d.byteCount},
           {"createdAt", format_timestamp(d.createdAt)}};
  json entries = json::array();
  for (const auto& e : v.sentences) {
    entries.push_back({{"startOffset", e.startOffset},
                       {"sentence", e.sentence},
                       {"occurrenceCount", e.occurrenceCount},
                       {"otherDocuments", e.otherDocuments}});
  }
  j["sentences"] = std::move(entries);
}

void to_json(json& j, const SentenceDetail& v) {
  j = v.sentence;
  j["occurrenceCount"] = v.occurrenceCount;
  j["documents"] = v.documents;
  j["translations"] = v.translations;
}

void to_json(json& j, const AuditReport& v) {
  json findings = json::array();
  for (const auto& f : v.findings) findings.push_back({{"check", f.check}, {"subject", f.subject}, {"detail", f.detail}});
  j = json{{"ok", v.ok()},
           {"documents", v.documents},
           {"sentences", v.sentences},
           {"sources", v.sources},
           {"translations", v.translations},
           {"duplicateGroups", v.duplicateGroups},
           {"findings", std::move(findings)}};
}

void to_json(json& j, const CorpusMetrics& v) {
  j = json{{"scope", v.scope},
           {"documents", v.documents},
           {"textCharacters", v.textCharacters},
           {"textBytes", v.textBytes},
           {"sentences", v.sentences},
           {"distinctSentences", v.distinctSentences},
           {"distinctPct", optional_number(v.distinctPct)},
           {"dSentencesWithRepetitions", v.dSentencesWithRepetitions},
           {"withRepetitionsPct", optional_number(v.withRepetitionsPct)},
           {"uniqueDSentences", v.uniqueDSentences},
           {"uniquePct", optional_number(v.uniquePct)},
           {"nonUniquePct", optional_number(v.nonUniquePct)},
           {"validOnly", v.validOnly},
           {"ruleSetVersion", v.ruleSetVersion ? json(*v.ruleSetVersion) : json(nullptr)}};
}

void to_json(json& j, const CommonMatrix& v) {
  j = json{{"sources", v.sources}, {"counts", v.counts}, {"all", v.all}};
}

json big_number(const BigInt& value, unsigned significantDigits) {
  const auto r = render_scientific(value, significantDigits);
  return json{{"mantissa", r.mantissa}, {"exponent", r.exponent}, {"decimalString", value.str()}};
}

void to_json(json& j, const CeilingResult& v) {
  j = json{{"vocabularySize", v.vocabularySize},
           {"maxWords", v.maxWords},
           {"exact", big_number(v.exact)},
           {"digits", v.digits},
           {"rendering", format_scientific(v.exact, 5)},
           {"dominantTerm", big_number(v.dominantTerm)},
           {"dominantRendering", format_scientific(v.dominantTerm, 5)}};
}

void to_json(json& j, const WordList& v) {
  j = json{{"name", v.name},
           {"totalWords", v.totalWords},
           {"coveragePct", optional_number(v.coveragePct)},
           {"citation", v.citation}};
}

void to_json(json& j, const LogTrend& v) {
  j = json{{"a", v.a}, {"b", v.b}, {"r2", v.r2}, {"pointCount", v.pointCount}, {"minX", v.minX}, {"maxX", v.maxX}};
}

void to_json(json& j, const TrendPoint& v) {
  j = json{{"textCharacters", v.textCharacters}, {"repetitionPct", v.repetitionPct}};
}

void to_json(json& j, const Magnitude& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14f", v.mantissa);
  j = json{{"mantissa", buf}, {"exponent", v.exponent}, {"decimalString", v.decimal_string()}, {"text", v.to_string()}};
}

void to_json(json& j, const VolumeProjection& v) {
  j = json{{"targetPct", v.targetPct}, {"textCharacters", v.textCharacters}, {"extrapolated", v.extrapolated}};
}

void to_json(json& j, const CurveFit& v) {
  j = json{{"family", v.family}, {"r2", v.r2}, {"coefficients", v.coefficients}};
}

void to_json(json& j, const TranslationSegment& v) {
  j = json{{"sentenceText", v.sentenceText},
           {"startOffset", v.startOffset},
           {"status", to_string(v.status)},
           {"sentenceId", v.sentenceId ? json(v.sentenceId->value) : json(nullptr)},
           {"candidates", v.candidates}};
}

void to_json(json& j, const TranslationResult& v) {
  j = json{{"segments", v.segments},
           {"coveragePct", optional_number(v.coveragePct)},
           {"sourceLanguage", v.sourceLanguage},
           {"targetLanguage", v.targetLanguage}};
}

void to_json(json& j, const ValidationReport& v) {
  j = json{{"valid", v.valid}, {"failedRuleIds", v.failedRuleIds}};
}

void to_json(json& j, const CorpusValidation& v) {
  j = json{{"distinctChecked", v.distinctChecked},
           {"distinctValid", v.distinctValid},
           {"validPct", optional_number(v.validPct)},
           {"ruleSetVersion", v.ruleSetVersion}};
}

json error_json(const std::string& code, const std::string& message,
                const std::map<std::string, std::string>& details) {
  return json{{"code", code}, {"message", message}, {"details", details}};
}

}  // namespace parrot
