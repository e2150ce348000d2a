#pragma once

// JSON shapes shared by the CLI (--json) and the HTTP service.

#include "json.hpp"

#include "parrot/limits.hpp"
#include "parrot/metrics.hpp"
#include "parrot/projection.hpp"
#include "parrot/store.hpp"
#include "parrot/translation.hpp"
#include "parrot/validation.hpp"

namespace parrot {

using nlohmann::json;

template <class Tag>
void to_json(json& j, Id<Tag> id) {
  j = id.value;
}

void to_json(json& j, const IngestStats& v);
void to_json(json& j, const DocumentSummary& v);
void to_json(json& j, const Sentence& v);
void to_json(json& j, const SentenceTranslation& v);
void to_json(json& j, const SentenceHit& v);
void to_json(json& j, const DocumentDetail& v);
void to_json(json& j, const SentenceDetail& v);
void to_json(json& j, const AuditReport& v);
void to_json(json& j, const CorpusMetrics& v);
void to_json(json& j, const CommonMatrix& v);
void to_json(json& j, const CeilingResult& v);
void to_json(json& j, const WordList& v);
void to_json(json& j, const LogTrend& v);
void to_json(json& j, const TrendPoint& v);
void to_json(json& j, const Magnitude& v);
void to_json(json& j, const VolumeProjection& v);
void to_json(json& j, const CurveFit& v);
void to_json(json& j, const TranslationSegment& v);
void to_json(json& j, const TranslationResult& v);
void to_json(json& j, const ValidationReport& v);
void to_json(json& j, const CorpusValidation& v);

template <class T>
void to_json(json& j, const Page<T>& p) {
  j = json{{"items", p.items}, {"page", p.page}, {"pageSize", p.pageSize}, {"total", p.total}};
}

// {mantissa, exponent, decimalString}; mantissa is a decimal string so no
// precision is lost to floating point.
json big_number(const BigInt& value, unsigned significantDigits = 5);

json error_json(const std::string& code, const std::string& message,
                const std::map<std::string, std::string>& details = {});

}  // namespace parrot
