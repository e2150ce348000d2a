#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace parrot {

using BigInt = boost::multiprecision::cpp_int;

// "recommend a maximum limit of 25 words"; past 43 words a reader
// understands about 10% of a sentence.
inline constexpr unsigned kAdvisedSentenceWords = 25;
inline constexpr unsigned kIncomprehensibleSentenceWords = 43;

struct WordList {
  std::string name;
  std::uint64_t totalWords = 0;
  std::optional<double> coveragePct;
  std::string citation;
};

// Tab-separated: name, total words, coverage % (may be empty), citation.
std::vector<WordList> parse_word_lists(std::istream& in);
std::vector<WordList> load_word_lists(const std::filesystem::path& path);
const std::vector<WordList>& default_word_lists();

enum class Notation {
  engineering,  // exponent a multiple of 3, mantissa in [1, 1000)
  scientific,   // mantissa in [1, 10)
};

struct Rendering {
  std::string mantissa;  // decimal digits, rounded half-even
  std::int64_t exponent = 0;
  std::string text;  // "288.74×10^246"; plain digits when exponent is 0
};

Rendering render_scientific(const BigInt& value, unsigned significantDigits,
                            Notation notation = Notation::engineering);
std::string format_scientific(const BigInt& value, unsigned significantDigits,
                              Notation notation = Notation::engineering);

// Σ V^n for n = 1..N, plus V^N, the term that dominates the sum and that
// published renderings of these ceilings usually quote.
struct CeilingResult {
  std::uint64_t vocabularySize = 0;
  unsigned maxWords = 0;
  BigInt exact;
  BigInt dominantTerm;
  double mantissa = 0;  // engineering mantissa of exact
  std::int64_t exponent = 0;
  std::size_t digits = 0;  // decimal digits of exact
};

BigInt ceiling_loop_sum(std::uint64_t vocabularySize, unsigned maxWords);
BigInt ceiling_closed_form(std::uint64_t vocabularySize, unsigned maxWords);

// Throws validation_failed outside V >= 1, N >= 1 and internal if the two
// evaluation paths disagree.
CeilingResult sentence_ceiling(std::uint64_t vocabularySize, unsigned maxWords);

struct CeilingRow {
  WordList list;
  std::vector<CeilingResult> ceilings;  // one per requested length
};

std::vector<CeilingRow> ceiling_table(std::span<const WordList> lists, std::span<const unsigned> lengths);
std::string render_ceiling_table(std::span<const CeilingRow> rows, std::span<const unsigned> lengths,
                                 unsigned significantDigits = 3);

}  // namespace parrot
