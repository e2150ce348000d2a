#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "parrot/extraction.hpp"

namespace parrot {

struct SentenceSpan {
  std::string text;
  std::size_t startOffset = 0;  // sequence order number within the text

  bool operator==(const SentenceSpan&) const = default;
};

using SentenceList = std::vector<SentenceSpan>;

// Tokens (words carrying a trailing period) that never end a sentence.
class AbbreviationList {
 public:
  AbbreviationList() = default;

  // The list shipped in data/abbreviations.txt.
  static const AbbreviationList& defaults();
  static AbbreviationList parse(std::string_view text);
  static AbbreviationList load(const std::filesystem::path& path);

  void add(std::string_view entry);
  bool contains(std::string_view entry) const { return entries_.contains(std::string(entry)); }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_words() const { return max_words_; }

 private:
  std::unordered_set<std::string> entries_;
  std::size_t max_words_ = 1;
};

class SentenceTokenizer {
 public:
  SentenceTokenizer() : abbreviations_(&AbbreviationList::defaults()) {}
  explicit SentenceTokenizer(const AbbreviationList& abbreviations)
      : abbreviations_(&abbreviations) {}

  SentenceList split(std::string_view text) const;
  SentenceList split(const PlainText& text) const { return split(text.text); }

 private:
  void split_paragraph(std::string_view para, SentenceList& out) const;
  bool is_abbreviation(std::string_view para, std::size_t dot) const;

  const AbbreviationList* abbreviations_;
};

// Uses the default abbreviation list.
SentenceList split_sentences(const PlainText& text);

}  // namespace parrot
