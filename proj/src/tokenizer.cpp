#include "parrot/tokenizer.hpp"

#include <fstream>
#include <sstream>

#include "default_abbreviations.hpp"
#include "parrot/error.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

namespace {

using utf8::is_space;

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool gap = false;
  for (char c : s) {
    if (is_space(c)) {
      gap = !out.empty();
    } else {
      if (gap) out.push_back(' ');
      gap = false;
      out.push_back(c);
    }
  }
  return out;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of a closing quote/bracket at pos, 0 if none.
std::size_t closer_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') return 1;
  const auto rest = s.substr(pos);
  if (rest.starts_with("\xE2\x80\x9D") || rest.starts_with("\xE2\x80\x99")) return 3;  // ” ’
  if (rest.starts_with("\xC2\xBB")) return 2;                                          // »
  return 0;
}

bool is_opener(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0x201C || cp == 0x2018 ||
         cp == 0xAB;
}

bool is_blank_line(std::string_view line) {
  for (char c : line) {
    if (!is_space(c)) return false;
  }
  return true;
}

}  // namespace

const AbbreviationList& AbbreviationList::defaults() {
  static const AbbreviationList list = parse(generated::kDefaultAbbreviations);
  return list;
}

AbbreviationList AbbreviationList::parse(std::string_view text) {
  AbbreviationList list;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string entry = collapse_whitespace(text.substr(pos, end - pos));
    if (!entry.empty() && entry[0] != '#') list.add(entry);
    pos = end + 1;
  }
  return list;
}

AbbreviationList AbbreviationList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read abbreviation list '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void AbbreviationList::add(std::string_view entry) {
  std::string e = collapse_whitespace(entry);
  if (e.empty()) return;
  std::size_t words = 1;
  for (char c : e) words += c == ' ';
  max_words_ = std::max(max_words_, words);
  entries_.insert(std::move(e));
}

bool SentenceTokenizer::is_abbreviation(std::string_view para, std::size_t dot) const {
  // Walk back word by word (whitespace-delimited) from the period.
  std::size_t end = dot + 1;
  std::size_t begin = dot;
  std::string candidate;
  for (std::size_t words = 1; words <= abbreviations_->max_words(); ++words) {
    while (begin > 0 && !is_space(para[begin - 1])) --begin;
    candidate = collapse_whitespace(para.substr(begin, end - begin));
    // A leading opener such as "(e.g." still counts.
    std::string_view view = candidate;
    while (!view.empty() && (view[0] == '(' || view[0] == '[' || view[0] == '"' || view[0] == '\'')) {
      view.remove_prefix(1);
    }
    if (abbreviations_->contains(view)) return true;
    while (begin > 0 && is_space(para[begin - 1])) --begin;
    if (begin == 0) break;
  }
  return false;
}

void SentenceTokenizer::split_paragraph(std::string_view para, SentenceList& out) const {
  auto emit = [&](std::string_view piece) {
    std::string text = collapse_whitespace(piece);
    if (!text.empty()) out.push_back({std::move(text), out.size()});
  };

  const std::size_t n = para.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(para[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminator(para[j])) ++j;
    const std::size_t run = j - i;
    std::size_t k = j;
    while (k < n) {
      const auto len = closer_length(para, k);
      if (!len) break;
      k += len;
    }
    if (k >= n || !is_space(para[k])) {
      i = j;
      continue;
    }
    std::size_t m = k;
    while (m < n && is_space(para[m])) ++m;
    if (m >= n) {
      i = j;
      continue;
    }
    const char32_t next = utf8::decode(para, m).cp;
    const bool ellipsis = run >= 2 && para[i] == '.' && para[j - 1] == '.';
    bool boundary = ellipsis ? utf8::is_upper(next)
                             : (utf8::is_upper(next) || utf8::is_digit(next) || is_opener(next));
    if (boundary && run == 1 && para[i] == '.' && is_abbreviation(para, i)) boundary = false;
    if (boundary) {
      emit(para.substr(start, k - start));
      start = k;
    }
    i = k;
  }
  emit(para.substr(start));
}

SentenceList SentenceTokenizer::split(std::string_view text) const {
  SentenceList out;
  std::size_t para_start = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    if (is_blank_line(text.substr(pos, eol - pos))) {
      if (pos > para_start) split_paragraph(text.substr(para_start, pos - para_start), out);
      para_start = eol + 1;
    }
    pos = eol + 1;
  }
  if (para_start < text.size()) split_paragraph(text.substr(para_start), out);
  return out;
}

SentenceList split_sentences(const PlainText& text) { return SentenceTokenizer().split(text); }

}  // namespace parrot
