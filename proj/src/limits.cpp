#include "parrot/limits.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "default_word_lists.hpp"
#include "parrot/error.hpp"

namespace parrot {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

// Adds one unit in the last place of a digit string; returns true on carry out.
bool increment(std::string& digits) {
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it != '9') {
      ++*it;
      return false;
    }
    *it = '0';
  }
  digits.insert(digits.begin(), '1');
  return true;
}

}  // namespace

std::vector<WordList> parse_word_lists(std::istream& in) {
  std::vector<WordList> lists;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_tabs(line);
    if (f.size() < 2) {
      throw Error(ErrorCode::validation_failed, "word list line " + std::to_string(lineNo) + ": expected name and size");
    }
    WordList w;
    w.name = f[0];
    const auto [p, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), w.totalWords);
    if (ec != std::errc{} || p != f[1].data() + f[1].size() || w.totalWords == 0) {
      throw Error(ErrorCode::validation_failed, "word list line " + std::to_string(lineNo) + ": bad size '" + f[1] + "'");
    }
    if (f.size() > 2 && !f[2].empty()) w.coveragePct = std::stod(f[2]);
    if (f.size() > 3) w.citation = f[3];
    lists.push_back(std::move(w));
  }
  return lists;
}

std::vector<WordList> load_word_lists(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::not_found, "cannot open word list file " + path.string());
  return parse_word_lists(in);
}

const std::vector<WordList>& default_word_lists() {
  static const std::vector<WordList> lists = [] {
    std::istringstream in(generated::kDefaultWordLists);
    return parse_word_lists(in);
  }();
  return lists;
}

Rendering render_scientific(const BigInt& value, unsigned significantDigits, Notation notation) {
  if (value < 0) throw Error(ErrorCode::validation_failed, "negative value");
  if (significantDigits == 0) throw Error(ErrorCode::validation_failed, "significant digits must be positive");
  const std::string all = value.str();
  const std::size_t limit = notation == Notation::engineering ? 3 : 1;
  Rendering r;
  if (all.size() <= limit) {
    r.mantissa = all;
    r.text = all;
    return r;
  }
  std::int64_t lead = static_cast<std::int64_t>(all.size()) - 1;  // power of ten of the first digit
  std::string kept;
  if (all.size() > significantDigits) {
    kept = all.substr(0, significantDigits);
    const std::string rest = all.substr(significantDigits);
    const std::string half = "5" + std::string(rest.size() - 1, '0');
    const int cmp = rest.compare(half);
    const bool odd = (kept.back() - '0') % 2 == 1;
    if (cmp > 0 || (cmp == 0 && odd)) {
      if (increment(kept)) {
        kept.pop_back();
        ++lead;
      }
    }
  } else {
    kept = all + std::string(significantDigits - all.size(), '0');
  }
  const std::int64_t exponent = notation == Notation::engineering ? lead - lead % 3 : lead;
  const auto intDigits = static_cast<std::size_t>(lead - exponent + 1);
  if (kept.size() < intDigits) kept.append(intDigits - kept.size(), '0');
  r.mantissa = kept.substr(0, intDigits);
  if (kept.size() > intDigits) r.mantissa += "." + kept.substr(intDigits);
  r.exponent = exponent;
  r.text = exponent == 0 ? r.mantissa : r.mantissa + "×10^" + std::to_string(exponent);
  return r;
}

std::string format_scientific(const BigInt& value, unsigned significantDigits, Notation notation) {
  return render_scientific(value, significantDigits, notation).text;
}

BigInt ceiling_loop_sum(std::uint64_t v, unsigned n) {
  BigInt sum = 0;
  BigInt term = 1;
  for (unsigned i = 1; i <= n; ++i) {
    term *= v;
    sum += term;
  }
  return sum;
}

BigInt ceiling_closed_form(std::uint64_t v, unsigned n) {
  if (v == 1) return BigInt(n);
  const BigInt V(v);
  return V * (boost::multiprecision::pow(V, n) - 1) / (V - 1);
}

CeilingResult sentence_ceiling(std::uint64_t v, unsigned n) {
  if (v < 1 || n < 1) throw Error(ErrorCode::validation_failed, "vocabulary size and max words must be at least 1");
  CeilingResult r;
  r.vocabularySize = v;
  r.maxWords = n;
  r.exact = ceiling_loop_sum(v, n);
  if (r.exact != ceiling_closed_form(v, n)) {
    throw Error(ErrorCode::internal, "loop sum and closed form disagree");
  }
  r.dominantTerm = boost::multiprecision::pow(BigInt(v), n);
  const auto rendering = render_scientific(r.exact, 17);
  r.mantissa = std::stod(rendering.mantissa);
  r.exponent = rendering.exponent;
  r.digits = r.exact.str().size();
  return r;
}

std::vector<CeilingRow> ceiling_table(std::span<const WordList> lists, std::span<const unsigned> lengths) {
  std::vector<CeilingRow> rows;
  for (const auto& list : lists) {
    CeilingRow row{list, {}};
    for (unsigned n : lengths) row.ceilings.push_back(sentence_ceiling(list.totalWords, n));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_ceiling_table(std::span<const CeilingRow> rows, std::span<const unsigned> lengths,
                                 unsigned significantDigits) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Word list", "# total of words"};
  for (unsigned n : lengths) header.push_back(std::to_string(n) + " words");
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line{row.list.name, std::to_string(row.list.totalWords)};
    for (const auto& c : row.ceilings) {
      line.push_back(format_scientific(c.exact, significantDigits, Notation::scientific));
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  auto width = [](const std::string& s) {
    // "×" is two bytes but one column
    std::size_t w = s.size();
    for (std::size_t p = s.find("×"); p != std::string::npos; p = s.find("×", p + 1)) --w;
    return w;
  };
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], width(line[i]));
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const std::string fill(widths[i] - width(line[i]), ' ');
      if (i) out << "  ";
      out << (i == 0 ? line[i] + fill : fill + line[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace parrot
