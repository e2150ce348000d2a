#include "parrot/extraction.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "parrot/error.hpp"
#include "parrot/utf8.hpp"

namespace parrot {

namespace {

bool disallowed_control(unsigned char c) { return c < 0x20 && c != '\n' && c != '\t'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals_at(std::string_view hay, std::size_t pos, std::string_view needle) {
  if (hay.size() - pos < needle.size()) return false;
  for (std::size_t i = 0; i < needle.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(hay[pos + i])) != needle[i]) return false;
  }
  return true;
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == '_';
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
      {"apos", '\''},     {"nbsp", ' '},      {"copy", 0xA9},     {"reg", 0xAE},
      {"trade", 0x2122},  {"hellip", 0x2026}, {"mdash", 0x2014},  {"ndash", 0x2013},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
      {"laquo", 0xAB},    {"raquo", 0xBB},    {"euro", 0x20AC},   {"pound", 0xA3},
      {"sect", 0xA7},     {"para", 0xB6},     {"middot", 0xB7},   {"deg", 0xB0},
      {"times", 0xD7},    {"divide", 0xF7},   {"shy", 0xAD},      {"bull", 0x2022},
      {"ordf", 0xAA},     {"ordm", 0xBA},     {"iexcl", 0xA1},    {"iquest", 0xBF},
      {"Agrave", 0xC0},   {"Aacute", 0xC1},   {"Acirc", 0xC2},    {"Atilde", 0xC3},
      {"Auml", 0xC4},     {"Ccedil", 0xC7},   {"Egrave", 0xC8},   {"Eacute", 0xC9},
      {"Ecirc", 0xCA},    {"Iacute", 0xCD},   {"Ntilde", 0xD1},   {"Oacute", 0xD3},
      {"Ocirc", 0xD4},    {"Otilde", 0xD5},   {"Ouml", 0xD6},     {"Uacute", 0xDA},
      {"Uuml", 0xDC},     {"szlig", 0xDF},    {"agrave", 0xE0},   {"aacute", 0xE1},
      {"acirc", 0xE2},    {"atilde", 0xE3},   {"auml", 0xE4},     {"ccedil", 0xE7},
      {"egrave", 0xE8},   {"eacute", 0xE9},   {"ecirc", 0xEA},    {"euml", 0xEB},
      {"igrave", 0xEC},   {"iacute", 0xED},   {"icirc", 0xEE},    {"ntilde", 0xF1},
      {"ograve", 0xF2},   {"oacute", 0xF3},   {"ocirc", 0xF4},    {"otilde", 0xF5},
      {"ouml", 0xF6},     {"ugrave", 0xF9},   {"uacute", 0xFA},   {"ucirc", 0xFB},
      {"uuml", 0xFC},     {"thinsp", ' '},    {"ensp", ' '},      {"emsp", ' '},
  };
  return table;
}

// Decodes the entity at s[pos] == '&'. Returns consumed length, 0 when the
// ampersand is literal.
std::size_t decode_entity(std::string_view s, std::size_t pos, std::string& out) {
  std::size_t i = pos + 1;
  if (i < s.size() && s[i] == '#') {
    ++i;
    int base = 10;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      base = 16;
      ++i;
    }
    const std::size_t start = i;
    std::uint64_t value = 0;
    while (i < s.size() && i - start < 10 &&
           (base == 16 ? std::isxdigit(static_cast<unsigned char>(s[i]))
                       : std::isdigit(static_cast<unsigned char>(s[i])))) {
      const char d = s[i];
      value = value * base + static_cast<std::uint64_t>(std::isdigit(static_cast<unsigned char>(d)) ? d - '0' : (std::tolower(d) - 'a' + 10));
      ++i;
    }
    if (i == start) return 0;
    if (i < s.size() && s[i] == ';') ++i;
    char32_t cp = static_cast<char32_t>(value);
    if (value == 0 || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
      cp = utf8::kReplacement;
    }
    utf8::append(out, cp);
    return i - pos;
  }
  const std::size_t start = i;
  while (i < s.size() && i - start < 32 && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start) return 0;
  const auto name = s.substr(start, i - start);
  const auto& table = named_entities();
  auto it = table.find(name);
  if (it == table.end()) return 0;
  const bool terminated = i < s.size() && s[i] == ';';
  const bool legacy = name == "amp" || name == "lt" || name == "gt" || name == "quot" || name == "nbsp";
  if (!terminated && !legacy) return 0;
  utf8::append(out, it->second);
  return i - pos + (terminated ? 1 : 0);
}

bool is_block(std::string_view tag) {
  const auto& tags = html_block_tags();
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

bool is_void(std::string_view tag) {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base", "br",   "col",   "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

bool always_dropped(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "head" || tag == "noscript" ||
         tag == "template" || tag == "title";
}

bool closes_same(std::string_view tag) {
  return tag == "p" || tag == "li" || tag == "td" || tag == "th" || tag == "tr" ||
         tag == "dt" || tag == "dd" || tag == "option";
}

struct StartTag {
  std::string name;
  std::string id;
  std::vector<std::string> classes;
  bool self_closing = false;
};

// Parses attributes from just after the tag name up to and including '>'.
std::size_t parse_attributes(std::string_view s, std::size_t i, StartTag& tag) {
  while (i < s.size()) {
    while (i < s.size() && utf8::is_space(s[i])) ++i;
    if (i >= s.size()) break;
    if (s[i] == '>') return i + 1;
    if (s[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    const std::size_t ns = i;
    while (i < s.size() && !utf8::is_space(s[i]) && s[i] != '=' && s[i] != '>' && s[i] != '/') ++i;
    if (i == ns) {
      ++i;
      continue;
    }
    const std::string name = ascii_lower(s.substr(ns, i - ns));
    while (i < s.size() && utf8::is_space(s[i])) ++i;
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && utf8::is_space(s[i])) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        const char q = s[i++];
        const std::size_t vs = i;
        while (i < s.size() && s[i] != q) ++i;
        value = std::string(s.substr(vs, i - vs));
        if (i < s.size()) ++i;
      } else {
        const std::size_t vs = i;
        while (i < s.size() && !utf8::is_space(s[i]) && s[i] != '>') ++i;
        value = std::string(s.substr(vs, i - vs));
      }
      tag.self_closing = false;
    }
    if (name == "id") {
      tag.id = value;
    } else if (name == "class") {
      std::istringstream in(value);
      for (std::string c; in >> c;) tag.classes.push_back(c);
    }
  }
  return s.size();
}

bool matches(const ElementSelector& sel, const StartTag& tag) {
  if (!sel.tag.empty() && sel.tag != tag.name) return false;
  if (!sel.id.empty() && sel.id != tag.id) return false;
  if (!sel.cls.empty() &&
      std::find(tag.classes.begin(), tag.classes.end(), sel.cls) == tag.classes.end()) {
    return false;
  }
  return !(sel.tag.empty() && sel.id.empty() && sel.cls.empty());
}

class HtmlTextBuilder {
 public:
  void text(std::string_view s, bool preformatted) {
    for (char c : s) {
      if (preformatted) {
        if (c == '\n') {
          current_.push_back('\n');
        } else {
          current_.push_back(utf8::is_space(c) ? ' ' : c);
        }
        continue;
      }
      if (utf8::is_space(c)) {
        pending_space_ = !current_.empty();
      } else {
        if (pending_space_) current_.push_back(' ');
        pending_space_ = false;
        current_.push_back(c);
      }
    }
  }

  void block_break() {
    pending_space_ = false;
    std::size_t b = 0, e = current_.size();
    while (b < e && utf8::is_space(current_[b])) ++b;
    while (e > b && utf8::is_space(current_[e - 1])) --e;
    if (e > b) blocks_.emplace_back(current_.substr(b, e - b));
    current_.clear();
  }

  std::string finish() {
    block_break();
    std::string out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) out += "\n\n";
      out += blocks_[i];
    }
    return out;
  }

 private:
  std::vector<std::string> blocks_;
  std::string current_;
  bool pending_space_ = false;
};

struct OpenElement {
  std::string name;
  bool excluded;
};

}  // namespace

bool satisfies_plain_text_invariants(std::string_view text) noexcept {
  if (!utf8::is_valid(text)) return false;
  return std::none_of(text.begin(), text.end(),
                      [](char c) { return disallowed_control(static_cast<unsigned char>(c)); });
}

PlainText normalize_plain_text(std::string_view in) {
  while (in.size() >= 3 && in.substr(0, 3) == "\xEF\xBB\xBF") in.remove_prefix(3);
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    const auto b = static_cast<unsigned char>(in[i]);
    if (b < 0x80) {
      if (b == '\r') {
        out.push_back('\n');
        i += (i + 1 < in.size() && in[i + 1] == '\n') ? 2 : 1;
        continue;
      }
      if (!disallowed_control(b)) out.push_back(static_cast<char>(b));
      ++i;
      continue;
    }
    const auto d = utf8::decode(in, i);
    if (d.valid) {
      out.append(in.substr(i, d.length));
    } else {
      utf8::append(out, utf8::kReplacement);
    }
    i += d.length;
  }
  return PlainText{std::move(out)};
}

PlainText normalize_plain_text(const RawContent& raw) { return normalize_plain_text(raw.bytes); }

ElementSelector ElementSelector::parse(std::string_view selector) {
  ElementSelector sel;
  std::string* target = &sel.tag;
  for (char c : selector) {
    if (c == '.') {
      target = &sel.cls;
    } else if (c == '#') {
      target = &sel.id;
    } else if (!utf8::is_space(c)) {
      target->push_back(c);
    }
  }
  sel.tag = ascii_lower(sel.tag);
  return sel;
}

const std::vector<std::string_view>& html_block_tags() {
  static const std::vector<std::string_view> tags = {
      "p",       "div",     "li",      "ul",         "ol",      "h1",     "h2",
      "h3",      "h4",      "h5",      "h6",         "table",   "tr",     "td",
      "th",      "blockquote", "pre",  "br",         "hr",      "body",   "section",
      "article", "header",  "footer",  "nav",        "aside",   "main",   "figure",
      "figcaption", "dl",   "dt",      "dd",         "caption", "address", "form",
      "fieldset", "option", "textarea"};
  return tags;
}

PlainText extract_html(std::string_view bytes, const HtmlOptions& options) {
  const std::string src = normalize_plain_text(bytes).text;
  const std::string_view s = src;

  HtmlTextBuilder builder;
  std::vector<OpenElement> stack;
  std::size_t excluded_depth = 0;
  std::size_t pre_depth = 0;
  std::string text_run;

  auto flush_text = [&] {
    if (!text_run.empty() && excluded_depth == 0) builder.text(text_run, pre_depth > 0);
    text_run.clear();
  };
  auto pop_to = [&](std::size_t index) {
    while (stack.size() > index) {
      if (stack.back().excluded) --excluded_depth;
      if (stack.back().name == "pre" && pre_depth) --pre_depth;
      stack.pop_back();
    }
  };

  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '&') {
      const std::size_t used = decode_entity(s, i, text_run);
      if (used) {
        i += used;
      } else {
        text_run.push_back('&');
        ++i;
      }
      continue;
    }
    if (c != '<' || i + 1 >= s.size()) {
      text_run.push_back(c);
      ++i;
      continue;
    }

    const char n = s[i + 1];
    if (s.substr(i, 4) == "<!--") {
      flush_text();
      const auto end = s.find("-->", i + 4);
      i = end == std::string_view::npos ? s.size() : end + 3;
      continue;
    }
    if (n == '!' || n == '?') {
      flush_text();
      const auto end = s.find('>', i);
      i = end == std::string_view::npos ? s.size() : end + 1;
      continue;
    }
    if (n == '/') {
      std::size_t j = i + 2;
      while (j < s.size() && is_name_char(s[j])) ++j;
      const std::string name = ascii_lower(s.substr(i + 2, j - i - 2));
      const auto end = s.find('>', j);
      const std::size_t next = end == std::string_view::npos ? s.size() : end + 1;
      if (name.empty()) {
        i = next;
        continue;
      }
      flush_text();
      for (std::size_t k = stack.size(); k-- > 0;) {
        if (stack[k].name == name) {
          pop_to(k);
          break;
        }
      }
      if (is_block(name)) builder.block_break();
      i = next;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(n))) {
      text_run.push_back(c);
      ++i;
      continue;
    }

    flush_text();
    StartTag tag;
    std::size_t j = i + 1;
    while (j < s.size() && is_name_char(s[j])) ++j;
    tag.name = ascii_lower(s.substr(i + 1, j - i - 1));
    i = parse_attributes(s, j, tag);

    if (tag.name == "body") {
      for (std::size_t k = stack.size(); k-- > 0;) {
        if (stack[k].name == "head") {
          pop_to(k);
          break;
        }
      }
    }
    if (closes_same(tag.name) && !stack.empty() && stack.back().name == tag.name) {
      pop_to(stack.size() - 1);
    }
    if (is_block(tag.name)) builder.block_break();

    const bool raw_text = tag.name == "script" || tag.name == "style";
    if (raw_text) {
      // Content is opaque up to the matching end tag.
      std::size_t k = i;
      const std::string close = "</" + tag.name;
      while (k < s.size() && !iequals_at(s, k, close)) ++k;
      const auto end = s.find('>', k);
      i = (k >= s.size() || end == std::string_view::npos) ? s.size() : end + 1;
      continue;
    }
    if (is_void(tag.name) || tag.self_closing) continue;

    bool excluded = always_dropped(tag.name);
    for (const auto& sel : options.exclude) excluded = excluded || matches(sel, tag);
    if (excluded) ++excluded_depth;
    if (tag.name == "pre") ++pre_depth;
    stack.push_back({tag.name, excluded});
  }
  flush_text();
  return normalize_plain_text(builder.finish());
}

PlainText extract_html(const RawContent& raw, const HtmlOptions& options) {
  return extract_html(raw.bytes, options);
}

std::optional<std::string> detect_mime(const std::filesystem::path& path) {
  const auto ext = ascii_lower(path.extension().string());
  if (ext == ".txt" || ext == ".text") return std::string(kMimePlain);
  if (ext == ".html" || ext == ".htm" || ext == ".xhtml") return std::string(kMimeHtml);
  return std::nullopt;
}

PlainText extract(const RawContent& raw, const HtmlOptions& options) {
  const auto mime = ascii_lower(raw.mimeType.substr(0, raw.mimeType.find(';')));
  if (mime == kMimePlain) return normalize_plain_text(raw);
  if (mime == kMimeHtml) return extract_html(raw, options);
  throw Error(ErrorCode::unsupported_media, "unsupported media type '" + raw.mimeType + "'",
              {{"mimeType", raw.mimeType}});
}

RawContent read_raw_file(const std::filesystem::path& path,
                         std::optional<std::string> mime_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto mime = mime_override ? mime_override : detect_mime(path);
  if (!mime) {
    throw Error(ErrorCode::unsupported_media,
                "cannot infer media type of '" + path.string() + "'; pass a format override");
  }
  return RawContent{buf.str(), *mime, path.filename().string()};
}

}  // namespace parrot
