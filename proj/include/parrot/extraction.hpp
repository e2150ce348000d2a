#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parrot {

inline constexpr std::string_view kMimePlain = "text/plain";
inline constexpr std::string_view kMimeHtml = "text/html";

struct RawContent {
  std::string bytes;
  std::string mimeType;
  std::string name;
};

// UTF-8 text with LF line endings and no C0 controls other than LF and TAB.
// Paragraph breaks are blank lines.
struct PlainText {
  std::string text;

  bool operator==(const PlainText&) const = default;
};

bool satisfies_plain_text_invariants(std::string_view text) noexcept;

// Strips leading BOMs, maps CRLF/CR to LF, replaces ill-formed UTF-8 with
// U+FFFD and drops disallowed control characters. Idempotent.
PlainText normalize_plain_text(std::string_view bytes);
PlainText normalize_plain_text(const RawContent& raw);

// Minimal selector: `tag`, `.class`, `#id`, `tag.class` or `tag#id`.
struct ElementSelector {
  std::string tag;
  std::string cls;
  std::string id;

  static ElementSelector parse(std::string_view selector);
};

struct HtmlOptions {
  // Elements whose whole subtree is dropped (navigation chrome etc.).
  std::vector<ElementSelector> exclude;
};

// Block-level elements that always separate text with a blank line.
const std::vector<std::string_view>& html_block_tags();

PlainText extract_html(std::string_view bytes, const HtmlOptions& options = {});
PlainText extract_html(const RawContent& raw, const HtmlOptions& options = {});

// Extension based detection: .txt -> text/plain, .html/.htm -> text/html.
std::optional<std::string> detect_mime(const std::filesystem::path& path);

// Dispatches on raw.mimeType; anything other than plain text or HTML is an
// unsupported_media error.
PlainText extract(const RawContent& raw, const HtmlOptions& options = {});

RawContent read_raw_file(const std::filesystem::path& path,
                         std::optional<std::string> mime_override = std::nullopt);

}  // namespace parrot
