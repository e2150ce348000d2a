#include <iconv.h>

#include <random>

#include "doctest.h"
#include "parrot/utf8.hpp"

using namespace parrot;

namespace {

// glibc's converter as an independent validity oracle.
bool iconv_valid(const std::string& s) {
  iconv_t cd = iconv_open("UTF-32LE", "UTF-8");
  REQUIRE(cd != reinterpret_cast<iconv_t>(-1));
  std::string in = s;
  std::string out(in.size() * 4 + 4, '\0');
  char* ip = in.data();
  char* op = out.data();
  std::size_t il = in.size(), ol = out.size();
  const auto rc = iconv(cd, &ip, &il, &op, &ol);
  iconv_close(cd);
  return rc != static_cast<std::size_t>(-1) && il == 0;
}

std::size_t replacements(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t p = 0; p < s.size();) {
    const auto d = utf8::decode(s, p);
    n += !d.valid;
    p += d.length;
  }
  return n;
}

}  // namespace

TEST_CASE("utf8 decodes well-formed sequences") {
  CHECK(utf8::decode("A", 0).cp == U'A');
  const std::string e = "\xC3\xA9";
  CHECK(utf8::decode(e, 0).cp == U'é');
  CHECK(utf8::decode(e, 0).length == 2);
  const std::string euro = "\xE2\x82\xAC";
  CHECK(utf8::decode(euro, 0).cp == 0x20AC);
  const std::string emoji = "\xF0\x9F\x98\x80";
  CHECK(utf8::decode(emoji, 0).cp == 0x1F600);
  CHECK(utf8::length("a\xC3\xA9\xE2\x82\xAC") == 3);
}

TEST_CASE("utf8 maximal subpart replacement") {
  // Unicode core spec examples: each maximal ill-formed subpart is one U+FFFD
  CHECK(replacements("\xC0\xAF") == 2);
  CHECK(replacements("\xE0\x80\xAF") == 3);
  CHECK(replacements("\xED\xA0\x80") == 3);  // surrogate
  CHECK(replacements("\xF4\x90\x80\x80") == 4);
  CHECK(replacements("\xE1\x80") == 1);  // truncated
  CHECK(replacements("\xF1\x80\x80") == 1);
  CHECK(replacements("\x80\x80") == 2);
  CHECK(replacements("\x61\xF1\x80\x80\xE1\x80\xC2\x62\x80\x63\x80\xBF\x64") == 6);
}

TEST_CASE("utf8 append round trip") {
  for (char32_t cp : {U'A', U'é', U'€', U'\U0001F600', U'\U0010FFFF'}) {
    std::string s;
    utf8::append(s, cp);
    const auto d = utf8::decode(s, 0);
    CHECK(d.valid);
    CHECK(d.cp == cp);
    CHECK(d.length == s.size());
  }
}

TEST_CASE("utf8 validity agrees with iconv on random bytes") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 12), byte(0, 255), pick(0, 5);
  const unsigned char interesting[] = {0x80, 0xBF, 0xC2, 0xE0, 0xED, 0xF0, 0xF4, 0xF5};
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    for (int n = len(rng); n > 0; --n) {
      // bias towards lead and continuation bytes so multi-byte forms appear
      const int k = pick(rng);
      s.push_back(static_cast<char>(k < 2 ? byte(rng) : k < 4 ? interesting[byte(rng) % 8] : 0x80 | (byte(rng) & 0x3F)));
    }
    INFO(i);
    CHECK(utf8::is_valid(s) == iconv_valid(s));
  }
}

TEST_CASE("utf8 character classes") {
  CHECK(utf8::is_upper(U'A'));
  CHECK(utf8::is_upper(U'É'));
  CHECK(utf8::is_upper(U'Ω'));
  CHECK_FALSE(utf8::is_upper(U'a'));
  CHECK(utf8::is_alpha(U'ç'));
  CHECK_FALSE(utf8::is_alpha(U'3'));
  CHECK(utf8::is_digit(U'3'));
}
