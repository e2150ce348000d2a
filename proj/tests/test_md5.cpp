#include <openssl/evp.h>

#include <random>

#include "doctest.h"
#include "parrot/md5.hpp"

using namespace parrot;

namespace {

std::string openssl_md5(std::string_view data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, EVP_md5(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s.push_back(hex[out[i] >> 4]);
    s.push_back(hex[out[i] & 15]);
  }
  return s;
}

}  // namespace

TEST_CASE("md5 RFC 1321 suite") {
  const std::pair<const char*, const char*> vectors[] = {
      {"", "d41d8cd98f00b204e9800998ecf8427e"},
      {"a", "0cc175b9c0f1b6a831c399e269772661"},
      {"abc", "900150983cd24fb0d6963f7d28e17f72"},
      {"message digest", "f96b697d7cb7938d525a2f31aaf161d0"},
      {"abcdefghijklmnopqrstuvwxyz", "c3fcd3d76192e4007dfb496cca67e13b"},
      {"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789", "d174ab98d277d9f5a5611c2c9f419d9f"},
      {"12345678901234567890123456789012345678901234567890123456789012345678901234567890",
       "57edf4a22be3c955ac49da2e2107b67a"},
  };
  for (const auto& [in, want] : vectors) {
    CHECK(compute_md5(in) == want);
    CHECK(openssl_md5(in) == want);
  }
}

TEST_CASE("md5 matches OpenSSL across block boundaries and incremental updates") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> byte(0, 255);
  for (std::size_t len = 0; len < 300; ++len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<char>(byte(rng)));
    CHECK(compute_md5(s) == openssl_md5(s));
    Md5 inc;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const auto step = std::min<std::size_t>(s.size() - pos, 1 + byte(rng) % 70);
      inc.update(std::string_view(s).substr(pos, step));
      pos += step;
    }
    CHECK(inc.finish().hex() == openssl_md5(s));
  }
}

TEST_CASE("md5 hex round trip") {
  const auto d = md5("parrot");
  CHECK(Md5Digest::from_hex(d.hex()) == d);
  CHECK(d.hex().size() == 32);
}
