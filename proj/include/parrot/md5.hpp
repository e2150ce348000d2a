#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace parrot {

struct Md5Digest {
  std::array<std::uint8_t, 16> bytes{};

  std::string hex() const;
  static Md5Digest from_hex(std::string_view hex);

  auto operator<=>(const Md5Digest&) const = default;
};

struct Md5DigestHash {
  std::size_t operator()(const Md5Digest& d) const noexcept {
    std::size_t h;
    static_assert(sizeof(h) <= sizeof(d.bytes));
    __builtin_memcpy(&h, d.bytes.data(), sizeof(h));
    return h;
  }
};

// RFC 1321 message digest, incremental.
class Md5 {
 public:
  Md5();
  void update(std::string_view data);
  Md5Digest finish();

 private:
  void transform(const std::uint8_t* block);

  std::array<std::uint32_t, 4> state_;
  std::uint64_t length_ = 0;
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffered_ = 0;
};

Md5Digest md5(std::string_view data);

// Lowercase 32-character hex digest of the UTF-8 bytes.
inline std::string compute_md5(std::string_view text) { return md5(text).hex(); }

}  // namespace parrot
