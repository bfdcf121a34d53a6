#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace evoprune {

/// Fixed-length retain/prune mask. Bit j = 1 keeps the j-th weight of the
/// mask universe, 0 prunes it.
class BitMask {
 public:
  BitMask() = default;
  explicit BitMask(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}
  explicit BitMask(std::vector<std::uint8_t> bits);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }
  void flip(std::size_t i) noexcept { bits_[i] ^= 1; }

  std::size_t popcount() const noexcept;

  const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }

  friend bool operator==(const BitMask&, const BitMask&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Run-length encoding "<count>x<bit>" joined by commas, e.g. "3x1,2x0".
/// The empty mask encodes as "".
std::string rle_encode(const BitMask& mask);
BitMask rle_decode(std::string_view text);

}  // namespace evoprune
