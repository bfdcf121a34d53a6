#include "evoprune/bitmask.hpp"

#include <algorithm>
#include <charconv>

#include "evoprune/error.hpp"

namespace evoprune {

BitMask::BitMask(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BitMask::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string rle_encode(const BitMask& mask) {
  std::string out;
  const auto& raw = mask.raw();
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i;
    while (j < raw.size() && raw[j] == raw[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(j - i);
    out += 'x';
    out += raw[i] ? '1' : '0';
    i = j;
  }
  return out;
}

BitMask rle_decode(std::string_view text) {
  std::vector<std::uint8_t> bits;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto run = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (comma != std::string_view::npos && text.empty()) throw FormatError("trailing ',' in run-length text");

    auto x = run.find('x');
    if (x == std::string_view::npos || x + 2 != run.size() || (run[x + 1] != '0' && run[x + 1] != '1')) {
      throw FormatError("bad run-length token '" + std::string(run) + "'");
    }
    std::size_t count = 0;
    auto [ptr, ec] = std::from_chars(run.data(), run.data() + x, count);
    if (ec != std::errc{} || ptr != run.data() + x || count == 0) {
      throw FormatError("bad run-length count '" + std::string(run) + "'");
    }
    bits.insert(bits.end(), count, run[x + 1] == '1' ? 1 : 0);
  }
  return BitMask{std::move(bits)};
}

}  // namespace evoprune
