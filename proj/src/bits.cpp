#include "streamhw/bits.hpp"

#include <stdexcept>

namespace streamhw {

void BitVector::set(std::size_t i, bool b) {
  const std::uint64_t m = std::uint64_t{1} << (i % 64);
  if (b)
    words_[i / 64] |= m;
  else
    words_[i / 64] &= ~m;
}

std::uint64_t BitVector::field(std::size_t lsb, int width) const {
  std::uint64_t v = 0;
  for (int k = width - 1; k >= 0; --k) v = (v << 1) | (get(lsb + static_cast<std::size_t>(k)) ? 1u : 0u);
  return v;
}

void BitVector::set_field(std::size_t lsb, int width, std::uint64_t value) {
  for (int k = 0; k < width; ++k) set(lsb + static_cast<std::size_t>(k), (value >> k) & 1u);
}

std::string BitVector::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i)
    if (get(i)) s[nbits_ - 1 - i] = '1';
  return s;
}

BitVector BitVector::from_string(const std::string& s) {
  BitVector bv(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[s.size() - 1 - i];
    if (c != '0' && c != '1') throw std::invalid_argument("bit string contains '" + std::string(1, c) + "'");
    bv.set(i, c == '1');
  }
  return bv;
}

}  // namespace streamhw
