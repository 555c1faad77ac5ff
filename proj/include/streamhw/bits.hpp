#ifndef STREAMHW_BITS_HPP
#define STREAMHW_BITS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace streamhw {

/// Fixed-length bit vector; bit 0 is the least significant.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }
  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i, bool b);

  /// Reads / writes `width` (<= 64) bits starting at bit `lsb`.
  std::uint64_t field(std::size_t lsb, int width) const;
  void set_field(std::size_t lsb, int width, std::uint64_t value);

  /// MSB-first binary text.
  std::string to_string() const;
  static BitVector from_string(const std::string& s);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace streamhw

#endif
