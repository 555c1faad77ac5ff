#ifndef STREAMHW_QUEUE_ENTRY_HPP
#define STREAMHW_QUEUE_ENTRY_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/bits.hpp"

#include <stdexcept>
#include <vector>

namespace streamhw {

/// Field widths of a queue entry.
struct EntryLayout {
  std::vector<int> input_bits;  // s_i
  int ts_bits = 64;
  int n_out = 0;

  static EntryLayout of(const AnalyzedSpec& a);
  /// sum(s_i + 1) + s_ts + n_out
  std::size_t width() const;
};

/// Unit of work from the HLC to the LLC. Deadline entries carry no payload.
struct QueueEntry {
  std::vector<bool> present;
  std::vector<std::uint64_t> values;  // raw bits per input, zero when absent
  std::uint64_t ts = 0;
  std::vector<bool> affected;

  static QueueEntry empty(const EntryLayout& layout);
  bool has_input() const;

  friend bool operator==(const QueueEntry&, const QueueEntry&) = default;
};

class MalformedEntry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// MSB-first: [value_1 | present_1 | ... | value_n | present_n | ts | affected_1 .. affected_m].
BitVector serialize(const QueueEntry& e, const EntryLayout& layout);
QueueEntry deserialize(const BitVector& bits, const EntryLayout& layout);

}  // namespace streamhw

#endif
