#include "streamhw/queue_entry.hpp"

#include <algorithm>

namespace streamhw {

EntryLayout EntryLayout::of(const AnalyzedSpec& a) {
  EntryLayout l;
  l.input_bits = a.s_in;
  l.ts_bits = a.s_ts;
  l.n_out = a.n_out;
  return l;
}

std::size_t EntryLayout::width() const {
  std::size_t w = static_cast<std::size_t>(ts_bits + n_out);
  for (int s : input_bits) w += static_cast<std::size_t>(s + 1);
  return w;
}

QueueEntry QueueEntry::empty(const EntryLayout& layout) {
  QueueEntry e;
  e.present.assign(layout.input_bits.size(), false);
  e.values.assign(layout.input_bits.size(), 0);
  e.affected.assign(static_cast<std::size_t>(layout.n_out), false);
  return e;
}

bool QueueEntry::has_input() const { return std::find(present.begin(), present.end(), true) != present.end(); }

BitVector serialize(const QueueEntry& e, const EntryLayout& layout) {
  BitVector bits(layout.width());
  std::size_t top = bits.size();
  auto put = [&](std::uint64_t v, int width) {
    top -= static_cast<std::size_t>(width);
    bits.set_field(top, width, v);
  };
  for (std::size_t i = 0; i < layout.input_bits.size(); ++i) {
    put(e.present[i] ? e.values[i] : 0, layout.input_bits[i]);
    put(e.present[i] ? 1 : 0, 1);
  }
  put(e.ts, layout.ts_bits);
  for (int j = 0; j < layout.n_out; ++j) put(e.affected[static_cast<std::size_t>(j)] ? 1 : 0, 1);
  return bits;
}

QueueEntry deserialize(const BitVector& bits, const EntryLayout& layout) {
  if (bits.size() != layout.width())
    throw MalformedEntry("queue entry has " + std::to_string(bits.size()) + " bits, expected " +
                         std::to_string(layout.width()));
  QueueEntry e = QueueEntry::empty(layout);
  std::size_t top = bits.size();
  auto take = [&](int width) {
    top -= static_cast<std::size_t>(width);
    return bits.field(top, width);
  };
  for (std::size_t i = 0; i < layout.input_bits.size(); ++i) {
    e.values[i] = take(layout.input_bits[i]);
    e.present[i] = take(1) != 0;
  }
  e.ts = take(layout.ts_bits);
  for (int j = 0; j < layout.n_out; ++j) e.affected[static_cast<std::size_t>(j)] = take(1) != 0;
  return e;
}

}  // namespace streamhw
