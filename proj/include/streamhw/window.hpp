#ifndef STREAMHW_WINDOW_HPP
#define STREAMHW_WINDOW_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/value.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace streamhw {

/// Intermediate value of the list homomorphism for one aggregation. All
/// aggregations share this layout; each uses the fields it needs.
struct Partial {
  bool empty = true;     // epsilon
  __int128 acc = 0;      // sum, or current min / max
  std::uint64_t count = 0;
  std::uint64_t first_ts = 0;
  std::uint64_t last_ts = 0;
  __int128 first_v = 0;
  __int128 last_v = 0;
  __int128 area2 = 0;    // integral: twice the trapezoid area in value * ns

  friend bool operator==(const Partial&, const Partial&) = default;
};

Partial map_value(Aggregation agg, std::uint64_t ts, __int128 v);
/// Associative; the empty partial is a two-sided neutral element.
Partial combine(Aggregation agg, const Partial& a, const Partial& b);
/// Engine result: none for avg/min/max of nothing; avg and integral truncate
/// toward zero; values wrap to `result`.
std::optional<Value> finalize(Aggregation agg, const Partial& p, ValueType result);
/// Exact rational meaning of the finalized value (integral in value * seconds).
/// Returns false when the result is none.
bool exact_value(Aggregation agg, const Partial& p, __int128& num, __int128& den);

/// Balanced binary reduction of `parts` in order.
Partial reduce_tree(Aggregation agg, const std::vector<Partial>& parts);

/// Ring of beta pre-aggregation buckets with eviction register T.
class WindowState {
 public:
  WindowState(const WindowPlan& plan, std::uint64_t start_ns);

  /// Shifts out every bucket that became outdated at `now`; returns the
  /// number of shifts (capped at beta, after which all buckets are epsilon).
  std::uint64_t evict(std::uint64_t now);
  void add(std::uint64_t ts, const Value& v);
  std::optional<Value> aggregate(std::uint64_t now) const;
  Partial reduced() const;

  /// Bucket k, 0 = oldest, beta-1 = newest.
  const Partial& bucket(std::size_t k) const;
  std::size_t size() const { return buckets_.size(); }
  std::uint64_t next_eviction() const { return t_; }
  std::uint64_t start() const { return start_; }
  const WindowPlan& plan() const { return plan_; }

 private:
  WindowPlan plan_;
  std::vector<Partial> buckets_;
  std::size_t head_ = 0;  // oldest bucket
  std::uint64_t start_;
  std::uint64_t t_;
};

}  // namespace streamhw

#endif
