#include "streamhw/window.hpp"

#include <algorithm>

namespace streamhw {

Partial map_value(Aggregation, std::uint64_t ts, __int128 v) {
  Partial p;
  p.empty = false;
  p.acc = v;
  p.count = 1;
  p.first_ts = p.last_ts = ts;
  p.first_v = p.last_v = v;
  return p;
}

Partial combine(Aggregation agg, const Partial& a, const Partial& b) {
  if (a.empty) return b;
  if (b.empty) return a;
  Partial r;
  r.empty = false;
  r.count = a.count + b.count;
  switch (agg) {
    case Aggregation::Min: r.acc = std::min(a.acc, b.acc); break;
    case Aggregation::Max: r.acc = std::max(a.acc, b.acc); break;
    default: r.acc = a.acc + b.acc; break;
  }
  r.first_ts = a.first_ts;
  r.first_v = a.first_v;
  r.last_ts = b.last_ts;
  r.last_v = b.last_v;
  const __int128 gap = static_cast<__int128>(b.first_ts) - static_cast<__int128>(a.last_ts);
  r.area2 = a.area2 + b.area2 + (a.last_v + b.first_v) * gap;
  return r;
}

std::optional<Value> finalize(Aggregation agg, const Partial& p, ValueType result) {
  switch (agg) {
    case Aggregation::Count:
      return Value::of_int(result, p.empty ? 0 : p.count);
    case Aggregation::Sum:
      return Value::of_int(result, p.empty ? 0 : p.acc);
    case Aggregation::Avg:
      if (p.empty || p.count == 0) return std::nullopt;
      return Value::of_int(result, p.acc / static_cast<__int128>(p.count));
    case Aggregation::Min:
    case Aggregation::Max:
      if (p.empty) return std::nullopt;
      return Value::of_int(result, p.acc);
    case Aggregation::Integral:
      if (p.empty) return Value::of_int(result, 0);
      return Value::of_int(result, p.area2 / (2 * static_cast<__int128>(kNanosPerSecond)));
  }
  return std::nullopt;
}

bool exact_value(Aggregation agg, const Partial& p, __int128& num, __int128& den) {
  den = 1;
  switch (agg) {
    case Aggregation::Count: num = p.empty ? 0 : p.count; return true;
    case Aggregation::Sum: num = p.empty ? 0 : p.acc; return true;
    case Aggregation::Avg:
      if (p.empty) return false;
      num = p.acc;
      den = p.count;
      return true;
    case Aggregation::Min:
    case Aggregation::Max:
      if (p.empty) return false;
      num = p.acc;
      return true;
    case Aggregation::Integral:
      num = p.empty ? 0 : p.area2;
      den = 2 * static_cast<__int128>(kNanosPerSecond);
      return true;
  }
  return false;
}

namespace {

Partial reduce_range(Aggregation agg, const std::vector<Partial>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return Partial{};
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine(agg, reduce_range(agg, parts, lo, mid), reduce_range(agg, parts, mid, hi));
}

}  // namespace

Partial reduce_tree(Aggregation agg, const std::vector<Partial>& parts) {
  return reduce_range(agg, parts, 0, parts.size());
}

WindowState::WindowState(const WindowPlan& plan, std::uint64_t start_ns)
    : plan_(plan),
      buckets_(static_cast<std::size_t>(plan.buckets)),
      start_(start_ns),
      t_(start_ns + plan.bucket_period_ns) {}

std::uint64_t WindowState::evict(std::uint64_t now) {
  if (now <= t_) return 0;
  const std::uint64_t bp = plan_.bucket_period_ns;
  const std::uint64_t shifts = (now - t_ + bp - 1) / bp;
  const std::size_t beta = buckets_.size();
  if (shifts >= beta) {
    std::fill(buckets_.begin(), buckets_.end(), Partial{});
    head_ = 0;
  } else {
    for (std::uint64_t s = 0; s < shifts; ++s) {
      buckets_[head_] = Partial{};
      head_ = (head_ + 1) % beta;
    }
  }
  t_ += shifts * bp;
  return std::min<std::uint64_t>(shifts, beta);
}

void WindowState::add(std::uint64_t ts, const Value& v) {
  const std::size_t newest = (head_ + buckets_.size() - 1) % buckets_.size();
  const __int128 x = v.type.is_bool() ? static_cast<__int128>(v.raw) : v.as_int();
  buckets_[newest] = combine(plan_.agg, buckets_[newest], map_value(plan_.agg, ts, x));
}

const Partial& WindowState::bucket(std::size_t k) const { return buckets_[(head_ + k) % buckets_.size()]; }

Partial WindowState::reduced() const {
  std::vector<Partial> ordered;
  ordered.reserve(buckets_.size());
  for (std::size_t k = 0; k < buckets_.size(); ++k) ordered.push_back(bucket(k));
  return reduce_tree(plan_.agg, ordered);
}

std::optional<Value> WindowState::aggregate(std::uint64_t now) const {
  if (now - start_ < plan_.duration_ns) return std::nullopt;
  return finalize(plan_.agg, reduced(), plan_.result_type);
}

}  // namespace streamhw
