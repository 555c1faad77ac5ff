#ifndef STREAMHW_EVENT_QUEUE_HPP
#define STREAMHW_EVENT_QUEUE_HPP

#include "streamhw/bits.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace streamhw {

/// Bounded FIFO. A push beyond capacity drops the entry and counts it.
template <typename T>
class BoundedFifo {
 public:
  explicit BoundedFifo(std::size_t capacity) : capacity_(capacity) {}

  bool push(T v) {
    if (items_.size() >= capacity_) {
      ++overflows_;
      return false;
    }
    items_.push_back(std::move(v));
    high_water_ = std::max(high_water_, items_.size());
    return true;
  }

  std::optional<T> pop() {
    if (items_.empty()) return std::nullopt;
    T v = std::move(items_.front());
    items_.pop_front();
    return v;
  }

  const T& front() const { return items_.front(); }
  bool empty() const { return items_.empty(); }
  bool full() const { return items_.size() >= capacity_; }
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t overflows() const { return overflows_; }
  std::size_t high_water() const { return high_water_; }

 private:
  std::size_t capacity_;
  std::deque<T> items_;
  std::uint64_t overflows_ = 0;
  std::size_t high_water_ = 0;
};

/// The HLC-to-LLC boundary: one producer, one consumer.
class QueuePort {
 public:
  virtual ~QueuePort() = default;
  virtual bool push(BitVector entry) = 0;
  virtual std::optional<BitVector> pop() = 0;
  virtual bool empty() const = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t capacity() const = 0;
  virtual std::uint64_t overflows() const = 0;
};

/// Single-context queue.
class EventQueue final : public QueuePort {
 public:
  explicit EventQueue(std::size_t depth = 64) : fifo_(depth) {}
  bool push(BitVector entry) override { return fifo_.push(std::move(entry)); }
  std::optional<BitVector> pop() override { return fifo_.pop(); }
  bool empty() const override { return fifo_.empty(); }
  std::size_t size() const override { return fifo_.size(); }
  std::size_t capacity() const override { return fifo_.capacity(); }
  std::uint64_t overflows() const override { return fifo_.overflows(); }

 private:
  BoundedFifo<BitVector> fifo_;
};

/// Lock-free ring for a producer and a consumer on different threads.
class SpscQueue final : public QueuePort {
 public:
  explicit SpscQueue(std::size_t depth = 64) : slots_(depth + 1), depth_(depth) {}

  bool push(BitVector entry) override {
    const std::size_t tail = tail_.load(std::memory_order_relaxed);
    const std::size_t next = (tail + 1) % slots_.size();
    if (next == head_.load(std::memory_order_acquire)) {
      overflows_.fetch_add(1, std::memory_order_relaxed);
      return false;
    }
    slots_[tail] = std::move(entry);
    tail_.store(next, std::memory_order_release);
    return true;
  }

  std::optional<BitVector> pop() override {
    const std::size_t head = head_.load(std::memory_order_relaxed);
    if (head == tail_.load(std::memory_order_acquire)) return std::nullopt;
    BitVector v = std::move(slots_[head]);
    head_.store((head + 1) % slots_.size(), std::memory_order_release);
    return v;
  }

  bool empty() const override {
    return head_.load(std::memory_order_acquire) == tail_.load(std::memory_order_acquire);
  }
  std::size_t size() const override {
    const std::size_t h = head_.load(std::memory_order_acquire);
    const std::size_t t = tail_.load(std::memory_order_acquire);
    return (t + slots_.size() - h) % slots_.size();
  }
  std::size_t capacity() const override { return depth_; }
  std::uint64_t overflows() const override { return overflows_.load(std::memory_order_relaxed); }

 private:
  std::vector<BitVector> slots_;
  std::size_t depth_;
  std::atomic<std::size_t> head_{0};
  std::atomic<std::size_t> tail_{0};
  std::atomic<std::uint64_t> overflows_{0};
};

}  // namespace streamhw

#endif
