#ifndef STREAMHW_HLC_HPP
#define STREAMHW_HLC_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/event_queue.hpp"
#include "streamhw/queue_entry.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace streamhw {

/// One external event: per-input optional value, plus a timestamp in
/// offline mode.
struct RawEvent {
  std::vector<bool> present;
  std::vector<std::uint64_t> values;
  std::optional<std::uint64_t> ts;
};

struct HlcConfig {
  Mode mode = Mode::Offline;
  std::uint64_t xi_ns = 10;   // system clock period
  std::uint32_t prescale = 4; // sclk ticks per hclk tick; even, >= 2
  std::size_t buffer_size = 1;

  EntryLayout layout;
  std::vector<std::vector<bool>> dep;
  std::vector<bool> event_outputs;
  std::vector<std::vector<bool>> dltarget;
  std::vector<std::uint64_t> offsets_ns;
  std::uint64_t hyper_period_ns = 0;

  static HlcConfig from(const AnalyzedSpec& a, Mode mode, std::uint64_t xi_ns = 10, std::uint32_t prescale = 4,
                        std::size_t buffer_size = 1);
};

enum class EntryKind : std::uint8_t { Event, Deadline };

struct HlcStats {
  std::uint64_t offered = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t deadlines_fired = 0;
  std::uint64_t events_pushed = 0;
  std::uint64_t deadlines_pushed = 0;
  std::uint64_t buffer_high_water = 0;
  std::uint64_t buffer_overflows = 0;
  std::uint64_t queue_overflows = 0;
  std::uint64_t hclk_cycles = 0;

  std::uint64_t entries_pushed() const { return events_pushed + deadlines_pushed; }
};

/// Cycle model of the High-level Controller: external interface latch,
/// time selection, scheduler, input buffer, event delay and the queue
/// interface. Events are pushed on even qclk phases, deadlines on odd ones.
class Hlc {
 public:
  Hlc(HlcConfig config, QueuePort& queue);

  /// Latches an event if `avail` is clear. Offline events need a timestamp
  /// that does not decrease (std::invalid_argument otherwise).
  bool offer_event(const RawEvent& ev);

  /// Advances one system clock tick; returns the entries pushed.
  std::vector<QueueEntry> step_sclk();

  /// Online mode: deadlines due after `ns` are no longer fired.
  void set_horizon(std::uint64_t ns) { horizon_ = ns; }

  /// True when no event is latched, buffered or delayed and no entry waits
  /// for its qclk phase.
  bool idle() const;
  /// Online mode: the first hclk tick at which the next deadline can fire.
  std::optional<std::uint64_t> next_deadline_tick() const;
  /// Jumps the clock forward while idle (no hclk work is skipped).
  void skip_to(std::uint64_t tick);

  std::uint64_t tick() const { return tick_; }
  std::uint64_t reg_its() const { return reg_its_; }
  std::uint64_t period() const { return period_; }
  /// did register: all zero before initialization, one-hot afterwards.
  std::vector<bool> did() const;
  bool avail() const { return avail_; }
  std::size_t buffer_occupancy() const { return buffer_.size(); }
  const HlcStats& stats() const { return stats_; }
  const HlcConfig& config() const { return cfg_; }

  /// Instrumentation: called for every pushed entry.
  std::function<void(std::uint64_t tick, EntryKind kind, const QueueEntry& entry)> on_push;

 private:
  void hclk_cycle();
  QueueEntry encode_event(const RawEvent& ev, std::uint64_t ts) const;
  void push(const QueueEntry& e, EntryKind kind, std::vector<QueueEntry>& out);

  HlcConfig cfg_;
  QueuePort& queue_;
  std::uint64_t tick_ = 0;

  bool avail_ = false;
  RawEvent din_;
  std::optional<std::uint64_t> last_offer_ts_;

  std::uint64_t reg_its_ = 0;
  std::uint64_t period_ = 0;
  bool initialized_ = false;
  std::size_t did_ = 0;
  std::optional<std::uint64_t> horizon_;

  BoundedFifo<QueueEntry> buffer_;
  std::optional<QueueEntry> data_;           // EventDelay register
  std::optional<QueueEntry> deadline_out_;   // emitted on the odd phase
  HlcStats stats_;
};

}  // namespace streamhw

#endif
