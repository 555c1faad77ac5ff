#ifndef STREAMHW_LLC_HPP
#define STREAMHW_LLC_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/event_queue.hpp"
#include "streamhw/queue_entry.hpp"
#include "streamhw/window.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace streamhw {

enum class SlotTag : std::uint8_t { Empty, Pseudo, Valid };

struct Slot {
  std::uint64_t raw = 0;
  SlotTag tag = SlotTag::Empty;
};

/// Shift register of one stream: capa + 1 slots, index capa is the newest.
class StreamStore {
 public:
  StreamStore(ValueType type, int capa) : type_(type), slots_(static_cast<std::size_t>(capa) + 1) {}

  void shift_in(Slot s);
  void overwrite_newest(std::uint64_t raw);
  int capa() const { return static_cast<int>(slots_.size()) - 1; }
  const Slot& slot(int k) const { return slots_[static_cast<std::size_t>(k)]; }
  const Slot& newest() const { return slots_.back(); }
  ValueType type() const { return type_; }
  bool has_pseudo() const;

 private:
  ValueType type_;
  std::vector<Slot> slots_;
};

class EvaluationOfUnextendedDependency : public InternalError {
 public:
  using InternalError::InternalError;
};

/// Everything an expression may read during one evaluation cycle.
struct EvalContext {
  const AnalyzedSpec& spec;
  const std::vector<StreamStore>& stores;
  const std::vector<WindowState>& windows;
  const std::vector<bool>& extended;  // per stream, pseudo-extended this cycle
  std::uint64_t now;
};

Value evaluate_expression(const Expr& e, const EvalContext& ctx);

enum class LlqState : std::uint8_t { Idle, Pop, Eval };

const char* llq_state_name(LlqState s);

struct LlcConfig {
  Mode mode = Mode::Offline;
  std::uint32_t expr_latency = 0;  // extra cycles per evaluating layer
};

struct CycleRecord {
  std::uint64_t cycle = 0;
  LlqState llq = LlqState::Idle;
  std::string ec;                  // "idle", "1", "2.<x>"
  std::vector<int> evaluated;      // outputs evaluated in this cycle
};

struct LlcStats {
  std::uint64_t cycles = 0;
  std::uint64_t busy_cycles = 0;   // EvalController not idle
  std::uint64_t entries = 0;
  std::uint64_t malformed = 0;
};

/// Cycle model of the Low-level Controller.
class Llc {
 public:
  Llc(const AnalyzedSpec& spec, LlcConfig config, QueuePort& queue);

  /// One sclk tick: EvalController first, then the queue interface.
  /// Returns the trigger vector when an evaluation cycle completed.
  std::optional<std::vector<bool>> step();

  bool idle() const { return llq_ == LlqState::Idle && ec_phase_ == Phase::Idle; }
  LlqState llq_state() const { return llq_; }
  std::string ec_state() const;
  const StreamStore& store(int stream) const { return stores_[static_cast<std::size_t>(stream)]; }
  const std::vector<WindowState>& windows() const { return windows_; }
  const std::vector<bool>& trig() const { return trig_; }
  const LlcStats& stats() const { return stats_; }
  bool pseudo_free() const;

  std::function<void(const CycleRecord&)> on_cycle;
  std::function<void(int output, std::uint64_t ts, const Value& v)> on_value;
  std::function<void(std::uint64_t ts, const std::vector<bool>& trig)> on_entry_done;

 private:
  enum class Phase : std::uint8_t { Idle, One, Two };

  void run_phase_one();
  std::uint64_t run_layer(std::size_t layer, std::vector<int>& evaluated);
  void finish_entry();

  const AnalyzedSpec& spec_;
  LlcConfig cfg_;
  QueuePort& queue_;
  EntryLayout layout_;

  std::vector<StreamStore> stores_;
  std::vector<WindowState> windows_;
  bool windows_ready_ = false;
  std::vector<std::vector<int>> window_readers_;   // per output: windows it reads
  std::vector<std::vector<int>> windows_on_;       // per stream: windows over it
  std::vector<bool> extended_;

  LlqState llq_ = LlqState::Idle;
  bool een_ = false;
  QueueEntry entry_;

  Phase ec_phase_ = Phase::Idle;
  std::size_t layer_ = 0;       // current layer in phase two
  std::uint64_t remaining_ = 0; // cycles left in the current state
  bool state_started_ = false;

  std::vector<bool> trig_;
  LlcStats stats_;
};

}  // namespace streamhw

#endif
