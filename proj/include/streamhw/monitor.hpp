#ifndef STREAMHW_MONITOR_HPP
#define STREAMHW_MONITOR_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/hlc.hpp"
#include "streamhw/llc.hpp"
#include "streamhw/oracle.hpp"
#include "streamhw/trace.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace streamhw {

struct MonitorConfig {
  Mode mode = Mode::Offline;
  std::uint64_t xi_ns = 10;
  std::uint32_t prescale = 4;
  std::size_t queue_depth = 64;
  std::uint32_t expr_latency = 0;
  std::uint64_t event_spacing = 8;          // offline: hclk cycles between offers
  std::optional<std::size_t> buffer_size;   // overrides the analyzed size
  bool threads = false;                     // HLC and LLC on separate threads
  bool instrument = false;                  // keep per-cycle LLC records
  bool wall_clock = false;                  // online: pace ticks with the real clock
  /// Called on the LLC's context after every evaluated entry.
  std::function<void(const Llc&, std::uint64_t ts)> observe;
};

struct PushRecord {
  std::uint64_t tick = 0;
  EntryKind kind = EntryKind::Event;
  std::uint64_t ts = 0;
};

struct MonitorRun {
  std::vector<OracleInstant> instants;  // one per evaluated queue entry
  HlcStats hlc;
  LlcStats llc;
  std::uint64_t sclk_ticks = 0;
  std::uint64_t queue_overflows = 0;
  std::size_t buffer_size = 0;
  std::vector<PushRecord> pushes;
  std::vector<CycleRecord> cycles;  // only with `instrument`
};

/// Runs the HLC, queue and LLC models over a trace.
MonitorRun run_monitor(const AnalyzedSpec& spec, const Trace& trace, const MonitorConfig& config);

/// Reference evaluation of the same trace; online timestamps follow the
/// latch protocol of the HLC.
std::vector<OracleInstant> run_reference(const AnalyzedSpec& spec, const Trace& trace, const MonitorConfig& config);

/// `ts=<seconds> trigger=<index> "<message>"`, one line per firing.
std::string format_trigger_log(const AnalyzedSpec& spec, const std::vector<OracleInstant>& instants);
/// `ts=<seconds> <name>=<value>` for every value of one output.
std::string format_dump(const AnalyzedSpec& spec, const std::vector<OracleInstant>& instants, int output);
std::string format_stats(const MonitorRun& run);
std::string format_instrumentation(const AnalyzedSpec& spec, const MonitorRun& run);

}  // namespace streamhw

#endif
