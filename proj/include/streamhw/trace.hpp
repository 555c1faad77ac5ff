#ifndef STREAMHW_TRACE_HPP
#define STREAMHW_TRACE_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/hlc.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamhw {

class TraceError : public std::runtime_error {
 public:
  TraceError(int line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A parsed CSV trace. Offline rows carry `ts` in the events, online rows a
/// system clock tick (`ticks`) at which the event is offered.
struct Trace {
  Mode mode = Mode::Offline;
  std::vector<RawEvent> events;
  std::vector<std::uint64_t> ticks;
  std::vector<int> lines;  // source line of each row
};

/// Header: input names plus `time` (offline, decimal seconds) or `tick`
/// (online, non-decreasing). An empty cell is an absent value. A row without
/// any input value is a time-only event.
Trace parse_trace(std::string_view text, const AnalyzedSpec& spec, Mode mode);

/// Online events stamped with the time their offers are latched.
std::vector<RawEvent> stamp_online(const Trace& trace, std::uint64_t xi_ns, std::uint32_t prescale);

}  // namespace streamhw

#endif
