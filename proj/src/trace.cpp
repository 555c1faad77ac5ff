#include "streamhw/trace.hpp"

#include "streamhw/oracle.hpp"

#include <charconv>
#include <optional>

namespace streamhw {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::uint64_t parse_value(std::string_view cell, ValueType t, int line, const std::string& column) {
  if (t.is_bool()) {
    if (cell == "true" || cell == "1") return 1;
    if (cell == "false" || cell == "0") return 0;
    throw TraceError(line, "column '" + column + "': expected a boolean, got '" + std::string(cell) + "'");
  }
  bool neg = false;
  std::string_view digits = cell;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    neg = digits.front() == '-';
    digits.remove_prefix(1);
  }
  auto mag = parse_u64(digits);
  if (!mag || digits.empty())
    throw TraceError(line, "column '" + column + "': expected an integer, got '" + std::string(cell) + "'");
  const __int128 v = neg ? -static_cast<__int128>(*mag) : static_cast<__int128>(*mag);
  __int128 lo = 0;
  __int128 hi = 0;
  if (t.is_signed()) {
    lo = -(static_cast<__int128>(1) << (t.width - 1));
    hi = (static_cast<__int128>(1) << (t.width - 1)) - 1;
  } else {
    hi = (static_cast<__int128>(1) << t.width) - 1;
  }
  if (v < lo || v > hi)
    throw TraceError(line, "column '" + column + "': " + std::string(cell) + " does not fit " + t.name());
  return Value::of_int(t, v).raw;
}

}  // namespace

Trace parse_trace(std::string_view text, const AnalyzedSpec& spec, Mode mode) {
  Trace trace;
  trace.mode = mode;
  const std::string clock = mode == Mode::Offline ? "time" : "tick";

  std::vector<int> column_stream;  // input index, or -1 for the clock column
  int clock_col = -1;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  std::optional<std::uint64_t> last_clock;

  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto cells = split(line);

    if (!have_header) {
      have_header = true;
      std::vector<bool> seen(static_cast<std::size_t>(spec.n_in), false);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::string name(cells[c]);
        if (name == clock) {
          if (clock_col >= 0) throw TraceError(line_no, "duplicate column '" + name + "'");
          clock_col = static_cast<int>(c);
          column_stream.push_back(-1);
          continue;
        }
        int found = -1;
        for (int i = 0; i < spec.n_in; ++i)
          if (spec.streams[static_cast<std::size_t>(i)].name == name) found = i;
        if (found < 0) throw TraceError(line_no, "column '" + name + "' is not an input stream");
        if (seen[static_cast<std::size_t>(found)]) throw TraceError(line_no, "duplicate column '" + name + "'");
        seen[static_cast<std::size_t>(found)] = true;
        column_stream.push_back(found);
      }
      if (clock_col < 0) throw TraceError(line_no, "missing '" + clock + "' column");
      continue;
    }

    if (cells.size() != column_stream.size())
      throw TraceError(line_no, "expected " + std::to_string(column_stream.size()) + " cells, got " +
                                    std::to_string(cells.size()));
    RawEvent ev;
    ev.present.assign(static_cast<std::size_t>(spec.n_in), false);
    ev.values.assign(static_cast<std::size_t>(spec.n_in), 0);
    std::uint64_t clock_value = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const int s = column_stream[c];
      if (s < 0) {
        if (cells[c].empty()) throw TraceError(line_no, "empty '" + clock + "' cell");
        std::optional<std::uint64_t> v;
        if (mode == Mode::Offline) {
          if (auto r = parse_decimal(cells[c])) v = to_nanos(*r);
        } else {
          v = parse_u64(cells[c]);
        }
        if (!v) throw TraceError(line_no, "bad " + clock + " value '" + std::string(cells[c]) + "'");
        clock_value = *v;
        continue;
      }
      if (cells[c].empty()) continue;
      const StreamInfo& info = spec.streams[static_cast<std::size_t>(s)];
      ev.values[static_cast<std::size_t>(s)] = parse_value(cells[c], info.type, line_no, info.name);
      ev.present[static_cast<std::size_t>(s)] = true;
    }
    if (last_clock && clock_value < *last_clock) throw TraceError(line_no, clock + " decreases");
    last_clock = clock_value;
    if (mode == Mode::Offline)
      ev.ts = clock_value;
    else
      trace.ticks.push_back(clock_value);
    trace.events.push_back(std::move(ev));
    trace.lines.push_back(line_no);
  }
  return trace;
}

std::vector<RawEvent> stamp_online(const Trace& trace, std::uint64_t xi_ns, std::uint32_t prescale) {
  const auto latched = online_latch_ticks(trace.ticks, prescale);
  std::vector<RawEvent> out = trace.events;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].ts = latched[i] * xi_ns;
  return out;
}

}  // namespace streamhw
