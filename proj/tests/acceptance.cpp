// Acceptance run: one PASS/FAIL line per criterion, details indented below.

#include "random_spec.hpp"

#include "streamhw/analyzer.hpp"
#include "streamhw/hdl.hpp"
#include "streamhw/hlc.hpp"
#include "streamhw/monitor.hpp"
#include "streamhw/window.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace streamhw;
using namespace streamhw::testing;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    pass = false;
    notes.push_back("FAIL " + why);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cpp_int big(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  cpp_int r = static_cast<std::uint64_t>(m >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(m);
  return neg ? cpp_int(-r) : r;
}

std::string show(const Partial& p) {
  if (p.empty) return "e";
  std::ostringstream s;
  s << "(" << static_cast<long long>(p.acc) << "," << p.count << ")";
  return s.str();
}

// ---------------------------------------------------------------------------
// 1. Sliding average golden table

Outcome criterion1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const AnalyzedSpec a = analyze_source(read_file(corpus_path("sliding_avg.lola")));
  const Trace trace = parse_trace(read_file(corpus_path("sliding_avg.csv")), a, Mode::Offline);

  std::vector<std::pair<std::uint64_t, std::vector<Partial>>> states;
  std::vector<Partial> reduced;
  MonitorConfig cfg;
  cfg.observe = [&](const Llc& llc, std::uint64_t ts) {
    const WindowState& w = llc.windows().at(0);
    std::vector<Partial> b;
    for (std::size_t k = 0; k < w.size(); ++k) b.push_back(w.bucket(k));
    states.emplace_back(ts, b);
    reduced.push_back(w.reduced());
  };
  const MonitorRun run = run_monitor(a, trace, cfg);

  auto P = [](__int128 sum, std::uint64_t count) {
    Partial p;
    p.empty = false;
    p.acc = sum;
    p.count = count;
    return p;
  };
  const Partial e{};
  const Partial b1 = P(201, 2);
  struct Row {
    std::uint64_t ms;
    std::vector<Partial> buckets;
    std::optional<std::int64_t> avg;
  };
  // Rows of the worked example; velocities scaled by ten.
  const std::vector<Row> expect = {
      {0, {e, e, e}, {}},           {500, {e, e, P(100, 1)}, {}}, {600, {e, e, b1}, {}},
      {1000, {e, e, b1}, 80},       {2000, {e, b1, e}, 80},       {2200, {b1, e, P(99, 1)}, {}},
      {3000, {b1, e, P(99, 1)}, 100}, {3000, {b1, e, P(99, 1)}, {}},
  };
  if (states.size() != expect.size()) {
    out.fail("expected " + std::to_string(expect.size()) + " evaluated entries, got " + std::to_string(states.size()));
    return out;
  }
  for (std::size_t r = 0; r < expect.size(); ++r) {
    const auto& [ts, got] = states[r];
    const Row& want = expect[r];
    std::string row = format_seconds(ts) + ":";
    for (const auto& p : got) row += " " + show(p);
    if (ts != want.ms * 1'000'000) out.fail("row " + std::to_string(r) + " at " + format_seconds(ts));
    for (std::size_t k = 0; k < 3; ++k) {
      const bool same = got[k].empty == want.buckets[k].empty &&
                        (got[k].empty || (got[k].acc == want.buckets[k].acc && got[k].count == want.buckets[k].count));
      if (!same) out.fail("bucket p" + std::to_string(k + 1) + " at " + format_seconds(ts) + " is " + show(got[k]));
    }
    const auto& v = run.instants[r].outputs[0];
    if (want.avg) {
      row += "  avg_velo=" + (v ? v->to_string() : std::string("none"));
      if (!v || v->as_int() != *want.avg) out.fail("avg_velo at " + format_seconds(ts));
      if (*want.avg == 100) {
        // Exact meaning of the aggregate, not just the truncated value.
        __int128 num = 0, den = 1;
        if (!exact_value(Aggregation::Avg, reduced[r], num, den) || cpp_rational(big(num), big(den)) != cpp_rational(100))
          out.fail("exact average at 3.0 differs from 100");
      }
    } else if (v) {
      out.fail("unexpected avg_velo at " + format_seconds(ts));
    }
    out.note(row);
  }
  const double dt = seconds_since(t0);
  if (dt >= 1.0) out.fail("runtime " + std::to_string(dt) + " s");
  out.note("runtime " + std::to_string(dt) + " s");
  return out;
}

// ---------------------------------------------------------------------------
// 2. Buffer bound over (delta_min, dld_bound)

struct BufferResult {
  std::uint64_t overflows = 0;
  std::uint64_t high_water = 0;
};

// Offline HLC fed with events whose timestamps are `gaps` deadline periods
// apart, offered `spacing[i]` hclk cycles after the previous acceptance.
BufferResult drive_buffer(std::size_t buffer, const std::vector<std::uint64_t>& ts,
                          const std::vector<std::uint64_t>& spacing) {
  constexpr std::uint64_t kPeriod = 1000;
  HlcConfig c;
  c.mode = Mode::Offline;
  c.prescale = 4;
  c.buffer_size = buffer;
  c.layout.input_bits = {8};
  c.layout.n_out = 1;
  c.dep = {{false}};
  c.event_outputs = {false};
  c.dltarget = {{true}};
  c.offsets_ns = {kPeriod};
  c.hyper_period_ns = kPeriod;
  EventQueue q(1 << 20);
  Hlc hlc(c, q);
  std::size_t next = 0;
  std::uint64_t since = 0;
  RawEvent ev{{true}, {1}, 0};
  while (next < ts.size() || !hlc.idle()) {
    if (hlc.tick() % c.prescale == 0) {
      if (next < ts.size() && (next == 0 || since >= spacing[next])) {
        ev.ts = ts[next];
        if (!hlc.offer_event(ev)) throw std::logic_error("latch busy");
        ++next;
        since = 0;
      }
      ++since;
    }
    hlc.step_sclk();
    while (q.pop()) {
    }
  }
  return {hlc.stats().buffer_overflows, hlc.stats().buffer_high_water};
}

Outcome criterion2() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::uint64_t kPeriod = 1000;
  std::mt19937_64 rng(2);
  int configs = 0, crafted_overflow = 0;
  std::uint64_t traces = 0;
  std::vector<std::string> no_overflow;
  for (std::uint64_t delta = 2; delta <= 10; ++delta) {
    for (std::uint64_t bound = 0; bound + 2 <= delta; ++bound) {
      ++configs;
      const std::size_t size = static_cast<std::size_t>(compute_buffer_size(bound, delta));
      std::uint64_t high = 0;
      for (int t = 0; t < 1000; ++t, ++traces) {
        const int n = std::uniform_int_distribution<int>(2, 24)(rng);
        std::vector<std::uint64_t> ts{std::uniform_int_distribution<std::uint64_t>(0, 3 * kPeriod)(rng)};
        std::vector<std::uint64_t> spacing{0};
        for (int i = 1; i < n; ++i) {
          const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, bound)(rng);
          std::uint64_t next = ts.back() + k * kPeriod + std::uniform_int_distribution<std::uint64_t>(0, kPeriod - 1)(rng);
          if (dld_count({kPeriod}, kPeriod, ts.front(), ts.back(), next) > bound) next = ts.back() + k * kPeriod;
          ts.push_back(next);
          spacing.push_back(delta + std::uniform_int_distribution<std::uint64_t>(0, 3)(rng));
        }
        const BufferResult r = drive_buffer(size, ts, spacing);
        high = std::max(high, r.high_water);
        if (r.overflows > 0) {
          out.fail("overflow with buffer " + std::to_string(size) + " at delta_min=" + std::to_string(delta) +
                   " dld_bound=" + std::to_string(bound));
          break;
        }
      }
      // Worst case: every event brings dld_bound deadlines at minimal spacing.
      std::vector<std::uint64_t> ts{0}, spacing{0};
      for (int i = 1; i < 40; ++i) {
        ts.push_back(ts.back() + bound * kPeriod);
        spacing.push_back(delta);
      }
      const BufferResult crafted = drive_buffer(size - 1, ts, spacing);
      if (crafted.overflows > 0)
        ++crafted_overflow;
      else
        no_overflow.push_back("(" + std::to_string(delta) + "," + std::to_string(bound) + ")");
      (void)high;
    }
  }
  out.note(std::to_string(configs) + " configurations, " + std::to_string(traces) +
           " random traces, buffer from compute_buffer_size: " + (out.pass ? "no overflow" : "overflow seen"));
  out.note("crafted worst-case trace overflows the buffer at size-1 in " + std::to_string(crafted_overflow) + "/" +
           std::to_string(configs) + " configurations");
  if (crafted_overflow != configs) {
    std::string list;
    for (const auto& s : no_overflow) list += " " + s;
    out.fail("no overflow at size-1 for (delta_min,dld_bound):" + list);
  }
  const double dt = seconds_since(t0);
  if (dt >= 60.0) out.fail("runtime " + std::to_string(dt) + " s");
  out.note("runtime " + std::to_string(dt) + " s");
  return out;
}

// ---------------------------------------------------------------------------
// 3. Bucketed windows against the full-history grid

std::optional<cpp_rational> grid_oracle(Aggregation agg, const std::vector<std::pair<std::uint64_t, __int128>>& pts) {
  if (pts.empty()) {
    if (agg == Aggregation::Count || agg == Aggregation::Sum || agg == Aggregation::Integral) return cpp_rational(0);
    return std::nullopt;
  }
  cpp_int acc = 0;
  switch (agg) {
    case Aggregation::Count:
      return cpp_rational(static_cast<long long>(pts.size()));
    case Aggregation::Sum:
      for (const auto& p : pts) acc += big(p.second);
      return cpp_rational(acc);
    case Aggregation::Avg:
      for (const auto& p : pts) acc += big(p.second);
      return cpp_rational(acc, cpp_int(static_cast<long long>(pts.size())));
    case Aggregation::Min:
    case Aggregation::Max: {
      __int128 m = pts.front().second;
      for (const auto& p : pts) m = agg == Aggregation::Min ? std::min(m, p.second) : std::max(m, p.second);
      return cpp_rational(big(m));
    }
    case Aggregation::Integral: {
      cpp_rational area = 0;
      for (std::size_t i = 1; i < pts.size(); ++i)
        area += cpp_rational(big(pts[i - 1].second + pts[i].second) * cpp_int(pts[i].first - pts[i - 1].first), 2);
      return area / cpp_rational(cpp_int(kNanosPerSecond));
    }
  }
  return std::nullopt;
}

Outcome criterion3() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3);
  const Aggregation aggs[] = {Aggregation::Count, Aggregation::Sum, Aggregation::Min,
                              Aggregation::Max,   Aggregation::Avg, Aggregation::Integral};
  const ValueType types[] = {ValueType::int_type(8), ValueType::int_type(16), ValueType::int_type(32),
                             ValueType::uint_type(8), ValueType::uint_type(16)};
  const std::uint64_t periods[] = {250'000'000, 500'000'000, 1'000'000'000, 333'333'333};
  std::uint64_t evaluations = 0;
  for (Aggregation agg : aggs) {
    int bad = 0;
    for (int seq = 0; seq < 500; ++seq) {
      WindowPlan plan;
      plan.agg = agg;
      plan.buckets = std::uniform_int_distribution<int>(1, 6)(rng);
      plan.bucket_period_ns = periods[std::uniform_int_distribution<int>(0, 3)(rng)];
      plan.duration_ns = plan.bucket_period_ns * static_cast<std::uint64_t>(plan.buckets);
      plan.target_type = types[std::uniform_int_distribution<int>(0, 4)(rng)];
      plan.result_type = agg == Aggregation::Count      ? ValueType::uint_type(64)
                         : agg == Aggregation::Integral ? ValueType::int_type(64)
                                                        : plan.target_type;
      const std::uint64_t start = std::uniform_int_distribution<std::uint64_t>(0, 2'000'000'000)(rng);
      WindowState w(plan, start);
      std::vector<std::pair<std::uint64_t, __int128>> history;
      const int n_ev = std::uniform_int_distribution<int>(0, 60)(rng);
      std::vector<std::uint64_t> ts;
      std::uint64_t t = start;
      for (int i = 0; i < n_ev; ++i) {
        const int r = std::uniform_int_distribution<int>(0, 9)(rng);
        if (r == 0)
          t += 0;
        else if (r == 1)
          t = start + ((t - start) / plan.bucket_period_ns + 1) * plan.bucket_period_ns;
        else
          t += std::uniform_int_distribution<std::uint64_t>(1, plan.bucket_period_ns * 3 / 2)(rng);
        ts.push_back(t);
      }
      const std::uint64_t end = (ts.empty() ? start : ts.back()) + plan.duration_ns;
      std::size_t next = 0;
      auto bucket_of = [&](std::uint64_t x) {
        return x <= start ? std::uint64_t{1} : std::max<std::uint64_t>(1, (x - start + plan.bucket_period_ns - 1) / plan.bucket_period_ns);
      };
      for (std::uint64_t m = 1; start + m * plan.bucket_period_ns <= end; ++m) {
        const std::uint64_t now = start + m * plan.bucket_period_ns;
        for (; next < ts.size() && ts[next] < now; ++next) {
          w.evict(ts[next]);
          const std::int64_t lo = plan.target_type.is_signed() ? -(std::int64_t{1} << (plan.target_type.width - 1)) : 0;
          const std::int64_t hi = plan.target_type.is_signed() ? (std::int64_t{1} << (plan.target_type.width - 1)) - 1
                                                               : (std::int64_t{1} << plan.target_type.width) - 1;
          const Value v = Value::of_int(plan.target_type, std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
          w.add(ts[next], v);
          history.emplace_back(ts[next], v.as_int());
        }
        w.evict(now);
        ++evaluations;
        const std::uint64_t k = bucket_of(now);
        const std::uint64_t first = k >= static_cast<std::uint64_t>(plan.buckets) ? k - plan.buckets + 1 : 1;
        std::vector<std::pair<std::uint64_t, __int128>> inside;
        for (const auto& p : history)
          if (bucket_of(p.first) >= first && bucket_of(p.first) <= k) inside.push_back(p);
        const auto want = grid_oracle(agg, inside);
        const Partial got = w.reduced();
        __int128 num = 0, den = 1;
        const bool has = exact_value(agg, got, num, den);
        bool ok = has == want.has_value();
        if (ok && has) ok = cpp_rational(big(num), big(den)) == *want;
        // Finalized engine value: truncation toward zero, then wrap to the result type.
        const auto fin = finalize(agg, got, plan.result_type);
        if (ok && want) {
          const cpp_int q = numerator(*want) / denominator(*want);
          const __int128 q128 = static_cast<__int128>(static_cast<long long>(q % (cpp_int(1) << 62)));
          ok = fin.has_value() && (q > cpp_int("100000000000000000") || q < cpp_int("-100000000000000000") ||
                                   *fin == Value::of_int(plan.result_type, q128));
        }
        if (!ok && ++bad <= 3)
          out.fail(std::string(aggregation_name(agg)) + " sequence " + std::to_string(seq) + " at " + format_seconds(now));
      }
    }
    out.note(std::string(aggregation_name(agg)) + ": 500 sequences, " + (bad ? std::to_string(bad) + " mismatches" : "exact"));
  }
  out.note(std::to_string(evaluations) + " evaluation instants");
  const double dt = seconds_since(t0);
  if (dt >= 30.0) out.fail("runtime " + std::to_string(dt) + " s");
  out.note("runtime " + std::to_string(dt) + " s");
  return out;
}

// ---------------------------------------------------------------------------
// 4 and 5. Pipeline against the reference evaluator

struct DiffStats {
  int specs = 0;
  int traces = 0;
  std::uint64_t events = 0;
  std::uint64_t triggers = 0;
  int log_mismatch = 0;
  int value_mismatch = 0;
  int order_violations = 0;
  std::uint64_t deadline_pairs = 0;
  int overflows = 0;
  std::vector<std::string> first;
};

bool same_values(const std::vector<OracleInstant>& a, const std::vector<OracleInstant>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].ts != b[i].ts || a[i].outputs != b[i].outputs || a[i].trig != b[i].trig) return false;
  return true;
}

void differential(const std::string& label, const AnalyzedSpec& a, const std::string& trace_text, Mode mode,
                  DiffStats& st) {
  const Trace trace = parse_trace(trace_text, a, mode);
  MonitorConfig cfg;
  cfg.mode = mode;
  const MonitorRun run = run_monitor(a, trace, cfg);
  const auto ref = run_reference(a, trace, cfg);
  const std::string got = format_trigger_log(a, run.instants);
  const std::string want = format_trigger_log(a, ref);
  ++st.traces;
  st.events += trace.events.size();
  st.triggers += static_cast<std::uint64_t>(std::count(want.begin(), want.end(), '\n'));
  if (run.hlc.buffer_overflows || run.queue_overflows) ++st.overflows;
  if (got != want) {
    ++st.log_mismatch;
    if (st.first.size() < 3) st.first.push_back(label + ": trigger logs differ");
  } else if (!same_values(run.instants, ref)) {
    ++st.value_mismatch;
    if (st.first.size() < 3) st.first.push_back(label + ": stream values differ");
  }
  if (mode == Mode::Offline) {
    // Every deadline due at or before an event's timestamp precedes it.
    std::optional<std::uint64_t> latest_event;
    for (const auto& p : run.pushes) {
      if (p.kind == EntryKind::Event) {
        latest_event = latest_event ? std::max(*latest_event, p.ts) : p.ts;
      } else if (latest_event) {
        ++st.deadline_pairs;
        if (p.ts <= *latest_event) ++st.order_violations;
      }
    }
  }
}

DiffStats g_diff;

Outcome criterion4() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4);
  std::vector<std::pair<std::string, AnalyzedSpec>> specs;
  specs.emplace_back("drone", analyze_source(read_file(corpus_path("drone.lola"))));
  specs.emplace_back("network", analyze_source(read_file(corpus_path("network.lola"))));
  int attempts = 0;
  for (int i = 0; i < 50; ++i) {
    GeneratedSpec g = random_spec(rng);
    attempts += g.attempts;
    specs.emplace_back("random" + std::to_string(i), std::move(g.analyzed));
  }
  DiffStats& st = g_diff;
  for (const auto& [name, a] : specs) {
    ++st.specs;
    for (int t = 0; t < 20; ++t)
      differential(name + "/offline" + std::to_string(t), a, random_trace(rng, a, Mode::Offline, 50), Mode::Offline, st);
    for (int t = 0; t < 4; ++t)
      differential(name + "/online" + std::to_string(t), a, random_trace(rng, a, Mode::Online, 50), Mode::Online, st);
  }
  out.note(std::to_string(st.specs) + " specs (" + std::to_string(attempts) + " generator candidates for 50 random), " +
           std::to_string(st.traces) + " traces, " + std::to_string(st.events) + " events, " +
           std::to_string(st.triggers) + " trigger lines");
  if (st.log_mismatch) out.fail(std::to_string(st.log_mismatch) + " trigger log mismatches");
  if (st.value_mismatch) out.fail(std::to_string(st.value_mismatch) + " traces with equal logs but different values");
  if (st.overflows) out.fail(std::to_string(st.overflows) + " runs dropped entries");
  for (const auto& f : st.first) out.note(f);
  const double dt = seconds_since(t0);
  if (dt >= 120.0) out.fail("runtime " + std::to_string(dt) + " s");
  out.note("runtime " + std::to_string(dt) + " s");
  return out;
}

Outcome criterion5() {
  Outcome out;
  const DiffStats& st = g_diff;
  if (st.traces == 0) {
    out.fail("no differential runs recorded");
    return out;
  }
  out.note(std::to_string(st.deadline_pairs) + " deadline entries checked against earlier events");
  if (st.order_violations) out.fail(std::to_string(st.order_violations) + " deadlines pushed after a later event");
  return out;
}

// ---------------------------------------------------------------------------
// 6. Parallel versus chained evaluation

std::string command_trace(int events) {
  std::mt19937_64 rng(6);
  std::ostringstream s;
  s << "cmd,height,x,y,time\n";
  for (int i = 0; i < events; ++i)
    s << std::uniform_int_distribution<int>(1, 512)(rng) << ',' << std::uniform_int_distribution<int>(200, 500)(rng) << ','
      << std::uniform_int_distribution<int>(600, 800)(rng) << ',' << std::uniform_int_distribution<int>(0, 400)(rng) << ','
      << format_seconds(static_cast<std::uint64_t>(i) * 1'000'000) << '\n';
  return s.str();
}

Outcome criterion6() {
  Outcome out;
  const AnalyzedSpec par = analyze_source(read_file(corpus_path("parallel512.lola")));
  const AnalyzedSpec chain = analyze_source(read_file(corpus_path("chain512.lola")));
  if (par.n_out != 512 || par.depth != 1) out.fail("parallel spec: n_out=" + std::to_string(par.n_out) + " layers=" + std::to_string(par.depth));
  if (chain.n_out != 512 || chain.depth != 512) out.fail("chained spec: n_out=" + std::to_string(chain.n_out) + " layers=" + std::to_string(chain.depth));
  out.note("parallel: layers=" + std::to_string(par.depth) + ", chained: layers=" + std::to_string(chain.depth));

  const std::string text = command_trace(20);
  MonitorConfig cfg;
  cfg.expr_latency = 1;
  cfg.instrument = true;
  const MonitorRun rp = run_monitor(par, parse_trace(text, par, Mode::Offline), cfg);
  const MonitorRun rc = run_monitor(chain, parse_trace(text, chain, Mode::Offline), cfg);

  int full_21 = 0;
  for (const auto& c : rp.cycles) {
    if (c.evaluated.empty()) continue;
    if (c.ec != "2.1") out.fail("parallel evaluation in state " + c.ec);
    if (c.evaluated.size() == 512) ++full_21;
  }
  if (full_21 != 20) out.fail("expected 20 entries with all 512 outputs in 2.1, got " + std::to_string(full_21));
  std::map<std::string, int> chain_states;
  for (const auto& c : rc.cycles)
    if (!c.evaluated.empty()) chain_states[c.ec] += 1;
  if (chain_states.size() != 512) out.fail("chained evaluation used " + std::to_string(chain_states.size()) + " states");

  const auto par_ref = format_trigger_log(par, run_reference(par, parse_trace(text, par, Mode::Offline), cfg));
  if (format_trigger_log(par, rp.instants) != par_ref) out.fail("parallel trigger log differs from the reference");
  out.note("expr-latency 1, 20 events: parallel " + std::to_string(rp.llc.busy_cycles) + " busy LLC cycles (" +
           std::to_string(rp.sclk_ticks) + " sclk), chained " + std::to_string(rc.llc.busy_cycles) + " (" +
           std::to_string(rc.sclk_ticks) + " sclk)");
  out.note("cycles per entry: parallel " + std::to_string(rp.llc.busy_cycles / std::max<std::uint64_t>(1, rp.llc.entries)) +
           ", chained " + std::to_string(rc.llc.busy_cycles / std::max<std::uint64_t>(1, rc.llc.entries)));
  if (!(rp.llc.busy_cycles < rc.llc.busy_cycles)) out.fail("parallel variant is not faster");
  return out;
}

// ---------------------------------------------------------------------------
// 7. Determinism

struct Snapshot {
  std::string log, stats, instrumentation;
  bool operator==(const Snapshot&) const = default;
};

Snapshot snapshot(const AnalyzedSpec& a, const Trace& t, MonitorConfig cfg) {
  cfg.instrument = true;
  const MonitorRun r = run_monitor(a, t, cfg);
  return {format_trigger_log(a, r.instants), format_stats(r), format_instrumentation(a, r)};
}

std::string hdl_text(const AnalyzedSpec& a, Mode mode) {
  const HlcConfig c = HlcConfig::from(a, mode, 10, 4, a.buffer_size ? static_cast<std::size_t>(*a.buffer_size) : 64);
  std::string all;
  for (const auto& u : emit_hdl(a, c)) all += u.name + "\n" + u.text;
  return all;
}

Outcome criterion7() {
  Outcome out;
  std::mt19937_64 rng(7);
  std::vector<std::pair<std::string, AnalyzedSpec>> specs;
  for (const char* f : {"sliding_avg.lola", "drone.lola", "network.lola", "parallel512.lola"})
    specs.emplace_back(f, analyze_source(read_file(corpus_path(f))));
  for (int i = 0; i < 3; ++i) specs.emplace_back("random" + std::to_string(i), random_spec(rng).analyzed);
  int runs = 0;
  for (const auto& [name, a] : specs) {
    for (Mode mode : {Mode::Offline, Mode::Online}) {
      const std::string text = name == "sliding_avg.lola" && mode == Mode::Offline
                                   ? read_file(corpus_path("sliding_avg.csv"))
                                   : random_trace(rng, a, mode, 40);
      const Trace t = parse_trace(text, a, mode);
      MonitorConfig cfg;
      cfg.mode = mode;
      const Snapshot s1 = snapshot(a, t, cfg);
      const Snapshot s2 = snapshot(a, t, cfg);
      if (!(s1 == s2)) out.fail(name + ": repeated runs differ");
      MonitorConfig threaded = cfg;
      threaded.threads = true;
      const MonitorRun rt = run_monitor(a, t, threaded);
      if (format_trigger_log(a, rt.instants) != s1.log) out.fail(name + ": threaded trigger log differs");
      if (hdl_text(a, mode) != hdl_text(a, mode)) out.fail(name + ": HDL text differs");
      runs += 3;
    }
  }
  out.note(std::to_string(specs.size()) + " specs x 2 modes: logs, statistics, instrumentation and HDL compared over " +
           std::to_string(runs) + " runs (threaded runs compared on trigger logs)");
  return out;
}

// ---------------------------------------------------------------------------
// 8. HDL widths

Outcome criterion8() {
  Outcome out;
  int units = 0, ports = 0;
  for (const char* f : {"sliding_avg.lola", "drone.lola", "network.lola", "parallel512.lola", "chain512.lola"}) {
    const AnalyzedSpec a = analyze_source(read_file(corpus_path(f)));
    for (Mode mode : {Mode::Offline, Mode::Online}) {
      const HlcConfig c = HlcConfig::from(a, mode, 10, 4, a.buffer_size ? static_cast<std::size_t>(*a.buffer_size) : 64);
      const auto hdl = emit_hdl(a, c, 64);
      units += static_cast<int>(hdl.size());
      ports += static_cast<int>(parse_hdl_headers(hdl).size());
      for (const auto& p : check_hdl_widths(a, c, 64, hdl)) out.fail(std::string(f) + ": " + p);
      for (const auto& p : parse_hdl_headers(hdl))
        if (p.unit == "queue" && p.name == "din" && p.width != a.s_ev) out.fail(std::string(f) + ": queue width");
    }
  }
  out.note(std::to_string(units) + " units, " + std::to_string(ports) + " widths re-parsed and compared");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sliding-average golden trace", criterion1},
      {"buffer bound property suite", criterion2},
      {"window oracle equivalence", criterion3},
      {"end-to-end differential", criterion4},
      {"offline deadline ordering", criterion5},
      {"parallelization witness", criterion6},
      {"determinism", criterion7},
      {"HDL width consistency", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << ": " << criteria[i].first << '\n';
    for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    std::cout.flush();
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
