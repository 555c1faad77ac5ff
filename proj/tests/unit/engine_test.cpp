#include "random_spec.hpp"

#include "streamhw/hlc.hpp"
#include "streamhw/llc.hpp"
#include "streamhw/monitor.hpp"
#include "streamhw/oracle.hpp"
#include "streamhw/trace.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace streamhw;

namespace {

AnalyzedSpec sliding() { return analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("sliding_avg.lola"))); }

Trace sliding_trace(const AnalyzedSpec& a) {
  return parse_trace(streamhw::testing::read_file(streamhw::testing::corpus_path("sliding_avg.csv")), a, Mode::Offline);
}

}  // namespace

TEST(Hlc, SlidingAveragePushOrder) {
  const AnalyzedSpec a = sliding();
  const MonitorRun run = run_monitor(a, sliding_trace(a), MonitorConfig{});
  std::vector<std::pair<EntryKind, std::uint64_t>> got;
  for (const auto& p : run.pushes) got.emplace_back(p.kind, p.ts / 100'000'000);
  const auto E = EntryKind::Event, D = EntryKind::Deadline;
  const std::vector<std::pair<EntryKind, std::uint64_t>> want = {{E, 0}, {E, 5}, {E, 6}, {D, 10}, {D, 20}, {E, 22}, {D, 30}, {E, 30}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(run.hlc.buffer_overflows, 0u);
  EXPECT_EQ(run.queue_overflows, 0u);
}

TEST(Hlc, BusyLatchRejects) {
  const AnalyzedSpec a = sliding();
  EventQueue q(8);
  Hlc h(HlcConfig::from(a, Mode::Offline), q);
  RawEvent ev{{true}, {5}, 0};
  EXPECT_TRUE(h.offer_event(ev));
  EXPECT_FALSE(h.offer_event(ev));
  EXPECT_EQ(h.stats().rejected, 1u);
  while (!h.idle()) h.step_sclk();
  ev.ts = 1;
  EXPECT_TRUE(h.offer_event(ev));
  ev.ts = 0;
  while (!h.idle()) h.step_sclk();
  EXPECT_THROW(h.offer_event(ev), std::invalid_argument);
}

TEST(Hlc, DidRegisterIsOneHot) {
  const AnalyzedSpec a = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("network.lola")));
  EventQueue q(64);
  Hlc h(HlcConfig::from(a, Mode::Offline, 10, 4, 2), q);
  for (bool b : h.did()) EXPECT_FALSE(b);
  RawEvent ev{std::vector<bool>(6, false), std::vector<std::uint64_t>(6, 0), 0};
  h.offer_event(ev);
  for (int i = 0; i < 64; ++i) h.step_sclk();
  int ones = 0;
  for (bool b : h.did()) ones += b;
  EXPECT_EQ(ones, 1);
}

TEST(Llc, CountsMalformedEntries) {
  const AnalyzedSpec a = sliding();
  EventQueue q(4);
  Llc llc(a, LlcConfig{}, q);
  q.push(BitVector(3));
  EXPECT_THROW(
      {
        for (int i = 0; i < 4; ++i) llc.step();
      },
      MalformedEntry);
  EXPECT_EQ(llc.stats().malformed, 1u);
}

TEST(Llc, CyclesPerEntry) {
  const AnalyzedSpec a = sliding();
  MonitorConfig cfg;
  cfg.instrument = true;
  const MonitorRun run = run_monitor(a, sliding_trace(a), cfg);
  EXPECT_EQ(run.llc.entries, 8u);
  for (const auto& c : run.cycles)
    if (!c.evaluated.empty()) EXPECT_EQ(c.ec, "2.1");
}

TEST(Oracle, SlidingAverage) {
  const AnalyzedSpec a = sliding();
  const auto inst = run_oracle(a, sliding_trace(a).events, Mode::Offline);
  ASSERT_EQ(inst.size(), 8u);
  EXPECT_EQ(format_dump(a, inst, 0), "ts=1.0 avg_velo=80\nts=2.0 avg_velo=80\nts=3.0 avg_velo=100\n");
}

TEST(Oracle, LatchTicks) {
  EXPECT_EQ(online_latch_ticks({0, 1, 2, 9}, 4), (std::vector<std::uint64_t>{0, 4, 8, 12}));
  EXPECT_EQ(online_latch_ticks({5, 100}, 4), (std::vector<std::uint64_t>{8, 100}));
}

TEST(Monitor, MatchesReferenceOnRandomSpecs) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const auto g = streamhw::testing::random_spec(rng);
    for (Mode mode : {Mode::Offline, Mode::Online}) {
      const Trace t = parse_trace(streamhw::testing::random_trace(rng, g.analyzed, mode, 30), g.analyzed, mode);
      MonitorConfig cfg;
      cfg.mode = mode;
      const MonitorRun run = run_monitor(g.analyzed, t, cfg);
      EXPECT_EQ(format_trigger_log(g.analyzed, run.instants), format_trigger_log(g.analyzed, run_reference(g.analyzed, t, cfg)))
          << g.source;
    }
  }
}

TEST(Monitor, ExpressionLatencyCostsCycles) {
  const AnalyzedSpec a = sliding();
  MonitorConfig slow;
  slow.expr_latency = 3;
  const MonitorRun fast = run_monitor(a, sliding_trace(a), MonitorConfig{});
  const MonitorRun run = run_monitor(a, sliding_trace(a), slow);
  EXPECT_EQ(run.llc.busy_cycles, fast.llc.busy_cycles + 3 * run.hlc.deadlines_pushed);
  EXPECT_EQ(format_trigger_log(a, run.instants), format_trigger_log(a, fast.instants));
}

TEST(Monitor, TriggerLogFormat) {
  const AnalyzedSpec a = analyze_source("input x: Int8\ntrigger x > 3 \"big\"\ntrigger x < 0");
  const Trace t = parse_trace("x,time\n5,0.5\n-1,1.25\n", a, Mode::Offline);
  const MonitorRun run = run_monitor(a, t, MonitorConfig{});
  EXPECT_EQ(format_trigger_log(a, run.instants), "ts=0.5 trigger=0 \"big\"\nts=1.25 trigger=1 \"(x < 0)\"\n");
  const std::string stats = format_stats(run);
  EXPECT_NE(stats.find("events offered=2 accepted=2 rejected=0"), std::string::npos) << stats;
}

TEST(Monitor, OnlineDeadlinesFromClock) {
  const AnalyzedSpec a = sliding();
  // 0.25 s of sclk at 10 ns per tick.
  const Trace t = parse_trace("velo,tick\n10,0\n20,25000000\n30,350000000\n", a, Mode::Online);
  MonitorConfig cfg;
  cfg.mode = Mode::Online;
  const MonitorRun run = run_monitor(a, t, cfg);
  const auto ref = run_reference(a, t, cfg);
  EXPECT_EQ(format_dump(a, run.instants, 0), format_dump(a, ref, 0));
  EXPECT_EQ(format_dump(a, ref, 0), "ts=1.0 avg_velo=80\nts=2.0 avg_velo=80\nts=3.0 avg_velo=15\n");
}

TEST(Trace, Errors) {
  const AnalyzedSpec a = sliding();
  auto line_of = [&](const std::string& text) {
    try {
      parse_trace(text, a, Mode::Offline);
    } catch (const TraceError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("velo,time\n1,0.5\n2,0.4\n"), 3);
  EXPECT_EQ(line_of("velo,time\nabc,0.5\n"), 2);
  EXPECT_EQ(line_of("velo,time\n99999999999,0.5\n"), 2);
  EXPECT_EQ(line_of("speed,time\n1,0\n"), 1);
  EXPECT_EQ(line_of("velo,time\n1\n"), 2);
  EXPECT_NO_THROW(parse_trace("", a, Mode::Offline));
  const Trace t = parse_trace("# comment\nvelo,time\n,1.5\n", a, Mode::Offline);
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_FALSE(t.events[0].present[0]);
  EXPECT_EQ(*t.events[0].ts, 1'500'000'000u);
}

TEST(Trace, BoolCells) {
  const AnalyzedSpec a = analyze_source("input b: Bool\noutput n: Bool := !b");
  const Trace t = parse_trace("b,time\ntrue,0\n0,1\n1,2\nfalse,3\n", a, Mode::Offline);
  std::vector<std::uint64_t> v;
  for (const auto& e : t.events) v.push_back(e.values[0]);
  EXPECT_EQ(v, (std::vector<std::uint64_t>{1, 0, 1, 0}));
}
