#include "streamhw/monitor.hpp"

#include <atomic>
#include <chrono>
#include <limits>
#include <sstream>
#include <thread>

namespace streamhw {

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

class Collector {
 public:
  explicit Collector(const AnalyzedSpec& a) : n_out_(static_cast<std::size_t>(a.n_out)) { reset(); }

  void attach(Llc& llc, MonitorRun& run, const MonitorConfig& cfg) {
    llc.on_value = [this](int j, std::uint64_t, const Value& v) { current_.outputs[static_cast<std::size_t>(j)] = v; };
    llc.on_entry_done = [this, &run, &llc, &cfg](std::uint64_t ts, const std::vector<bool>& trig) {
      current_.ts = ts;
      current_.trig = trig;
      run.instants.push_back(std::move(current_));
      reset();
      if (cfg.observe) cfg.observe(llc, ts);
    };
    if (cfg.instrument) llc.on_cycle = [&run](const CycleRecord& r) { run.cycles.push_back(r); };
  }

 private:
  void reset() {
    current_ = OracleInstant{};
    current_.outputs.assign(n_out_, std::nullopt);
  }

  std::size_t n_out_;
  OracleInstant current_;
};

class Driver {
 public:
  Driver(const AnalyzedSpec& a, const Trace& trace, const MonitorConfig& cfg, QueuePort& queue, MonitorRun& run)
      : a_(a), trace_(trace), cfg_(cfg), queue_(queue), run_(run),
        hlc_(HlcConfig::from(a, cfg.mode, cfg.xi_ns, cfg.prescale, run.buffer_size), queue) {
    for (const auto& d : a.deadlines) offsets_.push_back(d.offset_ns);
    hlc_.on_push = [this](std::uint64_t tick, EntryKind kind, const QueueEntry& e) {
      run_.pushes.push_back({tick, kind, e.ts});
    };
    if (cfg_.mode == Mode::Online && trace_.events.empty()) hlc_.set_horizon(0);
  }

  /// Offer and clock the HLC for one tick. Returns false once the HLC has
  /// nothing left to do.
  bool step() {
    const std::uint64_t t = hlc_.tick();
    if (next_ < trace_.events.size()) {
      if (cfg_.mode == Mode::Offline)
        offer_offline(t);
      else if (trace_.ticks[next_] <= t)
        offer_online();
    }
    hlc_.step_sclk();
    if (cfg_.mode == Mode::Online && next_ == trace_.events.size() && !horizon_set_ && !hlc_.avail()) {
      hlc_.set_horizon(hlc_.reg_its());
      horizon_set_ = true;
    }
    return !finished();
  }

  bool finished() const {
    if (next_ < trace_.events.size() || !hlc_.idle()) return false;
    return cfg_.mode == Mode::Offline || !hlc_.next_deadline_tick();
  }

  /// Online: the first tick at which the HLC has work again, when idle.
  std::uint64_t next_work_tick() const {
    if (cfg_.mode != Mode::Online || !hlc_.idle() || hlc_.tick() == 0) return hlc_.tick();
    std::uint64_t at = next_ < trace_.ticks.size() ? trace_.ticks[next_] : kNever;
    if (auto d = hlc_.next_deadline_tick()) at = std::min(at, *d);
    return at == kNever ? hlc_.tick() : std::max(at, hlc_.tick());
  }

  void skip_to(std::uint64_t tick) { hlc_.skip_to(tick); }

  Hlc& hlc() { return hlc_; }

 private:
  void offer_offline(std::uint64_t t) {
    const std::uint64_t p = cfg_.prescale;
    if (t % p != 0) return;
    if (last_accept_ && t - *last_accept_ < cfg_.event_spacing * p) return;
    const RawEvent& ev = trace_.events[next_];
    const HlcStats& s = hlc_.stats();
    const std::uint64_t outstanding = (s.accepted - s.events_pushed) + (s.deadlines_fired - s.deadlines_pushed);
    const std::uint64_t dld =
        prev_ts_ ? dld_count(offsets_, a_.hyper_period_ns, anchor_, *prev_ts_, *ev.ts) : 0;
    const bool room = queue_.size() + outstanding + 1 + dld <= queue_.capacity();
    if (!room && !(queue_.empty() && outstanding == 0)) return;
    if (hlc_.offer_event(ev)) {
      if (!prev_ts_) anchor_ = *ev.ts;
      prev_ts_ = ev.ts;
      last_accept_ = t;
      ++next_;
    }
  }

  void offer_online() {
    RawEvent ev = trace_.events[next_];
    ev.ts.reset();
    if (hlc_.offer_event(ev)) ++next_;
  }

  const AnalyzedSpec& a_;
  const Trace& trace_;
  const MonitorConfig& cfg_;
  QueuePort& queue_;
  MonitorRun& run_;
  Hlc hlc_;
  std::vector<std::uint64_t> offsets_;

  std::size_t next_ = 0;
  std::optional<std::uint64_t> last_accept_;
  std::optional<std::uint64_t> prev_ts_;
  std::uint64_t anchor_ = 0;
  bool horizon_set_ = false;
};

std::size_t buffer_size_for(const AnalyzedSpec& a, const MonitorConfig& cfg) {
  if (cfg.buffer_size) return *cfg.buffer_size;
  if (a.buffer_size) return static_cast<std::size_t>(*a.buffer_size);
  return cfg.queue_depth;
}

void pace(const MonitorConfig& cfg, std::chrono::steady_clock::time_point origin, std::uint64_t tick) {
  if (!cfg.wall_clock) return;
  std::this_thread::sleep_until(origin + std::chrono::nanoseconds(tick * cfg.xi_ns));
}

void run_lockstep(const AnalyzedSpec& a, const Trace& trace, const MonitorConfig& cfg, MonitorRun& run) {
  EventQueue queue(cfg.queue_depth);
  Driver driver(a, trace, cfg, queue, run);
  Llc llc(a, LlcConfig{cfg.mode, cfg.expr_latency}, queue);
  Collector collector(a);
  collector.attach(llc, run, cfg);
  const auto origin = std::chrono::steady_clock::now();

  for (;;) {
    if (queue.empty() && llc.idle()) {
      if (driver.finished()) break;
      const std::uint64_t at = driver.next_work_tick();
      if (at > driver.hlc().tick()) driver.skip_to(at);
    }
    pace(cfg, origin, driver.hlc().tick());
    driver.step();
    llc.step();
  }
  run.hlc = driver.hlc().stats();
  run.llc = llc.stats();
  run.sclk_ticks = driver.hlc().tick();
  run.queue_overflows = queue.overflows();
}

void run_threaded(const AnalyzedSpec& a, const Trace& trace, const MonitorConfig& cfg, MonitorRun& run) {
  SpscQueue queue(cfg.queue_depth);
  Driver driver(a, trace, cfg, queue, run);
  Llc llc(a, LlcConfig{cfg.mode, cfg.expr_latency}, queue);
  Collector collector(a);
  collector.attach(llc, run, cfg);
  std::atomic<bool> producer_done{false};

  std::thread consumer([&] {
    for (;;) {
      if (queue.empty() && llc.idle()) {
        if (producer_done.load(std::memory_order_acquire) && queue.empty()) break;
        std::this_thread::yield();
        continue;
      }
      llc.step();
    }
  });
  const auto origin = std::chrono::steady_clock::now();
  while (!driver.finished()) {
    const std::uint64_t at = driver.next_work_tick();
    if (at > driver.hlc().tick()) driver.skip_to(at);
    pace(cfg, origin, driver.hlc().tick());
    driver.step();
  }
  producer_done.store(true, std::memory_order_release);
  consumer.join();

  run.hlc = driver.hlc().stats();
  run.llc = llc.stats();
  run.sclk_ticks = driver.hlc().tick();
  run.queue_overflows = queue.overflows();
}

}  // namespace

MonitorRun run_monitor(const AnalyzedSpec& spec, const Trace& trace, const MonitorConfig& config) {
  if (trace.mode != config.mode) throw std::invalid_argument("trace was parsed for a different mode");
  MonitorRun run;
  run.buffer_size = buffer_size_for(spec, config);
  if (config.threads)
    run_threaded(spec, trace, config, run);
  else
    run_lockstep(spec, trace, config, run);
  return run;
}

std::vector<OracleInstant> run_reference(const AnalyzedSpec& spec, const Trace& trace, const MonitorConfig& config) {
  if (config.mode == Mode::Offline) return run_oracle(spec, trace.events, Mode::Offline);
  return run_oracle(spec, stamp_online(trace, config.xi_ns, config.prescale), Mode::Online);
}

std::string format_trigger_log(const AnalyzedSpec& spec, const std::vector<OracleInstant>& instants) {
  std::ostringstream out;
  for (const auto& in : instants) {
    for (std::size_t k = 0; k < in.trig.size(); ++k) {
      if (!in.trig[k]) continue;
      const TriggerDecl& t = spec.spec.triggers[k];
      const std::string msg =
          t.message ? *t.message : print_expr(*spec.output(spec.trigger_outputs[k]).expr);
      out << "ts=" << format_seconds(in.ts) << " trigger=" << k << " \"" << msg << "\"\n";
    }
  }
  return out.str();
}

std::string format_dump(const AnalyzedSpec& spec, const std::vector<OracleInstant>& instants, int output) {
  std::ostringstream out;
  const std::string& name = spec.output(output).name;
  for (const auto& in : instants) {
    const auto& v = in.outputs[static_cast<std::size_t>(output)];
    if (v) out << "ts=" << format_seconds(in.ts) << ' ' << name << '=' << v->to_string() << '\n';
  }
  return out.str();
}

std::string format_stats(const MonitorRun& run) {
  std::ostringstream out;
  const auto& h = run.hlc;
  out << "events offered=" << h.offered << " accepted=" << h.accepted << " rejected=" << h.rejected << '\n';
  out << "entries events=" << h.events_pushed << " deadlines=" << h.deadlines_pushed << '\n';
  out << "buffer size=" << run.buffer_size << " high_water=" << h.buffer_high_water
      << " overflows=" << h.buffer_overflows << '\n';
  out << "queue overflows=" << run.queue_overflows << '\n';
  out << "cycles sclk=" << run.sclk_ticks << " hclk=" << h.hclk_cycles << " llc=" << run.llc.cycles
      << " llc_busy=" << run.llc.busy_cycles << '\n';
  out << "cycles_per_entry=";
  if (run.llc.entries == 0) {
    out << "0";
  } else {
    const std::uint64_t whole = run.llc.busy_cycles / run.llc.entries;
    const std::uint64_t hundredths = run.llc.busy_cycles % run.llc.entries * 100 / run.llc.entries;
    out << whole << '.' << (hundredths < 10 ? "0" : "") << hundredths;
  }
  out << '\n';
  return out.str();
}

std::string format_instrumentation(const AnalyzedSpec& spec, const MonitorRun& run) {
  std::ostringstream out;
  for (const auto& p : run.pushes)
    out << "push tick=" << p.tick << " kind=" << (p.kind == EntryKind::Event ? "event" : "deadline")
        << " ts=" << format_seconds(p.ts) << '\n';
  for (const auto& c : run.cycles) {
    out << "cycle=" << c.cycle << " llq=" << llq_state_name(c.llq) << " ec=" << c.ec;
    if (!c.evaluated.empty()) {
      out << " evaluated=";
      for (std::size_t i = 0; i < c.evaluated.size(); ++i)
        out << (i ? "," : "") << spec.output(c.evaluated[i]).name;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace streamhw
