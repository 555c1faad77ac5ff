// streamhw: compile, simulate and cross-check stream monitors.

#include "streamhw/analyzer.hpp"
#include "streamhw/hdl.hpp"
#include "streamhw/monitor.hpp"
#include "streamhw/parser.hpp"
#include "streamhw/trace.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace streamhw;

enum Exit { kOk = 0, kSpec = 1, kTrace = 2, kInternal = 3 };

struct FileError : std::runtime_error {
  FileError(const std::string& what, int code) : std::runtime_error(what), code(code) {}
  int code;
};

std::string slurp(const std::string& path, int code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path, code);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string spec;
  std::string trace;
  std::string mode = "offline";
  std::string out_dir = "hdl";
  std::uint64_t xi_ns = 10;
  std::uint32_t prescale = 4;
  std::size_t queue_depth = 64;
  std::uint32_t expr_latency = 0;
  std::uint64_t delta_min = 8;
  std::optional<std::uint64_t> dld_bound;
  std::optional<std::uint64_t> event_spacing;
  std::vector<std::string> dump;
  bool instrument = false;
  bool threads = false;
  bool wall_clock = false;
};

Mode mode_of(const Options& o) { return o.mode == "online" ? Mode::Online : Mode::Offline; }

AnalyzedSpec load_spec(const Options& o) {
  AnalysisOptions ao;
  ao.delta_min = o.delta_min;
  ao.dld_bound = o.dld_bound;
  return analyze_source(slurp(o.spec, kSpec), ao);
}

MonitorConfig monitor_config(const Options& o) {
  MonitorConfig c;
  c.mode = mode_of(o);
  c.xi_ns = o.xi_ns;
  c.prescale = o.prescale;
  c.queue_depth = o.queue_depth;
  c.expr_latency = o.expr_latency;
  c.event_spacing = o.event_spacing.value_or(o.delta_min);
  c.threads = o.threads;
  c.instrument = o.instrument;
  c.wall_clock = o.wall_clock;
  return c;
}

std::vector<int> dump_outputs(const AnalyzedSpec& a, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) {
    int found = -1;
    for (int j = 0; j < a.n_out; ++j)
      if (a.output(j).name == n) found = j;
    if (found < 0) throw SpecError(Diagnostic{ErrorKind::UnknownIdentifier, "no output stream named '" + n + "'"});
    out.push_back(found);
  }
  return out;
}

int cmd_analyze(const Options& o) {
  std::cout << load_spec(o).report();
  return kOk;
}

int cmd_run(const Options& o, bool reference) {
  const AnalyzedSpec a = load_spec(o);
  const MonitorConfig cfg = monitor_config(o);
  const auto dumps = dump_outputs(a, o.dump);
  const Trace trace = parse_trace(slurp(o.trace, kTrace), a, cfg.mode);

  std::vector<OracleInstant> instants;
  if (reference) {
    instants = run_reference(a, trace, cfg);
  } else {
    MonitorRun run = run_monitor(a, trace, cfg);
    std::cerr << format_stats(run);
    if (cfg.instrument) std::cerr << format_instrumentation(a, run);
    instants = std::move(run.instants);
  }
  std::cout << format_trigger_log(a, instants);
  for (int j : dumps) std::cout << format_dump(a, instants, j);
  return kOk;
}

int cmd_emit(const Options& o) {
  const AnalyzedSpec a = load_spec(o);
  const MonitorConfig mc = monitor_config(o);
  const std::size_t buffer = a.buffer_size ? static_cast<std::size_t>(*a.buffer_size) : o.queue_depth;
  const HlcConfig cfg = HlcConfig::from(a, mc.mode, mc.xi_ns, mc.prescale, buffer);
  const auto units = emit_hdl(a, cfg, o.queue_depth);
  std::filesystem::create_directories(o.out_dir);
  for (const auto& u : units) {
    const auto path = std::filesystem::path(o.out_dir) / (u.name + ".vhd");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string(), kInternal);
    out << u.text;
    std::cout << path.string() << '\n';
  }
  const auto problems = check_hdl_widths(a, cfg, o.queue_depth, units);
  for (const auto& p : problems) std::cerr << "width check: " << p << '\n';
  return problems.empty() ? kOk : kInternal;
}

void add_engine_flags(CLI::App* c, Options& o) {
  c->add_option("--mode", o.mode, "Timestamp source")->check(CLI::IsMember({"offline", "online"}));
  c->add_option("--prescale", o.prescale, "sclk ticks per hclk tick")->check(CLI::Range(2u, 1u << 20));
  c->add_option("--xi-ns", o.xi_ns, "System clock period in ns")->check(CLI::PositiveNumber);
  c->add_option("--queue-depth", o.queue_depth, "Entries in the HLC/LLC queue")->check(CLI::PositiveNumber);
}

void add_analysis_flags(CLI::App* c, Options& o) {
  c->add_option("--delta-min", o.delta_min, "Minimum hclk cycles between events");
  c->add_option("--dld-bound", o.dld_bound, "Deadlines per event assumed for buffer sizing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream specification compiler and cycle-level monitor simulator"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Check a specification and print its static analysis");
  analyze->add_option("--spec,spec", o.spec, "Specification file")->required();
  add_analysis_flags(analyze, o);

  auto* run = app.add_subcommand("run", "Run a trace through the cycle-level monitor");
  auto* oracle = app.add_subcommand("oracle", "Run a trace through the reference evaluator");
  for (auto* c : {run, oracle}) {
    c->add_option("--spec", o.spec, "Specification file")->required();
    c->add_option("--trace", o.trace, "CSV trace")->required();
    c->add_option("--dump", o.dump, "Print every value of this output");
    add_engine_flags(c, o);
    add_analysis_flags(c, o);
  }
  run->add_option("--expr-latency", o.expr_latency, "Extra cycles per evaluating layer");
  run->add_option("--event-spacing", o.event_spacing, "Offline: hclk cycles between offered events");
  run->add_flag("--instrument", o.instrument, "Print queue pushes and per-cycle LLC states to stderr");
  run->add_flag("--threads", o.threads, "Run HLC and LLC on separate threads");
  run->add_flag("--wall-clock", o.wall_clock, "Online: pace the clock in real time");

  auto* emit = app.add_subcommand("emit-hdl", "Write the structural HDL description");
  emit->add_option("--spec", o.spec, "Specification file")->required();
  emit->add_option("--out-dir", o.out_dir, "Output directory");
  add_engine_flags(emit, o);
  add_analysis_flags(emit, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(o);
    if (*run) return cmd_run(o, false);
    if (*oracle) return cmd_run(o, true);
    if (*emit) return cmd_emit(o);
  } catch (const SpecError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << o.spec << ": " << d.to_string() << '\n';
    return kSpec;
  } catch (const TraceError& e) {
    std::cerr << o.trace << ": " << e.what() << '\n';
    return kTrace;
  } catch (const FileError& e) {
    std::cerr << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
