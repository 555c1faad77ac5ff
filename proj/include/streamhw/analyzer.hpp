#ifndef STREAMHW_ANALYZER_HPP
#define STREAMHW_ANALYZER_HPP

#include "streamhw/ast.hpp"
#include "streamhw/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace streamhw {

/// Source of timestamps: recorded in the trace, or the monitor's clock.
enum class Mode : std::uint8_t { Offline, Online };

enum class StreamKind : std::uint8_t { Input, Time, Output };

/// Streams are numbered inputs first, then `time`, then outputs.
struct StreamInfo {
  std::string name;
  StreamKind kind = StreamKind::Input;
  int index = 0;  // position among inputs or outputs
  ValueType type;
  int capa = 1;   // greatest offset of any lookup targeting this stream (>= 1)
};

struct Pacing {
  bool periodic = false;
  Rational frequency{0};
  std::vector<int> inputs;  // event-based: sorted input indices, all must be present

  std::string to_string(const std::vector<StreamInfo>& streams) const;
  friend bool operator==(const Pacing&, const Pacing&) = default;
};

struct WindowPlan {
  int id = 0;
  int target = 0;  // stream id
  int reader = 0;  // output index
  Rational duration{0};
  Aggregation agg = Aggregation::Count;
  std::int64_t buckets = 1;  // beta = duration * reader frequency
  std::uint64_t duration_ns = 0;
  std::uint64_t bucket_period_ns = 0;
  ValueType target_type;
  ValueType result_type;
};

struct Deadline {
  Rational offset{0};  // seconds within the hyper-period, in (0, PI]
  std::uint64_t offset_ns = 0;
  std::vector<int> outputs;  // S_i
};

struct Schedule {
  Rational hyper_period{0};
  std::vector<Deadline> deadlines;
};

/// Deadlines for streams with the given frequencies; `outputs` in each
/// deadline index into `frequencies`. Empty input yields an empty schedule.
Schedule compute_schedule(const std::vector<Rational>& frequencies);

struct AnalyzedSpec {
  Spec spec;  // desugared, every node typed and resolved
  std::vector<StreamInfo> streams;
  std::vector<Value> constants;
  int n_in = 0;
  int n_out = 0;
  int n_trig = 0;

  std::vector<Pacing> pacing;  // per output
  std::vector<int> layer_of;   // per output, 1-based
  std::vector<std::vector<int>> layers;
  int depth = 0;  // number of layers

  std::vector<std::vector<bool>> dep;  // n_in x n_out
  std::vector<bool> event_outputs;     // per output

  Rational hyper_period{0};
  std::uint64_t hyper_period_ns = 0;
  std::vector<Deadline> deadlines;
  std::vector<std::vector<bool>> dltarget;  // #dl x n_out
  std::uint64_t min_deadline_gap_ns = 0;

  std::vector<WindowPlan> windows;
  std::vector<int> trigger_outputs;  // per trigger, output index

  int s_ts = 64;
  std::vector<int> s_in;
  int s_ev = 0;

  std::optional<std::uint64_t> dld_bound;    // default: ceil(PI / min deadline gap)
  std::optional<std::uint64_t> buffer_size;  // from dld_bound and delta_min, if bounded

  int time_id() const { return n_in; }
  int output_id(int j) const { return n_in + 1 + j; }
  int output_index(int stream) const { return stream - n_in - 1; }
  bool is_output(int stream) const { return stream > n_in; }
  std::size_t n_dl() const { return deadlines.size(); }
  const OutputDecl& output(int j) const { return spec.outputs[static_cast<std::size_t>(j)]; }

  /// Layers, deadline table, capacities, widths and buffer size as text.
  std::string report() const;
};

struct AnalysisOptions {
  std::uint64_t delta_min = 8;             // hclk cycles between events
  std::optional<std::uint64_t> dld_bound;  // overrides the schedule-derived default
};

/// Performs desugaring and the full static analysis. Throws SpecError.
AnalyzedSpec analyze(const Spec& parsed, const AnalysisOptions& options = {});
AnalyzedSpec analyze_source(std::string_view source, const AnalysisOptions& options = {});

/// The three analysis stages on a desugared spec, exposed for testing.
/// Each throws SpecError with every violation found.
std::vector<Pacing> check_types_and_pacing(Spec& desugared);

/// Maximum backlog over the worst-case sequence where every event induces
/// `dld_bound` deadlines and events are `delta_min` hclk cycles apart.
/// Throws SpecError(Unbounded) when delta_min - 1 < dld_bound.
std::uint64_t compute_buffer_size(std::uint64_t dld_bound, std::uint64_t delta_min);

/// backlog(e_1) = 0, backlog(e_{i+1}) = backlog(e_i) - min(backlog(e_i), delta-1) + dld(e_{i+1}).
/// dlds[0] belongs to the first event and is ignored.
std::vector<std::uint64_t> backlog_sequence(const std::vector<std::uint64_t>& dlds, std::uint64_t delta_min);

/// Number of deadline instants anchor + n*PI + offset (n >= 0) in (t_prev, t_next].
std::uint64_t dld_count(const std::vector<std::uint64_t>& offsets_ns, std::uint64_t hyper_period_ns,
                        std::uint64_t anchor_ns, std::uint64_t t_prev_ns, std::uint64_t t_next_ns);

}  // namespace streamhw

#endif
