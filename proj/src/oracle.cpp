#include "streamhw/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace streamhw {

namespace {

struct Sample {
  std::size_t instant;
  std::uint64_t ts;
  Value v;
};

class Reference {
 public:
  Reference(const AnalyzedSpec& a, Mode mode) : a_(a), mode_(mode), history_(a.streams.size()) {}

  std::vector<OracleInstant> run(const std::vector<RawEvent>& events) {
    std::vector<OracleInstant> out;
    if (events.empty()) return out;
    const std::uint64_t anchor = mode_ == Mode::Offline ? *events.front().ts : 0;
    const std::uint64_t end = *events.back().ts;
    start_ = anchor;

    // Deadline instants within [anchor, end], each placed before events at or after it.
    struct Due {
      std::uint64_t ts;
      std::size_t dl;
    };
    std::vector<Due> dues;
    if (!a_.deadlines.empty()) {
      for (std::uint64_t base = anchor;; base += a_.hyper_period_ns) {
        bool any = false;
        for (std::size_t d = 0; d < a_.deadlines.size(); ++d) {
          const std::uint64_t t = base + a_.deadlines[d].offset_ns;
          if (t > end) continue;
          dues.push_back({t, d});
          any = true;
        }
        if (!any) break;
      }
    }

    std::size_t di = 0;
    for (const RawEvent& ev : events) {
      const std::uint64_t ts = *ev.ts;
      for (; di < dues.size() && dues[di].ts <= ts; ++di) out.push_back(deadline_instant(out.size(), dues[di]));
      out.push_back(event_instant(out.size(), ev));
    }
    for (; di < dues.size(); ++di) out.push_back(deadline_instant(out.size(), dues[di]));
    return out;
  }

 private:
  template <typename D>
  OracleInstant deadline_instant(std::size_t n, const D& due) {
    std::vector<bool> active(static_cast<std::size_t>(a_.n_out), false);
    for (int j : a_.deadlines[due.dl].outputs) active[static_cast<std::size_t>(j)] = true;
    return evaluate(n, due.ts, true, active);
  }

  OracleInstant event_instant(std::size_t n, const RawEvent& ev) {
    const std::uint64_t ts = *ev.ts;
    bool any = false;
    for (int i = 0; i < a_.n_in; ++i) {
      if (!ev.present[static_cast<std::size_t>(i)]) continue;
      const ValueType t = a_.streams[static_cast<std::size_t>(i)].type;
      history_[static_cast<std::size_t>(i)].push_back({n, ts, Value::from_raw(t, ev.values[static_cast<std::size_t>(i)] & width_mask(t.width))});
      any = true;
    }
    if (any) history_[static_cast<std::size_t>(a_.time_id())].push_back({n, ts, Value::of_int(ValueType::uint_type(64), ts)});

    std::vector<bool> active(static_cast<std::size_t>(a_.n_out), false);
    for (int j = 0; j < a_.n_out; ++j) {
      const Pacing& p = a_.pacing[static_cast<std::size_t>(j)];
      if (p.periodic) continue;
      active[static_cast<std::size_t>(j)] =
          std::all_of(p.inputs.begin(), p.inputs.end(), [&](int i) { return ev.present[static_cast<std::size_t>(i)]; });
    }
    return evaluate(n, ts, false, active);
  }

  OracleInstant evaluate(std::size_t n, std::uint64_t ts, bool deadline, const std::vector<bool>& active) {
    n_ = n;
    now_ = ts;
    active_ = active;
    memo_.assign(static_cast<std::size_t>(a_.n_out), std::nullopt);
    OracleInstant r;
    r.ts = ts;
    r.deadline = deadline;
    r.outputs.assign(static_cast<std::size_t>(a_.n_out), std::nullopt);
    for (int j = 0; j < a_.n_out; ++j)
      if (active_[static_cast<std::size_t>(j)]) r.outputs[static_cast<std::size_t>(j)] = output_value(j);
    for (int j = 0; j < a_.n_out; ++j)
      if (r.outputs[static_cast<std::size_t>(j)])
        history_[static_cast<std::size_t>(a_.output_id(j))].push_back({n, ts, *r.outputs[static_cast<std::size_t>(j)]});
    for (int j : a_.trigger_outputs) {
      const auto& v = r.outputs[static_cast<std::size_t>(j)];
      r.trig.push_back(v && v->as_bool());
    }
    return r;
  }

  Value output_value(int j) {
    auto& slot = memo_[static_cast<std::size_t>(j)];
    if (!slot) {
      const ValueType t = a_.streams[static_cast<std::size_t>(a_.output_id(j))].type;
      slot = cast(eval(*a_.output(j).expr), t);
    }
    return *slot;
  }

  // Value of stream `s` at the current instant.
  Value current(int s) {
    if (s == a_.time_id()) return Value::of_int(ValueType::uint_type(64), now_);
    if (a_.is_output(s)) {
      const int j = a_.output_index(s);
      if (!active_[static_cast<std::size_t>(j)])
        throw std::logic_error("reference: synchronous read of inactive stream " + a_.streams[static_cast<std::size_t>(s)].name);
      return output_value(j);
    }
    const auto& h = history_[static_cast<std::size_t>(s)];
    if (h.empty() || h.back().instant != n_)
      throw std::logic_error("reference: synchronous read of absent input " + a_.streams[static_cast<std::size_t>(s)].name);
    return h.back().v;
  }

  std::optional<Value> offset(int s, std::int64_t k) {
    if (k == 0) return current(s);
    std::vector<Value> before;
    for (const Sample& x : history_[static_cast<std::size_t>(s)])
      if (x.instant < n_) before.push_back(x.v);
    const std::size_t back = static_cast<std::size_t>(-k);
    if (before.size() < back) return std::nullopt;
    return before[before.size() - back];
  }

  std::optional<Value> hold(int s) {
    const auto& h = history_[static_cast<std::size_t>(s)];
    for (auto it = h.rbegin(); it != h.rend(); ++it)
      if (!a_.is_output(s) || it->instant < n_) return it->v;
    return std::nullopt;
  }

  static std::uint64_t bucket_index(std::uint64_t ts, std::uint64_t start, std::uint64_t bp) {
    if (ts <= start) return 1;
    return std::max<std::uint64_t>(1, (ts - start + bp - 1) / bp);
  }

  std::optional<Value> window(int id) {
    const WindowPlan& w = a_.windows[static_cast<std::size_t>(id)];
    if (now_ - start_ < w.duration_ns) return std::nullopt;
    const std::uint64_t k = bucket_index(now_, start_, w.bucket_period_ns);
    const std::uint64_t beta = static_cast<std::uint64_t>(w.buckets);
    const std::uint64_t lo = k >= beta ? k - beta + 1 : 1;

    std::vector<std::pair<std::uint64_t, __int128>> pts;
    auto take = [&](std::uint64_t ts, const Value& v) {
      const std::uint64_t b = bucket_index(ts, start_, w.bucket_period_ns);
      if (b < lo || b > k) return;
      pts.emplace_back(ts, v.type.is_bool() ? static_cast<__int128>(v.raw) : v.as_int());
    };
    for (const Sample& x : history_[static_cast<std::size_t>(w.target)]) take(x.ts, x.v);
    if (a_.is_output(w.target) && active_[static_cast<std::size_t>(a_.output_index(w.target))])
      take(now_, output_value(a_.output_index(w.target)));

    const ValueType rt = w.result_type;
    __int128 acc = 0;
    switch (w.agg) {
      case Aggregation::Count:
        return Value::of_int(rt, static_cast<__int128>(pts.size()));
      case Aggregation::Sum:
        for (const auto& p : pts) acc += p.second;
        return Value::of_int(rt, acc);
      case Aggregation::Avg:
        if (pts.empty()) return std::nullopt;
        for (const auto& p : pts) acc += p.second;
        return Value::of_int(rt, acc / static_cast<__int128>(pts.size()));
      case Aggregation::Min:
      case Aggregation::Max: {
        if (pts.empty()) return std::nullopt;
        acc = pts.front().second;
        for (const auto& p : pts) acc = w.agg == Aggregation::Min ? std::min(acc, p.second) : std::max(acc, p.second);
        return Value::of_int(rt, acc);
      }
      case Aggregation::Integral:
        for (std::size_t i = 1; i < pts.size(); ++i)
          acc += (pts[i - 1].second + pts[i].second) * static_cast<__int128>(pts[i].first - pts[i - 1].first);
        return Value::of_int(rt, acc / (2 * static_cast<__int128>(kNanosPerSecond)));
    }
    return std::nullopt;
  }

  std::optional<Value> access(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Offset: return offset(e.ref, e.offset);
      case ExprKind::Hold: return hold(e.ref);
      case ExprKind::Window: return window(e.window_id);
      default: return eval(e);
    }
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return Value::of_int(e.type, e.int_value);
      case ExprKind::BoolLit: return Value::boolean(e.bool_value);
      case ExprKind::Ref:
        if (e.ref_kind == RefKind::Constant) return cast(a_.constants[static_cast<std::size_t>(e.ref)], e.type);
        return cast(current(e.ref), e.type);
      case ExprKind::Default: {
        auto v = access(*e.args[0]);
        return cast(v ? *v : eval(*e.args[1]), e.type);
      }
      case ExprKind::Unary: return apply_unary(e.unop, cast(eval(*e.args[0]), e.type));
      case ExprKind::Binary: {
        const Value l = eval(*e.args[0]);
        const Value r = eval(*e.args[1]);
        return cast(apply_binary(e.binop, l, r, e.operand_type), e.type);
      }
      case ExprKind::Ite: return cast(eval(*e.args[eval(*e.args[0]).as_bool() ? 1 : 2]), e.type);
      default: throw std::logic_error("reference: unexpected expression node");
    }
  }

  const AnalyzedSpec& a_;
  Mode mode_;
  std::vector<std::vector<Sample>> history_;
  std::uint64_t start_ = 0;
  std::size_t n_ = 0;
  std::uint64_t now_ = 0;
  std::vector<bool> active_;
  std::vector<std::optional<Value>> memo_;
};

}  // namespace

std::vector<OracleInstant> run_oracle(const AnalyzedSpec& spec, const std::vector<RawEvent>& events, Mode mode) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!events[i].ts) throw std::invalid_argument("reference: event without timestamp");
    if (i > 0 && *events[i].ts < *events[i - 1].ts) throw std::invalid_argument("reference: timestamps decrease");
  }
  return Reference(spec, mode).run(events);
}

std::vector<std::uint64_t> online_latch_ticks(const std::vector<std::uint64_t>& offer_ticks, std::uint32_t prescale) {
  std::vector<std::uint64_t> out;
  out.reserve(offer_ticks.size());
  for (std::uint64_t t : offer_ticks) {
    std::uint64_t at = (t + prescale - 1) / prescale * prescale;
    if (!out.empty()) at = std::max(at, out.back() + prescale);
    out.push_back(at);
  }
  return out;
}

}  // namespace streamhw
