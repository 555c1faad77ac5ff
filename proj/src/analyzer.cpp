#include "streamhw/analyzer.hpp"
#include "streamhw/desugar.hpp"
#include "streamhw/parser.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace streamhw {

std::string Pacing::to_string(const std::vector<StreamInfo>& streams) const {
  if (periodic) return "periodic @" + format_rational(frequency) + "Hz";
  std::string out = "event-based {";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) out += ", ";
    out += streams[static_cast<std::size_t>(inputs[i])].name;
  }
  return out + "}";
}

Schedule compute_schedule(const std::vector<Rational>& frequencies) {
  Schedule s;
  if (frequencies.empty()) return s;
  s.hyper_period = 1 / frequencies.front();
  for (const auto& f : frequencies) s.hyper_period = rational_lcm(s.hyper_period, 1 / f);
  std::map<Rational, std::vector<int>> due;
  for (std::size_t j = 0; j < frequencies.size(); ++j) {
    const Rational period = 1 / frequencies[j];
    const std::int64_t n = boost::rational_cast<std::int64_t>(s.hyper_period / period);
    for (std::int64_t m = 1; m <= n; ++m) due[period * m].push_back(static_cast<int>(j));
  }
  for (auto& [offset, outs] : due) {
    Deadline d;
    d.offset = offset;
    d.outputs = outs;
    if (auto ns = to_nanos(offset)) d.offset_ns = *ns;
    s.deadlines.push_back(std::move(d));
  }
  return s;
}

std::uint64_t compute_buffer_size(std::uint64_t dld_bound, std::uint64_t delta_min) {
  if (delta_min < 1)
    throw SpecError(Diagnostic{ErrorKind::Unbounded, "inter-event spacing must be at least one cycle"});
  if (delta_min - 1 < dld_bound)
    throw SpecError(Diagnostic{ErrorKind::Unbounded,
                               "backlog diverges: " + std::to_string(dld_bound) +
                                   " deadlines per event but only " + std::to_string(delta_min - 1) +
                                   " spare cycles"});
  // Worst case: every event after the first induces dld_bound deadlines.
  std::uint64_t backlog = 0;
  std::uint64_t best = 0;
  for (;;) {
    std::uint64_t next = backlog - std::min(backlog, delta_min - 1) + dld_bound;
    best = std::max(best, next);
    if (next == backlog) break;
    backlog = next;
  }
  return std::max<std::uint64_t>(1, best);
}

std::vector<std::uint64_t> backlog_sequence(const std::vector<std::uint64_t>& dlds, std::uint64_t delta_min) {
  std::vector<std::uint64_t> out;
  if (dlds.empty()) return out;
  const std::uint64_t drain = delta_min > 0 ? delta_min - 1 : 0;
  std::uint64_t b = 0;
  out.push_back(b);
  for (std::size_t i = 1; i < dlds.size(); ++i) {
    b = b - std::min(b, drain) + dlds[i];
    out.push_back(b);
  }
  return out;
}

std::uint64_t dld_count(const std::vector<std::uint64_t>& offsets_ns, std::uint64_t hyper_period_ns,
                        std::uint64_t anchor_ns, std::uint64_t t_prev_ns, std::uint64_t t_next_ns) {
  if (offsets_ns.empty() || hyper_period_ns == 0 || t_next_ns <= t_prev_ns) return 0;
  auto upto = [&](std::uint64_t o, std::uint64_t x) -> std::uint64_t {
    const std::uint64_t first = anchor_ns + o;
    if (x < first) return 0;
    return (x - first) / hyper_period_ns + 1;
  };
  std::uint64_t n = 0;
  for (auto o : offsets_ns) n += upto(o, t_next_ns) - upto(o, t_prev_ns);
  return n;
}

namespace {

// Inference lattice during type checking: integer literals stay flexible
// until context fixes their width.
struct Ty {
  enum Tag { Unknown, Flex, Concrete } tag = Unknown;
  ValueType vt{};

  static Ty unknown() { return {}; }
  static Ty flex() { return {Flex, {}}; }
  static Ty of(ValueType t) { return {Concrete, t}; }
  bool is_bool() const { return tag == Concrete && vt.is_bool(); }
  bool is_intish() const { return tag == Flex || (tag == Concrete && vt.is_int()); }
};

enum class Access { Sync, Offset, Hold, Window };

struct Lookup {
  Access access;
  int target;
  std::int64_t offset;
  const Expr* node;
};

class Analyzer {
 public:
  explicit Analyzer(Spec& spec) : spec_(spec) {
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
      StreamInfo s{spec.inputs[i].name, StreamKind::Input, static_cast<int>(i), spec.inputs[i].type, 1};
      add_stream(s);
    }
    add_stream(StreamInfo{kTimeStream, StreamKind::Time, 0, ValueType::uint_type(64), 1});
    for (std::size_t j = 0; j < spec.outputs.size(); ++j) {
      StreamInfo s{spec.outputs[j].name, StreamKind::Output, static_cast<int>(j), {}, 1};
      add_stream(s);
    }
    for (std::size_t c = 0; c < spec.constants.size(); ++c)
      const_ids_[spec.constants[c].name] = static_cast<int>(c);
    n_in_ = static_cast<int>(spec.inputs.size());
    n_out_ = static_cast<int>(spec.outputs.size());
    bind_refs();
  }

  std::vector<StreamInfo>& streams() { return streams_; }

  // --- types --------------------------------------------------------------

  void check_types() {
    std::vector<bool> known(spec_.outputs.size(), false);
    for (std::size_t j = 0; j < spec_.outputs.size(); ++j) {
      if (spec_.outputs[j].type) {
        streams_[out_id(j)].type = *spec_.outputs[j].type;
        known[j] = true;
      }
    }
    for (;;) {
      bool progress = false;
      std::vector<std::size_t> flexible;
      std::vector<std::size_t> pending;
      for (std::size_t j = 0; j < spec_.outputs.size(); ++j) {
        if (known[j]) continue;
        Ty t = infer(*spec_.outputs[j].expr, known);
        if (t.tag == Ty::Concrete) {
          streams_[out_id(j)].type = t.vt;
          known[j] = true;
          progress = true;
        } else if (t.tag == Ty::Flex) {
          flexible.push_back(j);
        } else {
          pending.push_back(j);
        }
      }
      if (progress) continue;
      if (!flexible.empty()) {
        for (auto j : flexible) {
          streams_[out_id(j)].type = ValueType::int_type(64);
          known[j] = true;
        }
        continue;
      }
      if (!pending.empty()) {
        std::vector<Diagnostic> ds;
        for (auto j : pending)
          ds.push_back(Diagnostic{ErrorKind::UntypedExpression,
                                  "cannot infer the type of '" + spec_.outputs[j].name + "'",
                                  spec_.outputs[j].line, 0});
        throw SpecError(ds);
      }
      break;
    }
    std::vector<bool> all(spec_.outputs.size(), true);
    for (std::size_t j = 0; j < spec_.outputs.size(); ++j) {
      auto& o = spec_.outputs[j];
      const ValueType want = streams_[out_id(j)].type;
      Ty t = infer(*o.expr, all);
      if (want.is_bool() != t.is_bool() || (t.tag == Ty::Flex && want.is_bool()))
        mismatch(*o.expr, "'" + o.name + "' is declared " + want.name() + " but its expression is " +
                              describe(t));
      finalize(*o.expr, want, all);
    }
  }

  // --- pacing -------------------------------------------------------------

  std::vector<Pacing> check_pacing() {
    lookups_.assign(spec_.outputs.size(), {});
    for (std::size_t j = 0; j < spec_.outputs.size(); ++j) collect(*spec_.outputs[j].expr, lookups_[j]);

    std::vector<std::optional<Pacing>> pacing(spec_.outputs.size());
    for (std::size_t j = 0; j < spec_.outputs.size(); ++j)
      if (spec_.outputs[j].frequency) pacing[j] = Pacing{true, *spec_.outputs[j].frequency, {}};

    std::vector<Diagnostic> errors;
    // Unannotated outputs take their pacing from the streams they read
    // synchronously or by offset; resolved in rounds to allow mutual offsets.
    for (;;) {
      bool progress = false;
      bool pending = false;
      for (std::size_t j = 0; j < spec_.outputs.size(); ++j) {
        if (pacing[j]) continue;
        std::set<int> targets;
        for (const auto& l : lookups_[j])
          if ((l.access == Access::Sync || l.access == Access::Offset) && l.target != out_id(j) &&
              l.target != time_id())
            targets.insert(l.target);
        bool ready = true;
        for (int t : targets)
          if (is_output(t) && !pacing[static_cast<std::size_t>(out_index(t))]) ready = false;
        if (!ready) {
          pending = true;
          continue;
        }
        progress = true;
        pacing[j] = infer_pacing(j, targets, pacing, errors);
      }
      if (!pending) break;
      if (!progress) {
        for (std::size_t j = 0; j < spec_.outputs.size(); ++j)
          if (!pacing[j])
            errors.push_back(Diagnostic{ErrorKind::UntypedExpression,
                                        "cannot infer the pacing of '" + spec_.outputs[j].name +
                                            "' (circular offsets); annotate it with @<f>Hz",
                                        spec_.outputs[j].line, 0});
        break;
      }
    }
    if (!errors.empty()) throw SpecError(errors);

    pacing_.clear();
    for (auto& p : pacing) pacing_.push_back(*p);

    for (std::size_t j = 0; j < spec_.outputs.size(); ++j) check_rules(j, errors);
    if (!errors.empty()) throw SpecError(errors);
    return pacing_;
  }

  // --- layering -----------------------------------------------------------

  void compute_layers(AnalyzedSpec& a) {
    const std::size_t n = spec_.outputs.size();
    std::vector<std::vector<int>> preds(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& l : lookups_[j]) {
        if (!is_output(l.target)) continue;
        const int t = out_index(l.target);
        const bool sync = l.access == Access::Sync || (l.access == Access::Offset && l.offset == 0);
        const bool window = l.access == Access::Window && pacing_[static_cast<std::size_t>(t)].periodic;
        if (sync || window) preds[j].push_back(t);
      }
    }
    std::vector<int> layer(n, 0);
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<int> stack;
    std::function<void(int)> visit = [&](int j) {
      state[j] = 1;
      stack.push_back(j);
      int best = 0;
      for (int p : preds[j]) {
        if (state[p] == 1) {
          std::string cycle;
          auto it = std::find(stack.begin(), stack.end(), p);
          for (; it != stack.end(); ++it) cycle += spec_.outputs[*it].name + " -> ";
          cycle += spec_.outputs[p].name;
          throw SpecError(Diagnostic{ErrorKind::CyclicDependency, "cycle: " + cycle,
                                     spec_.outputs[j].line, 0});
        }
        if (state[p] == 0) visit(p);
        best = std::max(best, layer[p]);
      }
      layer[j] = best + 1;
      state[j] = 2;
      stack.pop_back();
    };
    for (std::size_t j = 0; j < n; ++j)
      if (state[j] == 0) visit(static_cast<int>(j));
    a.layer_of = layer;
    a.depth = n ? *std::max_element(layer.begin(), layer.end()) : 0;
    a.layers.assign(static_cast<std::size_t>(a.depth), {});
    for (std::size_t j = 0; j < n; ++j) a.layers[layer[j] - 1].push_back(static_cast<int>(j));
  }

  // --- memory -------------------------------------------------------------

  void compute_memory(AnalyzedSpec& a) {
    for (const auto& ls : lookups_)
      for (const auto& l : ls)
        if (l.access == Access::Offset)
          streams_[l.target].capa = std::max<int>(streams_[l.target].capa, static_cast<int>(-l.offset));

    std::vector<Diagnostic> errors;
    int next_id = 0;
    for (std::size_t j = 0; j < spec_.outputs.size(); ++j) {
      walk(*spec_.outputs[j].expr, [&](Expr& e) {
        if (e.kind != ExprKind::Window) return;
        const Pacing& p = pacing_[j];
        WindowPlan w;
        w.id = next_id;
        w.target = e.ref;
        w.reader = static_cast<int>(j);
        w.duration = e.duration;
        w.agg = e.agg;
        w.target_type = streams_[e.ref].type;
        w.result_type = e.type;
        const Rational beta = e.duration * p.frequency;
        if (beta.denominator() != 1 || beta <= 0) {
          errors.push_back(Diagnostic{ErrorKind::NonIntegralBuckets,
                                      "window over " + format_rational(e.duration) + "s in a " +
                                          format_rational(p.frequency) + "Hz stream gives " +
                                          format_rational(beta) + " buckets",
                                      e.line, e.col});
          return;
        }
        w.buckets = beta.numerator();
        auto dur = to_nanos(e.duration);
        auto bp = to_nanos(1 / p.frequency);
        if (!dur || !bp) {
          errors.push_back(Diagnostic{ErrorKind::UnrepresentableTime,
                                      "window timing is not a whole number of nanoseconds", e.line, e.col});
          return;
        }
        w.duration_ns = *dur;
        w.bucket_period_ns = *bp;
        e.window_id = next_id++;
        a.windows.push_back(w);
      });
    }
    if (!errors.empty()) throw SpecError(errors);
  }

  void compute_schedule_tables(AnalyzedSpec& a) {
    std::vector<Rational> freqs;
    std::vector<int> which;
    for (std::size_t j = 0; j < pacing_.size(); ++j) {
      if (!pacing_[j].periodic) continue;
      freqs.push_back(pacing_[j].frequency);
      which.push_back(static_cast<int>(j));
    }
    Schedule s = compute_schedule(freqs);
    a.hyper_period = s.hyper_period;
    if (!freqs.empty()) {
      auto pi = to_nanos(s.hyper_period);
      if (!pi)
        throw SpecError(Diagnostic{ErrorKind::UnrepresentableTime,
                                   "hyper-period " + format_rational(s.hyper_period) +
                                       "s is not a whole number of nanoseconds"});
      a.hyper_period_ns = *pi;
    }
    for (auto& d : s.deadlines) {
      if (!to_nanos(d.offset))
        throw SpecError(Diagnostic{ErrorKind::UnrepresentableTime,
                                   "deadline " + format_rational(d.offset) + "s is not a whole number of nanoseconds"});
      for (auto& o : d.outputs) o = which[static_cast<std::size_t>(o)];
      std::vector<bool> row(spec_.outputs.size(), false);
      for (int o : d.outputs) row[static_cast<std::size_t>(o)] = true;
      a.dltarget.push_back(row);
      a.deadlines.push_back(d);
    }
    if (!a.deadlines.empty()) {
      std::uint64_t gap = a.deadlines.front().offset_ns + a.hyper_period_ns - a.deadlines.back().offset_ns;
      for (std::size_t i = 1; i < a.deadlines.size(); ++i)
        gap = std::min(gap, a.deadlines[i].offset_ns - a.deadlines[i - 1].offset_ns);
      a.min_deadline_gap_ns = gap;
    }
  }

 private:
  void add_stream(StreamInfo s) {
    stream_ids_[s.name] = static_cast<int>(streams_.size());
    streams_.push_back(std::move(s));
  }

  int time_id() const { return n_in_; }
  int out_id(std::size_t j) const { return n_in_ + 1 + static_cast<int>(j); }
  bool is_output(int id) const { return id > n_in_; }
  int out_index(int id) const { return id - n_in_ - 1; }

  void bind_refs() {
    auto bind = [&](Expr& e) {
      switch (e.kind) {
        case ExprKind::Ref:
        case ExprKind::Offset:
        case ExprKind::Hold:
        case ExprKind::Window: {
          if (auto it = stream_ids_.find(e.name); it != stream_ids_.end()) {
            e.ref_kind = RefKind::Stream;
            e.ref = it->second;
          } else if (auto c = const_ids_.find(e.name); c != const_ids_.end() && e.kind == ExprKind::Ref) {
            e.ref_kind = RefKind::Constant;
            e.ref = c->second;
          } else {
            throw SpecError(Diagnostic{ErrorKind::UnknownIdentifier, "unknown stream '" + e.name + "'",
                                       e.line, e.col});
          }
          break;
        }
        case ExprKind::Delta:
          throw InternalError("delta must be desugared before analysis");
        default:
          break;
      }
    };
    for (auto& o : spec_.outputs) walk(*o.expr, bind);
  }

  [[noreturn]] void mismatch(const Expr& e, const std::string& msg) const {
    throw SpecError(Diagnostic{ErrorKind::TypeMismatch, msg, e.line, e.col});
  }

  static std::string describe(const Ty& t) {
    switch (t.tag) {
      case Ty::Unknown: return "untyped";
      case Ty::Flex: return "an integer";
      case Ty::Concrete: return t.vt.name();
    }
    return "?";
  }

  Ty stream_ty(int id, const std::vector<bool>& known) const {
    if (is_output(id) && !known[static_cast<std::size_t>(out_index(id))]) return Ty::unknown();
    return Ty::of(streams_[static_cast<std::size_t>(id)].type);
  }

  Ty unify(const Expr& at, Ty a, Ty b, const char* what) const {
    if (a.tag == Ty::Unknown) return b;
    if (b.tag == Ty::Unknown) return a;
    if (a.is_bool() != b.is_bool())
      mismatch(at, std::string("operands of ") + what + " mix Bool and integer");
    if (a.is_bool()) return a;
    if (a.tag == Ty::Flex) return b;
    if (b.tag == Ty::Flex) return a;
    return Ty::of(join_int(a.vt, b.vt));
  }

  void require_bool(const Expr& e, Ty t, const char* what) const {
    if (t.tag != Ty::Unknown && !t.is_bool()) mismatch(e, std::string(what) + " requires a Bool operand");
  }
  void require_int(const Expr& e, Ty t, const char* what) const {
    if (t.tag != Ty::Unknown && !t.is_intish()) mismatch(e, std::string(what) + " requires an integer operand");
  }

  Ty window_ty(const Expr& e, const std::vector<bool>& known) const {
    if (e.agg == Aggregation::Count) return Ty::of(ValueType::uint_type(64));
    Ty target = stream_ty(e.ref, known);
    if (target.is_bool())
      mismatch(e, std::string(aggregation_name(e.agg)) + " window over Bool stream '" + e.name + "'");
    if (e.agg == Aggregation::Integral) return Ty::of(ValueType::int_type(64));
    return target;
  }

  Ty infer(const Expr& e, const std::vector<bool>& known) const {
    switch (e.kind) {
      case ExprKind::IntLit: return Ty::flex();
      case ExprKind::BoolLit: return Ty::of(ValueType::boolean());
      case ExprKind::Ref:
        if (e.ref_kind == RefKind::Constant)
          return Ty::of(spec_.constants[static_cast<std::size_t>(e.ref)].type);
        return stream_ty(e.ref, known);
      case ExprKind::Offset:
      case ExprKind::Hold:
        return stream_ty(e.ref, known);
      case ExprKind::Window:
        return window_ty(e, known);
      case ExprKind::Default: {
        Ty inner = infer(*e.args[0], known);
        Ty d = infer(*e.args[1], known);
        return unify(e, inner, d, "defaults");
      }
      case ExprKind::Unary: {
        Ty a = infer(*e.args[0], known);
        if (e.unop == UnaryOp::Not) {
          require_bool(e, a, "'!'");
          return Ty::of(ValueType::boolean());
        }
        require_int(e, a, op_symbol(e.unop));
        return a;
      }
      case ExprKind::Binary: {
        Ty a = infer(*e.args[0], known);
        Ty b = infer(*e.args[1], known);
        if (is_logical(e.binop)) {
          require_bool(e, a, op_symbol(e.binop));
          require_bool(e, b, op_symbol(e.binop));
          return Ty::of(ValueType::boolean());
        }
        Ty u = unify(e, a, b, op_symbol(e.binop));
        if (is_comparison(e.binop)) {
          if (u.is_bool() && e.binop != BinaryOp::Eq && e.binop != BinaryOp::Ne)
            mismatch(e, std::string("'") + op_symbol(e.binop) + "' on Bool operands");
          return Ty::of(ValueType::boolean());
        }
        require_int(e, u, op_symbol(e.binop));
        return u;
      }
      case ExprKind::Ite: {
        require_bool(e, infer(*e.args[0], known), "if condition");
        return unify(e, infer(*e.args[1], known), infer(*e.args[2], known), "if branches");
      }
      case ExprKind::Delta:
        break;
    }
    throw InternalError("unexpected node during type inference");
  }

  // Pushes concrete types down; `want` is the type a flexible node receives.
  void finalize(Expr& e, ValueType want, const std::vector<bool>& known) {
    Ty t = infer(e, known);
    ValueType self = t.tag == Ty::Concrete ? t.vt : want;
    if (t.tag == Ty::Flex && want.is_bool()) mismatch(e, "integer where Bool is expected");
    switch (e.kind) {
      case ExprKind::IntLit:
      case ExprKind::BoolLit:
      case ExprKind::Ref:
      case ExprKind::Offset:
      case ExprKind::Hold:
      case ExprKind::Window:
        break;
      case ExprKind::Default:
        finalize(*e.args[0], self, known);
        self = infer(*e.args[0], known).tag == Ty::Concrete ? e.args[0]->type : self;
        finalize(*e.args[1], self, known);
        break;
      case ExprKind::Unary:
        finalize(*e.args[0], e.unop == UnaryOp::Not ? ValueType::boolean() : self, known);
        break;
      case ExprKind::Binary: {
        if (is_logical(e.binop)) {
          finalize(*e.args[0], ValueType::boolean(), known);
          finalize(*e.args[1], ValueType::boolean(), known);
          e.operand_type = ValueType::boolean();
          break;
        }
        Ty u = unify(e, infer(*e.args[0], known), infer(*e.args[1], known), op_symbol(e.binop));
        ValueType operands = u.tag == Ty::Concrete ? u.vt : (is_comparison(e.binop) ? ValueType::int_type(64) : self);
        finalize(*e.args[0], operands, known);
        finalize(*e.args[1], operands, known);
        e.operand_type = operands;
        break;
      }
      case ExprKind::Ite:
        finalize(*e.args[0], ValueType::boolean(), known);
        finalize(*e.args[1], self, known);
        finalize(*e.args[2], self, known);
        break;
      case ExprKind::Delta:
        throw InternalError("delta must be desugared before analysis");
    }
    e.type = self;
  }

  void collect(const Expr& e, std::vector<Lookup>& out) const {
    walk(e, [&](const Expr& n) {
      if (n.ref_kind != RefKind::Stream) return;
      switch (n.kind) {
        case ExprKind::Ref: out.push_back({Access::Sync, n.ref, 0, &n}); break;
        case ExprKind::Offset: out.push_back({Access::Offset, n.ref, n.offset, &n}); break;
        case ExprKind::Hold: out.push_back({Access::Hold, n.ref, 0, &n}); break;
        case ExprKind::Window: out.push_back({Access::Window, n.ref, 0, &n}); break;
        default: break;
      }
    });
  }

  Pacing infer_pacing(std::size_t j, const std::set<int>& targets,
                      const std::vector<std::optional<Pacing>>& pacing, std::vector<Diagnostic>& errors) const {
    const auto& o = spec_.outputs[j];
    if (targets.empty()) {
      bool has_window = false;
      for (const auto& l : lookups_[j]) has_window |= l.access == Access::Window;
      if (has_window)
        errors.push_back(Diagnostic{ErrorKind::WindowInEventBasedStream,
                                    "'" + o.name + "' contains a window but has no frequency", o.line, 0});
      else
        errors.push_back(Diagnostic{ErrorKind::UntypedExpression,
                                    "cannot infer the pacing of '" + o.name +
                                        "': it reads no stream synchronously; annotate it with @<f>Hz",
                                    o.line, 0});
      return Pacing{false, 0, {}};
    }
    std::set<int> inputs;
    std::optional<Rational> freq;
    const Expr* periodic_at = nullptr;
    const Expr* event_at = nullptr;
    bool mixed_freq = false;
    for (const auto& l : lookups_[j]) {
      if (!targets.count(l.target)) continue;
      if (!is_output(l.target)) {
        inputs.insert(l.target);
        event_at = l.node;
        continue;
      }
      const Pacing& p = *pacing[static_cast<std::size_t>(out_index(l.target))];
      if (p.periodic) {
        if (freq && *freq != p.frequency) mixed_freq = true;
        freq = p.frequency;
        periodic_at = l.node;
      } else {
        inputs.insert(p.inputs.begin(), p.inputs.end());
        event_at = l.node;
      }
    }
    if (periodic_at && event_at) {
      errors.push_back(Diagnostic{ErrorKind::AccessRuleViolation,
                                  "'" + o.name + "' reads both periodic stream '" + periodic_at->name +
                                      "' and event-based stream '" + event_at->name + "' without hold",
                                  periodic_at->line, periodic_at->col, 1});
      return Pacing{false, 0, {}};
    }
    if (mixed_freq) {
      errors.push_back(Diagnostic{ErrorKind::FrequencyMismatch,
                                  "'" + o.name + "' reads periodic streams of different frequencies; annotate it",
                                  o.line, 0});
      return Pacing{false, 0, {}};
    }
    if (freq) return Pacing{true, *freq, {}};
    return Pacing{false, 0, {inputs.begin(), inputs.end()}};
  }

  void check_rules(std::size_t j, std::vector<Diagnostic>& errors) const {
    const auto& o = spec_.outputs[j];
    const Pacing& r = pacing_[j];
    auto violation = [&](int rule, const Lookup& l, const std::string& msg) {
      errors.push_back(Diagnostic{ErrorKind::AccessRuleViolation,
                                  "'" + o.name + "' -> '" + l.node->name + "': " + msg, l.node->line,
                                  l.node->col, rule});
    };
    for (const auto& l : lookups_[j]) {
      if (l.access == Access::Window) {
        if (!r.periodic)
          errors.push_back(Diagnostic{ErrorKind::WindowInEventBasedStream,
                                      "window in event-based stream '" + o.name + "'", l.node->line,
                                      l.node->col});
        continue;
      }
      if (l.access == Access::Hold) continue;
      const bool zero = l.access == Access::Sync || l.offset == 0;
      if (l.target == out_id(j)) {
        if (zero) violation(5, l, "a stream cannot access itself with offset 0");
        continue;
      }
      if (l.target == time_id()) {
        if (!zero && r.periodic) violation(3, l, "periodic streams access 'time' history only via hold");
        continue;
      }
      const bool target_periodic =
          is_output(l.target) && pacing_[static_cast<std::size_t>(out_index(l.target))].periodic;
      if (!r.periodic && target_periodic) {
        violation(1, l, "event-based streams access periodic streams only via hold");
      } else if (r.periodic && !target_periodic) {
        violation(3, l, "periodic streams access event-based streams only via hold");
      } else if (r.periodic && target_periodic) {
        const Rational ratio = pacing_[static_cast<std::size_t>(out_index(l.target))].frequency / r.frequency;
        if (ratio.denominator() != 1)
          violation(4, l, "target frequency is not an integer multiple of the reader's");
      }
    }
  }

  Spec& spec_;
  std::vector<StreamInfo> streams_;
  std::map<std::string, int> stream_ids_;
  std::map<std::string, int> const_ids_;
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<std::vector<Lookup>> lookups_;
  std::vector<Pacing> pacing_;
};

}  // namespace

std::vector<Pacing> check_types_and_pacing(Spec& desugared) {
  Analyzer an(desugared);
  an.check_types();
  return an.check_pacing();
}

AnalyzedSpec analyze(const Spec& parsed, const AnalysisOptions& options) {
  AnalyzedSpec a;
  a.spec = desugar(parsed);
  Analyzer an(a.spec);
  an.check_types();
  a.pacing = an.check_pacing();
  an.compute_layers(a);
  an.compute_memory(a);
  an.compute_schedule_tables(a);
  a.streams = an.streams();

  a.n_in = static_cast<int>(a.spec.inputs.size());
  a.n_out = static_cast<int>(a.spec.outputs.size());
  a.n_trig = static_cast<int>(a.spec.triggers.size());
  for (const auto& c : a.spec.constants) a.constants.push_back(c.value);
  for (const auto& t : a.spec.triggers) a.trigger_outputs.push_back(t.output);

  a.event_outputs.assign(static_cast<std::size_t>(a.n_out), false);
  a.dep.assign(static_cast<std::size_t>(a.n_in), std::vector<bool>(static_cast<std::size_t>(a.n_out), false));
  for (int j = 0; j < a.n_out; ++j) {
    const Pacing& p = a.pacing[static_cast<std::size_t>(j)];
    if (p.periodic) continue;
    a.event_outputs[static_cast<std::size_t>(j)] = true;
    for (int i : p.inputs) a.dep[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  }

  a.s_ev = a.s_ts + a.n_out;
  for (int i = 0; i < a.n_in; ++i) {
    a.s_in.push_back(a.streams[static_cast<std::size_t>(i)].type.bits());
    a.s_ev += a.s_in.back() + 1;
  }

  if (options.dld_bound) {
    a.dld_bound = options.dld_bound;
  } else if (a.deadlines.empty()) {
    a.dld_bound = 0;
  } else {
    a.dld_bound = (a.hyper_period_ns + a.min_deadline_gap_ns - 1) / a.min_deadline_gap_ns;
  }
  try {
    a.buffer_size = compute_buffer_size(*a.dld_bound, options.delta_min);
  } catch (const SpecError&) {
    a.buffer_size.reset();
  }
  return a;
}

AnalyzedSpec analyze_source(std::string_view source, const AnalysisOptions& options) {
  return analyze(parse(source), options);
}

std::string AnalyzedSpec::report() const {
  std::ostringstream os;
  os << "inputs " << n_in << ", outputs " << n_out << ", triggers " << n_trig << ", windows "
     << windows.size() << "\n";
  os << "widths: s_ts=" << s_ts << " s_ev=" << s_ev;
  for (int i = 0; i < n_in; ++i) os << " s_" << streams[static_cast<std::size_t>(i)].name << "=" << s_in[static_cast<std::size_t>(i)];
  os << "\n";
  os << "streams:\n";
  for (const auto& s : streams) {
    os << "  " << s.name << ": " << s.type.name() << " capa=" << s.capa;
    if (s.kind == StreamKind::Output) {
      os << " " << pacing[static_cast<std::size_t>(s.index)].to_string(streams) << " layer="
         << layer_of[static_cast<std::size_t>(s.index)];
      if (spec.outputs[static_cast<std::size_t>(s.index)].trigger >= 0)
        os << " trigger=" << spec.outputs[static_cast<std::size_t>(s.index)].trigger;
    }
    os << "\n";
  }
  os << "layers: " << depth << "\n";
  for (std::size_t l = 0; l < layers.size(); ++l) {
    os << "  " << (l + 1) << ":";
    for (int j : layers[l]) os << " " << spec.outputs[static_cast<std::size_t>(j)].name;
    os << "\n";
  }
  if (deadlines.empty()) {
    os << "schedule: none\n";
  } else {
    os << "hyper-period: " << format_rational(hyper_period) << "s, deadlines: " << deadlines.size() << "\n";
    for (const auto& d : deadlines) {
      os << "  " << format_rational(d.offset) << "s:";
      for (int j : d.outputs) os << " " << spec.outputs[static_cast<std::size_t>(j)].name;
      os << "\n";
    }
  }
  for (const auto& w : windows) {
    os << "window " << w.id << ": " << streams[static_cast<std::size_t>(w.target)].name << " "
       << aggregation_name(w.agg) << " over " << format_rational(w.duration) << "s in "
       << spec.outputs[static_cast<std::size_t>(w.reader)].name << ", buckets=" << w.buckets << "\n";
  }
  os << "dld bound: " << (dld_bound ? std::to_string(*dld_bound) : "-") << ", buffer size: "
     << (buffer_size ? std::to_string(*buffer_size) : "unbounded") << "\n";
  return os.str();
}

}  // namespace streamhw
