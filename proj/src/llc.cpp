#include "streamhw/llc.hpp"

#include <algorithm>

namespace streamhw {

void StreamStore::shift_in(Slot s) {
  std::rotate(slots_.begin(), slots_.begin() + 1, slots_.end());
  slots_.back() = s;
}

void StreamStore::overwrite_newest(std::uint64_t raw) { slots_.back() = Slot{raw, SlotTag::Valid}; }

bool StreamStore::has_pseudo() const {
  return std::any_of(slots_.begin(), slots_.end(), [](const Slot& s) { return s.tag == SlotTag::Pseudo; });
}

const char* llq_state_name(LlqState s) {
  switch (s) {
    case LlqState::Idle: return "idle";
    case LlqState::Pop: return "pop";
    case LlqState::Eval: return "eval";
  }
  return "?";
}

namespace {

Value read_valid(const StreamStore& store, const Slot& s) { return Value::from_raw(store.type(), s.raw); }

Value sync_read(const Expr& e, const EvalContext& ctx) {
  if (e.ref == ctx.spec.time_id()) return Value::of_int(ValueType::uint_type(64), ctx.now);
  const StreamStore& store = ctx.stores[static_cast<std::size_t>(e.ref)];
  if (store.newest().tag != SlotTag::Valid)
    throw EvaluationOfUnextendedDependency("synchronous read of '" + e.name + "' before it was evaluated");
  return read_valid(store, store.newest());
}

std::optional<Value> access(const Expr& e, const EvalContext& ctx) {
  switch (e.kind) {
    case ExprKind::Offset: {
      if (e.offset == 0) return sync_read(e, ctx);
      const StreamStore& store = ctx.stores[static_cast<std::size_t>(e.ref)];
      const std::int64_t idx = store.capa() + e.offset;
      if (idx < 0) return std::nullopt;
      const Slot& s = store.slot(static_cast<int>(idx));
      if (s.tag != SlotTag::Valid) return std::nullopt;
      return read_valid(store, s);
    }
    case ExprKind::Hold: {
      const StreamStore& store = ctx.stores[static_cast<std::size_t>(e.ref)];
      // State as of phase one: a value produced in this cycle is not held yet.
      int k = ctx.extended[static_cast<std::size_t>(e.ref)] ? store.capa() - 1 : store.capa();
      for (; k >= 0; --k)
        if (store.slot(k).tag == SlotTag::Valid) return read_valid(store, store.slot(k));
      return std::nullopt;
    }
    case ExprKind::Window:
      return ctx.windows[static_cast<std::size_t>(e.window_id)].aggregate(ctx.now);
    default:
      return evaluate_expression(e, ctx);
  }
}

}  // namespace

Value evaluate_expression(const Expr& e, const EvalContext& ctx) {
  switch (e.kind) {
    case ExprKind::IntLit:
      return Value::of_int(e.type, e.int_value);
    case ExprKind::BoolLit:
      return Value::boolean(e.bool_value);
    case ExprKind::Ref:
      if (e.ref_kind == RefKind::Constant) return cast(ctx.spec.constants[static_cast<std::size_t>(e.ref)], e.type);
      return cast(sync_read(e, ctx), e.type);
    case ExprKind::Default: {
      auto v = access(*e.args[0], ctx);
      return cast(v ? *v : evaluate_expression(*e.args[1], ctx), e.type);
    }
    case ExprKind::Unary:
      return apply_unary(e.unop, cast(evaluate_expression(*e.args[0], ctx), e.type));
    case ExprKind::Binary: {
      Value a = evaluate_expression(*e.args[0], ctx);
      Value b = evaluate_expression(*e.args[1], ctx);
      return cast(apply_binary(e.binop, a, b, e.operand_type), e.type);
    }
    case ExprKind::Ite:
      return cast(evaluate_expression(*e.args[evaluate_expression(*e.args[0], ctx).as_bool() ? 1 : 2], ctx),
                  e.type);
    case ExprKind::Offset:
    case ExprKind::Hold:
    case ExprKind::Window:
    case ExprKind::Delta:
      break;
  }
  throw InternalError("expression node without evaluation rule");
}

Llc::Llc(const AnalyzedSpec& spec, LlcConfig config, QueuePort& queue)
    : spec_(spec), cfg_(config), queue_(queue), layout_(EntryLayout::of(spec)) {
  for (const auto& s : spec.streams) stores_.emplace_back(s.type, s.capa);
  extended_.assign(spec.streams.size(), false);
  window_readers_.assign(static_cast<std::size_t>(spec.n_out), {});
  windows_on_.assign(spec.streams.size(), {});
  for (const auto& w : spec.windows) {
    window_readers_[static_cast<std::size_t>(w.reader)].push_back(w.id);
    windows_on_[static_cast<std::size_t>(w.target)].push_back(w.id);
  }
  trig_.assign(static_cast<std::size_t>(spec.n_trig), false);
}

std::string Llc::ec_state() const {
  switch (ec_phase_) {
    case Phase::Idle: return "idle";
    case Phase::One: return "1";
    case Phase::Two: return "2." + std::to_string(layer_ + 1);
  }
  return "?";
}

bool Llc::pseudo_free() const {
  return std::none_of(stores_.begin(), stores_.end(), [](const StreamStore& s) { return s.has_pseudo(); });
}

void Llc::run_phase_one() {
  const std::uint64_t ts = entry_.ts;
  if (!windows_ready_) {
    const std::uint64_t start = cfg_.mode == Mode::Offline ? ts : 0;
    for (const auto& plan : spec_.windows) windows_.emplace_back(plan, start);
    windows_ready_ = true;
  }
  std::fill(extended_.begin(), extended_.end(), false);

  bool any_input = false;
  for (int i = 0; i < spec_.n_in; ++i) {
    if (!entry_.present[static_cast<std::size_t>(i)]) continue;
    stores_[static_cast<std::size_t>(i)].shift_in(Slot{entry_.values[static_cast<std::size_t>(i)], SlotTag::Valid});
    any_input = true;
  }
  const int time = spec_.time_id();
  if (any_input) stores_[static_cast<std::size_t>(time)].shift_in(Slot{ts, SlotTag::Valid});
  for (int j = 0; j < spec_.n_out; ++j) {
    if (!entry_.affected[static_cast<std::size_t>(j)]) continue;
    const int id = spec_.output_id(j);
    stores_[static_cast<std::size_t>(id)].shift_in(Slot{0, SlotTag::Pseudo});
    extended_[static_cast<std::size_t>(id)] = true;
  }

  std::uint64_t shifts = 0;
  for (auto& w : windows_) shifts = std::max(shifts, w.evict(ts));

  for (int i = 0; i <= time; ++i) {
    const bool fresh = i == time ? any_input : static_cast<bool>(entry_.present[static_cast<std::size_t>(i)]);
    if (!fresh) continue;
    const StreamStore& s = stores_[static_cast<std::size_t>(i)];
    for (int w : windows_on_[static_cast<std::size_t>(i)])
      windows_[static_cast<std::size_t>(w)].add(ts, Value::from_raw(s.type(), s.newest().raw));
  }
  remaining_ = std::max<std::uint64_t>(1, shifts);
}

std::uint64_t Llc::run_layer(std::size_t layer, std::vector<int>& evaluated) {
  const EvalContext ctx{spec_, stores_, windows_, extended_, entry_.ts};
  bool reads_window = false;
  std::vector<std::pair<int, Value>> produced;
  for (int j : spec_.layers[layer]) {
    if (!entry_.affected[static_cast<std::size_t>(j)]) continue;
    const int id = spec_.output_id(j);
    StreamStore& store = stores_[static_cast<std::size_t>(id)];
    const Value v = cast(evaluate_expression(*spec_.output(j).expr, ctx), store.type());
    store.overwrite_newest(v.raw);
    evaluated.push_back(j);
    produced.emplace_back(id, v);
    reads_window |= !window_readers_[static_cast<std::size_t>(j)].empty();
    if (on_value) on_value(j, entry_.ts, v);
  }
  // Windows over streams of this layer absorb once the layer is done.
  for (const auto& [id, v] : produced)
    for (int w : windows_on_[static_cast<std::size_t>(id)]) windows_[static_cast<std::size_t>(w)].add(entry_.ts, v);
  if (produced.empty()) return 1;
  return 1 + cfg_.expr_latency + (reads_window ? 1 : 0);
}

void Llc::finish_entry() {
  for (int k = 0; k < spec_.n_trig; ++k) {
    const int j = spec_.trigger_outputs[static_cast<std::size_t>(k)];
    trig_[static_cast<std::size_t>(k)] =
        entry_.affected[static_cast<std::size_t>(j)] && store(spec_.output_id(j)).newest().raw != 0;
  }
  een_ = false;
  ec_phase_ = Phase::Idle;
  ++stats_.entries;
  if (on_entry_done) on_entry_done(entry_.ts, trig_);
}

std::optional<std::vector<bool>> Llc::step() {
  CycleRecord rec;
  rec.cycle = stats_.cycles++;
  rec.llq = llq_;
  rec.ec = ec_state();
  if (ec_phase_ != Phase::Idle) ++stats_.busy_cycles;

  std::optional<std::vector<bool>> done;
  switch (ec_phase_) {
    case Phase::Idle:
      if (een_) {
        ec_phase_ = Phase::One;
        state_started_ = false;
      }
      break;
    case Phase::One:
      if (!state_started_) {
        run_phase_one();
        state_started_ = true;
      }
      if (--remaining_ == 0) {
        state_started_ = false;
        layer_ = 0;
        if (spec_.depth > 0) {
          ec_phase_ = Phase::Two;
        } else {
          finish_entry();
          done = trig_;
        }
      }
      break;
    case Phase::Two:
      if (!state_started_) {
        remaining_ = run_layer(layer_, rec.evaluated);
        state_started_ = true;
      }
      if (--remaining_ == 0) {
        state_started_ = false;
        if (++layer_ == static_cast<std::size_t>(spec_.depth)) {
          layer_ = 0;
          finish_entry();
          done = trig_;
        }
      }
      break;
  }

  switch (llq_) {
    case LlqState::Idle:
      if (!queue_.empty()) llq_ = LlqState::Pop;
      break;
    case LlqState::Pop: {
      auto bits = queue_.pop();
      if (!bits) {
        llq_ = LlqState::Idle;
        break;
      }
      try {
        entry_ = deserialize(*bits, layout_);
      } catch (const MalformedEntry&) {
        ++stats_.malformed;
        throw;
      }
      een_ = true;
      llq_ = LlqState::Eval;
      break;
    }
    case LlqState::Eval:
      if (!een_) llq_ = queue_.empty() ? LlqState::Idle : LlqState::Pop;
      break;
  }

  if (on_cycle) on_cycle(rec);
  return done;
}

}  // namespace streamhw
