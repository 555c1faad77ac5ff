#include "streamhw/hlc.hpp"

#include <stdexcept>

namespace streamhw {

HlcConfig HlcConfig::from(const AnalyzedSpec& a, Mode mode, std::uint64_t xi_ns, std::uint32_t prescale,
                          std::size_t buffer_size) {
  HlcConfig c;
  c.mode = mode;
  c.xi_ns = xi_ns;
  c.prescale = prescale;
  c.buffer_size = buffer_size;
  c.layout = EntryLayout::of(a);
  c.dep = a.dep;
  c.event_outputs = a.event_outputs;
  c.dltarget = a.dltarget;
  for (const auto& d : a.deadlines) c.offsets_ns.push_back(d.offset_ns);
  c.hyper_period_ns = a.hyper_period_ns;
  return c;
}

Hlc::Hlc(HlcConfig config, QueuePort& queue)
    : cfg_(std::move(config)), queue_(queue), buffer_(cfg_.buffer_size) {
  if (cfg_.prescale < 2 || cfg_.prescale % 2 != 0)
    throw std::invalid_argument("prescale must be an even number >= 2");
  if (cfg_.xi_ns == 0) throw std::invalid_argument("system clock period must be positive");
  din_.present.assign(cfg_.layout.input_bits.size(), false);
  din_.values.assign(cfg_.layout.input_bits.size(), 0);
}

bool Hlc::offer_event(const RawEvent& ev) {
  if (ev.present.size() != cfg_.layout.input_bits.size() || ev.values.size() != ev.present.size())
    throw std::invalid_argument("event does not match the number of inputs");
  if (cfg_.mode == Mode::Offline) {
    if (!ev.ts) throw std::invalid_argument("offline events need a timestamp");
    if (last_offer_ts_ && *ev.ts < *last_offer_ts_) throw std::invalid_argument("offline timestamps must not decrease");
  }
  ++stats_.offered;
  if (avail_) {
    ++stats_.rejected;
    return false;
  }
  ++stats_.accepted;
  din_ = ev;
  avail_ = true;
  if (ev.ts) last_offer_ts_ = ev.ts;
  return true;
}

QueueEntry Hlc::encode_event(const RawEvent& ev, std::uint64_t ts) const {
  QueueEntry e = QueueEntry::empty(cfg_.layout);
  for (std::size_t i = 0; i < ev.present.size(); ++i) {
    e.present[i] = ev.present[i];
    e.values[i] = ev.present[i] ? ev.values[i] & width_mask(cfg_.layout.input_bits[i]) : 0;
  }
  e.ts = ts;
  // An event-based output is affected when none of its inputs is missing.
  for (std::size_t j = 0; j < e.affected.size(); ++j) {
    bool blocked = false;
    for (std::size_t i = 0; i < ev.present.size() && !blocked; ++i) blocked = !ev.present[i] && cfg_.dep[i][j];
    e.affected[j] = cfg_.event_outputs[j] && !blocked;
  }
  return e;
}

void Hlc::push(const QueueEntry& e, EntryKind kind, std::vector<QueueEntry>& out) {
  if (!queue_.push(serialize(e, cfg_.layout))) ++stats_.queue_overflows;
  if (kind == EntryKind::Event)
    ++stats_.events_pushed;
  else
    ++stats_.deadlines_pushed;
  if (on_push) on_push(tick_, kind, e);
  out.push_back(e);
}

std::vector<QueueEntry> Hlc::step_sclk() {
  std::vector<QueueEntry> out;
  if (cfg_.mode == Mode::Online) reg_its_ = tick_ * cfg_.xi_ns;
  const std::uint64_t phase = tick_ % cfg_.prescale;
  if (phase == 0) {
    if (data_) {
      push(*data_, EntryKind::Event, out);
      data_.reset();
    }
    hclk_cycle();
  } else if (phase == cfg_.prescale / 2 && deadline_out_) {
    push(*deadline_out_, EntryKind::Deadline, out);
    deadline_out_.reset();
  }
  ++tick_;
  return out;
}

void Hlc::hclk_cycle() {
  ++stats_.hclk_cycles;
  const bool online = cfg_.mode == Mode::Online;

  std::optional<QueueEntry> arriving;
  if (avail_) {
    arriving = encode_event(din_, online ? reg_its_ : *din_.ts);
    avail_ = false;
  }
  const QueueEntry* head = !buffer_.empty() ? &buffer_.front() : (arriving ? &*arriving : nullptr);
  if (!online && head) reg_its_ = head->ts;

  bool init_cycle = false;
  if (!initialized_ && (online || head)) {
    period_ = online ? 0 : head->ts;
    did_ = 0;
    initialized_ = true;
    init_cycle = true;
  }

  bool prog = false;
  if (initialized_ && !init_cycle && !cfg_.offsets_ns.empty() && (online || head)) {
    // A waiting event pins the time base so entries leave in timestamp order.
    const std::uint64_t its = head ? head->ts : reg_its_;
    const std::uint64_t due = period_ + cfg_.offsets_ns[did_];
    prog = its >= due && (!horizon_ || due <= *horizon_);
    if (prog) {
      QueueEntry dl = QueueEntry::empty(cfg_.layout);
      dl.ts = due;
      for (std::size_t j = 0; j < dl.affected.size(); ++j) dl.affected[j] = cfg_.dltarget[did_][j];
      deadline_out_ = std::move(dl);
      ++stats_.deadlines_fired;
      if (++did_ == cfg_.offsets_ns.size()) {
        did_ = 0;
        period_ += cfg_.hyper_period_ns;
      }
    }
  }

  const bool hold = prog;
  if (!hold) {
    if (!buffer_.empty()) {
      data_ = buffer_.pop();
    } else if (arriving) {
      data_ = std::move(arriving);
      arriving.reset();
    }
  }
  if (arriving) {
    if (!buffer_.push(std::move(*arriving))) ++stats_.buffer_overflows;
    stats_.buffer_high_water = std::max<std::uint64_t>(stats_.buffer_high_water, buffer_.size());
  }
}

bool Hlc::idle() const { return !avail_ && buffer_.empty() && !data_ && !deadline_out_; }

std::optional<std::uint64_t> Hlc::next_deadline_tick() const {
  if (cfg_.mode != Mode::Online || cfg_.offsets_ns.empty()) return std::nullopt;
  if (!initialized_) return 0;
  const std::uint64_t due = period_ + cfg_.offsets_ns[did_];
  if (horizon_ && due > *horizon_) return std::nullopt;
  std::uint64_t t = (due + cfg_.xi_ns - 1) / cfg_.xi_ns;
  t = (t + cfg_.prescale - 1) / cfg_.prescale * cfg_.prescale;
  return t;
}

void Hlc::skip_to(std::uint64_t tick) {
  if (tick <= tick_) return;
  if (!idle()) throw std::logic_error("cannot skip time while the HLC is busy");
  const std::uint64_t p = cfg_.prescale;
  // hclk edges in [tick_, tick)
  stats_.hclk_cycles += (tick + p - 1) / p - (tick_ + p - 1) / p;
  tick_ = tick;
  if (cfg_.mode == Mode::Online) reg_its_ = tick_ * cfg_.xi_ns;
}

std::vector<bool> Hlc::did() const {
  std::vector<bool> bits(cfg_.offsets_ns.size(), false);
  if (initialized_ && !bits.empty()) bits[did_] = true;
  return bits;
}

}  // namespace streamhw
