#include "streamhw/hdl.hpp"

#include <map>
#include <regex>
#include <sstream>

namespace streamhw {

namespace {

std::string vec(std::int64_t width) { return "std_logic_vector(" + std::to_string(width - 1) + " downto 0)"; }

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789ABCDEF";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return "x\"" + s + "\"";
}

std::string bits(const std::vector<bool>& row) {
  // Bit j of the vector is output j, so the string reads from the last output down.
  std::string s = "\"";
  for (std::size_t j = row.size(); j-- > 0;) s += row[j] ? '1' : '0';
  return s + "\"";
}

std::string ident(const std::string& name) {
  std::string out;
  if (name.rfind("_t", 0) == 0) return "trigger_" + name.substr(2);
  for (char c : name) {
    if (c == '_' && (out.empty() || out.back() == '_')) continue;
    out += c;
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string store_unit(const AnalyzedSpec& a, int stream) {
  const StreamInfo& s = a.streams[static_cast<std::size_t>(stream)];
  return (s.kind == StreamKind::Output ? "out_" : "in_") + ident(s.name);
}

int s_in_total(const AnalyzedSpec& a) {
  int n = 0;
  for (int s : a.s_in) n += s + 1;
  return n;
}

class Unit {
 public:
  explicit Unit(std::string name) : name_(std::move(name)) {
    line("-- " + name_ + ".vhd: generated, do not edit");
    line("library ieee;");
    line("use ieee.std_logic_1164.all;");
    line("use ieee.numeric_std.all;");
  }

  void line(const std::string& s = {}) { out_ << std::string(static_cast<std::size_t>(indent_) * 2, ' ') << s << '\n'; }
  void in() { ++indent_; }
  void out() { --indent_; }

  void entity(const std::vector<std::pair<std::string, std::int64_t>>& generics,
              const std::vector<std::string>& ports) {
    line("use work.monitor_pkg.all;");
    line();
    line("entity " + name_ + " is");
    in();
    if (!generics.empty()) {
      line("generic (");
      in();
      for (std::size_t i = 0; i < generics.size(); ++i)
        line(generics[i].first + " : natural := " + std::to_string(generics[i].second) +
             (i + 1 < generics.size() ? ";" : ""));
      out();
      line(");");
    }
    line("port (");
    in();
    for (std::size_t i = 0; i < ports.size(); ++i) line(ports[i] + (i + 1 < ports.size() ? ";" : ""));
    out();
    line(");");
    out();
    line("end entity " + name_ + ";");
    line();
  }

  void begin_arch() {
    line("architecture rtl of " + name_ + " is");
  }
  void end_arch() { line("end architecture rtl;"); }

  HdlUnit take() { return HdlUnit{name_, out_.str()}; }

 private:
  std::string name_;
  std::ostringstream out_;
  int indent_ = 0;
};

std::string port(const std::string& name, const char* dir, const std::string& type) {
  return name + " : " + dir + " " + type;
}

class Emitter {
 public:
  Emitter(const AnalyzedSpec& a, const HlcConfig& cfg, std::size_t depth) : a_(a), cfg_(cfg), depth_(depth) {}

  std::vector<HdlUnit> run() {
    package();
    prescaler();
    ext_interface();
    time_select();
    if (a_.n_dl() > 0) scheduler();
    event_delay();
    hlq_interface();
    queue();
    llq_interface();
    eval_controller();
    for (std::size_t s = 0; s < a_.streams.size(); ++s) stream_store(static_cast<int>(s));
    for (const auto& w : a_.windows) window(w);
    top();
    return std::move(units_);
  }

 private:
  bool offline() const { return cfg_.mode == Mode::Offline; }

  void package() {
    std::ostringstream o;
    o << "-- monitor_pkg.vhd: generated, do not edit\n";
    o << "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;\n\n";
    o << "package monitor_pkg is\n";
    o << "  constant S_EV : natural := " << a_.s_ev << ";\n";
    o << "  constant S_TS : natural := " << a_.s_ts << ";\n";
    o << "  constant N_IN : natural := " << a_.n_in << ";\n";
    o << "  constant N_OUT : natural := " << a_.n_out << ";\n";
    o << "  constant N_TRIG : natural := " << a_.n_trig << ";\n";
    o << "  constant N_DL : natural := " << a_.n_dl() << ";\n";
    for (int i = 0; i < a_.n_in; ++i)
      o << "  constant S_IN_" << ident(a_.streams[static_cast<std::size_t>(i)].name) << " : natural := "
        << a_.s_in[static_cast<std::size_t>(i)] << ";\n";
    if (a_.n_out > 0) {
      o << "\n  subtype out_mask is std_logic_vector(N_OUT - 1 downto 0);\n";
      o << "  type dep_table is array (0 to N_IN - 1) of out_mask;\n";
      o << "  constant DEP : dep_table := (\n";
      for (int i = 0; i < a_.n_in; ++i)
        o << "    " << i << " => " << bits(a_.dep[static_cast<std::size_t>(i)]) << (i + 1 < a_.n_in ? ",\n" : "\n");
      if (a_.n_in == 0) o << "    others => (others => '0')\n";
      o << "  );\n";
      o << "  constant EVENT_OUTPUTS : out_mask := " << bits(a_.event_outputs) << ";\n";
    }
    if (a_.n_dl() > 0) {
      o << "\n  type dl_table is array (0 to N_DL - 1) of out_mask;\n";
      o << "  constant DLTARGET : dl_table := (\n";
      for (std::size_t d = 0; d < a_.n_dl(); ++d)
        o << "    " << d << " => " << bits(a_.dltarget[d]) << (d + 1 < a_.n_dl() ? ",\n" : "\n");
      o << "  );\n";
      o << "  type offset_table is array (0 to N_DL - 1) of unsigned(S_TS - 1 downto 0);\n";
      o << "  constant DL_OFFSET : offset_table := (\n";
      for (std::size_t d = 0; d < a_.n_dl(); ++d)
        o << "    " << d << " => unsigned'(" << hex64(a_.deadlines[d].offset_ns) << ")"
          << (d + 1 < a_.n_dl() ? ",\n" : "\n");
      o << "  );\n";
      o << "  constant HYPER_PERIOD : unsigned(S_TS - 1 downto 0) := unsigned'(" << hex64(a_.hyper_period_ns)
        << ");\n";
    }
    o << "end package monitor_pkg;\n";
    units_.push_back(HdlUnit{"monitor_pkg", o.str()});
  }

  void prescaler() {
    Unit u("prescaler");
    u.entity({{"PRESCALE", cfg_.prescale}},
             {port("sclk", "in", "std_logic"), port("rst", "in", "std_logic"), port("hclk", "out", "std_logic"),
              port("qclk", "out", "std_logic")});
    u.begin_arch();
    u.line("  signal count : natural range 0 to PRESCALE - 1 := 0;");
    u.line("begin");
    u.line("  process (sclk) begin");
    u.line("    if rising_edge(sclk) then");
    u.line("      if rst = '1' or count = PRESCALE - 1 then count <= 0; else count <= count + 1; end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.line("  hclk <= '1' when count = 0 else '0';");
    u.line("  qclk <= '1' when count = 0 or count = PRESCALE / 2 else '0';");
    u.end_arch();
    units_.push_back(u.take());
  }

  void ext_interface() {
    Unit u("ext_interface");
    const int w = s_in_total(a_);
    std::vector<std::string> ports = {port("hclk", "in", "std_logic"), port("rst", "in", "std_logic"),
                                      port("external", "in", "std_logic"), port("ev_in", "in", vec(w))};
    if (offline()) ports.push_back(port("ts_in", "in", vec(a_.s_ts)));
    ports.push_back(port("consumed", "in", "std_logic"));
    ports.push_back(port("avail", "out", "std_logic"));
    ports.push_back(port("ev_out", "out", vec(w)));
    if (offline()) ports.push_back(port("ts_out", "out", vec(a_.s_ts)));
    u.entity({}, ports);
    u.begin_arch();
    u.line("begin");
    u.line("  process (hclk) begin");
    u.line("    if rising_edge(hclk) then");
    u.line("      if rst = '1' or consumed = '1' then avail <= '0';");
    u.line("      elsif external = '1' then");
    u.line("        avail <= '1';");
    u.line("        ev_out <= ev_in;");
    if (offline()) u.line("        ts_out <= ts_in;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.end_arch();
    units_.push_back(u.take());
  }

  void time_select() {
    Unit u("time_select");
    std::vector<std::string> ports = {port("sclk", "in", "std_logic"), port("rst", "in", "std_logic")};
    if (offline()) ports.push_back(port("ts_ext", "in", vec(a_.s_ts)));
    ports.push_back(port("its", "out", vec(a_.s_ts)));
    u.entity({{"XI_NS", static_cast<std::int64_t>(cfg_.xi_ns)}}, ports);
    u.begin_arch();
    if (offline()) {
      u.line("begin");
      u.line("  its <= ts_ext;");
    } else {
      u.line("  signal clock : unsigned(S_TS - 1 downto 0) := (others => '0');");
      u.line("begin");
      u.line("  process (sclk) begin");
      u.line("    if rising_edge(sclk) then");
      u.line("      if rst = '1' then clock <= (others => '0'); else clock <= clock + XI_NS; end if;");
      u.line("    end if;");
      u.line("  end process;");
      u.line("  its <= std_logic_vector(clock);");
    }
    u.end_arch();
    units_.push_back(u.take());
  }

  void scheduler() {
    Unit u("scheduler");
    const auto n_dl = static_cast<std::int64_t>(a_.n_dl());
    u.entity({{"N_DEADLINES", n_dl}},
             {port("hclk", "in", "std_logic"), port("rst", "in", "std_logic"), port("start", "in", "std_logic"),
              port("its", "in", vec(a_.s_ts)), port("prog", "out", "std_logic"),
              port("dl", "out", vec(a_.n_out)), port("did", "out", vec(n_dl)),
              port("period", "out", vec(a_.s_ts))});
    u.begin_arch();
    u.line("  signal did_r : std_logic_vector(N_DEADLINES - 1 downto 0) := (others => '0');");
    u.line("  signal period_r : unsigned(S_TS - 1 downto 0) := (others => '0');");
    u.line("  signal offset : unsigned(S_TS - 1 downto 0);");
    u.line("  signal fire : std_logic;");
    u.line("begin");
    u.line("  -- offset(did): bitwise or over the one-hot selected rows");
    u.line("  process (did_r) variable acc : unsigned(S_TS - 1 downto 0); begin");
    u.line("    acc := (others => '0');");
    u.line("    for d in 0 to N_DEADLINES - 1 loop");
    u.line("      if did_r(d) = '1' then acc := acc or DL_OFFSET(d); end if;");
    u.line("    end loop;");
    u.line("    offset <= acc;");
    u.line("  end process;");
    u.line("  fire <= '1' when did_r /= (did_r'range => '0') and unsigned(its) >= period_r + offset else '0';");
    u.line("  process (hclk) begin");
    u.line("    if rising_edge(hclk) then");
    u.line("      if rst = '1' then");
    u.line("        did_r <= (others => '0');");
    u.line("      elsif did_r = (did_r'range => '0') and start = '1' then");
    u.line("        did_r <= (0 => '1', others => '0');");
    u.line("        period_r <= unsigned(its);");
    u.line("      elsif fire = '1' then");
    if (n_dl > 1)
      u.line("        did_r <= did_r(N_DEADLINES - 2 downto 0) & did_r(N_DEADLINES - 1);");
    u.line("        if did_r(N_DEADLINES - 1) = '1' then period_r <= period_r + HYPER_PERIOD; end if;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.line("  process (did_r) variable acc : std_logic_vector(N_OUT - 1 downto 0); begin");
    u.line("    acc := (others => '0');");
    u.line("    for d in 0 to N_DEADLINES - 1 loop");
    u.line("      if did_r(d) = '1' then acc := acc or DLTARGET(d); end if;");
    u.line("    end loop;");
    u.line("    dl <= acc;");
    u.line("  end process;");
    u.line("  prog <= fire;");
    u.line("  did <= did_r;");
    u.line("  period <= std_logic_vector(period_r);");
    u.end_arch();
    units_.push_back(u.take());
  }

  void event_delay() {
    Unit u("event_delay");
    u.entity({{"BUFFER_SIZE", static_cast<std::int64_t>(cfg_.buffer_size)}},
             {port("hclk", "in", "std_logic"), port("rst", "in", "std_logic"), port("ev_valid", "in", "std_logic"),
              port("ev_in", "in", vec(a_.s_ev)), port("hold", "in", "std_logic"),
              port("data_valid", "out", "std_logic"), port("ev_out", "out", vec(a_.s_ev))});
    u.begin_arch();
    u.line("  type entry_buffer is array (0 to BUFFER_SIZE - 1) of std_logic_vector(S_EV - 1 downto 0);");
    u.line("  signal buf : entry_buffer;");
    u.line("  signal fill : natural range 0 to BUFFER_SIZE := 0;");
    u.line("begin");
    u.line("  process (hclk) begin");
    u.line("    if rising_edge(hclk) then");
    u.line("      data_valid <= '0';");
    u.line("      if rst = '1' then");
    u.line("        fill <= 0;");
    u.line("      elsif hold = '0' and fill > 0 then");
    u.line("        ev_out <= buf(0);");
    u.line("        data_valid <= '1';");
    u.line("        for k in 0 to BUFFER_SIZE - 2 loop buf(k) <= buf(k + 1); end loop;");
    u.line("        if ev_valid = '1' then buf(fill - 1) <= ev_in; else fill <= fill - 1; end if;");
    u.line("      elsif hold = '0' and ev_valid = '1' then");
    u.line("        ev_out <= ev_in;");
    u.line("        data_valid <= '1';");
    u.line("      elsif ev_valid = '1' and fill < BUFFER_SIZE then");
    u.line("        buf(fill) <= ev_in;");
    u.line("        fill <= fill + 1;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.end_arch();
    units_.push_back(u.take());
  }

  void hlq_interface() {
    Unit u("hlq_interface");
    const bool with_dl = a_.n_dl() > 0;
    std::vector<std::string> ports = {port("qclk", "in", "std_logic"), port("phase", "in", "std_logic"),
                                      port("ev_valid", "in", "std_logic"), port("ev", "in", vec(a_.s_ev))};
    if (with_dl) {
      ports.push_back(port("dl_valid", "in", "std_logic"));
      ports.push_back(port("dl", "in", vec(a_.n_out)));
      ports.push_back(port("dl_ts", "in", vec(a_.s_ts)));
    }
    ports.push_back(port("push", "out", "std_logic"));
    ports.push_back(port("dout", "out", vec(a_.s_ev)));
    u.entity({}, ports);
    u.begin_arch();
    u.line("begin");
    u.line("  -- even phase: events, odd phase: deadlines");
    u.line("  process (qclk) begin");
    u.line("    if rising_edge(qclk) then");
    u.line("      push <= '0';");
    u.line("      if phase = '0' and ev_valid = '1' then");
    u.line("        dout <= ev;");
    u.line("        push <= '1';");
    if (with_dl) {
      u.line("      elsif phase = '1' and dl_valid = '1' then");
      u.line("        dout <= (S_EV - 1 downto S_TS + N_OUT => '0') & dl_ts & dl;");
      u.line("        push <= '1';");
    }
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.end_arch();
    units_.push_back(u.take());
  }

  void queue() {
    Unit u("queue");
    u.entity({{"DEPTH", static_cast<std::int64_t>(depth_)}},
             {port("sclk", "in", "std_logic"), port("rst", "in", "std_logic"), port("push", "in", "std_logic"),
              port("din", "in", vec(a_.s_ev)), port("pop", "in", "std_logic"),
              port("dout", "out", vec(a_.s_ev)), port("empty", "out", "std_logic"),
              port("full", "out", "std_logic")});
    u.begin_arch();
    u.line("  type ring is array (0 to DEPTH - 1) of std_logic_vector(S_EV - 1 downto 0);");
    u.line("  signal mem : ring;");
    u.line("  signal head, tail : natural range 0 to DEPTH - 1 := 0;");
    u.line("  signal count : natural range 0 to DEPTH := 0;");
    u.line("begin");
    u.line("  process (sclk) begin");
    u.line("    if rising_edge(sclk) then");
    u.line("      if rst = '1' then");
    u.line("        head <= 0; tail <= 0; count <= 0;");
    u.line("      else");
    u.line("        if push = '1' and count < DEPTH then");
    u.line("          mem(tail) <= din;");
    u.line("          tail <= (tail + 1) mod DEPTH;");
    u.line("        end if;");
    u.line("        if pop = '1' and count > 0 then");
    u.line("          dout <= mem(head);");
    u.line("          head <= (head + 1) mod DEPTH;");
    u.line("        end if;");
    u.line("        if push = '1' and count < DEPTH and not (pop = '1' and count > 0) then count <= count + 1;");
    u.line("        elsif pop = '1' and count > 0 and not (push = '1' and count < DEPTH) then count <= count - 1;");
    u.line("        end if;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.line("  empty <= '1' when count = 0 else '0';");
    u.line("  full <= '1' when count = DEPTH else '0';");
    u.end_arch();
    units_.push_back(u.take());
  }

  void llq_interface() {
    Unit u("llq_interface");
    u.entity({}, {port("sclk", "in", "std_logic"), port("rst", "in", "std_logic"), port("empty", "in", "std_logic"),
                  port("din", "in", vec(a_.s_ev)), port("done", "in", "std_logic"),
                  port("pop", "out", "std_logic"), port("een", "out", "std_logic"),
                  port("tev", "out", vec(a_.s_ev))});
    u.begin_arch();
    u.line("  type llq_state is (idle, popping, eval);");
    u.line("  signal state : llq_state := idle;");
    u.line("begin");
    u.line("  process (sclk) begin");
    u.line("    if rising_edge(sclk) then");
    u.line("      pop <= '0';");
    u.line("      if rst = '1' then state <= idle; een <= '0';");
    u.line("      else");
    u.line("        case state is");
    u.line("          when idle => if empty = '0' then state <= popping; pop <= '1'; end if;");
    u.line("          when popping => tev <= din; een <= '1'; state <= eval;");
    u.line("          when eval =>");
    u.line("            if done = '1' then");
    u.line("              een <= '0';");
    u.line("              if empty = '0' then state <= popping; pop <= '1'; else state <= idle; end if;");
    u.line("            end if;");
    u.line("        end case;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.end_arch();
    units_.push_back(u.take());
  }

  std::string signal(int stream) const { return "v_" + ident(a_.streams[static_cast<std::size_t>(stream)].name); }

  std::string expr(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::IntLit:
        return std::string(e.type.is_signed() ? "to_signed(" : "to_unsigned(") +
               (e.type.is_signed() ? Value::of_int(e.type, e.int_value).to_string()
                                   : std::to_string(e.int_value)) +
               ", " + std::to_string(e.type.width) + ")";
      case ExprKind::BoolLit:
        return e.bool_value ? "true" : "false";
      case ExprKind::Ref:
        if (e.ref_kind == RefKind::Constant) return "C_" + ident(e.name);
        return signal(e.ref) + "(0)";
      case ExprKind::Default: {
        const Expr& acc = *e.args[0];
        const std::string fallback = expr(*e.args[1]);
        switch (acc.kind) {
          case ExprKind::Offset:
            return "pick(" + signal(acc.ref) + "_valid(" + std::to_string(-acc.offset) + "), " + signal(acc.ref) + "(" +
                   std::to_string(-acc.offset) + "), " + fallback + ")";
          case ExprKind::Hold:
            return "pick(" + signal(acc.ref) + "_any, " + signal(acc.ref) + "_newest, " + fallback + ")";
          case ExprKind::Window:
            return "pick(window_" + std::to_string(acc.window_id) + "_valid, window_" +
                   std::to_string(acc.window_id) + "_result, " + fallback + ")";
          default:
            return expr(acc);
        }
      }
      case ExprKind::Unary:
        switch (e.unop) {
          case UnaryOp::Not: return "(not " + expr(*e.args[0]) + ")";
          case UnaryOp::Neg: return "(-" + expr(*e.args[0]) + ")";
          case UnaryOp::Abs: return "abs(" + expr(*e.args[0]) + ")";
          case UnaryOp::Isqrt: return "isqrt(" + expr(*e.args[0]) + ")";
        }
        break;
      case ExprKind::Binary: {
        const std::string l = expr(*e.args[0]);
        const std::string r = expr(*e.args[1]);
        switch (e.binop) {
          case BinaryOp::Add: return "(" + l + " + " + r + ")";
          case BinaryOp::Sub: return "(" + l + " - " + r + ")";
          case BinaryOp::Mul: return "resize(" + l + " * " + r + ", " + std::to_string(e.type.width) + ")";
          case BinaryOp::Div: return "safe_div(" + l + ", " + r + ")";
          case BinaryOp::Lt: return "(" + l + " < " + r + ")";
          case BinaryOp::Le: return "(" + l + " <= " + r + ")";
          case BinaryOp::Gt: return "(" + l + " > " + r + ")";
          case BinaryOp::Ge: return "(" + l + " >= " + r + ")";
          case BinaryOp::Eq: return "(" + l + " = " + r + ")";
          case BinaryOp::Ne: return "(" + l + " /= " + r + ")";
          case BinaryOp::And: return "(" + l + " and " + r + ")";
          case BinaryOp::Or: return "(" + l + " or " + r + ")";
        }
        break;
      }
      case ExprKind::Ite:
        return "sel(" + expr(*e.args[0]) + ", " + expr(*e.args[1]) + ", " + expr(*e.args[2]) + ")";
      default:
        break;
    }
    throw SpecError(Diagnostic{ErrorKind::UnsupportedConstruct,
                               "no hardware mapping for expression '" + print_expr(e) + "'", e.line, e.col});
  }

  void eval_controller() {
    Unit u("eval_controller");
    std::vector<std::string> ports = {port("sclk", "in", "std_logic"), port("rst", "in", "std_logic"),
                                      port("een", "in", "std_logic"), port("tev", "in", vec(a_.s_ev)),
                                      port("done", "out", "std_logic")};
    if (a_.n_trig > 0) ports.push_back(port("trig", "out", vec(a_.n_trig)));
    u.entity({{"LAYERS", a_.depth}}, ports);
    u.begin_arch();
    u.line("  -- states: idle, phase 1 (shift inputs, pseudo-extend, evict), then one per layer");
    u.line("  signal state : natural range 0 to LAYERS + 1 := 0;");
    u.line("  signal affected : std_logic_vector(N_OUT - 1 downto 0);");
    u.line("begin");
    u.line("  affected <= tev(N_OUT - 1 downto 0);");
    u.line("  process (sclk) begin");
    u.line("    if rising_edge(sclk) then");
    u.line("      done <= '0';");
    u.line("      if rst = '1' then state <= 0;");
    u.line("      elsif state = 0 and een = '1' then state <= 1;");
    u.line("      elsif state = LAYERS + 1 or (state = 1 and LAYERS = 0) then state <= 0; done <= '1';");
    u.line("      elsif state > 0 then state <= state + 1;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    for (std::size_t x = 0; x < a_.layers.size(); ++x) {
      u.line();
      u.line("  -- state 2." + std::to_string(x + 1));
      for (int j : a_.layers[x]) {
        const int id = a_.output_id(j);
        u.line("  " + signal(id) + "_next <= " + expr(*a_.output(j).expr) + ";");
        u.line("  " + signal(id) + "_write <= '1' when state = " + std::to_string(x + 2) + " and affected(" +
               std::to_string(j) + ") = '1' else '0';");
      }
    }
    if (a_.n_trig > 0) {
      u.line();
      for (int k = 0; k < a_.n_trig; ++k) {
        const int j = a_.trigger_outputs[static_cast<std::size_t>(k)];
        u.line("  trig(" + std::to_string(k) + ") <= affected(" + std::to_string(j) + ") and " +
               signal(a_.output_id(j)) + "(0)(0);");
      }
    }
    u.end_arch();
    units_.push_back(u.take());
  }

  void stream_store(int stream) {
    const StreamInfo& s = a_.streams[static_cast<std::size_t>(stream)];
    Unit u(store_unit(a_, stream));
    const std::int64_t w = s.type.bits();
    u.entity({{"CAPA", s.capa}},
             {port("sclk", "in", "std_logic"), port("shift", "in", "std_logic"), port("write", "in", "std_logic"),
              port("din", "in", vec(w)), port("dout", "out", vec(static_cast<std::int64_t>(s.capa) * (w + 1)))});
    u.begin_arch();
    u.line("  -- slot k holds (valid & value); slot 0 is the newest");
    u.line("  type slots is array (0 to CAPA - 1) of std_logic_vector(" + std::to_string(w) + " downto 0);");
    u.line("  signal r : slots := (others => (others => '0'));");
    u.line("begin");
    u.line("  process (sclk) begin");
    u.line("    if rising_edge(sclk) then");
    u.line("      if shift = '1' then");
    if (s.capa > 1) u.line("        for k in CAPA - 1 downto 1 loop r(k) <= r(k - 1); end loop;");
    u.line(s.kind == StreamKind::Output ? "        r(0) <= '0' & din;" : "        r(0) <= '1' & din;");
    u.line("      elsif write = '1' then");
    u.line("        r(0) <= '1' & din;");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.line("  g : for k in 0 to CAPA - 1 generate");
    u.line("    dout((k + 1) * " + std::to_string(w + 1) + " - 1 downto k * " + std::to_string(w + 1) + ") <= r(k);");
    u.line("  end generate;");
    u.end_arch();
    units_.push_back(u.take());
  }

  void window(const WindowPlan& w) {
    Unit u("window_" + std::to_string(w.id));
    u.line("-- " + std::string(aggregation_name(w.agg)) + " of " +
           a_.streams[static_cast<std::size_t>(w.target)].name + " over " + format_rational(w.duration) + " s");
    u.entity({{"BUCKETS", w.buckets}},
             {port("sclk", "in", "std_logic"), port("evict", "in", "std_logic"), port("add", "in", "std_logic"),
              port("ts", "in", vec(a_.s_ts)), port("value", "in", vec(w.target_type.bits())),
              port("result", "out", vec(w.result_type.bits())), port("valid", "out", "std_logic")});
    u.begin_arch();
    u.line("  type bucket_ring is array (0 to BUCKETS - 1) of unsigned(127 downto 0);");
    u.line("  signal buckets : bucket_ring := (others => (others => '0'));");
    u.line("  signal head : natural range 0 to BUCKETS - 1 := 0;");
    u.line("  constant BUCKET_PERIOD : unsigned(S_TS - 1 downto 0) := unsigned'(" + hex64(w.bucket_period_ns) + ");");
    u.line("begin");
    u.line("  process (sclk) begin");
    u.line("    if rising_edge(sclk) then");
    u.line("      if evict = '1' then");
    u.line("        buckets(head) <= (others => '0');");
    u.line("        head <= (head + 1) mod BUCKETS;");
    u.line("      elsif add = '1' then");
    u.line("        buckets((head + BUCKETS - 1) mod BUCKETS) <= combine(buckets((head + BUCKETS - 1) mod BUCKETS), value);");
    u.line("      end if;");
    u.line("    end if;");
    u.line("  end process;");
    u.end_arch();
    units_.push_back(u.take());
  }

  void top() {
    Unit u("monitor_top");
    const int w = s_in_total(a_);
    std::vector<std::string> ports = {port("sclk", "in", "std_logic"), port("rst", "in", "std_logic"),
                                      port("external", "in", "std_logic"), port("ev_in", "in", vec(w))};
    if (offline()) ports.push_back(port("ts_in", "in", vec(a_.s_ts)));
    ports.push_back(port("avail", "out", "std_logic"));
    if (a_.n_trig > 0) ports.push_back(port("trig", "out", vec(a_.n_trig)));
    u.entity({}, ports);
    u.begin_arch();
    u.line("  signal hclk, qclk, push, pop, empty, een, done : std_logic;");
    u.line("  signal its : std_logic_vector(S_TS - 1 downto 0);");
    u.line("  signal q_in, q_out, tev : std_logic_vector(S_EV - 1 downto 0);");
    u.line("begin");
    std::vector<std::string> parts = {"prescaler", "ext_interface", "time_select"};
    if (a_.n_dl() > 0) parts.push_back("scheduler");
    for (const char* p : {"event_delay", "hlq_interface", "queue", "llq_interface", "eval_controller"})
      parts.push_back(p);
    for (std::size_t s = 0; s < a_.streams.size(); ++s) parts.push_back(store_unit(a_, static_cast<int>(s)));
    for (const auto& win : a_.windows) parts.push_back("window_" + std::to_string(win.id));
    for (const auto& p : parts) u.line("  u_" + p + " : entity work." + p + ";");
    u.end_arch();
    units_.push_back(u.take());
  }

  const AnalyzedSpec& a_;
  const HlcConfig& cfg_;
  std::size_t depth_;
  std::vector<HdlUnit> units_;
};

}  // namespace

std::vector<HdlUnit> emit_hdl(const AnalyzedSpec& spec, const HlcConfig& config, std::size_t queue_depth) {
  return Emitter(spec, config, queue_depth).run();
}

std::vector<HdlPort> parse_hdl_headers(const std::vector<HdlUnit>& units) {
  static const std::regex vec_port(R"(^\s*(\w+)\s*:\s*(in|out)\s+std_logic_vector\((-?\d+) downto 0\))");
  static const std::regex generic(R"(^\s*(\w+)\s*:\s*natural\s*:=\s*(\d+))");
  static const std::regex constant(R"(^\s*constant\s+(\w+)\s*:\s*natural\s*:=\s*(\d+))");
  std::vector<HdlPort> out;
  for (const auto& u : units) {
    std::istringstream in(u.text);
    std::string line;
    bool in_entity = false;
    while (std::getline(in, line)) {
      std::smatch m;
      if (line.rfind("entity ", 0) == 0) in_entity = true;
      if (line.rfind("end entity", 0) == 0) in_entity = false;
      if (std::regex_search(line, m, constant)) {
        out.push_back({u.name, m[1], "constant", std::stoll(m[2])});
      } else if (in_entity && std::regex_search(line, m, vec_port)) {
        out.push_back({u.name, m[1], m[2], std::stoll(m[3]) + 1});
      } else if (in_entity && std::regex_search(line, m, generic)) {
        out.push_back({u.name, m[1], "generic", std::stoll(m[2])});
      }
    }
  }
  return out;
}

std::vector<std::string> check_hdl_widths(const AnalyzedSpec& a, const HlcConfig& cfg, std::size_t queue_depth,
                                          const std::vector<HdlUnit>& units) {
  std::map<std::pair<std::string, std::string>, std::int64_t> expect;
  const std::int64_t s_ts = a.s_ts;
  const std::int64_t s_ev = a.s_ev;
  std::int64_t s_in = 0;
  for (int s : a.s_in) s_in += s + 1;
  const bool offline = cfg.mode == Mode::Offline;

  expect[{"monitor_pkg", "S_EV"}] = s_ev;
  expect[{"monitor_pkg", "S_TS"}] = s_ts;
  expect[{"monitor_pkg", "N_IN"}] = a.n_in;
  expect[{"monitor_pkg", "N_OUT"}] = a.n_out;
  expect[{"monitor_pkg", "N_TRIG"}] = a.n_trig;
  expect[{"monitor_pkg", "N_DL"}] = static_cast<std::int64_t>(a.n_dl());
  for (int i = 0; i < a.n_in; ++i)
    expect[{"monitor_pkg", "S_IN_" + ident(a.streams[static_cast<std::size_t>(i)].name)}] = a.s_in[static_cast<std::size_t>(i)];

  expect[{"prescaler", "PRESCALE"}] = cfg.prescale;
  expect[{"ext_interface", "ev_in"}] = s_in;
  expect[{"ext_interface", "ev_out"}] = s_in;
  if (offline) {
    expect[{"ext_interface", "ts_in"}] = s_ts;
    expect[{"ext_interface", "ts_out"}] = s_ts;
    expect[{"time_select", "ts_ext"}] = s_ts;
  }
  expect[{"time_select", "XI_NS"}] = static_cast<std::int64_t>(cfg.xi_ns);
  expect[{"time_select", "its"}] = s_ts;
  if (a.n_dl() > 0) {
    expect[{"scheduler", "N_DEADLINES"}] = static_cast<std::int64_t>(a.n_dl());
    expect[{"scheduler", "its"}] = s_ts;
    expect[{"scheduler", "period"}] = s_ts;
    expect[{"scheduler", "dl"}] = a.n_out;
    expect[{"scheduler", "did"}] = static_cast<std::int64_t>(a.n_dl());
    expect[{"hlq_interface", "dl"}] = a.n_out;
    expect[{"hlq_interface", "dl_ts"}] = s_ts;
  }
  expect[{"event_delay", "BUFFER_SIZE"}] = static_cast<std::int64_t>(cfg.buffer_size);
  expect[{"event_delay", "ev_in"}] = s_ev;
  expect[{"event_delay", "ev_out"}] = s_ev;
  expect[{"hlq_interface", "ev"}] = s_ev;
  expect[{"hlq_interface", "dout"}] = s_ev;
  expect[{"queue", "DEPTH"}] = static_cast<std::int64_t>(queue_depth);
  expect[{"queue", "din"}] = s_ev;
  expect[{"queue", "dout"}] = s_ev;
  expect[{"llq_interface", "din"}] = s_ev;
  expect[{"llq_interface", "tev"}] = s_ev;
  expect[{"eval_controller", "LAYERS"}] = a.depth;
  expect[{"eval_controller", "tev"}] = s_ev;
  if (a.n_trig > 0) {
    expect[{"eval_controller", "trig"}] = a.n_trig;
    expect[{"monitor_top", "trig"}] = a.n_trig;
  }
  for (std::size_t s = 0; s < a.streams.size(); ++s) {
    const std::string unit = store_unit(a, static_cast<int>(s));
    const std::int64_t w = a.streams[s].type.bits();
    expect[{unit, "CAPA"}] = a.streams[s].capa;
    expect[{unit, "din"}] = w;
    expect[{unit, "dout"}] = a.streams[s].capa * (w + 1);
  }
  for (const auto& w : a.windows) {
    const std::string unit = "window_" + std::to_string(w.id);
    expect[{unit, "BUCKETS"}] = w.buckets;
    expect[{unit, "ts"}] = s_ts;
    expect[{unit, "value"}] = w.target_type.bits();
    expect[{unit, "result"}] = w.result_type.bits();
  }
  expect[{"monitor_top", "ev_in"}] = s_in;
  if (offline) expect[{"monitor_top", "ts_in"}] = s_ts;

  std::vector<std::string> problems;
  std::map<std::pair<std::string, std::string>, bool> seen;
  for (const auto& p : parse_hdl_headers(units)) {
    const auto key = std::make_pair(p.unit, p.name);
    auto it = expect.find(key);
    if (it == expect.end()) {
      problems.push_back(p.unit + "." + p.name + ": not covered by the width table");
      continue;
    }
    seen[key] = true;
    if (it->second != p.width)
      problems.push_back(p.unit + "." + p.name + ": emitted " + std::to_string(p.width) + ", expected " +
                         std::to_string(it->second));
  }
  for (const auto& [key, width] : expect)
    if (!seen.count(key)) problems.push_back(key.first + "." + key.second + ": missing");
  return problems;
}

}  // namespace streamhw
