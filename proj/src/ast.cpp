#include "streamhw/ast.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace streamhw {

const char* aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::Count: return "count";
    case Aggregation::Sum: return "sum";
    case Aggregation::Avg: return "avg";
    case Aggregation::Min: return "min";
    case Aggregation::Max: return "max";
    case Aggregation::Integral: return "integral";
  }
  return "?";
}

ExprPtr Expr::clone() const {
  auto out = std::make_unique<Expr>();
  out->kind = kind;
  out->line = line;
  out->col = col;
  out->int_value = int_value;
  out->bool_value = bool_value;
  out->name = name;
  out->offset = offset;
  out->duration = duration;
  out->agg = agg;
  out->unop = unop;
  out->binop = binop;
  out->ref_kind = ref_kind;
  out->ref = ref;
  out->window_id = window_id;
  out->type = type;
  out->operand_type = operand_type;
  out->args.reserve(args.size());
  for (const auto& a : args) out->args.push_back(a->clone());
  return out;
}

ExprPtr make_int(std::uint64_t v) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::IntLit;
  e->int_value = v;
  return e;
}

ExprPtr make_bool(bool b) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::BoolLit;
  e->bool_value = b;
  return e;
}

ExprPtr make_ref(std::string name) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Ref;
  e->name = std::move(name);
  return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr a) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Unary;
  e->unop = op;
  e->args.push_back(std::move(a));
  return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Binary;
  e->binop = op;
  e->args.push_back(std::move(a));
  e->args.push_back(std::move(b));
  return e;
}

ExprPtr make_default(ExprPtr inner, ExprPtr dflt) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Default;
  e->args.push_back(std::move(inner));
  e->args.push_back(std::move(dflt));
  return e;
}

ExprPtr make_offset(std::string name, std::int64_t k) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Offset;
  e->name = std::move(name);
  e->offset = k;
  return e;
}

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case ExprKind::BoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case ExprKind::Ref:
    case ExprKind::Hold:
    case ExprKind::Delta:
      if (a.name != b.name) return false;
      break;
    case ExprKind::Offset:
      if (a.name != b.name || a.offset != b.offset) return false;
      break;
    case ExprKind::Window:
      if (a.name != b.name || a.duration != b.duration || a.agg != b.agg) return false;
      break;
    case ExprKind::Unary:
      if (a.unop != b.unop) return false;
      break;
    case ExprKind::Binary:
      if (a.binop != b.binop) return false;
      break;
    case ExprKind::Default:
    case ExprKind::Ite:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_structure(*a.args[i], *b.args[i])) return false;
  return true;
}

Spec Spec::clone() const {
  Spec s;
  s.constants = constants;
  s.inputs = inputs;
  for (const auto& o : outputs) {
    OutputDecl c;
    c.name = o.name;
    c.type = o.type;
    c.frequency = o.frequency;
    c.expr = o.expr ? o.expr->clone() : nullptr;
    c.line = o.line;
    c.trigger = o.trigger;
    s.outputs.push_back(std::move(c));
  }
  for (const auto& t : triggers) {
    TriggerDecl c;
    c.frequency = t.frequency;
    c.expr = t.expr ? t.expr->clone() : nullptr;
    c.message = t.message;
    c.line = t.line;
    c.output = t.output;
    s.triggers.push_back(std::move(c));
  }
  s.order = order;
  return s;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void print_into(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit:
      os << e.int_value;
      return;
    case ExprKind::BoolLit:
      os << (e.bool_value ? "true" : "false");
      return;
    case ExprKind::Ref:
      os << e.name;
      return;
    case ExprKind::Offset:
      os << e.name << ".offset(by: " << e.offset << ")";
      return;
    case ExprKind::Hold:
      os << e.name << ".hold()";
      return;
    case ExprKind::Window:
      os << e.name << ".aggregate(over: " << format_rational(e.duration)
         << "s, using: " << aggregation_name(e.agg) << ")";
      return;
    case ExprKind::Default:
      print_into(os, *e.args[0]);
      os << ".defaults(to: ";
      print_into(os, *e.args[1]);
      os << ")";
      return;
    case ExprKind::Delta:
      os << "delta(" << e.name << ")";
      return;
    case ExprKind::Unary:
      switch (e.unop) {
        case UnaryOp::Not: os << "!("; break;
        case UnaryOp::Neg: os << "-("; break;
        case UnaryOp::Abs: os << "abs("; break;
        case UnaryOp::Isqrt: os << "sqrt("; break;
      }
      print_into(os, *e.args[0]);
      os << ")";
      return;
    case ExprKind::Binary:
      os << "(";
      print_into(os, *e.args[0]);
      os << " " << op_symbol(e.binop) << " ";
      print_into(os, *e.args[1]);
      os << ")";
      return;
    case ExprKind::Ite:
      os << "(if ";
      print_into(os, *e.args[0]);
      os << " then ";
      print_into(os, *e.args[1]);
      os << " else ";
      print_into(os, *e.args[2]);
      os << ")";
      return;
  }
}

std::string pacing_text(const std::optional<Rational>& f) {
  return f ? " @" + format_rational(*f) + "Hz" : "";
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_into(os, e);
  return os.str();
}

std::string print_spec(const Spec& spec) {
  std::ostringstream os;
  for (auto [kind, idx] : spec.order) {
    switch (kind) {
      case DeclKind::Constant: {
        const auto& c = spec.constants[idx];
        os << "constant " << c.name << ": " << c.type.name() << " = " << c.value.to_string() << "\n";
        break;
      }
      case DeclKind::Input: {
        const auto& in = spec.inputs[idx];
        os << "input " << in.name << ": " << in.type.name() << "\n";
        break;
      }
      case DeclKind::Output: {
        const auto& o = spec.outputs[idx];
        os << "output " << o.name << pacing_text(o.frequency);
        if (o.type) os << ": " << o.type->name();
        os << " := " << print_expr(*o.expr) << "\n";
        break;
      }
      case DeclKind::Trigger: {
        const auto& t = spec.triggers[idx];
        os << "trigger" << pacing_text(t.frequency) << " ";
        os << print_expr(t.expr ? *t.expr : *spec.outputs[t.output].expr);
        if (t.message) os << " " << quote(*t.message);
        os << "\n";
        break;
      }
    }
  }
  return os.str();
}

bool same_structure(const Spec& a, const Spec& b) {
  if (a.order != b.order) return false;
  if (a.constants.size() != b.constants.size() || a.inputs.size() != b.inputs.size() ||
      a.outputs.size() != b.outputs.size() || a.triggers.size() != b.triggers.size())
    return false;
  for (std::size_t i = 0; i < a.constants.size(); ++i) {
    const auto& x = a.constants[i];
    const auto& y = b.constants[i];
    if (x.name != y.name || x.type != y.type || x.value != y.value) return false;
  }
  for (std::size_t i = 0; i < a.inputs.size(); ++i)
    if (a.inputs[i].name != b.inputs[i].name || a.inputs[i].type != b.inputs[i].type) return false;
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    const auto& x = a.outputs[i];
    const auto& y = b.outputs[i];
    if (x.name != y.name || x.type != y.type || x.frequency != y.frequency) return false;
    if (!same_structure(*x.expr, *y.expr)) return false;
  }
  for (std::size_t i = 0; i < a.triggers.size(); ++i) {
    const auto& x = a.triggers[i];
    const auto& y = b.triggers[i];
    if (x.frequency != y.frequency || x.message != y.message) return false;
    if (bool(x.expr) != bool(y.expr)) return false;
    if (x.expr && !same_structure(*x.expr, *y.expr)) return false;
  }
  return true;
}

std::vector<std::string> free_names(const Expr& e) {
  std::set<std::string> names;
  walk(e, [&](const Expr& n) {
    switch (n.kind) {
      case ExprKind::Ref:
      case ExprKind::Offset:
      case ExprKind::Hold:
      case ExprKind::Window:
      case ExprKind::Delta:
        names.insert(n.name);
        break;
      default:
        break;
    }
  });
  return {names.begin(), names.end()};
}

std::vector<std::string> free_names(const Spec& spec) {
  std::set<std::string> names;
  for (const auto& o : spec.outputs)
    for (auto& n : free_names(*o.expr)) names.insert(n);
  for (const auto& t : spec.triggers)
    if (t.expr)
      for (auto& n : free_names(*t.expr)) names.insert(n);
  return {names.begin(), names.end()};
}

}  // namespace streamhw
