#include "streamhw/desugar.hpp"

#include <set>

namespace streamhw {

namespace {

ExprPtr rewrite(const Expr& e) {
  if (e.kind == ExprKind::Delta) {
    auto current = make_ref(e.name);
    auto previous = make_offset(e.name, -1);
    auto zero = make_int(0);
    for (Expr* n : {current.get(), previous.get(), zero.get()}) {
      n->line = e.line;
      n->col = e.col;
    }
    current->ref_kind = RefKind::Stream;
    previous->ref_kind = RefKind::Stream;
    auto wrapped = make_default(std::move(previous), std::move(zero));
    wrapped->line = e.line;
    wrapped->col = e.col;
    auto out = make_binary(BinaryOp::Sub, std::move(current), std::move(wrapped));
    out->line = e.line;
    out->col = e.col;
    return out;
  }
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->line = e.line;
  out->col = e.col;
  out->int_value = e.int_value;
  out->bool_value = e.bool_value;
  out->name = e.name;
  out->offset = e.offset;
  out->duration = e.duration;
  out->agg = e.agg;
  out->unop = e.unop;
  out->binop = e.binop;
  out->ref_kind = e.ref_kind;
  for (const auto& a : e.args) out->args.push_back(rewrite(*a));
  return out;
}

}  // namespace

Spec desugar(const Spec& spec) {
  Spec out = spec.clone();
  for (auto& o : out.outputs) o.expr = rewrite(*o.expr);

  std::set<std::string> taken;
  for (const auto& c : out.constants) taken.insert(c.name);
  for (const auto& i : out.inputs) taken.insert(i.name);
  for (const auto& o : out.outputs) taken.insert(o.name);

  int fresh = 0;
  for (std::size_t k = 0; k < out.triggers.size(); ++k) {
    auto& t = out.triggers[k];
    if (!t.expr) continue;  // already desugared
    std::string name;
    do {
      name = "_t" + std::to_string(fresh++);
    } while (taken.count(name));
    taken.insert(name);
    OutputDecl o;
    o.name = name;
    o.type = ValueType::boolean();
    o.frequency = t.frequency;
    o.expr = rewrite(*t.expr);
    o.line = t.line;
    o.trigger = static_cast<int>(k);
    t.expr.reset();
    t.output = static_cast<int>(out.outputs.size());
    out.outputs.push_back(std::move(o));
  }
  return out;
}

}  // namespace streamhw
