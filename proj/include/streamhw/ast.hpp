#ifndef STREAMHW_AST_HPP
#define STREAMHW_AST_HPP

#include "streamhw/rational.hpp"
#include "streamhw/value.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace streamhw {

enum class Aggregation : std::uint8_t { Count, Sum, Avg, Min, Max, Integral };

const char* aggregation_name(Aggregation a);

enum class ExprKind : std::uint8_t {
  IntLit,
  BoolLit,
  Ref,      // constant or synchronous stream access
  Offset,   // name.offset(by: k)        (always under Default)
  Hold,     // name.hold()               (always under Default)
  Window,   // name.aggregate(over, using) (always under Default)
  Default,  // args[0].defaults(to: args[1])
  Delta,    // delta(name), removed by desugaring
  Unary,
  Binary,
  Ite,
};

/// What a resolved name refers to.
enum class RefKind : std::uint8_t { Unresolved, Constant, Stream };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  int line = 0;
  int col = 0;

  std::uint64_t int_value = 0;
  bool bool_value = false;
  std::string name;
  std::int64_t offset = 0;
  Rational duration{0};
  Aggregation agg = Aggregation::Count;
  UnaryOp unop = UnaryOp::Not;
  BinaryOp binop = BinaryOp::Add;
  std::vector<ExprPtr> args;

  // Filled in by name resolution and the analyzer.
  RefKind ref_kind = RefKind::Unresolved;
  int ref = -1;        // constant index or stream id
  int window_id = -1;  // Window nodes only
  ValueType type{};
  ValueType operand_type{};  // Binary: type both sides are cast to

  ExprPtr clone() const;
};

ExprPtr make_int(std::uint64_t v);
ExprPtr make_bool(bool b);
ExprPtr make_ref(std::string name);
ExprPtr make_unary(UnaryOp op, ExprPtr a);
ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b);
ExprPtr make_default(ExprPtr inner, ExprPtr dflt);
ExprPtr make_offset(std::string name, std::int64_t k);

/// Structural equality ignoring source positions and analysis annotations.
bool same_structure(const Expr& a, const Expr& b);

struct ConstantDecl {
  std::string name;
  ValueType type;
  Value value;
  int line = 0;
};

struct InputDecl {
  std::string name;
  ValueType type;
  int line = 0;
};

struct OutputDecl {
  std::string name;
  std::optional<ValueType> type;
  std::optional<Rational> frequency;  // Hz
  ExprPtr expr;
  int line = 0;
  int trigger = -1;  // index into Spec::triggers for desugared trigger outputs
};

struct TriggerDecl {
  std::optional<Rational> frequency;
  ExprPtr expr;  // null after desugaring; the condition lives in `output`
  std::optional<std::string> message;
  int line = 0;
  int output = -1;  // set by desugaring
};

enum class DeclKind : std::uint8_t { Constant, Input, Output, Trigger };

struct Spec {
  std::vector<ConstantDecl> constants;
  std::vector<InputDecl> inputs;
  std::vector<OutputDecl> outputs;
  std::vector<TriggerDecl> triggers;
  /// Declarations in source order.
  std::vector<std::pair<DeclKind, int>> order;

  Spec() = default;
  Spec(Spec&&) = default;
  Spec& operator=(Spec&&) = default;
  Spec clone() const;
};

/// Name of the implicit timestamp stream.
inline constexpr const char* kTimeStream = "time";

/// Canonical source text; parse(print(s)) reproduces s.
std::string print_spec(const Spec& spec);
std::string print_expr(const Expr& e);

bool same_structure(const Spec& a, const Spec& b);

/// Names of all streams and constants referenced by `e` (deduplicated, sorted).
std::vector<std::string> free_names(const Expr& e);
std::vector<std::string> free_names(const Spec& spec);

/// Calls f(node) on every node, parents first.
template <typename F>
void walk(Expr& e, F&& f) {
  f(e);
  for (auto& a : e.args) walk(*a, f);
}

template <typename F>
void walk(const Expr& e, F&& f) {
  f(e);
  for (const auto& a : e.args) walk(static_cast<const Expr&>(*a), f);
}

}  // namespace streamhw

#endif
