#ifndef STREAMHW_VALUE_HPP
#define STREAMHW_VALUE_HPP

#include <cstdint>
#include <string>

namespace streamhw {

enum class BaseType : std::uint8_t { Bool, Signed, Unsigned };

/// Fixed-width value domain: booleans and two's-complement integers.
struct ValueType {
  BaseType base = BaseType::Bool;
  int width = 1;

  static constexpr ValueType boolean() { return {BaseType::Bool, 1}; }
  static constexpr ValueType int_type(int w) { return {BaseType::Signed, w}; }
  static constexpr ValueType uint_type(int w) { return {BaseType::Unsigned, w}; }

  bool is_bool() const { return base == BaseType::Bool; }
  bool is_int() const { return base != BaseType::Bool; }
  bool is_signed() const { return base == BaseType::Signed; }

  /// Number of bits used by the hardware encoding (1 for Bool).
  int bits() const { return width; }

  std::string name() const;

  friend bool operator==(const ValueType&, const ValueType&) = default;
};

/// Least integer type that covers both operands: the wider width, signed if
/// either side is signed.
ValueType join_int(ValueType a, ValueType b);

/// A typed value. `raw` holds the low `type.width` bits, all others zero.
struct Value {
  ValueType type;
  std::uint64_t raw = 0;

  static Value boolean(bool b) { return {ValueType::boolean(), b ? 1u : 0u}; }
  /// Truncates `v` to the width of `t` (two's complement wraparound).
  static Value of_int(ValueType t, __int128 v);
  static Value from_raw(ValueType t, std::uint64_t bits);

  bool as_bool() const { return raw != 0; }
  /// Sign- or zero-extended integer meaning of the bits.
  __int128 as_int() const;

  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;
};

std::uint64_t width_mask(int width);

/// Reinterprets `v` in type `t` by extending then truncating.
Value cast(const Value& v, ValueType t);

enum class UnaryOp : std::uint8_t { Not, Neg, Abs, Isqrt };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

bool is_comparison(BinaryOp op);
bool is_logical(BinaryOp op);
bool is_arithmetic(BinaryOp op);
const char* op_symbol(UnaryOp op);
const char* op_symbol(BinaryOp op);

/// floor(sqrt(n)).
std::uint64_t isqrt(std::uint64_t n);

/// Applies `op` to `a`, already cast to the result type. Negative isqrt
/// arguments yield 0.
Value apply_unary(UnaryOp op, const Value& a);

/// Applies `op` after casting both operands to `operand_type`; arithmetic
/// wraps, division by zero yields 0.
Value apply_binary(BinaryOp op, const Value& a, const Value& b, ValueType operand_type);

}  // namespace streamhw

#endif
