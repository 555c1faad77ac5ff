#include "streamhw/value.hpp"
#include "streamhw/rational.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace streamhw {

// ---------------------------------------------------------------------------
// Rational helpers

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 10;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    seen_digit = true;
    if (num > kLimit) return std::nullopt;
    num = num * 10 + (c - '0');
    if (seen_dot) {
      if (den > kLimit) return std::nullopt;
      den *= 10;
    }
  }
  if (!seen_digit) return std::nullopt;
  return Rational(num, den);
}

Rational rational_lcm(const Rational& a, const Rational& b) {
  // Both are kept reduced by boost::rational.
  auto num = std::lcm(a.numerator(), b.numerator());
  auto den = std::gcd(a.denominator(), b.denominator());
  return Rational(num, den);
}

std::optional<std::uint64_t> to_nanos(const Rational& seconds) {
  if (seconds < 0) return std::nullopt;
  __int128 scaled = static_cast<__int128>(seconds.numerator()) * kNanosPerSecond;
  if (scaled % seconds.denominator() != 0) return std::nullopt;
  __int128 ns = scaled / seconds.denominator();
  if (ns > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
  return static_cast<std::uint64_t>(ns);
}

std::string format_seconds(std::uint64_t nanos) {
  std::string whole = std::to_string(nanos / kNanosPerSecond);
  std::string frac = std::to_string(nanos % kNanosPerSecond);
  frac.insert(0, 9 - frac.size(), '0');
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return whole + "." + frac;
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  // Prefer an exact decimal when the denominator only has factors 2 and 5.
  if (auto ns = to_nanos(r)) return format_seconds(*ns);
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// ---------------------------------------------------------------------------
// Value domain

std::string ValueType::name() const {
  switch (base) {
    case BaseType::Bool: return "Bool";
    case BaseType::Signed: return "Int" + std::to_string(width);
    case BaseType::Unsigned: return "UInt" + std::to_string(width);
  }
  return "?";
}

ValueType join_int(ValueType a, ValueType b) {
  const bool is_signed = a.is_signed() || b.is_signed();
  const int width = std::max(a.width, b.width);
  return is_signed ? ValueType::int_type(width) : ValueType::uint_type(width);
}

std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

Value Value::of_int(ValueType t, __int128 v) {
  return {t, static_cast<std::uint64_t>(v) & width_mask(t.width)};
}

Value Value::from_raw(ValueType t, std::uint64_t bits) { return {t, bits & width_mask(t.width)}; }

__int128 Value::as_int() const {
  if (type.is_signed() && type.width < 64) {
    const std::uint64_t sign = std::uint64_t{1} << (type.width - 1);
    if (raw & sign) return static_cast<__int128>(raw) - (static_cast<__int128>(1) << type.width);
    return raw;
  }
  if (type.is_signed()) return static_cast<std::int64_t>(raw);
  return static_cast<__int128>(raw);
}

std::string Value::to_string() const {
  if (type.is_bool()) return raw ? "true" : "false";
  __int128 v = as_int();
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  std::string out;
  while (mag > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Value cast(const Value& v, ValueType t) {
  if (t.is_bool()) return Value::boolean(v.raw != 0);
  if (v.type.is_bool()) return Value::of_int(t, v.raw);
  return Value::of_int(t, v.as_int());
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt:
    case BinaryOp::Ge: case BinaryOp::Eq: case BinaryOp::Ne:
      return true;
    default:
      return false;
  }
}

bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

bool is_arithmetic(BinaryOp op) { return !is_comparison(op) && !is_logical(op); }

const char* op_symbol(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "!";
    case UnaryOp::Neg: return "-";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Isqrt: return "sqrt";
  }
  return "?";
}

const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
  }
  return "?";
}

std::uint64_t isqrt(std::uint64_t n) {
  // Digit-by-digit method: one result bit per iteration.
  std::uint64_t result = 0;
  std::uint64_t bit = std::uint64_t{1} << 62;
  while (bit > n) bit >>= 2;
  while (bit != 0) {
    if (n >= result + bit) {
      n -= result + bit;
      result = (result >> 1) + bit;
    } else {
      result >>= 1;
    }
    bit >>= 2;
  }
  return result;
}

Value apply_unary(UnaryOp op, const Value& a) {
  switch (op) {
    case UnaryOp::Not:
      return Value::boolean(!a.as_bool());
    case UnaryOp::Neg:
      return Value::of_int(a.type, -a.as_int());
    case UnaryOp::Abs: {
      __int128 v = a.as_int();
      return Value::of_int(a.type, v < 0 ? -v : v);
    }
    case UnaryOp::Isqrt: {
      __int128 v = a.as_int();
      if (v <= 0) return Value::of_int(a.type, 0);
      return Value::of_int(a.type, isqrt(static_cast<std::uint64_t>(v)));
    }
  }
  throw std::logic_error("unknown unary operator");
}

Value apply_binary(BinaryOp op, const Value& a, const Value& b, ValueType operand_type) {
  if (is_logical(op)) {
    bool l = a.as_bool();
    bool r = b.as_bool();
    return Value::boolean(op == BinaryOp::And ? (l && r) : (l || r));
  }
  const Value x = cast(a, operand_type);
  const Value y = cast(b, operand_type);
  if (operand_type.is_bool()) {
    if (op == BinaryOp::Eq) return Value::boolean(x.raw == y.raw);
    if (op == BinaryOp::Ne) return Value::boolean(x.raw != y.raw);
    throw std::logic_error("non-equality operator on Bool operands");
  }
  const __int128 l = x.as_int();
  const __int128 r = y.as_int();
  switch (op) {
    case BinaryOp::Add: return Value::of_int(operand_type, l + r);
    case BinaryOp::Sub: return Value::of_int(operand_type, l - r);
    case BinaryOp::Mul:
      return Value::of_int(operand_type, static_cast<__int128>(x.raw * y.raw));
    case BinaryOp::Div:
      if (r == 0) return Value::of_int(operand_type, 0);
      return Value::of_int(operand_type, l / r);
    case BinaryOp::Lt: return Value::boolean(l < r);
    case BinaryOp::Le: return Value::boolean(l <= r);
    case BinaryOp::Gt: return Value::boolean(l > r);
    case BinaryOp::Ge: return Value::boolean(l >= r);
    case BinaryOp::Eq: return Value::boolean(l == r);
    case BinaryOp::Ne: return Value::boolean(l != r);
    default: break;
  }
  throw std::logic_error("unknown binary operator");
}

}  // namespace streamhw
