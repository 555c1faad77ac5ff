#include "streamhw/value.hpp"
#include "streamhw/rational.hpp"

#include <gtest/gtest.h>

using namespace streamhw;

TEST(Value, AdditionWrapsAtWidth) {
  const ValueType i8 = ValueType::int_type(8);
  const Value r = apply_binary(BinaryOp::Add, Value::of_int(i8, 127), Value::of_int(i8, 1), i8);
  EXPECT_EQ(r.as_int(), -128);
  const ValueType u8 = ValueType::uint_type(8);
  EXPECT_EQ(apply_binary(BinaryOp::Sub, Value::of_int(u8, 0), Value::of_int(u8, 1), u8).as_int(), 255);
}

TEST(Value, DivisionByZeroIsZero) {
  const ValueType i32 = ValueType::int_type(32);
  EXPECT_EQ(apply_binary(BinaryOp::Div, Value::of_int(i32, 7), Value::of_int(i32, 0), i32).as_int(), 0);
  EXPECT_EQ(apply_binary(BinaryOp::Div, Value::of_int(i32, -7), Value::of_int(i32, 2), i32).as_int(), -3);
}

TEST(Value, IntegerSquareRoot) {
  const ValueType i32 = ValueType::int_type(32);
  EXPECT_EQ(apply_unary(UnaryOp::Isqrt, Value::of_int(i32, 99)).as_int(), 9);
  EXPECT_EQ(apply_unary(UnaryOp::Isqrt, Value::of_int(i32, 100)).as_int(), 10);
  EXPECT_EQ(apply_unary(UnaryOp::Isqrt, Value::of_int(i32, -4)).as_int(), 0);
}

TEST(Value, CastSignExtends) {
  const Value v = Value::of_int(ValueType::int_type(8), -3);
  EXPECT_EQ(cast(v, ValueType::int_type(32)).as_int(), -3);
  EXPECT_EQ(cast(v, ValueType::uint_type(8)).as_int(), 253);
  EXPECT_EQ(v.raw, 0xfdu);
}

TEST(Value, Comparisons) {
  const ValueType i16 = ValueType::int_type(16);
  EXPECT_TRUE(apply_binary(BinaryOp::Lt, Value::of_int(i16, -1), Value::of_int(i16, 1), i16).as_bool());
  EXPECT_FALSE(apply_binary(BinaryOp::Ne, Value::of_int(i16, 5), Value::of_int(i16, 5), i16).as_bool());
  EXPECT_TRUE(is_comparison(BinaryOp::Ge));
  EXPECT_TRUE(is_logical(BinaryOp::Or));
  EXPECT_TRUE(is_arithmetic(BinaryOp::Mul));
}

TEST(Rational, DecimalsAndSeconds) {
  EXPECT_EQ(*parse_decimal("0.25"), Rational(1, 4));
  EXPECT_EQ(*parse_decimal("3"), Rational(3));
  EXPECT_FALSE(parse_decimal("x"));
  EXPECT_EQ(rational_lcm(Rational(1, 2), Rational(1, 3)), Rational(1));
  EXPECT_EQ(format_seconds(2'200'000'000), "2.2");
  EXPECT_EQ(format_seconds(0), "0.0");
}
