#include "random_spec.hpp"

#include "streamhw/analyzer.hpp"
#include "streamhw/parser.hpp"

#include <gtest/gtest.h>

using namespace streamhw;

namespace {

ErrorKind rejection(const std::string& src) {
  try {
    analyze_source(src);
  } catch (const SpecError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted:\n" << src;
  return ErrorKind::SyntaxError;
}

}  // namespace

TEST(Parser, DeclarationsAndTriggers) {
  const Spec s = parse(streamhw::testing::read_file(streamhw::testing::corpus_path("network.lola")));
  EXPECT_EQ(s.constants.size(), 1u);
  EXPECT_EQ(s.inputs.size(), 6u);
  EXPECT_EQ(s.outputs.size(), 5u);
  EXPECT_EQ(s.triggers.size(), 3u);
}

TEST(Analyzer, Rejections) {
  EXPECT_EQ(rejection("input a: Int8\noutput b := a +"), ErrorKind::SyntaxError);
  EXPECT_EQ(rejection("input a: Int8\ninput a: Int8"), ErrorKind::DuplicateName);
  EXPECT_EQ(rejection("input a: Int8\noutput b := c"), ErrorKind::UnknownIdentifier);
  EXPECT_EQ(rejection("input a: Int8\noutput b: Bool := a + 1"), ErrorKind::TypeMismatch);
  EXPECT_EQ(rejection("input a: Int8\noutput b @1Hz: Int8 := c\noutput c @1Hz: Int8 := b"), ErrorKind::CyclicDependency);
  EXPECT_EQ(rejection("input a: Int8\noutput b: Int8 := c\noutput c: Int8 := b"), ErrorKind::UntypedExpression);
  EXPECT_EQ(rejection("input a: Int8\noutput b := a.aggregate(over: 1s, using: sum).defaults(to: 0)"),
            ErrorKind::WindowInEventBasedStream);
  EXPECT_EQ(rejection("input a: Int8\noutput b @2Hz := a.aggregate(over: 0.75s, using: sum).defaults(to: 0)"),
            ErrorKind::NonIntegralBuckets);
}

TEST(Analyzer, SlidingAverage) {
  const AnalyzedSpec a = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("sliding_avg.lola")));
  ASSERT_EQ(a.windows.size(), 1u);
  EXPECT_EQ(a.windows[0].buckets, 3);
  EXPECT_EQ(a.windows[0].bucket_period_ns, 1'000'000'000u);
  EXPECT_EQ(a.hyper_period_ns, 1'000'000'000u);
  ASSERT_EQ(a.deadlines.size(), 1u);
  EXPECT_EQ(a.deadlines[0].offset_ns, 1'000'000'000u);
  EXPECT_EQ(a.s_ev, 32 + 1 + 64 + 1);
}

TEST(Analyzer, CorpusWidthsAndLayers) {
  const AnalyzedSpec drone = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("drone.lola")));
  EXPECT_EQ(drone.s_ev, 181);
  EXPECT_EQ(drone.depth, 3);
  EXPECT_EQ(drone.n_trig, 4);
  const AnalyzedSpec net = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("network.lola")));
  EXPECT_EQ(net.s_ev, 177);
  EXPECT_EQ(net.n_out, 8);
  ASSERT_TRUE(net.dld_bound);
  EXPECT_EQ(*net.dld_bound, 2u);
  EXPECT_EQ(*net.buffer_size, 2u);
}

TEST(Analyzer, OffsetsRaiseCapacity) {
  const AnalyzedSpec a = analyze_source(
      "input a: Int8\noutput b: Int8 := a.offset(by: -3).defaults(to: 0) + b.offset(by: -1).defaults(to: 0)");
  EXPECT_EQ(a.streams[0].capa, 3);
  EXPECT_EQ(a.streams[static_cast<std::size_t>(a.output_id(0))].capa, 1);
}

TEST(Schedule, TwoFrequencies) {
  const Schedule s = compute_schedule({Rational(2), Rational(1, 2)});
  EXPECT_EQ(s.hyper_period, Rational(2));
  std::vector<Rational> offsets;
  for (const auto& d : s.deadlines) offsets.push_back(d.offset);
  EXPECT_EQ(offsets, (std::vector<Rational>{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)}));
  EXPECT_EQ(s.deadlines.back().outputs, (std::vector<int>{0, 1}));
}

TEST(BufferSize, Recurrence) {
  EXPECT_EQ(compute_buffer_size(2, 4), 2u);
  EXPECT_EQ(backlog_sequence({0, 3, 3, 3}, 3), (std::vector<std::uint64_t>{0, 3, 4, 5}));
  EXPECT_THROW(compute_buffer_size(5, 4), SpecError);
  EXPECT_EQ(dld_count({1000}, 1000, 0, 0, 3000), 3u);
  EXPECT_EQ(dld_count({1000}, 1000, 0, 500, 999), 0u);
}
