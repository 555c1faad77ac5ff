#include "random_spec.hpp"

#include "streamhw/hdl.hpp"

#include <gtest/gtest.h>

#include <regex>

using namespace streamhw;

namespace {

std::vector<std::string> names(const std::vector<HdlUnit>& units) {
  std::vector<std::string> out;
  for (const auto& u : units) out.push_back(u.name);
  return out;
}

}  // namespace

TEST(Hdl, UnitOrderWithoutDeadlines) {
  const AnalyzedSpec a = analyze_source("input x: Int8\noutput y: Int8 := x + 1\ntrigger y > 3");
  const auto units = emit_hdl(a, HlcConfig::from(a, Mode::Offline));
  EXPECT_EQ(names(units), (std::vector<std::string>{"monitor_pkg", "prescaler", "ext_interface", "time_select",
                                                    "event_delay", "hlq_interface", "queue", "llq_interface",
                                                    "eval_controller", "in_x", "in_time", "out_y", "out_trigger_0",
                                                    "monitor_top"}));
  EXPECT_TRUE(check_hdl_widths(a, HlcConfig::from(a, Mode::Offline), 64, units).empty());
}

TEST(Hdl, SchedulerAndWindows) {
  const AnalyzedSpec a = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("sliding_avg.lola")));
  const auto units = emit_hdl(a, HlcConfig::from(a, Mode::Online));
  const auto n = names(units);
  EXPECT_NE(std::find(n.begin(), n.end(), "scheduler"), n.end());
  EXPECT_NE(std::find(n.begin(), n.end(), "window_0"), n.end());
  for (const auto& p : parse_hdl_headers(units))
    if (p.unit == "window_0" && p.name == "BUCKETS") EXPECT_EQ(p.width, 3);
}

TEST(Hdl, WidthCheckCatchesEdits) {
  const AnalyzedSpec a = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("network.lola")));
  const HlcConfig c = HlcConfig::from(a, Mode::Offline, 10, 4, 2);
  auto units = emit_hdl(a, c);
  ASSERT_TRUE(check_hdl_widths(a, c, 64, units).empty());
  for (auto& u : units)
    if (u.name == "queue") u.text = std::regex_replace(u.text, std::regex("\\(176 downto 0\\)"), "(175 downto 0)");
  EXPECT_FALSE(check_hdl_widths(a, c, 64, units).empty());
}

TEST(Hdl, Deterministic) {
  const AnalyzedSpec a = analyze_source(streamhw::testing::read_file(streamhw::testing::corpus_path("drone.lola")));
  const HlcConfig c = HlcConfig::from(a, Mode::Offline);
  const auto u1 = emit_hdl(a, c), u2 = emit_hdl(a, c);
  ASSERT_EQ(u1.size(), u2.size());
  for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_EQ(u1[i].text, u2[i].text);
}
