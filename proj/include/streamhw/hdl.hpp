#ifndef STREAMHW_HDL_HPP
#define STREAMHW_HDL_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/hlc.hpp"

#include <string>
#include <vector>

namespace streamhw {

struct HdlUnit {
  std::string name;  // entity name; file is <name>.vhd
  std::string text;
};

/// VHDL-flavoured structural description of the monitor, one unit per
/// component in a fixed order. Throws SpecError(UnsupportedConstruct) for an
/// expression form without a hardware mapping.
std::vector<HdlUnit> emit_hdl(const AnalyzedSpec& spec, const HlcConfig& config, std::size_t queue_depth = 64);

/// Port and generic widths read back from emitted text.
struct HdlPort {
  std::string unit;
  std::string name;
  std::string direction;  // in / out, "generic" or "constant"
  std::int64_t width = 0; // vector width; generic value
};

std::vector<HdlPort> parse_hdl_headers(const std::vector<HdlUnit>& units);

/// Compares every parsed vector port and generic with the widths the
/// analyzer derives; returns one message per mismatch or unknown port.
std::vector<std::string> check_hdl_widths(const AnalyzedSpec& spec, const HlcConfig& config, std::size_t queue_depth,
                                          const std::vector<HdlUnit>& units);

}  // namespace streamhw

#endif
