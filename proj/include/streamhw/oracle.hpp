#ifndef STREAMHW_ORACLE_HPP
#define STREAMHW_ORACLE_HPP

#include "streamhw/analyzer.hpp"
#include "streamhw/hlc.hpp"

#include <optional>
#include <vector>

namespace streamhw {

/// One evaluation instant of the reference semantics.
struct OracleInstant {
  std::uint64_t ts = 0;
  bool deadline = false;
  std::vector<std::optional<Value>> outputs;  // per output, set when it extends
  std::vector<bool> trig;
};

/// Direct, unoptimized evaluation of the stream equations over `events`,
/// which must carry non-decreasing timestamps. Windows are recomputed from
/// the full history at every read.
std::vector<OracleInstant> run_oracle(const AnalyzedSpec& spec, const std::vector<RawEvent>& events, Mode mode);

/// hclk-aligned tick at which each online offer is latched when offers are
/// made at `offer_ticks` and retried until accepted.
std::vector<std::uint64_t> online_latch_ticks(const std::vector<std::uint64_t>& offer_ticks, std::uint32_t prescale);

}  // namespace streamhw

#endif
