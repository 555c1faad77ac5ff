#ifndef STREAMHW_DESUGAR_HPP
#define STREAMHW_DESUGAR_HPP

#include "streamhw/ast.hpp"

namespace streamhw {

/// Rewrites `delta(s)` into `s - s.offset(by: -1).defaults(to: 0)` and turns
/// every trigger into a Bool output `_t<k>` referenced by the trigger. The
/// trigger outputs come after all named outputs.
Spec desugar(const Spec& spec);

}  // namespace streamhw

#endif
