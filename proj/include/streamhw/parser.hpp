#ifndef STREAMHW_PARSER_HPP
#define STREAMHW_PARSER_HPP

#include "streamhw/ast.hpp"
#include "streamhw/errors.hpp"

#include <string_view>

namespace streamhw {

/// Parses and name-resolves a specification. Declarations are kept in
/// source order; `time` is available as an implicit input stream.
/// Throws SpecError (SyntaxError, DuplicateName, UnknownIdentifier).
Spec parse(std::string_view source);

}  // namespace streamhw

#endif
