#ifndef STREAMHW_ERRORS_HPP
#define STREAMHW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace streamhw {

enum class ErrorKind {
  SyntaxError,
  DuplicateName,
  UnknownIdentifier,
  TypeMismatch,
  AccessRuleViolation,
  FrequencyMismatch,
  UntypedExpression,
  CyclicDependency,
  WindowInEventBasedStream,
  NonIntegralBuckets,
  UnrepresentableTime,
  Unbounded,
  UnsupportedConstruct,
};

const char* error_kind_name(ErrorKind k);

struct Diagnostic {
  ErrorKind kind = ErrorKind::SyntaxError;
  std::string message;
  int line = 0;
  int col = 0;
  int rule = 0;  // AccessRuleViolation only

  std::string to_string() const;
};

/// Rejection of a specification, carrying one or more diagnostics.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(Diagnostic d);
  explicit SpecError(std::vector<Diagnostic> ds);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  ErrorKind kind() const { return diags_.front().kind; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Broken engine invariant (exit code 3 at the CLI).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace streamhw

#endif
