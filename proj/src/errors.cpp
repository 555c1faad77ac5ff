#include "streamhw/errors.hpp"

namespace streamhw {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::AccessRuleViolation: return "AccessRuleViolation";
    case ErrorKind::FrequencyMismatch: return "FrequencyMismatch";
    case ErrorKind::UntypedExpression: return "UntypedExpression";
    case ErrorKind::CyclicDependency: return "CyclicDependency";
    case ErrorKind::WindowInEventBasedStream: return "WindowInEventBasedStream";
    case ErrorKind::NonIntegralBuckets: return "NonIntegralBuckets";
    case ErrorKind::UnrepresentableTime: return "UnrepresentableTime";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
  }
  return "?";
}

std::string Diagnostic::to_string() const {
  std::string out;
  if (line > 0) out += std::to_string(line) + ":" + std::to_string(col) + ": ";
  out += error_kind_name(kind);
  if (kind == ErrorKind::AccessRuleViolation) out += "(rule " + std::to_string(rule) + ")";
  out += ": " + message;
  return out;
}

namespace {

std::string join(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += d.to_string();
  }
  return out;
}

}  // namespace

SpecError::SpecError(Diagnostic d) : SpecError(std::vector<Diagnostic>{std::move(d)}) {}

SpecError::SpecError(std::vector<Diagnostic> ds) : std::runtime_error(join(ds)), diags_(std::move(ds)) {}

}  // namespace streamhw
