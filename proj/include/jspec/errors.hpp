#pragma once

#include <stdexcept>
#include <string>

namespace jspec {

enum class ErrorKind {
  Parse,
  Precondition,
  DescriptorMismatch,
  NumericFailure,
  FrameInvariant,
  UnsupportedKind,
  NotInIdentityComponent,
  EigenvalueMismatch,
  NotInRestrictedOrbit,
  NotMember,
  HypothesisViolation,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DescriptorMismatch: return "descriptor-mismatch";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::FrameInvariant: return "frame-invariant";
    case ErrorKind::UnsupportedKind: return "unsupported-kind";
    case ErrorKind::NotInIdentityComponent: return "not-in-identity-component";
    case ErrorKind::EigenvalueMismatch: return "eigenvalue-mismatch";
    case ErrorKind::NotInRestrictedOrbit: return "not-in-restricted-orbit";
    case ErrorKind::NotMember: return "not-member";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures that are mathematical rather than input problems:
  /// the requested object does not exist (different orbits, disconnected sets).
  bool is_infeasibility() const noexcept {
    return kind_ == ErrorKind::EigenvalueMismatch || kind_ == ErrorKind::NotInRestrictedOrbit ||
           kind_ == ErrorKind::NotMember || kind_ == ErrorKind::HypothesisViolation;
  }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace jspec
