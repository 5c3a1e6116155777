#pragma once

#include <stdexcept>
#include <string>

namespace subcurv {

// Base for all library errors. `kind()` is a stable machine-readable tag that
// reports and the CLI use; the what() string carries context.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define SUBCURV_DEFINE_ERROR(Name)                          \
  class Name : public Error {                               \
  public:                                                   \
    explicit Name(const std::string& msg)                   \
        : Error(#Name, msg) {}                              \
  };

SUBCURV_DEFINE_ERROR(UnknownIdentifier)
SUBCURV_DEFINE_ERROR(DomainError)
SUBCURV_DEFINE_ERROR(MissingVariable)
SUBCURV_DEFINE_ERROR(DegreeOverflow)
SUBCURV_DEFINE_ERROR(SingularCoframe)
SUBCURV_DEFINE_ERROR(DimensionMismatch)
SUBCURV_DEFINE_ERROR(RankDeficient)
SUBCURV_DEFINE_ERROR(RankFull)
SUBCURV_DEFINE_ERROR(DegenerateOmega)
SUBCURV_DEFINE_ERROR(SignatureMismatch)
SUBCURV_DEFINE_ERROR(ConstrainedJetMode)
SUBCURV_DEFINE_ERROR(VanishingV)
SUBCURV_DEFINE_ERROR(QNearZero)
SUBCURV_DEFINE_ERROR(DegenerateCongruence)
SUBCURV_DEFINE_ERROR(DependentGenerators)
SUBCURV_DEFINE_ERROR(NotSolvable)
SUBCURV_DEFINE_ERROR(NewtonDiverged)
SUBCURV_DEFINE_ERROR(PrimitiveMismatch)
SUBCURV_DEFINE_ERROR(ConfigError)
SUBCURV_DEFINE_ERROR(EvaluationError)

#undef SUBCURV_DEFINE_ERROR

// Parse failure with byte position and what was expected there.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t pos, const std::string& expected,
              const std::string& found)
      : Error("SyntaxError", "at position " + std::to_string(pos) +
                                 ": expected " + expected + ", found " + found),
        pos_(pos), expected_(expected) {}
  std::size_t position() const noexcept { return pos_; }
  const std::string& expected() const noexcept { return expected_; }

private:
  std::size_t pos_;
  std::string expected_;
};

}  // namespace subcurv
