#pragma once

#include <stdexcept>
#include <string>

namespace dmod {

// Base of every error raised by the library. The concrete classes below map
// one-to-one onto the failure modes named in the public contracts.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define DMOD_DEFINE_ERROR(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}      \
  }

DMOD_DEFINE_ERROR(DivisionByZero);
DMOD_DEFINE_ERROR(FieldMismatch);
DMOD_DEFINE_ERROR(MissingK);
DMOD_DEFINE_ERROR(SingularOmega);
DMOD_DEFINE_ERROR(CharPUnsupported);
DMOD_DEFINE_ERROR(NotFoundWithinBound);
DMOD_DEFINE_ERROR(UndecidedAtCap);
DMOD_DEFINE_ERROR(SingularInput);
DMOD_DEFINE_ERROR(RankViolation);
DMOD_DEFINE_ERROR(NotNormalized);
DMOD_DEFINE_ERROR(RetryLimitExceeded);
DMOD_DEFINE_ERROR(ZeroDenominator);
DMOD_DEFINE_ERROR(ResourceCap);
DMOD_DEFINE_ERROR(NotStabilized);
DMOD_DEFINE_ERROR(IndexOutOfRange);
DMOD_DEFINE_ERROR(InvalidArgument);

#undef DMOD_DEFINE_ERROR

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error("SyntaxError at " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

} // namespace dmod
