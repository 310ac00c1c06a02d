#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flagcert {

// Base of every error raised by the library. Each subclass corresponds to one
// failure mode that callers (notably the CLI) map to a distinct outcome.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FLAGCERT_DEFINE_ERROR(Name)        \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

FLAGCERT_DEFINE_ERROR(InvalidDescriptor);
FLAGCERT_DEFINE_ERROR(DescriptorMismatch);
FLAGCERT_DEFINE_ERROR(NotAUnit);
FLAGCERT_DEFINE_ERROR(NotInTargetRing);
FLAGCERT_DEFINE_ERROR(ExponentOverflow);
FLAGCERT_DEFINE_ERROR(IndeterminateValuation);
FLAGCERT_DEFINE_ERROR(InexactResult);
FLAGCERT_DEFINE_ERROR(UnknownSymbol);
FLAGCERT_DEFINE_ERROR(IndeterminateMembership);
FLAGCERT_DEFINE_ERROR(IndeterminatePivot);
FLAGCERT_DEFINE_ERROR(SingularInput);
FLAGCERT_DEFINE_ERROR(NotARoot);
FLAGCERT_DEFINE_ERROR(NotAReflection);
FLAGCERT_DEFINE_ERROR(BoundExceeded);
FLAGCERT_DEFINE_ERROR(NotAtBasePoint);
FLAGCERT_DEFINE_ERROR(NotAtExpectedPoint);
FLAGCERT_DEFINE_ERROR(PreconditionViolated);

#undef FLAGCERT_DEFINE_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace flagcert
