#pragma once

#include <stdexcept>
#include <string>

namespace siac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SIAC_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

SIAC_DEFINE_ERROR(DivisionByZero);
SIAC_DEFINE_ERROR(SingularMatrix);
SIAC_DEFINE_ERROR(DimensionMismatch);
SIAC_DEFINE_ERROR(ParseError);
SIAC_DEFINE_ERROR(DegenerateSupport);
SIAC_DEFINE_ERROR(UnsupportedFamilySide);
SIAC_DEFINE_ERROR(SingularReproduction);
SIAC_DEFINE_ERROR(WindowOutOfDomain);
SIAC_DEFINE_ERROR(MeshTooCoarse);
SIAC_DEFINE_ERROR(OutsideInteriorRegion);
SIAC_DEFINE_ERROR(EmptyOverlap);
SIAC_DEFINE_ERROR(UnstableBlowup);
SIAC_DEFINE_ERROR(EmptyRegion);
SIAC_DEFINE_ERROR(NonpositiveError);
SIAC_DEFINE_ERROR(InvalidArgument);
SIAC_DEFINE_ERROR(IoError);

#undef SIAC_DEFINE_ERROR

}  // namespace siac
