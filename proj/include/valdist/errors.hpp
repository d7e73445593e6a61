#pragma once

#include <stdexcept>
#include <string>

namespace valdist {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side precondition was violated (bad input, wrong domain, bad config).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver a trustworthy answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

#define VALDIST_DEFINE_ERROR(Name, Base)                  \
  class Name : public Base {                              \
   public:                                                \
    explicit Name(const std::string& what)                \
        : Base(std::string(#Name ": ") + what) {}         \
  }

VALDIST_DEFINE_ERROR(DomainError, PreconditionError);
VALDIST_DEFINE_ERROR(UnknownCatalogEntry, PreconditionError);
VALDIST_DEFINE_ERROR(CatalogFormatError, PreconditionError);
VALDIST_DEFINE_ERROR(BranchCut, PreconditionError);
VALDIST_DEFINE_ERROR(ContourTooClose, PreconditionError);
VALDIST_DEFINE_ERROR(PoleOnCircle, PreconditionError);
VALDIST_DEFINE_ERROR(IncompleteRegistry, PreconditionError);
VALDIST_DEFINE_ERROR(InterlacingViolation, PreconditionError);
VALDIST_DEFINE_ERROR(ConfigError, PreconditionError);
VALDIST_DEFINE_ERROR(ExceptionalRadius, PreconditionError);
VALDIST_DEFINE_ERROR(DegenerateT, PreconditionError);

VALDIST_DEFINE_ERROR(NoConvergence, NumericError);
VALDIST_DEFINE_ERROR(RoundingAmbiguity, NumericError);
VALDIST_DEFINE_ERROR(RolleFailure, NumericError);
VALDIST_DEFINE_ERROR(PerturbationFailed, NumericError);

#undef VALDIST_DEFINE_ERROR

}  // namespace valdist
