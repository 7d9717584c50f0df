#pragma once

#include <stdexcept>
#include <string>

namespace spt {

//! Broad category used by the command line front end to pick an exit code.
enum class ErrorClass { Usage, Numeric, Verification };

class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& msg, ErrorClass cls = ErrorClass::Numeric)
        : std::runtime_error(msg), kind_(std::move(kind)), cls_(cls) {}
    const std::string& kind() const { return kind_; }
    ErrorClass error_class() const { return cls_; }

  private:
    std::string kind_;
    ErrorClass cls_;
};

#define SPT_DEFINE_ERROR(Name, Cls)                                                      \
    class Name : public Error {                                                          \
      public:                                                                            \
        explicit Name(const std::string& msg) : Error(#Name, msg, ErrorClass::Cls) {}    \
    };

SPT_DEFINE_ERROR(InvalidArgument, Usage)
SPT_DEFINE_ERROR(UnsupportedDimension, Usage)
SPT_DEFINE_ERROR(BranchOutOfRange, Usage)
SPT_DEFINE_ERROR(FeasibilityError, Usage)
SPT_DEFINE_ERROR(NonGenericPoint, Numeric)
SPT_DEFINE_ERROR(NegativeRadicand, Numeric)
SPT_DEFINE_ERROR(SingularLine, Numeric)
SPT_DEFINE_ERROR(NonTransverse, Numeric)
SPT_DEFINE_ERROR(DegenerateImpact, Numeric)
SPT_DEFINE_ERROR(SingularCaustic, Numeric)
SPT_DEFINE_ERROR(NoSolutionInComponent, Numeric)
SPT_DEFINE_ERROR(DegenerateOrbit, Numeric)
SPT_DEFINE_ERROR(VerificationFailed, Verification)

#undef SPT_DEFINE_ERROR

} // namespace spt
