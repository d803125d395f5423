#pragma once

#include <stdexcept>
#include <string>

namespace pdm {

// Base of every library error. The derived names mirror the failure modes the
// CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PDM_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  };

PDM_DEFINE_ERROR(DomainError)
PDM_DEFINE_ERROR(SingularPoint)
PDM_DEFINE_ERROR(QuadratureFailure)
PDM_DEFINE_ERROR(ParameterError)
PDM_DEFINE_ERROR(IndexError)
PDM_DEFINE_ERROR(WrongClass)
PDM_DEFINE_ERROR(GridTooCoarse)
PDM_DEFINE_ERROR(ComplexModel)
PDM_DEFINE_ERROR(SingularOnGrid)
PDM_DEFINE_ERROR(ConvergenceFailure)
PDM_DEFINE_ERROR(BudgetExceeded)
PDM_DEFINE_ERROR(MatchFailure)
PDM_DEFINE_ERROR(ConfigError)

#undef PDM_DEFINE_ERROR

}  // namespace pdm
