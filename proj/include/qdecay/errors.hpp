#pragma once

#include <stdexcept>
#include <string>

namespace qdecay {

// Base of every error raised by the library. The kind string is stable and
// used by the scenario runner when recording per-check failures.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define QDECAY_DEFINE_ERROR(Name, tag)                                     \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(tag, what) {}           \
  };

QDECAY_DEFINE_ERROR(DomainError, "domain error")
QDECAY_DEFINE_ERROR(MetricValidityError, "metric-validity error")
QDECAY_DEFINE_ERROR(DegeneracyError, "degeneracy error")
QDECAY_DEFINE_ERROR(NormalizationError, "normalization error")
QDECAY_DEFINE_ERROR(ShapeError, "shape error")
QDECAY_DEFINE_ERROR(ProfileError, "profile error")
QDECAY_DEFINE_ERROR(ParameterError, "parameter error")
QDECAY_DEFINE_ERROR(GridError, "grid error")
QDECAY_DEFINE_ERROR(MonotonicityError, "monotonicity error")
QDECAY_DEFINE_ERROR(InputError, "input error")
QDECAY_DEFINE_ERROR(RangeError, "range error")
QDECAY_DEFINE_ERROR(MethodError, "method error")
QDECAY_DEFINE_ERROR(BudgetError, "budget error")
QDECAY_DEFINE_ERROR(SampleError, "sample error")
QDECAY_DEFINE_ERROR(CapError, "cap error")
QDECAY_DEFINE_ERROR(ConstructionError, "construction error")
QDECAY_DEFINE_ERROR(ConfigError, "config error")
QDECAY_DEFINE_ERROR(CapabilityError, "capability error")
QDECAY_DEFINE_ERROR(IoError, "I/O error")

#undef QDECAY_DEFINE_ERROR

}  // namespace qdecay
