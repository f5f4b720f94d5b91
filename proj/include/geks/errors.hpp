#pragma once

#include <stdexcept>
#include <string>

namespace geks {

// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GEKS_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// Shape / input problems
GEKS_DEFINE_ERROR(DimensionMismatch);
GEKS_DEFINE_ERROR(InvalidParameter);
GEKS_DEFINE_ERROR(ParseError);
GEKS_DEFINE_ERROR(ConstantOutcome);
GEKS_DEFINE_ERROR(InvalidConfig);
GEKS_DEFINE_ERROR(AsymmetricKernel);

// Numerical failures
GEKS_DEFINE_ERROR(NotPositiveDefinite);
GEKS_DEFINE_ERROR(DegenerateCovariance);
GEKS_DEFINE_ERROR(ConvergenceFailure);
GEKS_DEFINE_ERROR(RankDeficientCovariates);
GEKS_DEFINE_ERROR(PerfectSeparation);
GEKS_DEFINE_ERROR(DegenerateTest);
GEKS_DEFINE_ERROR(NonpositiveMatchedMean);

#undef GEKS_DEFINE_ERROR

}  // namespace geks
