#pragma once

#include <stdexcept>
#include <string>

namespace entscale {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ENTSCALE_DEFINE_ERROR(NAME)                                            \
    class NAME : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
    }

ENTSCALE_DEFINE_ERROR(DomainError);            // argument outside a scale/reduction domain
ENTSCALE_DEFINE_ERROR(OverflowError);          // exp() argument beyond representable range
ENTSCALE_DEFINE_ERROR(ParseError);             // malformed spec document
ENTSCALE_DEFINE_ERROR(NotNormalizableError);   // density kernel does not integrate
ENTSCALE_DEFINE_ERROR(QuadratureError);        // error estimate above tolerance after max refinement
ENTSCALE_DEFINE_ERROR(UnattainableTargetError);// constraint target outside feasible range
ENTSCALE_DEFINE_ERROR(ParameterRangeError);    // family parameters outside admissible range
ENTSCALE_DEFINE_ERROR(NonMonotoneError);       // cumulative scale fails monotonicity check
ENTSCALE_DEFINE_ERROR(DegenerateError);        // degenerate variance function (v2 = 0)
ENTSCALE_DEFINE_ERROR(NotCanonicalError);      // variance function not in canonical position
ENTSCALE_DEFINE_ERROR(RangeError);             // mean / natural parameter outside family range
ENTSCALE_DEFINE_ERROR(SupportError);           // point outside family support

#undef ENTSCALE_DEFINE_ERROR

} // namespace entscale
