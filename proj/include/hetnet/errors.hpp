#pragma once

#include <stdexcept>
#include <string>

namespace hetnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    // CLI exit code associated with this failure.
    virtual int exit_code() const { return 1; }
};

#define HETNET_ERROR(Name, Base, Code)                          \
    class Name : public Base {                                  \
    public:                                                     \
        explicit Name(const std::string& m) : Base(m) {}        \
        int exit_code() const override { return Code; }         \
    };

HETNET_ERROR(PositivityViolation, Error, 1)
HETNET_ERROR(AssumptionViolation, Error, 1)
HETNET_ERROR(NonGeneric, Error, 1)
HETNET_ERROR(InvalidSignPattern, Error, 1)
HETNET_ERROR(ConfigError, Error, 1)
HETNET_ERROR(NoSaddlePair, Error, 1)
HETNET_ERROR(EquivarianceViolation, Error, 1)
HETNET_ERROR(UnknownMap, Error, 1)
HETNET_ERROR(UnsupportedForm, Error, 2)
HETNET_ERROR(UnsupportedRegime, Error, 2)
HETNET_ERROR(CapExceeded, Error, 3)
HETNET_ERROR(SearchFailed, Error, 3)
HETNET_ERROR(InsufficientSamples, Error, 3)
HETNET_ERROR(Blowup, Error, 3)

#undef HETNET_ERROR

// Relative tolerance for rejecting inputs that sit on a case boundary.
inline constexpr double kTolGeneric = 1e-9;

// Throws NonGeneric when |x - boundary| is within kTolGeneric (relative to
// max(1, |boundary|)). `what` names the quantity in the message.
void require_generic(double x, double boundary, const std::string& what);

}  // namespace hetnet
