#pragma once

#include <stdexcept>
#include <string>

namespace slick {

// Numerical aborts carry enough context to dump the last valid state.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    using Error::Error;
};
struct SlopeTooLarge : Error {
    using Error::Error;
};
struct DegenerateMap : Error {
    using Error::Error;
};
struct SingularMode : Error {
    using Error::Error;
};
struct InvalidConcentration : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct Singular : Error {
    using Error::Error;
};
struct IncompatibleData : Error {
    using Error::Error;
};
struct CompatibilityFailed : Error {
    using Error::Error;
};
struct FitDomainError : Error {
    using Error::Error;
};

}  // namespace slick
