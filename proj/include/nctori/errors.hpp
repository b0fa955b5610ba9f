#pragma once

#include <stdexcept>
#include <string>

namespace nctori {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct OverflowError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct PoleError : Error {
    using Error::Error;
};
struct DetError : Error {
    using Error::Error;
};
struct NotQuadraticError : Error {
    using Error::Error;
};
struct ThetaMismatch : Error {
    using Error::Error;
};
struct WindowOverflow : Error {
    using Error::Error;
};
struct SpecMismatch : Error {
    using Error::Error;
};
struct OffGridTranslation : Error {
    using Error::Error;
};
struct BoundaryOverflow : Error {
    using Error::Error;
};
struct WindowTooSmall : Error {
    using Error::Error;
};
struct OrderMismatch : Error {
    using Error::Error;
};
struct TraceError : Error {
    using Error::Error;
};
struct InconsistentCalibration : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nctori
