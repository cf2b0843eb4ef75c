#pragma once

#include <stdexcept>
#include <string>

namespace gyron {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonCoprimeError : Error {
    using Error::Error;
};

struct NonPositiveError : Error {
    using Error::Error;
};

struct InvalidLabelError : Error {
    using Error::Error;
};

struct OverflowError : Error {
    using Error::Error;
};

struct CutoffTooSmallError : Error {
    using Error::Error;
};

struct QuadratureNotConvergedError : Error {
    using Error::Error;
};

struct SingularAtPoleError : Error {
    using Error::Error;
};

struct MultiWellError : Error {
    using Error::Error;
};

struct RootBracketError : Error {
    using Error::Error;
};

struct NotHermitianError : Error {
    using Error::Error;
};

}  // namespace gyron
