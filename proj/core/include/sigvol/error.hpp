#pragma once

#include <stdexcept>
#include <string>

namespace sigvol {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad parameters, unparsable text, violated preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Operands built over different alphabets.
class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A truncation level or shuffle window too small for the requested computation.
class TruncationError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Numerical breakdown: exploded flow, singular Gram system.
class DegenerateSystem : public Error {
public:
    using Error::Error;
};

} // namespace sigvol
