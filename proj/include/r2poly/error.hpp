#ifndef R2POLY_ERROR_HPP
#define R2POLY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace r2poly {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad fraction, bad graph file, invalid structure.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An instance exceeds an enumeration or oracle size limit.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

/// A documented precondition on parameters does not hold.
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// Parameters land on a point the reductions deliberately exclude.
class ExcludedPoint : public Error {
public:
    using Error::Error;
};

/// An internal identity that must hold exactly did not.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

} // namespace r2poly

#endif // R2POLY_ERROR_HPP
