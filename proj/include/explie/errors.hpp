#pragma once

#include <stdexcept>
#include <string>

namespace explie {

// Base for every error raised by the library. Verification failures are
// reported as data (reports/flags), never as exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ArityError : public Error {
public:
    using Error::Error;
};

class InvalidBaseError : public Error {
public:
    using Error::Error;
};

class DuplicateError : public Error {
public:
    using Error::Error;
};

class DegreeError : public Error {
public:
    using Error::Error;
};

class DepthOverflowError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnknownNameError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

} // namespace explie
