#pragma once

#include <stdexcept>
#include <string>

namespace eaqc {

// Base class for every domain failure raised by the library. The CLI maps
// these to exit code 1; I/O and parse failures are IoError (exit code 2).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionLimitError : public Error {
public:
    using Error::Error;
};

class LabelError : public Error {
public:
    using Error::Error;
};

class NotAStateError : public Error {
public:
    using Error::Error;
};

class ContractError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class InfeasibleConversionError : public Error {
public:
    using Error::Error;
};

// Two independent evaluation routes of the same quantity disagreed.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eaqc
