#ifndef WORDOPT_ERRORS_HPP
#define WORDOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wordopt {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
struct ContractError : Error {
    using Error::Error;
};

// Problem configuration is malformed or inconsistent (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// Checkpoint or wire bytes could not be decoded into a whole value.
struct DecodeError : Error {
    using Error::Error;
};

// A score evaluation failed; the message carries the offending word.
struct EvalError : Error {
    using Error::Error;
};

// An external command failed to launch, timed out, or was killed (exit code 4).
struct ExecError : Error {
    using Error::Error;
};

// Message transport or worker pool failure (exit code 5).
struct TransportError : Error {
    using Error::Error;
};

}  // namespace wordopt

#endif
