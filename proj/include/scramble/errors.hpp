#pragma once

#include <stdexcept>
#include <string>

namespace scramble {

/// Raised when a caller passes arguments outside an operation's domain.
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an input object fails a numerical contract (hermiticity, trace, ...).
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a request exceeds what the dense methods can handle.
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool cond, const std::string &msg) {
    if(!cond) throw ArgumentError(msg);
}
} // namespace detail

} // namespace scramble
