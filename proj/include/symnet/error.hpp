#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symnet {

// Base for every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Shapes or lengths that do not agree.
class DimensionError : public Error {
public:
  using Error::Error;
};

// Input outside what the implementation is willing to enumerate.
class CapabilityError : public Error {
public:
  using Error::Error;
};

// Malformed value (bad permutation, duplicate pattern, unknown kind, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

class DivergenceError : public NumericError {
public:
  DivergenceError(std::size_t epoch, double loss)
      : NumericError("training diverged at epoch " + std::to_string(epoch) +
                     " (loss " + std::to_string(loss) + ")"),
        epoch_(epoch), loss_(loss) {}

  std::size_t epoch() const noexcept { return epoch_; }
  double loss() const noexcept { return loss_; }

private:
  std::size_t epoch_;
  double loss_;
};

namespace detail {

inline void require_dim(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

} // namespace detail
} // namespace symnet
