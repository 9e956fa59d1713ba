#pragma once

#include <stdexcept>
#include <string>

namespace metapac {

// Argument outside an operation's documented domain (bad n, lambda, dims, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed file or container. Carries the byte offset of the first bad byte
// when it is known (offset() < 0 otherwise).
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, long long offset = -1)
      : std::runtime_error(offset >= 0 ? what + " (byte offset " + std::to_string(offset) + ")"
                                       : what),
        offset_(offset) {}
  long long offset() const { return offset_; }

 private:
  long long offset_;
};

// Non-finite value produced where a finite one is required (e.g. a training
// objective turning NaN). Carries the epoch index when applicable.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, long long epoch = -1)
      : std::runtime_error(epoch >= 0 ? what + " (epoch " + std::to_string(epoch) + ")" : what),
        epoch_(epoch) {}
  long long epoch() const { return epoch_; }

 private:
  long long epoch_;
};

// Bad run configuration; message names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metapac
