#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bratteli {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed diagram or substitution document.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line = 0, std::string field = {})
      : Error(format(message, line, field)),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            const std::string& field) {
    std::string out = "parse error";
    if (line != 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " in field '" + field + "'";
    return out + ": " + message;
  }

  std::size_t line_;
  std::string field_;
};

/// An enumeration or expansion would exceed its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// The tail equivalence relation is not aperiodic.
class NotAperiodic : public Error {
 public:
  NotAperiodic(std::string message, std::size_t witness_class)
      : Error(std::move(message)), witness_(witness_class) {}
  std::size_t witness_class() const noexcept { return witness_; }

 private:
  std::size_t witness_;
};

/// A substitution has a letter whose iterates stay bounded.
class NotGrowing : public Error {
 public:
  using Error::Error;
};

class NotDistinguished : public Error {
 public:
  using Error::Error;
};

/// Two approximate spectral radii are closer than the comparison gap.
class AmbiguousComparison : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroBlock : public Error {
 public:
  using Error::Error;
};

/// A vector is not an element of the normalized core simplex.
class NotInD : public Error {
 public:
  using Error::Error;
};

class EndpointMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroMeasureCylinder : public Error {
 public:
  using Error::Error;
};

/// Exact oracle refuses inputs above its desk-scale size limit.
class SizeRefused : public Error {
 public:
  using Error::Error;
};

/// A structural precondition (e.g. primitive diagonal blocks) does not hold.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace bratteli
