#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Two levels of a line spectrum coincide (to double precision).
class DegenerateSpectrum : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// The reference point coincides exactly with a level.
class DegenerateReferencePoint : public Error {
 public:
  explicit DegenerateReferencePoint(double phi)
      : Error("degenerate reference point: phi = " + std::to_string(phi) +
              " coincides with a level"),
        phi_(phi) {}
  double phi() const noexcept { return phi_; }

 private:
  double phi_;
};

enum class WindowSide { below, above };

/// Not enough levels on one side of the reference point.
class WindowUnderflow : public Error {
 public:
  WindowUnderflow(WindowSide side, std::size_t have, std::size_t need)
      : Error(std::string("window underflow: ") +
              (side == WindowSide::below ? "below" : "above") +
              " reference point (have " + std::to_string(have) + ", need " +
              std::to_string(need) + ")"),
        side_(side) {}
  WindowSide side() const noexcept { return side_; }

 private:
  WindowSide side_;
};

/// Retriable sampling failure; carries the seed that produced it.
class SamplerFailure : public Error {
 public:
  SamplerFailure(const std::string& what, std::uint64_t seed)
      : Error("sampler failure (seed " + std::to_string(seed) + "): " + what),
        seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

class InsufficientLevels : public Error {
 public:
  using Error::Error;
};

/// Parse failure with a 1-based line number (0 when not line specific).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lls
