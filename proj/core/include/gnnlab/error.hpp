#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gnnlab {

/// Base class for all gnnlab errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument, malformed input data, or an infeasible request.
/// Maps to process exit code 1 in the CLI.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error(what) {}
};

/// Text-format parse failure; carries the 1-based line number.
class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Training loss became non-finite or exceeded the divergence guard.
/// Maps to process exit code 2 in the CLI.
class DivergedError : public Error {
public:
  DivergedError(const std::string& what, std::int64_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  std::int64_t iteration() const noexcept { return iteration_; }

private:
  std::int64_t iteration_;
};

}  // namespace gnnlab
