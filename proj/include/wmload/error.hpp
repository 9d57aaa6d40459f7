#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wmload {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes: ConfigError is a usage problem, everything else is a data problem.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error("empty input: " + what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("parse error at position " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class IngestError : public Error {
 public:
  IngestError(std::size_t line, const std::string& cause)
      : Error("line " + std::to_string(line) + ": " + cause), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

class EmptyAfterFilter : public Error {
 public:
  EmptyAfterFilter() : Error("no records left after the length filter") {}
};

class FitError : public Error {
 public:
  FitError(int rank, const std::string& what)
      : Error("fit error (rank " + std::to_string(rank) + "): " + what), rank_(rank) {}

  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

class DegenerateSample : public Error {
 public:
  DegenerateSample() : Error("sample has zero variance") {}
};

}  // namespace wmload
