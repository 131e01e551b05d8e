#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pda {

// Base class of every error raised by the advisor. The CLI maps these to exit
// code 1; anything else escaping main() is an internal failure (exit code 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A document parsed but violates an invariant. The message starts with the
// offending field path, e.g. "dimensions[1].attributes[0].cardinality".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t statement, std::string token, const std::string& what)
      : Error("statement " + std::to_string(statement + 1) + ": " + what +
              (token.empty() ? std::string() : " near '" + token + "'")),
        statement_(statement),
        token_(std::move(token)) {}

  std::size_t statement() const noexcept { return statement_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t statement_;
  std::string token_;
};

class UnknownAttributeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InapplicablePlan : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace pda
