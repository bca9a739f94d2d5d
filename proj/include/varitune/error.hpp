// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varitune {

// Base of every error the library raises. The CLI maps subclasses to exit
// codes: ValidationError -> 2, BudgetExceeded -> 3, anything else -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a model, configuration or schema invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed DSL or CSV text; carries the 1-based source position.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A solver or counter gave up after its decision budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace varitune
