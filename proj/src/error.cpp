// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/error.hpp"

#include <fmt/format.h>

namespace varitune {

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : ValidationError(fmt::format("{}:{}: {}", line, column, message)),
      line_(line),
      column_(column) {}

}  // namespace varitune
