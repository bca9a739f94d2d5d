// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace varitune::cli {

// Runs one `varitune` invocation. Exit codes: 0 success, 1 usage or other
// failure, 2 validation error, 3 decision budget exceeded.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varitune::cli
