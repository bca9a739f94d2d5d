// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return varitune::cli::run(argc, argv, std::cout, std::cerr);
}
