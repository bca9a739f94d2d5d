// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "varitune/fm/feature_model.hpp"

namespace varitune::testing {

struct RandomModelOptions {
  std::size_t max_features = 15;
  std::size_t max_constraints = 4;
  double abstract_probability = 0.2;
  bool with_attributes = false;
};

// Random tree with mixed mandatory/optional/or/alternative structure and
// random cross-tree constraints; may be unsatisfiable.
fm::FeatureModel random_model(std::uint64_t seed,
                              const RandomModelOptions& options = {});

// Root with `k` independent optional concrete features f0..f{k-1}.
fm::FeatureModel independent_optionals(std::size_t k);

}  // namespace varitune::testing
