// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "varitune/fm/feature_model.hpp"

namespace varitune::fm {

// Parses the block-structured feature-model language:
//
//   feature root abstract {
//     mandatory { feature cache abstract alternative {
//       feature cache_static attr param="cache_implementation" value="static"
//       feature cache_dynamic attr param="cache_implementation" value="dynamic"
//     } }
//     optional { feature do_sample }
//   }
//   constraints { cache_static => !do_sample }
//
// Throws ParseError (with line/column) on syntax errors, duplicate names,
// undeclared constraint leaves and attributes on abstract features.
FeatureModel parse_model(std::string_view text);

FeatureModel load_model(const std::string& path);

// Canonical text; parse_model(serialize_model(m)) == m.
std::string serialize_model(const FeatureModel& model);

std::string format_formula(const FeatureModel& model, const Formula& formula);

}  // namespace varitune::fm
