// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "support/oracles.hpp"
#include "support/random_models.hpp"
#include "varitune/error.hpp"
#include "varitune/fm/dsl.hpp"
#include "varitune/logic/reasoner.hpp"
#include "varitune/sampler/interactions.hpp"
#include "varitune/sampler/sample_io.hpp"
#include "varitune/sampler/sampler.hpp"

namespace varitune::sampler {
namespace {

using testing::covered_pairs;
using testing::enumerate_valid;
using testing::independent_optionals;
using testing::random_model;
using testing::valid_pairs;

std::vector<std::vector<char>> assignments(const Sample& s) {
  std::vector<std::vector<char>> out;
  for (const auto& c : s.configurations) out.push_back(c.assignment);
  return out;
}

fm::FeatureModel hf_model() {
  return fm::load_model(std::filesystem::path(VARITUNE_FIXTURES) / "hf-transformers.fm");
}

void expect_well_formed(const fm::FeatureModel& model, const Sample& s) {
  std::set<std::string> ids;
  for (const auto& c : s.configurations) {
    EXPECT_TRUE(logic::is_valid(model, c.assignment)) << c.id;
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
  }
}

TEST(InteractionSpace, CountsValidPairs) {
  const auto model = independent_optionals(3);
  logic::Reasoner reasoner(model);
  const InteractionSpace space(reasoner, 2);
  EXPECT_EQ(space.size(), 12u);
  EXPECT_EQ(space.valid_count(), 12u);

  const auto alt = fm::parse_model("feature r alternative { feature a feature b feature c }");
  logic::Reasoner alt_reasoner(alt);
  // Among a, b, c only (x,true)(y,true) is invalid: 9 valid; the concrete
  // root adds (r,true) with each child literal: 6 more.
  EXPECT_EQ(InteractionSpace(alt_reasoner, 2).valid_count(), 15u);
}

TEST(InteractionSpace, MatchesOracleOnRandomModels) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto model = random_model(seed);
    const auto valid = enumerate_valid(model);
    logic::Reasoner reasoner(model);
    const InteractionSpace space(reasoner, 2);
    std::set<testing::PairLiteral> from_space;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (!space.valid(i)) continue;
      const auto inter = space.interaction(i);
      from_space.emplace(inter.literals[0].first, inter.literals[0].second,
                         inter.literals[1].first, inter.literals[1].second);
    }
    EXPECT_EQ(from_space, valid_pairs(model, valid)) << "seed " << seed;
  }
}

TEST(InteractionSpace, RejectsStrengthOutOfRange) {
  const auto model = independent_optionals(3);
  logic::Reasoner reasoner(model);
  EXPECT_THROW(InteractionSpace(reasoner, 0), ValidationError);
  EXPECT_THROW(InteractionSpace(reasoner, 7), ValidationError);
}

TEST(Coverage, Examples) {
  const auto model = independent_optionals(3);
  EXPECT_EQ(coverage_of(model, {}), 0.0);
  const auto one = logic::make_configuration(model, {1, 0, 0, 0});
  EXPECT_DOUBLE_EQ(coverage_of(model, {one}), 0.25);

  std::vector<logic::Configuration> all;
  for (auto& a : enumerate_valid(model)) {
    all.push_back(logic::make_configuration(model, a));
  }
  EXPECT_EQ(coverage_of(model, all), 1.0);
}

TEST(Coverage, MinimumCoverOfThreeOptionalsIsFour) {
  // Brute force over subsets of the 8 products.
  const auto model = independent_optionals(3);
  const auto products = enumerate_valid(model);
  ASSERT_EQ(products.size(), 8u);
  const auto target = valid_pairs(model, products);
  std::size_t minimum = 9;
  for (unsigned mask = 1; mask < 256; ++mask) {
    std::vector<std::vector<char>> subset;
    for (unsigned i = 0; i < 8; ++i) {
      if (mask & (1u << i)) subset.push_back(products[i]);
    }
    if (covered_pairs(model, subset) == target) {
      minimum = std::min(minimum, subset.size());
    }
  }
  EXPECT_EQ(minimum, 4u);
}

TEST(Greedy, ThreeOptionals) {
  const auto model = independent_optionals(3);
  const auto s = sample_twise_greedy(model, 2, 1);
  EXPECT_LE(s.size(), 6u);
  EXPECT_GE(s.size(), 4u);
  EXPECT_EQ(s.coverage, 1.0);
  expect_well_formed(model, s);
}

TEST(Greedy, AlternativeNeedsEveryChild) {
  const auto model = fm::parse_model("feature r alternative { feature a feature b feature c }");
  const auto s = sample_twise_greedy(model, 2, 0);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.coverage, 1.0);
}

TEST(Incremental, ThreeOptionals) {
  const auto model = independent_optionals(3);
  const auto s = sample_twise_incremental(model, 2, 5);
  EXPECT_EQ(s.coverage, 1.0);
  expect_well_formed(model, s);
}

TEST(TWise, FullCoverageOnRandomModels) {
  testing::RandomModelOptions options;
  options.max_features = 20;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto model = random_model(seed, options);
    const auto valid = enumerate_valid(model);
    if (valid.empty()) {
      EXPECT_THROW(sample_twise_greedy(model, 2, seed), ValidationError);
      continue;
    }
    const auto target = valid_pairs(model, valid);
    for (const auto& s : {sample_twise_greedy(model, 2, seed),
                          sample_twise_incremental(model, 2, seed)}) {
      EXPECT_EQ(covered_pairs(model, assignments(s)), target)
          << strategy_name(s.strategy) << " seed " << seed;
      EXPECT_EQ(s.coverage, 1.0);
      EXPECT_LE(s.size(), valid.size());
      expect_well_formed(model, s);
    }
  }
}

TEST(TWise, ThreeWiseCoverage) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto model = random_model(seed);
    if (enumerate_valid(model).empty()) continue;
    EXPECT_EQ(sample_twise_greedy(model, 3, seed).coverage, 1.0);
    EXPECT_EQ(sample_twise_incremental(model, 3, seed).coverage, 1.0);
  }
}

TEST(TWise, SamplesAvoidDeadFeatures) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto model = random_model(seed);
    if (enumerate_valid(model).empty()) continue;
    const auto dead = logic::dead_features(model);
    const auto s = sample_twise_incremental(model, 2, seed);
    for (const auto& c : s.configurations) {
      for (const auto& name : dead) {
        EXPECT_FALSE(c.selected(model.index_of(name)));
      }
    }
  }
}

TEST(Random, DefaultSizeAndExhaustion) {
  const auto model = independent_optionals(6);
  const auto s = sample_random(model, std::nullopt, 3);
  EXPECT_EQ(s.size(), model.size());
  EXPECT_FALSE(s.exhausted);
  expect_well_formed(model, s);

  const auto small = independent_optionals(2);  // 4 valid configurations
  const auto e = sample_random(small, 10, 3);
  EXPECT_EQ(e.size(), 4u);
  EXPECT_TRUE(e.exhausted);
  expect_well_formed(small, e);
}

TEST(Random, UnsatisfiableModelRejected) {
  const auto model = fm::parse_model(
      "feature r { optional { feature a } }\nconstraints { a !a }");
  EXPECT_THROW(sample_random(model, 3, 0), ValidationError);
  EXPECT_THROW(sample_twise_incremental(model, 2, 0), ValidationError);
}

TEST(Sampling, Deterministic) {
  const auto model = random_model(17);
  const auto json = [&](const Sample& s) {
    return sample_to_json(model, s) + sample_meta_to_json(s);
  };
  EXPECT_EQ(json(sample_random(model, std::nullopt, 9)),
            json(sample_random(model, std::nullopt, 9)));
  EXPECT_EQ(json(sample_twise_greedy(model, 2, 9)),
            json(sample_twise_greedy(model, 2, 9)));
  EXPECT_EQ(json(sample_twise_incremental(model, 2, 9)),
            json(sample_twise_incremental(model, 2, 9)));
}

TEST(Fixture, SampleSizes) {
  const auto model = hf_model();
  const auto r = sample_random(model, std::nullopt, 1);
  EXPECT_EQ(r.size(), 96u);
  expect_well_formed(model, r);
  const auto g = sample_twise_greedy(model, 2, 1);
  const auto i = sample_twise_incremental(model, 2, 1);
  EXPECT_EQ(g.coverage, 1.0);
  EXPECT_EQ(i.coverage, 1.0);
  expect_well_formed(model, g);
  expect_well_formed(model, i);
  EXPECT_GE(2.0 * i.size(), 1.0 * g.size());
  EXPECT_LE(i.size(), 2 * g.size());
  std::cout << "fixture sizes: random " << r.size() << ", greedy " << g.size()
            << ", incremental " << i.size() << "\n";
}

TEST(Merge, DropsDuplicatesKeepsIds) {
  const auto model = independent_optionals(3);
  const auto g = sample_twise_greedy(model, 2, 1);
  const auto merged = merge_samples(model, {g, g, sample_random(model, 8, 2)});
  EXPECT_EQ(merged.strategy, Strategy::kCombined);
  EXPECT_EQ(merged.size(), 8u);
  EXPECT_EQ(merged.coverage, 1.0);
  expect_well_formed(model, merged);
}

TEST(SampleIo, RoundTrip) {
  const auto model = hf_model();
  const auto s = sample_twise_incremental(model, 2, 4);
  const auto back = sample_from_json(model, sample_to_json(model, s));
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_EQ(back.configurations[k], s.configurations[k]);
  }
  EXPECT_EQ(back.coverage, 1.0);

  const auto dir = std::filesystem::temp_directory_path() / "varitune_sample_io";
  std::filesystem::remove_all(dir);
  write_sample(model, s, dir);
  const auto loaded = load_sample(model, dir / "sample.json");
  EXPECT_EQ(loaded.strategy, Strategy::kIncremental2Wise);
  EXPECT_EQ(loaded.seed, 4u);
  std::filesystem::remove_all(dir);
}

TEST(SampleIo, RejectsBadInput) {
  const auto model = independent_optionals(2);
  EXPECT_THROW(sample_from_json(model, "{"), ValidationError);
  EXPECT_THROW(sample_from_json(model, "{}"), ValidationError);
  EXPECT_THROW(sample_from_json(model, R"([{"id":"a","selected":["zz"]}])"),
               ValidationError);
  // root missing
  EXPECT_THROW(sample_from_json(model, R"([{"id":"a","selected":["f0"]}])"),
               ValidationError);
  EXPECT_THROW(sample_from_json(
                   model, R"([{"id":"a","selected":["root"]},{"id":"a","selected":["root","f0"]}])"),
               ValidationError);
  EXPECT_NO_THROW(sample_from_json(model, R"([{"id":"a","selected":["root"]}])"));
}

}  // namespace
}  // namespace varitune::sampler
