// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <string>

#include "support/random_models.hpp"
#include "varitune/error.hpp"
#include "varitune/fm/dsl.hpp"

namespace varitune::fm {
namespace {

const std::string kFixture = std::string(VARITUNE_FIXTURES) + "/hf-transformers.fm";

TEST(ParseModelTest, MinimalOptionalChild) {
  const FeatureModel m = parse_model("feature root { optional { feature A } }");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.feature(1).name, "A");
  EXPECT_EQ(m.feature(1).edge, EdgeKind::kOptional);
  EXPECT_EQ(m.feature(1).parent, 0u);
}

TEST(ParseModelTest, AlternativeGroupUnderMandatory) {
  const FeatureModel m = parse_model(
      "feature root { mandatory { feature g alternative "
      "{ feature x attr param=\"p\" value=\"1\" } "
      "{ feature y attr param=\"p\" value=\"2\" } } }");
  // The grammar reads the second brace block as a sibling child list; both
  // forms are accepted because grouped children are direct declarations.
  ASSERT_EQ(m.size(), 4u);
  const Feature& g = m.feature(1);
  EXPECT_EQ(g.name, "g");
  EXPECT_EQ(g.group, GroupKind::kAlternative);
  EXPECT_EQ(g.edge, EdgeKind::kMandatory);
  ASSERT_EQ(g.children.size(), 2u);
  EXPECT_EQ(m.feature(g.children[0]).attribute, (Attribute{"p", "1"}));
  EXPECT_EQ(m.feature(g.children[1]).attribute, (Attribute{"p", "2"}));
  EXPECT_EQ(m.feature(g.children[1]).edge, EdgeKind::kGrouped);
}

TEST(ParseModelTest, UndeclaredConstraintFeature) {
  try {
    parse_model(
        "feature root { optional { feature x } }\nconstraints { x => y }");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("undeclared feature y"),
              std::string::npos);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 20u);
  }
}

TEST(ParseModelTest, SyntaxErrorCarriesPosition) {
  try {
    parse_model("feature root {\n  optional { feature }\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 22u);
  }
}

TEST(ParseModelTest, RejectsDuplicateNames) {
  EXPECT_THROW(parse_model("feature r { optional { feature a feature a } }"),
               ParseError);
}

TEST(ParseModelTest, RejectsAttributeOnAbstract) {
  EXPECT_THROW(
      parse_model("feature r abstract attr param=\"p\" value=\"v\""),
      ParseError);
}

TEST(ParseModelTest, RejectsEmptyGroupAndMisplacedChildren) {
  EXPECT_THROW(parse_model("feature r alternative"), ParseError);
  EXPECT_THROW(parse_model("feature r { feature a }"), ParseError);
  EXPECT_THROW(parse_model("feature r or { optional { feature a } }"),
               ParseError);
}

TEST(ParseModelTest, CommentsAndOperatorPrecedence) {
  const FeatureModel m = parse_model(R"(
    # leading comment
    feature r { optional { feature a feature b feature c } }  # trailing
    constraints {
      a | b & !c => c <=> a
    }
  )");
  ASSERT_EQ(m.constraints().size(), 1u);
  // ((a | (b & !c)) => c) <=> a
  const Formula& f = m.constraints()[0];
  ASSERT_EQ(f.op, Formula::Op::kIff);
  EXPECT_EQ(f.operands[0].op, Formula::Op::kImplies);
  EXPECT_EQ(f.operands[0].operands[0].op, Formula::Op::kOr);
  EXPECT_EQ(f.operands[0].operands[0].operands[1].op, Formula::Op::kAnd);
}

TEST(SerializeModelTest, EmptyConstraintsOmitsBlock) {
  const FeatureModel m = parse_model("feature root { optional { feature A } }");
  EXPECT_EQ(serialize_model(m).find("constraints"), std::string::npos);
}

TEST(SerializeModelTest, NestedParenthesesRoundTrip) {
  const FeatureModel m = parse_model(
      "feature r { optional { feature a feature b feature c } }\n"
      "constraints { (a & b) & c  a & (b & c)  !(!a)  a => (b => c)  "
      "(a => b) => c  !(a | b)  (a <=> b) <=> c }");
  EXPECT_EQ(parse_model(serialize_model(m)), m);
}

TEST(SerializeModelTest, RoundTripOnRandomModels) {
  testing::RandomModelOptions options;
  options.max_features = 30;
  options.max_constraints = 6;
  options.with_attributes = true;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const FeatureModel m = testing::random_model(seed, options);
    const std::string text = serialize_model(m);
    const FeatureModel again = parse_model(text);
    ASSERT_EQ(again, m) << text;
    EXPECT_EQ(serialize_model(again), text);
  }
}

TEST(SerializeModelTest, FixtureRoundTrip) {
  const FeatureModel m = load_model(kFixture);
  EXPECT_EQ(parse_model(serialize_model(m)), m);
}

TEST(ConcreteFeaturesTest, DocumentOrder) {
  const FeatureModel m = parse_model(
      "feature root abstract { optional { feature A } mandatory { feature B } }");
  EXPECT_EQ(m.concrete_features(), (std::vector<std::string>{"A", "B"}));
}

TEST(ConcreteFeaturesTest, AllAbstract) {
  const FeatureModel m =
      parse_model("feature root abstract { optional { feature A abstract } }");
  EXPECT_TRUE(m.concrete_features().empty());
}

TEST(ConcreteFeaturesTest, StableAcrossParses) {
  const FeatureModel a = load_model(kFixture);
  const FeatureModel b = load_model(kFixture);
  EXPECT_EQ(a.concrete_features(), b.concrete_features());
}

// The fixture reconstructs the published feature counts.
TEST(FixtureTest, FeatureCounts) {
  const FeatureModel m = load_model(kFixture);
  EXPECT_EQ(m.size(), 96u);
  EXPECT_EQ(m.concrete_features().size(), 67u);
}

TEST(FeatureModelTest, BuilderValidatesInvariants) {
  ModelBuilder b("root");
  const auto g = b.add(0, "g", EdgeKind::kMandatory, true);
  b.set_group(g, GroupKind::kOr);
  b.add(g, "x", EdgeKind::kOptional);  // must be kGrouped
  EXPECT_THROW(b.build(), ValidationError);

  ModelBuilder bad_name("root");
  bad_name.add(0, "9lives", EdgeKind::kOptional);
  EXPECT_THROW(bad_name.build(), ValidationError);
}

TEST(FeatureModelTest, BuilderRenumbersIntoDocumentOrder) {
  ModelBuilder b("root");
  const auto a = b.add(0, "a", EdgeKind::kOptional);
  b.add(0, "b", EdgeKind::kOptional);
  b.add(a, "a1", EdgeKind::kOptional);  // inserted last, pre-order third
  b.add_constraint(Formula::var(3));
  const FeatureModel m = b.build();
  EXPECT_EQ(m.concrete_features(), (std::vector<std::string>{"a", "a1", "b"}));
  EXPECT_EQ(m.constraints()[0].feature, m.index_of("a1"));
}

}  // namespace
}  // namespace varitune::fm
