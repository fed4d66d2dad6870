/*
 * Copyright 2026 The edpdiag Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "edpdiag/dataset.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "edpdiag/error.h"
#include "edpdiag/spread.h"

namespace edpdiag {
namespace {

using ::testing::HasSubstr;

const std::vector<VariableSpec> kLA = {
    {"L", VariableKind::kBinary, VariableRole::kAdjustment},
    {"A", VariableKind::kContinuous, VariableRole::kTreatment}};

TEST(DatasetTest, ParsesThreeRowFile) {
  Dataset d = ParseCsv("L,A\n0,0.5\n1,1.25\n0,-3\n", kLA);
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.cols(), 2u);
  EXPECT_EQ(d.treatment_index(), 1u);
  EXPECT_EQ(d.at(1, 1), 1.25);
  EXPECT_EQ(d.at(2, 1), -3.0);
  EXPECT_EQ(d.at(1, 0), 1.0);
}

TEST(DatasetTest, HeaderOrderFollowsSchema) {
  Dataset d = ParseCsv("A,L\n0.5,1\n", kLA);
  EXPECT_EQ(d.spec(0).name, "L");
  EXPECT_EQ(d.at(0, 0), 1.0);
  EXPECT_EQ(d.at(0, 1), 0.5);
}

TEST(DatasetTest, MissingValueNamesRowAndColumn) {
  try {
    ParseCsv("L,A\n0,0.5\n1,NA\n", kLA);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_THAT(std::string(e.what()), HasSubstr("missing value at row 2, column 'A'"));
  }
  for (const char* token : {"", "NaN", "."}) {
    EXPECT_THROW(ParseCsv(std::string("L,A\n0,") + token + "\n", kLA), DataError)
        << token;
  }
}

TEST(DatasetTest, CategoricalCodesInFirstAppearanceOrder) {
  const std::vector<VariableSpec> schema = {
      {"G", VariableKind::kCategorical, VariableRole::kAdjustment},
      {"A", VariableKind::kContinuous, VariableRole::kTreatment}};
  Dataset d = ParseCsv("G,A\nx,1\ny,2\nx,3\n", schema);
  EXPECT_EQ(d.at(0, 0), 0.0);
  EXPECT_EQ(d.at(1, 0), 1.0);
  EXPECT_EQ(d.at(2, 0), 0.0);
  EXPECT_EQ(d.levels(0), (std::vector<std::string>{"x", "y"}));
}

TEST(DatasetTest, RejectsMalformedInput) {
  EXPECT_THROW(ParseCsv("L,A\n2,0.5\n", kLA), DataError);        // binary
  EXPECT_THROW(ParseCsv("L,A\n0,abc\n", kLA), DataError);        // number
  EXPECT_THROW(ParseCsv("L,A,A\n0,1,1\n", kLA), DataError);      // duplicate
  EXPECT_THROW(ParseCsv("L,A,B\n0,1,1\n", kLA), DataError);      // unknown
  EXPECT_THROW(ParseCsv("A\n1\n", kLA), DataError);              // missing col
  EXPECT_THROW(ParseCsv("L,A\n", kLA), DataError);               // no rows
  EXPECT_THROW(ReadCsv("/nonexistent/file.csv", kLA), DataError);
}

TEST(DatasetTest, SchemaNeedsExactlyOneTreatment) {
  EXPECT_THROW(ValidateSchema({{"A", VariableKind::kContinuous,
                                VariableRole::kAdjustment}}),
               DataError);
  EXPECT_THROW(
      ValidateSchema({{"A", VariableKind::kContinuous, VariableRole::kTreatment},
                      {"B", VariableKind::kContinuous, VariableRole::kTreatment}}),
      DataError);
  EXPECT_THROW(
      ValidateSchema({{"A", VariableKind::kContinuous, VariableRole::kTreatment},
                      {"A", VariableKind::kBinary, VariableRole::kAdjustment}}),
      DataError);
}

TEST(DatasetTest, ActiveColumnsSkipIgnored) {
  const std::vector<VariableSpec> schema = {
      {"Y", VariableKind::kContinuous, VariableRole::kIgnored},
      {"A", VariableKind::kContinuous, VariableRole::kTreatment},
      {"L", VariableKind::kBinary, VariableRole::kAdjustment}};
  Dataset d = ParseCsv("Y,A,L\n9,1,0\n", schema);
  EXPECT_EQ(d.active_columns(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(d.adjustment_columns(), (std::vector<std::size_t>{2}));
}

TEST(DatasetTest, CsvRoundTripIsBitIdentical) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1e3);
  std::vector<double> a, l;
  for (int i = 0; i < 500; ++i) {
    a.push_back(normal(rng) * std::pow(10.0, static_cast<double>(i % 30) - 15));
    l.push_back(i % 2);
  }
  a.push_back(5e-324);
  l.push_back(0);
  a.push_back(-0.1);
  l.push_back(1);
  Dataset d(kLA, {l, a});
  std::ostringstream out;
  WriteCsv(out, d);
  Dataset back = ParseCsv(out.str(), kLA);
  ASSERT_EQ(back.rows(), d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.at(i, 1)),
              std::bit_cast<std::uint64_t>(d.at(i, 1)));
  }
}

TEST(DatasetTest, QuotesLabelsThatNeedIt) {
  const std::vector<VariableSpec> schema = {
      {"G", VariableKind::kCategorical, VariableRole::kAdjustment},
      {"A", VariableKind::kContinuous, VariableRole::kTreatment}};
  Dataset d(schema, {{0, 1}, {1, 2}}, {{"a,b", "plain"}, {}});
  std::ostringstream out;
  WriteCsv(out, d);
  EXPECT_THAT(out.str(), HasSubstr("\"a,b\""));
  Dataset back = ParseCsv(out.str(), schema);
  EXPECT_EQ(back.levels(0), d.levels(0));
}

TEST(SpreadTest, HandComputedExamples) {
  const std::vector<double> two = {0, 2};
  EXPECT_NEAR(ComputeColumnSpread(two).sd, 1.41421356, 1e-8);

  const std::vector<double> flat = {5, 5, 5};
  const ColumnSpread c = ComputeColumnSpread(flat);
  EXPECT_EQ(c.sd, 0.0);
  EXPECT_TRUE(c.constant);

  const std::vector<double> three = {0, 1, 2};
  EXPECT_NEAR(ComputeColumnSpread(three).mean_pairwise_distance, 4.0 / 3.0, 1e-15);

  const std::vector<double> one = {1};
  EXPECT_THROW(ComputeColumnSpread(one), DataError);
}

TEST(SpreadTest, MadAndIqrAgainstDirectComputation) {
  // {1, 2, 3, 4, 100}: median 3, deviations {2, 1, 0, 1, 97} -> MAD 1.
  // Type-7 quartiles 2 and 4 -> IQR 2.
  const std::vector<double> v = {4, 100, 1, 3, 2};
  const ColumnSpread c = ComputeColumnSpread(v);
  EXPECT_DOUBLE_EQ(c.mad, 1.0);
  EXPECT_DOUBLE_EQ(c.iqr, 2.0);
}

TEST(SpreadTest, PropertiesOnRandomSamples) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(2 + trial);
    for (double& x : v) x = normal(rng);
    const ColumnSpread c = ComputeColumnSpread(v);
    EXPECT_GE(c.sd, 0.0);
    EXPECT_GE(c.mad, 0.0);
    EXPECT_GE(c.iqr, 0.0);
    EXPECT_GE(c.mean_pairwise_distance, 0.0);

    double pairs = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) pairs += std::fabs(v[i] - v[j]);
    }
    const double m = static_cast<double>(v.size());
    EXPECT_NEAR(c.mean_pairwise_distance, pairs / (m * (m - 1) / 2), 1e-12);

    std::vector<double> shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ColumnSpread s = ComputeColumnSpread(shuffled);
    EXPECT_NEAR(s.sd, c.sd, 1e-12);
    EXPECT_EQ(s.mad, c.mad);
    EXPECT_EQ(s.iqr, c.iqr);
  }
}

TEST(RuleOfThumbTest, ScenariosScaleContinuousColumns) {
  // X has sd 2 (values -2, 0, 2), A has sd 2 as well.
  const std::vector<VariableSpec> schema = {
      {"X", VariableKind::kContinuous, VariableRole::kAdjustment},
      {"B", VariableKind::kBinary, VariableRole::kAdjustment},
      {"A", VariableKind::kContinuous, VariableRole::kTreatment}};
  Dataset d(schema, {{-2, 0, 2}, {0, 1, 0}, {1, 3, 5}});
  auto median = RuleOfThumbBandwidths(d, BandwidthScenario::kMedian);
  auto worst = RuleOfThumbBandwidths(d, BandwidthScenario::kWorst);
  auto best = RuleOfThumbBandwidths(d, BandwidthScenario::kBest);
  ASSERT_EQ(median.size(), 3u);
  EXPECT_DOUBLE_EQ(median[0].value, 2.0);
  EXPECT_FALSE(median[1].continuous);
  EXPECT_EQ(median[1].value, 0.0);
  EXPECT_DOUBLE_EQ(median[2].value, 1.0);
  EXPECT_DOUBLE_EQ(worst[2].value, 0.5);
  for (std::size_t k : {0u, 2u}) {
    EXPECT_EQ(worst[k].value, 0.5 * median[k].value);
    EXPECT_EQ(best[k].value, 2.0 * median[k].value);
  }
}

TEST(RuleOfThumbTest, ConstantColumnWarns) {
  const std::vector<VariableSpec> schema = {
      {"X", VariableKind::kContinuous, VariableRole::kAdjustment},
      {"A", VariableKind::kContinuous, VariableRole::kTreatment}};
  Dataset d(schema, {{1, 1, 1}, {1, 2, 3}});
  auto bw = RuleOfThumbBandwidths(d, BandwidthScenario::kMedian);
  EXPECT_EQ(bw[0].value, 0.0);
  EXPECT_TRUE(bw[0].warning);
  EXPECT_FALSE(bw[1].warning);
}

}  // namespace
}  // namespace edpdiag
