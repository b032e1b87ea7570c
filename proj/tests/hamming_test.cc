// Copyright 2026 The dpsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsd/hamming.h"

#include <cmath>
#include <limits>

#include "dpsd/error.h"
#include "dpsd/oracle.h"
#include "dpsd/random.h"
#include "gtest/gtest.h"

namespace dpsd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(CeilLog2Test, SmallValues) {
  EXPECT_EQ(CeilLog2(1), 0u);
  EXPECT_EQ(CeilLog2(2), 1u);
  EXPECT_EQ(CeilLog2(3), 2u);
  EXPECT_EQ(CeilLog2(4), 2u);
  EXPECT_EQ(CeilLog2(5), 3u);
  EXPECT_EQ(CeilLog2(1024), 10u);
  EXPECT_EQ(CeilLog2(1025), 11u);
}

TEST(DefaultParamsTest, Dimensions) {
  const Seed seed = DerivePublicSeed(1, 0);
  SketchParams p = DefaultParams(16, kInf, 1024, seed);
  EXPECT_EQ(p.m1, 40u);
  EXPECT_EQ(p.m2, 32u);
  EXPECT_EQ(p.m3, 6400u);
  EXPECT_EQ(p.flip_prob, 0.0);
  // log k is clamped to 1 for k <= 2.
  p = DefaultParams(1, kInf, 8, seed);
  EXPECT_EQ(p.m1, 10u);
  EXPECT_EQ(p.m2, 2u);
  EXPECT_EQ(p.m3, 400u);
  p = DefaultParams(3, kInf, 8, seed);
  EXPECT_EQ(p.m1, 20u);
  EXPECT_EQ(p.m2, 6u);
  EXPECT_EQ(p.m3, 1600u);
}

TEST(DefaultParamsTest, Validation) {
  const Seed seed{};
  try {
    DefaultParams(9, 1.0, 8, seed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKExceedsN);
  }
  EXPECT_THROW(DefaultParams(0, 1.0, 8, seed), Error);
  EXPECT_THROW(DefaultParams(2, 0.0, 8, seed), Error);
  EXPECT_THROW(DefaultParams(2, -1.0, 8, seed), Error);
}

TEST(FlipProbabilityTest, Formula) {
  EXPECT_NEAR(FlipProbability(80.0, 40), 1.0 / (1.0 + std::exp(1.0)), 1e-15);
  EXPECT_DOUBLE_EQ(FlipProbability(1e-9, 10), 0.5 - 1.25e-11);
  EXPECT_EQ(FlipProbability(kInf, 10), 0.0);
  // q = 0.01 exactly when eps = 2 M1 ln 99.
  EXPECT_NEAR(FlipProbability(2 * 20 * std::log(99.0), 20), 0.01, 1e-15);
}

TEST(EncodeTest, TableEncoderMatchesDirectHashing) {
  Rng rng(31);
  const SketchParams p = DefaultParams(4, kInf, 300, DerivePublicSeed(2, 0));
  const SketchEncoder encoder(p);
  for (int trial = 0; trial < 5; ++trial) {
    const PackedBitString a = oracle::RandomString(300, rng);
    EXPECT_EQ(encoder.Encode(a), Encode(a, p));
  }
}

TEST(EncodeTest, LengthIsChecked) {
  const SketchParams p = DefaultParams(2, kInf, 16, DerivePublicSeed(3, 0));
  Rng rng(32);
  try {
    Encode(oracle::RandomString(15, rng), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(EncodeTest, EachSymbolTogglesOneCellPerRepetition) {
  const SketchParams p = DefaultParams(1, kInf, 1, DerivePublicSeed(4, 0));
  const HammingSketch s = Encode(ParseLine("1"), p);
  EXPECT_EQ(s.PopCount(), p.m1);
  const HashFamily family = FamilyFor(p);
  const std::uint32_t j = family.H(1) - 1;
  for (std::uint32_t i = 1; i <= p.m1; ++i) {
    EXPECT_TRUE(s.Get(i - 1, j, family.G(1, i) - 1));
  }
}

TEST(EncodeTest, NeighborDiffIsAtMostTwoM1) {
  Rng rng(33);
  for (const std::uint32_t k : {2u, 8u, 16u}) {
    const SketchParams p = DefaultParams(k, kInf, 200, DerivePublicSeed(k, 0));
    const SketchEncoder encoder(p);
    for (int trial = 0; trial < 100; ++trial) {
      const PackedBitString a = oracle::RandomString(200, rng);
      const PackedBitString b = oracle::FlipRandomPositions(a, 1, rng);
      EXPECT_LE(CellDifference(encoder.Encode(a), encoder.Encode(b)),
                2u * p.m1);
    }
  }
}

TEST(NoiselessQueryTest, NeverExceedsTrueDistance) {
  // Each differing position contributes two symbols, each landing in one
  // bucket, so half the per-bucket maximum can only undercount.
  Rng rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t d = rng() % 40;
    const auto [a, b] = oracle::PlantHammingPair(256, d, rng);
    const DpHammingStructure ds =
        DpHammingStructure::Init(a, 8, kInf, DerivePublicSeed(trial, 0), rng);
    const double estimate = ds.Query(b);
    EXPECT_LE(estimate, static_cast<double>(d));
    EXPECT_EQ(2 * estimate, std::floor(2 * estimate));
  }
}

TEST(NoiselessQueryTest, ExactWithinCapMostOfTheTime) {
  Rng rng(35);
  int exact = 0;
  constexpr int kTrials = 100;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::uint64_t d = rng() % 9;
    const auto [a, b] = oracle::PlantHammingPair(512, d, rng);
    const DpHammingStructure ds =
        DpHammingStructure::Init(a, 8, kInf, DerivePublicSeed(trial, 1), rng);
    exact += ds.Query(b) == static_cast<double>(oracle::ExactHamming(a, b));
  }
  EXPECT_GE(exact, 95);
}

TEST(NoiselessQueryTest, SelfDistanceIsZero) {
  Rng rng(36);
  const PackedBitString a = oracle::RandomString(100, rng);
  const DpHammingStructure ds =
      DpHammingStructure::Init(a, 4, kInf, DerivePublicSeed(5, 0), rng);
  EXPECT_EQ(ds.Query(a), 0.0);
}

TEST(NoisyQueryTest, NoiseIsVisibleAndBounded) {
  Rng rng(37);
  const PackedBitString a = oracle::RandomString(128, rng);
  const SketchParams p =
      DefaultParams(4, 2 * 20 * std::log(99.0), 128, DerivePublicSeed(6, 0));
  ASSERT_NEAR(p.flip_prob, 0.01, 1e-12);
  const SketchEncoder encoder(p);
  double total = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const DpHammingStructure ds = DpHammingStructure::Init(a, encoder, rng);
    const double error = ds.Query(a);
    EXPECT_GT(error, 0.0);
    EXPECT_LE(error, 4.0 * p.m1 * p.m2 * p.m3 * p.flip_prob);
    total += error;
  }
  EXPECT_GT(total / 50, 0.0);
}

TEST(DpHammingStructureTest, FromReleasedChecksVolume) {
  const SketchParams p = DefaultParams(2, kInf, 8, DerivePublicSeed(7, 0));
  try {
    DpHammingStructure::FromReleased(p, HammingSketch(SketchDims{1, 1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVolumeMismatch);
  }
  Rng rng(38);
  const PackedBitString a = oracle::RandomString(8, rng);
  const DpHammingStructure ds =
      DpHammingStructure::FromReleased(p, Encode(a, p));
  EXPECT_EQ(ds.Query(a), 0.0);
}

}  // namespace
}  // namespace dpsd
