/*
 * Copyright 2026 The vsagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vsagg/field.h"

#include <gtest/gtest.h>

#include <vector>

#include "vsagg/errors.h"
#include "vsagg/random.h"

namespace vsagg {
namespace {

constexpr uint64_t kP60 = 1152921504606846976ULL + 33;  // smallest prime above 2^60

FieldModulus R17() { return FieldModulus::Create(17); }

TEST(FieldModulusTest, RejectsCompositesAndOutOfRange) {
  EXPECT_THROW(FieldModulus::Create(15), Error);
  EXPECT_THROW(FieldModulus::Create(2), Error);
  EXPECT_THROW(FieldModulus::Create(0), Error);
  EXPECT_THROW(FieldModulus::Create((uint64_t{1} << 61) + 1), Error);
  EXPECT_EQ(FieldModulus::Create(17).value(), 17u);
  EXPECT_EQ(FieldModulus::Create(17).half(), 8u);
}

TEST(IsPrimeTest, AgreesWithSieveBelowTenThousand) {
  std::vector<bool> composite(10000, false);
  composite[0] = composite[1] = true;
  for (size_t i = 2; i * i < composite.size(); ++i) {
    if (composite[i]) continue;
    for (size_t j = i * i; j < composite.size(); j += i) composite[j] = true;
  }
  for (uint64_t n = 0; n < composite.size(); ++n) EXPECT_EQ(IsPrime(n), !composite[n]) << n;
}

TEST(IsPrimeTest, KnownLargeValues) {
  EXPECT_TRUE(IsPrime(kP60));
  EXPECT_TRUE(IsPrime(2305843009213693951ULL));   // 2^61 - 1
  EXPECT_FALSE(IsPrime(3215031751ULL));           // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(IsPrime(3825123056546413051ULL));  // strong pseudoprime to bases up to 23
  EXPECT_TRUE(IsPrime(18446744073709551557ULL));  // largest 64-bit prime
}

TEST(FindPrimeAboveTest, SmallBounds) {
  EXPECT_EQ(FindPrimeAbove(10).value(), 11u);
  EXPECT_EQ(FindPrimeAbove(16).value(), 17u);
  EXPECT_EQ(FindPrimeAbove(2).value(), 3u);
}

TEST(FindPrimeAboveTest, AboveTwoToTheSixty) {
  EXPECT_EQ(FindPrimeAbove(uint64_t{1} << 60).value(), kP60);
}

TEST(FindPrimeAboveTest, RejectsBoundsOutOfRange) {
  try {
    FindPrimeAbove(uint64_t{1} << 61);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundOutOfRange);
  }
  EXPECT_THROW(FindPrimeAbove(1), Error);
}

TEST(FieldOpsTest, SmallExamples) {
  const auto R = R17();
  EXPECT_EQ(Add({16}, {5}, R).residue, 4u);
  EXPECT_EQ(Mul({5}, {7}, R).residue, 1u);
  EXPECT_EQ(Add({0}, {9}, R).residue, 9u);
  EXPECT_EQ(Add({3}, {14}, R).residue, 0u);
  EXPECT_EQ(Mul({1}, {13}, R).residue, 13u);
  EXPECT_EQ(Sub({3}, {9}, R).residue, 11u);
  EXPECT_EQ(Neg({0}, R).residue, 0u);
}

TEST(FieldOpsTest, WideProductsNearTwoToTheSixty) {
  const auto R = FieldModulus::Create(kP60);
  const uint64_t two60 = uint64_t{1} << 60;
  // (2^60 + 5)(2^60 + 7) = (-28)(-26) mod p.
  EXPECT_EQ(Mul({two60 + 5}, {two60 + 7}, R).residue, 728u);
  EXPECT_EQ(Mul({kP60 - 1}, {kP60 - 2}, R).residue, 2u);
  EXPECT_EQ(Add({kP60 - 1}, {kP60 - 1}, R).residue, kP60 - 2);
}

TEST(FieldOpsTest, ExhaustiveLawsModSeventeen) {
  const auto R = R17();
  for (uint64_t a = 0; a < 17; ++a) {
    for (uint64_t b = 0; b < 17; ++b) {
      EXPECT_EQ(Add({a}, {b}, R), Add({b}, {a}, R));
      EXPECT_EQ(Mul({a}, {b}, R), Mul({b}, {a}, R));
      EXPECT_EQ(Add({a}, {b}, R).residue, (a + b) % 17);
      EXPECT_EQ(Mul({a}, {b}, R).residue, (a * b) % 17);
      EXPECT_EQ(Sub(Add({a}, {b}, R), {b}, R).residue, a);
      for (uint64_t c = 0; c < 17; ++c) {
        EXPECT_EQ(Add(Add({a}, {b}, R), {c}, R), Add({a}, Add({b}, {c}, R), R));
        EXPECT_EQ(Mul(Mul({a}, {b}, R), {c}, R), Mul({a}, Mul({b}, {c}, R), R));
        EXPECT_EQ(Mul({a}, Add({b}, {c}, R), R),
                  Add(Mul({a}, {b}, R), Mul({a}, {c}, R), R));
      }
    }
  }
}

TEST(FieldOpsTest, RandomProductsMatchWideArithmetic) {
  const auto R = FieldModulus::Create(kP60);
  DeterministicRandom rng(7);
  for (int i = 0; i < 10000; ++i) {
    uint64_t a = rng.Uniform(kP60), b = rng.Uniform(kP60);
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    EXPECT_EQ(Mul({a}, {b}, R).residue, static_cast<uint64_t>(p % kP60));
    EXPECT_LT(Add({a}, {b}, R).residue, kP60);
  }
}

TEST(SignedTest, Lifts) {
  const auto R = R17();
  EXPECT_EQ(ToSigned({16}, R), -1);
  EXPECT_EQ(ToSigned({8}, R), 8);
  EXPECT_EQ(ToSigned({9}, R), -8);
  EXPECT_EQ(ToSigned({0}, R), 0);
  EXPECT_EQ(FromSigned(-1, R).residue, 16u);
  EXPECT_EQ(FromSigned(8, R).residue, 8u);
  EXPECT_THROW(FromSigned(9, R), Error);
  EXPECT_EQ(ReduceSigned(-35, R).residue, 16u);
  for (int64_t v = -8; v <= 8; ++v) EXPECT_EQ(ToSigned(FromSigned(v, R), R), v);
}

TEST(VectorTest, DotProducts) {
  const auto R97 = FieldModulus::Create(97);
  EXPECT_EQ(Dot(FieldVector({2, 3}, R97), FieldVector({5, 7}, R97), R97).residue, 31u);
  EXPECT_EQ(Dot(FieldVector(2), FieldVector({5, 7}, R97), R97).residue, 0u);
  FieldVector a({10, 20}, R97), a2({50, 90}, R97), b({33, 44}, R97);
  EXPECT_EQ(Add(Dot(a, b, R97), Dot(a2, b, R97), R97), Dot(AddVectors(a, a2, R97), b, R97));
  EXPECT_THROW(Dot(FieldVector(2), FieldVector(3), R97), Error);
}

TEST(VectorTest, LongDotMatchesScalarLoop) {
  const auto R = FieldModulus::Create(kP60);
  DeterministicRandom rng(3);
  std::vector<uint64_t> a(1000), b(1000);
  FieldElement expected{0};
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.Uniform(kP60);
    b[i] = rng.Uniform(kP60);
    expected = Add(expected, Mul({a[i]}, {b[i]}, R), R);
  }
  EXPECT_EQ(Dot(FieldVector(a, R), FieldVector(b, R), R), expected);
}

TEST(VectorTest, RejectsNonCanonicalAndEmpty) {
  const auto R = R17();
  EXPECT_THROW(FieldVector({3, 17}, R), Error);
  EXPECT_THROW(FieldVector(size_t{0}), Error);
  EXPECT_THROW(MakeElement(17, R), Error);
  EXPECT_THROW(AddVectors(FieldVector(2), FieldVector(3), R), Error);
}

TEST(VectorTest, SerializationRoundTrip) {
  const auto R = FieldModulus::Create(kP60);
  FieldVector v({0, 1, kP60 - 1}, R);
  ByteWriter w;
  WriteVector(w, v);
  EXPECT_EQ(w.size(), 4u + 3 * 8);
  ByteReader r(w.bytes());
  EXPECT_EQ(ReadVector(r, R), v);

  ByteWriter e;
  WriteElement(e, FieldElement{0x0102030405060708ULL});
  EXPECT_EQ(e.bytes().front(), 0x08);
  EXPECT_EQ(e.bytes().back(), 0x01);
}

TEST(VectorTest, ReadRejectsNonCanonical) {
  const auto R = R17();
  ByteWriter w;
  w.PutU64(17);
  ByteReader r(w.bytes());
  EXPECT_THROW(ReadElement(r, R), Error);
}

}  // namespace
}  // namespace vsagg
