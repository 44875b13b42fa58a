/*
   Copyright 2026 The unitdist Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "unitdist/lattice_lab.hpp"

namespace {

using unitdist::BigInt;
using unitdist::BigRational;
using unitdist::CycloElement;
using unitdist::RealQuadElement;
using unitdist::ScaledLattice;

RealQuadElement rational_alpha(long long v) { return RealQuadElement(1, BigRational(v)); }

// All (a, b) with a^2 + b^2 = v, by exhaustive search.
std::set<std::pair<long long, long long>> two_square_pairs(long long v) {
  std::set<std::pair<long long, long long>> out;
  const auto r = static_cast<long long>(std::sqrt(static_cast<double>(v))) + 1;
  for (long long a = -r; a <= r; ++a)
    for (long long b = -r; b <= r; ++b)
      if (a * a + b * b == v) out.emplace(a, b);
  return out;
}

std::set<std::pair<long long, long long>> as_pairs(const std::vector<CycloElement>& reps) {
  std::set<std::pair<long long, long long>> out;
  for (const auto& r : reps) out.emplace(r.coords()[0].convert_to<long long>(), r.coords()[1].convert_to<long long>());
  return out;
}

// Exhaustive search of a coordinate cube for exact relative-norm solutions.
std::vector<CycloElement> cube_representations(const RealQuadElement& alpha, int n, long long r) {
  std::vector<CycloElement> out;
  const int deg = unitdist::totient_of(n);
  std::vector<long long> c(static_cast<std::size_t>(deg), -r);
  while (true) {
    std::vector<BigInt> coords(c.begin(), c.end());
    CycloElement beta(n, coords);
    if (unitdist::relative_norm(beta) == alpha) out.push_back(beta);
    std::size_t i = 0;
    for (; i < c.size(); ++i) {
      if (c[i] < r) {
        ++c[i];
        break;
      }
      c[i] = -r;
    }
    if (i == c.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Representations, TwentyFiveHasTwelveGaussianSolutions) {
  const auto reps = unitdist::find_representations(rational_alpha(25), 4);
  const auto oracle = two_square_pairs(25);
  EXPECT_EQ(oracle.size(), 12u);
  EXPECT_EQ(as_pairs(reps), oracle);
  EXPECT_EQ(reps.size(), 12u);
}

TEST(Representations, SumOfTwoSquaresUpToTwoHundred) {
  for (long long v = 1; v <= 200; ++v) {
    EXPECT_EQ(as_pairs(unitdist::find_representations(rational_alpha(v), 4)), two_square_pairs(v)) << v;
  }
}

TEST(Representations, PowersOfFiveGrowLinearly) {
  long long v = 1;
  for (int j = 0; j <= 3; ++j) {
    EXPECT_EQ(unitdist::find_representations(rational_alpha(v), 4).size(), 4u * static_cast<unsigned>(j + 1)) << v;
    v *= 5;
  }
}

TEST(Representations, RealQuadraticCasesMatchCubeSearch) {
  struct Case {
    int n;
    RealQuadElement alpha;
  };
  const std::vector<Case> cases = {
      {8, RealQuadElement(2, BigRational(2), BigRational(1))},
      {8, RealQuadElement(2, BigRational(2))},
      {8, RealQuadElement(2, BigRational(4), BigRational(1))},
      {8, RealQuadElement(2, BigRational(5))},
      {12, RealQuadElement(3, BigRational(2), BigRational(1))},
      {12, RealQuadElement(3, BigRational(3))},
      {12, RealQuadElement(3, BigRational(4))},
      {12, RealQuadElement(3, BigRational(7))},
  };
  for (const auto& c : cases) {
    const auto got = unitdist::find_representations(c.alpha, c.n);
    EXPECT_EQ(got, cube_representations(c.alpha, c.n, 5)) << c.alpha << " n=" << c.n;
  }
}

TEST(Representations, RootsOfUnityActFreely) {
  const RealQuadElement alpha(2, BigRational(2), BigRational(1));
  const auto reps = unitdist::find_representations(alpha, 8);
  ASSERT_FALSE(reps.empty());
  EXPECT_EQ(reps.size() % 8, 0u);
  const std::set<CycloElement> set(reps.begin(), reps.end());
  for (const auto& r : reps) EXPECT_TRUE(set.count(r * CycloElement::zeta(8)));
}

TEST(Representations, RejectsNonPositiveAlpha) {
  EXPECT_THROW(unitdist::find_representations(RealQuadElement(2, BigRational(1), BigRational(1)), 8),
               unitdist::LatticeError);
  EXPECT_THROW(unitdist::find_representations(rational_alpha(-5), 4), unitdist::LatticeError);
  EXPECT_THROW(ScaledLattice(4, RealQuadElement(2, BigRational(3))), unitdist::LatticeError);
}

TEST(PointSet, MatchesDoubleLoopGaussianEnumeration) {
  std::mt19937_64 gen(21);
  for (long long alpha : {1LL, 2LL, 5LL, 13LL}) {
    const ScaledLattice lat(4, rational_alpha(alpha));
    for (double R : {2.0, 3.5, 6.0}) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const std::vector<double> w = {u(gen), u(gen)};
      const auto ps = unitdist::build_point_set(lat, R, w);
      std::set<std::pair<long long, long long>> oracle;
      const double s = std::sqrt(static_cast<double>(alpha));
      const auto lim = static_cast<long long>(R * s) + 3;
      for (long long a = -lim; a <= lim; ++a)
        for (long long b = -lim; b <= lim; ++b)
          if (std::hypot(a - w[0], b - w[1]) / s <= R) oracle.emplace(a, b);
      EXPECT_EQ(as_pairs(ps.elements), oracle) << "alpha=" << alpha << " R=" << R;
      ASSERT_EQ(ps.projected.size(), ps.elements.size());
      for (std::size_t i = 0; i < ps.elements.size(); ++i) {
        EXPECT_NEAR(ps.projected[i].first, ps.elements[i].coords()[0].convert_to<double>() / s, 1e-12);
        EXPECT_NEAR(ps.projected[i].second, ps.elements[i].coords()[1].convert_to<double>() / s, 1e-12);
      }
    }
  }
}

TEST(PointSet, SizeTracksVolumeForLargeRadius) {
  const ScaledLattice lat(4, rational_alpha(5));
  const auto ps = unitdist::build_point_set(lat, 8.0, {0.25, 0.5});
  const double expected = std::numbers::pi * 64.0 * 5.0;
  EXPECT_NEAR(static_cast<double>(ps.elements.size()), expected, 0.05 * expected);
}

TEST(UnitDistances, AgreeWithAllPairsBruteForce) {
  struct Case {
    int n;
    RealQuadElement alpha;
    double R;
  };
  const std::vector<Case> cases = {
      {4, rational_alpha(5), 4.0},
      {4, rational_alpha(25), 2.5},
      {8, RealQuadElement(2, BigRational(2), BigRational(1)), 2.5},
      {12, RealQuadElement(3, BigRational(2), BigRational(1)), 2.0},
  };
  for (const auto& c : cases) {
    const ScaledLattice lat(c.n, c.alpha);
    const auto shift = unitdist::choose_shift(lat, c.R, 16, 3);
    const auto ps = unitdist::build_point_set(lat, c.R, shift.w);
    const auto dc = unitdist::count_unit_distances(ps, lat);
    std::int64_t brute = 0;
    for (std::size_t i = 0; i < ps.elements.size(); ++i)
      for (std::size_t j = 0; j < ps.elements.size(); ++j)
        if (i != j && unitdist::relative_norm(ps.elements[i] - ps.elements[j]) == c.alpha) ++brute;
    EXPECT_EQ(dc.orderedPairsAtUnit, brute) << c.alpha;
    EXPECT_EQ(dc.numericPairsAtUnit, brute);
    EXPECT_EQ(dc.setSize, static_cast<std::int64_t>(ps.elements.size()));
    EXPECT_EQ(dc.ratio, BigRational(brute) / BigRational(dc.setSize));
    EXPECT_EQ(dc.orderedPairsAtUnit % 2, 0);
  }
}

TEST(UnitDistances, NumericDistanceIsOneExactlyForExactPairs) {
  const ScaledLattice lat(8, RealQuadElement(2, BigRational(2), BigRational(1)));
  const auto ps = unitdist::build_point_set(lat, 3.0, std::vector<double>(4, 0.1));
  const auto reps = unitdist::find_representations(lat.alpha(), 8);
  for (const auto& rho : reps) {
    const auto z = unitdist::embed(rho, 0);
    EXPECT_NEAR(std::abs(z) / lat.norm_scale()[0], 1.0, 1e-12);
  }
}

TEST(Shift, GuaranteeHoldsAcrossSeeds) {
  const ScaledLattice lat(4, rational_alpha(5));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto shift = unitdist::choose_shift(lat, 8.0, 64, seed);
    EXPECT_FALSE(shift.warning);
    const auto ps = unitdist::build_point_set(lat, 8.0, shift.w);
    const auto dc = unitdist::count_unit_distances(ps, lat);
    EXPECT_EQ(dc.M, 8);
    EXPECT_TRUE(unitdist::ratio_guarantee_holds(dc, 8.0, 1)) << seed;
    EXPECT_GE(dc.ratio.convert_to<double>(), 0.875 * 0.875 * 8) << seed;
  }
}

TEST(Shift, DeterministicAndInsideTheParallelepiped) {
  const ScaledLattice lat(12, RealQuadElement(3, BigRational(2), BigRational(1)));
  const auto a = unitdist::choose_shift(lat, 2.0, 8, 99);
  const auto b = unitdist::choose_shift(lat, 2.0, 8, 99);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.trialIndex, b.trialIndex);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(a.w.data(), static_cast<Eigen::Index>(a.w.size()));
  const Eigen::VectorXd u = lat.basis_inverse() * w;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    EXPECT_GE(u(j), -1e-12);
    EXPECT_LT(u(j), 1.0 + 1e-12);
  }
}

TEST(Shift, InnerAndOuterCountsMatchTheBalls) {
  const ScaledLattice lat(4, rational_alpha(2));
  const auto s = unitdist::choose_shift(lat, 5.0, 4, 1);
  EXPECT_EQ(s.outerCount, static_cast<std::int64_t>(unitdist::build_point_set(lat, 5.0, s.w).elements.size()));
  EXPECT_EQ(s.innerCount, static_cast<std::int64_t>(unitdist::build_point_set(lat, 4.0, s.w).elements.size()));
}

TEST(Shift, WarningWhenNoSampleMeetsTheInequality) {
  const ScaledLattice lat(4, rational_alpha(1));
  const auto s = unitdist::choose_shift(lat, 1.01, 3, 4);
  EXPECT_TRUE(s.warning);
  EXPECT_GE(s.trialIndex, 0);
}

TEST(Shift, CountInequalityIsExact) {
  // (1 - 1/2)^2 * 8 = 2 exactly.
  EXPECT_TRUE(unitdist::detail::count_inequality_holds(2, 8, 2.0, 1));
  EXPECT_FALSE(unitdist::detail::count_inequality_holds(1, 8, 2.0, 1));
}

TEST(Budget, ExceededThrows) {
  const ScaledLattice lat(12, RealQuadElement(3, BigRational(4)));
  EXPECT_THROW(unitdist::choose_shift(lat, 20.0, 1, 0, 1000), unitdist::BudgetExceeded);
  EXPECT_THROW(unitdist::build_point_set(lat, 20.0, std::vector<double>(4, 0.0), 1000), unitdist::BudgetExceeded);
}

TEST(IndexFormula, RandomInstances) {
  std::mt19937_64 gen(31);
  constexpr int kConductors[] = {4, 8, 12};
  int checked = 0;
  while (checked < 120) {
    const int n = kConductors[checked % 3];
    const int m = unitdist::real_subfield_m(n);
    std::vector<BigInt> c;
    for (int i = 0; i < unitdist::totient_of(n); ++i) c.emplace_back(static_cast<long long>(gen() % 21) - 10);
    const CycloElement beta(n, c);
    const BigRational x(static_cast<long long>(gen() % 50) + 1, static_cast<long long>(gen() % 5) + 1);
    const BigRational y = m == 1 ? BigRational(0) : BigRational(static_cast<long long>(gen() % 21) - 10, 3);
    const RealQuadElement alpha(m, x, y);
    if (beta.is_zero() || alpha.norm() == 0) continue;
    const auto r = unitdist::verify_index_formula(beta, alpha, n);
    EXPECT_TRUE(r.passed) << beta << " " << alpha << " err " << r.relativeError;
    ++checked;
  }
}

TEST(MinNorm, BoundHoldsAndIsAttainedForUnitAlpha) {
  const std::vector<std::pair<int, RealQuadElement>> cases = {
      {4, rational_alpha(1)},
      {4, rational_alpha(5)},
      {8, RealQuadElement(2, BigRational(2), BigRational(1))},
      {8, RealQuadElement(2, BigRational(3))},
      {12, RealQuadElement(3, BigRational(2), BigRational(1))},
      {12, RealQuadElement(3, BigRational(5))},
  };
  for (const auto& [n, alpha] : cases) {
    const ScaledLattice lat(n, alpha);
    const auto r = unitdist::verify_min_norm_bound(lat);
    EXPECT_TRUE(r.passed) << alpha;
    ASSERT_TRUE(r.argmin.has_value());
    EXPECT_FALSE(r.argmin->is_zero());
  }
  const auto unit = unitdist::verify_min_norm_bound(ScaledLattice(4, rational_alpha(1)));
  EXPECT_NEAR(unit.achieved, 1.0, 1e-12);
  EXPECT_NEAR(unit.bound, 1.0, 1e-12);
}

}  // namespace
