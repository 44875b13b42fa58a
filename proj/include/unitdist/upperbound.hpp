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

#ifndef UNITDIST_UPPERBOUND_HPP
#define UNITDIST_UPPERBOUND_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "unitdist/numtheory.hpp"

namespace unitdist {

class UpperBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrimeOptimum {
  int kStar = 0;
  double value = 0.0;
};

struct GEvaluation {
  double value = 0.0;
  std::map<std::uint64_t, PrimeOptimum> perPrime;  // every prime p <= 2^c
  bool exact = true;  // false when 2^c exceeds the prime table; value is then a lower bound
};

struct UpperBoundReport {
  double c = 0.0;
  std::map<std::uint64_t, PrimeOptimum> perPrime;
  double gValue = 0.0;
  double bound = 0.0;
};

/// Largest prime table used for the sum over p <= 2^c.
inline constexpr std::uint64_t kUpperBoundPrimeLimit = 10'000'000;

namespace detail {
inline const std::vector<std::uint64_t>& upper_bound_primes() {
  static const std::vector<std::uint64_t> table = primes_up_to(kUpperBoundPrimeLimit);
  return table;
}

// Constant part of g: -(c/2)log 2 - log 2 + c log(1 - 1/(c+1)) - log(c+1).
inline double g_constant(double c) {
  const double ln2 = std::log(2.0);
  return -0.5 * c * ln2 - ln2 + c * std::log1p(-1.0 / (c + 1.0)) - std::log1p(c);
}
}  // namespace detail

/// Maximizer of k -> c log(k+1) - k log p over k >= 0. The increments
/// c log((k+2)/(k+1)) - log p strictly decrease in k, so the scan stops at
/// the first nonpositive one; ties keep the smaller k.
inline PrimeOptimum best_k_for_prime(std::uint64_t p, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  const double logp = std::log(static_cast<double>(p));
  PrimeOptimum out;
  while (true) {
    const double inc = c * std::log1p(1.0 / (out.kStar + 1.0)) - logp;
    if (!(inc > 0.0)) break;
    out.value += inc;
    ++out.kStar;
  }
  return out;
}

/// g(c) with the prime sum over p <= 2^c; every later term is zero.
inline GEvaluation g(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  GEvaluation out;
  const double cutoff = std::exp2(c);
  const auto& primes = detail::upper_bound_primes();
  out.exact = cutoff < static_cast<double>(kUpperBoundPrimeLimit);
  double sum = 0.0;
  for (auto p : primes) {
    if (static_cast<double>(p) > cutoff) break;
    const auto opt = best_k_for_prime(p, c);
    out.perPrime.emplace(p, opt);
    sum += opt.value;
  }
  out.value = detail::g_constant(c) + 0.5 * sum;
  return out;
}

/// Variant with the displayed "+ (c/2) log 2" sign, kept for the
/// sign-discrepancy regression only.
inline double g_plus_sign_variant(double c) {
  return g(c).value + c * std::log(2.0);
}

namespace detail {
// Sign of g(c) in {-1, 0, +1}. Prime terms are nonnegative, so a positive
// partial sum settles the sign without visiting every prime.
inline int g_sign(double c) {
  const double base = g_constant(c);
  const double cutoff = std::exp2(c);
  double sum = 0.0;
  for (auto p : upper_bound_primes()) {
    if (static_cast<double>(p) > cutoff) break;
    sum += best_k_for_prime(p, c).value;
    if (base + 0.5 * sum > 0.0) return 1;
  }
  if (cutoff >= static_cast<double>(kUpperBoundPrimeLimit)) {
    throw UpperBoundError("sign of g undetermined beyond the prime table");
  }
  const double v = base + 0.5 * sum;
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}
}  // namespace detail

/// Largest c in [cLow, cHigh] with g(c) <= 0, located by a grid pre-scan for
/// the last sign change followed by bisection. bound = 1 + 1/c.
inline UpperBoundReport exponent_upper_bound(double cLow, double cHigh, double tol = 1e-8,
                                             double gridStep = 0.01) {
  if (!(cLow > 0.0) || !(cLow < cHigh)) throw UpperBoundError("bracket must satisfy 0 < lo < hi");
  if (!(tol > 0.0) || !(gridStep > 0.0)) throw UpperBoundError("tolerances must be positive");

  std::vector<double> grid;
  const auto steps = static_cast<std::int64_t>(std::floor((cHigh - cLow) / gridStep));
  for (std::int64_t i = 0; i <= steps; ++i) grid.push_back(cLow + static_cast<double>(i) * gridStep);
  if (grid.back() < cHigh) grid.push_back(cHigh);

  std::vector<int> signs;
  signs.reserve(grid.size());
  for (double c : grid) signs.push_back(detail::g_sign(c));

  std::optional<std::size_t> last;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (signs[i] <= 0 && signs[i + 1] > 0) last = i;
  }
  if (!last) throw UpperBoundError("g does not change sign from <= 0 to > 0 on the bracket");

  double lo = grid[*last];
  double hi = grid[*last + 1];
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (detail::g_sign(mid) <= 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const auto ev = g(lo);
  UpperBoundReport report;
  report.c = lo;
  report.perPrime = ev.perPrime;
  report.gValue = ev.value;
  report.bound = 1.0 + 1.0 / lo;
  return report;
}

/// Report at a fixed c, without the search.
inline UpperBoundReport upper_bound_at(double c) {
  const auto ev = g(c);
  return UpperBoundReport{c, ev.perPrime, ev.value, 1.0 + 1.0 / c};
}

}  // namespace unitdist

#endif  // UNITDIST_UPPERBOUND_HPP
