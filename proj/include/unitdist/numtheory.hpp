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

#ifndef UNITDIST_NUMTHEORY_HPP
#define UNITDIST_NUMTHEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace unitdist {

using BigInt = boost::multiprecision::cpp_int;

class NumberTheoryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Floor square root, exact for all 64-bit inputs.
inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::uint64_t icbrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<long double>(n)));
  auto cube = [](std::uint64_t x) {
    return static_cast<unsigned __int128>(x) * x * x;
  };
  while (r > 0 && cube(r) > n) --r;
  while (cube(r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

/// Deterministic primality test for every 64-bit input. Uses Miller-Rabin with
/// the first twelve prime bases, which has no pseudoprimes below 3.3e24.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto b : kBases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (auto a : kBases) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Kronecker symbol (a|n) for all integer pairs.
inline int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  // Work in 128 bits so that negating INT64_MIN is harmless.
  __int128 aa = a;
  __int128 nn = n;
  if (nn < 0) {
    nn = -nn;
    if (aa < 0) result = -result;
  }
  // Strip factors of two from n using (a|2).
  unsigned twos = 0;
  while ((nn & 1) == 0) {
    nn >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((aa & 1) == 0) return 0;
    if (twos & 1U) {
      const auto a8 = static_cast<int>(((aa % 8) + 8) % 8);
      if (a8 == 3 || a8 == 5) result = -result;
    }
  }
  // Jacobi symbol for odd positive nn.
  aa %= nn;
  if (aa < 0) aa += nn;
  while (aa != 0) {
    while ((aa & 1) == 0) {
      aa >>= 1;
      const auto n8 = static_cast<int>(nn % 8);
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(aa, nn);
    if (aa % 4 == 3 && nn % 4 == 3) result = -result;
    aa %= nn;
  }
  return nn == 1 ? result : 0;
}

/// Ascending list of all primes <= bound (sieve of Eratosthenes).
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

enum class SplitType { Split, Inert, Ramified };

inline std::string_view to_string(SplitType s) {
  switch (s) {
    case SplitType::Split: return "split";
    case SplitType::Inert: return "inert";
    case SplitType::Ramified: return "ramified";
  }
  return "?";
}

/// A nonzero squarefree integer held in factored form: a sign and a strictly
/// ascending list of distinct primes. Products of many primes exceed 64 bits,
/// so the value is only materialized as a BigInt on request.
class SquarefreeInteger {
 public:
  static SquarefreeInteger from_prime_factors(int sign, std::vector<std::uint64_t> primes) {
    if (sign != 1 && sign != -1) throw NumberTheoryError("sign must be +1 or -1");
    std::sort(primes.begin(), primes.end());
    if (std::adjacent_find(primes.begin(), primes.end()) != primes.end()) {
      throw NumberTheoryError("repeated prime factor: value is not squarefree");
    }
    for (auto p : primes) {
      if (!is_prime(p)) throw NumberTheoryError("factor " + std::to_string(p) + " is not prime");
    }
    return SquarefreeInteger(sign, std::move(primes));
  }

  /// Factors |value| to validate squarefreeness. Trial division runs to the
  /// cube root; the leftover cofactor has at most two prime factors and is
  /// non-squarefree exactly when it is a perfect square.
  static SquarefreeInteger from_integer(std::int64_t value) {
    if (value == 0) throw NumberTheoryError("zero is not squarefree");
    const int sign = value < 0 ? -1 : 1;
    std::uint64_t rest = value < 0 ? static_cast<std::uint64_t>(-(value + 1)) + 1
                                   : static_cast<std::uint64_t>(value);
    std::vector<std::uint64_t> primes;
    const std::uint64_t limit = detail::icbrt(rest);
    for (std::uint64_t q = 2; q <= limit && rest > 1; q += (q == 2 ? 1 : 2)) {
      if (rest % q != 0) continue;
      rest /= q;
      if (rest % q == 0) {
        throw NumberTheoryError(std::to_string(value) + " is divisible by " +
                                std::to_string(q) + "^2");
      }
      primes.push_back(q);
    }
    std::uint64_t cofactor = 1;
    if (rest > 1) {
      if (is_prime(rest)) {
        primes.push_back(rest);
      } else {
        const auto r = detail::isqrt(rest);
        if (r * r == rest) {
          throw NumberTheoryError(std::to_string(value) + " is divisible by " +
                                  std::to_string(r) + "^2");
        }
        // Product of two distinct large primes. Only residues are needed
        // downstream, so it is kept unsplit.
        cofactor = rest;
      }
    }
    return SquarefreeInteger(sign, std::move(primes), cofactor);
  }

  int sign() const noexcept { return sign_; }
  const std::vector<std::uint64_t>& known_primes() const noexcept { return primes_; }

  bool is_one() const noexcept { return sign_ == 1 && primes_.empty() && cofactor_ == 1; }

  BigInt value() const {
    BigInt v = cofactor_;
    for (auto p : primes_) v *= p;
    return sign_ * v;
  }

  /// Residue of the value modulo m, in [0, m).
  std::uint64_t mod(std::uint64_t m) const {
    std::uint64_t r = cofactor_ % m;
    for (auto p : primes_) r = detail::mulmod(r, p % m, m);
    if (sign_ < 0 && r != 0) r = m - r;
    return r;
  }

  bool divisible_by(std::uint64_t p) const { return mod(p) == 0; }

 private:
  SquarefreeInteger(int sign, std::vector<std::uint64_t> primes, std::uint64_t cofactor = 1)
      : sign_(sign), primes_(std::move(primes)), cofactor_(cofactor) {}

  int sign_ = 1;
  std::vector<std::uint64_t> primes_;
  std::uint64_t cofactor_ = 1;
};

/// Splitting behaviour of the prime p in Q(sqrt(D)).
inline SplitType split_type(std::uint64_t p, const SquarefreeInteger& D) {
  if (!is_prime(p)) throw NumberTheoryError(std::to_string(p) + " is not prime");
  if (D.is_one()) throw NumberTheoryError("D = 1 does not define a quadratic field");
  if (p == 2) {
    const auto d8 = D.mod(8);
    if (d8 % 4 != 1) return SplitType::Ramified;
    return d8 == 1 ? SplitType::Split : SplitType::Inert;
  }
  const auto r = D.mod(p);
  if (r == 0) return SplitType::Ramified;
  return kronecker(static_cast<std::int64_t>(r), static_cast<std::int64_t>(p)) == 1
             ? SplitType::Split
             : SplitType::Inert;
}

inline SplitType split_type(std::uint64_t p, std::int64_t D) {
  return split_type(p, SquarefreeInteger::from_integer(D));
}

}  // namespace unitdist

#endif  // UNITDIST_NUMTHEORY_HPP
