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

#ifndef UNITDIST_CERTIFICATE_HPP
#define UNITDIST_CERTIFICATE_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "unitdist/numtheory.hpp"

namespace unitdist {

using BigRational = boost::multiprecision::cpp_rational;

class CertificateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tower certificate (T, S_Q, k, R). Construction enforces only the
/// structural rules (no duplicates, k >= 1, R > 1); the arithmetic
/// hypotheses are checked by validate() so that failures can be reported.
class TowerCertificate {
 public:
  TowerCertificate(std::vector<std::uint64_t> T, std::map<std::uint64_t, int> k, double R,
                   std::optional<double> t = std::nullopt)
      : T_(std::move(T)), k_(std::move(k)), R_(R), t_(t) {
    if (T_.empty()) throw CertificateError("T must be nonempty");
    std::sort(T_.begin(), T_.end());
    if (std::adjacent_find(T_.begin(), T_.end()) != T_.end()) {
      throw CertificateError("T contains a duplicate entry");
    }
    for (const auto& [p, kp] : k_) {
      if (kp < 1) {
        throw CertificateError("k(" + std::to_string(p) + ") = " + std::to_string(kp) +
                               " is below 1");
      }
    }
    if (!std::isfinite(R_) || !(R_ > 1.0)) throw CertificateError("R must be a finite real > 1");
  }

  const std::vector<std::uint64_t>& T() const noexcept { return T_; }
  const std::map<std::uint64_t, int>& k() const noexcept { return k_; }
  double R() const noexcept { return R_; }
  const std::optional<double>& t() const noexcept { return t_; }

  std::vector<std::uint64_t> S_Q() const {
    std::vector<std::uint64_t> out;
    out.reserve(k_.size());
    for (const auto& [p, kp] : k_) out.push_back(p);
    return out;
  }

  bool contains_T(std::uint64_t q) const { return std::binary_search(T_.begin(), T_.end(), q); }

  // Heuristic provenance t is not part of the certificate's identity.
  friend bool operator==(const TowerCertificate& a, const TowerCertificate& b) {
    return a.T_ == b.T_ && a.k_ == b.k_ && a.R_ == b.R_;
  }
  friend std::weak_ordering operator<=>(const TowerCertificate& a, const TowerCertificate& b) {
    if (auto c = a.T_ <=> b.T_; c != 0) return c;
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    if (a.R_ < b.R_) return std::weak_ordering::less;
    if (b.R_ < a.R_) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }

 private:
  std::vector<std::uint64_t> T_;
  std::map<std::uint64_t, int> k_;
  double R_;
  std::optional<double> t_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string diagnostic;
};

struct ValidationReport {
  bool valid = false;
  std::vector<CheckResult> checks;
  std::int64_t infinitudeLHS = 0;
  BigRational infinitudeRHS = 0;

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct PrimeRamification {
  int e = 1;  // ramification index of p in F
  int f = 2;  // inertia-degree bound
  bool splitQ = false;
};

using RamificationProfile = std::map<std::uint64_t, PrimeRamification>;

struct DeltaReport {
  double numerator = 0.0;
  double denominator = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  std::map<std::uint64_t, double> perPrimeNumerator;
  std::map<std::uint64_t, double> perPrimeDenominator;

  // Pieces the numerator and denominator are assembled from.
  double logOneMinusInvR = 0.0;
  double halfLogTwoPiOverE = 0.0;
  double logLambdaTerm = 0.0;     // (log lambda) / 4
  double logLogLambdaTerm = 0.0;  // (log log lambda) / 2
  double logTwoR = 0.0;
  double denominatorCorrection = 0.0;  // log1p(1 / (2R prod p^{k/2e}))
};

namespace check_names {
inline constexpr const char* kParity = "T_parity";
inline constexpr const char* kEligibility = "SQ_eligibility";
inline constexpr const char* kInfinitude = "infinitude_criterion";
inline constexpr const char* kPrimality = "primality";
}  // namespace check_names

/// True when p may appear in S_Q for the given T: p is 1 mod 4, or p is inert
/// in Q(sqrt(q)) for some odd prime q in T.
inline bool eligible_for_SQ(std::uint64_t p, const std::vector<std::uint64_t>& T) {
  if (p % 4 == 1) return true;
  for (auto q : T) {
    if (q % 2 == 0 || !is_prime(q)) continue;
    if (split_type(p, SquarefreeInteger::from_prime_factors(1, {q})) == SplitType::Inert) {
      return true;
    }
  }
  return false;
}

/// The discriminant generator prod T of the base field Q.
inline SquarefreeInteger base_field_generator(const std::vector<std::uint64_t>& T) {
  return SquarefreeInteger::from_prime_factors(1, T);
}

inline ValidationReport validate(const TowerCertificate& cert) {
  ValidationReport report;
  const auto& T = cert.T();
  const auto SQ = cert.S_Q();

  // (d) primality
  {
    CheckResult c{check_names::kPrimality, true, ""};
    for (auto q : T) {
      if (q % 2 == 0 || !is_prime(q)) {
        c.passed = false;
        c.diagnostic += "T entry " + std::to_string(q) + " is not an odd prime; ";
      }
    }
    for (auto p : SQ) {
      if (!is_prime(p)) {
        c.passed = false;
        c.diagnostic += "S_Q entry " + std::to_string(p) + " is not prime; ";
      }
    }
    if (c.passed) c.diagnostic = "all entries prime";
    report.checks.push_back(std::move(c));
  }
  const bool primesOk = report.checks.back().passed;

  // (a) parity of #{q in T : q = 3 mod 4}
  {
    const auto count = std::count_if(T.begin(), T.end(), [](auto q) { return q % 4 == 3; });
    CheckResult c{check_names::kParity, count % 2 == 1,
                  std::to_string(count) + " elements of T are 3 mod 4"};
    if (!c.passed) c.diagnostic += " (must be odd)";
    report.checks.push_back(std::move(c));
  }

  // (b) each p in S_Q is 1 mod 4 or inert in some Q(sqrt(q))
  {
    CheckResult c{check_names::kEligibility, true, ""};
    for (auto p : SQ) {
      if (!is_prime(p)) continue;
      if (!eligible_for_SQ(p, T)) {
        c.passed = false;
        c.diagnostic += std::to_string(p) + " is 3 mod 4 and not inert in Q(sqrt q) for any q in T; ";
      }
    }
    if (c.passed) c.diagnostic = "every prime of S_Q is eligible";
    report.checks.push_back(std::move(c));
  }

  // (c) #T + #S_Q + #{split in Q} + 1 <= (#T - 1)^2 / 4
  {
    std::int64_t split = 0;
    if (primesOk) {
      const auto D = base_field_generator(T);
      for (auto p : SQ) {
        if (split_type(p, D) == SplitType::Split) ++split;
      }
    }
    const auto nT = static_cast<std::int64_t>(T.size());
    report.infinitudeLHS = nT + static_cast<std::int64_t>(SQ.size()) + split + 1;
    report.infinitudeRHS = BigRational((nT - 1) * (nT - 1), 4);
    CheckResult c{check_names::kInfinitude, BigRational(report.infinitudeLHS) <= report.infinitudeRHS,
                  "LHS " + std::to_string(report.infinitudeLHS) + " vs RHS " +
                      report.infinitudeRHS.str() + " (" + std::to_string(split) +
                      " primes of S_Q split in Q)"};
    report.checks.push_back(std::move(c));
  }

  report.valid = std::all_of(report.checks.begin(), report.checks.end(),
                             [](const CheckResult& c) { return c.passed; });
  return report;
}

namespace detail {
inline void require_valid(const TowerCertificate& cert) {
  const auto report = validate(cert);
  if (report.valid) return;
  std::string failed;
  for (const auto& c : report.checks) {
    if (!c.passed) failed += c.name + ": " + c.diagnostic + " ";
  }
  throw CertificateError("invalid certificate: " + failed);
}
}  // namespace detail

inline RamificationProfile ramification_profile(const TowerCertificate& cert) {
  detail::require_valid(cert);
  const auto D = base_field_generator(cert.T());
  RamificationProfile profile;
  for (auto p : cert.S_Q()) {
    PrimeRamification r;
    r.e = (p == 2 || cert.contains_T(p)) ? 2 : 1;
    r.f = 2;
    r.splitQ = split_type(p, D) == SplitType::Split;
    profile.emplace(p, r);
  }
  return profile;
}

inline BigInt product_of(const std::vector<std::uint64_t>& primes) {
  BigInt prod = 1;
  for (auto q : primes) prod *= q;
  return prod;
}

/// Relative root discriminant sqrt(4 prod T).
inline double lambda(const TowerCertificate& cert) {
  const BigInt fourP = 4 * product_of(cert.T());
  const auto asDouble = fourP.convert_to<double>();
  if (!std::isfinite(asDouble)) throw CertificateError("4 prod T exceeds double range");
  return std::sqrt(asDouble);
}

struct PrimeTerm {
  int k = 1;
  int e = 1;
  int f = 2;
};

/// Exponent for arbitrary per-prime data (k, e, f), relative root
/// discriminant lambda and radius R.
inline DeltaReport delta_general(const std::map<std::uint64_t, PrimeTerm>& terms, double lambda,
                                 double R) {
  if (!(lambda > 1.0)) throw CertificateError("lambda must exceed 1");
  if (!(R > 1.0)) throw CertificateError("R must exceed 1");
  DeltaReport out;
  out.lambda = lambda;
  out.logOneMinusInvR = std::log1p(-1.0 / R);
  out.halfLogTwoPiOverE = 0.5 * std::log(2.0 * std::numbers::pi / std::numbers::e);
  out.logLambdaTerm = std::log(lambda) / 4.0;
  out.logLogLambdaTerm = std::log(std::log(lambda)) / 2.0;
  out.logTwoR = std::log(2.0 * R);

  double numerSum = 0.0;
  double denomSum = 0.0;
  for (const auto& [p, term] : terms) {
    if (term.k < 1 || term.e < 1 || term.f < 1) {
      throw CertificateError("k, e, f must be >= 1 for prime " + std::to_string(p));
    }
    const double num = std::log(term.k + 1.0) / (2.0 * term.e * term.f);
    const double den = term.k * std::log(static_cast<double>(p)) / (2.0 * term.e);
    out.perPrimeNumerator.emplace(p, num);
    out.perPrimeDenominator.emplace(p, den);
    numerSum += num;
    denomSum += den;
  }

  out.numerator = out.logOneMinusInvR + out.halfLogTwoPiOverE + numerSum - out.logLambdaTerm -
                  out.logLogLambdaTerm;
  const double logMain = out.logTwoR + denomSum;
  // exp(-logMain) underflows relative to logMain long before 700.
  out.denominatorCorrection = logMain > 700.0 ? 0.0 : std::log1p(std::exp(-logMain));
  out.denominator = logMain + out.denominatorCorrection;
  out.delta = out.numerator / out.denominator;
  return out;
}

/// Exponent of a valid certificate, with f = 2 and e from the ramification rule.
inline DeltaReport delta(const TowerCertificate& cert) {
  const auto profile = ramification_profile(cert);
  std::map<std::uint64_t, PrimeTerm> terms;
  for (const auto& [p, kp] : cert.k()) {
    const auto& r = profile.at(p);
    terms.emplace(p, PrimeTerm{kp, r.e, r.f});
  }
  return delta_general(terms, lambda(cert), cert.R());
}

/// Upper bound for the relative class number in terms of the relative root
/// discriminant rd and the degree d of the totally real subfield.
inline double relative_class_number_bound(double rd, int d) {
  if (!(rd > 1.0)) throw CertificateError("rd must exceed 1");
  if (d < 1) throw CertificateError("d must be >= 1");
  const double inner = std::sqrt(rd) * std::log(rd) * std::numbers::e / (4.0 * std::numbers::pi);
  return 8.0 * rd * rd * std::pow(inner, d);
}

}  // namespace unitdist

#endif  // UNITDIST_CERTIFICATE_HPP
