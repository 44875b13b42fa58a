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

#ifndef UNITDIST_OPTIMIZER_HPP
#define UNITDIST_OPTIMIZER_HPP

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "unitdist/certificate.hpp"
#include "unitdist/numtheory.hpp"

namespace unitdist {

class SearchEmptyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchConfig {
  std::vector<double> tGrid = default_t_grid();
  std::uint64_t Tmax = 100;
  std::uint64_t SQBound = 400;
  bool localSearch = true;
  std::uint64_t seed = 0;

  static std::vector<double> default_t_grid() {
    std::vector<double> grid;
    for (int i = 2; i <= 200; ++i) grid.push_back(i * 0.5);
    return grid;
  }

  void check() const {
    if (tGrid.empty()) throw std::invalid_argument("tGrid must be nonempty");
    for (double t : tGrid) {
      if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("tGrid entries must be > 0");
    }
    if (Tmax < 3) throw std::invalid_argument("Tmax must be >= 3");
    if (SQBound < 3) throw std::invalid_argument("SQBound must be >= 3");
  }
};

struct TraceEntry {
  std::string summary;
  double delta = 0.0;
};

struct SearchResult {
  TowerCertificate best;
  DeltaReport bestDelta;
  std::vector<TraceEntry> trace;
};

/// k(p) = floor(1 / (p^{1/t} - 1)).
inline int heuristic_k(std::uint64_t p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  const double v = 1.0 / std::expm1(std::log(static_cast<double>(p)) / t);
  if (!(v < static_cast<double>(INT_MAX))) return INT_MAX;
  return static_cast<int>(std::floor(v));
}

inline double heuristic_R(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  return 2.0 * t + 1.0;
}

struct SQCandidate {
  std::uint64_t p = 0;
  SplitType splitInQ = SplitType::Inert;
  bool eligible = false;
};

inline std::vector<SQCandidate> eligible_SQ(const std::vector<std::uint64_t>& T,
                                            std::uint64_t bound) {
  for (auto q : T) {
    if (q % 2 == 0 || !is_prime(q)) {
      throw std::invalid_argument("T entry " + std::to_string(q) + " is not an odd prime");
    }
  }
  const auto threeMod4 = std::count_if(T.begin(), T.end(), [](auto q) { return q % 4 == 3; });
  if (threeMod4 % 2 == 0) throw std::invalid_argument("T fails the parity condition");
  const auto D = base_field_generator(T);
  std::vector<SQCandidate> out;
  for (auto p : primes_up_to(bound)) {
    out.push_back(SQCandidate{p, split_type(p, D), eligible_for_SQ(p, T)});
  }
  return out;
}

/// Certificate from the heuristic k(p) and R = 2t + 1. Primes whose k vanishes
/// are dropped.
inline TowerCertificate build_certificate(const std::vector<std::uint64_t>& T,
                                          const std::vector<std::uint64_t>& SQ, double t) {
  std::map<std::uint64_t, int> k;
  for (auto p : SQ) {
    const int kp = heuristic_k(p, t);
    if (kp >= 1) k.emplace(p, kp);
  }
  if (k.empty()) throw CertificateError("every k(p) vanishes at this t; S_Q would be empty");
  return TowerCertificate(T, std::move(k), heuristic_R(t), t);
}

namespace detail {

struct ScoredPrime {
  std::uint64_t p;
  int k;
  int e;
  int cost;      // slots used in the infinitude budget
  double num;    // log(k+1) / (4e)
  double den;    // k log p / (2e)
};

// Numerator and denominator pieces that depend only on T and R.
struct DeltaFrame {
  double numConst;
  double logTwoR;

  DeltaFrame(double lambda, double R)
      : numConst(std::log1p(-1.0 / R) +
                 0.5 * std::log(2.0 * std::numbers::pi / std::numbers::e) -
                 std::log(lambda) / 4.0 - std::log(std::log(lambda)) / 2.0),
        logTwoR(std::log(2.0 * R)) {}

  double operator()(double numSum, double denSum) const {
    const double logMain = logTwoR + denSum;
    const double corr = logMain > 700.0 ? 0.0 : std::log1p(std::exp(-logMain));
    return (numConst + numSum) / (logMain + corr);
  }
};

inline double lambda_of(const std::vector<std::uint64_t>& T) {
  return std::sqrt((4 * product_of(T)).convert_to<double>());
}

inline double exact_delta(const std::vector<std::uint64_t>& T,
                          const std::map<std::uint64_t, int>& k, double R, double lambda) {
  std::map<std::uint64_t, PrimeTerm> terms;
  for (const auto& [p, kp] : k) {
    const int e = (p == 2 || std::binary_search(T.begin(), T.end(), p)) ? 2 : 1;
    terms.emplace(p, PrimeTerm{kp, e, 2});
  }
  return delta_general(terms, lambda, R).delta;
}

inline std::string summarize(const std::vector<std::uint64_t>& T,
                             const std::map<std::uint64_t, int>& k, double R,
                             const std::string& how) {
  std::ostringstream os;
  os << "T=" << T.front() << ".." << T.back() << " (#" << T.size() << ") #SQ=" << k.size()
     << " R=" << R << " " << how;
  return os.str();
}

// Sets T built from prefixes of the odd primes, with the parity repaired.
inline std::vector<std::vector<std::uint64_t>> candidate_T_sets(std::uint64_t Tmax) {
  std::vector<std::uint64_t> odd;
  for (auto q : primes_up_to(Tmax))
    if (q != 2) odd.push_back(q);
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::vector<std::uint64_t>> out;
  auto add = [&](std::vector<std::uint64_t> T) {
    if (T.empty()) return;
    std::sort(T.begin(), T.end());
    if (seen.insert(T).second) out.push_back(std::move(T));
  };
  for (std::size_t m = 1; m <= odd.size(); ++m) {
    std::vector<std::uint64_t> T(odd.begin(), odd.begin() + static_cast<std::ptrdiff_t>(m));
    const auto c = std::count_if(T.begin(), T.end(), [](auto q) { return q % 4 == 3; });
    if (c % 2 == 1) {
      add(T);
      continue;
    }
    // Drop the largest prime that is 3 mod 4 ...
    auto dropped = T;
    for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
      if (*it % 4 == 3) {
        dropped.erase(std::next(it).base());
        break;
      }
    }
    add(dropped);
    // ... or extend by the next one.
    for (std::size_t j = m; j < odd.size(); ++j) {
      if (odd[j] % 4 == 3) {
        auto extended = T;
        extended.push_back(odd[j]);
        add(extended);
        break;
      }
    }
  }
  return out;
}

inline std::int64_t infinitude_budget(std::size_t nT) {
  // Largest LHS contribution of S_Q allowed: floor((#T-1)^2/4) - #T - 1.
  const auto n = static_cast<std::int64_t>(nT);
  return ((n - 1) * (n - 1)) / 4 - n - 1;
}

struct Candidate {
  std::map<std::uint64_t, int> k;
  double delta;
  std::string how;
};

// Grows S_Q one prime at a time by the first-order gain per budget slot.
inline std::optional<Candidate> greedy_SQ(const std::vector<ScoredPrime>& pool, std::int64_t budget,
                                          const DeltaFrame& frame) {
  std::vector<bool> used(pool.size(), false);
  double numSum = 0.0;
  double denSum = 0.0;
  double current = frame(numSum, denSum);
  std::map<std::uint64_t, int> k;
  while (true) {
    std::optional<std::size_t> pick;
    double bestGain = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto& s = pool[i];
      if (used[i] || s.cost > budget) continue;
      const double gain = (s.num - current * s.den) / s.cost;
      // Pool is ascending in p, so strict comparison keeps the smaller prime on ties.
      if (gain > bestGain) {
        bestGain = gain;
        pick = i;
      }
    }
    if (!pick) break;
    const auto& s = pool[*pick];
    used[*pick] = true;
    budget -= s.cost;
    numSum += s.num;
    denSum += s.den;
    k.emplace(s.p, s.k);
    current = frame(numSum, denSum);
  }
  if (k.empty()) return std::nullopt;
  return Candidate{std::move(k), current, "greedy"};
}

// The first r eligible ramified primes together with the first (budget - r)
// eligible inert primes, best r.
inline std::optional<Candidate> prefix_SQ(const std::vector<ScoredPrime>& ramified,
                                          const std::vector<ScoredPrime>& inert,
                                          std::int64_t budget, const DeltaFrame& frame) {
  if (budget <= 0) return std::nullopt;
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double bestDelta = 0.0;
  const auto maxR = std::min<std::size_t>(ramified.size(), static_cast<std::size_t>(budget));
  for (std::size_t r = 0; r <= maxR; ++r) {
    const auto i = std::min<std::size_t>(inert.size(), static_cast<std::size_t>(budget) - r);
    if (r + i == 0) continue;
    double numSum = 0.0;
    double denSum = 0.0;
    for (std::size_t a = 0; a < r; ++a) {
      numSum += ramified[a].num;
      denSum += ramified[a].den;
    }
    for (std::size_t b = 0; b < i; ++b) {
      numSum += inert[b].num;
      denSum += inert[b].den;
    }
    const double d = frame(numSum, denSum);
    if (!best || d > bestDelta) {
      best = {r, i};
      bestDelta = d;
    }
  }
  if (!best) return std::nullopt;
  std::map<std::uint64_t, int> k;
  for (std::size_t a = 0; a < best->first; ++a) k.emplace(ramified[a].p, ramified[a].k);
  for (std::size_t b = 0; b < best->second; ++b) k.emplace(inert[b].p, inert[b].k);
  return Candidate{std::move(k), bestDelta, "prefix"};
}

}  // namespace detail

inline constexpr int kMaxLocalSteps = 100'000;

/// Sweeps T (prefixes of the odd primes), t over the grid, and builds S_Q
/// both greedily and from category prefixes; optionally hill-climbs on k(p)
/// and R afterwards. Deterministic for a fixed config.
inline SearchResult optimize(const SearchConfig& config) {
  config.check();

  struct Best {
    std::vector<std::uint64_t> T;
    std::map<std::uint64_t, int> k;
    double R;
    double t;
    double delta;
  };
  std::optional<Best> best;
  std::vector<TraceEntry> trace;

  auto better = [&](const std::vector<std::uint64_t>& T, const std::map<std::uint64_t, int>& k,
                    double R, double d) {
    if (!best) return true;
    if (d != best->delta) return d > best->delta;
    return TowerCertificate(T, k, R) < TowerCertificate(best->T, best->k, best->R);
  };

  for (const auto& T : detail::candidate_T_sets(config.Tmax)) {
    const auto budget = detail::infinitude_budget(T.size());
    if (budget < 1) continue;
    const auto candidates = eligible_SQ(T, config.SQBound);
    const double lam = detail::lambda_of(T);
    for (double t : config.tGrid) {
      const double R = heuristic_R(t);
      const detail::DeltaFrame frame(lam, R);
      std::vector<detail::ScoredPrime> pool;
      std::vector<detail::ScoredPrime> ramified;
      std::vector<detail::ScoredPrime> inert;
      for (const auto& c : candidates) {
        if (!c.eligible) continue;
        const int k = heuristic_k(c.p, t);
        if (k < 1) continue;
        const int e = (c.p == 2 || std::binary_search(T.begin(), T.end(), c.p)) ? 2 : 1;
        const detail::ScoredPrime s{c.p, k, e, c.splitInQ == SplitType::Split ? 2 : 1,
                                    std::log(k + 1.0) / (4.0 * e),
                                    k * std::log(static_cast<double>(c.p)) / (2.0 * e)};
        pool.push_back(s);
        if (c.splitInQ == SplitType::Ramified) ramified.push_back(s);
        if (c.splitInQ == SplitType::Inert) inert.push_back(s);
      }
      for (auto cand : {detail::greedy_SQ(pool, budget, frame),
                        detail::prefix_SQ(ramified, inert, budget, frame)}) {
        if (!cand) continue;
        const double d = detail::exact_delta(T, cand->k, R, lam);
        std::ostringstream how;
        how << cand->how << " t=" << t;
        trace.push_back({detail::summarize(T, cand->k, R, how.str()), d});
        if (better(T, cand->k, R, d)) best = Best{T, cand->k, R, t, d};
      }
    }
  }

  if (!best) throw SearchEmptyError("no valid certificate in the search space");

  bool moved = false;
  if (config.localSearch && best->delta > 0.0) {
    const double lam = detail::lambda_of(best->T);
    bool improved = true;
    for (int steps = 0; improved && steps < kMaxLocalSteps; ++steps) {
      improved = false;
      std::vector<std::pair<std::map<std::uint64_t, int>, double>> moves;
      for (const auto& [p, kp] : best->k) {
        for (int step : {+1, -1}) {
          if (kp + step < 1) continue;
          auto k = best->k;
          k[p] = kp + step;
          moves.emplace_back(std::move(k), best->R);
        }
      }
      moves.emplace_back(best->k, best->R * 1.05);
      if (best->R / 1.05 > 1.0) moves.emplace_back(best->k, best->R / 1.05);
      for (auto& [k, R] : moves) {
        const double d = detail::exact_delta(best->T, k, R, lam);
        if (d > best->delta) {
          trace.push_back({detail::summarize(best->T, k, R, "local"), d});
          best->k = std::move(k);
          best->R = R;
          best->delta = d;
          improved = true;
          moved = true;
          break;
        }
      }
    }
  }

  const std::optional<double> t = moved ? std::nullopt : std::optional<double>(best->t);
  TowerCertificate cert(best->T, best->k, best->R, t);
  if (!validate(cert).valid) throw std::logic_error("optimizer produced an invalid certificate");
  auto report = delta(cert);
  return SearchResult{std::move(cert), std::move(report), std::move(trace)};
}

}  // namespace unitdist

#endif  // UNITDIST_OPTIMIZER_HPP
