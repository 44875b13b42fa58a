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

#ifndef UNITDIST_LATTICE_LAB_HPP
#define UNITDIST_LATTICE_LAB_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "unitdist/cmfield.hpp"

namespace unitdist {

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public LatticeError {
 public:
  using LatticeError::LatticeError;
};

inline constexpr double kBoundaryBand = 1e-9;
inline constexpr std::uint64_t kDefaultElementBudget = 10'000'000;

/// O_K = Z[zeta_n] embedded in prod_v K_v = R^{2d}, with the sup-norm
/// ||x|| = max_v |x_v| / sqrt(sigma_v(alpha)).
class ScaledLattice {
 public:
  ScaledLattice(int n, RealQuadElement alpha) : n_(n), alpha_(std::move(alpha)) {
    const auto& data = cyclotomic_data(n);
    if (alpha_.m() != data.m) {
      throw LatticeError("alpha lives in Q(sqrt " + std::to_string(alpha_.m()) +
                         ") but the real subfield of Q(zeta_" + std::to_string(n) + ") is Q(sqrt " +
                         std::to_string(data.m) + ")");
    }
    if (!alpha_.is_totally_positive()) throw LatticeError("alpha must be totally positive");
    d_ = data.places();
    for (int v = 0; v < d_; ++v) scale_.push_back(std::sqrt(alpha_.embed(v)));

    const int dim = 2 * d_;
    basis_.resize(dim, dim);
    for (int j = 0; j < dim; ++j) {
      auto e = CycloElement::zero(n);
      auto coords = e.coords();
      coords[static_cast<std::size_t>(j)] = 1;
      basis_.col(j) = embed_vector(CycloElement(n, coords));
    }
    inverse_ = basis_.inverse();
  }

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  int dimension() const noexcept { return 2 * d_; }
  const RealQuadElement& alpha() const noexcept { return alpha_; }
  const std::vector<double>& norm_scale() const noexcept { return scale_; }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& basis_inverse() const noexcept { return inverse_; }

  Eigen::VectorXd embed_vector(const CycloElement& a) const {
    Eigen::VectorXd x(2 * d_);
    for (int v = 0; v < d_; ++v) {
      const auto z = embed(a, v);
      x(2 * v) = z.real();
      x(2 * v + 1) = z.imag();
    }
    return x;
  }

  double scaled_norm(const Eigen::VectorXd& x) const {
    double best = 0.0;
    for (int v = 0; v < d_; ++v) {
      best = std::max(best, std::hypot(x(2 * v), x(2 * v + 1)) / scale_[static_cast<std::size_t>(v)]);
    }
    return best;
  }

  /// Integer coordinate box containing every lattice point of B(r, w),
  /// inflated by 1%.
  std::vector<std::pair<std::int64_t, std::int64_t>> coordinate_box(const Eigen::VectorXd& w,
                                                                    double r) const {
    const Eigen::VectorXd center = inverse_ * w;
    std::vector<std::pair<std::int64_t, std::int64_t>> box;
    for (int j = 0; j < 2 * d_; ++j) {
      double reach = 0.0;
      for (int v = 0; v < d_; ++v) {
        reach += r * scale_[static_cast<std::size_t>(v)] *
                 std::hypot(inverse_(j, 2 * v), inverse_(j, 2 * v + 1));
      }
      reach *= 1.01;
      box.emplace_back(static_cast<std::int64_t>(std::floor(center(j) - reach)),
                       static_cast<std::int64_t>(std::ceil(center(j) + reach)));
    }
    return box;
  }

 private:
  int n_;
  RealQuadElement alpha_;
  int d_ = 0;
  std::vector<double> scale_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd inverse_;
};

namespace detail {

inline double box_volume(const std::vector<std::pair<std::int64_t, std::int64_t>>& box) {
  double count = 1.0;
  for (const auto& [lo, hi] : box) count *= static_cast<double>(hi - lo + 1);
  return count;
}

// Visits every integer vector of the box.
inline void for_each_in_box(const std::vector<std::pair<std::int64_t, std::int64_t>>& box,
                            std::uint64_t budget,
                            const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  if (box_volume(box) > static_cast<double>(budget)) {
    throw BudgetExceeded("coordinate box holds more than " + std::to_string(budget) +
                         " candidates");
  }
  std::vector<std::int64_t> c;
  for (const auto& [lo, hi] : box) c.push_back(lo);
  while (true) {
    visit(c);
    std::size_t i = 0;
    while (i < c.size()) {
      if (c[i] < box[i].second) {
        ++c[i];
        break;
      }
      c[i] = box[i].first;
      ++i;
    }
    if (i == c.size()) return;
  }
}

inline CycloElement element_from(int n, const std::vector<std::int64_t>& c) {
  std::vector<BigInt> coords(c.begin(), c.end());
  return CycloElement(n, std::move(coords));
}

struct BallMember {
  std::vector<std::int64_t> coords;
  double norm;  // scaled distance to the centre
};

inline std::vector<BallMember> enumerate_ball(const ScaledLattice& lat, const Eigen::VectorXd& w,
                                              double r, std::uint64_t budget) {
  std::vector<BallMember> out;
  const auto box = lat.coordinate_box(w, r);
  Eigen::VectorXd c(lat.dimension());
  for_each_in_box(box, budget, [&](const std::vector<std::int64_t>& coords) {
    for (std::size_t j = 0; j < coords.size(); ++j) c(static_cast<Eigen::Index>(j)) = static_cast<double>(coords[j]);
    const double nrm = lat.scaled_norm(lat.basis() * c - w);
    if (nrm <= r + kBoundaryBand) out.push_back({coords, nrm});
  });
  return out;
}

}  // namespace detail

/// All beta in Z[zeta_n] with beta c(beta) = alpha, in ascending coordinate order.
inline std::vector<CycloElement> find_representations(const RealQuadElement& alpha, int n) {
  if (!alpha.is_totally_positive()) throw LatticeError("alpha must be totally positive");
  const ScaledLattice lat(n, alpha);
  // Solutions have |sigma_v(beta)| = sqrt(sigma_v(alpha)), i.e. norm 1 around 0.
  const auto box = lat.coordinate_box(Eigen::VectorXd::Zero(lat.dimension()), 1.0);
  std::vector<CycloElement> out;
  detail::for_each_in_box(box, kDefaultElementBudget, [&](const std::vector<std::int64_t>& c) {
    auto beta = detail::element_from(n, c);
    if (relative_norm(beta) == alpha) out.push_back(std::move(beta));
  });
  std::sort(out.begin(), out.end());
  return out;
}

struct ShiftChoice {
  std::vector<double> w;
  std::uint64_t seed = 0;
  int trialIndex = -1;
  std::int64_t innerCount = 0;  // #(B(R-1, w) cap Lambda)
  std::int64_t outerCount = 0;  // #(B(R, w) cap Lambda)
  bool warning = false;         // no sampled w met the count inequality
};

namespace detail {
// (1 - 1/R)^{2d} * outer <= inner, decided in exact rational arithmetic.
inline bool count_inequality_holds(std::int64_t inner, std::int64_t outer, double R, int d) {
  const BigRational r(R);
  BigRational lhs = inner;
  BigRational rhs = outer;
  for (int i = 0; i < 2 * d; ++i) {
    lhs *= r;
    rhs *= (r - 1);
  }
  return lhs >= rhs;
}

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}
}  // namespace detail

/// Samples w uniformly in the fundamental parallelepiped of the embedded
/// lattice and returns the first one with
/// #(B(R-1,w)) >= (1-1/R)^{2d} #(B(R,w)). Falls back to the sample with the
/// largest gap, flagged.
inline ShiftChoice choose_shift(const ScaledLattice& lat, double R, int trials, std::uint64_t seed,
                                std::uint64_t budget = kDefaultElementBudget) {
  if (!(R > 1.0)) throw LatticeError("R must exceed 1");
  if (trials < 1) throw LatticeError("trials must be >= 1");
  std::mt19937_64 gen(seed);
  std::optional<ShiftChoice> fallback;
  double fallbackGap = -std::numeric_limits<double>::infinity();
  const double factor = std::pow(1.0 - 1.0 / R, 2 * lat.d());
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd u(lat.dimension());
    for (Eigen::Index j = 0; j < u.size(); ++j) u(j) = detail::uniform01(gen);
    const Eigen::VectorXd w = lat.basis() * u;
    const auto members = detail::enumerate_ball(lat, w, R, budget);
    std::int64_t inner = 0;
    for (const auto& m : members)
      if (m.norm <= R - 1.0 + kBoundaryBand) ++inner;
    ShiftChoice choice{std::vector<double>(w.data(), w.data() + w.size()), seed, trial, inner,
                       static_cast<std::int64_t>(members.size()), false};
    if (detail::count_inequality_holds(inner, choice.outerCount, R, lat.d())) return choice;
    const double gap = static_cast<double>(inner) - factor * static_cast<double>(choice.outerCount);
    if (gap > fallbackGap) {
      fallbackGap = gap;
      fallback = choice;
    }
  }
  fallback->warning = true;
  return *fallback;
}

struct PointSet {
  std::vector<CycloElement> elements;
  std::vector<double> shift;
  double R = 0.0;
  std::vector<std::pair<double, double>> projected;
  std::int64_t boundaryFlagged = 0;  // members within the numeric boundary band
};

/// U = pi(B(R, w) cap Lambda), projected through place 0 and divided by
/// sqrt(sigma_0(alpha)).
inline PointSet build_point_set(const ScaledLattice& lat, double R, const std::vector<double>& w,
                                std::uint64_t budget = kDefaultElementBudget) {
  if (!(R > 1.0)) throw LatticeError("R must exceed 1");
  if (w.size() != static_cast<std::size_t>(lat.dimension())) throw LatticeError("shift has wrong dimension");
  const Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  PointSet ps;
  ps.shift = w;
  ps.R = R;
  const double scale0 = lat.norm_scale().front();
  for (auto& m : detail::enumerate_ball(lat, wv, R, budget)) {
    if (std::abs(m.norm - R) <= kBoundaryBand) ++ps.boundaryFlagged;
    auto beta = detail::element_from(lat.n(), m.coords);
    const auto z = embed(beta, 0);
    ps.projected.emplace_back(z.real() / scale0, z.imag() / scale0);
    ps.elements.push_back(std::move(beta));
  }
  return ps;
}

struct DistanceCount {
  std::int64_t orderedPairsAtUnit = 0;
  std::int64_t setSize = 0;
  BigRational ratio = 0;
  std::int64_t M = 0;
  std::int64_t numericPairsAtUnit = 0;  // exact pairs re-verified numerically
};

inline constexpr double kUnitDistanceTolerance = 1e-9;

/// Ordered pairs (b1, b2) of the set with relative_norm(b1 - b2) = alpha.
/// The count is exact: b2 = b1 + rho for some representation rho of alpha.
/// Exact and numeric predicates must agree; a disagreement throws.
inline DistanceCount count_unit_distances(const PointSet& ps, const ScaledLattice& lat) {
  const auto reps = find_representations(lat.alpha(), lat.n());

  std::set<std::pair<std::size_t, std::size_t>> exactPairs;
  {
    std::map<CycloElement, std::size_t> index;
    for (std::size_t i = 0; i < ps.elements.size(); ++i) index.emplace(ps.elements[i], i);
    for (std::size_t i = 0; i < ps.elements.size(); ++i) {
      for (const auto& rho : reps) {
        auto it = index.find(ps.elements[i] + rho);
        if (it != index.end()) exactPairs.emplace(i, it->second);
      }
    }
  }

  auto numericUnit = [&](std::size_t i, std::size_t j) {
    const double dist = std::hypot(ps.projected[j].first - ps.projected[i].first,
                                   ps.projected[j].second - ps.projected[i].second);
    return std::abs(dist - 1.0) <= kUnitDistanceTolerance;
  };
  std::int64_t numeric = 0;
  for (const auto& [i, j] : exactPairs) {
    if (!numericUnit(i, j)) {
      throw std::logic_error("exact unit pair is not at numeric distance 1");
    }
    ++numeric;
  }

  // Every numerically-unit pair must be exact; unit grid buckets find them.
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  auto cell = [](double v) { return static_cast<std::int64_t>(std::floor(v)); };
  auto key = [](std::int64_t gx, std::int64_t gy) { return gx * 1'000'003LL + gy; };
  for (std::size_t i = 0; i < ps.projected.size(); ++i) {
    buckets[key(cell(ps.projected[i].first), cell(ps.projected[i].second))].push_back(i);
  }
  for (std::size_t i = 0; i < ps.projected.size(); ++i) {
    const auto gx = cell(ps.projected[i].first);
    const auto gy = cell(ps.projected[i].second);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(gx + dx, gy + dy));
        if (it == buckets.end()) continue;
        for (auto j : it->second) {
          if (j != i && numericUnit(i, j) && exactPairs.count({i, j}) == 0) {
            throw std::logic_error("numeric unit pair is not exact in the real subfield");
          }
        }
      }
    }
  }

  DistanceCount out;
  out.orderedPairsAtUnit = static_cast<std::int64_t>(exactPairs.size());
  out.setSize = static_cast<std::int64_t>(ps.elements.size());
  out.ratio = out.setSize == 0 ? BigRational(0) : BigRational(out.orderedPairsAtUnit, out.setSize);
  out.M = static_cast<std::int64_t>(reps.size());
  out.numericPairsAtUnit = numeric;
  return out;
}

/// ratio >= (1 - 1/R)^{2d} M, decided exactly on the integer counts.
inline bool ratio_guarantee_holds(const DistanceCount& dc, double R, int d) {
  const BigRational r(R);
  BigRational lhs = dc.orderedPairsAtUnit;
  BigRational rhs = BigRational(dc.M) * dc.setSize;
  for (int i = 0; i < 2 * d; ++i) {
    lhs *= r;
    rhs *= (r - 1);
  }
  return lhs >= rhs;
}

struct IndexFormulaReport {
  double lhs = 0.0;  // |N_{K/Q}(beta)| / |N_{F/Q}(alpha)|
  double rhs = 0.0;  // prod_v |beta|_v^2 / sigma_v(alpha)
  double relativeError = 0.0;
  bool passed = false;
};

inline IndexFormulaReport verify_index_formula(const CycloElement& beta,
                                               const RealQuadElement& alpha, int n,
                                               double tolerance = 1e-9) {
  if (beta.is_zero() || alpha.is_zero()) throw LatticeError("beta and alpha must be nonzero");
  if (beta.n() != n) throw LatticeError("beta is not in Q(zeta_n)");
  const auto& data = cyclotomic_data(n);
  if (alpha.m() != data.m) throw LatticeError("alpha is not in the real subfield");
  IndexFormulaReport r;
  const BigRational quotient = BigRational(field_norm_to_Q(beta)) / real_norm_to_Q(alpha);
  r.lhs = quotient.convert_to<double>();
  double prod = 1.0;
  for (int v = 0; v < data.places(); ++v) {
    prod *= std::norm(embed(beta, v)) / std::abs(alpha.embed(v));
  }
  r.rhs = prod;
  r.relativeError = std::abs(r.lhs - r.rhs) / std::abs(r.lhs);
  r.passed = r.relativeError < tolerance;
  return r;
}

struct MinNormReport {
  double bound = 0.0;     // |N_{F/Q}(alpha)|^{-1/(2d)}
  double achieved = 0.0;  // min ||beta|| over nonzero beta
  std::optional<CycloElement> argmin;
  bool passed = false;
};

inline MinNormReport verify_min_norm_bound(const ScaledLattice& lat,
                                           std::uint64_t budget = kDefaultElementBudget) {
  MinNormReport r;
  r.bound = std::pow(real_norm_to_Q(lat.alpha()).convert_to<double>(), -1.0 / (2.0 * lat.d()));
  // The minimum is at most ||1||, so the ball of that radius around 0 suffices.
  const auto one = CycloElement::one(lat.n());
  const double radius = lat.scaled_norm(lat.embed_vector(one));
  r.achieved = std::numeric_limits<double>::infinity();
  for (const auto& m : detail::enumerate_ball(lat, Eigen::VectorXd::Zero(lat.dimension()), radius, budget)) {
    if (std::all_of(m.coords.begin(), m.coords.end(), [](auto c) { return c == 0; })) continue;
    if (m.norm < r.achieved) {
      r.achieved = m.norm;
      r.argmin = detail::element_from(lat.n(), m.coords);
    }
  }
  r.passed = r.achieved >= r.bound * (1.0 - 1e-12);
  return r;
}

}  // namespace unitdist

#endif  // UNITDIST_LATTICE_LAB_HPP
