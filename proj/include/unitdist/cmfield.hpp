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

#ifndef UNITDIST_CMFIELD_HPP
#define UNITDIST_CMFIELD_HPP

#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "unitdist/numtheory.hpp"

namespace unitdist {

using BigRational = boost::multiprecision::cpp_rational;

class CmFieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Static data for K = Q(zeta_n), n in {4, 8, 12}, with maximal real
/// subfield F = Q(sqrt m).
struct CyclotomicData {
  int n;
  int degree;                    // phi(n)
  int m;                         // F = Q(sqrt m); m = 1 encodes F = Q
  std::vector<int> phiLow;       // Phi_n = x^degree + sum phiLow[i] x^i
  std::vector<int> placeExps;    // zeta -> exp(2 pi i k / n), one k per real place of F
  std::vector<std::vector<BigInt>> conjImage;  // conjImage[j] = coords of zeta^{-j}
  std::vector<BigInt> sqrtM;     // coords of sqrt m (zeta + zeta^{-1}); empty when m = 1
  std::size_t sqrtMPivot = 0;    // coordinate where sqrtM is nonzero and 1 is zero

  int places() const noexcept { return degree / 2; }
};

namespace detail {

inline void reduce_mod_cyclotomic(std::vector<BigInt>& poly, const std::vector<int>& phiLow) {
  const auto deg = phiLow.size();
  for (std::size_t i = poly.size(); i-- > deg;) {
    if (poly[i] == 0) continue;
    const BigInt c = poly[i];
    poly[i] = 0;
    for (std::size_t j = 0; j < deg; ++j) {
      if (phiLow[j] != 0) poly[i - deg + j] -= c * phiLow[j];
    }
  }
  poly.resize(deg);
}

inline std::vector<BigInt> poly_mul_mod(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                        const std::vector<int>& phiLow) {
  std::vector<BigInt> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
  }
  reduce_mod_cyclotomic(prod, phiLow);
  return prod;
}

inline std::vector<BigInt> monomial(std::size_t power, const std::vector<int>& phiLow) {
  std::vector<BigInt> poly(std::max(power + 1, phiLow.size()), 0);
  poly[power] = 1;
  reduce_mod_cyclotomic(poly, phiLow);
  return poly;
}

inline CyclotomicData make_cyclotomic_data(int n) {
  CyclotomicData d{};
  d.n = n;
  switch (n) {
    case 4:
      d = {4, 2, 1, {1, 0}, {1}, {}, {}, 0};
      break;
    case 8:
      d = {8, 4, 2, {1, 0, 0, 0}, {1, 3}, {}, {}, 0};
      break;
    case 12:
      d = {12, 4, 3, {1, 0, -1, 0}, {1, 5}, {}, {}, 0};
      break;
    default:
      throw CmFieldError("unsupported cyclotomic index " + std::to_string(n) +
                         " (supported: 4, 8, 12)");
  }
  for (int j = 0; j < d.degree; ++j) {
    d.conjImage.push_back(monomial(static_cast<std::size_t>((d.n - j) % d.n), d.phiLow));
  }
  if (d.m != 1) {
    // sqrt m = zeta + zeta^{-1}; checked by squaring.
    d.sqrtM = d.conjImage[1];
    d.sqrtM[1] += 1;
    const auto sq = poly_mul_mod(d.sqrtM, d.sqrtM, d.phiLow);
    std::vector<BigInt> expected(static_cast<std::size_t>(d.degree), 0);
    expected[0] = d.m;
    if (sq != expected || d.sqrtM[0] != 0) {
      throw std::logic_error("sqrt(m) identification failed for n = " + std::to_string(n));
    }
    for (std::size_t j = d.sqrtM.size(); j-- > 1;) {
      if (d.sqrtM[j] != 0) {
        d.sqrtMPivot = j;
        break;
      }
    }
  }
  return d;
}

}  // namespace detail

inline const CyclotomicData& cyclotomic_data(int n) {
  static const CyclotomicData d4 = detail::make_cyclotomic_data(4);
  static const CyclotomicData d8 = detail::make_cyclotomic_data(8);
  static const CyclotomicData d12 = detail::make_cyclotomic_data(12);
  switch (n) {
    case 4: return d4;
    case 8: return d8;
    case 12: return d12;
    default:
      throw CmFieldError("only n in {4, 8, 12} is supported, got " + std::to_string(n));
  }
}

inline int totient_of(int n) { return cyclotomic_data(n).degree; }

/// Element of Z[zeta_n] in power-basis coordinates 1, zeta, ..., zeta^{phi(n)-1}.
class CycloElement {
 public:
  CycloElement(int n, std::vector<BigInt> coords) : n_(n), coords_(std::move(coords)) {
    const auto& data = cyclotomic_data(n);
    if (coords_.size() != static_cast<std::size_t>(data.degree)) {
      throw CmFieldError("expected " + std::to_string(data.degree) + " coordinates for n = " +
                         std::to_string(n));
    }
  }

  static CycloElement from_ints(int n, std::initializer_list<long long> coords) {
    std::vector<BigInt> c;
    for (auto v : coords) c.emplace_back(v);
    return CycloElement(n, std::move(c));
  }
  static CycloElement zero(int n) {
    return CycloElement(n, std::vector<BigInt>(static_cast<std::size_t>(totient_of(n)), 0));
  }
  static CycloElement one(int n) {
    auto z = zero(n);
    z.coords_[0] = 1;
    return z;
  }
  static CycloElement zeta(int n) {
    auto z = zero(n);
    z.coords_[1] = 1;
    return z;
  }

  int n() const noexcept { return n_; }
  const std::vector<BigInt>& coords() const noexcept { return coords_; }
  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  friend CycloElement operator+(const CycloElement& a, const CycloElement& b) {
    check_same(a, b);
    auto out = a;
    for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] += b.coords_[i];
    return out;
  }
  friend CycloElement operator-(const CycloElement& a, const CycloElement& b) {
    check_same(a, b);
    auto out = a;
    for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] -= b.coords_[i];
    return out;
  }
  friend CycloElement operator-(const CycloElement& a) {
    auto out = a;
    for (auto& c : out.coords_) c = -c;
    return out;
  }
  friend CycloElement operator*(const CycloElement& a, const CycloElement& b) {
    check_same(a, b);
    return CycloElement(a.n_,
                        detail::poly_mul_mod(a.coords_, b.coords_, cyclotomic_data(a.n_).phiLow));
  }

  friend bool operator==(const CycloElement& a, const CycloElement& b) {
    return a.n_ == b.n_ && a.coords_ == b.coords_;
  }
  friend std::strong_ordering operator<=>(const CycloElement& a, const CycloElement& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    for (std::size_t i = 0; i < a.coords_.size(); ++i) {
      if (a.coords_[i] < b.coords_[i]) return std::strong_ordering::less;
      if (b.coords_[i] < a.coords_[i]) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const CycloElement& a) {
    os << "(";
    for (std::size_t i = 0; i < a.coords_.size(); ++i) os << (i ? "," : "") << a.coords_[i];
    return os << ")_" << a.n_;
  }

 private:
  static void check_same(const CycloElement& a, const CycloElement& b) {
    if (a.n_ != b.n_) throw CmFieldError("mixed cyclotomic fields in arithmetic");
  }

  int n_;
  std::vector<BigInt> coords_;
};

/// x + y sqrt(m) with rational x, y. m = 1 means the rational field (y = 0).
class RealQuadElement {
 public:
  RealQuadElement(int m, BigRational x, BigRational y = 0) : m_(m), x_(std::move(x)), y_(std::move(y)) {
    if (m_ != 1 && m_ != 2 && m_ != 3) throw CmFieldError("m must be 1, 2 or 3");
    if (m_ == 1 && y_ != 0) throw CmFieldError("y must be 0 for the rational field");
  }

  int m() const noexcept { return m_; }
  const BigRational& x() const noexcept { return x_; }
  const BigRational& y() const noexcept { return y_; }

  bool is_zero() const { return x_ == 0 && y_ == 0; }

  /// Signed norm x^2 - m y^2; for m = 1 the field is Q and the norm is x.
  BigRational norm() const { return m_ == 1 ? x_ : x_ * x_ - m_ * y_ * y_; }

  RealQuadElement galois_conjugate() const { return RealQuadElement(m_, x_, -y_); }

  /// Exact test: x > 0 and x^2 > m y^2.
  bool is_totally_positive() const { return x_ > 0 && x_ * x_ > m_ * y_ * y_; }

  /// Real embedding; place 0 sends sqrt m to +sqrt m.
  double embed(int place) const {
    const double s = std::sqrt(static_cast<double>(m_));
    const double xv = x_.convert_to<double>();
    const double yv = y_.convert_to<double>();
    return place == 0 ? xv + yv * s : xv - yv * s;
  }

  friend RealQuadElement operator+(const RealQuadElement& a, const RealQuadElement& b) {
    check_same(a, b);
    return RealQuadElement(a.m_, a.x_ + b.x_, a.y_ + b.y_);
  }
  friend RealQuadElement operator-(const RealQuadElement& a, const RealQuadElement& b) {
    check_same(a, b);
    return RealQuadElement(a.m_, a.x_ - b.x_, a.y_ - b.y_);
  }
  friend RealQuadElement operator*(const RealQuadElement& a, const RealQuadElement& b) {
    check_same(a, b);
    return RealQuadElement(a.m_, a.x_ * b.x_ + a.m_ * a.y_ * b.y_, a.x_ * b.y_ + a.y_ * b.x_);
  }
  friend bool operator==(const RealQuadElement& a, const RealQuadElement& b) {
    return a.m_ == b.m_ && a.x_ == b.x_ && a.y_ == b.y_;
  }

  friend std::ostream& operator<<(std::ostream& os, const RealQuadElement& a) {
    os << a.x_;
    if (a.m_ != 1) os << (a.y_ < 0 ? "-" : "+") << abs(a.y_) << "*sqrt(" << a.m_ << ")";
    return os;
  }

 private:
  static void check_same(const RealQuadElement& a, const RealQuadElement& b) {
    if (a.m_ != b.m_) throw CmFieldError("mixed real quadratic fields in arithmetic");
  }

  int m_;
  BigRational x_;
  BigRational y_;
};

/// Complex conjugation zeta -> zeta^{n-1}, a linear map on coordinates.
inline CycloElement conj(const CycloElement& a) {
  const auto& data = cyclotomic_data(a.n());
  std::vector<BigInt> out(static_cast<std::size_t>(data.degree), 0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto& c = a.coords()[j];
    if (c == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * data.conjImage[j][i];
  }
  return CycloElement(a.n(), std::move(out));
}

/// The real subfield F attached to Q(zeta_n).
inline int real_subfield_m(int n) { return cyclotomic_data(n).m; }

/// beta * c(beta), returned in x + y sqrt(m) coordinates.
inline RealQuadElement relative_norm(const CycloElement& a) {
  const auto& data = cyclotomic_data(a.n());
  const auto prod = a * conj(a);
  if (!(conj(prod) == prod)) {
    throw std::logic_error("relative norm is not fixed by complex conjugation");
  }
  const auto& c = prod.coords();
  if (data.m == 1) {
    if (c[1] != 0) throw std::logic_error("relative norm in Q(i) has an imaginary part");
    return RealQuadElement(1, BigRational(c[0]));
  }
  const BigRational y = BigRational(c[data.sqrtMPivot]) / BigRational(data.sqrtM[data.sqrtMPivot]);
  const BigRational x = BigRational(c[0]);  // sqrtM has zero constant term
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (BigRational(c[i]) != y * BigRational(data.sqrtM[i])) {
      throw std::logic_error("relative norm does not lie in the real subfield");
    }
  }
  return RealQuadElement(data.m, x, y);
}

/// Complex value of a at the embedding over real place `place` of F.
inline std::complex<double> embed(const CycloElement& a, int place) {
  const auto& data = cyclotomic_data(a.n());
  if (place < 0 || place >= data.places()) throw CmFieldError("place index out of range");
  const long double angle = 2.0L * std::numbers::pi_v<long double> *
                            data.placeExps[static_cast<std::size_t>(place)] / data.n;
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::size_t j = 0; j < a.coords().size(); ++j) {
    const auto c = a.coords()[j].convert_to<long double>();
    re += c * std::cos(angle * static_cast<long double>(j));
    im += c * std::sin(angle * static_cast<long double>(j));
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

namespace detail {
// Fraction-free Gaussian elimination (Bareiss); exact determinant.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const auto n = a.size();
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}
}  // namespace detail

/// |N_{K/Q}(a)| as the determinant of multiplication by a (the resultant of
/// a with Phi_n).
inline BigInt field_norm_to_Q(const CycloElement& a) {
  const auto deg = a.coords().size();
  std::vector<std::vector<BigInt>> mat(deg, std::vector<BigInt>(deg, 0));
  auto power = CycloElement::one(a.n());
  const auto z = CycloElement::zeta(a.n());
  for (std::size_t j = 0; j < deg; ++j) {
    const auto col = a * power;
    for (std::size_t i = 0; i < deg; ++i) mat[i][j] = col.coords()[i];
    power = power * z;
  }
  return abs(detail::bareiss_determinant(std::move(mat)));
}

/// |N_{F/Q}(alpha)| = |x^2 - m y^2|.
inline BigRational real_norm_to_Q(const RealQuadElement& alpha) { return abs(alpha.norm()); }

}  // namespace unitdist

#endif  // UNITDIST_CMFIELD_HPP
