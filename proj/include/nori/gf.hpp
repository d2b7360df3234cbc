#pragma once

// Exact arithmetic in F_q, q = ell^f, and dense square matrices over it.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nori/error.hpp"

namespace nori {

constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// An element of F_q, stored as the integer sum c_i * ell^i of its
/// coefficients in the power basis of the field modulus.
struct FieldElement {
  std::uint32_t code = 0;

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

class Field {
 public:
  /// Construction for certification use: rejects ell < 5.
  static std::shared_ptr<const Field> make(std::uint32_t ell, std::uint32_t f) {
    if (!is_prime(ell) || ell < 5)
      throw Error(ErrorKind::NotPrime, "ell must be a prime >= 5, got " + std::to_string(ell));
    return build(ell, f);
  }

  /// Oracle-only construction that also accepts ell = 2 and ell = 3, used to
  /// cross-check order formulas at small q.
  static std::shared_ptr<const Field> make_small_char(std::uint32_t ell, std::uint32_t f) {
    if (!is_prime(ell))
      throw Error(ErrorKind::NotPrime, std::to_string(ell) + " is not prime");
    return build(ell, f);
  }

  std::uint32_t ell() const noexcept { return ell_; }
  std::uint32_t degree() const noexcept { return f_; }
  std::uint32_t size() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return f_ == 1; }

  /// Monic modulus, coefficients low degree first (length f + 1).
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }

  FieldElement from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(ell_);
    if (r < 0) r += ell_;
    return {static_cast<std::uint32_t>(r)};
  }

  FieldElement from_coeffs(std::span<const std::int64_t> coeffs) const {
    if (coeffs.size() > f_)
      throw Error(ErrorKind::InvalidArgument, "too many coefficients for field element");
    std::uint32_t code = 0, place = 1;
    for (auto c : coeffs) {
      code += from_int(c).code * place;
      place *= ell_;
    }
    return {code};
  }

  std::vector<std::uint32_t> coeffs(FieldElement a) const {
    std::vector<std::uint32_t> out(f_);
    for (std::uint32_t i = 0; i < f_; ++i) {
      out[i] = a.code % ell_;
      a.code /= ell_;
    }
    return out;
  }

  /// The power-basis generator x (or 1 in a prime field).
  FieldElement generator_x() const noexcept { return f_ == 1 ? one() : FieldElement{ell_}; }

  FieldElement add(FieldElement a, FieldElement b) const noexcept {
    if (f_ == 1) {
      std::uint32_t s = a.code + b.code;
      return {s >= ell_ ? s - ell_ : s};
    }
    if (!add_table_.empty()) return {add_table_[std::size_t(a.code) * q_ + b.code]};
    std::uint32_t out = 0, place = 1;
    for (std::uint32_t i = 0; i < f_; ++i) {
      std::uint32_t d = a.code % ell_ + b.code % ell_;
      if (d >= ell_) d -= ell_;
      out += d * place;
      place *= ell_;
      a.code /= ell_;
      b.code /= ell_;
    }
    return {out};
  }

  FieldElement neg(FieldElement a) const noexcept {
    if (f_ == 1) return {a.code == 0 ? 0 : ell_ - a.code};
    return {neg_table_[a.code]};
  }

  FieldElement sub(FieldElement a, FieldElement b) const noexcept { return add(a, neg(b)); }

  FieldElement mul(FieldElement a, FieldElement b) const noexcept {
    if (f_ == 1) return {static_cast<std::uint32_t>(std::uint64_t(a.code) * b.code % ell_)};
    if (a.code == 0 || b.code == 0) return {0};
    return {exp_table_[log_table_[a.code] + log_table_[b.code]]};
  }

  FieldElement inv(FieldElement a) const {
    if (a.code == 0) throw Error(ErrorKind::Singular, "inverse of zero");
    if (f_ == 1) return pow(a, ell_ - 2);
    return {exp_table_[(q_ - 1 - log_table_[a.code]) % (q_ - 1)]};
  }

  FieldElement pow(FieldElement a, std::uint64_t e) const noexcept {
    FieldElement r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Shared handle to F_ell.
  std::shared_ptr<const Field> prime_field() const { return build(ell_, 1); }

  std::string describe() const {
    return f_ == 1 ? "F_" + std::to_string(ell_)
                   : "F_" + std::to_string(ell_) + "^" + std::to_string(f_);
  }

 private:
  Field() = default;

  using Poly = std::vector<std::uint32_t>;  // low degree first

  static std::shared_ptr<const Field> build(std::uint32_t ell, std::uint32_t f) {
    if (f == 0) throw Error(ErrorKind::DegreeZero, "extension degree must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < f; ++i) {
      q *= ell;
      if (q > (f == 1 ? (std::uint64_t(1) << 31) : (std::uint64_t(1) << 22)))
        throw Error(ErrorKind::Overflow, "field too large for table arithmetic");
    }
    auto field = std::shared_ptr<Field>(new Field());
    field->ell_ = ell;
    field->f_ = f;
    field->q_ = static_cast<std::uint32_t>(q);
    field->modulus_ = smallest_irreducible(ell, f);
    if (f > 1) field->build_tables();
    return field;
  }

  static Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
  }

  static Poly poly_mod(Poly a, const Poly& m, std::uint32_t ell) {
    a = trim(std::move(a));
    // m is monic.
    while (a.size() >= m.size()) {
      std::uint32_t lead = a.back();
      std::size_t shift = a.size() - m.size();
      for (std::size_t i = 0; i < m.size(); ++i)
        a[shift + i] = (a[shift + i] + ell - std::uint32_t(std::uint64_t(lead) * m[i] % ell)) % ell;
      a = trim(std::move(a));
    }
    return a;
  }

  static Poly poly_from_index(std::uint64_t idx, std::uint32_t ell, std::uint32_t deg) {
    Poly p(deg + 1, 0);
    for (std::uint32_t i = 0; i < deg; ++i) {
      p[i] = static_cast<std::uint32_t>(idx % ell);
      idx /= ell;
    }
    p[deg] = 1;
    return p;
  }

  /// Exhaustive trial division by every monic polynomial of degree <= f/2.
  static bool is_irreducible(const Poly& p, std::uint32_t ell) {
    std::uint32_t f = static_cast<std::uint32_t>(p.size() - 1);
    for (std::uint32_t d = 1; 2 * d <= f; ++d) {
      std::uint64_t count = 1;
      for (std::uint32_t i = 0; i < d; ++i) count *= ell;
      for (std::uint64_t idx = 0; idx < count; ++idx)
        if (poly_mod(p, poly_from_index(idx, ell, d), ell).empty()) return false;
    }
    return true;
  }

  /// Monic irreducible of degree f whose coefficient vector, read as a base-ell
  /// integer with the constant term least significant, is smallest.
  static Poly smallest_irreducible(std::uint32_t ell, std::uint32_t f) {
    if (f == 1) return {0, 1};
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < f; ++i) count *= ell;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly p = poly_from_index(idx, ell, f);
      if (is_irreducible(p, ell)) return p;
    }
    throw Error(ErrorKind::InvalidArgument, "no irreducible polynomial found");  // unreachable
  }

  std::uint32_t poly_mul_codes(std::uint32_t a, std::uint32_t b) const {
    Poly pa(f_), pb(f_), prod(2 * f_, 0);
    for (std::uint32_t i = 0; i < f_; ++i) {
      pa[i] = a % ell_;
      a /= ell_;
      pb[i] = b % ell_;
      b /= ell_;
    }
    for (std::uint32_t i = 0; i < f_; ++i)
      for (std::uint32_t j = 0; j < f_; ++j)
        prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % ell_;
    Poly r = poly_mod(prod, modulus_, ell_);
    std::uint32_t code = 0, place = 1;
    for (auto c : r) {
      code += c * place;
      place *= ell_;
    }
    return code;
  }

  void build_tables() {
    neg_table_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) {
      std::uint32_t x = a, out = 0, place = 1;
      for (std::uint32_t i = 0; i < f_; ++i) {
        std::uint32_t d = x % ell_;
        out += (d == 0 ? 0 : ell_ - d) * place;
        place *= ell_;
        x /= ell_;
      }
      neg_table_[a] = out;
    }
    // Find a primitive element by direct order computation.
    const std::uint32_t order = q_ - 1;
    std::vector<std::uint32_t> prime_divisors;
    for (std::uint32_t n = order, d = 2; n > 1; ++d) {
      if (std::uint64_t(d) * d > n) d = n;
      if (n % d == 0) {
        prime_divisors.push_back(d);
        while (n % d == 0) n /= d;
      }
    }
    auto power = [&](std::uint32_t a, std::uint64_t e) {
      std::uint32_t r = 1;
      while (e) {
        if (e & 1) r = poly_mul_codes(r, a);
        a = poly_mul_codes(a, a);
        e >>= 1;
      }
      return r;
    };
    std::uint32_t gen = 0;
    for (std::uint32_t a = 2; a < q_ && gen == 0; ++a) {
      bool primitive = std::all_of(prime_divisors.begin(), prime_divisors.end(),
                                   [&](std::uint32_t p) { return power(a, order / p) != 1; });
      if (primitive) gen = a;
    }
    exp_table_.resize(2 * std::size_t(order));
    log_table_.assign(q_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
      exp_table_[i] = exp_table_[i + order] = x;
      log_table_[x] = i;
      x = poly_mul_codes(x, gen);
    }
    if (q_ <= 1024) {
      add_table_.resize(std::size_t(q_) * q_);
      for (std::uint32_t a = 0; a < q_; ++a)
        for (std::uint32_t b = 0; b < q_; ++b) {
          std::uint32_t x1 = a, x2 = b, out = 0, place = 1;
          for (std::uint32_t i = 0; i < f_; ++i) {
            out += ((x1 % ell_ + x2 % ell_) % ell_) * place;
            place *= ell_;
            x1 /= ell_;
            x2 /= ell_;
          }
          add_table_[std::size_t(a) * q_ + b] = out;
        }
    }
  }

  std::uint32_t ell_ = 0;
  std::uint32_t f_ = 1;
  std::uint32_t q_ = 0;
  Poly modulus_;
  std::vector<std::uint32_t> exp_table_, log_table_, neg_table_, add_table_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(std::uint32_t ell, std::uint32_t f) { return Field::make(ell, f); }

/// Dense n x n matrix, row-major. Entries are always reduced field elements.
struct Mat {
  std::size_t n = 0;
  std::vector<FieldElement> a;

  Mat() = default;
  explicit Mat(std::size_t side) : n(side), a(side * side) {}

  FieldElement& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  FieldElement operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  friend bool operator==(const Mat&, const Mat&) = default;
};

namespace mat {

inline Mat identity(const Field& F, std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = F.one();
  return m;
}

inline Mat from_ints(const Field& F, std::size_t n, std::initializer_list<std::int64_t> rows) {
  if (rows.size() != n * n) throw Error(ErrorKind::InvalidArgument, "entry count mismatch");
  Mat m(n);
  std::size_t k = 0;
  for (auto v : rows) m.a[k++] = F.from_int(v);
  return m;
}

inline bool is_identity(const Field& F, const Mat& m) {
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (m(i, j) != (i == j ? F.one() : F.zero())) return false;
  return true;
}

inline bool is_zero(const Mat& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](FieldElement x) { return x.code == 0; });
}

inline Mat mul(const Field& F, const Mat& x, const Mat& y) {
  const std::size_t n = x.n;
  Mat out(n);
  if (F.is_prime_field()) {
    const std::uint64_t ell = F.ell();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < n; ++k) s += std::uint64_t(x.a[i * n + k].code) * y.a[k * n + j].code;
        out.a[i * n + j] = {static_cast<std::uint32_t>(s % ell)};
      }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      FieldElement s = F.zero();
      for (std::size_t k = 0; k < n; ++k) s = F.add(s, F.mul(x.a[i * n + k], y.a[k * n + j]));
      out.a[i * n + j] = s;
    }
  return out;
}

inline Mat add(const Field& F, const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = F.add(x.a[i], y.a[i]);
  return out;
}

inline Mat sub(const Field& F, const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = F.sub(x.a[i], y.a[i]);
  return out;
}

inline Mat scale(const Field& F, FieldElement c, const Mat& x) {
  Mat out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = F.mul(c, x.a[i]);
  return out;
}

/// x*y - y*x.
inline Mat bracket(const Field& F, const Mat& x, const Mat& y) {
  return sub(F, mul(F, x, y), mul(F, y, x));
}

inline FieldElement trace(const Field& F, const Mat& x) {
  FieldElement s = F.zero();
  for (std::size_t i = 0; i < x.n; ++i) s = F.add(s, x(i, i));
  return s;
}

inline FieldElement det(const Field& F, Mat m) {
  const std::size_t n = m.n;
  FieldElement d = F.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).code == 0) ++p;
    if (p == n) return F.zero();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, m(c, c));
    FieldElement inv = F.inv(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      FieldElement factor = F.mul(m(r, c), inv);
      if (factor.code == 0) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) = F.sub(m(r, j), F.mul(factor, m(c, j)));
    }
  }
  return d;
}

inline Mat inverse(const Field& F, const Mat& x) {
  const std::size_t n = x.n;
  Mat m = x, inv = identity(F, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).code == 0) ++p;
    if (p == n) throw Error(ErrorKind::Singular, "matrix is not invertible");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(p, j), m(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    FieldElement s = F.inv(m(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) = F.mul(s, m(c, j));
      inv(c, j) = F.mul(s, inv(c, j));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c).code == 0) continue;
      FieldElement factor = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) = F.sub(m(r, j), F.mul(factor, m(c, j)));
        inv(r, j) = F.sub(inv(r, j), F.mul(factor, inv(c, j)));
      }
    }
  }
  return inv;
}

inline Mat pow(const Field& F, Mat base, std::uint64_t e) {
  Mat r = identity(F, base.n);
  while (e) {
    if (e & 1) r = mul(F, r, base);
    e >>= 1;
    if (e) base = mul(F, base, base);
  }
  return r;
}

/// Block-diagonal sum diag(x, y).
inline Mat direct_sum(const Mat& x, const Mat& y) {
  Mat out(x.n + y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j) out(i, j) = x(i, j);
  for (std::size_t i = 0; i < y.n; ++i)
    for (std::size_t j = 0; j < y.n; ++j) out(x.n + i, x.n + j) = y(i, j);
  return out;
}

}  // namespace mat

/// Least k >= 1 with m^k = 1. Throws Singular for non-invertible input and
/// Overflow when the order exceeds cap.
inline std::uint64_t mat_order(const Field& F, const Mat& m, std::uint64_t cap) {
  if (mat::det(F, m).code == 0) throw Error(ErrorKind::Singular, "mat_order of a singular matrix");
  Mat p = m;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    if (mat::is_identity(F, p)) return k;
    p = mat::mul(F, p, m);
  }
  throw Error(ErrorKind::Overflow, "matrix order exceeds cap " + std::to_string(cap));
}

/// f x f matrix over F_ell of multiplication by alpha in the power basis
/// 1, x, ..., x^{f-1}; column j holds the coordinates of alpha * x^j.
inline Mat multiplication_matrix(const Field& F, FieldElement alpha) {
  const std::size_t f = F.degree();
  Mat out(f);
  FieldElement basis = F.one();
  for (std::size_t j = 0; j < f; ++j) {
    auto c = F.coeffs(F.mul(alpha, basis));
    for (std::size_t i = 0; i < f; ++i) out(i, j) = {c[i]};
    basis = F.mul(basis, F.generator_x());
  }
  return out;
}

/// Restriction of scalars from F_{ell^f} to F_ell: each entry becomes its
/// f x f multiplication block. A ring homomorphism M_n(F_q) -> M_{nf}(F_ell).
inline Mat weil_restrict(const Field& F, const Mat& m) {
  const std::size_t f = F.degree();
  if (f == 1) return m;
  Mat out(m.n * f);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) {
      Mat block = multiplication_matrix(F, m(i, j));
      for (std::size_t r = 0; r < f; ++r)
        for (std::size_t c = 0; c < f; ++c) out(i * f + r, j * f + c) = block(r, c);
    }
  return out;
}

}  // namespace nori
