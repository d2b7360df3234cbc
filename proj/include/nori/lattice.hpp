#pragma once

// Lattices over the ell-adic integers for groups of rational matrices:
// stabilize a lattice, conjugate into integral form, reduce mod ell.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nori/error.hpp"
#include "nori/gf.hpp"
#include "nori/grp.hpp"

namespace nori {

using Rational = boost::multiprecision::cpp_rational;

/// Square matrix of exact rationals, row-major.
struct RationalMat {
  std::size_t n = 0;
  std::vector<Rational> a;

  RationalMat() = default;
  explicit RationalMat(std::size_t side) : n(side), a(side * side) {}

  Rational& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static RationalMat identity(std::size_t n) {
    RationalMat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  friend bool operator==(const RationalMat&, const RationalMat&) = default;
};

namespace rmat {

inline RationalMat mul(const RationalMat& x, const RationalMat& y) {
  RationalMat out(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < x.n; ++j) out(i, j) += x(i, k) * y(k, j);
    }
  return out;
}

inline RationalMat inverse(const RationalMat& x) {
  const std::size_t n = x.n;
  RationalMat m = x, inv = RationalMat::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) throw Error(ErrorKind::Singular, "rational matrix is singular");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(p, j), m(c, j));
      std::swap(inv(p, j), inv(c, j));
    }
    Rational s = 1 / m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) *= s;
      inv(c, j) *= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Rational k = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= k * m(c, j);
        inv(i, j) -= k * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace rmat

/// ell-adic valuation; zero has valuation "infinity", reported as INT32_MAX.
inline int valuation(const Rational& r, std::uint64_t ell) {
  if (r == 0) return INT32_MAX;
  auto count = [ell](BigInt v) {
    if (v < 0) v = -v;
    int k = 0;
    while (v % ell == 0) {
      v /= ell;
      ++k;
    }
    return k;
  };
  return count(boost::multiprecision::numerator(r)) - count(boost::multiprecision::denominator(r));
}

inline Rational ell_power(std::uint64_t ell, int k) {
  Rational r = 1;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) r *= ell;
  return k < 0 ? 1 / r : r;
}

namespace detail {

/// Canonical representative of a modulo ell^v Z_(ell): an ell-power
/// denominator fraction in [0, ell^v).
inline Rational residue_mod_power(const Rational& a, std::uint64_t ell, int v) {
  if (a == 0) return 0;
  int w = valuation(a, ell);
  if (w >= v) return 0;
  Rational unit = a / ell_power(ell, w);
  BigInt modulus = 1;
  for (int i = 0; i < v - w; ++i) modulus *= ell;
  BigInt num = boost::multiprecision::numerator(unit) % modulus;
  BigInt den = boost::multiprecision::denominator(unit) % modulus;
  if (num < 0) num += modulus;
  // den is a unit mod ell^(v-w); invert by extended Euclid.
  BigInt r0 = modulus, r1 = den, t0 = 0, t1 = 1;
  while (r1 != 0) {
    BigInt qt = r0 / r1;
    BigInt r2 = r0 - qt * r1;
    r0 = r1;
    r1 = r2;
    BigInt t2 = t0 - qt * t1;
    t0 = t1;
    t1 = t2;
  }
  if (t0 < 0) t0 += modulus;
  BigInt rep = (num * t0) % modulus;
  return Rational(rep) * ell_power(ell, w);
}

}  // namespace detail

/// Hermite form over Z_(ell) of the lattice spanned by the given column
/// vectors: lower triangular, diagonal entries ell^k, entries left of a
/// diagonal entry reduced modulo it. Requires the columns to span Q^n.
inline RationalMat ell_hermite_form(std::vector<std::vector<Rational>> cols, std::size_t n, std::uint64_t ell) {
  RationalMat h(n);
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t best = cols.size();
    int best_v = INT32_MAX;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      int v = valuation(cols[c][row], ell);
      if (v < best_v) {
        best_v = v;
        best = c;
      }
    }
    if (best == cols.size()) throw Error(ErrorKind::Singular, "lattice generators do not span");
    std::vector<Rational> pivot = std::move(cols[best]);
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best));
    Rational scale = ell_power(ell, best_v) / pivot[row];  // a unit of Z_(ell)
    for (auto& e : pivot) e *= scale;
    for (auto& c : cols) {
      if (c[row] == 0) continue;
      Rational k = c[row] / pivot[row];
      for (std::size_t i = row; i < n; ++i) c[i] -= k * pivot[i];
    }
    for (std::size_t i = 0; i < n; ++i) h(i, row) = pivot[i];
  }
  // Reduce below-diagonal entries: row i of column j < i modulo h(i, i).
  for (std::size_t i = 1; i < n; ++i) {
    int v = valuation(h(i, i), ell);
    for (std::size_t j = 0; j < i; ++j) {
      Rational target = detail::residue_mod_power(h(i, j), ell, v);
      Rational k = (h(i, j) - target) / h(i, i);  // in Z_(ell)
      if (k == 0) continue;
      for (std::size_t r = i; r < n; ++r) h(r, j) -= k * h(r, i);
    }
  }
  return h;
}

struct StabilizedLattice {
  RationalMat basis;                   // columns span the stable lattice
  std::vector<RationalMat> integral;   // basis^-1 g basis
  unsigned iterations = 0;             // lattice updates including the final check
};

/// Iterates L <- L + sum g L from the standard lattice until it is stable.
/// Raises NonCompact when it has not settled after max_iter rounds or the
/// spread of diagonal valuations exceeds n * max_iter.
inline StabilizedLattice stabilize_lattice(const std::vector<RationalMat>& gens, std::uint64_t ell, unsigned max_iter) {
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  if (!is_prime(ell)) throw Error(ErrorKind::NotPrime, std::to_string(ell) + " is not prime");
  const std::size_t n = gens[0].n;
  for (const auto& g : gens) {
    if (g.n != n) throw Error(ErrorKind::InvalidArgument, "generators have different sides");
    (void)rmat::inverse(g);  // rejects singular generators
  }
  RationalMat basis = RationalMat::identity(n);
  for (unsigned it = 1; it <= max_iter; ++it) {
    std::vector<std::vector<Rational>> cols;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = basis(i, j);
      cols.push_back(std::move(c));
    }
    for (const auto& g : gens) {
      RationalMat gb = rmat::mul(g, basis);
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = gb(i, j);
        cols.push_back(std::move(c));
      }
    }
    RationalMat next = ell_hermite_form(std::move(cols), n, ell);
    int lo = INT32_MAX, hi = INT32_MIN;
    for (std::size_t i = 0; i < n; ++i) {
      int v = valuation(next(i, i), ell);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (static_cast<long>(hi) - lo > static_cast<long>(n) * max_iter)
      throw Error(ErrorKind::NonCompact, "lattice valuations diverge");
    if (next == basis) {
      StabilizedLattice out{basis, {}, it};
      RationalMat inv = rmat::inverse(basis);
      for (const auto& g : gens) out.integral.push_back(rmat::mul(rmat::mul(inv, g), basis));
      return out;
    }
    basis = std::move(next);
  }
  throw Error(ErrorKind::NonCompact, "no stable lattice after " + std::to_string(max_iter) + " iterations");
}

/// Entrywise reduction a/b -> a * b^-1 mod ell.
inline GroupInstance reduce_mod_ell(const std::vector<RationalMat>& gens, std::uint64_t ell) {
  FieldPtr F = make_field(static_cast<std::uint32_t>(ell), 1);
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  std::vector<Mat> out;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Mat m(gens[g].n);
    for (std::size_t k = 0; k < m.a.size(); ++k) {
      const Rational& r = gens[g].a[k];
      if (valuation(r, ell) < 0)
        throw Error(ErrorKind::NotIntegral, "generator " + std::to_string(g) + " entry " + std::to_string(k) +
                                                " has negative valuation");
      BigInt num = boost::multiprecision::numerator(r) % ell;
      BigInt den = boost::multiprecision::denominator(r) % ell;
      FieldElement e = F->mul(F->from_int(static_cast<std::int64_t>(num)), F->inv(F->from_int(static_cast<std::int64_t>(den))));
      m.a[k] = e;
    }
    if (mat::det(*F, m).code == 0)
      throw Error(ErrorKind::SingularReduction, "generator " + std::to_string(g) + " is singular mod " + std::to_string(ell));
    out.push_back(std::move(m));
  }
  return make_instance(F, gens[0].n, std::move(out));
}

}  // namespace nori
