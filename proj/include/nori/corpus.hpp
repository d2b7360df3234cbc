#pragma once

// Standard generating sets and the built-in instance corpus.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nori/ambient.hpp"
#include "nori/gf.hpp"
#include "nori/grp.hpp"

namespace nori::corpus {

/// I + t E_ij.
inline Mat elementary(const Field& F, std::size_t n, std::size_t i, std::size_t j, FieldElement t) {
  Mat m = mat::identity(F, n);
  m(i, j) = t;
  return m;
}

inline Mat diagonal(const Field& F, std::initializer_list<std::int64_t> d) {
  Mat m(d.size());
  std::size_t i = 0;
  for (auto x : d) {
    m(i, i) = F.from_int(x);
    ++i;
  }
  return m;
}

inline AmbientSpec ambient(FieldPtr F, std::vector<LieTypeTag> factors, unsigned radical_dim = 0) {
  return {std::move(factors), true, std::move(F), radical_dim};
}

inline LieTypeTag A(unsigned n) { return {Family::A, n}; }
inline LieTypeTag C(unsigned n) { return {Family::C, n}; }

/// SL_m(F_q): transvections I + t E_{i,i+1}, I + t E_{i+1,i} for t = 1 and,
/// over an extension, t = x.
inline GroupInstance special_linear(FieldPtr F, std::size_t m) {
  std::vector<Mat> gens;
  std::vector<FieldElement> ts{F->one()};
  if (!F->is_prime_field()) ts.push_back(F->generator_x());
  for (auto t : ts)
    for (std::size_t i = 0; i + 1 < m; ++i) {
      gens.push_back(elementary(*F, m, i, i + 1, t));
      gens.push_back(elementary(*F, m, i + 1, i, t));
    }
  auto amb = ambient(F, {A(static_cast<unsigned>(m - 1))});
  return make_instance(std::move(F), m, std::move(gens), amb);
}

/// A generator of F_ell^x.
inline std::int64_t primitive_root(const Field& F) {
  for (std::int64_t g = 2;; ++g)
    if (mat_order(F, diagonal(F, {g}), F.ell()) == F.ell() - 1) return g;
}

/// Diagonal torus of SL_m over the prime field.
inline GroupInstance torus(FieldPtr F, std::size_t m) {
  const std::int64_t g = primitive_root(*F);
  const std::int64_t ginv = F->inv(F->from_int(g)).code;
  std::vector<Mat> gens;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    Mat d = mat::identity(*F, m);
    d(i, i) = F->from_int(g);
    d(i + 1, i + 1) = F->from_int(ginv);
    gens.push_back(d);
  }
  auto amb = ambient(F, {A(static_cast<unsigned>(m - 1))});
  return make_instance(std::move(F), m, std::move(gens), amb);
}

/// Upper unitriangular matrices.
inline GroupInstance unipotent(FieldPtr F, std::size_t m) {
  std::vector<Mat> gens;
  for (std::size_t i = 0; i + 1 < m; ++i) gens.push_back(elementary(*F, m, i, i + 1, F->one()));
  auto amb = ambient(F, {A(static_cast<unsigned>(m - 1))});
  return make_instance(std::move(F), m, std::move(gens), amb);
}

/// Upper triangular matrices of determinant one.
inline GroupInstance borel(FieldPtr F, std::size_t m) {
  GroupInstance u = unipotent(F, m);
  GroupInstance t = torus(F, m);
  for (auto& g : t.generators) u.generators.push_back(g);
  return u;
}

/// Symmetric square of a 2 x 2 matrix on the basis x^2, xy, y^2.
inline Mat sym2(const Field& F, const Mat& g) {
  auto a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  auto two = F.from_int(2);
  Mat s(3);
  s(0, 0) = F.mul(a, a);
  s(0, 1) = F.mul(a, b);
  s(0, 2) = F.mul(b, b);
  s(1, 0) = F.mul(two, F.mul(a, c));
  s(1, 1) = F.add(F.mul(a, d), F.mul(b, c));
  s(1, 2) = F.mul(two, F.mul(b, d));
  s(2, 0) = F.mul(c, c);
  s(2, 1) = F.mul(c, d);
  s(2, 2) = F.mul(d, d);
  return s;
}

/// Image of SL_2 under its three-dimensional irreducible representation.
inline GroupInstance principal_sl2(FieldPtr F) {
  GroupInstance sl2 = special_linear(F, 2);
  std::vector<Mat> gens;
  for (const auto& g : sl2.generators) gens.push_back(sym2(*F, g));
  return make_instance(F, 3, std::move(gens), ambient(F, {A(2)}));
}

/// SL_2 x SL_2 as block-diagonal matrices in SL_4.
inline GroupInstance block_sl2_sl2(FieldPtr F) {
  GroupInstance s = special_linear(F, 2);
  GroupInstance p = direct_product(s, s);
  p.ambient = ambient(F, {A(1), A(1)});
  return p;
}

/// SL_2 in the upper-left corner of SL_m.
inline GroupInstance corner_sl2(FieldPtr F, std::size_t m) {
  std::vector<Mat> gens{elementary(*F, m, 0, 1, F->one()), elementary(*F, m, 1, 0, F->one())};
  return make_instance(F, m, std::move(gens), ambient(F, {A(static_cast<unsigned>(m - 1))}));
}

/// Stabilizer of the hyperplane spanned by e_1..e_{m-1} (row action):
/// SL_{m-1} corner, the last column, and the torus.
inline GroupInstance parabolic(FieldPtr F, std::size_t m) {
  std::vector<Mat> gens;
  for (std::size_t i = 0; i + 2 < m; ++i) {
    gens.push_back(elementary(*F, m, i, i + 1, F->one()));
    gens.push_back(elementary(*F, m, i + 1, i, F->one()));
  }
  gens.push_back(elementary(*F, m, m - 2, m - 1, F->one()));
  for (auto& d : torus(F, m).generators) gens.push_back(d);
  return make_instance(F, m, std::move(gens), ambient(F, {A(static_cast<unsigned>(m - 1))}));
}

/// Levi factor S(GL_{m-1} x GL_1) of the parabolic above.
inline GroupInstance levi(FieldPtr F, std::size_t m) {
  std::vector<Mat> gens;
  for (std::size_t i = 0; i + 2 < m; ++i) {
    gens.push_back(elementary(*F, m, i, i + 1, F->one()));
    gens.push_back(elementary(*F, m, i + 1, i, F->one()));
  }
  for (auto& d : torus(F, m).generators) gens.push_back(d);
  return make_instance(F, m, std::move(gens), ambient(F, {A(static_cast<unsigned>(m - 1))}));
}

/// Sp_4 for the form with Gram matrix [[0, I], [-I, 0]]: long root elements
/// [[I, E11], [0, I]] and its transpose, short root elements
/// diag(A, A^-T) with A = I + E12 and its transpose.
inline GroupInstance symplectic4(FieldPtr F) {
  const Field& K = *F;
  auto one = K.one();
  auto neg = K.neg(one);
  Mat x = elementary(K, 4, 0, 2, one);
  Mat y = elementary(K, 4, 2, 0, one);
  Mat s = mat::identity(K, 4);
  s(0, 1) = one;
  s(3, 2) = neg;
  Mat t = mat::identity(K, 4);
  t(1, 0) = one;
  t(2, 3) = neg;
  return make_instance(F, 4, {x, y, s, t}, ambient(F, {C(2)}));
}

/// Symmetric group S_3 as permutation matrices.
inline GroupInstance permutation_s3(FieldPtr F) {
  Mat swap = mat::from_ints(*F, 3, {0, 1, 0, 1, 0, 0, 0, 0, 1});
  Mat cycle = mat::from_ints(*F, 3, {0, 1, 0, 0, 0, 1, 1, 0, 0});
  return make_instance(F, 3, {swap, cycle});
}

/// g with every generator conjugated by c.
inline GroupInstance conjugate(const GroupInstance& g, const Mat& c) {
  GroupInstance out = g;
  Mat ci = mat::inverse(*g.field, c);
  for (auto& x : out.generators) x = mat::mul(*g.field, mat::mul(*g.field, ci, x), c);
  return out;
}

/// Uniform element of SL_m(F) by rejection from random matrices.
template <class Rng>
Mat random_sl(const Field& F, std::size_t m, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, F.size() - 1);
  for (;;) {
    Mat x(m);
    for (auto& e : x.a) e.code = pick(rng);
    FieldElement d = mat::det(F, x);
    if (d.code == 0) continue;
    FieldElement di = F.inv(d);
    for (std::size_t j = 0; j < m; ++j) x(0, j) = F.mul(x(0, j), di);
    return x;
  }
}

template <class Rng>
Mat random_element(const GroupInstance& g, Rng& rng, std::size_t length = 32) {
  std::uniform_int_distribution<std::size_t> pick(0, g.generators.size() - 1);
  Mat x = mat::identity(*g.field, g.n);
  for (std::size_t k = 0; k < length; ++k) x = mat::mul(*g.field, x, g.generators[pick(rng)]);
  return x;
}

enum class Role { Full, Solvable, Proper, Other };

struct Entry {
  std::string name;
  GroupInstance group;
  Role role;
  unsigned ambient_rank;  // rank of the SL_m (or Sp_4) containing it
};

inline std::vector<Entry> standard_corpus(std::uint32_t ell) {
  FieldPtr F = make_field(ell, 1);
  std::string suffix = "(F_" + std::to_string(ell) + ")";
  std::vector<Entry> out;
  out.push_back({"SL_2" + suffix, special_linear(F, 2), Role::Full, 1});
  out.push_back({"SL_3" + suffix, special_linear(F, 3), Role::Full, 2});
  for (std::size_t m : {2, 3}) {
    std::string tag = "SL_" + std::to_string(m);
    out.push_back({"Borel of " + tag + suffix, borel(F, m), Role::Solvable, unsigned(m - 1)});
    out.push_back({"torus of " + tag + suffix, torus(F, m), Role::Solvable, unsigned(m - 1)});
    out.push_back({"unipotent of " + tag + suffix, unipotent(F, m), Role::Solvable, unsigned(m - 1)});
  }
  out.push_back({"principal SL_2 in SL_3" + suffix, principal_sl2(F), Role::Proper, 2});
  out.push_back({"corner SL_2 in SL_3" + suffix, corner_sl2(F, 3), Role::Proper, 2});
  out.push_back({"parabolic of SL_3" + suffix, parabolic(F, 3), Role::Proper, 2});
  out.push_back({"Levi of SL_3" + suffix, levi(F, 3), Role::Proper, 2});
  out.push_back({"SL_2 x SL_2 in SL_4" + suffix, block_sl2_sl2(F), Role::Proper, 3});
  out.push_back({"corner SL_2 in SL_4" + suffix, corner_sl2(F, 4), Role::Proper, 3});
  FieldPtr F2 = make_field(ell, 2);
  GroupInstance ext = special_linear(F2, 2);
  GroupInstance res = weil_restrict(ext);
  out.push_back({"Weil restriction of SL_2(F_" + std::to_string(ell) + "^2)", res, Role::Full, 2});
  return out;
}

}  // namespace nori::corpus
