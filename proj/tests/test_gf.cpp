#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "nori/gf.hpp"

using namespace nori;

namespace {

using Poly = std::vector<std::int64_t>;  // low degree first

// Schoolbook product reduced by a monic modulus, all mod ell.
Poly poly_mulmod(const Poly& a, const Poly& b, const std::vector<std::uint32_t>& m, std::int64_t ell) {
  const std::size_t f = m.size() - 1;
  Poly prod(2 * f, 0);
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % ell;
  for (std::size_t k = prod.size(); k-- > f;) {
    std::int64_t c = prod[k];
    if (!c) continue;
    for (std::size_t i = 0; i <= f; ++i) prod[k - f + i] = ((prod[k - f + i] - c * m[i]) % ell + ell) % ell;
  }
  prod.resize(f);
  return prod;
}

bool has_root(const Poly& p, std::int64_t ell) {
  for (std::int64_t x = 0; x < ell; ++x) {
    std::int64_t v = 0;
    for (std::size_t k = p.size(); k-- > 0;) v = (v * x + p[k]) % ell;
    if (v == 0) return true;
  }
  return false;
}

// First monic polynomial of degree 2 or 3, in base-ell index order with the
// constant term least significant, that has no root (hence is irreducible).
Poly first_rootless(std::int64_t ell, unsigned f) {
  std::int64_t count = 1;
  for (unsigned i = 0; i < f; ++i) count *= ell;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    Poly p(f + 1, 0);
    std::int64_t r = idx;
    for (unsigned i = 0; i < f; ++i, r /= ell) p[i] = r % ell;
    p[f] = 1;
    if (!has_root(p, ell)) return p;
  }
  return {};
}

Mat random_mat(const Field& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, F.size() - 1);
  Mat m(n);
  for (auto& e : m.a) e.code = pick(rng);
  return m;
}

}  // namespace

TEST(MakeField, PrimeFieldModulusIsX) {
  auto F = make_field(7, 1);
  EXPECT_EQ(F->modulus(), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(F->size(), 7u);
}

TEST(MakeField, QuadraticModuli) {
  // x^2 + c over F_5 is reducible for c = 0, 1 and irreducible for c = 2.
  EXPECT_TRUE(has_root({0, 0, 1}, 5));
  EXPECT_TRUE(has_root({1, 0, 1}, 5));
  EXPECT_FALSE(has_root({2, 0, 1}, 5));
  EXPECT_EQ(make_field(5, 2)->modulus(), (std::vector<std::uint32_t>{2, 0, 1}));

  // -1 is a non-square mod 7.
  std::vector<bool> square(7, false);
  for (int x = 0; x < 7; ++x) square[x * x % 7] = true;
  EXPECT_FALSE(square[6]);
  EXPECT_EQ(make_field(7, 2)->modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(MakeField, ModulusMatchesRootlessSearch) {
  for (std::uint32_t ell : {5u, 7u, 11u, 13u})
    for (unsigned f : {2u, 3u}) {
      Poly want = first_rootless(ell, f);
      auto got = make_field(ell, f)->modulus();
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(got[i], want[i]) << ell << "^" << f;
    }
}

TEST(MakeField, Deterministic) {
  for (unsigned f = 1; f <= 4; ++f) EXPECT_EQ(make_field(5, f)->modulus(), make_field(5, f)->modulus());
}

TEST(MakeField, Errors) {
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind([] { make_field(9, 1); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind([] { make_field(3, 1); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind([] { make_field(2, 2); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind([] { make_field(7, 0); }), ErrorKind::DegreeZero);
  EXPECT_NO_THROW(Field::make_small_char(3, 2));
}

class FieldAxioms : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(FieldAxioms, ExhaustivePairs) {
  auto [ell, f] = GetParam();
  auto F = make_field(ell, f);
  const std::uint32_t q = F->size();
  ASSERT_LE(q, 2500u);
  auto as_poly = [&](FieldElement a) {
    auto c = F->coeffs(a);
    return Poly(c.begin(), c.end());
  };
  for (std::uint32_t i = 0; i < q; ++i) {
    FieldElement a{i};
    EXPECT_EQ(F->add(a, F->neg(a)), F->zero());
    EXPECT_EQ(F->mul(a, F->one()), a);
    if (i) {
      EXPECT_EQ(F->mul(a, F->inv(a)), F->one());
      EXPECT_EQ(F->pow(a, q - 1), F->one());
    }
    Poly pa = as_poly(a);
    for (std::uint32_t j = 0; j < q; ++j) {
      FieldElement b{j};
      FieldElement ab = F->mul(a, b);
      ASSERT_EQ(ab, F->mul(b, a));
      ASSERT_EQ(F->add(a, b), F->add(b, a));
      if (f > 1) {
        Poly want = poly_mulmod(pa, as_poly(b), F->modulus(), ell);
        Poly got = as_poly(ab);
        ASSERT_EQ(got, want) << i << " * " << j;
      } else {
        ASSERT_EQ(ab.code, std::uint64_t(i) * j % ell);
      }
    }
  }
  std::mt19937_64 rng(ell * 131 + f);
  std::uniform_int_distribution<std::uint32_t> pick(0, q - 1);
  for (int k = 0; k < 20000; ++k) {
    FieldElement a{pick(rng)}, b{pick(rng)}, c{pick(rng)};
    ASSERT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
    ASSERT_EQ(F->mul(F->mul(a, b), c), F->mul(a, F->mul(b, c)));
    ASSERT_EQ(F->add(F->add(a, b), c), F->add(a, F->add(b, c)));
  }
}

INSTANTIATE_TEST_SUITE_P(SmallFields, FieldAxioms,
                         ::testing::Values(std::pair{5u, 1u}, std::pair{7u, 1u}, std::pair{5u, 2u}, std::pair{7u, 2u},
                                           std::pair{11u, 2u}, std::pair{5u, 3u}, std::pair{7u, 3u}, std::pair{5u, 4u},
                                           std::pair{13u, 3u}, std::pair{47u, 2u}));

TEST(FieldAxioms, SampledLargeFields) {
  for (auto [ell, f] : {std::pair{7u, 5u}, std::pair{101u, 2u}, std::pair{1009u, 1u}, std::pair{5u, 8u}}) {
    auto F = make_field(ell, f);
    std::mt19937_64 rng(ell + f);
    std::uniform_int_distribution<std::uint32_t> pick(1, F->size() - 1);
    for (int k = 0; k < 2000; ++k) {
      FieldElement a{pick(rng)}, b{pick(rng)};
      ASSERT_EQ(F->pow(a, F->size() - 1), F->one());
      ASSERT_EQ(F->mul(F->mul(a, b), F->inv(b)), a);
    }
  }
}

TEST(MatOrder, Examples) {
  auto F = make_field(7, 1);
  EXPECT_EQ(mat_order(*F, mat::identity(*F, 2), 10), 1u);
  EXPECT_EQ(mat_order(*F, mat::from_ints(*F, 2, {1, 1, 0, 1}), 100), 7u);
  // Direct powering of 3 in F_7^x.
  int k = 1;
  for (int p = 3; p != 1; p = p * 3 % 7) ++k;
  EXPECT_EQ(k, 6);
  EXPECT_EQ(mat_order(*F, mat::from_ints(*F, 2, {3, 0, 0, 1}), 100), 6u);
}

TEST(MatOrder, Errors) {
  auto F = make_field(7, 1);
  EXPECT_THROW(mat_order(*F, mat::from_ints(*F, 2, {1, 1, 1, 1}), 10), Error);
  try {
    mat_order(*F, mat::from_ints(*F, 2, {1, 1, 0, 1}), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(WeilRestrict, PrimeFieldUnchanged) {
  auto F = make_field(7, 1);
  Mat m = mat::from_ints(*F, 2, {1, 2, 3, 4});
  EXPECT_EQ(weil_restrict(*F, m), m);
}

TEST(WeilRestrict, CompanionOfX) {
  auto F = make_field(5, 2);
  Mat a(1);
  a(0, 0) = F->generator_x();
  auto P = F->prime_field();
  // x * 1 = x and x * x = -2 = 3.
  EXPECT_EQ(weil_restrict(*F, a), mat::from_ints(*P, 2, {0, 3, 1, 0}));
}

TEST(WeilRestrict, RingHomomorphism) {
  for (auto [ell, f] : {std::pair{5u, 2u}, std::pair{7u, 2u}, std::pair{5u, 3u}}) {
    auto F = make_field(ell, f);
    auto P = F->prime_field();
    std::mt19937_64 rng(ell * 10 + f);
    for (int k = 0; k < 100; ++k) {
      Mat a = random_mat(*F, 2, rng), b = random_mat(*F, 2, rng);
      Mat ra = weil_restrict(*F, a), rb = weil_restrict(*F, b);
      ASSERT_EQ(weil_restrict(*F, mat::mul(*F, a, b)), mat::mul(*P, ra, rb));
      ASSERT_EQ(weil_restrict(*F, mat::add(*F, a, b)), mat::add(*P, ra, rb));
      if (!(a == b)) ASSERT_FALSE(ra == rb);
      if (mat::det(*F, a).code) ASSERT_EQ(weil_restrict(*F, mat::inverse(*F, a)), mat::inverse(*P, ra));
    }
    EXPECT_EQ(weil_restrict(*F, mat::identity(*F, 3)), mat::identity(*P, 3 * f));
  }
}

TEST(Mat, InverseAndDeterminant) {
  auto F = make_field(11, 1);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    Mat a = random_mat(*F, 3, rng), b = random_mat(*F, 3, rng);
    ASSERT_EQ(mat::det(*F, mat::mul(*F, a, b)), F->mul(mat::det(*F, a), mat::det(*F, b)));
    if (mat::det(*F, a).code) ASSERT_TRUE(mat::is_identity(*F, mat::mul(*F, a, mat::inverse(*F, a))));
  }
}
