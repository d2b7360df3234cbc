#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nori/corpus.hpp"
#include "nori/grp.hpp"
#include "nori/liealg.hpp"

using namespace nori;

namespace {

Mat E(const Field& F, std::size_t n, std::size_t i, std::size_t j) {
  Mat m(n);
  m(i, j) = F.one();
  return m;
}

Mat random_strict_upper(const Field& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, F.size() - 1);
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = {pick(rng)};
  return m;
}

// Rank of a list of vectors by plain Gaussian elimination.
std::size_t rank_of(const Field& F, std::vector<std::vector<FieldElement>> rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].code == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    FieldElement inv = F.inv(rows[r][c]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].code == 0) continue;
      FieldElement f = F.mul(rows[i][c], inv);
      for (std::size_t k = 0; k < cols; ++k) rows[i][k] = F.sub(rows[i][k], F.mul(f, rows[r][k]));
    }
    ++r;
  }
  return r;
}

// dim of the centralizer of x inside span(basis), straight from matrix
// brackets.
std::size_t centralizer_dim(const Field& F, const std::vector<Mat>& basis, const Mat& x) {
  std::vector<std::vector<FieldElement>> images;
  for (const auto& b : basis) images.push_back(mat::bracket(F, x, b).a);
  return basis.size() - rank_of(F, images);
}

std::vector<Mat> sl2_basis(const Field& F) {
  Mat h(2);
  h(0, 0) = F.one();
  h(1, 1) = F.neg(F.one());
  return {E(F, 2, 0, 1), h, E(F, 2, 1, 0)};
}

}  // namespace

TEST(NilExp, Examples) {
  auto F7 = make_field(7, 1), F5 = make_field(5, 1);
  EXPECT_EQ(nil_exp(*F7, Mat(3)), mat::identity(*F7, 3));
  EXPECT_EQ(nil_exp(*F7, E(*F7, 2, 0, 1)), mat::from_ints(*F7, 2, {1, 1, 0, 1}));
  Mat x = mat::add(*F5, E(*F5, 3, 0, 1), E(*F5, 3, 1, 2));
  // 1 + x + x^2 / 2 with x^2 = E_13 and 1/2 = 3 mod 5.
  EXPECT_EQ(F5->inv(F5->from_int(2)).code, 3u);
  EXPECT_EQ(nil_exp(*F5, x), mat::from_ints(*F5, 3, {1, 1, 3, 0, 1, 1, 0, 0, 1}));
}

TEST(NilExp, Errors) {
  auto F5 = make_field(5, 1);
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind([&] { nil_exp(*F5, mat::identity(*F5, 2)); }), ErrorKind::NotNilpotent);
  EXPECT_EQ(kind([&] { nil_exp(*F5, Mat(5)); }), ErrorKind::CharTooSmall);
  EXPECT_EQ(kind([&] { nil_log(*F5, mat::from_ints(*F5, 2, {2, 0, 0, 3})); }), ErrorKind::NotUnipotent);
  EXPECT_EQ(kind([&] { nil_log(*F5, mat::identity(*F5, 6)); }), ErrorKind::CharTooSmall);
}

TEST(NilLog, Examples) {
  auto F7 = make_field(7, 1);
  EXPECT_TRUE(mat::is_zero(nil_log(*F7, mat::identity(*F7, 3))));
  EXPECT_EQ(nil_log(*F7, mat::from_ints(*F7, 2, {1, 1, 0, 1})), E(*F7, 2, 0, 1));
}

TEST(NilLog, RoundTripM4F11) {
  auto F = make_field(11, 1);
  std::mt19937_64 rng(200);
  for (int k = 0; k < 200; ++k) {
    Mat x = random_strict_upper(*F, 4, rng);
    Mat u = nil_exp(*F, x);
    ASSERT_EQ(nil_log(*F, u), x);
    ASSERT_EQ(nil_exp(*F, nil_log(*F, u)), u);
  }
}

TEST(NilExp, RoundTripOnConjugatedNilpotents) {
  for (std::uint32_t ell : {5u, 7u, 13u}) {
    auto F = make_field(ell, 1);
    std::mt19937_64 rng(ell);
    for (int k = 0; k < 50; ++k) {
      Mat c = corpus::random_sl(*F, 3, rng);
      Mat ci = mat::inverse(*F, c);
      Mat x = mat::mul(*F, mat::mul(*F, ci, random_strict_upper(*F, 3, rng)), c);
      ASSERT_EQ(nil_log(*F, nil_exp(*F, x)), x);
    }
  }
}

TEST(NilExp, OneParameterLaw) {
  for (std::uint32_t ell : {5u, 7u, 11u, 13u}) {
    auto F = make_field(ell, 1);
    std::mt19937_64 rng(ell * 3);
    for (int k = 0; k < 5; ++k) {
      Mat x = random_strict_upper(*F, 4 < ell ? 4 : 3, rng);
      for (std::uint32_t s = 0; s < ell; ++s)
        for (std::uint32_t t = 0; t < ell; ++t)
          ASSERT_EQ(mat::mul(*F, nil_exp(*F, x, {s}), nil_exp(*F, x, {t})), nil_exp(*F, x, F->add({s}, {t})));
    }
  }
}

TEST(NilExp, NonzeroGivesOrderEll) {
  auto F = make_field(7, 1);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    Mat x = random_strict_upper(*F, 3, rng);
    if (mat::is_zero(x)) continue;
    EXPECT_EQ(mat_order(*F, nil_exp(*F, x, F->from_int(1 + k % 6)), 100), 7u);
  }
}

TEST(BracketClosure, Examples) {
  auto F7 = make_field(7, 1);
  std::vector<Mat> e{E(*F7, 2, 0, 1)};
  EXPECT_EQ(bracket_closure(F7, 2, e).dim(), 1u);
  std::vector<Mat> ef{E(*F7, 2, 0, 1), E(*F7, 2, 1, 0)};
  LieAlgebraBasis sl2 = bracket_closure(F7, 2, ef);
  EXPECT_EQ(sl2.dim(), 3u);
  for (const auto& b : sl2.basis) EXPECT_EQ(mat::trace(*F7, b).code, 0u);
  EXPECT_TRUE(is_bracket_closed(sl2));
}

TEST(BracketClosure, LogsOfSL3F5) {
  auto F = make_field(5, 1);
  EnumeratedGroup e = enumerate(corpus::special_linear(F, 3));
  std::vector<Mat> logs;
  for (auto c : order_ell_elements(e, 5)) logs.push_back(nil_log(*F, e.codec().decode(c)));
  LieAlgebraBasis L = bracket_closure(F, 3, logs);
  EXPECT_EQ(L.dim(), 8u);
  EXPECT_TRUE(is_bracket_closed(L));
}

TEST(BracketClosure, IndependentOfSeedOrder) {
  auto F = make_field(7, 1);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    std::vector<Mat> seed;
    for (int i = 0; i < 3; ++i) seed.push_back(random_strict_upper(*F, 3, rng));
    Mat c = corpus::random_sl(*F, 3, rng);
    seed.push_back(mat::mul(*F, mat::mul(*F, mat::inverse(*F, c), E(*F, 3, 2, 0)), c));
    LieAlgebraBasis a = bracket_closure(F, 3, seed);
    std::shuffle(seed.begin(), seed.end(), rng);
    LieAlgebraBasis b = bracket_closure(F, 3, seed);
    EXPECT_EQ(a.basis, b.basis);
    EXPECT_TRUE(is_bracket_closed(a));
  }
}

TEST(BracketClosure, ConjugationInvariantDimension) {
  auto F = make_field(11, 1);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    std::vector<Mat> seed{random_strict_upper(*F, 4, rng), E(*F, 4, 3, 1)};
    if (k % 3 == 0) seed.push_back(E(*F, 4, 1, 0));
    Mat c = corpus::random_sl(*F, 4, rng), ci = mat::inverse(*F, c);
    std::vector<Mat> conj;
    for (const auto& s : seed) conj.push_back(mat::mul(*F, mat::mul(*F, ci, s), c));
    EXPECT_EQ(bracket_closure(F, 4, seed).dim(), bracket_closure(F, 4, conj).dim());
  }
}

TEST(Killing, Sl2GramDeterminant) {
  auto F = make_field(7, 1);
  auto basis = sl2_basis(*F);
  // Independent Gram matrix in the basis e, h, f: ad matrices from matrix
  // brackets, coordinates read off entries (0,1), (0,0), (1,0).
  auto coords = [&](const Mat& m) { return std::vector<FieldElement>{m(0, 1), m(0, 0), m(1, 0)}; };
  std::vector<Mat> ad;
  for (const auto& x : basis) {
    Mat a(3);
    for (std::size_t j = 0; j < 3; ++j) {
      auto c = coords(mat::bracket(*F, x, basis[j]));
      for (std::size_t i = 0; i < 3; ++i) a(i, j) = c[i];
    }
    ad.push_back(a);
  }
  Mat gram(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) gram(i, j) = mat::trace(*F, mat::mul(*F, ad[i], ad[j]));
  EXPECT_EQ(gram, mat::from_ints(*F, 3, {0, 0, 4, 0, 8, 0, 4, 0, 0}));
  EXPECT_EQ(mat::det(*F, gram), F->from_int(-128));
  EXPECT_EQ(F->from_int(-128).code, 5u);

  // The library's Gram matrix uses the echelon basis h, e, f: a permutation
  // of e, h, f, so the determinant is unchanged.
  LieAlgebraBasis L = bracket_closure(F, 2, basis);
  auto g = killing_gram(L);
  Mat lg(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) lg(i, j) = g[i][j];
  EXPECT_EQ(mat::det(*F, lg).code, 5u);
  EXPECT_EQ(killing_radical_quotient(L).dim(), 3u);
}

TEST(Killing, HeisenbergQuotientIsZero) {
  auto F = make_field(7, 1);
  std::vector<Mat> seed{E(*F, 3, 0, 1), E(*F, 3, 1, 2)};
  LieAlgebraBasis L = bracket_closure(F, 3, seed);
  EXPECT_EQ(L.dim(), 3u);
  for (const auto& row : killing_gram(L))
    for (auto v : row) EXPECT_EQ(v.code, 0u);
  EXPECT_EQ(killing_radical_quotient(L).dim(), 0u);
}

TEST(Killing, ZeroAlgebra) {
  auto F = make_field(7, 1);
  LieAlgebraBasis Z{F, 2, {}, {}};
  EXPECT_EQ(killing_radical_quotient(Z).dim(), 0u);
  EXPECT_EQ(lie_rank(Z).rank, 0u);
}

TEST(Killing, Idempotent) {
  auto F = make_field(11, 1);
  std::vector<std::vector<Mat>> seeds{
      {E(*F, 3, 0, 1), E(*F, 3, 1, 0), E(*F, 3, 0, 2)},                  // parabolic-like
      {E(*F, 3, 0, 1), E(*F, 3, 1, 0), E(*F, 3, 1, 2), E(*F, 3, 2, 1)},  // sl3
      {E(*F, 3, 0, 1), E(*F, 3, 1, 2)},
  };
  for (const auto& s : seeds) {
    LieAlgebraBasis q1 = killing_radical_quotient(bracket_closure(F, 3, s));
    LieAlgebraBasis q2 = killing_radical_quotient(q1);
    EXPECT_EQ(q1.dim(), q2.dim());
    EXPECT_EQ(q1.structure, q2.structure);
  }
  // gl_2-like span: sl_2 plus the centre mod 11.
  std::vector<Mat> gl{E(*F, 2, 0, 1), E(*F, 2, 1, 0), mat::identity(*F, 2)};
  EXPECT_EQ(killing_radical_quotient(bracket_closure(F, 2, gl)).dim(), 3u);
}

TEST(Killing, StrictModeRejectsSmallCharacteristic) {
  auto F = make_field(7, 1);
  LieAlgebraBasis L = bracket_closure(F, 2, sl2_basis(*F));
  KillingOptions strict;
  strict.strict = true;
  try {
    killing_radical_quotient(L, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CharTooSmall);
  }
  auto F13 = make_field(13, 1);
  EXPECT_EQ(killing_radical_quotient(bracket_closure(F13, 2, sl2_basis(*F13)), strict).dim(), 3u);
}

TEST(LieRank, Sl2F7MatchesBruteForce) {
  auto F = make_field(7, 1);
  auto basis = sl2_basis(*F);
  LieRankResult r = lie_rank(killing_radical_quotient(bracket_closure(F, 2, basis)));
  EXPECT_TRUE(r.exhaustive);
  std::size_t best = 3, nonzero = 0;
  for (std::uint32_t a = 0; a < 7; ++a)
    for (std::uint32_t b = 0; b < 7; ++b)
      for (std::uint32_t c = 0; c < 7; ++c) {
        if (!a && !b && !c) continue;
        ++nonzero;
        Mat x = mat::add(*F, mat::add(*F, mat::scale(*F, {a}, basis[0]), mat::scale(*F, {b}, basis[1])),
                         mat::scale(*F, {c}, basis[2]));
        best = std::min(best, centralizer_dim(*F, basis, x));
      }
  EXPECT_EQ(nonzero, 342u);
  EXPECT_EQ(best, 1u);
  EXPECT_EQ(r.rank, best);
}

TEST(LieRank, Sl3F5) {
  auto F = make_field(5, 1);
  std::vector<Mat> seed{E(*F, 3, 0, 1), E(*F, 3, 1, 0), E(*F, 3, 1, 2), E(*F, 3, 2, 1)};
  LieAlgebraBasis L = bracket_closure(F, 3, seed);
  ASSERT_EQ(L.dim(), 8u);
  Mat reg = corpus::diagonal(*F, {0, 1, -1});
  EXPECT_EQ(centralizer_dim(*F, L.basis, reg), 2u);
  EXPECT_EQ(lie_rank(L).rank, 2u);
  RankOptions sampled;
  sampled.exhaustive_limit = 1000;
  sampled.samples = 2000;
  LieRankResult s = lie_rank(L, sampled);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_EQ(s.rank, 2u);
  EXPECT_EQ(s.seed, sampled.seed);
}

TEST(LieRank, ThreadCountDoesNotChangeResult) {
  auto F = make_field(5, 1);
  std::vector<Mat> seed{E(*F, 3, 0, 1), E(*F, 3, 1, 0), E(*F, 3, 0, 2)};
  LieAlgebraBasis L = killing_radical_quotient(bracket_closure(F, 3, seed));
  RankOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(lie_rank(L, one).rank, lie_rank(L, four).rank);
}

TEST(Envelope, Examples) {
  auto F = make_field(7, 1);
  NoriEnvelope full = nori_envelope(enumerate(corpus::special_linear(F, 2)));
  EXPECT_EQ(std::tuple(full.dim_full, full.dim_ss, full.rank), std::tuple(3u, 3u, 1u));
  EXPECT_TRUE(full.heuristic_regime);  // 7 <= 4 * 3

  NoriEnvelope torus = nori_envelope(enumerate(corpus::torus(F, 2)));
  EXPECT_EQ(std::tuple(torus.dim_full, torus.dim_ss, torus.rank), std::tuple(0u, 0u, 0u));
  EXPECT_EQ(torus.unipotents, 0u);

  NoriEnvelope borel = nori_envelope(enumerate(corpus::borel(F, 2)));
  EXPECT_EQ(std::tuple(borel.dim_full, borel.dim_ss, borel.rank), std::tuple(1u, 0u, 0u));
}

TEST(Envelope, HeuristicFlag) {
  EXPECT_TRUE(heuristic_regime(7, 2, 3));
  EXPECT_FALSE(heuristic_regime(13, 2, 3));
  EXPECT_TRUE(heuristic_regime(13, 2, 3, 5));
  EXPECT_TRUE(heuristic_regime(5, 5, 0));
  auto F = make_field(13, 1);
  EXPECT_FALSE(nori_envelope(enumerate(corpus::special_linear(F, 2))).heuristic_regime);
}

TEST(Envelope, MonotoneOnCorpus) {
  auto F = make_field(5, 1);
  auto rank = [](const GroupInstance& g) { return nori_envelope(enumerate(g)).rank; };
  unsigned sl3 = rank(corpus::special_linear(F, 3));
  EXPECT_EQ(sl3, 2u);
  for (auto h : {corpus::borel(F, 3), corpus::corner_sl2(F, 3), corpus::principal_sl2(F), corpus::parabolic(F, 3),
                 corpus::levi(F, 3), corpus::unipotent(F, 3)})
    EXPECT_LT(rank(h), sl3);
  unsigned sl2 = rank(corpus::special_linear(F, 2));
  EXPECT_LE(rank(corpus::borel(F, 2)), sl2);
  EXPECT_LE(rank(corpus::torus(F, 2)), sl2);
}

TEST(Envelope, WeilRestrictionOverExtension) {
  auto F = make_field(5, 2);
  GroupInstance g = corpus::special_linear(F, 2);
  NoriEnvelope direct = nori_envelope(enumerate(g));
  NoriEnvelope restricted = nori_envelope(enumerate(weil_restrict(g)));
  EXPECT_EQ(std::tuple(direct.dim_ss, direct.rank), std::tuple(6u, 2u));
  EXPECT_EQ(std::tuple(restricted.dim_ss, restricted.rank), std::tuple(6u, 2u));
}

TEST(Harvest, SampledUnipotentsAreUnipotentAndInGroup) {
  auto F = make_field(7, 1);
  GroupInstance g = corpus::special_linear(F, 3);
  HarvestOptions opt;
  opt.words = 200;
  auto us = harvest_unipotents(g, opt);
  ASSERT_FALSE(us.empty());
  StabilizerChain chain(g.field, g.n, g.generators);
  for (const auto& u : us) {
    EXPECT_NO_THROW(nil_log(*F, u));
    EXPECT_TRUE(chain.contains(u));
  }
  NoriEnvelope env = envelope_from_unipotents(F, 3, us);
  EXPECT_EQ(std::tuple(env.dim_ss, env.rank), std::tuple(8u, 2u));
}
