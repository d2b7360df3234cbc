#include <gtest/gtest.h>

#include <random>

#include "nori/corpus.hpp"
#include "nori/grp.hpp"
#include "nori/lietypes.hpp"
#include "nori/testing/root_systems.hpp"

using namespace nori;
using nori::testing::oracle_dim;
using nori::testing::oracle_order;
using nori::testing::oracle_rank;
using Kind = CompositionFactor::Kind;

namespace {

std::vector<LieTypeTag> all_types(unsigned max_rank) {
  std::vector<LieTypeTag> out;
  for (unsigned n = 1; n <= max_rank; ++n) out.push_back({Family::A, n});
  for (unsigned n = 2; n <= max_rank; ++n) out.push_back({Family::B, n});
  for (unsigned n = 2; n <= max_rank; ++n) out.push_back({Family::C, n});
  for (unsigned n = 3; n <= max_rank; ++n) out.push_back({Family::D, n});
  for (Family f : {Family::G2, Family::F4, Family::E6, Family::E7, Family::E8}) out.push_back({f, fixed_rank(f)});
  return out;
}

}  // namespace

TEST(TypeTables, Examples) {
  EXPECT_EQ(oracle_dim({Family::A, 1}), 3u);
  EXPECT_EQ(type_dim({Family::A, 1}), 3u);
  EXPECT_EQ(nori::testing::root_system({Family::C, 2}).roots.size(), 8u);
  EXPECT_EQ(type_dim({Family::C, 2}), 10u);
  EXPECT_EQ(nori::testing::root_system({Family::E8, 8}).roots.size(), 240u);
  EXPECT_EQ(type_dim({Family::E8, 8}), 248u);
}

TEST(TypeTables, MatchRootSystems) {
  for (const auto& t : all_types(8)) {
    EXPECT_EQ(type_dim(t), oracle_dim(t)) << to_string(t);
    EXPECT_EQ(type_rank(t), oracle_rank(t)) << to_string(t);
  }
}

TEST(TypeTables, MakeTagValidation) {
  EXPECT_THROW(make_tag(Family::B, 1), Error);
  EXPECT_THROW(make_tag(Family::D, 2), Error);
  EXPECT_THROW(make_tag(Family::E8, 7), Error);
  EXPECT_EQ(make_tag(Family::G2, 0), (LieTypeTag{Family::G2, 2}));
  EXPECT_EQ(canonical({Family::B, 2}), (LieTypeTag{Family::C, 2}));
  EXPECT_EQ(canonical({Family::D, 3}), (LieTypeTag{Family::A, 3}));
}

TEST(ChevalleyOrder, Examples) {
  auto F5 = make_field(5, 1);
  EXPECT_EQ(chevalley_order({ClassicalFamily::SL, 2}, 5), BigInt(120));
  EXPECT_EQ(chevalley_order({ClassicalFamily::SL, 2}, 5), BigInt(enumerate(corpus::special_linear(F5, 2)).order()));
  EXPECT_EQ(chevalley_order({ClassicalFamily::Sp, 4}, 3), BigInt(51840));
  EXPECT_EQ(chevalley_order({ClassicalFamily::SU, 3}, 3), BigInt(6048));
}

TEST(ChevalleyOrder, MatchesDegreeFormula) {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 9u, 11u, 25u, 49u, 125u}) {
    for (unsigned m = 2; m <= 6; ++m) {
      LieTypeTag a{Family::A, m - 1};
      EXPECT_EQ(chevalley_order({ClassicalFamily::SL, m}, q), oracle_order(a, q)) << "SL" << m << " " << q;
      EXPECT_EQ(chevalley_order({ClassicalFamily::SU, m}, q), oracle_order(a, q, true)) << "SU" << m << " " << q;
    }
    for (unsigned n = 2; n <= 4; ++n) {
      EXPECT_EQ(chevalley_order({ClassicalFamily::Sp, 2 * n}, q), oracle_order({Family::C, n}, q));
      EXPECT_EQ(chevalley_order({ClassicalFamily::Spin, 2 * n + 1}, q), oracle_order({Family::B, n}, q));
    }
    for (unsigned n = 3; n <= 5; ++n)
      EXPECT_EQ(chevalley_order({ClassicalFamily::Spin, 2 * n}, q), oracle_order({Family::D, n}, q));
  }
}

TEST(ChevalleyOrder, Unsupported) {
  EXPECT_THROW(chevalley_order({ClassicalFamily::Sp, 5}, 5), Error);
  EXPECT_THROW(chevalley_order({ClassicalFamily::SL, 1}, 5), Error);
  EXPECT_THROW(simply_connected_group({Family::G2, 2}), Error);
}

TEST(ChevalleyOrder, Sp4F3ByEnumeration) {
  auto F = Field::make_small_char(3, 1);
  auto g = corpus::symplectic4(F);
  // Generators preserve the form with Gram matrix [[0, I], [-I, 0]].
  Mat J = mat::from_ints(*F, 4, {0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0});
  for (const auto& x : g.generators) {
    Mat xt(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) xt(i, j) = x(j, i);
    EXPECT_EQ(mat::mul(*F, mat::mul(*F, x, J), xt), J);
  }
  EXPECT_EQ(BigInt(enumerate(g).order()), chevalley_order({ClassicalFamily::Sp, 4}, 3));
  EXPECT_EQ(group_order(g), BigInt(51840));
}

TEST(ChevalleyOrder, SU3F3ByEnumeration) {
  // Unitary group of the antidiagonal Hermitian form over F_9, with
  // conjugation a -> a^3. Generated by its upper and lower unitriangular
  // elements, which are found by brute force.
  auto F = Field::make_small_char(3, 2);
  const std::uint32_t q = F->size();
  auto bar = [&](FieldElement a) { return F->pow(a, 3); };
  Mat J(3);
  for (std::size_t i = 0; i < 3; ++i) J(i, 2 - i) = F->one();
  auto is_unitary = [&](const Mat& u) {
    Mat ustar(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) ustar(i, j) = bar(u(j, i));
    return mat::mul(*F, mat::mul(*F, u, J), ustar) == J;
  };
  std::vector<Mat> gens;
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b)
      for (std::uint32_t c = 0; c < q; ++c) {
        Mat u = mat::identity(*F, 3);
        u(0, 1) = {a};
        u(0, 2) = {b};
        u(1, 2) = {c};
        if (!is_unitary(u) || mat::is_identity(*F, u)) continue;
        gens.push_back(u);
        Mat lower(3);
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) lower(i, j) = u(2 - i, 2 - j);
        gens.push_back(lower);
      }
  ASSERT_EQ(gens.size(), 2u * 26);  // the unitriangular subgroup has order q^3 = 27
  EnumeratedGroup e = enumerate(make_instance(F, 3, gens));
  for (std::size_t i = 0; i < e.order(); i += 7) {
    Mat x = e.element(i);
    ASSERT_TRUE(is_unitary(x));
    ASSERT_EQ(mat::det(*F, x), F->one());
  }
  EXPECT_EQ(BigInt(e.order()), chevalley_order({ClassicalFamily::SU, 3}, 3));
  EXPECT_EQ(e.order(), 6048u);
}

TEST(ClassifyFactor, Examples) {
  EXPECT_EQ(7 * 48 / 2, 168);
  CompositionFactor a = classify_factor(168, 7);
  EXPECT_EQ(a.kind, Kind::LieCharEll);
  EXPECT_EQ(a.type, (LieTypeTag{Family::A, 1}));
  EXPECT_EQ(a.f, 1u);

  CompositionFactor b = classify_factor(60, 5);
  EXPECT_EQ(b.kind, Kind::LieCharEll);
  EXPECT_EQ(b.type, (LieTypeTag{Family::A, 1}));

  CompositionFactor c = classify_factor(2520, 7);
  EXPECT_EQ(c.kind, Kind::Alternating);
  EXPECT_EQ(rank_profile(std::vector{c}, 7), RankProfile{});

  EXPECT_EQ(classify_factor(13, 7).kind, Kind::Cyclic);
  EXPECT_EQ(classify_factor(60, 7).kind, Kind::Alternating);
  EXPECT_EQ(classify_factor(168, 5).kind, Kind::OtherSimple);
}

TEST(ClassifyFactor, UnknownFactor) {
  try {
    classify_factor(7920, 11);  // Mathieu M_11
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownFactor);
  }
}

TEST(ClassifyFactor, CharEllOnlyWhenEllDividesOrder) {
  for (const auto& e : catalogue())
    if (e.lie_type() && e.p >= 5 && e.order < 1'000'000'000) {
      for (std::uint64_t ell : {5u, 7u, 11u, 13u}) {
        CompositionFactor c = classify_factor(e.order, ell);
        if (c.kind == Kind::LieCharEll) ASSERT_EQ(e.order % ell, 0u) << e.label;
      }
    }
}

TEST(Catalogue, OrdersMatchOracle) {
  using nori::testing::oracle_simple_order;
  for (const auto& e : catalogue()) {
    BigInt q = 1;
    for (unsigned i = 0; i < e.k && e.lie_type(); ++i) q *= e.p;
    switch (e.family) {
      case SimpleFamily::PSL2: ASSERT_EQ(BigInt(e.order), oracle_simple_order({Family::A, 1}, q)) << e.label; break;
      case SimpleFamily::PSL3: ASSERT_EQ(BigInt(e.order), oracle_simple_order({Family::A, 2}, q)) << e.label; break;
      case SimpleFamily::PSU3: ASSERT_EQ(BigInt(e.order), oracle_simple_order({Family::A, 2}, q, true)) << e.label; break;
      case SimpleFamily::PSp4: ASSERT_EQ(BigInt(e.order), oracle_simple_order({Family::C, 2}, q)) << e.label; break;
      case SimpleFamily::Alternating: {
        std::uint64_t f = 1;
        for (unsigned i = 2; i <= e.k; ++i) f *= i;
        ASSERT_EQ(e.order, f / 2);
        break;
      }
    }
  }
}

TEST(Catalogue, NoCollisionsInSupportedRange) {
  auto collisions = catalogue_collisions();
  for (const auto& c : collisions) ADD_FAILURE() << c.first.label << " vs " << c.second.label;
  EXPECT_TRUE(collisions.empty());
}

TEST(Catalogue, KnownIsomorphismsAreSkipped) {
  // PSL_2(7) and PSL_3(2) share order 168; PSL_2(9) and A_6 share 360.
  std::size_t shared_168 = 0, shared_360 = 0;
  for (const auto& e : catalogue()) {
    shared_168 += e.order == 168;
    shared_360 += e.order == 360;
  }
  EXPECT_EQ(shared_168, 2u);
  EXPECT_EQ(shared_360, 2u);
}

TEST(RankProfile, Examples) {
  auto psl27 = classify_factor(168, 7);
  RankProfile p = rank_profile(std::vector{psl27}, 7);
  EXPECT_EQ(p.dim_ell, 3u);
  EXPECT_EQ(p.rk_ell, 1u);
  EXPECT_EQ(p.per_type, (PerTypeRanks{{{Family::A, 1}, 1}}));

  std::vector<CompositionFactor> cyclic{classify_factor(2, 7), classify_factor(3, 7), classify_factor(7, 7)};
  EXPECT_EQ(rank_profile(cyclic, 7), RankProfile{});

  std::vector<CompositionFactor> sl2_25{classify_factor(2, 5), classify_factor(7800, 5)};
  RankProfile r = rank_profile(sl2_25, 5);
  EXPECT_EQ(r.dim_ell, 6u);
  EXPECT_EQ(r.rk_ell, 2u);
}

TEST(RankProfile, Additive) {
  std::vector<std::uint64_t> orders{2, 3, 5, 7, 60, 168, 2520, 5616, 6048, 7800, 25920, 126000, 372000, 1876896, 4680000};
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    std::uint64_t ell = k % 2 ? 5 : 7;
    std::vector<CompositionFactor> a, b;
    for (int i = 0; i < 3; ++i) {
      for (auto* side : {&a, &b}) {
        std::uint64_t o = orders[rng() % orders.size()];
        try {
          side->push_back(classify_factor(o, ell));
        } catch (const Error&) {
        }
      }
    }
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    RankProfile pa = rank_profile(a, ell), pb = rank_profile(b, ell), pab = rank_profile(ab, ell);
    EXPECT_EQ(pab.dim_ell, pa.dim_ell + pb.dim_ell);
    EXPECT_EQ(pab.rk_ell, pa.rk_ell + pb.rk_ell);
    for (const auto& [t, r] : pab.per_type) EXPECT_EQ(r, pa.per_type[t] + pb.per_type[t]);
    unsigned sum = 0;
    for (const auto& [t, r] : pab.per_type) sum += r;
    EXPECT_EQ(sum, pab.rk_ell);
  }
}

TEST(RankProfile, SpecialLinearGroupsByComposition) {
  for (auto [m, ell, f] : {std::tuple{2u, 5u, 1u}, std::tuple{2u, 7u, 1u}, std::tuple{2u, 5u, 2u}, std::tuple{3u, 5u, 1u}}) {
    auto g = corpus::special_linear(make_field(ell, f), m);
    auto fs = composition_series(enumerate(weil_restrict(g)), ell);
    RankProfile p = rank_profile(fs, ell);
    EXPECT_EQ(p.per_type, (PerTypeRanks{{{Family::A, m - 1}, f * (m - 1)}}));
    EXPECT_EQ(p.dim_ell, f * (m * m - 1));
  }
}

TEST(InferPerType, UniqueAndAmbiguous) {
  EXPECT_EQ(infer_per_type(3, 1), (PerTypeRanks{{{Family::A, 1}, 1}}));
  EXPECT_EQ(infer_per_type(6, 2), (PerTypeRanks{{{Family::A, 1}, 2}}));
  EXPECT_EQ(infer_per_type(8, 2), (PerTypeRanks{{{Family::A, 2}, 2}}));
  EXPECT_EQ(infer_per_type(10, 2), (PerTypeRanks{{{Family::C, 2}, 2}}));
  EXPECT_EQ(infer_per_type(0, 0), PerTypeRanks{});
  EXPECT_FALSE(infer_per_type(21, 3).has_value());  // B3 or C3
  EXPECT_FALSE(infer_per_type(4, 1).has_value());
}

TEST(Faults, GuardRestores) {
  const LieTypeTag a1{Family::A, 1};
  {
    FaultGuard g(Fault::type_dim_A);
    EXPECT_EQ(type_dim(a1), 4u);
  }
  EXPECT_EQ(type_dim(a1), 3u);
  for (Fault f : kAllFaults) EXPECT_EQ(fault_from_string(to_string(f)), f);
}
