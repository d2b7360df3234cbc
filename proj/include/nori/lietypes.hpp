#pragma once

// Lie type tables, Chevalley group orders, recognition of simple
// composition factors by order, and assembly of rank profiles.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nori/bigint.hpp"
#include "nori/error.hpp"
#include "nori/gf.hpp"

namespace nori {

// Deliberate off-by-one faults, switched on only by the self-test's
// mutation check.
enum class Fault {
  none,
  type_dim_A, type_dim_B, type_dim_C, type_dim_D,
  type_dim_E6, type_dim_E7, type_dim_E8, type_dim_F4, type_dim_G2,
  type_rank,
  chevalley_SL, chevalley_Sp, chevalley_SU, chevalley_Spin_odd, chevalley_Spin_even,
  catalogue_PSL2, catalogue_PSL3, catalogue_PSU3, catalogue_PSp4, catalogue_alternating,
};

inline constexpr Fault kAllFaults[] = {
    Fault::type_dim_A,     Fault::type_dim_B,         Fault::type_dim_C,          Fault::type_dim_D,
    Fault::type_dim_E6,    Fault::type_dim_E7,        Fault::type_dim_E8,         Fault::type_dim_F4,
    Fault::type_dim_G2,    Fault::type_rank,          Fault::chevalley_SL,        Fault::chevalley_Sp,
    Fault::chevalley_SU,   Fault::chevalley_Spin_odd, Fault::chevalley_Spin_even, Fault::catalogue_PSL2,
    Fault::catalogue_PSL3, Fault::catalogue_PSU3,     Fault::catalogue_PSp4,      Fault::catalogue_alternating,
};

inline std::string to_string(Fault f) {
  static const char* names[] = {
      "none",          "type_dim_A",     "type_dim_B",         "type_dim_C",          "type_dim_D",
      "type_dim_E6",   "type_dim_E7",    "type_dim_E8",        "type_dim_F4",         "type_dim_G2",
      "type_rank",     "chevalley_SL",   "chevalley_Sp",       "chevalley_SU",        "chevalley_Spin_odd",
      "chevalley_Spin_even", "catalogue_PSL2", "catalogue_PSL3", "catalogue_PSU3",  "catalogue_PSp4",
      "catalogue_alternating"};
  return names[static_cast<int>(f)];
}

inline std::optional<Fault> fault_from_string(const std::string& s) {
  for (Fault f : kAllFaults)
    if (to_string(f) == s) return f;
  if (s == "none") return Fault::none;
  return std::nullopt;
}

namespace detail {
inline Fault active_fault = Fault::none;
inline int bump(Fault f) { return active_fault == f ? 1 : 0; }
}  // namespace detail

/// Activates a fault for the lifetime of the guard.
class FaultGuard {
 public:
  explicit FaultGuard(Fault f) : previous_(detail::active_fault) { detail::active_fault = f; }
  ~FaultGuard() { detail::active_fault = previous_; }
  FaultGuard(const FaultGuard&) = delete;
  FaultGuard& operator=(const FaultGuard&) = delete;

 private:
  Fault previous_;
};

enum class Family { A, B, C, D, E6, E7, E8, F4, G2 };

struct LieTypeTag {
  Family family = Family::A;
  unsigned rank = 1;

  friend constexpr auto operator<=>(const LieTypeTag&, const LieTypeTag&) = default;
};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
    case Family::F4: return "F4";
    case Family::G2: return "G2";
  }
  return "?";
}

inline std::string to_string(const LieTypeTag& t) {
  switch (t.family) {
    case Family::A:
    case Family::B:
    case Family::C:
    case Family::D: return to_string(t.family) + std::to_string(t.rank);
    default: return to_string(t.family);
  }
}

inline unsigned fixed_rank(Family f) {
  switch (f) {
    case Family::E6: return 6;
    case Family::E7: return 7;
    case Family::E8: return 8;
    case Family::F4: return 4;
    case Family::G2: return 2;
    default: return 0;
  }
}

/// Validated tag. Exceptional families ignore `rank` unless it contradicts
/// the fixed rank.
inline LieTypeTag make_tag(Family family, unsigned rank) {
  if (unsigned fr = fixed_rank(family)) {
    if (rank != 0 && rank != fr)
      throw Error(ErrorKind::InvalidArgument, to_string(family) + " has rank " + std::to_string(fr));
    return {family, fr};
  }
  unsigned min_rank = family == Family::A ? 1 : family == Family::D ? 3 : 2;
  if (rank < min_rank)
    throw Error(ErrorKind::InvalidArgument,
                "rank " + std::to_string(rank) + " invalid for family " + to_string(family));
  return {family, rank};
}

inline std::optional<Family> family_from_string(const std::string& s) {
  static const std::pair<const char*, Family> names[] = {
      {"A", Family::A},   {"B", Family::B},   {"C", Family::C},   {"D", Family::D},  {"E6", Family::E6},
      {"E7", Family::E7}, {"E8", Family::E8}, {"F4", Family::F4}, {"G2", Family::G2}};
  for (auto& [name, fam] : names)
    if (s == name) return fam;
  return std::nullopt;
}

/// Identifies the coincidences B2 = C2 and D3 = A3 so that per-type maps can
/// be compared.
inline LieTypeTag canonical(LieTypeTag t) {
  if (t.family == Family::B && t.rank == 2) return {Family::C, 2};
  if (t.family == Family::D && t.rank == 3) return {Family::A, 3};
  return t;
}

inline unsigned type_rank(const LieTypeTag& t) { return t.rank + detail::bump(Fault::type_rank); }

inline unsigned type_dim(const LieTypeTag& t) {
  const unsigned n = t.rank;
  switch (t.family) {
    case Family::A: return n * (n + 2) + detail::bump(Fault::type_dim_A);
    case Family::B: return n * (2 * n + 1) + detail::bump(Fault::type_dim_B);
    case Family::C: return n * (2 * n + 1) + detail::bump(Fault::type_dim_C);
    case Family::D: return n * (2 * n - 1) + detail::bump(Fault::type_dim_D);
    case Family::G2: return 14 + detail::bump(Fault::type_dim_G2);
    case Family::F4: return 52 + detail::bump(Fault::type_dim_F4);
    case Family::E6: return 78 + detail::bump(Fault::type_dim_E6);
    case Family::E7: return 133 + detail::bump(Fault::type_dim_E7);
    case Family::E8: return 248 + detail::bump(Fault::type_dim_E8);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Chevalley group orders

enum class ClassicalFamily { SL, Sp, SU, Spin };

/// A classical simply connected group: SL_m, Sp_m (m even), SU_m, or split
/// Spin_m.
struct ClassicalGroup {
  ClassicalFamily family;
  unsigned degree;
};

inline std::string to_string(const ClassicalGroup& g) {
  static const char* names[] = {"SL", "Sp", "SU", "Spin"};
  return std::string(names[static_cast<int>(g.family)]) + "_" + std::to_string(g.degree);
}

inline BigInt ipow(const BigInt& base, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

/// |G(F_q)| for the simply connected classical groups.
inline BigInt chevalley_order(const ClassicalGroup& g, const BigInt& q) {
  const unsigned m = g.degree;
  BigInt order = 1;
  switch (g.family) {
    case ClassicalFamily::SL:
      if (m < 2) throw Error(ErrorKind::UnsupportedFamily, "SL_m needs m >= 2");
      order = ipow(q, m * (m - 1) / 2);
      for (unsigned i = 2; i <= m; ++i) order *= ipow(q, i) - 1;
      return order + detail::bump(Fault::chevalley_SL);
    case ClassicalFamily::Sp: {
      if (m < 2 || m % 2) throw Error(ErrorKind::UnsupportedFamily, "Sp_m needs even m >= 2");
      const unsigned n = m / 2;
      order = ipow(q, n * n);
      for (unsigned i = 1; i <= n; ++i) order *= ipow(q, 2 * i) - 1;
      return order + detail::bump(Fault::chevalley_Sp);
    }
    case ClassicalFamily::SU:
      if (m < 2) throw Error(ErrorKind::UnsupportedFamily, "SU_m needs m >= 2");
      order = ipow(q, m * (m - 1) / 2);
      for (unsigned i = 2; i <= m; ++i) order *= i % 2 ? ipow(q, i) + 1 : ipow(q, i) - 1;
      return order + detail::bump(Fault::chevalley_SU);
    case ClassicalFamily::Spin: {
      if (m < 3) throw Error(ErrorKind::UnsupportedFamily, "Spin_m needs m >= 3");
      const unsigned n = m / 2;
      if (m % 2) {
        order = ipow(q, n * n);
        for (unsigned i = 1; i <= n; ++i) order *= ipow(q, 2 * i) - 1;
        return order + detail::bump(Fault::chevalley_Spin_odd);
      }
      order = ipow(q, n * (n - 1)) * (ipow(q, n) - 1);
      for (unsigned i = 1; i < n; ++i) order *= ipow(q, 2 * i) - 1;
      return order + detail::bump(Fault::chevalley_Spin_even);
    }
  }
  throw Error(ErrorKind::UnsupportedFamily, "unknown family");
}

/// The split simply connected classical group of a given type.
inline ClassicalGroup simply_connected_group(const LieTypeTag& t) {
  switch (t.family) {
    case Family::A: return {ClassicalFamily::SL, t.rank + 1};
    case Family::B: return {ClassicalFamily::Spin, 2 * t.rank + 1};
    case Family::C: return {ClassicalFamily::Sp, 2 * t.rank};
    case Family::D: return {ClassicalFamily::Spin, 2 * t.rank};
    default: throw Error(ErrorKind::UnsupportedFamily, "no order formula for " + to_string(t));
  }
}

// ---------------------------------------------------------------------------
// Simple group catalogue

enum class SimpleFamily { PSL2, PSL3, PSU3, PSp4, Alternating };

struct CatalogueEntry {
  SimpleFamily family;
  std::uint64_t p = 0;  // characteristic (Lie families)
  unsigned k = 0;       // q = p^k, or the degree m of A_m
  std::uint64_t order = 0;
  std::string label;

  std::optional<LieTypeTag> lie_type() const {
    switch (family) {
      case SimpleFamily::PSL2: return LieTypeTag{Family::A, 1};
      case SimpleFamily::PSL3:
      case SimpleFamily::PSU3: return LieTypeTag{Family::A, 2};
      case SimpleFamily::PSp4: return LieTypeTag{Family::C, 2};
      case SimpleFamily::Alternating: return std::nullopt;
    }
    return std::nullopt;
  }
};

namespace detail {

inline BigInt simple_order(SimpleFamily fam, const BigInt& q) {
  using boost::multiprecision::gcd;
  switch (fam) {
    case SimpleFamily::PSL2:
      return q * (q * q - 1) / gcd(BigInt(2), q - 1) + bump(Fault::catalogue_PSL2);
    case SimpleFamily::PSL3:
      return q * q * q * (q * q - 1) * (q * q * q - 1) / gcd(BigInt(3), q - 1) + bump(Fault::catalogue_PSL3);
    case SimpleFamily::PSU3:
      return q * q * q * (q * q - 1) * (q * q * q + 1) / gcd(BigInt(3), q + 1) + bump(Fault::catalogue_PSU3);
    case SimpleFamily::PSp4:
      return ipow(q, 4) * (q * q - 1) * (ipow(q, 4) - 1) / gcd(BigInt(2), q - 1) + bump(Fault::catalogue_PSp4);
    case SimpleFamily::Alternating: break;
  }
  return 0;
}

inline std::string family_label(SimpleFamily fam) {
  switch (fam) {
    case SimpleFamily::PSL2: return "PSL_2";
    case SimpleFamily::PSL3: return "PSL_3";
    case SimpleFamily::PSU3: return "PSU_3";
    case SimpleFamily::PSp4: return "PSp_4";
    case SimpleFamily::Alternating: return "A";
  }
  return "?";
}

}  // namespace detail

/// Primes up to this bound contribute Lie-type entries to the catalogue.
inline constexpr std::uint64_t kCataloguePrimeBound = 1000;
/// Entries with larger orders are left out.
inline constexpr std::uint64_t kCatalogueOrderBound = std::uint64_t(1) << 62;

/// Supported simple groups: A_5..A_9 and PSL_2(q), PSL_3(q), PSU_3(q),
/// PSp_4(q) for prime powers q = p^k, p < 1000, order < 2^62. Small-q
/// entries that are not simple (PSL_2(2), PSL_2(3), PSU_3(2), PSp_4(2)) are
/// excluded. Sorted by (order, family, p, k).
inline std::vector<CatalogueEntry> build_catalogue() {
  std::vector<CatalogueEntry> out;
  std::uint64_t fact = 24;
  for (unsigned m = 5; m <= 9; ++m) {
    fact *= m;
    out.push_back({SimpleFamily::Alternating, 0, m, fact / 2 + detail::bump(Fault::catalogue_alternating),
                   "A_" + std::to_string(m)});
  }
  const SimpleFamily lie[] = {SimpleFamily::PSL2, SimpleFamily::PSL3, SimpleFamily::PSU3, SimpleFamily::PSp4};
  for (std::uint64_t p = 2; p < kCataloguePrimeBound; ++p) {
    if (!is_prime(p)) continue;
    for (SimpleFamily fam : lie) {
      BigInt q = p;
      for (unsigned k = 1;; ++k, q *= p) {
        if (fam == SimpleFamily::PSL2 && q < 4) continue;
        if (fam == SimpleFamily::PSU3 && q < 3) continue;
        if (fam == SimpleFamily::PSp4 && q < 3) continue;
        BigInt order = detail::simple_order(fam, q);
        if (order >= kCatalogueOrderBound) break;
        out.push_back({fam, p, k, static_cast<std::uint64_t>(order),
                       detail::family_label(fam) + "(" + q.str() + ")"});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const CatalogueEntry& a, const CatalogueEntry& b) {
    return std::tie(a.order, a.family, a.p, a.k) < std::tie(b.order, b.family, b.p, b.k);
  });
  return out;
}

inline const std::vector<CatalogueEntry>& catalogue() {
  static std::mutex mu;
  static std::map<Fault, std::vector<CatalogueEntry>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(detail::active_fault);
  if (it == cache.end()) it = cache.emplace(detail::active_fault, build_catalogue()).first;
  return it->second;
}

/// Known isomorphisms between catalogue entries with equal orders.
inline bool is_known_isomorphism(const CatalogueEntry& a, const CatalogueEntry& b) {
  auto is = [](const CatalogueEntry& e, SimpleFamily fam, std::uint64_t p, unsigned k) {
    return e.family == fam && e.p == p && e.k == k;
  };
  auto pair = [&](auto x, auto y) { return (x(a) && y(b)) || (x(b) && y(a)); };
  auto alt5 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::Alternating, 0, 5); };
  auto alt6 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::Alternating, 0, 6); };
  auto psl2_4 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::PSL2, 2, 2); };
  auto psl2_5 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::PSL2, 5, 1); };
  auto psl2_7 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::PSL2, 7, 1); };
  auto psl2_9 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::PSL2, 3, 2); };
  auto psl3_2 = [&](const CatalogueEntry& e) { return is(e, SimpleFamily::PSL3, 2, 1); };
  return pair(alt5, psl2_4) || pair(alt5, psl2_5) || pair(psl2_4, psl2_5) || pair(alt6, psl2_9) ||
         pair(psl2_7, psl3_2);
}

struct CatalogueCollision {
  CatalogueEntry first, second;
};

/// Equal-order pairs where at least one side is of Lie type in a
/// characteristic >= 5 and the pair is not a known isomorphism.
inline std::vector<CatalogueCollision> catalogue_collisions() {
  const auto& cat = catalogue();
  std::vector<CatalogueCollision> out;
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = i + 1; j < cat.size() && cat[j].order == cat[i].order; ++j) {
      bool relevant = (cat[i].lie_type() && cat[i].p >= 5) || (cat[j].lie_type() && cat[j].p >= 5);
      if (relevant && !is_known_isomorphism(cat[i], cat[j])) out.push_back({cat[i], cat[j]});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Composition factors and rank profiles

struct CompositionFactor {
  enum class Kind { Cyclic, Alternating, LieCharEll, OtherSimple };

  Kind kind = Kind::Cyclic;
  std::uint64_t order = 1;
  std::optional<LieTypeTag> type;  // LieCharEll only
  unsigned f = 0;                  // LieCharEll only: q = ell^f
  std::string label;

  friend bool operator==(const CompositionFactor& a, const CompositionFactor& b) {
    return a.kind == b.kind && a.order == b.order && a.type == b.type && a.f == b.f;
  }
  friend bool operator<(const CompositionFactor& a, const CompositionFactor& b) {
    return std::tie(a.order, a.kind, a.label) < std::tie(b.order, b.kind, b.label);
  }
};

inline std::string to_string(CompositionFactor::Kind k) {
  switch (k) {
    case CompositionFactor::Kind::Cyclic: return "Cyclic";
    case CompositionFactor::Kind::Alternating: return "Alternating";
    case CompositionFactor::Kind::LieCharEll: return "LieCharEll";
    case CompositionFactor::Kind::OtherSimple: return "OtherSimple";
  }
  return "?";
}

/// Identifies a simple group of the given order. Primes are cyclic. Otherwise
/// a characteristic-ell Lie entry wins, then alternating groups, then Lie
/// entries of other characteristics.
inline CompositionFactor classify_factor(std::uint64_t order, std::uint64_t ell) {
  if (is_prime(order)) return {CompositionFactor::Kind::Cyclic, order, std::nullopt, 0, "C" + std::to_string(order)};
  const auto& cat = catalogue();
  auto lo = std::lower_bound(cat.begin(), cat.end(), order,
                             [](const CatalogueEntry& e, std::uint64_t o) { return e.order < o; });
  const CatalogueEntry* alt = nullptr;
  const CatalogueEntry* other = nullptr;
  for (auto it = lo; it != cat.end() && it->order == order; ++it) {
    if (it->lie_type() && it->p == ell && order % ell == 0)
      return {CompositionFactor::Kind::LieCharEll, order, it->lie_type(), it->k, it->label};
    if (!it->lie_type() && !alt) alt = &*it;
    if (it->lie_type() && !other) other = &*it;
  }
  if (alt) return {CompositionFactor::Kind::Alternating, order, std::nullopt, 0, alt->label};
  if (other) return {CompositionFactor::Kind::OtherSimple, order, std::nullopt, 0, other->label};
  throw Error(ErrorKind::UnknownFactor, "no supported simple group has order " + std::to_string(order));
}

using PerTypeRanks = std::map<LieTypeTag, unsigned>;

struct RankProfile {
  unsigned dim_ell = 0;
  unsigned rk_ell = 0;
  PerTypeRanks per_type;

  friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

inline RankProfile rank_profile(std::span<const CompositionFactor> factors, std::uint64_t /*ell*/) {
  RankProfile p;
  for (const auto& fac : factors) {
    if (fac.kind != CompositionFactor::Kind::LieCharEll || !fac.type) continue;
    LieTypeTag t = canonical(*fac.type);
    p.dim_ell += fac.f * type_dim(t);
    p.per_type[t] += fac.f * type_rank(t);
  }
  for (auto& [t, r] : p.per_type) p.rk_ell += r;
  return p;
}

inline std::string to_string(const PerTypeRanks& m) {
  std::string s = "{";
  for (auto& [t, r] : m) s += (s.size() > 1 ? ", " : "") + to_string(t) + ": " + std::to_string(r);
  return s + "}";
}

/// The per-type rank map of a semisimple algebra with the given total
/// dimension and rank, when every product of simple types with those totals
/// yields the same map. B_n/C_n (n >= 3) and other genuine ambiguities give
/// nullopt.
inline std::optional<PerTypeRanks> infer_per_type(unsigned dim, unsigned rank) {
  std::vector<LieTypeTag> simple;
  for (unsigned n = 1; n <= rank; ++n) {
    simple.push_back({Family::A, n});
    if (n >= 3) simple.push_back({Family::B, n});
    if (n >= 2) simple.push_back({Family::C, n});
    if (n >= 4) simple.push_back({Family::D, n});
  }
  for (Family f : {Family::G2, Family::F4, Family::E6, Family::E7, Family::E8})
    if (fixed_rank(f) <= rank) simple.push_back({f, fixed_rank(f)});

  std::optional<PerTypeRanks> found;
  bool ambiguous = false;
  PerTypeRanks current;
  // Non-decreasing index order enumerates multisets.
  auto search = [&](auto&& self, std::size_t start, unsigned d, unsigned r) -> void {
    if (ambiguous) return;
    if (d == 0 && r == 0) {
      if (found && *found != current) ambiguous = true;
      found = current;
      return;
    }
    for (std::size_t i = start; i < simple.size(); ++i) {
      unsigned td = type_dim(simple[i]), tr = type_rank(simple[i]);
      if (td > d || tr > r || tr == 0) continue;
      current[simple[i]] += tr;
      self(self, i, d - td, r - tr);
      if ((current[simple[i]] -= tr) == 0) current.erase(simple[i]);
    }
  };
  search(search, 0, dim, rank);
  if (ambiguous) return std::nullopt;
  return found;
}

}  // namespace nori
