#pragma once

// Rank-comparison certificates against a declared ambient group, and the
// two-route analysis that feeds them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nori/ambient.hpp"
#include "nori/bigint.hpp"
#include "nori/error.hpp"
#include "nori/grp.hpp"
#include "nori/liealg.hpp"
#include "nori/lietypes.hpp"

namespace nori {

enum class Criterion { RankBound, TypeAFullness, PerTypeFullness, DimCriterion };
enum class Verdict { Certified, Refuted, Inconclusive };

inline std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::RankBound: return "RankBound";
    case Criterion::TypeAFullness: return "TypeAFullness";
    case Criterion::PerTypeFullness: return "PerTypeFullness";
    case Criterion::DimCriterion: return "DimCriterion";
  }
  return "?";
}

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct Evidence {
  RankProfile profile;
  bool per_type_known = true;
  unsigned f = 1;
  AmbientInvariants ambient;
  std::optional<PerTypeRanks> expected_per_type;
  std::optional<BigInt> group_order;     // computed
  std::optional<BigInt> expected_order;  // from the order formulas
  bool heuristic_regime = false;
  unsigned threshold_mult = kDefaultThresholdMult;
  std::string reason;
};

struct Certificate {
  Criterion criterion;
  Verdict verdict;
  Evidence evidence;
};

struct CertifyOptions {
  bool heuristic_regime = false;
  unsigned threshold_mult = kDefaultThresholdMult;
  bool per_type_known = true;
  std::uint64_t domain_bound = kDefaultDomainBound;
};

namespace detail {

inline Evidence base_evidence(const RankProfile& p, const AmbientSpec& a, unsigned f, const CertifyOptions& opt) {
  Evidence e;
  e.profile = p;
  e.per_type_known = opt.per_type_known;
  e.f = f;
  e.ambient = ambient_invariants(a);
  e.heuristic_regime = opt.heuristic_regime;
  e.threshold_mult = opt.threshold_mult;
  return e;
}

inline const AmbientSpec& require_ambient(const GroupInstance& g) {
  if (!g.ambient) throw Error(ErrorKind::MissingAmbient, "instance declares no ambient group");
  return *g.ambient;
}

/// Order of the simply connected ambient over its field, when every factor
/// has a formula.
inline std::optional<BigInt> ambient_order(const AmbientSpec& a) {
  if (!a.field) return std::nullopt;
  BigInt o = 1;
  try {
    for (const auto& t : a.factors) o *= chevalley_order(simply_connected_group(t), BigInt(a.field->size()));
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::UnsupportedFamily) throw;
    return std::nullopt;
  }
  return o;
}

/// Compares |<gens>| with the formula order. Returns false on mismatch and
/// leaves the orders in the evidence; skipped (true) when out of range.
inline bool order_cross_check(const GroupInstance& g, const AmbientSpec& a, Evidence& ev, std::uint64_t domain_bound) {
  ev.expected_order = ambient_order(a);
  if (!ev.expected_order) {
    ev.reason += "; order cross-check skipped (no formula)";
    return true;
  }
  try {
    ev.group_order = group_order(g, domain_bound);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::DomainTooLarge) throw;
    ev.reason += "; order cross-check skipped (domain too large)";
    return true;
  }
  return *ev.group_order == *ev.expected_order;
}

}  // namespace detail

/// rk_ell <= f * rank of the ambient.
inline Certificate check_rank_bound(const RankProfile& p, const AmbientSpec& a, unsigned f, const CertifyOptions& opt = {}) {
  Evidence ev = detail::base_evidence(p, a, f, opt);
  const unsigned bound = f * ev.ambient.rank;
  if (p.rk_ell <= bound) {
    ev.reason = "rk_ell " + std::to_string(p.rk_ell) + " <= " + std::to_string(bound) + ", slack " +
                std::to_string(bound - p.rk_ell);
    return {Criterion::RankBound, Verdict::Certified, ev};
  }
  ev.reason = "rk_ell " + std::to_string(p.rk_ell) + " > " + std::to_string(bound);
  return {Criterion::RankBound, Verdict::Refuted, ev};
}

/// Fullness for simply connected type A ambients: rk_ell = f * rank.
inline Certificate certify_fullness_typeA(const GroupInstance& g, const RankProfile& p, const CertifyOptions& opt = {}) {
  const AmbientSpec& a = detail::require_ambient(g);
  const unsigned f = a.ext_degree();
  Evidence ev = detail::base_evidence(p, a, f, opt);
  const unsigned target = f * ev.ambient.rank;
  auto done = [&](Verdict v, std::string why) {
    ev.reason = std::move(why) + ev.reason;
    return Certificate{Criterion::TypeAFullness, v, ev};
  };
  if (p.rk_ell > target) return done(Verdict::Refuted, "rk_ell exceeds f * rank; the declared ambient is too small");
  if (!a.simply_connected) return done(Verdict::Inconclusive, "ambient not simply connected");
  if (!ev.ambient.is_type_a) return done(Verdict::Inconclusive, "ambient not of type A");
  if (!a.semisimple()) return done(Verdict::Inconclusive, "ambient not semisimple");
  if (p.rk_ell < target)
    return done(Verdict::Inconclusive, "rk_ell " + std::to_string(p.rk_ell) + " < " + std::to_string(target));
  if (!detail::order_cross_check(g, a, ev, opt.domain_bound))
    return done(Verdict::Refuted, "rank equality holds but group order differs from the ambient order");
  return done(Verdict::Certified, "rk_ell = f * rank = " + std::to_string(target));
}

/// Fullness for simply connected semisimple ambients of any type: every
/// per-type rank equals f times the ambient's.
inline Certificate certify_fullness_pertype(const GroupInstance& g, const RankProfile& p, const CertifyOptions& opt = {}) {
  const AmbientSpec& a = detail::require_ambient(g);
  const unsigned f = a.ext_degree();
  Evidence ev = detail::base_evidence(p, a, f, opt);
  PerTypeRanks expected = ambient_per_type(a);
  for (auto& [t, r] : expected) r *= f;
  ev.expected_per_type = expected;
  auto done = [&](Verdict v, std::string why) {
    ev.reason = std::move(why) + ev.reason;
    return Certificate{Criterion::PerTypeFullness, v, ev};
  };
  if (p.rk_ell > f * ev.ambient.rank) return done(Verdict::Refuted, "rk_ell exceeds f * rank; the declared ambient is too small");
  if (!a.simply_connected) return done(Verdict::Inconclusive, "ambient not simply connected");
  if (!a.semisimple()) return done(Verdict::Inconclusive, "ambient not semisimple");
  if (!opt.per_type_known) return done(Verdict::Inconclusive, "per-type ranks not determined");
  PerTypeRanks have;
  for (const auto& [t, r] : p.per_type)
    if (r) have[canonical(t)] += r;
  if (have != expected)
    return done(Verdict::Inconclusive, "per-type ranks " + to_string(have) + " differ from " + to_string(expected));
  if (!detail::order_cross_check(g, a, ev, opt.domain_bound))
    return done(Verdict::Refuted, "per-type equality holds but group order differs from the ambient order");
  return done(Verdict::Certified, "per-type ranks equal " + to_string(expected));
}

/// dim_ell >= f * dim forces a semisimple ambient and equality.
inline Certificate check_dim_criterion(const RankProfile& p, const AmbientSpec& a, unsigned f, const CertifyOptions& opt = {}) {
  Evidence ev = detail::base_evidence(p, a, f, opt);
  const unsigned target = f * ev.ambient.dim;
  if (p.dim_ell < target) {
    ev.reason = "dim_ell " + std::to_string(p.dim_ell) + " < " + std::to_string(target) + "; hypothesis not met";
    return {Criterion::DimCriterion, Verdict::Inconclusive, ev};
  }
  if (!a.semisimple()) {
    ev.reason = "dim_ell >= f * dim but the declared ambient is not semisimple";
    return {Criterion::DimCriterion, Verdict::Refuted, ev};
  }
  if (p.dim_ell != target) {
    ev.reason = "dim_ell " + std::to_string(p.dim_ell) + " > " + std::to_string(target) + "; equality fails";
    return {Criterion::DimCriterion, Verdict::Refuted, ev};
  }
  ev.reason = "dim_ell = f * dim = " + std::to_string(target);
  return {Criterion::DimCriterion, Verdict::Certified, ev};
}

// ---------------------------------------------------------------------------
// Analysis

struct AnalyzeOptions {
  std::uint64_t oracle_cap = kDefaultOracleCap;
  std::uint64_t domain_bound = kDefaultDomainBound;
  EnvelopeOptions envelope;
  HarvestOptions harvest;
  bool run_envelope = true;
};

struct Report {
  std::optional<BigInt> group_order;        // stabilizer chain
  std::optional<std::uint64_t> enumerated;  // explicit enumeration
  std::optional<std::vector<CompositionFactor>> composition;
  std::optional<RankProfile> route_a;
  std::optional<NoriEnvelope> envelope;
  RankProfile profile;
  std::string profile_source;  // "composition", "envelope" or "none"
  bool per_type_known = false;
  std::optional<bool> routes_agree;
  std::vector<Certificate> certificates;
  bool cap_exceeded = false;
  bool heuristic_regime = false;
  std::vector<std::string> warnings;
};

inline bool any_verdict(const Report& r, Verdict v) {
  for (const auto& c : r.certificates)
    if (c.verdict == v) return true;
  return false;
}

inline std::vector<Certificate> evaluate_certificates(const GroupInstance& g, const RankProfile& p, const CertifyOptions& opt) {
  const AmbientSpec& a = detail::require_ambient(g);
  const unsigned f = a.ext_degree();
  return {check_rank_bound(p, a, f, opt), certify_fullness_typeA(g, p, opt), certify_fullness_pertype(g, p, opt),
          check_dim_criterion(p, a, f, opt)};
}

/// Route A when the group fits the oracle cap, Route B always (exhaustive
/// harvest when enumerated, sampled otherwise), then every certificate if an
/// ambient is declared.
inline Report analyze(const GroupInstance& g, const AnalyzeOptions& opt = {}) {
  Report rep;
  try {
    rep.group_order = group_order(g, opt.domain_bound);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::DomainTooLarge) throw;
    rep.warnings.push_back("group order skipped: " + std::string(err.what()));
  }
  const std::uint64_t ell = g.field->ell();

  std::optional<EnumeratedGroup> e;
  if (!rep.group_order || *rep.group_order <= opt.oracle_cap) {
    try {
      e.emplace(enumerate(g, opt.oracle_cap));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::CapExceeded) throw;
    }
  }
  rep.cap_exceeded = !e;
  if (e) {
    rep.enumerated = e->order();
    CompositionOptions copt{opt.oracle_cap, opt.domain_bound};
    rep.composition = composition_series(*e, ell, copt);
    rep.route_a = rank_profile(*rep.composition, ell);
  }

  if (opt.run_envelope) {
    if (g.field->ell() <= g.n) {
      rep.warnings.push_back("envelope skipped: ell <= matrix side");
    } else if (e) {
      rep.envelope = nori_envelope(*e, opt.envelope);
    } else {
      auto us = harvest_unipotents(g, opt.harvest);
      rep.envelope = envelope_from_unipotents(g.field, g.n, us, opt.envelope);
      rep.envelope->sampled_harvest = true;
    }
  }

  if (rep.route_a) {
    rep.profile = *rep.route_a;
    rep.profile_source = "composition";
    rep.per_type_known = true;
  } else if (rep.envelope) {
    rep.profile.dim_ell = rep.envelope->dim_ss;
    rep.profile.rk_ell = rep.envelope->rank;
    if (auto pt = infer_per_type(rep.envelope->dim_ss, rep.envelope->rank)) {
      rep.profile.per_type = *pt;
      rep.per_type_known = true;
    }
    rep.profile_source = "envelope";
  } else {
    rep.profile_source = "none";
  }
  if (rep.route_a && rep.envelope) {
    rep.routes_agree = rep.envelope->dim_ss == rep.route_a->dim_ell && rep.envelope->rank == rep.route_a->rk_ell;
    if (!*rep.routes_agree) rep.warnings.push_back("route divergence between composition factors and envelope");
  }
  rep.heuristic_regime = rep.envelope ? rep.envelope->heuristic_regime : false;

  if (g.ambient) {
    CertifyOptions copt;
    copt.heuristic_regime = rep.heuristic_regime;
    copt.threshold_mult = opt.envelope.threshold_mult;
    copt.per_type_known = rep.per_type_known;
    copt.domain_bound = opt.domain_bound;
    rep.certificates = evaluate_certificates(g, rep.profile, copt);
  }
  return rep;
}

}  // namespace nori
