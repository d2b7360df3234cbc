#pragma once

// Instance files, report JSON and the canonical input digest.

#include <openssl/evp.h>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nori/ambient.hpp"
#include "nori/certify.hpp"
#include "nori/error.hpp"
#include "nori/gf.hpp"
#include "nori/grp.hpp"
#include "nori/lattice.hpp"
#include "nori/lietypes.hpp"

namespace nori {

using json = nlohmann::json;

inline constexpr const char* kToolName = "nori-rank";
inline constexpr const char* kToolVersion = "1.0.0";

struct Instance {
  std::uint64_t prime = 0;
  unsigned ext_degree = 1;
  std::size_t dim = 0;
  bool rational = false;
  std::optional<GroupInstance> group;         // finite-field instances
  std::vector<RationalMat> rational_gens;     // rational instances
  std::optional<AmbientSpec> ambient;
  std::vector<std::string> warnings;
  std::string digest;
  json canonical;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::InvalidArgument, "sha256 failed");
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

/// Sorted keys, no whitespace.
inline std::string canonical_dump(const json& j) { return j.dump(); }

namespace detail {

[[noreturn]] inline void schema_error(const std::string& pointer, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, "at " + (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + "/" + key, "missing required field");
  return *it;
}

inline std::uint64_t require_uint(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) schema_error(where, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::int64_t reduce_entry(std::int64_t v, std::uint64_t ell, const std::string& where,
                                 std::vector<std::string>& warnings) {
  const auto m = static_cast<std::int64_t>(ell);
  if (v < 0 || v >= m) {
    std::int64_t r = ((v % m) + m) % m;
    warnings.push_back("entry " + std::to_string(v) + " at " + where + " reduced to " + std::to_string(r));
    return r;
  }
  return v;
}

inline FieldElement parse_entry(const Field& F, const json& v, const std::string& where,
                                std::vector<std::string>& warnings) {
  if (v.is_number_integer()) {
    std::int64_t x = reduce_entry(v.get<std::int64_t>(), F.ell(), where, warnings);
    return F.from_int(x);
  }
  if (v.is_array()) {
    if (v.size() != F.degree())
      schema_error(where, "expected " + std::to_string(F.degree()) + " coefficients, got " + std::to_string(v.size()));
    std::vector<std::int64_t> c;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number_integer()) schema_error(where + "/" + std::to_string(k), "expected an integer");
      c.push_back(reduce_entry(v[k].get<std::int64_t>(), F.ell(), where + "/" + std::to_string(k), warnings));
    }
    return F.from_coeffs(c);
  }
  schema_error(where, "expected an integer or a coefficient array");
}

inline Rational parse_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(BigInt(s));
      BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) schema_error(where, "zero denominator");
      return Rational(num, den);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      schema_error(where, "malformed rational '" + s + "'");
    }
  }
  schema_error(where, "expected an integer or a rational string such as \"1/7\"");
}

template <class Entry, class ParseEntry>
std::vector<std::vector<Entry>> parse_matrix(const json& m, std::size_t n, const std::string& where, ParseEntry parse) {
  if (!m.is_array() || m.size() != n) schema_error(where, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Entry>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rw = where + "/" + std::to_string(i);
    if (!m[i].is_array() || m[i].size() != n) schema_error(rw, "expected a row of length " + std::to_string(n));
    std::vector<Entry> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(parse(m[i][j], rw + "/" + std::to_string(j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline LieTypeTag parse_tag(const json& v, const std::string& where) {
  std::string fam;
  unsigned rank = 0;
  if (v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_number_integer()) {
    fam = v[0].get<std::string>();
    rank = static_cast<unsigned>(require_uint(v[1], where + "/1"));
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (auto f = family_from_string(s)) return make_tag(*f, fixed_rank(*f));
    std::size_t k = 0;
    while (k < s.size() && !std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    fam = s.substr(0, k);
    if (k == s.size()) schema_error(where, "missing rank in '" + s + "'");
    rank = static_cast<unsigned>(std::stoul(s.substr(k)));
  } else {
    schema_error(where, "expected [\"A\", 1] or \"A1\"");
  }
  auto f = family_from_string(fam);
  if (!f) {
    // "E" with a rank selects the exceptional family of that rank.
    if (fam == "E" && rank >= 6 && rank <= 8) f = rank == 6 ? Family::E6 : rank == 7 ? Family::E7 : Family::E8;
    else if ((fam == "F" && rank == 4) || (fam == "G" && rank == 2)) f = fam == "F" ? Family::F4 : Family::G2;
    else schema_error(where, "unknown Lie family '" + fam + "'");
  }
  try {
    return make_tag(*f, rank);
  } catch (const Error& err) {
    schema_error(where, err.what());
  }
}

inline AmbientSpec parse_ambient(const json& a, std::uint64_t prime, unsigned default_ext) {
  const std::string w = "/ambient";
  const json& factors = require(a, "factors", w);
  if (!factors.is_array() || factors.empty()) schema_error(w + "/factors", "expected a nonempty array");
  AmbientSpec spec;
  for (std::size_t i = 0; i < factors.size(); ++i) spec.factors.push_back(parse_tag(factors[i], w + "/factors/" + std::to_string(i)));
  if (auto it = a.find("simply_connected"); it != a.end()) {
    if (!it->is_boolean()) schema_error(w + "/simply_connected", "expected a boolean");
    spec.simply_connected = it->get<bool>();
  }
  unsigned ext = default_ext;
  if (auto it = a.find("ext_degree"); it != a.end())
    ext = static_cast<unsigned>(require_uint(*it, w + "/ext_degree"));
  if (auto it = a.find("radical_dim"); it != a.end())
    spec.radical_dim = static_cast<unsigned>(require_uint(*it, w + "/radical_dim"));
  try {
    spec.field = make_field(static_cast<std::uint32_t>(prime), ext);
  } catch (const Error& err) {
    schema_error(w + "/ext_degree", err.what());
  }
  return spec;
}

}  // namespace detail

/// Validates an instance document. Out-of-range finite-field entries are
/// reduced with a warning.
inline Instance parse_instance(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) schema_error("", "expected an object");
  Instance inst;
  inst.canonical = doc;
  inst.digest = sha256_hex(canonical_dump(doc));
  inst.prime = require_uint(require(doc, "prime", ""), "/prime");
  if (!is_prime(inst.prime)) throw Error(ErrorKind::NotPrime, std::to_string(inst.prime) + " is not prime");
  if (auto it = doc.find("ext_degree"); it != doc.end())
    inst.ext_degree = static_cast<unsigned>(require_uint(*it, "/ext_degree"));
  inst.dim = require_uint(require(doc, "dim", ""), "/dim");
  if (inst.dim == 0) schema_error("/dim", "must be >= 1");
  if (auto it = doc.find("rational"); it != doc.end()) {
    if (!it->is_boolean()) schema_error("/rational", "expected a boolean");
    inst.rational = it->get<bool>();
  }
  const json& gens = require(doc, "generators", "");
  if (!gens.is_array() || gens.empty()) schema_error("/generators", "expected a nonempty array");

  if (inst.rational) {
    if (inst.ext_degree != 1) schema_error("/ext_degree", "rational instances live over the prime field");
    for (std::size_t g = 0; g < gens.size(); ++g) {
      auto rows = parse_matrix<Rational>(gens[g], inst.dim, "/generators/" + std::to_string(g), parse_rational);
      RationalMat m(inst.dim);
      for (std::size_t i = 0; i < inst.dim; ++i)
        for (std::size_t j = 0; j < inst.dim; ++j) m(i, j) = rows[i][j];
      inst.rational_gens.push_back(std::move(m));
    }
  } else {
    FieldPtr F = make_field(static_cast<std::uint32_t>(inst.prime), inst.ext_degree);
    std::vector<Mat> mats;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      auto rows = parse_matrix<FieldElement>(gens[g], inst.dim, "/generators/" + std::to_string(g),
                                             [&](const json& v, const std::string& w) { return parse_entry(*F, v, w, inst.warnings); });
      Mat m(inst.dim);
      for (std::size_t i = 0; i < inst.dim; ++i)
        for (std::size_t j = 0; j < inst.dim; ++j) m(i, j) = rows[i][j];
      if (mat::det(*F, m).code == 0) schema_error("/generators/" + std::to_string(g), "matrix is singular");
      mats.push_back(std::move(m));
    }
    inst.group = make_instance(F, inst.dim, std::move(mats));
  }
  if (auto it = doc.find("ambient"); it != doc.end() && !it->is_null()) {
    inst.ambient = parse_ambient(*it, inst.prime, inst.ext_degree);
    if (inst.group) inst.group->ambient = inst.ambient;
  }
  return inst;
}

inline Instance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw Error(ErrorKind::SchemaError, std::string("at /: invalid JSON: ") + err.what());
  }
  return parse_instance(doc);
}

inline Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization

inline json big_to_json(const BigInt& v) {
  if (auto u = to_u64(v)) return *u;
  return v.str();
}

inline json matrix_to_json(const Field& F, const Mat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n; ++j) {
      if (F.is_prime_field()) {
        row.push_back(m(i, j).code);
      } else {
        json c = json::array();
        for (auto x : F.coeffs(m(i, j))) c.push_back(x);
        row.push_back(c);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

inline json rational_to_json(const RationalMat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n; ++j) {
      const Rational& r = m(i, j);
      if (boost::multiprecision::denominator(r) == 1) row.push_back(big_to_json(boost::multiprecision::numerator(r)));
      else row.push_back(r.str());
    }
    rows.push_back(row);
  }
  return rows;
}

inline json per_type_to_json(const PerTypeRanks& m) {
  json out = json::object();
  for (const auto& [t, r] : m) out[to_string(t)] = r;
  return out;
}

inline json profile_to_json(const RankProfile& p) {
  return {{"dim_ell", p.dim_ell}, {"rk_ell", p.rk_ell}, {"per_type", per_type_to_json(p.per_type)}};
}

inline json factor_to_json(const CompositionFactor& c) {
  json j = {{"kind", to_string(c.kind)}, {"order", c.order}, {"label", c.label}};
  if (c.type) {
    j["type"] = to_string(*c.type);
    j["f"] = c.f;
  }
  return j;
}

inline json envelope_to_json(const NoriEnvelope& e) {
  return {{"dim_full", e.dim_full},
          {"dim_ss", e.dim_ss},
          {"rank", e.rank},
          {"heuristic_regime", e.heuristic_regime},
          {"sample_seed", e.sample_seed},
          {"rank_exhaustive", e.rank_exhaustive},
          {"unipotents_harvested", e.unipotents},
          {"sampled_harvest", e.sampled_harvest}};
}

inline json ambient_to_json(const AmbientSpec& a) {
  json f = json::array();
  for (const auto& t : a.factors) f.push_back(to_string(t));
  auto inv = ambient_invariants(a);
  return {{"factors", f},
          {"simply_connected", a.simply_connected},
          {"ext_degree", a.ext_degree()},
          {"radical_dim", a.radical_dim},
          {"rank", inv.rank},
          {"dim", inv.dim},
          {"type_a", inv.is_type_a}};
}

inline json certificate_to_json(const Certificate& c) {
  const Evidence& e = c.evidence;
  json ev = {{"profile", profile_to_json(e.profile)},
             {"per_type_known", e.per_type_known},
             {"f", e.f},
             {"ambient_rank", e.ambient.rank},
             {"ambient_dim", e.ambient.dim},
             {"ambient_type_a", e.ambient.is_type_a},
             {"heuristic_regime", e.heuristic_regime},
             {"threshold_mult", e.threshold_mult},
             {"reason", e.reason}};
  if (e.expected_per_type) ev["expected_per_type"] = per_type_to_json(*e.expected_per_type);
  if (e.group_order) ev["group_order"] = big_to_json(*e.group_order);
  if (e.expected_order) ev["expected_order"] = big_to_json(*e.expected_order);
  return {{"criterion", to_string(c.criterion)}, {"verdict", to_string(c.verdict)}, {"evidence", ev}};
}

struct ReportContext {
  std::string input_digest;
  json options;
  std::vector<std::string> parse_warnings;
  std::optional<json> lattice;  // stabilization summary for rational input
};

inline json report_to_json(const GroupInstance& g, const Report& r, const ReportContext& ctx) {
  json inst = {{"prime", g.field->ell()}, {"ext_degree", g.field->degree()}, {"dim", g.n},
               {"generators", g.generators.size()}, {"field", g.field->describe()}};
  if (g.ambient) inst["ambient"] = ambient_to_json(*g.ambient);

  json profile = profile_to_json(r.profile);
  profile["source"] = r.profile_source;
  profile["per_type_known"] = r.per_type_known;

  json out = {{"tool", kToolName},
              {"version", kToolVersion},
              {"input_digest", ctx.input_digest},
              {"instance", inst},
              {"options", ctx.options},
              {"profile", profile}};
  if (r.group_order) out["group_order"] = big_to_json(*r.group_order);
  if (r.composition) {
    json comp = json::array();
    for (const auto& c : *r.composition) comp.push_back(factor_to_json(c));
    out["composition"] = comp;
  }
  out["envelope"] = r.envelope ? envelope_to_json(*r.envelope) : json(nullptr);
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
  out["certificates"] = certs;
  json warnings = json::array();
  for (const auto& w : ctx.parse_warnings) warnings.push_back(w);
  for (const auto& w : r.warnings) warnings.push_back(w);
  out["flags"] = {{"cap_exceeded", r.cap_exceeded},
                  {"heuristic_regime", r.heuristic_regime},
                  {"routes_agree", r.routes_agree ? json(*r.routes_agree) : json(nullptr)},
                  {"warnings", warnings}};
  if (ctx.lattice) out["lattice"] = *ctx.lattice;
  return out;
}

// ---------------------------------------------------------------------------
// Tables

inline json tables_json(std::optional<std::uint64_t> ell) {
  json types = json::array();
  auto add = [&](Family f, unsigned n) {
    LieTypeTag t = make_tag(f, n);
    types.push_back({{"type", to_string(t)}, {"rank", type_rank(t)}, {"dim", type_dim(t)}});
  };
  for (unsigned n = 1; n <= 8; ++n) add(Family::A, n);
  for (unsigned n = 2; n <= 8; ++n) add(Family::B, n);
  for (unsigned n = 2; n <= 8; ++n) add(Family::C, n);
  for (unsigned n = 3; n <= 8; ++n) add(Family::D, n);
  for (Family f : {Family::E6, Family::E7, Family::E8, Family::F4, Family::G2}) add(f, fixed_rank(f));

  json orders = json::array();
  std::vector<std::uint64_t> qs;
  if (ell) {
    BigInt q = *ell;
    for (unsigned k = 1; k <= 3; ++k, q *= *ell) qs.push_back(static_cast<std::uint64_t>(q));
  } else {
    qs = {5, 7, 11, 13, 25, 49};
  }
  const ClassicalGroup groups[] = {{ClassicalFamily::SL, 2},   {ClassicalFamily::SL, 3},   {ClassicalFamily::SL, 4},
                                   {ClassicalFamily::Sp, 4},   {ClassicalFamily::Sp, 6},   {ClassicalFamily::SU, 3},
                                   {ClassicalFamily::SU, 4},   {ClassicalFamily::Spin, 5}, {ClassicalFamily::Spin, 7},
                                   {ClassicalFamily::Spin, 8}};
  for (auto q : qs)
    for (const auto& g : groups)
      orders.push_back({{"group", to_string(g)}, {"q", q}, {"order", big_to_json(chevalley_order(g, q))}});

  json cat = json::array();
  for (const auto& e : catalogue()) {
    if (ell && e.p != *ell && e.family != SimpleFamily::Alternating) continue;
    if (!ell && e.order > 100'000'000) continue;
    cat.push_back({{"label", e.label}, {"order", e.order}, {"type", e.lie_type() ? to_string(*e.lie_type()) : "none"}});
  }
  return {{"types", types}, {"chevalley_orders", orders}, {"simple_groups", cat}};
}

inline std::string tables_text(const json& t) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "type" << std::setw(6) << "rank" << "dim\n";
  for (const auto& r : t["types"])
    out << std::setw(8) << r["type"].get<std::string>() << std::setw(6) << r["rank"].get<unsigned>() << r["dim"].get<unsigned>()
        << "\n";
  out << "\n" << std::setw(10) << "group" << std::setw(8) << "q" << "order\n";
  for (const auto& r : t["chevalley_orders"])
    out << std::setw(10) << r["group"].get<std::string>() << std::setw(8) << r["q"].get<std::uint64_t>() << r["order"].dump()
        << "\n";
  out << "\n" << std::setw(16) << "simple group" << std::setw(22) << "order" << "type\n";
  for (const auto& r : t["simple_groups"])
    out << std::setw(16) << r["label"].get<std::string>() << std::setw(22) << r["order"].get<std::uint64_t>()
        << r["type"].get<std::string>() << "\n";
  return out.str();
}

}  // namespace nori
