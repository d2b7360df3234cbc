#pragma once

#include <string>
#include <vector>

#include "nori/gf.hpp"
#include "nori/lietypes.hpp"

namespace nori {

/// Declared Zariski-closure data for a matrix group: the simple factors of
/// its semisimple part, whether it is simply connected, the field it is
/// defined over, and the dimension of its radical (0 means semisimple).
struct AmbientSpec {
  std::vector<LieTypeTag> factors;
  bool simply_connected = true;
  FieldPtr field;
  unsigned radical_dim = 0;

  bool semisimple() const noexcept { return radical_dim == 0; }
  unsigned ext_degree() const noexcept { return field ? field->degree() : 1; }
};

struct AmbientInvariants {
  unsigned rank = 0;
  unsigned dim = 0;
  bool is_type_a = true;

  friend bool operator==(const AmbientInvariants&, const AmbientInvariants&) = default;
};

inline AmbientInvariants ambient_invariants(const AmbientSpec& a) {
  if (a.factors.empty()) throw Error(ErrorKind::InvalidArgument, "ambient has no simple factors");
  AmbientInvariants inv;
  for (const auto& t : a.factors) {
    inv.rank += type_rank(t);
    inv.dim += type_dim(t);
    inv.is_type_a = inv.is_type_a && canonical(t).family == Family::A;
  }
  inv.dim += a.radical_dim;
  return inv;
}

/// Per-type ranks of the simply connected ambient over its own field:
/// m_LT * rk LT for each type LT, before scaling by the extension degree.
inline PerTypeRanks ambient_per_type(const AmbientSpec& a) {
  PerTypeRanks out;
  for (const auto& t : a.factors) out[canonical(t)] += type_rank(t);
  return out;
}

inline std::string describe(const AmbientSpec& a) {
  std::string s;
  for (const auto& t : a.factors) s += (s.empty() ? "" : "x") + to_string(t);
  if (a.field) s += " over " + a.field->describe();
  return s;
}

}  // namespace nori
