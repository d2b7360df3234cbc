#pragma once

// Generator-presented matrix groups: explicit enumeration, stabilizer-chain
// orders, the subgroup generated by elements of order ell, and a
// composition-series oracle.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "nori/ambient.hpp"
#include "nori/bigint.hpp"
#include "nori/codec.hpp"
#include "nori/error.hpp"
#include "nori/gf.hpp"
#include "nori/lietypes.hpp"
#include "nori/schreier_sims.hpp"

namespace nori {

inline constexpr std::uint64_t kDefaultOracleCap = 2'000'000;

struct GroupInstance {
  FieldPtr field;
  std::size_t n = 0;
  std::vector<Mat> generators;
  std::optional<AmbientSpec> ambient;
};

/// Checks shapes and invertibility. An empty generator list is not allowed;
/// use the identity for the trivial group.
inline GroupInstance make_instance(FieldPtr field, std::size_t n, std::vector<Mat> generators,
                                   std::optional<AmbientSpec> ambient = std::nullopt) {
  if (!field) throw Error(ErrorKind::InvalidArgument, "missing field");
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "matrix side must be >= 1");
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "generator list is empty");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].n != n || generators[i].a.size() != n * n)
      throw Error(ErrorKind::InvalidArgument, "generator " + std::to_string(i) + " has wrong side");
    if (mat::det(*field, generators[i]).code == 0)
      throw Error(ErrorKind::Singular, "generator " + std::to_string(i) + " is singular");
  }
  return {std::move(field), n, std::move(generators), std::move(ambient)};
}

/// The same group with every generator Weil-restricted to the prime field.
inline GroupInstance weil_restrict(const GroupInstance& g) {
  if (g.field->is_prime_field()) return g;
  GroupInstance out{g.field->prime_field(), g.n * g.field->degree(), {}, g.ambient};
  for (const auto& m : g.generators) out.generators.push_back(weil_restrict(*g.field, m));
  return out;
}

/// Block-diagonal embedding of g1 x g2.
inline GroupInstance direct_product(const GroupInstance& g1, const GroupInstance& g2) {
  GroupInstance out{g1.field, g1.n + g2.n, {}, std::nullopt};
  for (const auto& m : g1.generators) out.generators.push_back(mat::direct_sum(m, mat::identity(*g1.field, g2.n)));
  for (const auto& m : g2.generators) out.generators.push_back(mat::direct_sum(mat::identity(*g1.field, g1.n), m));
  return out;
}

/// Explicit element list of a finite matrix group, in breadth-first order
/// from the identity.
class EnumeratedGroup {
 public:
  EnumeratedGroup(FieldPtr field, std::size_t n, std::vector<Mat> generators)
      : field_(std::move(field)), n_(n), codec_(*field_, n), generators_(std::move(generators)),
        set_(codec_.total_bits()) {}

  const Field& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  std::size_t side() const noexcept { return n_; }
  const MatCodec& codec() const noexcept { return codec_; }
  const std::vector<Mat>& generators() const noexcept { return generators_; }
  const std::vector<std::uint64_t>& codes() const noexcept { return elements_; }
  std::uint64_t order() const noexcept { return elements_.size(); }

  Mat element(std::size_t i) const { return codec_.decode(elements_[i]); }
  bool contains(const Mat& m) const { return set_.contains(codec_.encode(m)); }
  bool contains_code(std::uint64_t c) const { return set_.contains(c); }

  /// Breadth-first closure under right multiplication by the generators.
  void close(std::uint64_t cap) {
    PackedMultiplier mul(*field_, codec_);
    const std::uint64_t id = codec_.encode(mat::identity(*field_, n_));
    if (set_.insert(id)) elements_.push_back(id);
    std::vector<Mat> gens;
    for (const auto& g : generators_)
      if (!mat::is_identity(*field_, g)) gens.push_back(g);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      for (const auto& g : gens) {
        std::uint64_t y = mul.mul(elements_[i], g);
        if (set_.insert(y)) {
          elements_.push_back(y);
          if (elements_.size() > cap)
            throw Error(ErrorKind::CapExceeded, "group has more than " + std::to_string(cap) + " elements");
        }
      }
    }
  }

 private:
  FieldPtr field_;
  std::size_t n_;
  MatCodec codec_;
  std::vector<Mat> generators_;
  std::vector<std::uint64_t> elements_;
  CodeSet set_;
};

inline EnumeratedGroup enumerate(FieldPtr field, std::size_t n, std::vector<Mat> generators,
                                 std::uint64_t cap = kDefaultOracleCap) {
  if (cap < 1) throw Error(ErrorKind::InvalidArgument, "cap must be >= 1");
  EnumeratedGroup e(std::move(field), n, std::move(generators));
  e.close(cap);
  return e;
}

inline EnumeratedGroup enumerate(const GroupInstance& g, std::uint64_t cap = kDefaultOracleCap) {
  return enumerate(g.field, g.n, g.generators, cap);
}

/// Order via the stabilizer chain of the action on nonzero vectors.
inline BigInt group_order(const GroupInstance& g, std::uint64_t domain_bound = kDefaultDomainBound) {
  return StabilizerChain(g.field, g.n, g.generators, domain_bound).order();
}

namespace detail {

inline bool has_exact_order(const Field& F, const MatCodec& codec, std::uint64_t code, std::uint64_t ell,
                            std::uint64_t identity_code) {
  if (code == identity_code) return false;
  PackedMultiplier mul(F, codec);
  std::uint64_t r = identity_code, b = code;
  for (std::uint64_t e = ell; e; e >>= 1) {
    if (e & 1) r = mul.mul(r, b);
    if (e > 1) b = mul.mul(b, b);
  }
  return r == identity_code;
}

}  // namespace detail

/// Elements of exact order ell. In GL_n with n < ell every such element is
/// unipotent and no element has order ell^2.
inline std::vector<std::uint64_t> order_ell_elements(const EnumeratedGroup& e, std::uint64_t ell) {
  const std::uint64_t id = e.codec().encode(mat::identity(e.field(), e.side()));
  std::vector<std::uint64_t> out;
  for (auto c : e.codes())
    if (detail::has_exact_order(e.field(), e.codec(), c, ell, id)) out.push_back(c);
  return out;
}

/// The subgroup generated by all elements of exact order ell.
inline EnumeratedGroup plus_subgroup(const EnumeratedGroup& e, std::uint64_t ell) {
  std::vector<Mat> gens;
  EnumeratedGroup sub = enumerate(e.field_ptr(), e.side(), {mat::identity(e.field(), e.side())});
  for (auto c : order_ell_elements(e, ell)) {
    if (sub.contains_code(c)) continue;
    gens.push_back(e.codec().decode(c));
    sub = enumerate(e.field_ptr(), e.side(), gens, e.order());
  }
  return sub;
}

// ---------------------------------------------------------------------------
// Composition series

struct CompositionOptions {
  std::uint64_t cap = kDefaultOracleCap;
  std::uint64_t domain_bound = kDefaultDomainBound;
};

/// Subgroup under construction, backed by a stabilizer chain when the vector
/// domain is small enough and by explicit enumeration otherwise.
class SubgroupBuilder {
 public:
  SubgroupBuilder(FieldPtr field, std::size_t n, const CompositionOptions& opt)
      : field_(std::move(field)), n_(n), cap_(opt.cap) {
    try {
      chain_.emplace(field_, n_, std::span<const Mat>{}, opt.domain_bound);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::DomainTooLarge) throw;
      enumerated_.emplace(enumerate(field_, n_, {mat::identity(*field_, n_)}, cap_));
    }
  }

  BigInt order() const { return chain_ ? chain_->order() : BigInt(enumerated_->order()); }
  bool contains(const Mat& m) const { return chain_ ? chain_->contains(m) : enumerated_->contains(m); }
  const std::vector<Mat>& generators() const noexcept { return gens_; }

  bool add(const Mat& m) {
    if (contains(m)) return false;
    gens_.push_back(m);
    if (chain_) chain_->add_generator(m);
    else enumerated_.emplace(enumerate(field_, n_, gens_, cap_));
    return true;
  }

 private:
  FieldPtr field_;
  std::size_t n_;
  std::uint64_t cap_;
  std::optional<StabilizerChain> chain_;
  std::optional<EnumeratedGroup> enumerated_;
  std::vector<Mat> gens_;
};

struct ConjugacyClass {
  std::uint64_t rep;
  std::uint64_t size;
};

/// Orbits of the conjugation action, sorted by (size, representative code).
inline std::vector<ConjugacyClass> conjugacy_classes(const EnumeratedGroup& e) {
  const Field& F = e.field();
  PackedMultiplier mul(F, e.codec());
  std::vector<std::pair<Mat, Mat>> gens;  // (g, g^-1)
  for (const auto& g : e.generators())
    if (!mat::is_identity(F, g)) gens.emplace_back(g, mat::inverse(F, g));
  CodeSet seen(e.codec().total_bits());
  std::vector<ConjugacyClass> out;
  std::vector<std::uint64_t> queue;
  for (auto start : e.codes()) {
    if (seen.contains(start)) continue;
    seen.insert(start);
    queue.assign(1, start);
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& [g, ginv] : gens) {
        std::uint64_t c = mul.sandwich(ginv, queue[i], g);
        if (seen.insert(c)) queue.push_back(c);
      }
    out.push_back({start, queue.size()});
  }
  std::sort(out.begin(), out.end(),
            [](const ConjugacyClass& a, const ConjugacyClass& b) { return std::tie(a.size, a.rep) < std::tie(b.size, b.rep); });
  return out;
}

struct NormalSubgroup {
  SubgroupBuilder group;
  std::vector<Mat> normal_generators;  // generates the group as a subgroup
};

/// Normal closure in <ambient_gens> of base together with x. Stops early
/// once the closure reaches ambient_order.
inline NormalSubgroup normal_closure(const Field& F, std::span<const Mat> ambient_gens,
                                     const BigInt& ambient_order, NormalSubgroup base, const Mat& x) {
  std::vector<std::pair<Mat, Mat>> conj;
  for (const auto& g : ambient_gens) conj.emplace_back(g, mat::inverse(F, g));
  if (base.group.add(x)) base.normal_generators.push_back(x);
  for (std::size_t i = 0; i < base.normal_generators.size(); ++i) {
    if (base.group.order() == ambient_order) break;
    for (const auto& [g, ginv] : conj) {
      Mat c = mat::mul(F, mat::mul(F, ginv, base.normal_generators[i]), g);
      if (base.group.add(c)) {
        base.normal_generators.push_back(std::move(c));
        if (base.group.order() == ambient_order) break;
      }
    }
  }
  return base;
}

/// A maximal proper normal subgroup: greedily absorbs conjugacy classes in
/// (size, code) order while the normal closure stays proper. A class rejected
/// once stays rejected because the accumulated subgroup only grows, so one
/// pass suffices.
inline NormalSubgroup maximal_normal_subgroup(const EnumeratedGroup& e, const CompositionOptions& opt) {
  const Field& F = e.field();
  const BigInt order = e.order();
  NormalSubgroup n{SubgroupBuilder(e.field_ptr(), e.side(), opt), {}};
  const std::uint64_t id = e.codec().encode(mat::identity(F, e.side()));
  for (const auto& cls : conjugacy_classes(e)) {
    if (cls.rep == id) continue;
    Mat x = e.codec().decode(cls.rep);
    if (n.group.contains(x)) continue;
    NormalSubgroup k = normal_closure(F, e.generators(), order, n, x);
    if (k.group.order() < order) n = std::move(k);
  }
  return n;
}

/// Small generating set: keeps only generators that enlarge the group.
inline std::vector<Mat> prune_generators(FieldPtr field, std::size_t n, std::span<const Mat> gens,
                                         const CompositionOptions& opt) {
  SubgroupBuilder b(field, n, opt);
  std::vector<Mat> out;
  for (const auto& g : gens)
    if (b.add(g)) out.push_back(g);
  return out;
}

/// Composition factors of e, top-down along a chain of maximal normal
/// subgroups, classified by order. Sorted by (order, kind).
inline std::vector<CompositionFactor> composition_series(const EnumeratedGroup& e, std::uint64_t ell,
                                                         const CompositionOptions& opt = {}) {
  if (e.order() > opt.cap)
    throw Error(ErrorKind::CapExceeded, "group order " + std::to_string(e.order()) + " exceeds oracle cap");
  std::vector<CompositionFactor> factors;
  std::optional<EnumeratedGroup> owned;
  const EnumeratedGroup* current = &e;
  while (current->order() > 1) {
    NormalSubgroup n = maximal_normal_subgroup(*current, opt);
    const std::uint64_t sub_order = static_cast<std::uint64_t>(n.group.order());
    factors.push_back(classify_factor(current->order() / sub_order, ell));
    if (sub_order == 1) break;
    auto gens = prune_generators(current->field_ptr(), current->side(), n.normal_generators, opt);
    owned.emplace(enumerate(current->field_ptr(), current->side(), std::move(gens), opt.cap));
    current = &*owned;
  }
  std::sort(factors.begin(), factors.end());
  return factors;
}

}  // namespace nori
