#pragma once

// Deterministic Schreier-Sims for matrix groups acting on the right on the
// nonzero row vectors of F_q^n. The base is the standard basis e_1..e_n, so
// the chain always has exactly n levels and the pointwise stabilizer of the
// base is trivial.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nori/bigint.hpp"
#include "nori/error.hpp"
#include "nori/gf.hpp"

namespace nori {

inline constexpr std::uint64_t kDefaultDomainBound = std::uint64_t(1) << 22;

class StabilizerChain {
 public:
  StabilizerChain(FieldPtr field, std::size_t n, std::span<const Mat> generators,
                  std::uint64_t domain_bound = kDefaultDomainBound)
      : F_(std::move(field)), n_(n) {
    std::uint64_t points = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (points > domain_bound + 1) break;
      points *= F_->size();
    }
    if (points - 1 > domain_bound)
      throw Error(ErrorKind::DomainTooLarge, "permutation domain of " + F_->describe() + "^" +
                                                 std::to_string(n) + " exceeds bound " +
                                                 std::to_string(domain_bound));
    levels_.resize(n_);
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      levels_[i].base = place;  // code of e_i
      place *= F_->size();
    }
    for (const Mat& g : generators) insert_generator(g);
    for (std::size_t i = 0; i < n_; ++i) rebuild_orbit(i);
    complete(n_ - 1);
  }

  const Field& field() const noexcept { return *F_; }
  std::size_t side() const noexcept { return n_; }

  BigInt order() const {
    BigInt o = 1;
    for (const auto& lv : levels_) o *= lv.points.size();
    return o;
  }

  std::vector<std::size_t> orbit_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& lv : levels_) out.push_back(lv.points.size());
    return out;
  }

  bool contains(const Mat& g) const { return sift(g, 0).level == n_; }

  /// Adds g unless it already lies in the group. Returns true if the group grew.
  bool add_generator(const Mat& g) {
    Sifted s = sift(g, 0);
    if (s.level == n_) return false;
    for (std::size_t l = 0; l <= s.level; ++l) levels_[l].gens.push_back(s.residue);
    for (std::size_t l = 0; l <= s.level; ++l) rebuild_orbit(l);
    complete(n_ - 1);
    return true;
  }

  /// Generators of the whole group (level 0 strong generators).
  const std::vector<Mat>& generators() const noexcept { return levels_[0].gens; }

 private:
  struct Level {
    std::uint64_t base = 0;
    std::vector<Mat> gens;
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<std::uint64_t> points;
    std::vector<Mat> transversal;      // e_i * transversal[k] = points[k]
    std::vector<Mat> transversal_inv;
  };

  struct Sifted {
    Mat residue;
    std::size_t level;  // n_ when the residue is the identity
  };

  std::uint64_t apply(std::uint64_t v, const Mat& m) const {
    const std::uint32_t q = F_->size();
    FieldElement in[64];
    for (std::size_t i = 0; i < n_; ++i) {
      in[i].code = static_cast<std::uint32_t>(v % q);
      v /= q;
    }
    std::uint64_t out = 0, place = 1;
    for (std::size_t j = 0; j < n_; ++j) {
      FieldElement s = F_->zero();
      for (std::size_t i = 0; i < n_; ++i)
        if (in[i].code) s = F_->add(s, F_->mul(in[i], m(i, j)));
      out += s.code * place;
      place *= q;
    }
    return out;
  }

  void insert_generator(const Mat& g) {
    if (mat::is_identity(*F_, g)) return;
    std::size_t moved = 0;
    while (moved < n_ && apply(levels_[moved].base, g) == levels_[moved].base) ++moved;
    for (std::size_t l = 0; l <= moved && l < n_; ++l) levels_[l].gens.push_back(g);
  }

  void rebuild_orbit(std::size_t l) {
    Level& lv = levels_[l];
    lv.index.clear();
    lv.points.assign(1, lv.base);
    lv.transversal.assign(1, mat::identity(*F_, n_));
    lv.transversal_inv.assign(1, mat::identity(*F_, n_));
    lv.index.emplace(lv.base, 0);
    for (std::size_t k = 0; k < lv.points.size(); ++k) {
      for (const Mat& s : lv.gens) {
        std::uint64_t image = apply(lv.points[k], s);
        if (lv.index.contains(image)) continue;
        lv.index.emplace(image, static_cast<std::uint32_t>(lv.points.size()));
        lv.points.push_back(image);
        Mat u = mat::mul(*F_, lv.transversal[k], s);
        lv.transversal_inv.push_back(mat::inverse(*F_, u));
        lv.transversal.push_back(std::move(u));
      }
    }
  }

  Sifted sift(Mat h, std::size_t start) const {
    for (std::size_t l = start; l < n_; ++l) {
      const Level& lv = levels_[l];
      std::uint64_t image = apply(lv.base, h);
      auto it = lv.index.find(image);
      if (it == lv.index.end()) return {std::move(h), l};
      h = mat::mul(*F_, h, lv.transversal_inv[it->second]);
    }
    return {std::move(h), n_};
  }

  // Verifies Schreier generators from level `from` up to level 0, adding
  // sifting residues and restarting at the deepest modified level.
  void complete(std::size_t from) {
    std::size_t i = from + 1;
    while (i-- > 0) {
      bool restarted = false;
      Level& lv = levels_[i];
      for (std::size_t k = 0; k < lv.points.size() && !restarted; ++k) {
        for (std::size_t s = 0; s < lv.gens.size() && !restarted; ++s) {
          std::uint64_t image = apply(lv.points[k], lv.gens[s]);
          const Mat& target_inv = lv.transversal_inv[lv.index.at(image)];
          Mat schreier = mat::mul(*F_, mat::mul(*F_, lv.transversal[k], lv.gens[s]), target_inv);
          Sifted r = sift(std::move(schreier), i + 1);
          if (r.level == n_) continue;
          for (std::size_t l = i + 1; l <= r.level; ++l) levels_[l].gens.push_back(r.residue);
          for (std::size_t l = i + 1; l <= r.level; ++l) rebuild_orbit(l);
          i = r.level + 1;
          restarted = true;
        }
      }
    }
  }

  FieldPtr F_;
  std::size_t n_;
  std::vector<Level> levels_;
};

}  // namespace nori
