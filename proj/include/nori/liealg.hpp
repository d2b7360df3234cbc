#pragma once

// Lie-algebra side of the rank computation: truncated exp/log of nilpotent
// matrices, bracket closure of harvested logarithms, the quotient by the
// radical of the Killing form, and the rank of the result.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "nori/error.hpp"
#include "nori/gf.hpp"
#include "nori/grp.hpp"

namespace nori {

namespace detail {

inline void require_char_above(const Field& F, std::size_t n, const char* what) {
  if (F.ell() <= n)
    throw Error(ErrorKind::CharTooSmall, std::string(what) + " needs ell > " + std::to_string(n) + ", got ell = " +
                                             std::to_string(F.ell()));
}

inline std::vector<Mat> powers(const Field& F, const Mat& x, std::size_t count) {
  std::vector<Mat> p{mat::identity(F, x.n)};
  for (std::size_t k = 1; k < count; ++k) p.push_back(mat::mul(F, p.back(), x));
  return p;
}

}  // namespace detail

/// 1 + t x + (t x)^2/2! + ... + (t x)^{n-1}/(n-1)! for nilpotent x.
inline Mat nil_exp(const Field& F, const Mat& x, FieldElement t) {
  const std::size_t n = x.n;
  detail::require_char_above(F, n, "nil_exp");
  auto p = detail::powers(F, x, n + 1);
  if (!mat::is_zero(p[n])) throw Error(ErrorKind::NotNilpotent, "x^n is nonzero");
  Mat out = p[0];
  FieldElement coeff = F.one();  // t^k / k!
  for (std::size_t k = 1; k < n; ++k) {
    coeff = F.mul(coeff, F.mul(t, F.inv(F.from_int(static_cast<std::int64_t>(k)))));
    out = mat::add(F, out, mat::scale(F, coeff, p[k]));
  }
  return out;
}

inline Mat nil_exp(const Field& F, const Mat& x) { return nil_exp(F, x, F.one()); }

/// sum_{i=1}^{n-1} (-1)^{i+1} (u - 1)^i / i for unipotent u.
inline Mat nil_log(const Field& F, const Mat& u) {
  const std::size_t n = u.n;
  detail::require_char_above(F, n, "nil_log");
  Mat y = mat::sub(F, u, mat::identity(F, n));
  auto p = detail::powers(F, y, n + 1);
  if (!mat::is_zero(p[n])) throw Error(ErrorKind::NotUnipotent, "(u - 1)^n is nonzero");
  Mat out(n);
  for (std::size_t i = 1; i < n; ++i) {
    FieldElement c = F.inv(F.from_int(static_cast<std::int64_t>(i)));
    if (i % 2 == 0) c = F.neg(c);
    out = mat::add(F, out, mat::scale(F, c, p[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Row-reduced spans

/// Reduced row echelon basis of a subspace of F^dim, grown one vector at a
/// time. Every row has a 1 in its pivot column and zeros in the pivot
/// columns of the other rows, so the final basis is canonical.
class EchelonSpan {
 public:
  EchelonSpan(const Field& F, std::size_t dim) : F_(&F), dim_(dim) {}

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t ambient_dim() const noexcept { return dim_; }
  const std::vector<std::vector<FieldElement>>& rows() const noexcept { return rows_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// v minus its projection along the pivot columns.
  std::vector<FieldElement> reduce(std::vector<FieldElement> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      FieldElement c = v[pivots_[r]];
      if (c.code == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (rows_[r][j].code) v[j] = F_->sub(v[j], F_->mul(c, rows_[r][j]));
    }
    return v;
  }

  /// Coordinates of v relative to rows(), assuming v lies in the span.
  std::vector<FieldElement> coordinates(std::span<const FieldElement> v) const {
    std::vector<FieldElement> c(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) c[r] = v[pivots_[r]];
    return c;
  }

  bool contains(const std::vector<FieldElement>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](FieldElement e) { return e.code == 0; });
  }

  /// Returns true when v was outside the span.
  bool insert(std::vector<FieldElement> v) {
    v = reduce(std::move(v));
    std::size_t p = 0;
    while (p < dim_ && v[p].code == 0) ++p;
    if (p == dim_) return false;
    FieldElement inv = F_->inv(v[p]);
    for (auto& e : v) e = F_->mul(e, inv);
    for (auto& row : rows_) {
      FieldElement c = row[p];
      if (c.code == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (v[j].code) row[j] = F_->sub(row[j], F_->mul(c, v[j]));
    }
    auto at = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + at, p);
    rows_.insert(rows_.begin() + at, std::move(v));
    return true;
  }

 private:
  const Field* F_;
  std::size_t dim_;
  std::vector<std::vector<FieldElement>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Basis of the null space {v : M v = 0} of a rows x cols matrix.
inline std::vector<std::vector<FieldElement>> null_space(const Field& F, std::vector<std::vector<FieldElement>> m,
                                                         std::size_t cols) {
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][c].code == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    FieldElement inv = F.inv(m[r][c]);
    for (auto& e : m[r]) e = F.mul(e, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].code == 0) continue;
      FieldElement k = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(k, m[r][j]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<FieldElement>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<FieldElement> v(cols);
    v[free] = F.one();
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = F.neg(m[i][free]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Rank of a dense square matrix given row-major in `a` (destroyed).
inline std::size_t matrix_rank(const Field& F, std::span<FieldElement> a, std::size_t d) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < d; ++c) {
    std::size_t sel = r;
    while (sel < d && a[sel * d + c].code == 0) ++sel;
    if (sel == d) continue;
    if (sel != r)
      for (std::size_t j = 0; j < d; ++j) std::swap(a[sel * d + j], a[r * d + j]);
    FieldElement inv = F.inv(a[r * d + c]);
    for (std::size_t i = r + 1; i < d; ++i) {
      FieldElement k = a[i * d + c];
      if (k.code == 0) continue;
      k = F.mul(k, inv);
      for (std::size_t j = c; j < d; ++j)
        if (a[r * d + j].code) a[i * d + j] = F.sub(a[i * d + j], F.mul(k, a[r * d + j]));
    }
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lie algebras

/// A Lie algebra over a field with a chosen basis. `basis` holds matrix
/// representatives (for a quotient, representatives of the cosets);
/// `structure[i][j]` holds the coordinates of [b_i, b_j].
struct LieAlgebraBasis {
  FieldPtr field;
  std::size_t n = 0;  // side of the representing matrices
  std::vector<Mat> basis;
  std::vector<std::vector<std::vector<FieldElement>>> structure;

  std::size_t dim() const noexcept { return basis.size(); }
};

namespace detail {

inline std::vector<FieldElement> flatten(const Mat& m) { return m.a; }

inline Mat unflatten(std::size_t n, const std::vector<FieldElement>& v) {
  Mat m(n);
  m.a = v;
  return m;
}

inline std::vector<std::vector<std::vector<FieldElement>>> matrix_structure(const Field& F,
                                                                            const std::vector<Mat>& basis,
                                                                            const EchelonSpan& span) {
  const std::size_t d = basis.size();
  std::vector<std::vector<std::vector<FieldElement>>> c(d, std::vector<std::vector<FieldElement>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c[i][j] = span.coordinates(mat::bracket(F, basis[i], basis[j]).a);
  return c;
}

}  // namespace detail

/// Smallest bracket-closed subspace of M_n containing the seed, in reduced
/// echelon form.
inline LieAlgebraBasis bracket_closure(FieldPtr field, std::size_t n, std::span<const Mat> seed) {
  const Field& F = *field;
  EchelonSpan span(F, n * n);
  std::vector<Mat> found;  // insertion order, drives the worklist
  for (const auto& s : seed) {
    if (s.n != n) throw Error(ErrorKind::InvalidArgument, "seed matrix has wrong side");
    if (span.insert(s.a)) found.push_back(s);
  }
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      Mat b = mat::bracket(F, found[i], found[j]);
      if (span.insert(b.a)) found.push_back(std::move(b));
    }
  LieAlgebraBasis out{std::move(field), n, {}, {}};
  for (const auto& row : span.rows()) out.basis.push_back(detail::unflatten(n, row));
  out.structure = detail::matrix_structure(F, out.basis, span);
  return out;
}

/// Every bracket of basis elements lies in the span. Only meaningful for
/// algebras whose basis is a genuine matrix subspace (not a quotient).
inline bool is_bracket_closed(const LieAlgebraBasis& L) {
  const Field& F = *L.field;
  EchelonSpan span(F, L.n * L.n);
  for (const auto& b : L.basis) span.insert(b.a);
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!span.contains(mat::bracket(F, L.basis[i], L.basis[j]).a)) return false;
  return true;
}

/// ad(x) for x given in coordinates, as a d x d row-major matrix whose
/// column j holds the coordinates of [x, b_j].
inline void adjoint(const LieAlgebraBasis& L, std::span<const FieldElement> x, std::span<FieldElement> out) {
  const Field& F = *L.field;
  const std::size_t d = L.dim();
  std::fill(out.begin(), out.end(), F.zero());
  for (std::size_t i = 0; i < d; ++i) {
    if (x[i].code == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      const auto& c = L.structure[i][j];
      for (std::size_t k = 0; k < d; ++k)
        if (c[k].code) out[k * d + j] = F.add(out[k * d + j], F.mul(x[i], c[k]));
    }
  }
}

/// Gram matrix of the Killing form tr(ad b_i ad b_j).
inline std::vector<std::vector<FieldElement>> killing_gram(const LieAlgebraBasis& L) {
  const Field& F = *L.field;
  const std::size_t d = L.dim();
  std::vector<std::vector<FieldElement>> ad(d, std::vector<FieldElement>(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<FieldElement> e(d);
    e[i] = F.one();
    adjoint(L, e, ad[i]);
  }
  std::vector<std::vector<FieldElement>> g(d, std::vector<FieldElement>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      FieldElement s = F.zero();
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t m = 0; m < d; ++m) s = F.add(s, F.mul(ad[i][k * d + m], ad[j][m * d + k]));
      g[i][j] = g[j][i] = s;
    }
  return g;
}

inline constexpr unsigned kDefaultThresholdMult = 4;

/// Below this characteristic the Killing-radical step is outside its
/// documented safe range.
inline bool heuristic_regime(std::uint64_t ell, std::size_t n, std::size_t dim, unsigned mult = kDefaultThresholdMult) {
  return ell <= std::max<std::uint64_t>(n, std::uint64_t(mult) * dim);
}

struct KillingOptions {
  bool strict = false;  // throw CharTooSmall in the heuristic regime
  unsigned threshold_mult = kDefaultThresholdMult;
};

/// L modulo the radical of its Killing form. The basis of the result is a
/// set of coset representatives chosen among the original basis vectors;
/// brackets are projected along the radical.
inline LieAlgebraBasis killing_radical_quotient(const LieAlgebraBasis& L, const KillingOptions& opt = {}) {
  const Field& F = *L.field;
  const std::size_t d = L.dim();
  if (opt.strict && heuristic_regime(F.ell(), 0, d, opt.threshold_mult))
    throw Error(ErrorKind::CharTooSmall, "Killing radical step needs ell > " + std::to_string(opt.threshold_mult) +
                                             " * " + std::to_string(d));
  if (d == 0) return L;
  EchelonSpan radical(F, d);
  for (auto& v : null_space(F, killing_gram(L), d)) radical.insert(std::move(v));
  if (radical.rank() == 0) return L;

  std::vector<bool> is_pivot(d, false);
  for (auto p : radical.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d; ++i)
    if (!is_pivot[i]) keep.push_back(i);

  LieAlgebraBasis out{L.field, L.n, {}, {}};
  for (auto i : keep) out.basis.push_back(L.basis[i]);
  const std::size_t e = keep.size();
  out.structure.assign(e, std::vector<std::vector<FieldElement>>(e));
  for (std::size_t a = 0; a < e; ++a)
    for (std::size_t b = 0; b < e; ++b) {
      auto v = radical.reduce(L.structure[keep[a]][keep[b]]);
      std::vector<FieldElement> c(e);
      for (std::size_t k = 0; k < e; ++k) c[k] = v[keep[k]];
      out.structure[a][b] = std::move(c);
    }
  return out;
}

struct RankOptions {
  std::uint64_t seed = 0x5eed;
  std::uint64_t exhaustive_limit = 1'000'000;  // on q^dim
  std::uint64_t samples = 10'000;
  unsigned threads = 0;  // 0: NORI_RANK_THREADS or 1
};

struct LieRankResult {
  unsigned rank = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::uint64_t evaluated = 0;
};

namespace detail {

inline unsigned rank_threads(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("NORI_RANK_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 64));
  }
  return 1;
}

inline std::size_t kernel_dim(const LieAlgebraBasis& L, std::span<const FieldElement> x, std::vector<FieldElement>& scratch) {
  const std::size_t d = L.dim();
  adjoint(L, x, scratch);
  return d - matrix_rank(*L.field, scratch, d);
}

}  // namespace detail

/// Minimum of dim ker(ad x). Exhaustive over projective points when q^dim is
/// within the limit, else over a seeded sample.
inline LieRankResult lie_rank(const LieAlgebraBasis& L, const RankOptions& opt = {}) {
  const Field& F = *L.field;
  const std::size_t d = L.dim();
  LieRankResult res;
  res.seed = opt.seed;
  if (d == 0) return res;

  const std::uint64_t q = F.size();
  std::uint64_t total = 1;
  bool small = true;
  for (std::size_t i = 0; i < d && small; ++i) {
    total *= q;
    small = total <= opt.exhaustive_limit;
  }
  res.exhaustive = small;

  // Work item k maps to a vector; split items across threads and take the
  // minimum, which is independent of the split.
  std::uint64_t items = 0;
  std::vector<std::vector<FieldElement>> samples;
  if (small) {
    items = (total - 1) / (q - 1);  // projective points
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::uint32_t> coord(0, static_cast<std::uint32_t>(q - 1));
    samples.resize(opt.samples, std::vector<FieldElement>(d));
    for (auto& s : samples)
      for (auto& e : s) e.code = coord(rng);
    items = samples.size();
  }

  // Projective point k: leading coordinate position p with 1 there, free
  // coordinates after it. Points with leading position p number q^(d-1-p).
  auto point = [&](std::uint64_t k, std::vector<FieldElement>& v) {
    std::fill(v.begin(), v.end(), F.zero());
    std::uint64_t block = total / q;
    std::size_t p = 0;
    while (k >= block) {
      k -= block;
      block /= q;
      ++p;
    }
    v[p] = F.one();
    for (std::size_t j = d; j-- > p + 1;) {
      v[j].code = static_cast<std::uint32_t>(k % q);
      k /= q;
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(detail::rank_threads(opt.threads), std::max<std::uint64_t>(items, 1)));
  std::vector<std::size_t> best(threads, d);
  auto work = [&](unsigned t) {
    std::vector<FieldElement> v(d), scratch(d * d);
    for (std::uint64_t k = t; k < items; k += threads) {
      if (small) point(k, v);
      else v = samples[k];
      best[t] = std::min(best[t], detail::kernel_dim(L, v, scratch));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  res.rank = static_cast<unsigned>(*std::min_element(best.begin(), best.end()));
  res.evaluated = items;
  return res;
}

// ---------------------------------------------------------------------------
// Envelope

struct NoriEnvelope {
  unsigned dim_full = 0;
  unsigned dim_ss = 0;
  unsigned rank = 0;
  bool heuristic_regime = false;
  bool rank_exhaustive = true;
  std::uint64_t sample_seed = 0;
  std::uint64_t unipotents = 0;  // order-ell elements harvested
  bool sampled_harvest = false;

  friend bool operator==(const NoriEnvelope&, const NoriEnvelope&) = default;
};

struct EnvelopeOptions {
  RankOptions rank;
  unsigned threshold_mult = kDefaultThresholdMult;
};

/// Envelope spanned by the logarithms of the given unipotent elements of
/// GL_n(F_q). For q = ell^f with f > 1 the logarithms are Weil-restricted so
/// the algebra is taken over F_ell.
inline NoriEnvelope envelope_from_unipotents(const FieldPtr& field, std::size_t n, std::span<const Mat> unipotents,
                                             const EnvelopeOptions& opt = {}) {
  const Field& F = *field;
  detail::require_char_above(F, n, "nori_envelope");
  FieldPtr base = F.prime_field();
  const std::size_t side = n * F.degree();
  std::vector<Mat> logs;
  EchelonSpan seen(*base, side * side);
  for (const auto& u : unipotents) {
    Mat x = nil_log(F, u);
    if (!F.is_prime_field()) x = weil_restrict(F, x);
    if (seen.insert(x.a)) logs.push_back(std::move(x));
  }
  NoriEnvelope env;
  env.sample_seed = opt.rank.seed;
  env.unipotents = unipotents.size();
  LieAlgebraBasis full = bracket_closure(base, side, logs);
  env.dim_full = static_cast<unsigned>(full.dim());
  LieAlgebraBasis ss = killing_radical_quotient(full);
  env.dim_ss = static_cast<unsigned>(ss.dim());
  LieRankResult r = lie_rank(ss, opt.rank);
  env.rank = r.rank;
  env.rank_exhaustive = r.exhaustive;
  env.heuristic_regime = heuristic_regime(F.ell(), side, full.dim(), opt.threshold_mult);
  return env;
}

/// Exhaustive harvest over every element of exact order ell.
inline NoriEnvelope nori_envelope(const EnumeratedGroup& e, const EnvelopeOptions& opt = {}) {
  std::vector<Mat> us;
  for (auto c : order_ell_elements(e, e.field().ell())) us.push_back(e.codec().decode(c));
  return envelope_from_unipotents(e.field_ptr(), e.side(), us, opt);
}

struct HarvestOptions {
  std::uint64_t seed = 0x5eed;
  std::uint64_t words = 2000;
  std::size_t word_length = 24;
};

/// Unipotent parts of pseudo-random words in the generators, for groups too
/// large to enumerate. g^M kills the semisimple part when M is the lcm of
/// q^i - 1 (i <= n), and M is prime to ell, so g^M is a nontrivial
/// unipotent exactly when g has a nontrivial unipotent part. The envelope
/// of a partial harvest can only be smaller than the exhaustive one.
inline std::vector<Mat> harvest_unipotents(const GroupInstance& g, const HarvestOptions& opt = {}) {
  const Field& F = *g.field;
  BigInt m = 1;
  for (std::size_t i = 1; i <= g.n; ++i) m = boost::multiprecision::lcm(m, ipow(BigInt(F.size()), static_cast<unsigned>(i)) - 1);
  std::vector<Mat> letters;
  for (const auto& x : g.generators) {
    letters.push_back(x);
    letters.push_back(mat::inverse(F, x));
  }
  auto power = [&](Mat base) {
    Mat r = mat::identity(F, g.n);
    for (BigInt e = m; e > 0; e >>= 1) {
      if ((e & 1) != 0) r = mat::mul(F, r, base);
      base = mat::mul(F, base, base);
    }
    return r;
  };
  std::vector<Mat> out;
  auto keep = [&](Mat u) {
    if (!mat::is_identity(F, u)) out.push_back(std::move(u));
  };
  for (const auto& x : g.generators) keep(power(x));
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  for (std::uint64_t w = 0; w < opt.words; ++w) {
    Mat x = mat::identity(F, g.n);
    for (std::size_t k = 0; k < opt.word_length; ++k) x = mat::mul(F, x, letters[pick(rng)]);
    keep(power(std::move(x)));
  }
  return out;
}

}  // namespace nori
