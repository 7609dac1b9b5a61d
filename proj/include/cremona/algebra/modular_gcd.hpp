#pragma once

// Dense modular GCD for multivariate integer polynomials.
//
// Images are computed in Z_p[v0..vk] by recursive evaluation/interpolation of the last
// variable (Brown's algorithm), carrying the cofactors along so that both the per-level
// termination test and the final lift over Z are certified without trial division:
//   mod p, level k:  H * Abar == gam * A  holds once the number of interpolation points
//                    exceeds the degree in the interpolated variable of both sides;
//   over Z:          the same identity holds once the CRT modulus exceeds twice the
//                    coefficient bound of both sides.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cremona/algebra/multipoly.hpp"

namespace cremona::algebra::modular {

using u64 = std::uint64_t;

struct Field {
  u64 p;

  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= p ? s - p : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p - b; }
  u64 mul(u64 a, u64 b) const noexcept { return (a * b) % p; }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p - a; }
  u64 pow(u64 a, u64 e) const noexcept {
    u64 r = 1;
    a %= p;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const {
    if (a == 0) throw std::logic_error("inverse of zero modulo p");
    return pow(a, p - 2);
  }
};

inline bool is_prime_u32(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  Field f{n};
  for (u64 a : {2u, 7u, 61u}) {
    if (a % n == 0) continue;
    u64 x = f.pow(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = f.mul(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Primes below 2^31 in decreasing order.
class PrimeSequence {
 public:
  u64 next() {
    do {
      current_ -= 2;
    } while (!is_prime_u32(current_));
    return current_;
  }

 private:
  u64 current_ = (u64(1) << 31) + 1;
};

// ---------------------------------------------------------------------------------------
// Univariate polynomials over Z_p, low to high, trimmed; zero is empty.

using UPoly = std::vector<u64>;

inline void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long deg(const UPoly& a) { return static_cast<long>(a.size()) - 1; }

inline u64 eval(const UPoly& a, u64 x, const Field& f) {
  u64 r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
  return r;
}

inline UPoly mul(const UPoly& a, const UPoly& b, const Field& f) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % f.p;
  }
  trim(r);
  return r;
}

inline void make_monic(UPoly& a, const Field& f) {
  if (a.empty() || a.back() == 1) return;
  u64 s = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, s);
}

/// In-place remainder of a by b (b non-zero).
inline void rem_inplace(UPoly& a, const UPoly& b, const Field& f) {
  const std::size_t db = b.size() - 1;
  const u64 inv_lc = f.inv(b.back());
  while (!a.empty() && a.size() > db) {
    const std::size_t shift = a.size() - 1 - db;
    const u64 q = f.mul(a.back(), inv_lc);
    if (q != 0) {
      for (std::size_t j = 0; j <= db; ++j) a[shift + j] = f.sub(a[shift + j], f.mul(q, b[j]));
    }
    a.pop_back();
    trim(a);
  }
}

inline std::pair<UPoly, UPoly> divrem(UPoly a, const UPoly& b, const Field& f) {
  if (b.empty()) throw std::logic_error("division by zero polynomial mod p");
  trim(a);
  if (a.size() < b.size()) return {UPoly{}, a};
  const std::size_t db = b.size() - 1;
  UPoly q(a.size() - db, 0);
  const u64 inv_lc = f.inv(b.back());
  for (std::size_t k = a.size(); k-- > db;) {
    const u64 c = f.mul(a[k], inv_lc);
    q[k - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] = f.sub(a[k - db + j], f.mul(c, b[j]));
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}

inline UPoly div_exact(const UPoly& a, const UPoly& b, const Field& f) {
  auto [q, r] = divrem(a, b, f);
  if (!r.empty()) throw std::logic_error("inexact univariate division mod p");
  return q;
}

/// Monic gcd; gcd(0, 0) = 0.
inline UPoly gcd(UPoly a, UPoly b, const Field& f) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    rem_inplace(a, b, f);
    std::swap(a, b);
  }
  make_monic(a, f);
  return a;
}

// ---------------------------------------------------------------------------------------
// Dense multivariate polynomials over Z_p. Flat layout with the last variable fastest, so a
// "block" (fixed exponents of the leading variables) is a univariate polynomial in the last
// variable, and flat-index order on blocks is lex order on the leading variables.

struct Dense {
  std::vector<std::size_t> ext;  // extent (degree bound + 1) per variable
  std::vector<u64> c;

  Dense() = default;
  explicit Dense(std::vector<std::size_t> extents) : ext(std::move(extents)) {
    std::size_t n = 1;
    for (auto e : ext) n *= e;
    c.assign(n, 0);
  }

  std::size_t nvars() const noexcept { return ext.size(); }
  std::size_t block_len() const noexcept { return ext.back(); }
  std::size_t nblocks() const noexcept { return c.size() / ext.back(); }

  UPoly block(std::size_t b) const {
    UPoly u(c.begin() + b * block_len(), c.begin() + (b + 1) * block_len());
    trim(u);
    return u;
  }

  bool is_zero() const {
    for (auto v : c)
      if (v) return false;
    return true;
  }
};

inline long lead_index(const Dense& d) {
  for (std::size_t i = d.c.size(); i-- > 0;)
    if (d.c[i] != 0) return static_cast<long>(i);
  return -1;
}

/// Largest exponent used per variable.
inline std::vector<std::size_t> used_degrees(const Dense& d) {
  const std::size_t k = d.nvars();
  std::vector<std::size_t> deg(k, 0);
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t flat = 0; flat < d.c.size(); ++flat) {
    if (d.c[flat] != 0)
      for (std::size_t v = 0; v < k; ++v) deg[v] = std::max(deg[v], idx[v]);
    for (std::size_t v = k; v-- > 0;) {
      if (++idx[v] < d.ext[v]) break;
      idx[v] = 0;
    }
  }
  return deg;
}

/// Copies into a box with other extents; entries outside the target box must be zero.
inline Dense embed(const Dense& src, const std::vector<std::size_t>& target) {
  if (src.ext == target) return src;
  Dense out(target);
  const std::size_t k = src.nvars();
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t flat = 0; flat < src.c.size(); ++flat) {
    if (src.c[flat] != 0) {
      std::size_t t = 0;
      for (std::size_t v = 0; v < k; ++v) {
        if (idx[v] >= target[v]) throw std::logic_error("dense image does not fit its degree box");
        t = t * target[v] + idx[v];
      }
      out.c[t] = src.c[flat];
    }
    for (std::size_t v = k; v-- > 0;) {
      if (++idx[v] < src.ext[v]) break;
      idx[v] = 0;
    }
  }
  return out;
}

inline Dense shrink(const Dense& d) {
  auto deg = used_degrees(d);
  for (auto& x : deg) x += 1;
  return embed(d, deg);
}

inline Dense eval_last(const Dense& d, u64 x, const Field& f) {
  std::vector<std::size_t> ext(d.ext.begin(), d.ext.end() - 1);
  Dense out(ext);
  const std::size_t len = d.block_len();
  for (std::size_t b = 0; b < out.c.size(); ++b) {
    u64 r = 0;
    const u64* blk = d.c.data() + b * len;
    for (std::size_t i = len; i-- > 0;) r = (r * x + blk[i]) % f.p;
    out.c[b] = r;
  }
  return out;
}

inline UPoly content_blocks(const Dense& d, const Field& f) {
  UPoly g;
  for (std::size_t b = 0; b < d.nblocks(); ++b) {
    UPoly blk = d.block(b);
    if (blk.empty()) continue;
    g = g.empty() ? blk : gcd(std::move(g), std::move(blk), f);
    if (g.size() == 1) return UPoly{1};
  }
  make_monic(g, f);
  return g;
}

inline UPoly lc_block(const Dense& d) {
  long li = lead_index(d);
  if (li < 0) return {};
  return d.block(static_cast<std::size_t>(li) / d.block_len());
}

inline std::size_t degree_last(const Dense& d) {
  std::size_t best = 0;
  const std::size_t len = d.block_len();
  for (std::size_t b = 0; b < d.nblocks(); ++b)
    for (std::size_t i = len; i-- > best + 1;)
      if (d.c[b * len + i] != 0) {
        best = i;
        break;
      }
  return best;
}

inline Dense map_blocks(const Dense& d, std::size_t new_len, const auto& fn) {
  std::vector<std::size_t> ext = d.ext;
  ext.back() = new_len;
  Dense out(ext);
  for (std::size_t b = 0; b < d.nblocks(); ++b) {
    UPoly blk = d.block(b);
    if (blk.empty()) continue;
    UPoly r = fn(blk);
    if (r.size() > new_len) throw std::logic_error("block overflow");
    std::copy(r.begin(), r.end(), out.c.begin() + b * new_len);
  }
  return out;
}

inline Dense div_blocks(const Dense& d, const UPoly& u, const Field& f) {
  if (u.size() == 1 && u[0] == 1) return d;
  return map_blocks(d, d.block_len(), [&](const UPoly& blk) { return div_exact(blk, u, f); });
}

inline Dense mul_blocks(const Dense& d, const UPoly& u, const Field& f) {
  if (u.size() == 1 && u[0] == 1) return d;
  return map_blocks(d, d.block_len() + u.size() - 1, [&](const UPoly& blk) { return mul(blk, u, f); });
}

inline void scale(Dense& d, u64 s, const Field& f) {
  if (s == 1) return;
  for (auto& v : d.c) v = f.mul(v, s);
}

struct ImageGcd {
  Dense g;
  Dense abar;  // a == g * abar
  Dense bbar;  // b == g * bbar
};

/// Newton step: interp (positions x cap) += delta * q at every position, where delta makes
/// the interpolant match `image` at the new point.
inline void newton_update(Dense& interp, const Dense& image, const UPoly& q, u64 alpha, u64 inv_q_alpha,
                          std::size_t npts, const Field& f) {
  const std::size_t cap = interp.block_len();
  for (std::size_t pos = 0; pos < image.c.size(); ++pos) {
    u64* blk = interp.c.data() + pos * cap;
    u64 val = 0;
    for (std::size_t i = npts; i-- > 0;) val = (val * alpha + blk[i]) % f.p;
    const u64 target = image.c[pos];
    if (val == target) continue;
    const u64 delta = f.mul(f.sub(target, val), inv_q_alpha);
    for (std::size_t j = 0; j < q.size(); ++j) blk[j] = (blk[j] + delta * q[j]) % f.p;
  }
}

inline ImageGcd image_gcd(const Dense& a, const Dense& b, const Field& f);

inline ImageGcd image_gcd_univariate(const Dense& a, const Dense& b, const Field& f) {
  UPoly ua = a.block(0);
  UPoly ub = b.block(0);
  UPoly g = gcd(ua, ub, f);
  if (g.empty()) throw std::logic_error("gcd of two zero images");
  UPoly qa = div_exact(ua, g, f);
  UPoly qb = div_exact(ub, g, f);
  auto to_dense = [](const UPoly& u) {
    Dense d({std::max<std::size_t>(u.size(), 1)});
    std::copy(u.begin(), u.end(), d.c.begin());
    return d;
  };
  return {to_dense(g), to_dense(qa), to_dense(qb)};
}

inline ImageGcd image_gcd(const Dense& a, const Dense& b, const Field& f) {
  const std::size_t k = a.nvars();
  if (k == 1) return image_gcd_univariate(a, b, f);

  const UPoly ca = content_blocks(a, f);
  const UPoly cb = content_blocks(b, f);
  const Dense ap = div_blocks(a, ca, f);
  const Dense bp = div_blocks(b, cb, f);
  const UPoly cg = gcd(ca, cb, f);
  const UPoly la = lc_block(ap);
  const UPoly lb = lc_block(bp);
  const UPoly gam = gcd(la, lb, f);
  const std::size_t dva = degree_last(ap);
  const std::size_t dvb = degree_last(bp);
  const std::size_t dgam = static_cast<std::size_t>(deg(gam));
  const std::size_t cap = dgam + std::max(dva, dvb) + 2;

  std::vector<std::size_t> ext_g(k - 1), ext_a(a.ext.begin(), a.ext.end() - 1), ext_b(b.ext.begin(), b.ext.end() - 1);
  for (std::size_t v = 0; v + 1 < k; ++v) ext_g[v] = std::min(a.ext[v], b.ext[v]);
  auto with_cap = [cap](std::vector<std::size_t> e) {
    e.push_back(cap);
    return e;
  };

  Dense h, habar, hbbar;
  UPoly q{1};
  std::size_t npts = 0;
  long current_lead = -1;
  for (u64 alpha = 1; alpha < f.p; ++alpha) {
    if (eval(la, alpha, f) == 0 || eval(lb, alpha, f) == 0) continue;
    ImageGcd img = image_gcd(eval_last(ap, alpha, f), eval_last(bp, alpha, f), f);
    Dense g = embed(img.g, ext_g);
    Dense ga = embed(img.abar, ext_a);
    Dense gb = embed(img.bbar, ext_b);
    const long li = lead_index(g);
    const u64 lcg = g.c[static_cast<std::size_t>(li)];
    scale(g, f.mul(eval(gam, alpha, f), f.inv(lcg)), f);
    scale(ga, lcg, f);
    scale(gb, lcg, f);

    if (npts == 0 || li < current_lead) {
      current_lead = li;
      h = Dense(with_cap(ext_g));
      habar = Dense(with_cap(ext_a));
      hbbar = Dense(with_cap(ext_b));
      q = UPoly{1};
      npts = 0;
    } else if (li > current_lead) {
      continue;  // unlucky evaluation point
    }
    if (npts + 1 >= cap) throw std::logic_error("modular gcd interpolation failed to terminate");
    const u64 inv_q = f.inv(eval(q, alpha, f));
    newton_update(h, g, q, alpha, inv_q, npts, f);
    newton_update(habar, ga, q, alpha, inv_q, npts, f);
    newton_update(hbbar, gb, q, alpha, inv_q, npts, f);
    q = mul(q, UPoly{f.neg(alpha), 1}, f);
    ++npts;

    const std::size_t dh = degree_last(h);
    const std::size_t need_a = std::max(dh + degree_last(habar), dgam + dva);
    const std::size_t need_b = std::max(dh + degree_last(hbbar), dgam + dvb);
    if (npts <= need_a || npts <= need_b) continue;

    const UPoly ch = content_blocks(h, f);
    const Dense gp = div_blocks(h, ch, f);
    const UPoly fa = mul(ch, div_exact(ca, cg, f), f);
    const UPoly fb = mul(ch, div_exact(cb, cg, f), f);
    ImageGcd out;
    out.g = shrink(mul_blocks(gp, cg, f));
    out.abar = shrink(div_blocks(mul_blocks(habar, fa, f), gam, f));
    out.bbar = shrink(div_blocks(mul_blocks(hbbar, fb, f), gam, f));
    return out;
  }
  throw std::logic_error("modular gcd ran out of evaluation points");
}

// ---------------------------------------------------------------------------------------
// Lift over Z.

struct IntegerGcd {
  MultiPoly gcd;        // primitive, integer coefficients
  MultiPoly cofactor_a; // a == gcd * cofactor_a
  MultiPoly cofactor_b;
};

namespace detail_z {

struct Layout {
  std::vector<std::size_t> vars;  // table indices, dense order (main variable first)
  std::vector<std::size_t> ext;   // per dense variable

  std::size_t flat(const Monomial& m) const {
    std::size_t t = 0;
    for (std::size_t v = 0; v < vars.size(); ++v) t = t * ext[v] + m[vars[v]];
    return t;
  }
};

struct SparseZ {
  std::vector<std::size_t> flat;
  std::vector<Integer> coeff;
};

inline SparseZ to_sparse(const MultiPoly& p, const Layout& layout) {
  SparseZ s;
  s.flat.reserve(p.size());
  s.coeff.reserve(p.size());
  for (const auto& t : p.terms()) {
    s.flat.push_back(layout.flat(t.mono));
    s.coeff.push_back(t.coeff.get_num());
  }
  return s;
}

inline Dense reduce(const SparseZ& s, const std::vector<std::size_t>& ext, u64 p) {
  Dense d(ext);
  for (std::size_t i = 0; i < s.flat.size(); ++i) d.c[s.flat[i]] = mpz_fdiv_ui(s.coeff[i].get_mpz_t(), p);
  return d;
}

inline const Integer& lex_leading(const SparseZ& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.flat.size(); ++i)
    if (s.flat[i] > s.flat[best]) best = i;
  return s.coeff[best];
}

inline Integer max_abs(const SparseZ& s) {
  Integer m = 0;
  for (const auto& c : s.coeff)
    if (mpz_cmpabs(c.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(c);
  return m;
}

/// Chinese remaindering of dense images into symmetric integer representatives.
struct Accumulator {
  std::vector<std::size_t> ext;
  std::vector<Integer> value;

  void reset(const Dense& image, u64 p) {
    ext = image.ext;
    value.assign(image.c.size(), Integer(0));
    const u64 half = p / 2;
    for (std::size_t i = 0; i < image.c.size(); ++i) {
      u64 r = image.c[i];
      if (r > half) value[i] = -Integer(static_cast<unsigned long>(p - r));
      else value[i] = static_cast<unsigned long>(r);
    }
  }

  /// modulus: product of previous primes; half_new: (modulus * p) / 2.
  void combine(const Dense& image, const Integer& modulus, u64 p, const Field& f, const Integer& new_modulus,
               const Integer& half_new) {
    const u64 inv_m = f.inv(mpz_fdiv_ui(modulus.get_mpz_t(), p));
    for (std::size_t i = 0; i < value.size(); ++i) {
      const u64 r = image.c[i];
      Integer& v = value[i];
      if (r == 0 && v == 0) continue;
      const u64 cur = mpz_fdiv_ui(v.get_mpz_t(), p);
      if (cur == r) continue;
      const u64 t = f.mul(f.sub(r, cur), inv_m);
      mpz_addmul_ui(v.get_mpz_t(), modulus.get_mpz_t(), static_cast<unsigned long>(t));
      if (v > half_new) v -= new_modulus;
    }
  }

  Integer max_abs(std::size_t& nonzero) const {
    Integer m = 0;
    nonzero = 0;
    for (const auto& v : value) {
      if (v == 0) continue;
      ++nonzero;
      if (mpz_cmpabs(v.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(v);
    }
    return m;
  }
};

inline MultiPoly to_multipoly(const Accumulator& acc, const Layout& layout, const VarTablePtr& vars,
                              const Integer& multiplier, const Integer& divisor) {
  std::vector<Term> terms;
  const std::size_t k = acc.ext.size();
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t flat = 0; flat < acc.value.size(); ++flat) {
    if (acc.value[flat] != 0) {
      Monomial m(vars->size());
      for (std::size_t v = 0; v < k; ++v) m[layout.vars[v]] = static_cast<std::uint32_t>(idx[v]);
      Integer c = acc.value[flat] * multiplier;
      if (divisor != 1) {
        if (!mpz_divisible_p(c.get_mpz_t(), divisor.get_mpz_t()))
          throw std::logic_error("inexact cofactor scaling in modular gcd");
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), divisor.get_mpz_t());
      }
      terms.push_back({std::move(m), Rational(c)});
    }
    for (std::size_t v = k; v-- > 0;) {
      if (++idx[v] < acc.ext[v]) break;
      idx[v] = 0;
    }
  }
  return MultiPoly::from_terms(vars, std::move(terms));
}

}  // namespace detail_z

/// gcd of two non-zero polynomials with integer coefficients, with exact cofactors.
/// The gcd is primitive; its sign is not normalized.
inline IntegerGcd integer_gcd(const MultiPoly& a, const MultiPoly& b) {
  using namespace detail_z;
  const auto& vars = a.vars();
  auto da = a.degrees();
  auto db = b.degrees();
  Layout layout;
  for (std::size_t v = 0; v < da.size(); ++v)
    if (da[v] > 0 || db[v] > 0) layout.vars.push_back(v);
  std::stable_sort(layout.vars.begin(), layout.vars.end(),
                   [&](std::size_t x, std::size_t y) { return std::max(da[x], db[x]) < std::max(da[y], db[y]); });

  if (layout.vars.empty()) {
    // both constant
    auto one = MultiPoly::constant(vars, Rational(1));
    return {one, a, b};
  }
  const std::size_t k = layout.vars.size();
  std::vector<std::size_t> ext_a(k), ext_b(k), ext_g(k);
  for (std::size_t v = 0; v < k; ++v) {
    ext_a[v] = da[layout.vars[v]] + 1;
    ext_b[v] = db[layout.vars[v]] + 1;
    ext_g[v] = std::min(ext_a[v], ext_b[v]);
  }
  Layout la{layout.vars, ext_a}, lb{layout.vars, ext_b};
  const SparseZ sa = to_sparse(a, la);
  const SparseZ sb = to_sparse(b, lb);
  const Integer lca = lex_leading(sa);
  const Integer lcb = lex_leading(sb);
  Integer gamma;
  mpz_gcd(gamma.get_mpz_t(), lca.get_mpz_t(), lcb.get_mpz_t());
  const Integer bound_a = gamma * max_abs(sa);
  const Integer bound_b = gamma * max_abs(sb);

  PrimeSequence primes;
  Accumulator acc_g, acc_a, acc_b;
  Integer modulus = 0;
  long current_lead = -1;
  for (;;) {
    const u64 p = primes.next();
    const Field f{p};
    if (mpz_fdiv_ui(lca.get_mpz_t(), p) == 0 || mpz_fdiv_ui(lcb.get_mpz_t(), p) == 0) continue;
    ImageGcd img = image_gcd(reduce(sa, ext_a, p), reduce(sb, ext_b, p), f);
    Dense g = embed(img.g, ext_g);
    Dense ga = embed(img.abar, ext_a);
    Dense gb = embed(img.bbar, ext_b);
    const long li = lead_index(g);
    const u64 lcg = g.c[static_cast<std::size_t>(li)];
    scale(g, f.mul(mpz_fdiv_ui(gamma.get_mpz_t(), p), f.inv(lcg)), f);
    scale(ga, lcg, f);
    scale(gb, lcg, f);

    if (modulus == 0 || li < current_lead) {
      current_lead = li;
      acc_g.reset(g, p);
      acc_a.reset(ga, p);
      acc_b.reset(gb, p);
      modulus = static_cast<unsigned long>(p);
    } else if (li > current_lead) {
      continue;
    } else {
      const Integer new_modulus = modulus * static_cast<unsigned long>(p);
      const Integer half = new_modulus / 2;
      acc_g.combine(g, modulus, p, f, new_modulus, half);
      acc_a.combine(ga, modulus, p, f, new_modulus, half);
      acc_b.combine(gb, modulus, p, f, new_modulus, half);
      modulus = new_modulus;
    }

    std::size_t ng = 0, na = 0, nb = 0;
    const Integer hg = acc_g.max_abs(ng);
    const Integer ha = acc_a.max_abs(na);
    const Integer hb = acc_b.max_abs(nb);
    Integer need = bound_a;
    if (bound_b > need) need = bound_b;
    Integer prod_a = hg * ha * static_cast<unsigned long>(std::min(ng, na));
    Integer prod_b = hg * hb * static_cast<unsigned long>(std::min(ng, nb));
    if (prod_a > need) need = prod_a;
    if (prod_b > need) need = prod_b;
    if (modulus <= 2 * need) continue;

    // H * Abar == gamma * a over Z; G = H / content(H), a / G = Abar * content(H) / gamma.
    Integer ch = 0;
    for (const auto& v : acc_g.value) mpz_gcd(ch.get_mpz_t(), ch.get_mpz_t(), v.get_mpz_t());
    IntegerGcd out;
    out.gcd = to_multipoly(acc_g, Layout{layout.vars, acc_g.ext}, vars, Integer(1), ch);
    out.cofactor_a = to_multipoly(acc_a, Layout{layout.vars, acc_a.ext}, vars, ch, gamma);
    out.cofactor_b = to_multipoly(acc_b, Layout{layout.vars, acc_b.ext}, vars, ch, gamma);
    return out;
  }
}

/// True only when the polynomials are certainly coprime over Q. For each variable v, the gcd
/// of the univariate images at a random point mod p bounds the degree in v of the true gcd
/// from above, provided some input keeps its degree in v at that point. False means unknown.
inline bool certainly_coprime(std::span<const MultiPoly> polys) {
  if (polys.empty()) return false;
  const std::size_t n = polys.front().nvars();
  std::vector<std::uint32_t> maxdeg(n, 0);
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    auto d = p.degrees();
    for (std::size_t v = 0; v < n; ++v) maxdeg[v] = std::max(maxdeg[v], d[v]);
  }
  const Field f{2147483647};
  auto reduce = [&](const Rational& c, u64& out) {
    mpz_class num = c.get_num() % static_cast<unsigned long>(f.p);
    mpz_class den = c.get_den() % static_cast<unsigned long>(f.p);
    if (num < 0) num += static_cast<unsigned long>(f.p);
    if (den == 0) return false;
    out = f.mul(num.get_ui(), f.inv(den.get_ui()));
    return true;
  };
  std::mt19937_64 rng(0x5eed);
  for (std::size_t v = 0; v < n; ++v) {
    if (maxdeg[v] == 0) continue;
    bool certified = false;
    for (int attempt = 0; attempt < 4 && !certified; ++attempt) {
      std::vector<u64> pt(n);
      for (auto& x : pt) x = 1 + rng() % (f.p - 1);
      UPoly g;
      bool degree_kept = false, ok = true;
      for (const auto& p : polys) {
        if (p.is_zero()) continue;
        UPoly img(p.degree(v) + 1, 0);
        for (const auto& t : p.terms()) {
          u64 c;
          if (!reduce(t.coeff, c)) {
            ok = false;
            break;
          }
          for (std::size_t w = 0; w < n; ++w)
            if (w != v && t.mono[w] != 0) c = f.mul(c, f.pow(pt[w], t.mono[w]));
          img[t.mono[v]] = f.add(img[t.mono[v]], c);
        }
        if (!ok) break;
        trim(img);
        if (deg(img) == p.degree(v)) degree_kept = true;
        g = g.empty() ? img : gcd(std::move(g), std::move(img), f);
      }
      certified = ok && degree_kept && deg(g) == 0;
    }
    if (!certified) return false;
  }
  return true;
}

}  // namespace cremona::algebra::modular
