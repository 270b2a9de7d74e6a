#pragma once
// Exact linear algebra over Z/N.
//
// Every finite module handled by this library is annihilated by the
// characteristic N of its base ring, so all abelian-group computations
// (kernels, images, cokernels, congruence solving) are carried out over the
// principal ideal ring Z/N. The single primitive is a Smith normal form with
// explicit unimodular transforms; everything else reduces to it.

#include <cstddef>
#include <algorithm>
#include <climits>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cosupp {

using Int = std::int64_t;
using Vec = std::vector<Int>;

inline Int mod(Int x, Int n) {
  Int r = x % n;
  return r < 0 ? r + n : r;
}

struct ExtGcd {
  Int g, s, t;  // g = s*a + t*b
};

inline ExtGcd ext_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo n; a must be a unit.
inline Int inv_mod(Int a, Int n) {
  if (n == 1) return 0;
  auto e = ext_gcd(mod(a, n), n);
  if (e.g != 1) throw std::domain_error("inv_mod: not a unit");
  return mod(e.s, n);
}

/// Dense row-major integer matrix.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  Int& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Int operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Vec col(std::size_t j) const {
    Vec v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vec row(std::size_t i) const {
    return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }
  void set_col(std::size_t j, const Vec& v) {
    for (std::size_t i = 0; i < rows; ++i) (*this)(i, j) = v[i];
  }

  static Mat from_cols(std::size_t rows, const std::vector<Vec>& cs) {
    Mat m(rows, cs.size());
    for (std::size_t j = 0; j < cs.size(); ++j) m.set_col(j, cs[j]);
    return m;
  }

  bool operator==(const Mat&) const = default;
};

inline Mat mul(const Mat& a, const Mat& b, Int n) {
  if (a.cols != b.rows) throw std::invalid_argument("mul: shape mismatch");
  Mat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      Int x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = (c(i, j) + x * b(k, j)) % n;
    }
  }
  for (auto& x : c.data) x = mod(x, n);
  return c;
}

inline Vec mul(const Mat& a, const Vec& v, Int n) {
  if (a.cols != v.size()) throw std::invalid_argument("mul: shape mismatch");
  Vec r(a.rows, 0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Int acc = 0;
    for (std::size_t k = 0; k < a.cols; ++k) acc = (acc + a(i, k) * v[k]) % n;
    r[i] = mod(acc, n);
  }
  return r;
}

/// Reduce row i of m modulo orders[i].
inline void reduce_rows(Mat& m, const Vec& orders) {
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = mod(m(i, j), orders[i]);
}

inline void reduce(Vec& v, const Vec& orders) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(v[i], orders[i]);
}

inline bool is_zero(const Vec& v, const Vec& orders) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mod(v[i], orders[i]) != 0) return false;
  return true;
}

inline bool is_zero(const Mat& m, const Vec& row_orders) {
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (mod(m(i, j), row_orders[i]) != 0) return false;
  return true;
}

inline Mat hstack(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw std::invalid_argument("hstack: row mismatch");
  Mat c(a.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols; ++j) c(i, a.cols + j) = b(i, j);
  }
  return c;
}

inline Mat vstack(const Mat& a, const Mat& b) {
  if (a.cols != b.cols) throw std::invalid_argument("vstack: col mismatch");
  Mat c(a.rows + b.rows, a.cols);
  std::copy(a.data.begin(), a.data.end(), c.data.begin());
  std::copy(b.data.begin(), b.data.end(), c.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
  return c;
}

/// Smith normal form over Z/N: U * A * V = D with U, V invertible over Z/N.
/// The ideals (diag[0]) ⊇ (diag[1]) ⊇ ... form a chain, i.e.
/// gcd(diag[t], N) divides gcd(diag[t+1], N).
struct Smith {
  Mat U, Uinv, V;
  Vec diag;  // length min(rows, cols); zero past the rank
  Int modulus = 1;
};

namespace detail {

struct SmithWork {
  Mat& a;
  Mat& u;
  Mat& uinv;
  Mat& v;
  Int n;

  // rows (i, j) <- [[p, q], [r, s]] * rows (i, j); det = 1
  void row_op(std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    auto apply = [&](Mat& m) {
      for (std::size_t c = 0; c < m.cols; ++c) {
        Int x = m(i, c), y = m(j, c);
        m(i, c) = mod(p * x + q * y, n);
        m(j, c) = mod(r * x + s * y, n);
      }
    };
    apply(a);
    apply(u);
    // Uinv <- Uinv * T^{-1}, T^{-1} = [[s, -q], [-r, p]]
    for (std::size_t rr = 0; rr < uinv.rows; ++rr) {
      Int x = uinv(rr, i), y = uinv(rr, j);
      uinv(rr, i) = mod(s * x - r * y, n);
      uinv(rr, j) = mod(-q * x + p * y, n);
    }
  }

  // cols (i, j) <- cols (i, j) * [[p, r], [q, s]]
  void col_op(std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    auto apply = [&](Mat& m) {
      for (std::size_t rr = 0; rr < m.rows; ++rr) {
        Int x = m(rr, i), y = m(rr, j);
        m(rr, i) = mod(p * x + q * y, n);
        m(rr, j) = mod(r * x + s * y, n);
      }
    };
    apply(a);
    apply(v);
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < u.cols; ++c) std::swap(u(i, c), u(j, c));
    for (std::size_t r = 0; r < uinv.rows; ++r) std::swap(uinv(r, i), uinv(r, j));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows; ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < v.rows; ++r) std::swap(v(r, i), v(r, j));
  }

  // c with c*x = y mod n when (x) contains y, else -1
  Int multiplier(Int x, Int y) const {
    Int h = std::gcd(x, n);
    if (y % h != 0) return -1;
    Int nh = n / h;
    return mod((y / h) * inv_mod((x / h) % nh, nh), n);
  }

  // zero a(j, t) against pivot a(t, t); a Bezout step strictly enlarges
  // the pivot ideal, so the elimination loop terminates
  void clear_below(std::size_t t, std::size_t j) {
    Int x = a(t, t), y = a(j, t);
    if (Int c = multiplier(x, y); c >= 0) return row_op(t, j, 1, 0, -c, 1);
    auto e = ext_gcd(x, y);
    row_op(t, j, e.s, e.t, -(y / e.g), x / e.g);
  }

  void clear_right(std::size_t t, std::size_t j) {
    Int x = a(t, t), y = a(t, j);
    if (Int c = multiplier(x, y); c >= 0) return col_op(t, j, 1, 0, -c, 1);
    auto e = ext_gcd(x, y);
    col_op(t, j, e.s, e.t, -(y / e.g), x / e.g);
  }
};

}  // namespace detail

inline Smith smith(Mat a, Int n) {
  Smith out;
  out.modulus = n;
  for (auto& x : a.data) x = mod(x, n);
  out.U = Mat::identity(a.rows);
  out.Uinv = Mat::identity(a.rows);
  out.V = Mat::identity(a.cols);
  detail::SmithWork w{a, out.U, out.Uinv, out.V, n};
  const std::size_t m = a.rows, k = a.cols;
  const std::size_t r = std::min(m, k);
  out.diag.assign(r, 0);
  for (std::size_t t = 0; t < r; ++t) {
    // pivot of smallest ideal-generator among the remaining block
    std::size_t bi = m, bj = k;
    Int bg = n + 1;
    for (std::size_t i = t; i < m && bg > 1; ++i)
      for (std::size_t j = t; j < k; ++j) {
        Int x = a(i, j);
        if (x == 0) continue;
        Int g = std::gcd(x, n);
        if (g < bg) {
          bg = g;
          bi = i;
          bj = j;
          if (g == 1) break;
        }
      }
    if (bi == m) break;
    w.swap_rows(t, bi);
    w.swap_cols(t, bj);
    for (;;) {
      for (std::size_t i = t + 1; i < m; ++i)
        if (a(i, t) != 0) w.clear_below(t, i);
      bool dirty = false;
      for (std::size_t j = t + 1; j < k; ++j)
        if (a(t, j) != 0) {
          w.clear_right(t, j);
          dirty = true;
        }
      if (dirty) {
        bool col_clear = true;
        for (std::size_t i = t + 1; i < m; ++i)
          if (a(i, t) != 0) col_clear = false;
        if (!col_clear) continue;
      }
      Int h = std::gcd(a(t, t), n);
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < k; ++j)
          if (a(i, j) % h != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      w.row_op(t, bad, 1, 1, 0, 1);
    }
    out.diag[t] = a(t, t);
  }
  return out;
}

/// Generators (as columns) of {x in (Z/N)^cols : A x = 0}.
inline Mat kernel(const Mat& a, Int n) {
  auto s = smith(a, n);
  std::vector<Vec> gens;
  for (std::size_t t = 0; t < a.cols; ++t) {
    Int d = t < s.diag.size() ? s.diag[t] : 0;
    Int c = (d == 0) ? 1 : n / std::gcd(d, n);
    if (c == n) continue;
    Vec v(a.cols);
    for (std::size_t i = 0; i < a.cols; ++i) v[i] = mod(s.V(i, t) * c, n);
    gens.push_back(std::move(v));
  }
  return Mat::from_cols(a.cols, gens);
}

/// One solution of A x = b over Z/N, if any.
inline std::optional<Vec> solve(const Mat& a, const Vec& b, Int n) {
  auto s = smith(a, n);
  Vec w = mul(s.U, b, n);
  Vec z(a.cols, 0);
  for (std::size_t t = 0; t < a.rows; ++t) {
    Int d = t < s.diag.size() ? s.diag[t] : 0;
    if (d == 0) {
      if (w[t] != 0) return std::nullopt;
      continue;
    }
    Int g = std::gcd(d, n);
    if (w[t] % g != 0) return std::nullopt;
    Int ng = n / g;
    z[t] = mod((w[t] / g) * inv_mod((d / g) % ng, ng), ng);
  }
  return mul(s.V, z, n);
}

/// Presentation of (Z/N)^n / span(columns of rel) in invariant-factor form.
struct Quotient {
  Vec orders;  // each > 1, ascending under divisibility
  Mat proj;    // orders.size() x n : old coordinates -> new coordinates
  Mat lift;    // n x orders.size() : new generators in old coordinates
};

inline Quotient present_quotient(const Mat& rel, std::size_t n_dim, Int n) {
  Mat r = rel;
  if (r.rows != n_dim) {
    if (r.cols == 0) r = Mat(n_dim, 0);
    else throw std::invalid_argument("present_quotient: relation shape");
  }
  auto s = smith(r, n);
  Quotient q;
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < n_dim; ++t) {
    Int d = t < s.diag.size() ? s.diag[t] : 0;
    Int o = std::gcd(d, n);
    if (o > 1) {
      keep.push_back(t);
      q.orders.push_back(o);
    }
  }
  q.proj = Mat(keep.size(), n_dim);
  q.lift = Mat(n_dim, keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t j = 0; j < n_dim; ++j) {
      q.proj(a, j) = mod(s.U(keep[a], j), q.orders[a]);
      q.lift(j, a) = s.Uinv(j, keep[a]);
    }
  }
  return q;
}

// ---------------------------------------------------------------------------
// Finite abelian groups ⊕ Z/orders[i] with all orders dividing N.

/// diag(N/orders) * m: encodes "entries of row i modulo orders[i]" as Z/N data.
inline Mat scale_rows(const Mat& m, const Vec& orders, Int n) {
  Mat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Int f = n / orders[i];
    for (std::size_t j = 0; j < m.cols; ++j) r(i, j) = mod(m(i, j) * f, n);
  }
  return r;
}

inline Vec scale(const Vec& v, const Vec& orders, Int n) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = mod(v[i] * (n / orders[i]), n);
  return r;
}

/// Kernel generators of a homomorphism F: ⊕Z/src -> ⊕Z/dst.
inline Mat group_kernel(const Vec& src, const Vec& dst, const Mat& f, Int n) {
  Mat k = kernel(scale_rows(f, dst, n), n);
  reduce_rows(k, src);
  return k;
}

/// A subgroup of ⊕Z/ambient generated by columns, in invariant-factor form.
struct SubGroup {
  Vec ambient;
  Vec orders;  // invariant factors of the subgroup
  Mat gens;    // ambient coords of the new generators (ambient.size() x orders.size())
  Mat spanning;  // original spanning columns
  Mat proj;      // spanning coefficients -> new coordinates
  Int modulus = 1;

  std::size_t dim() const { return orders.size(); }

  /// Coordinates of an ambient element known to lie in the subgroup.
  std::optional<Vec> coords(const Vec& x) const {
    if (spanning.cols == 0) {
      if (is_zero(x, ambient)) return Vec{};
      return std::nullopt;
    }
    auto c = solve(scale_rows(spanning, ambient, modulus), scale(x, ambient, modulus), modulus);
    if (!c) return std::nullopt;
    Vec y = mul(proj, *c, modulus);
    reduce(y, orders);
    return y;
  }

  bool contains(const Vec& x) const { return coords(x).has_value(); }
};

inline SubGroup present_sub(const Vec& ambient, const Mat& spanning, Int n) {
  SubGroup sg;
  sg.ambient = ambient;
  sg.modulus = n;
  Mat span = spanning;
  if (span.rows != ambient.size()) span = Mat(ambient.size(), 0);
  reduce_rows(span, ambient);
  sg.spanning = span;
  Mat rel = kernel(scale_rows(span, ambient, n), n);
  auto q = present_quotient(rel, span.cols, n);
  sg.orders = q.orders;
  sg.proj = q.proj;
  sg.gens = span.cols == 0 ? Mat(ambient.size(), 0) : mul(span, q.lift, n);
  reduce_rows(sg.gens, ambient);
  return sg;
}

/// Quotient of ⊕Z/ambient by the subgroup spanned by columns.
inline Quotient present_group_quotient(const Vec& ambient, const Mat& spanning, Int n) {
  Mat rel(ambient.size(), ambient.size());
  for (std::size_t i = 0; i < ambient.size(); ++i) rel(i, i) = ambient[i];
  if (spanning.cols > 0) rel = hstack(rel, spanning);
  return present_quotient(rel, ambient.size(), n);
}

/// |⊕Z/orders|, saturating at INT64_MAX.
inline Int group_order(const Vec& orders) {
  __int128 s = 1;
  for (Int o : orders) {
    s *= o;
    if (s > static_cast<__int128>(INT64_MAX)) return INT64_MAX;
  }
  return static_cast<Int>(s);
}

/// Invariant factors of ⊕Z/orders.
inline Vec invariant_factors(const Vec& orders, Int n) {
  return present_group_quotient(orders, Mat(orders.size(), 0), n).orders;
}

}  // namespace cosupp
