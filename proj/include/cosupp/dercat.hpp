#pragma once
// Bounded chain complexes of finite modules (homological grading: d_n lowers
// degree), truncations, cones, semifree resolutions and derived windows.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cosupp/finmod.hpp"

namespace cosupp {

class Complex {
 public:
  Complex() = default;
  explicit Complex(RingPtr r) : ring_(r), zero_(zero_module(std::move(r))) {}

  const RingPtr& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(mods_.size()) - 1; }
  bool empty() const { return mods_.empty(); }

  const FinModule& at(int n) const {
    if (n < lo_ || n > hi()) return zero_;
    return mods_[static_cast<std::size_t>(n - lo_)];
  }

  /// d_n: C_n -> C_{n-1}, zero outside the stored range.
  Mat d(int n) const {
    if (n <= lo_ || n > hi()) return Mat(at(n - 1).dim(), at(n).dim());
    return diffs_[static_cast<std::size_t>(n - lo_)];
  }

  /// Appends or overwrites without validation; see make_complex.
  void set(int n, FinModule m) {
    if (mods_.empty()) {
      lo_ = n;
      mods_.push_back(std::move(m));
      diffs_.push_back(Mat(0, mods_.back().dim()));
      return;
    }
    while (n < lo_) {
      mods_.insert(mods_.begin(), zero_);
      diffs_.insert(diffs_.begin(), Mat(0, 0));
      --lo_;
    }
    while (n > hi()) {
      mods_.push_back(zero_);
      diffs_.push_back(Mat(0, 0));
    }
    mods_[static_cast<std::size_t>(n - lo_)] = std::move(m);
    fix_shapes();
  }
  void set_d(int n, Mat d) {
    if (n <= lo_ || n > hi()) {
      if (!d.data.empty() && std::any_of(d.data.begin(), d.data.end(), [](Int x) { return x != 0; }))
        throw InputError("differential d_" + std::to_string(n) + " outside the complex");
      return;
    }
    diffs_[static_cast<std::size_t>(n - lo_)] = std::move(d);
  }

  /// Drops zero modules at both ends.
  Complex trimmed() const {
    Complex c(ring_);
    int a = lo_, b = hi();
    while (a <= b && at(a).is_zero()) ++a;
    while (b >= a && at(b).is_zero()) --b;
    for (int n = a; n <= b; ++n) c.set(n, at(n));
    for (int n = a + 1; n <= b; ++n) c.set_d(n, d(n));
    return c;
  }

  Int total_size() const {
    Int s = 0;
    for (const auto& m : mods_) s = std::max(s, m.size());
    return s;
  }

 private:
  void fix_shapes() {
    for (std::size_t k = 0; k < mods_.size(); ++k) {
      std::size_t rows = k == 0 ? 0 : mods_[k - 1].dim();
      if (diffs_[k].rows != rows || diffs_[k].cols != mods_[k].dim()) diffs_[k] = Mat(rows, mods_[k].dim());
    }
  }

  RingPtr ring_;
  FinModule zero_;
  int lo_ = 0;
  std::vector<FinModule> mods_;
  std::vector<Mat> diffs_;
};

/// Validated complex: each d_n linear and d_{n-1} d_n = 0.
inline Complex make_complex(RingPtr r, const std::map<int, FinModule>& mods, const std::map<int, Mat>& diffs) {
  Complex c(r);
  for (const auto& [n, m] : mods) {
    if (m.ring != r) throw InputError("module in degree " + std::to_string(n) + " is over a different ring");
    c.set(n, m);
  }
  for (const auto& [n, f] : diffs) {
    const auto& src = c.at(n);
    const auto& dst = c.at(n - 1);
    if (f.rows != dst.dim() || f.cols != src.dim())
      throw InputError("differential d_" + std::to_string(n) + " has shape " + std::to_string(f.rows) + "x" +
                       std::to_string(f.cols) + ", expected " + std::to_string(dst.dim()) + "x" + std::to_string(src.dim()));
    Mat g = f;
    reduce_rows(g, dst.orders);
    if (!is_linear(src, dst, g)) throw InputError("differential d_" + std::to_string(n) + " is not R-linear");
    c.set_d(n, std::move(g));
  }
  for (int n = c.lo() + 2; n <= c.hi(); ++n)
    if (!is_zero(compose(c.at(n - 2), c.d(n - 1), c.d(n)), c.at(n - 2).orders))
      throw InputError("d_" + std::to_string(n - 1) + " * d_" + std::to_string(n) + " != 0 (d^2 fails at degree " +
                       std::to_string(n) + ")");
  return c;
}

inline Complex module_complex(const FinModule& m, int degree = 0) {
  Complex c(m.ring);
  c.set(degree, m);
  return c;
}

inline bool is_valid(const Complex& c) {
  for (int n = c.lo() + 1; n <= c.hi(); ++n)
    if (!is_linear(c.at(n), c.at(n - 1), c.d(n))) return false;
  for (int n = c.lo() + 2; n <= c.hi(); ++n)
    if (!is_zero(compose(c.at(n - 2), c.d(n - 1), c.d(n)), c.at(n - 2).orders)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Homology

inline Subquotient homology(const Complex& c, int n) {
  return homology_at(c.at(n), c.at(n - 1), c.d(n + 1), c.d(n));
}

struct HomologyProfile {
  std::map<int, FinModule> groups;  // nonzero only
  std::optional<int> inf, sup;

  bool is_zero() const { return groups.empty(); }
};

inline HomologyProfile homology_profile(const Complex& c, std::optional<int> from = {}, std::optional<int> to = {}) {
  HomologyProfile h;
  if (c.empty()) return h;
  int a = from.value_or(c.lo()), b = to.value_or(c.hi());
  a = std::max(a, c.lo());
  b = std::min(b, c.hi());
  for (int n = a; n <= b; ++n) {
    auto s = homology(c, n);
    if (s.module.is_zero()) continue;
    h.groups.emplace(n, s.module);
    if (!h.inf) h.inf = n;
    h.sup = n;
  }
  return h;
}

inline bool is_exact(const Complex& c) { return homology_profile(c).is_zero(); }

// ---------------------------------------------------------------------------
// Shift, truncations

/// (Σ^k C)_n = C_{n-k}, differential (-1)^k d.
inline Complex shift(const Complex& c, int k) {
  Complex s(c.ring());
  for (int n = c.lo(); n <= c.hi(); ++n) s.set(n + k, c.at(n));
  for (int n = c.lo() + 1; n <= c.hi(); ++n) {
    Mat d = c.d(n);
    if (k % 2 != 0) {
      for (auto& x : d.data) x = -x;
      reduce_rows(d, c.at(n - 1).orders);
    }
    s.set_d(n + k, std::move(d));
  }
  return s;
}

/// σ≥n: degrees above n unchanged, Ker d_n in degree n.
inline Complex trunc_ge(const Complex& c, int n) {
  Complex t(c.ring());
  if (c.empty() || n > c.hi()) return t;
  if (n < c.lo()) return c;
  auto z = kernel_of(c.at(n), c.at(n - 1), c.d(n));
  t.set(n, z.module);
  for (int m = n + 1; m <= c.hi(); ++m) t.set(m, c.at(m));
  for (int m = n + 2; m <= c.hi(); ++m) t.set_d(m, c.d(m));
  if (n + 1 <= c.hi()) {
    Mat d(z.module.dim(), c.at(n + 1).dim());
    Mat full = c.d(n + 1);
    for (std::size_t j = 0; j < d.cols; ++j) d.set_col(j, z.class_of_checked(full.col(j)));
    t.set_d(n + 1, std::move(d));
  }
  return t;
}

/// σ≤n: degrees below n unchanged, Coker d_{n+1} in degree n.
inline Complex trunc_le(const Complex& c, int n) {
  Complex t(c.ring());
  if (c.empty() || n < c.lo()) return t;
  if (n >= c.hi()) return c;
  auto q = cokernel_of(c.at(n), c.d(n + 1));
  for (int m = c.lo(); m < n; ++m) t.set(m, c.at(m));
  t.set(n, q.module);
  for (int m = c.lo() + 1; m < n; ++m) t.set_d(m, c.d(m));
  if (n - 1 >= c.lo()) t.set_d(n, compose(c.at(n - 1), c.d(n), q.lift));
  return t;
}

/// Inclusion σ≥n C -> C.
inline std::map<int, Mat> trunc_ge_inclusion(const Complex& c, int n) {
  std::map<int, Mat> f;
  if (c.empty() || n > c.hi()) return f;
  int start = std::max(n, c.lo());
  if (start == n) f[n] = kernel_of(c.at(n), c.at(n - 1), c.d(n)).lift;
  for (int m = start + (start == n ? 1 : 0); m <= c.hi(); ++m) f[m] = Mat::identity(c.at(m).dim());
  return f;
}

// ---------------------------------------------------------------------------
// Chain maps and cones

struct ChainMap {
  Complex source;
  Complex target;
  std::map<int, Mat> maps;  // f_n: source_n -> target_n; missing means zero

  Mat at(int n) const {
    auto it = maps.find(n);
    if (it != maps.end()) return it->second;
    return Mat(target.at(n).dim(), source.at(n).dim());
  }
};

inline bool is_chain_map(const ChainMap& f) {
  int a = std::min(f.source.lo(), f.target.lo()), b = std::max(f.source.hi(), f.target.hi());
  for (int n = a; n <= b; ++n) {
    if (!is_linear(f.source.at(n), f.target.at(n), f.at(n))) return false;
    Mat lhs = compose(f.target.at(n - 1), f.target.d(n), f.at(n));
    Mat rhs = compose(f.target.at(n - 1), f.at(n - 1), f.source.d(n));
    if (lhs != rhs) return false;
  }
  return true;
}

/// Multiplication by a ring element, degreewise.
inline ChainMap multiplication_map(const Complex& c, const Vec& r) {
  ChainMap f{c, c, {}};
  for (int n = c.lo(); n <= c.hi(); ++n) f.maps[n] = c.at(n).act(r);
  return f;
}

/// Cone_n = L_{n-1} ⊕ M_n with d(l, m) = (-d l, f(l) + d m).
inline Complex cone(const ChainMap& f) {
  const Complex& l = f.source;
  const Complex& m = f.target;
  if (!is_chain_map(f)) throw InputError("cone: not a chain map");
  Complex c(m.ring());
  if (l.empty() && m.empty()) return c;
  int a = std::min(l.empty() ? m.lo() : l.lo() + 1, m.empty() ? l.lo() + 1 : m.lo());
  int b = std::max(l.empty() ? m.hi() : l.hi() + 1, m.empty() ? l.hi() + 1 : m.hi());
  std::vector<DirectSum> sums;
  for (int n = a; n <= b; ++n) {
    sums.push_back(direct_sum(m.ring(), {l.at(n - 1), m.at(n)}));
    c.set(n, sums.back().module);
  }
  for (int n = a + 1; n <= b; ++n) {
    const auto& src = sums[static_cast<std::size_t>(n - a)];
    const auto& dst = sums[static_cast<std::size_t>(n - 1 - a)];
    Mat d(dst.module.dim(), src.module.dim());
    Mat dl = l.d(n - 1), dm = m.d(n), fl = f.at(n - 1);
    for (std::size_t i = 0; i < dl.rows; ++i)
      for (std::size_t j = 0; j < dl.cols; ++j) d(i, j) = -dl(i, j);
    for (std::size_t i = 0; i < fl.rows; ++i)
      for (std::size_t j = 0; j < fl.cols; ++j) d(dst.offsets[1] + i, j) = fl(i, j);
    for (std::size_t i = 0; i < dm.rows; ++i)
      for (std::size_t j = 0; j < dm.cols; ++j) d(dst.offsets[1] + i, src.offsets[1] + j) = dm(i, j);
    reduce_rows(d, dst.module.orders);
    c.set_d(n, std::move(d));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Degreewise functors

/// Applies a covariant additive functor degreewise.
template <class Obj>
Complex map_covariant(const Complex& c, const std::function<Obj(const FinModule&)>& on_obj,
                      const std::function<const FinModule&(const Obj&)>& module_of,
                      const std::function<Mat(const Obj&, const Obj&, const Mat&)>& on_map) {
  Complex out(c.ring());
  if (c.empty()) return out;
  std::vector<Obj> objs;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    objs.push_back(on_obj(c.at(n)));
    out.set(n, module_of(objs.back()));
  }
  for (int n = c.lo() + 1; n <= c.hi(); ++n)
    out.set_d(n, on_map(objs[static_cast<std::size_t>(n - c.lo())], objs[static_cast<std::size_t>(n - 1 - c.lo())], c.d(n)));
  return out;
}

/// Applies a contravariant functor degreewise: (F C)_n = F(C_{-n}).
template <class Obj>
Complex map_contravariant(const Complex& c, const std::function<Obj(const FinModule&)>& on_obj,
                          const std::function<const FinModule&(const Obj&)>& module_of,
                          const std::function<Mat(const Obj&, const Obj&, const Mat&)>& on_map) {
  Complex out(c.ring());
  if (c.empty()) return out;
  std::vector<Obj> objs;
  for (int n = c.lo(); n <= c.hi(); ++n) objs.push_back(on_obj(c.at(n)));
  auto obj = [&](int n) -> const Obj& { return objs[static_cast<std::size_t>(n - c.lo())]; };
  for (int n = -c.hi(); n <= -c.lo(); ++n) out.set(n, module_of(obj(-n)));
  // d'_n = F(d_{-n+1}): F(C_{-n}) -> F(C_{-n+1})
  for (int n = -c.hi() + 1; n <= -c.lo(); ++n) out.set_d(n, on_map(obj(-n), obj(-n + 1), c.d(-n + 1)));
  return out;
}

namespace detail {
struct DualObj {
  FinModule orig;
  FinModule dual;
};
}  // namespace detail

/// D_R(C) through the character dual, with correctly transposed differentials.
inline Complex char_dual_complex(const Complex& c) {
  using detail::DualObj;
  return map_contravariant<DualObj>(
      c, [](const FinModule& m) { return DualObj{m, char_dual(m)}; },
      [](const DualObj& o) -> const FinModule& { return o.dual; },
      // on_map(F(C_{-n}) , F(C_{-n+1}), d_{-n+1}: C_{-n+1} -> C_{-n})
      [](const DualObj& tgt_of_d, const DualObj& src_of_d, const Mat& d) {
        return char_dual_map(src_of_d.orig, tgt_of_d.orig, d);
      });
}

/// Hom(−, E) degreewise for a fixed module E (literal duals).
inline Complex hom_into_complex(const Complex& c, const FinModule& e) {
  return map_contravariant<HomModule>(
      c, [&](const FinModule& m) { return hom(m, e); }, [](const HomModule& h) -> const FinModule& { return h.module; },
      [](const HomModule& tgt_of_d, const HomModule& src_of_d, const Mat& d) {
        return hom_contravariant(tgt_of_d, src_of_d, d);
      });
}

/// Hom(X, −) degreewise for a fixed module X.
inline Complex hom_from_complex(const FinModule& x, const Complex& c) {
  return map_covariant<HomModule>(
      c, [&](const FinModule& m) { return hom(x, m); }, [](const HomModule& h) -> const FinModule& { return h.module; },
      [](const HomModule& from, const HomModule& to, const Mat& f) { return hom_covariant(from, to, f); });
}

/// X ⊗ − degreewise.
inline Complex tensor_complex(const FinModule& x, const Complex& c) {
  return map_covariant<TensorModule>(
      c, [&](const FinModule& m) { return tensor(x, m); }, [](const TensorModule& t) -> const FinModule& { return t.module; },
      [&](const TensorModule& from, const TensorModule& to, const Mat& f) {
        return tensor_map(from, to, Mat::identity(x.dim()), f);
      });
}

inline Complex localize_complex(const Complex& c, std::size_t p) {
  return map_covariant<Localized>(
      c, [&](const FinModule& m) { return localize(m, p); }, [](const Localized& l) -> const FinModule& { return l.sub.module; },
      [](const Localized& from, const Localized& to, const Mat& f) {
        // f ∘ lift lands in the ambient target; only the final projection knows its orders
        return compose(to.sub.module, to.projection, mul(f, from.sub.lift, to.sub.module.modulus()));
      });
}

/// Restriction of C_p to a complex over the local factor ring.
inline Complex restrict_complex(const Complex& c, std::size_t p) {
  const auto& lf = c.ring()->local_factors()[c.ring()->spectrum().at(p).local_index];
  if (!lf.ring) return c;
  Complex cp = localize_complex(c, p);
  Complex out(lf.ring);
  for (int n = cp.lo(); n <= cp.hi(); ++n) {
    FinModule m;
    m.ring = lf.ring;
    m.orders = cp.at(n).orders;
    for (std::size_t k = 0; k < lf.ring->dim(); ++k) m.action.push_back(cp.at(n).act(lf.embed.col(k)));
    out.set(n, std::move(m));
  }
  for (int n = cp.lo() + 1; n <= cp.hi(); ++n) out.set_d(n, cp.d(n));
  return out;
}

/// ^pC degreewise, with the literal formula Hom(D_R(−)_p, E(R/p)).
inline Complex colocalize_complex(const Complex& c, std::size_t p) {
  struct Obj {
    Colocalized col;
  };
  return map_covariant<Obj>(
      c, [&](const FinModule& m) { return Obj{colocalize(m, p)}; }, [](const Obj& o) -> const FinModule& { return o.col.module; },
      [](const Obj& from, const Obj& to, const Mat& f) {
        // D(f): D(to) -> D(from); localize; then Hom(−, E_p) back again
        Mat df = hom_contravariant(to.col.dual, from.col.dual, f);
        Mat dfp = compose(from.col.dual_p.sub.module, from.col.dual_p.projection,
                          compose(from.col.dual.module, df, to.col.dual_p.sub.lift));
        return hom_contravariant(from.col.hom, to.col.hom, dfp);
      });
}

/// C^~ = ⊕_m D_m D_m C degreewise.
inline Complex tilde_complex(const Complex& c) {
  struct Obj {
    TildeBidual t;
  };
  return map_covariant<Obj>(
      c, [&](const FinModule& m) { return Obj{tilde_bidual(m)}; }, [](const Obj& o) -> const FinModule& { return o.t.module; },
      [](const Obj& from, const Obj& to, const Mat& f) {
        Mat out(to.t.module.dim(), from.t.module.dim());
        for (std::size_t p = 0; p < from.t.inner.size(); ++p) {
          Mat inner = hom_contravariant(to.t.inner[p], from.t.inner[p], f);
          Mat outer = hom_contravariant(from.t.outer[p], to.t.outer[p], inner);
          for (std::size_t i = 0; i < outer.rows; ++i)
            for (std::size_t j = 0; j < outer.cols; ++j) out(to.t.sum.offsets[p] + i, from.t.sum.offsets[p] + j) = outer(i, j);
        }
        return out;
      });
}

/// D_m(C) = Hom(C, E(R/m)) degreewise.
inline Complex single_dual_complex(const Complex& c, std::size_t m) {
  return hom_into_complex(c, dualizing_data(c.ring())->envelopes.at(m).module);
}

/// D_R(C) = Hom(C, ⊕E) degreewise, literal.
inline Complex literal_dual_complex(const Complex& c) { return hom_into_complex(c, dualizing_data(c.ring())->sum.module); }

/// Hom(e_p R, C) degreewise.
inline Complex idempotent_hom_complex(const Complex& c, std::size_t p) {
  auto ep = localize(free_module(c.ring(), 1), p).sub.module;
  return hom_from_complex(ep, c);
}

/// Canonical map H_n(D C) -> D(H_{-n} C) is an isomorphism in every degree.
inline bool homology_commutes_with_dual(const Complex& c) {
  Complex dc = char_dual_complex(c);
  for (int n = -c.hi(); n <= -c.lo(); ++n) {
    auto hd = homology(dc, n);
    auto h = homology(c, -n);
    const FinModule& cm = c.at(-n);
    FinModule dh = char_dual(h.module);
    Mat f(dh.dim(), hd.module.dim());
    const Int big = cm.modulus();
    for (std::size_t s = 0; s < hd.module.dim(); ++s) {
      Vec chi = hd.lift.col(s);
      for (std::size_t t = 0; t < h.module.dim(); ++t) {
        Int v = character_value(cm, chi, h.lift.col(t));
        Int unit = big / h.module.orders[t];
        if (v % unit != 0) return false;
        f(t, s) = mod(v / unit, h.module.orders[t]);
      }
    }
    if (!is_isomorphism(hd.module, dh, f)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Semifree resolutions of bounded complexes, by killing the homology of the
// mapping cone one degree at a time.

struct Resolution {
  RingPtr ring;
  Complex target;
  int lo = 0;
  int top = -1;                    // P_n is correct for n <= top
  std::vector<std::size_t> ranks;  // P_{lo + k} = R^{ranks[k]}
  std::vector<std::vector<Vec>> boundary;  // per generator: free coordinates of d x in P_{n-1}
  std::vector<std::vector<Vec>> image;     // per generator: coordinates of φ x in target_n

  std::size_t rank(int n) const {
    if (n < lo || n > top) return 0;
    return ranks[static_cast<std::size_t>(n - lo)];
  }
  /// Ring element at (row b of P_{n-1}, column s of P_n).
  Vec entry(int n, std::size_t b, std::size_t s) const {
    const std::size_t d = ring->dim();
    const Vec& v = boundary[static_cast<std::size_t>(n - lo)][s];
    return Vec(v.begin() + static_cast<std::ptrdiff_t>(b * d), v.begin() + static_cast<std::ptrdiff_t>((b + 1) * d));
  }
  FinModule free(int n) const { return free_module(ring, rank(n)); }
  Mat d_matrix(int n) const {
    FinModule src = free(n), dst = free(n - 1);
    Mat m(dst.dim(), src.dim());
    if (rank(n) == 0 || rank(n - 1) == 0) return m;
    const auto& b = boundary[static_cast<std::size_t>(n - lo)];
    for (std::size_t s = 0; s < b.size(); ++s)
      for (std::size_t a = 0; a < ring->dim(); ++a) m.set_col(s * ring->dim() + a, dst.apply(dst.action[a], b[s]));
    return m;
  }
  Mat phi_matrix(int n) const {
    const FinModule& c = target.at(n);
    Mat m(c.dim(), free(n).dim());
    if (rank(n) == 0 || c.is_zero()) return m;
    const auto& im = image[static_cast<std::size_t>(n - lo)];
    for (std::size_t s = 0; s < im.size(); ++s)
      for (std::size_t a = 0; a < ring->dim(); ++a) m.set_col(s * ring->dim() + a, c.apply(c.action[a], im[s]));
    return m;
  }
  Complex as_complex() const {
    Complex p(ring);
    for (int n = lo; n <= top; ++n) p.set(n, free(n));
    for (int n = lo + 1; n <= top; ++n) p.set_d(n, d_matrix(n));
    return p;
  }
};

/// A minimal set of R-module generators. On each local factor e R with
/// maximal ideal p, lifts of a basis of eM/pM generate eM (Nakayama); the
/// factor pieces are then added up, so the count is the largest local one.
inline std::vector<Vec> module_generators(const FinModule& m) {
  if (m.is_zero()) return {};
  const Ring& r = *m.ring;
  const Mat id = Mat::identity(m.dim());
  std::vector<Vec> out;
  for (std::size_t f = 0; f < r.local_factors().size(); ++f) {
    std::size_t p = 0;
    while (r.spectrum()[p].local_index != f) ++p;
    const Mat& pb = r.spectrum()[p].ideal.basis();
    // pM spans the complement factors too, since p contains 1 - e
    std::vector<Vec> span;
    for (std::size_t c = 0; c < pb.cols; ++c) {
      Mat a = m.act(pb.col(c));
      for (std::size_t t = 0; t < m.dim(); ++t) span.push_back(a.col(t));
    }
    auto order_of = [&](const std::vector<Vec>& cols) {
      return cols.empty() ? Int{1} : group_order(present_sub(m.orders, Mat::from_cols(m.dim(), cols), m.modulus()).orders);
    };
    Int have = order_of(span);
    const Mat e = m.act(r.local_factors()[f].idempotent);
    std::size_t k = 0;
    for (std::size_t t = 0; t < m.dim() && have < m.size(); ++t) {
      Vec x = m.apply(e, id.col(t));
      auto cols = span;
      for (const auto& a : m.action) cols.push_back(m.apply(a, x));
      Int sz = order_of(cols);
      if (sz == have) continue;
      span = std::move(cols);
      have = sz;
      if (k == out.size()) out.push_back(m.zero());
      for (std::size_t i = 0; i < x.size(); ++i) out[k][i] += x[i];
      out[k] = m.reduce(out[k]);
      ++k;
    }
    if (have != m.size()) throw KernelBug("basis columns do not generate the module");
  }
  return out;
}

inline Resolution resolve(const Complex& c, int top) {
  Resolution res;
  res.ring = c.ring();
  res.target = c;
  res.lo = c.empty() ? 0 : c.lo();
  res.top = res.lo - 1;
  if (c.empty()) {
    res.top = top;
    res.ranks.assign(static_cast<std::size_t>(std::max(0, top - res.lo + 1)), 0);
    res.boundary.resize(res.ranks.size());
    res.image.resize(res.ranks.size());
    return res;
  }
  for (int n = res.lo; n <= top; ++n) {
    // Cone_n = P_{n-1} ⊕ C_n -> P_{n-2} ⊕ C_{n-1}
    FinModule p1 = res.free(n - 1), p2 = res.free(n - 2);
    const FinModule& cn = c.at(n);
    const FinModule& cn1 = c.at(n - 1);
    auto src = direct_sum(res.ring, {p1, cn});
    auto dst = direct_sum(res.ring, {p2, cn1});
    Mat dcone(dst.module.dim(), src.module.dim());
    Mat dp = res.d_matrix(n - 1), phi = res.phi_matrix(n - 1), dc = c.d(n);
    for (std::size_t i = 0; i < dp.rows; ++i)
      for (std::size_t j = 0; j < dp.cols; ++j) dcone(i, j) = -dp(i, j);
    for (std::size_t i = 0; i < phi.rows; ++i)
      for (std::size_t j = 0; j < phi.cols; ++j) dcone(dst.offsets[1] + i, j) = phi(i, j);
    for (std::size_t i = 0; i < dc.rows; ++i)
      for (std::size_t j = 0; j < dc.cols; ++j) dcone(dst.offsets[1] + i, src.offsets[1] + j) = dc(i, j);
    reduce_rows(dcone, dst.module.orders);
    Mat up = c.d(n + 1);
    Mat bnd(src.module.dim(), up.cols);
    for (std::size_t i = 0; i < up.rows; ++i)
      for (std::size_t j = 0; j < up.cols; ++j) bnd(src.offsets[1] + i, j) = up(i, j);
    Mat z = group_kernel(src.module.orders, dst.module.orders, dcone, src.module.modulus());
    auto h = subquotient(src.module, z, bnd);
    std::vector<Vec> bvec, ivec;
    for (const auto& g : module_generators(h.module)) {
      Vec x = src.module.apply(h.lift, g);
      Vec p(p1.dim()), cc(cn.dim());
      for (std::size_t i = 0; i < p1.dim(); ++i) p[i] = mod(-x[i], p1.orders[i]);
      for (std::size_t i = 0; i < cn.dim(); ++i) cc[i] = x[src.offsets[1] + i];
      bvec.push_back(std::move(p));
      ivec.push_back(std::move(cc));
    }
    res.ranks.push_back(bvec.size());
    res.boundary.push_back(std::move(bvec));
    res.image.push_back(std::move(ivec));
    res.top = n;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Derived windows. Homology is exact in the requested range; padding 2
// beyond the range the bounds require is kept as a safety margin.

inline constexpr int kWindowPadding = 2;

/// Tot(P ⊗ N) with P resolving the first argument.
inline Complex tensor_total(const Resolution& p, const Complex& n) {
  const RingPtr& r = p.ring;
  Complex t(r);
  if (n.empty()) return t;
  const int a = p.lo + n.lo(), b = p.top + n.hi();
  struct Block {
    int i, j;
    std::size_t offset;
  };
  std::map<int, std::vector<Block>> blocks;
  std::map<int, DirectSum> sums;
  for (int k = a; k <= b; ++k) {
    std::vector<FinModule> parts;
    std::vector<Block> bl;
    std::size_t off = 0;
    for (int i = p.lo; i <= p.top; ++i) {
      int j = k - i;
      if (j < n.lo() || j > n.hi() || p.rank(i) == 0 || n.at(j).is_zero()) continue;
      bl.push_back({i, j, off});
      parts.push_back(power(n.at(j), p.rank(i)));
      off += parts.back().dim();
    }
    sums.emplace(k, direct_sum(r, parts));
    blocks[k] = bl;
    t.set(k, sums.at(k).module);
  }
  for (int k = a + 1; k <= b; ++k) {
    const auto& dst_sum = sums.at(k - 1);
    Mat d(dst_sum.module.dim(), sums.at(k).module.dim());
    auto find = [&](int kk, int i) -> const Block* {
      for (const auto& x : blocks[kk])
        if (x.i == i) return &x;
      return nullptr;
    };
    for (const auto& blk : blocks[k]) {
      const FinModule& nj = n.at(blk.j);
      const std::size_t dj = nj.dim();
      // d^P ⊗ 1 into (i-1, j)
      if (const Block* tb = find(k - 1, blk.i - 1)) {
        for (std::size_t s = 0; s < p.rank(blk.i); ++s)
          for (std::size_t bb = 0; bb < p.rank(blk.i - 1); ++bb) {
            Mat act = nj.act(p.entry(blk.i, bb, s));
            for (std::size_t x = 0; x < dj; ++x)
              for (std::size_t y = 0; y < dj; ++y) d(tb->offset + bb * dj + x, blk.offset + s * dj + y) += act(x, y);
          }
      }
      // (-1)^i 1 ⊗ d^N into (i, j-1)
      if (const Block* tb = find(k - 1, blk.i)) {
        Mat dn = n.d(blk.j);
        const std::size_t dj1 = n.at(blk.j - 1).dim();
        const Int sign = (blk.i % 2 == 0) ? 1 : -1;
        for (std::size_t s = 0; s < p.rank(blk.i); ++s)
          for (std::size_t x = 0; x < dj1; ++x)
            for (std::size_t y = 0; y < dj; ++y) d(tb->offset + s * dj1 + x, blk.offset + s * dj + y) += sign * dn(x, y);
      }
    }
    reduce_rows(d, dst_sum.module.orders);
    t.set_d(k, std::move(d));
  }
  return t;
}

/// Hom(P, N)_m = ⊕_i N_{i+m}^{rank P_i}.
inline Complex hom_total(const Resolution& p, const Complex& n) {
  const RingPtr& r = p.ring;
  Complex t(r);
  if (n.empty()) return t;
  const int a = n.lo() - p.top, b = n.hi() - p.lo;
  struct Block {
    int i, j;
    std::size_t offset;
  };
  std::map<int, std::vector<Block>> blocks;
  std::map<int, DirectSum> sums;
  for (int m = a; m <= b; ++m) {
    std::vector<FinModule> parts;
    std::vector<Block> bl;
    std::size_t off = 0;
    for (int i = p.lo; i <= p.top; ++i) {
      int j = i + m;
      if (j < n.lo() || j > n.hi() || p.rank(i) == 0 || n.at(j).is_zero()) continue;
      bl.push_back({i, j, off});
      parts.push_back(power(n.at(j), p.rank(i)));
      off += parts.back().dim();
    }
    sums.emplace(m, direct_sum(r, parts));
    blocks[m] = bl;
    t.set(m, sums.at(m).module);
  }
  for (int m = a + 1; m <= b; ++m) {
    const auto& dst_sum = sums.at(m - 1);
    Mat d(dst_sum.module.dim(), sums.at(m).module.dim());
    auto find = [&](int mm, int i) -> const Block* {
      for (const auto& x : blocks[mm])
        if (x.i == i) return &x;
      return nullptr;
    };
    const Int sign = (m % 2 == 0) ? 1 : -1;
    for (const auto& blk : blocks[m]) {
      const FinModule& nj = n.at(blk.j);
      const std::size_t dj = nj.dim();
      // d^N f_i lands in component i of degree m-1
      if (const Block* tb = find(m - 1, blk.i)) {
        Mat dn = n.d(blk.j);
        const std::size_t dj1 = n.at(blk.j - 1).dim();
        for (std::size_t s = 0; s < p.rank(blk.i); ++s)
          for (std::size_t x = 0; x < dj1; ++x)
            for (std::size_t y = 0; y < dj; ++y) d(tb->offset + s * dj1 + x, blk.offset + s * dj + y) += dn(x, y);
      }
      // -(-1)^m f_i d^P_{i+1} lands in component i+1 of degree m-1
      if (const Block* tb = find(m - 1, blk.i + 1)) {
        for (std::size_t s = 0; s < p.rank(blk.i + 1); ++s)
          for (std::size_t bb = 0; bb < p.rank(blk.i); ++bb) {
            Mat act = nj.act(p.entry(blk.i + 1, bb, s));
            for (std::size_t x = 0; x < dj; ++x)
              for (std::size_t y = 0; y < dj; ++y) d(tb->offset + s * dj + x, blk.offset + bb * dj + y) -= sign * act(x, y);
          }
      }
    }
    reduce_rows(d, dst_sum.module.orders);
    t.set_d(m, std::move(d));
  }
  return t;
}

/// H_k(X ⊗^L Y) for k in [a, b].
inline HomologyProfile derived_tensor(const Complex& x, const Complex& y, int a, int b) {
  if (x.empty() || y.empty()) return {};
  auto p = resolve(x, b - y.lo() + 1 + kWindowPadding);
  return homology_profile(tensor_total(p, y), a, b);
}

/// H_k(RHom(X, Y)) for k in [a, b].
inline HomologyProfile derived_hom(const Complex& x, const Complex& y, int a, int b) {
  if (x.empty() || y.empty()) return {};
  auto p = resolve(x, y.hi() - a + 1 + kWindowPadding);
  return homology_profile(hom_total(p, y), a, b);
}

enum class Derived { ext, tor };

/// Ext^i (i in [a,b]) or Tor_i (i in [a,b]) of two modules; keys are the indices i.
inline std::map<int, FinModule> ext_tor_window(const FinModule& m, const FinModule& n, Derived kind, int a, int b) {
  if (b - a > 64) throw InputError("window too large");
  std::map<int, FinModule> out;
  if (kind == Derived::tor) {
    auto h = derived_tensor(module_complex(m), module_complex(n), a, b);
    for (auto& [i, g] : h.groups) out.emplace(i, g);
  } else {
    auto h = derived_hom(module_complex(m), module_complex(n), -b, -a);
    for (auto& [i, g] : h.groups) out.emplace(-i, g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nonvanishing criteria over the artinian local factor

enum class NVKind { rhom_residue, tensor_residue };

struct NVResult {
  bool nonzero = false;
  std::optional<int> witness;
};

/// RHom(k(p), C_p) ≄ 0 or k(p) ⊗^L C_p ≄ 0, decided by H(C_p) ≠ 0 with the
/// witness degree sup (resp. inf); validate cross-checks against a window.
inline NVResult derived_nonvanishing(const Complex& c, std::size_t p, NVKind kind, bool validate = false) {
  NVResult r;
  if (c.empty()) return r;
  auto h = homology_profile(localize_complex(c, p));
  r.nonzero = !h.is_zero();
  if (r.nonzero) r.witness = kind == NVKind::rhom_residue ? *h.sup : *h.inf;
  if (validate) {
    Complex k = module_complex(residue_field(c.ring(), p));
    int a = r.nonzero ? *h.inf - 2 : c.lo() - 2, b = r.nonzero ? *h.sup + 2 : c.hi() + 2;
    auto w = kind == NVKind::rhom_residue ? derived_hom(k, c, a, b) : derived_tensor(k, c, a, b);
    bool ok = w.is_zero() != r.nonzero;
    if (ok && r.nonzero) ok = w.groups.count(*r.witness) == 1;
    if (ok && r.nonzero && kind == NVKind::rhom_residue) ok = *w.sup == *r.witness;
    if (ok && r.nonzero && kind == NVKind::tensor_residue) ok = *w.inf == *r.witness;
    if (!ok) throw KernelBug("nonvanishing criterion disagrees with its derived window");
  }
  return r;
}

/// Nonvanishing of a derived object, judged on a window that contains every
/// degree where its homology can live for bounded arguments.
inline bool window_nonzero(const HomologyProfile& h) { return !h.is_zero(); }

}  // namespace cosupp
