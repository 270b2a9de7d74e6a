#pragma once
// Finite modules over finite commutative rings, with the dualities built on
// Hom into injective hulls of residue fields.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cosupp/finring.hpp"

namespace cosupp {

inline constexpr Int kMaxArithmeticModule = Int{1} << 20;
inline constexpr Int kMaxEnumeratedModule = 256;

/// A finite R-module: ⊕ Z/orders[j] with one action matrix per additive ring
/// generator. Orders need not be in invariant-factor form.
struct FinModule {
  RingPtr ring;
  Vec orders;
  std::vector<Mat> action;

  std::size_t dim() const { return orders.size(); }
  Int size() const { return group_order(orders); }
  bool is_zero() const { return orders.empty(); }
  Int modulus() const { return ring->characteristic(); }

  /// Matrix of multiplication by the ring element r.
  Mat act(const Vec& r) const {
    Mat m(dim(), dim());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0) continue;
      for (std::size_t k = 0; k < m.data.size(); ++k) m.data[k] += r[i] * action[i].data[k];
    }
    reduce_rows(m, orders);
    return m;
  }

  Vec reduce(Vec x) const {
    cosupp::reduce(x, orders);
    return x;
  }
  Vec zero() const { return Vec(dim(), 0); }
  Vec add(const Vec& x, const Vec& y) const {
    Vec z(dim());
    for (std::size_t i = 0; i < dim(); ++i) z[i] = mod(x[i] + y[i], orders[i]);
    return z;
  }
  Vec apply(const Mat& a, const Vec& x) const { return reduce(mul(a, x, modulus())); }
  bool is_zero(const Vec& x) const { return cosupp::is_zero(x, orders); }

  std::size_t index(const Vec& x) const {
    std::size_t idx = 0;
    for (std::size_t i = dim(); i-- > 0;)
      idx = idx * static_cast<std::size_t>(orders[i]) + static_cast<std::size_t>(mod(x[i], orders[i]));
    return idx;
  }
  Vec element(std::size_t idx) const {
    Vec x(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      x[i] = static_cast<Int>(idx % static_cast<std::size_t>(orders[i]));
      idx /= static_cast<std::size_t>(orders[i]);
    }
    return x;
  }
};

/// An R-linear map; matrix is target.dim() x source.dim().
struct ModuleMap {
  FinModule source;
  FinModule target;
  Mat matrix;

  Vec operator()(const Vec& x) const { return target.apply(matrix, x); }
};

inline Mat zero_matrix(const FinModule& src, const FinModule& dst) { return Mat(dst.dim(), src.dim()); }

// ---------------------------------------------------------------------------
// Validation

inline bool same_ring(const FinModule& a, const FinModule& b) { return a.ring == b.ring; }

inline void require_same_ring(const FinModule& a, const FinModule& b) {
  if (!same_ring(a, b)) throw InputError("modules live over different rings");
}

/// True iff the matrix defines a group homomorphism ⊕Z/src -> ⊕Z/dst.
inline bool well_defined(const Vec& src, const Vec& dst, const Mat& f) {
  if (f.rows != dst.size() || f.cols != src.size()) return false;
  for (std::size_t j = 0; j < f.cols; ++j)
    for (std::size_t i = 0; i < f.rows; ++i)
      if (mod(f(i, j) * src[j], dst[i]) != 0) return false;
  return true;
}

/// Reason the data fails to be a module, or nullopt when valid.
inline std::optional<std::string> module_defect(const FinModule& m) {
  const Ring& r = *m.ring;
  const Int n = r.characteristic();
  for (Int o : m.orders)
    if (o < 2 || n % o != 0) return "module order " + std::to_string(o) + " must be >= 2 and divide char " + std::to_string(n);
  if (m.action.size() != r.dim()) return "need one action matrix per ring generator";
  for (std::size_t i = 0; i < r.dim(); ++i) {
    if (m.action[i].rows != m.dim() || m.action[i].cols != m.dim()) return "action matrix has wrong shape";
    if (!well_defined(m.orders, m.orders, m.action[i])) return "action matrix " + std::to_string(i) + " does not respect orders";
    Mat k = m.action[i];
    for (auto& v : k.data) v *= r.orders()[i];
    if (!is_zero(k, m.orders)) return "action of generator " + std::to_string(i) + " ignores its additive order";
  }
  if (m.act(r.one()) != Mat::identity(m.dim()) && m.dim() > 0) {
    Mat id = Mat::identity(m.dim());
    reduce_rows(id, m.orders);
    if (m.act(r.one()) != id) return "ring identity does not act as the identity";
  }
  for (std::size_t i = 0; i < r.dim(); ++i)
    for (std::size_t j = 0; j < r.dim(); ++j) {
      Mat lhs = mul(m.action[i], m.action[j], n);
      reduce_rows(lhs, m.orders);
      Mat rhs = m.act(r.left(i).col(j));
      if (lhs != rhs) return "action is not compatible with ring multiplication";
    }
  return std::nullopt;
}

inline FinModule make_module(RingPtr ring, Vec orders, std::vector<Mat> action) {
  FinModule m{std::move(ring), std::move(orders), std::move(action)};
  for (auto& a : m.action)
    if (a.rows == m.dim() && a.cols == m.dim()) reduce_rows(a, m.orders);
  if (m.size() > kMaxArithmeticModule) throw InputError("module exceeds the size cap of 2^20 elements");
  if (auto d = module_defect(m)) throw InputError(*d);
  return m;
}

inline bool is_linear(const FinModule& src, const FinModule& dst, const Mat& f) {
  if (!same_ring(src, dst) || !well_defined(src.orders, dst.orders, f)) return false;
  const Int n = src.modulus();
  for (std::size_t i = 0; i < src.action.size(); ++i) {
    Mat a = mul(f, src.action[i], n), b = mul(dst.action[i], f, n);
    reduce_rows(a, dst.orders);
    reduce_rows(b, dst.orders);
    if (a != b) return false;
  }
  return true;
}

inline ModuleMap make_map(const FinModule& src, const FinModule& dst, Mat f) {
  require_same_ring(src, dst);
  if (f.rows != dst.dim() || f.cols != src.dim()) throw InputError("map matrix has wrong shape");
  reduce_rows(f, dst.orders);
  if (!well_defined(src.orders, dst.orders, f)) throw InputError("map matrix does not respect orders");
  if (!is_linear(src, dst, f)) throw InputError("map does not commute with the ring action");
  return ModuleMap{src, dst, std::move(f)};
}

inline Mat compose(const FinModule& target, const Mat& g, const Mat& f) {
  Mat h = mul(g, f, target.modulus());
  reduce_rows(h, target.orders);
  return h;
}

// ---------------------------------------------------------------------------
// Basic modules

inline FinModule zero_module(RingPtr r) {
  std::vector<Mat> act(r ? r->dim() : 0, Mat(0, 0));
  return FinModule{std::move(r), {}, std::move(act)};
}

/// R^k with coordinates (copy, ring coordinate).
inline FinModule free_module(RingPtr r, std::size_t k) {
  const std::size_t d = r->dim();
  Vec orders;
  for (std::size_t c = 0; c < k; ++c) orders.insert(orders.end(), r->orders().begin(), r->orders().end());
  std::vector<Mat> act(d, Mat(d * k, d * k));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) act[i](c * d + a, c * d + b) = r->left(i)(a, b);
  return FinModule{std::move(r), std::move(orders), std::move(act)};
}

/// Matrix on free coordinates of the map R^cols -> R^rows given by ring elements.
inline Mat free_map_matrix(const Ring& r, const std::vector<std::vector<Vec>>& entries, std::size_t rows, std::size_t cols) {
  const std::size_t d = r.dim();
  Mat m(rows * d, cols * d);
  for (std::size_t b = 0; b < rows; ++b)
    for (std::size_t j = 0; j < cols; ++j) {
      Mat blk = r.act(entries[b][j]);
      for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) m(b * d + x, j * d + y) = blk(x, y);
    }
  return m;
}

// ---------------------------------------------------------------------------
// Subquotients

/// Z/B for submodules B ⊆ Z of an ambient module.
struct Subquotient {
  FinModule module;
  SubGroup cycles;  // Z inside the ambient module
  Mat proj;         // Z coordinates -> module coordinates
  Mat lift;         // module coordinates -> ambient coordinates

  /// Class of an ambient element lying in Z.
  std::optional<Vec> class_of(const Vec& x) const {
    auto c = cycles.coords(x);
    if (!c) return std::nullopt;
    return module.apply(proj, *c);
  }
  Vec class_of_checked(const Vec& x) const {
    auto c = class_of(x);
    if (!c) throw KernelBug("element outside the subquotient's cycles");
    return *c;
  }
};

/// The action of the ambient module must preserve both spans.
inline Subquotient subquotient(const FinModule& m, const Mat& z_span, const Mat& b_span) {
  const Int n = m.modulus();
  Subquotient sq;
  sq.cycles = present_sub(m.orders, z_span, n);
  const auto& z = sq.cycles;
  std::vector<Vec> bcols;
  for (std::size_t j = 0; j < b_span.cols; ++j) {
    auto c = z.coords(b_span.col(j));
    if (!c) throw KernelBug("boundary span not inside cycle span");
    bcols.push_back(*c);
  }
  auto q = present_group_quotient(z.orders, Mat::from_cols(z.dim(), bcols), n);
  sq.proj = q.proj;
  sq.lift = mul(z.gens, q.lift, n);
  reduce_rows(sq.lift, m.orders);
  sq.module.ring = m.ring;
  sq.module.orders = q.orders;
  const std::size_t k = q.orders.size();
  for (std::size_t i = 0; i < m.action.size(); ++i) {
    Mat a(k, k);
    for (std::size_t t = 0; t < k; ++t) {
      Vec y = m.apply(m.action[i], sq.lift.col(t));
      auto c = sq.class_of(y);
      if (!c) throw KernelBug("cycle span is not a submodule");
      a.set_col(t, *c);
    }
    sq.module.action.push_back(std::move(a));
  }
  return sq;
}

inline Mat all_of(const FinModule& m) {
  Mat id = Mat::identity(m.dim());
  return id;
}

/// R-submodule generated by the given elements.
inline Subquotient submodule(const FinModule& m, const std::vector<Vec>& gens) {
  std::vector<Vec> cols;
  for (const auto& g : gens)
    for (const auto& a : m.action) cols.push_back(m.apply(a, g));
  return subquotient(m, Mat::from_cols(m.dim(), cols), Mat(m.dim(), 0));
}

/// M / (submodule generated by gens).
inline Subquotient quotient(const FinModule& m, const std::vector<Vec>& gens) {
  std::vector<Vec> cols;
  for (const auto& g : gens)
    for (const auto& a : m.action) cols.push_back(m.apply(a, g));
  return subquotient(m, all_of(m), Mat::from_cols(m.dim(), cols));
}

inline Subquotient kernel_of(const FinModule& src, const FinModule& dst, const Mat& f) {
  return subquotient(src, group_kernel(src.orders, dst.orders, f, src.modulus()), Mat(src.dim(), 0));
}
inline Subquotient image_of(const FinModule& dst, const Mat& f) {
  return subquotient(dst, f.cols ? f : Mat(dst.dim(), 0), Mat(dst.dim(), 0));
}
inline Subquotient cokernel_of(const FinModule& dst, const Mat& f) {
  return subquotient(dst, all_of(dst), f.cols ? f : Mat(dst.dim(), 0));
}

inline Subquotient kernel_of(const ModuleMap& f) { return kernel_of(f.source, f.target, f.matrix); }
inline Subquotient image_of(const ModuleMap& f) { return image_of(f.target, f.matrix); }
inline Subquotient cokernel_of(const ModuleMap& f) { return cokernel_of(f.target, f.matrix); }

/// ker(g)/im(f) for A -f-> B -g-> C with g f = 0.
inline Subquotient homology_at(const FinModule& b, const FinModule& c, const Mat& f, const Mat& g) {
  Mat z = group_kernel(b.orders, c.orders, g, b.modulus());
  return subquotient(b, z, f.cols ? f : Mat(b.dim(), 0));
}

/// Map between subquotients induced by an ambient map sending cycles to cycles.
inline Mat induced_on(const Subquotient& src, const Subquotient& dst, const FinModule& dst_ambient, const Mat& f) {
  Mat out(dst.module.dim(), src.module.dim());
  for (std::size_t t = 0; t < src.module.dim(); ++t)
    out.set_col(t, dst.class_of_checked(dst_ambient.apply(f, src.lift.col(t))));
  return out;
}

/// Module presented as the cokernel of a map of free modules R^a -> R^b.
inline FinModule cokernel_presentation(RingPtr r, const std::vector<std::vector<Vec>>& entries, std::size_t rows, std::size_t cols) {
  FinModule target = free_module(r, rows);
  Mat m = free_map_matrix(*r, entries, rows, cols);
  return cokernel_of(target, m).module;
}

/// R/I as an R-module.
inline FinModule cyclic_module(RingPtr r, const Ideal& a) {
  FinModule rr = free_module(r, 1);
  return cokernel_of(rr, a.basis()).module;
}

/// The residue field R/p viewed as an R-module.
inline FinModule residue_field(RingPtr r, std::size_t p) {
  const auto& ideal = r->spectrum().at(p).ideal;
  return cyclic_module(std::move(r), ideal);
}

/// Invariant-factor normal form, with the isomorphism M -> canonical.
inline std::pair<FinModule, Mat> canonical_form(const FinModule& m) {
  auto sq = subquotient(m, all_of(m), Mat(m.dim(), 0));
  Mat iso(sq.module.dim(), m.dim());
  for (std::size_t j = 0; j < m.dim(); ++j) iso.set_col(j, sq.class_of_checked(Mat::identity(m.dim()).col(j)));
  return {sq.module, iso};
}

/// Injective, surjective and R-linear.
inline bool is_isomorphism(const FinModule& src, const FinModule& dst, const Mat& f) {
  if (!is_linear(src, dst, f)) return false;
  if (src.size() != dst.size()) return false;
  return kernel_of(src, dst, f).module.is_zero();
}

// ---------------------------------------------------------------------------
// Direct sums

struct DirectSum {
  FinModule module;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> dims;

  Mat inclusion(std::size_t k) const {
    Mat m(module.dim(), dims[k]);
    for (std::size_t j = 0; j < dims[k]; ++j) m(offsets[k] + j, j) = 1;
    return m;
  }
  Mat projection(std::size_t k) const {
    Mat m(dims[k], module.dim());
    for (std::size_t j = 0; j < dims[k]; ++j) m(j, offsets[k] + j) = 1;
    return m;
  }
};

inline DirectSum direct_sum(RingPtr r, const std::vector<FinModule>& parts) {
  DirectSum s;
  s.module.ring = r;
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.ring != r) throw InputError("direct sum of modules over different rings");
    s.offsets.push_back(total);
    s.dims.push_back(p.dim());
    total += p.dim();
    s.module.orders.insert(s.module.orders.end(), p.orders.begin(), p.orders.end());
  }
  for (std::size_t i = 0; i < r->dim(); ++i) {
    Mat a(total, total);
    for (std::size_t k = 0; k < parts.size(); ++k)
      for (std::size_t x = 0; x < s.dims[k]; ++x)
        for (std::size_t y = 0; y < s.dims[k]; ++y) a(s.offsets[k] + x, s.offsets[k] + y) = parts[k].action[i](x, y);
    s.module.action.push_back(std::move(a));
  }
  return s;
}

inline FinModule direct_sum(const FinModule& a, const FinModule& b) {
  require_same_ring(a, b);
  return direct_sum(a.ring, {a, b}).module;
}

inline FinModule power(const FinModule& m, std::size_t k) {
  return direct_sum(m.ring, std::vector<FinModule>(k, m)).module;
}

// ---------------------------------------------------------------------------
// Hom and tensor

/// Hom_R(M, N); elements are target.dim() x source.dim() matrices.
struct HomModule {
  FinModule module;
  FinModule source;
  FinModule target;
  SubGroup space;  // inside ⊕ Z/target.orders[b], one per matrix entry (b, a)

  Vec flat_orders() const { return space.ambient; }

  Mat to_matrix(const Vec& c) const {
    Vec flat = mul(space.gens, c, module.modulus());
    Mat f(target.dim(), source.dim());
    f.data = flat;
    reduce_rows(f, target.orders);
    return f;
  }
  Mat generator(std::size_t k) const { return to_matrix(Mat::identity(module.dim()).col(k)); }

  std::optional<Vec> coords(const Mat& f) const {
    Mat g = f;
    reduce_rows(g, target.orders);
    return space.coords(g.data);
  }
  Vec coords_checked(const Mat& f) const {
    auto c = coords(f);
    if (!c) throw KernelBug("matrix is not an R-linear map");
    return *c;
  }
};

inline HomModule hom(const FinModule& m, const FinModule& n) {
  require_same_ring(m, n);
  const Int mod_n = m.modulus();
  const std::size_t a_dim = m.dim(), b_dim = n.dim(), vars = a_dim * b_dim;
  Vec x_orders(vars);
  for (std::size_t b = 0; b < b_dim; ++b)
    for (std::size_t a = 0; a < a_dim; ++a) x_orders[b * a_dim + a] = n.orders[b];
  const std::size_t blocks = 1 + m.action.size();
  Vec dst;
  for (std::size_t t = 0; t < blocks; ++t) dst.insert(dst.end(), x_orders.begin(), x_orders.end());
  Mat phi(vars * blocks, vars);
  for (std::size_t b = 0; b < b_dim; ++b)
    for (std::size_t a = 0; a < a_dim; ++a) phi(b * a_dim + a, b * a_dim + a) = m.orders[a];
  for (std::size_t i = 0; i < m.action.size(); ++i) {
    const Mat& src_act = m.action[i];
    const Mat& dst_act = n.action[i];
    const std::size_t off = (i + 1) * vars;
    for (std::size_t b = 0; b < b_dim; ++b)
      for (std::size_t a = 0; a < a_dim; ++a) {
        const std::size_t row = off + b * a_dim + a;
        for (std::size_t c = 0; c < a_dim; ++c) phi(row, b * a_dim + c) += src_act(c, a);
        for (std::size_t d = 0; d < b_dim; ++d) phi(row, d * a_dim + a) -= dst_act(b, d);
      }
  }
  HomModule h;
  h.source = m;
  h.target = n;
  Mat k = vars ? group_kernel(x_orders, dst, phi, mod_n) : Mat(0, 0);
  h.space = present_sub(x_orders, k, mod_n);
  h.module.ring = m.ring;
  h.module.orders = h.space.orders;
  const std::size_t dim = h.space.dim();
  for (std::size_t i = 0; i < m.action.size(); ++i) {
    Mat act(dim, dim);
    for (std::size_t t = 0; t < dim; ++t) act.set_col(t, h.coords_checked(compose(n, h.generator(t), m.action[i])));
    h.module.action.push_back(std::move(act));
  }
  return h;
}

/// Hom(M, g): Hom(M, N) -> Hom(M, N') for g: N -> N'.
inline Mat hom_covariant(const HomModule& from, const HomModule& to, const Mat& g) {
  Mat out(to.module.dim(), from.module.dim());
  for (std::size_t t = 0; t < from.module.dim(); ++t)
    out.set_col(t, to.coords_checked(compose(to.target, g, from.generator(t))));
  return out;
}

/// Hom(f, N): Hom(M', N) -> Hom(M, N) for f: M -> M'.
inline Mat hom_contravariant(const HomModule& from, const HomModule& to, const Mat& f) {
  Mat out(to.module.dim(), from.module.dim());
  for (std::size_t t = 0; t < from.module.dim(); ++t)
    out.set_col(t, to.coords_checked(compose(to.target, from.generator(t), f)));
  return out;
}

struct TensorModule {
  FinModule module;
  FinModule left;
  FinModule right;
  Mat proj;  // pure-tensor coordinates (a * right.dim() + b) -> module
  Mat lift;

  Vec pure(std::size_t a, std::size_t b) const { return proj.col(a * right.dim() + b); }
};

inline TensorModule tensor(const FinModule& m, const FinModule& n) {
  require_same_ring(m, n);
  const Int mod_n = m.modulus();
  const std::size_t p = m.dim(), q = n.dim(), dim = p * q;
  std::vector<Vec> rel;
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < q; ++b) {
      Vec v(dim, 0);
      v[a * q + b] = std::gcd(m.orders[a], n.orders[b]);
      rel.push_back(std::move(v));
    }
  for (std::size_t i = 0; i < m.action.size(); ++i)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        Vec v(dim, 0);
        for (std::size_t c = 0; c < p; ++c) v[c * q + b] += m.action[i](c, a);
        for (std::size_t d = 0; d < q; ++d) v[a * q + d] -= n.action[i](d, b);
        for (auto& x : v) x = mod(x, mod_n);
        rel.push_back(std::move(v));
      }
  auto quo = present_quotient(dim ? Mat::from_cols(dim, rel) : Mat(0, 0), dim, mod_n);
  TensorModule t;
  t.left = m;
  t.right = n;
  t.proj = quo.proj;
  t.lift = quo.lift;
  t.module.ring = m.ring;
  t.module.orders = quo.orders;
  const std::size_t k = quo.orders.size();
  for (std::size_t i = 0; i < m.action.size(); ++i) {
    // g acts on the left factor
    Mat big(dim, dim);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < q; ++b)
        for (std::size_t c = 0; c < p; ++c) big(c * q + b, a * q + b) = m.action[i](c, a);
    Mat act = mul(mul(quo.proj, big, mod_n), quo.lift, mod_n);
    reduce_rows(act, quo.orders);
    (void)k;
    t.module.action.push_back(std::move(act));
  }
  return t;
}

/// f ⊗ g between tensor products.
inline Mat tensor_map(const TensorModule& from, const TensorModule& to, const Mat& f, const Mat& g) {
  const Int n = from.module.modulus();
  const std::size_t p = from.left.dim(), q = from.right.dim();
  const std::size_t p2 = to.left.dim(), q2 = to.right.dim();
  Mat big(p2 * q2, p * q);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t c = 0; c < p2; ++c)
        for (std::size_t d = 0; d < q2; ++d) big(c * q2 + d, a * q + b) = mod(f(c, a) * g(d, b), n);
  Mat out = mul(mul(to.proj, big, n), from.lift, n);
  reduce_rows(out, to.module.orders);
  return out;
}

// ---------------------------------------------------------------------------
// Localization at a prime (index into Spec R)

inline const Vec& local_idempotent(const Ring& r, std::size_t p) {
  if (p >= r.spectrum().size()) throw InputError("prime not in Spec R");
  return r.local_factors()[r.spectrum()[p].local_index].idempotent;
}

/// M_p = e_p M, with the projection x -> e_p x in lifted coordinates.
struct Localized {
  Subquotient sub;
  Mat projection;  // M -> M_p
  const FinModule& module() const { return sub.module; }
};

inline Localized localize(const FinModule& m, std::size_t p) {
  Mat e = m.act(local_idempotent(*m.ring, p));
  Localized l{subquotient(m, e, Mat(m.dim(), 0)), Mat()};
  l.projection = Mat(l.sub.module.dim(), m.dim());
  for (std::size_t j = 0; j < m.dim(); ++j) l.projection.set_col(j, l.sub.class_of_checked(e.col(j)));
  return l;
}

/// e_p M as a module over the local factor ring.
inline FinModule restrict_to_factor(const FinModule& m, std::size_t p) {
  const Ring& r = *m.ring;
  const auto& lf = r.local_factors()[r.spectrum().at(p).local_index];
  if (!lf.ring) return m;
  auto l = localize(m, p);
  const FinModule& mp = l.sub.module;
  FinModule out;
  out.ring = lf.ring;
  out.orders = mp.orders;
  for (std::size_t k = 0; k < lf.ring->dim(); ++k) out.action.push_back(mp.act(lf.embed.col(k)));
  return out;
}

/// A module over a local factor, viewed as an R-module.
inline FinModule extend_from_factor(RingPtr r, std::size_t p, const FinModule& mf) {
  const auto& lf = r->local_factors()[r->spectrum().at(p).local_index];
  if (!lf.ring) {
    FinModule out = mf;
    out.ring = r;
    return out;
  }
  if (mf.ring != lf.ring) throw InputError("module does not live over this factor ring");
  FinModule out;
  out.ring = r;
  out.orders = mf.orders;
  for (std::size_t j = 0; j < r->dim(); ++j) out.action.push_back(mf.act(lf.project.col(j)));
  return out;
}

// ---------------------------------------------------------------------------
// Character dual Hom_Z(−, Q/Z). Values in Q/Z are stored as numerators over
// the characteristic N.

inline FinModule char_dual(const FinModule& m) {
  FinModule d;
  d.ring = m.ring;
  d.orders = m.orders;
  const std::size_t k = m.dim();
  for (const auto& a : m.action) {
    Mat t(k, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t c = 0; c < k; ++c) t(j, c) = mod(a(c, j) * m.orders[j] / m.orders[c], m.orders[j]);
    d.action.push_back(std::move(t));
  }
  return d;
}

/// f*: N* -> M* for f: M -> N.
inline Mat char_dual_map(const FinModule& src, const FinModule& dst, const Mat& f) {
  Mat t(src.dim(), dst.dim());
  for (std::size_t a = 0; a < src.dim(); ++a)
    for (std::size_t b = 0; b < dst.dim(); ++b) t(a, b) = mod(f(b, a) * src.orders[a] / dst.orders[b], src.orders[a]);
  return t;
}

/// Value of a character (coordinates in char_dual(M)) on an element of M, as a numerator over N.
inline Int character_value(const FinModule& m, const Vec& chi, const Vec& x) {
  const Int n = m.modulus();
  Int t = 0;
  for (std::size_t j = 0; j < m.dim(); ++j) t = mod(t + chi[j] * x[j] % n * (n / m.orders[j]), n);
  return t;
}

/// Evaluation M -> M**, x -> (χ -> χ(x)), in the dual basis of M*.
inline Mat double_dual_evaluation(const FinModule& m) {
  const Int n = m.modulus();
  const Mat id = Mat::identity(m.dim());
  Mat f(m.dim(), m.dim());
  for (std::size_t t = 0; t < m.dim(); ++t)
    for (std::size_t k = 0; k < m.dim(); ++k) {
      Int unit = n / m.orders[k];
      f(k, t) = mod(character_value(m, id.col(k), id.col(t)) / unit, m.orders[k]);
    }
  return f;
}

// ---------------------------------------------------------------------------
// Injective hulls of residue fields

/// E(R/m) as the character dual of R_m.
struct Envelope {
  FinModule module;
  std::size_t prime = 0;
  Vec evaluation;  // row: E coordinates -> Q/Z numerator of ψ(e_m)
};

inline Envelope injective_envelope(RingPtr r, std::size_t p) {
  FinModule rr = free_module(r, 1);
  auto loc = localize(rr, p);
  const FinModule& rm = loc.sub.module;
  Envelope env{char_dual(rm), p, Vec(rm.dim())};
  Vec unit = loc.sub.class_of_checked(local_idempotent(*r, p));
  const Int n = r->characteristic();
  for (std::size_t j = 0; j < rm.dim(); ++j) env.evaluation[j] = mod(unit[j] * (n / rm.orders[j]), n);
  return env;
}

/// Elements of a module, as a dense list. Only for small modules.
inline std::vector<Vec> enumerate(const FinModule& m, Int cap = kMaxEnumeratedModule) {
  if (m.size() > cap) throw InputError("module too large to enumerate");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(m.size()); ++i) out.push_back(m.element(i));
  return out;
}

/// Elements killed by every element of the ideal.
inline std::vector<Vec> socle_elements(const FinModule& m, const Ideal& a) {
  std::vector<Mat> ops;
  for (std::size_t j = 0; j < a.basis().cols; ++j) ops.push_back(m.act(a.basis().col(j)));
  std::vector<Vec> out;
  for (const auto& x : enumerate(m)) {
    bool killed = true;
    for (const auto& op : ops)
      if (!m.is_zero(m.apply(op, x))) {
        killed = false;
        break;
      }
    if (killed) out.push_back(x);
  }
  return out;
}

/// Elements of the cyclic submodule Rx.
inline std::vector<Vec> cyclic_elements(const FinModule& m, const Vec& x) {
  std::vector<Vec> out;
  std::vector<char> seen(static_cast<std::size_t>(m.size()), 0);
  const Ring& r = *m.ring;
  for (std::size_t i = 0; i < static_cast<std::size_t>(r.size()); ++i) {
    Vec y = m.apply(m.act(r.element(i)), x);
    auto k = m.index(y);
    if (!seen[k]) {
      seen[k] = 1;
      out.push_back(std::move(y));
    }
  }
  return out;
}

/// The socle for m is a copy of R/m and every nonzero element reaches it.
inline bool is_essential_extension_of_residue(const FinModule& e, std::size_t p) {
  const Ring& r = *e.ring;
  const Ideal& m = r.spectrum().at(p).ideal;
  auto soc = socle_elements(e, m);
  const Int residue = r.size() / group_order(m.span.orders);
  if (static_cast<Int>(soc.size()) != residue) return false;
  std::vector<char> in_soc(static_cast<std::size_t>(e.size()), 0);
  for (const auto& s : soc) in_soc[e.index(s)] = 1;
  for (const auto& x : enumerate(e)) {
    if (e.is_zero(x)) continue;
    bool meets = false;
    for (const auto& y : cyclic_elements(e, x))
      if (!e.is_zero(y) && in_soc[e.index(y)]) {
        meets = true;
        break;
      }
    if (!meets) return false;
  }
  return true;
}

inline Envelope checked_envelope(RingPtr r, std::size_t p) {
  auto env = injective_envelope(r, p);
  if (env.module.size() <= kMaxEnumeratedModule && !is_essential_extension_of_residue(env.module, p))
    throw KernelBug("injective envelope failed the essentiality check");
  return env;
}

/// ⊕_m E(R/m), cached per ring.
struct DualizingData {
  std::vector<Envelope> envelopes;
  DirectSum sum;
};

inline std::shared_ptr<const DualizingData> dualizing_data(const RingPtr& r) {
  static std::mutex mu;
  static std::map<const Ring*, std::pair<std::weak_ptr<const Ring>, std::shared_ptr<const DualizingData>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(r.get());
    if (it != cache.end()) {
      if (auto live = it->second.first.lock(); live == r) return it->second.second;
      cache.erase(it);
    }
  }
  auto data = std::make_shared<DualizingData>();
  std::vector<FinModule> parts;
  for (std::size_t p = 0; p < r->spectrum().size(); ++p) {
    data->envelopes.push_back(checked_envelope(r, p));
    parts.push_back(data->envelopes.back().module);
  }
  data->sum = direct_sum(r, parts);
  std::lock_guard<std::mutex> lock(mu);
  cache[r.get()] = {r, data};
  return data;
}

/// D_R(M) = Hom(M, ⊕_m E(R/m)), computed literally.
inline HomModule matlis_dual_literal(const FinModule& m) { return hom(m, dualizing_data(m.ring)->sum.module); }

/// D_m(M) = Hom(M, E(R/m)).
inline HomModule matlis_dual_single(const FinModule& m, std::size_t p) {
  if (p >= m.ring->spectrum().size()) throw InputError("prime not in Spec R");
  return hom(m, dualizing_data(m.ring)->envelopes[p].module);
}

/// Fast path for D_R: the character dual.
inline FinModule matlis_dual(const FinModule& m) { return char_dual(m); }
inline Mat matlis_dual_map(const FinModule& src, const FinModule& dst, const Mat& f) { return char_dual_map(src, dst, f); }

/// Canonical map Hom(M, ⊕E) -> char_dual(M): f -> (x -> Σ_m ψ_m(e_m)) with ψ = f(x).
inline Mat literal_to_character(const HomModule& d) {
  const auto data = dualizing_data(d.source.ring);
  const FinModule& m = d.source;
  const Int n = m.modulus();
  Mat out(m.dim(), d.module.dim());
  for (std::size_t t = 0; t < d.module.dim(); ++t) {
    Mat f = d.generator(t);
    for (std::size_t a = 0; a < m.dim(); ++a) {
      Int v = 0;
      for (std::size_t k = 0; k < data->envelopes.size(); ++k) {
        const auto& env = data->envelopes[k];
        for (std::size_t j = 0; j < env.module.dim(); ++j)
          v = mod(v + env.evaluation[j] * f(data->sum.offsets[k] + j, a), n);
      }
      const Int unit = n / m.orders[a];
      if (v % unit != 0) throw KernelBug("character value has the wrong order");
      out(a, t) = mod(v / unit, m.orders[a]);
    }
  }
  return out;
}

/// Checks that the literal and character routes give naturally isomorphic duals.
inline bool matlis_routes_agree(const FinModule& m) {
  auto lit = matlis_dual_literal(m);
  FinModule fast = char_dual(m);
  return is_isomorphism(lit.module, fast, literal_to_character(lit));
}

// ---------------------------------------------------------------------------
// Co-localization ^pM = Hom(D_R(M)_p, E(R/p)) and M^~

struct Colocalized {
  FinModule module;
  HomModule hom;
  HomModule dual;    // D_R(M), literal
  Localized dual_p;  // D_R(M)_p
};

inline Colocalized colocalize(const FinModule& m, std::size_t p) {
  auto d = matlis_dual_literal(m);
  auto dp = localize(d.module, p);
  auto h = hom(dp.sub.module, dualizing_data(m.ring)->envelopes.at(p).module);
  return Colocalized{h.module, h, d, dp};
}

/// Canonical map M_p -> ^pM, x -> (f -> π_p f(x)).
inline Mat colocalization_comparison(const FinModule& m, std::size_t p, const Colocalized& c) {
  const auto data = dualizing_data(m.ring);
  auto mp = localize(m, p);
  const auto& env = data->envelopes[p];
  const auto& dp = c.dual_p.sub;
  Mat out(c.module.dim(), mp.sub.module.dim());
  for (std::size_t t = 0; t < mp.sub.module.dim(); ++t) {
    Vec x = mp.sub.lift.col(t);
    Mat phi(env.module.dim(), dp.module.dim());
    for (std::size_t k = 0; k < dp.module.dim(); ++k) {
      Mat f = c.dual.to_matrix(dp.lift.col(k));
      Vec fx = data->sum.module.apply(f, x);
      for (std::size_t j = 0; j < env.module.dim(); ++j) phi(j, k) = fx[data->sum.offsets[p] + j];
    }
    out.set_col(t, c.hom.coords_checked(phi));
  }
  return out;
}

inline bool colocalization_routes_agree(const FinModule& m, std::size_t p) {
  auto c = colocalize(m, p);
  auto mp = localize(m, p);
  return is_isomorphism(mp.sub.module, c.module, colocalization_comparison(m, p, c));
}

struct TildeBidual {
  FinModule module;
  DirectSum sum;
  std::vector<HomModule> inner;  // D_m(M)
  std::vector<HomModule> outer;  // D_m(D_m(M))
};

inline TildeBidual tilde_bidual(const FinModule& m) {
  TildeBidual t;
  std::vector<FinModule> parts;
  for (std::size_t p = 0; p < m.ring->spectrum().size(); ++p) {
    t.inner.push_back(matlis_dual_single(m, p));
    t.outer.push_back(matlis_dual_single(t.inner.back().module, p));
    parts.push_back(t.outer.back().module);
  }
  t.sum = direct_sum(m.ring, parts);
  t.module = t.sum.module;
  return t;
}

/// Evaluation M -> ⊕_m D_m D_m M.
inline Mat tilde_evaluation(const FinModule& m, const TildeBidual& t) {
  Mat out(t.module.dim(), m.dim());
  for (std::size_t a = 0; a < m.dim(); ++a) {
    Vec x = Mat::identity(m.dim()).col(a);
    for (std::size_t p = 0; p < t.inner.size(); ++p) {
      const auto& in = t.inner[p];
      Mat phi(in.target.dim(), in.module.dim());
      for (std::size_t k = 0; k < in.module.dim(); ++k) phi.set_col(k, in.target.apply(in.generator(k), x));
      Vec c = t.outer[p].coords_checked(phi);
      for (std::size_t j = 0; j < c.size(); ++j) out(t.sum.offsets[p] + j, a) = c[j];
    }
  }
  return out;
}

inline bool tilde_is_natural_iso(const FinModule& m) {
  auto t = tilde_bidual(m);
  return is_isomorphism(m, t.module, tilde_evaluation(m, t));
}

// ---------------------------------------------------------------------------
// Annihilators

inline Ideal annihilator(const FinModule& m) {
  const Ring& r = *m.ring;
  if (m.is_zero()) return unit_ideal(r);
  const std::size_t k = m.dim();
  Vec dst;
  for (std::size_t row = 0; row < k; ++row)
    for (std::size_t col = 0; col < k; ++col) dst.push_back(m.orders[row]);
  Mat f(k * k, r.dim());
  for (std::size_t i = 0; i < r.dim(); ++i) f.set_col(i, m.action[i].data);
  Mat gens = group_kernel(r.orders(), dst, f, r.characteristic());
  return Ideal{present_sub(r.orders(), gens, r.characteristic())};
}

/// True iff multiplication by r is injective on M.
inline bool acts_injectively(const FinModule& m, const Vec& r) {
  return kernel_of(m, m, m.act(r)).module.is_zero();
}

inline bool acts_surjectively(const FinModule& m, const Vec& r) {
  return cokernel_of(m, m.act(r)).module.is_zero();
}

inline std::string describe(const FinModule& m) {
  if (m.is_zero()) return "0";
  auto [c, iso] = canonical_form(m);
  std::string s;
  for (Int o : c.orders) s += (s.empty() ? "" : " + ") + std::string("Z/") + std::to_string(o);
  return s;
}

}  // namespace cosupp
