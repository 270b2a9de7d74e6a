#pragma once
// Finite commutative rings: construction, local decomposition, spectrum.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cosupp/linalg.hpp"

namespace cosupp {

/// Malformed input: bad ring spec, bad module data, schema violations.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Never expected for valid input.
struct KernelBug : std::logic_error {
  using std::logic_error::logic_error;
};

inline constexpr Int kMaxRingSize = 65536;

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// An ideal, stored as an additive subgroup in invariant-factor form.
struct Ideal {
  SubGroup span;

  std::size_t dim() const { return span.dim(); }
  const Mat& basis() const { return span.gens; }
  bool contains(const Vec& x) const { return span.contains(x); }
};

struct PrimeIdeal {
  Ideal ideal;
  std::size_t local_index = 0;
};

struct LocalFactor {
  Vec idempotent;
  RingPtr ring;  // null when the ring is already local (the factor is the ring itself)
  Mat embed;     // factor coords -> ring coords (additive map, e-unital)
  Mat project;   // ring coords -> factor coords, x -> e x
};

class Ring : public std::enable_shared_from_this<Ring> {
 public:
  /// Validated construction from additive orders and the left-multiplication
  /// matrices of the additive generators (column j of left[i] is g_i * g_j).
  static RingPtr make(Vec orders, std::vector<Mat> left, Vec one, std::string name = "") {
    auto r = std::shared_ptr<Ring>(new Ring());
    r->orders_ = std::move(orders);
    r->left_ = std::move(left);
    r->one_ = std::move(one);
    r->name_ = std::move(name);
    r->validate();
    return r;
  }

  const std::string& name() const { return name_; }
  const Vec& orders() const { return orders_; }
  std::size_t dim() const { return orders_.size(); }
  Int characteristic() const { return char_; }
  Int size() const { return size_; }
  const Vec& one() const { return one_; }
  Vec zero() const { return Vec(dim(), 0); }
  const Mat& left(std::size_t i) const { return left_[i]; }
  const std::vector<Mat>& left_all() const { return left_; }

  Vec basis_element(std::size_t i) const {
    Vec v(dim(), 0);
    v[i] = 1;
    return v;
  }

  Vec reduce(Vec x) const {
    cosupp::reduce(x, orders_);
    return x;
  }
  Vec add(const Vec& x, const Vec& y) const {
    Vec z(dim());
    for (std::size_t i = 0; i < dim(); ++i) z[i] = mod(x[i] + y[i], orders_[i]);
    return z;
  }
  Vec sub(const Vec& x, const Vec& y) const {
    Vec z(dim());
    for (std::size_t i = 0; i < dim(); ++i) z[i] = mod(x[i] - y[i], orders_[i]);
    return z;
  }
  Vec scale(Int k, const Vec& x) const {
    Vec z(dim());
    for (std::size_t i = 0; i < dim(); ++i) z[i] = mod(k * x[i], orders_[i]);
    return z;
  }

  /// Matrix of multiplication by x on ring coordinates.
  Mat act(const Vec& x) const {
    Mat m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      Int c = mod(x[i], orders_[i]);
      if (c == 0) continue;
      for (std::size_t k = 0; k < m.data.size(); ++k) m.data[k] += c * left_[i].data[k];
    }
    reduce_rows(m, orders_);
    return m;
  }

  Vec mul(const Vec& x, const Vec& y) const {
    Vec z(dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i) {
      Int c = x[i];
      if (c == 0) continue;
      for (std::size_t r = 0; r < dim(); ++r) {
        Int acc = 0;
        for (std::size_t j = 0; j < dim(); ++j) acc += left_[i](r, j) * y[j];
        z[r] = mod(z[r] + c * mod(acc, orders_[r]), orders_[r]);
      }
    }
    return z;
  }

  Vec pow(Vec x, Int k) const {
    Vec r = one_;
    while (k > 0) {
      if (k & 1) r = mul(r, x);
      x = mul(x, x);
      k >>= 1;
    }
    return r;
  }

  bool is_zero(const Vec& x) const { return cosupp::is_zero(x, orders_); }

  /// Mixed-radix index of an element; a bijection onto [0, size()).
  std::size_t index(const Vec& x) const {
    std::size_t idx = 0;
    for (std::size_t i = dim(); i-- > 0;)
      idx = idx * static_cast<std::size_t>(orders_[i]) + static_cast<std::size_t>(mod(x[i], orders_[i]));
    return idx;
  }
  Vec element(std::size_t idx) const {
    Vec x(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      x[i] = static_cast<Int>(idx % static_cast<std::size_t>(orders_[i]));
      idx /= static_cast<std::size_t>(orders_[i]);
    }
    return x;
  }

  bool is_nilpotent(const Vec& x) const {
    // nilpotency index is at most the composition length <= log2 |R| < 17
    Vec y = x;
    for (int k = 0; k < 5; ++k) y = mul(y, y);
    return is_zero(y);
  }

  const std::vector<LocalFactor>& local_factors() const {
    ensure_structure();
    return factors_;
  }
  RingPtr factor_ring(std::size_t i) const {
    const auto& f = local_factors().at(i);
    return f.ring ? f.ring : shared_from_this();
  }
  const std::vector<PrimeIdeal>& spectrum() const {
    ensure_structure();
    return spectrum_;
  }
  const Ideal& jacobson_radical() const {
    ensure_structure();
    return jacobson_;
  }
  bool is_local() const { return local_factors().size() == 1; }

 private:
  Ring() = default;

  void validate() {
    if (orders_.empty()) throw InputError("ring must have at least one additive generator");
    __int128 sz = 1;
    Int ch = 1;
    for (Int o : orders_) {
      if (o < 2) throw InputError("additive orders must be >= 2");
      sz *= o;
      if (sz > kMaxRingSize) throw InputError("ring exceeds the size cap of 65536 elements");
      ch = std::lcm(ch, o);
    }
    size_ = static_cast<Int>(sz);
    char_ = ch;
    const std::size_t n = dim();
    if (left_.size() != n) throw InputError("need one multiplication matrix per generator");
    for (auto& m : left_) {
      if (m.rows != n || m.cols != n) throw InputError("multiplication matrix shape");
      reduce_rows(m, orders_);
    }
    if (one_.size() != n) throw InputError("identity has wrong length");
    cosupp::reduce(one_, orders_);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Vec gij = left_[i].col(j);
        if (gij != left_[j].col(i)) throw InputError("structure constants are not commutative");
        Int g = std::gcd(orders_[i], orders_[j]);
        for (std::size_t k = 0; k < n; ++k)
          if (mod(gij[k] * g, orders_[k]) != 0)
            throw InputError("structure constants do not respect additive orders");
      }
    for (std::size_t j = 0; j < n; ++j)
      if (mul(one_, basis_element(j)) != basis_element(j)) throw InputError("identity is not unital");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          Vec a = mul(mul(basis_element(i), basis_element(j)), basis_element(l));
          Vec b = mul(basis_element(i), mul(basis_element(j), basis_element(l)));
          if (a != b) throw InputError("structure constants are not associative");
        }
  }

  void ensure_structure() const {
    std::call_once(once_, [this] { const_cast<Ring*>(this)->compute_structure(); });
  }

  SubGroup span(const std::vector<Vec>& cols) const {
    return present_sub(orders_, Mat::from_cols(dim(), cols), char_);
  }

  void compute_structure() {
    const auto total = static_cast<std::size_t>(size_);
    // nilpotent elements, with a greedy additive basis
    std::vector<char> nil(total, 0);
    for (std::size_t idx = 0; idx < total; ++idx) nil[idx] = is_nilpotent(element(idx)) ? 1 : 0;
    std::vector<Vec> jgens;
    {
      std::vector<char> in_span(total, 0);
      std::vector<std::size_t> members{index(zero())};
      in_span[members[0]] = 1;
      for (std::size_t idx = 0; idx < total; ++idx) {
        if (!nil[idx] || in_span[idx]) continue;
        Vec x = element(idx);
        jgens.push_back(x);
        // close the span under adding x
        std::vector<std::size_t> frontier = members;
        while (!frontier.empty()) {
          std::vector<std::size_t> next;
          for (auto m : frontier) {
            auto y = index(add(element(m), x));
            if (!in_span[y]) {
              in_span[y] = 1;
              members.push_back(y);
              next.push_back(y);
            }
          }
          frontier = std::move(next);
        }
      }
      for (auto m : members)
        if (!nil[m]) throw KernelBug("nilpotent elements are not additively closed");
    }
    jacobson_ = Ideal{span(jgens)};

    // idempotents lifted from R/J with e <- 3e^2 - 2e^3
    std::set<std::size_t> idem;
    for (std::size_t idx = 0; idx < total; ++idx) {
      Vec x = element(idx);
      if (!nil[index(sub(mul(x, x), x))]) continue;
      Vec e = x;
      for (int it = 0; it < 64; ++it) {
        Vec e2 = mul(e, e);
        Vec next = sub(scale(3, e2), scale(2, mul(e2, e)));
        if (next == e) break;
        e = next;
      }
      if (mul(e, e) != e) throw KernelBug("idempotent lifting did not converge");
      if (!is_zero(e)) idem.insert(index(e));
    }
    std::vector<Vec> primitive;
    for (auto i : idem) {
      Vec e = element(i);
      bool prim = true;
      for (auto j : idem) {
        if (j == i) continue;
        Vec f = element(j);
        if (mul(e, f) == f) {
          prim = false;
          break;
        }
      }
      if (prim) primitive.push_back(e);
    }
    Vec sum = zero();
    for (std::size_t a = 0; a < primitive.size(); ++a) {
      sum = add(sum, primitive[a]);
      for (std::size_t b = a + 1; b < primitive.size(); ++b)
        if (!is_zero(mul(primitive[a], primitive[b])))
          throw KernelBug("primitive idempotents are not orthogonal");
    }
    if (sum != one_) throw KernelBug("primitive idempotents do not sum to one");

    if (primitive.size() == 1) {
      factors_.push_back(LocalFactor{one_, nullptr, Mat::identity(dim()), Mat::identity(dim())});
    } else {
      for (std::size_t a = 0; a < primitive.size(); ++a) factors_.push_back(make_factor(primitive[a], a));
    }

    for (std::size_t a = 0; a < primitive.size(); ++a) {
      std::vector<Vec> gens = jgens;
      Vec co = sub(one_, primitive[a]);
      for (std::size_t j = 0; j < dim(); ++j) gens.push_back(mul(co, basis_element(j)));
      spectrum_.push_back(PrimeIdeal{Ideal{span(gens)}, a});
    }
  }

  LocalFactor make_factor(const Vec& e, std::size_t a) const {
    Mat ae = act(e);
    SubGroup sg = present_sub(orders_, ae, char_);
    const std::size_t k = sg.dim();
    std::vector<Mat> left(k, Mat(k, k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        auto c = sg.coords(mul(sg.gens.col(i), sg.gens.col(j)));
        if (!c) throw KernelBug("factor ring not closed under multiplication");
        left[i].set_col(j, *c);
      }
    auto one = sg.coords(e);
    if (!one) throw KernelBug("idempotent outside its factor");
    Mat project(k, dim());
    for (std::size_t j = 0; j < dim(); ++j) project.set_col(j, *sg.coords(ae.col(j)));
    auto ring = Ring::make(sg.orders, std::move(left), *one, name_ + "/f" + std::to_string(a));
    return LocalFactor{e, ring, sg.gens, project};
  }

  Vec orders_;
  std::vector<Mat> left_;
  Vec one_;
  std::string name_;
  Int size_ = 1;
  Int char_ = 1;

  mutable std::once_flag once_;
  std::vector<LocalFactor> factors_;
  std::vector<PrimeIdeal> spectrum_;
  Ideal jacobson_;
};

// ---------------------------------------------------------------------------
// Ideals

/// The ideal generated by the given ring elements.
inline Ideal make_ideal(const Ring& r, const std::vector<Vec>& gens) {
  std::vector<Vec> cols;
  for (const auto& g : gens)
    for (std::size_t i = 0; i < r.dim(); ++i) cols.push_back(r.mul(r.basis_element(i), g));
  return Ideal{present_sub(r.orders(), Mat::from_cols(r.dim(), cols), r.characteristic())};
}

inline Ideal zero_ideal(const Ring& r) { return make_ideal(r, {}); }
inline Ideal unit_ideal(const Ring& r) { return make_ideal(r, {r.one()}); }

inline bool ideal_subset(const Ideal& a, const Ideal& b) {
  for (std::size_t j = 0; j < a.basis().cols; ++j)
    if (!b.contains(a.basis().col(j))) return false;
  return true;
}

inline bool ideal_equal(const Ideal& a, const Ideal& b) { return ideal_subset(a, b) && ideal_subset(b, a); }

inline bool is_proper(const Ring& r, const Ideal& a) { return !a.contains(r.one()); }

inline Ideal ideal_sum(const Ring& r, const Ideal& a, const Ideal& b) {
  return Ideal{present_sub(r.orders(), hstack(a.basis(), b.basis()), r.characteristic())};
}

/// All elements of an ideal, as sorted ring indices.
inline std::vector<std::size_t> ideal_elements(const Ring& r, const Ideal& a) {
  std::vector<char> seen(static_cast<std::size_t>(r.size()), 0);
  std::vector<std::size_t> members{r.index(r.zero())};
  seen[members[0]] = 1;
  for (std::size_t j = 0; j < a.basis().cols; ++j) {
    Vec g = a.basis().col(j);
    std::vector<std::size_t> frontier = members;
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (auto m : frontier) {
        auto y = r.index(r.add(r.element(m), g));
        if (!seen[y]) {
          seen[y] = 1;
          members.push_back(y);
          next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

inline Ideal ideal_intersection(const Ring& r, const Ideal& a, const Ideal& b) {
  std::vector<Vec> gens;
  for (auto idx : ideal_elements(r, a)) {
    Vec x = r.element(idx);
    if (b.contains(x)) gens.push_back(x);
  }
  return Ideal{present_sub(r.orders(), Mat::from_cols(r.dim(), gens), r.characteristic())};
}

// ---------------------------------------------------------------------------
// Subsets of the spectrum and their order-theoretic operations.
//
// A prime set is a sorted vector of spectrum indices. The helpers are generic
// over a poset exposing `size()` and `leq(i, j)` (containment q ⊆ p), so the
// DVR layer reuses them with its two-point spectrum.

using PrimeSet = std::vector<std::size_t>;

inline PrimeSet normalize(PrimeSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline PrimeSet set_union(const PrimeSet& a, const PrimeSet& b) {
  PrimeSet r = a;
  r.insert(r.end(), b.begin(), b.end());
  return normalize(std::move(r));
}

inline PrimeSet set_intersection(const PrimeSet& a, const PrimeSet& b) {
  PrimeSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline bool set_subset(const PrimeSet& a, const PrimeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <class Poset>
PrimeSet minimal_elements(const Poset& P, const PrimeSet& s) {
  PrimeSet r;
  for (auto p : s) {
    bool minimal = true;
    for (auto q : s)
      if (q != p && P.leq(q, p)) minimal = false;
    if (minimal) r.push_back(p);
  }
  return r;
}

template <class Poset>
PrimeSet maximal_elements(const Poset& P, const PrimeSet& s) {
  PrimeSet r;
  for (auto p : s) {
    bool maximal = true;
    for (auto q : s)
      if (q != p && P.leq(p, q)) maximal = false;
    if (maximal) r.push_back(p);
  }
  return r;
}

/// Specialization closure: primes containing some member of s.
template <class Poset>
PrimeSet specialization_closure(const Poset& P, const PrimeSet& s) {
  PrimeSet r;
  for (std::size_t p = 0; p < P.size(); ++p)
    for (auto q : s)
      if (P.leq(q, p)) {
        r.push_back(p);
        break;
      }
  return r;
}

/// U(p): primes contained in p.
template <class Poset>
PrimeSet lower_set(const Poset& P, std::size_t p) {
  PrimeSet r;
  for (std::size_t q = 0; q < P.size(); ++q)
    if (P.leq(q, p)) r.push_back(q);
  return r;
}

/// Containment order on Spec R of a finite ring.
struct SpecPoset {
  const Ring* ring;
  std::size_t size() const { return ring->spectrum().size(); }
  bool leq(std::size_t q, std::size_t p) const {
    const auto& s = ring->spectrum();
    return ideal_subset(s[q].ideal, s[p].ideal);
  }
};

inline PrimeSet all_primes(const Ring& r) {
  PrimeSet s(r.spectrum().size());
  std::iota(s.begin(), s.end(), 0);
  return s;
}

/// V(a) = {p : a ⊆ p}.
inline PrimeSet vlocus(const Ring& r, const Ideal& a) {
  PrimeSet s;
  for (std::size_t i = 0; i < r.spectrum().size(); ++i)
    if (ideal_subset(a, r.spectrum()[i].ideal)) s.push_back(i);
  return s;
}

inline PrimeSet ulocus(const Ring& r, std::size_t p) {
  if (p >= r.spectrum().size()) throw InputError("prime not in Spec R");
  return lower_set(SpecPoset{&r}, p);
}

inline PrimeSet closure(const Ring& r, const PrimeSet& s) { return specialization_closure(SpecPoset{&r}, s); }
inline PrimeSet minimal(const Ring& r, const PrimeSet& s) { return minimal_elements(SpecPoset{&r}, s); }
inline PrimeSet maximal(const Ring& r, const PrimeSet& s) { return maximal_elements(SpecPoset{&r}, s); }

/// Zariski closure V(∩ p); the empty intersection is R, giving ∅.
inline PrimeSet zariski_closure(const Ring& r, const PrimeSet& s) {
  Ideal meet = unit_ideal(r);
  for (auto p : s) {
    if (p >= r.spectrum().size()) throw InputError("prime not in Spec R");
    meet = ideal_intersection(r, meet, r.spectrum()[p].ideal);
  }
  return vlocus(r, meet);
}

// ---------------------------------------------------------------------------
// Construction from specifications

struct RingSpec {
  std::string kind;  // zmod | gf | quot | product
  Int n = 0;                       // zmod
  Int p = 0;                       // gf
  Int deg = 0;                     // gf
  Vec min_poly;                    // gf, coefficients from x^0 up to x^deg
  Int characteristic = 0;          // quot
  std::vector<std::string> vars;   // quot
  std::vector<std::vector<std::pair<std::string, Int>>> relations;  // quot, monomials
  std::vector<RingSpec> factors;   // product
  std::string name;
};

namespace detail {

inline bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// polynomial remainder over F_p, coefficients low to high
inline Vec poly_rem(Vec a, const Vec& b, Int p) {
  while (!a.empty() && a.back() % p == 0) a.pop_back();
  const std::size_t db = b.size() - 1;
  const Int lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    Int c = mod(a.back() * lead_inv, p);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = mod(a[shift + i] - c * b[i], p);
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

inline bool irreducible(const Vec& f, Int p) {
  const Int deg = static_cast<Int>(f.size()) - 1;
  for (Int d = 1; 2 * d <= deg; ++d) {
    Int count = 1;
    for (Int i = 0; i < d; ++i) count *= p;
    for (Int code = 0; code < count; ++code) {
      Vec g(static_cast<std::size_t>(d + 1));
      Int c = code;
      for (Int i = 0; i < d; ++i) {
        g[static_cast<std::size_t>(i)] = c % p;
        c /= p;
      }
      g[static_cast<std::size_t>(d)] = 1;
      if (poly_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

inline RingPtr sorted_product(const std::vector<RingPtr>& parts, std::string name) {
  Vec orders;
  for (const auto& r : parts) orders.insert(orders.end(), r->orders().begin(), r->orders().end());
  const std::size_t n = orders.size();
  std::vector<Mat> left(n, Mat(n, n));
  Vec one(n, 0);
  std::size_t off = 0;
  for (const auto& r : parts) {
    for (std::size_t i = 0; i < r->dim(); ++i) {
      one[off + i] = r->one()[i];
      for (std::size_t a = 0; a < r->dim(); ++a)
        for (std::size_t b = 0; b < r->dim(); ++b) left[off + i](off + a, off + b) = r->left(i)(a, b);
    }
    off += r->dim();
  }
  // canonical coordinate order: additive orders ascending (stable)
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](auto a, auto b) { return orders[a] < orders[b]; });
  Vec o2(n), one2(n);
  std::vector<Mat> left2(n, Mat(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    o2[i] = orders[perm[i]];
    one2[i] = one[perm[i]];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) left2[i](a, b) = left[perm[i]](perm[a], perm[b]);
  }
  return Ring::make(o2, std::move(left2), one2, std::move(name));
}

}  // namespace detail

inline RingPtr zmod_ring(Int n, std::string name = "") {
  if (n < 2) throw InputError("Z/n requires n >= 2");
  if (name.empty()) name = "z" + std::to_string(n);
  Mat l(1, 1);
  l(0, 0) = 1;
  return Ring::make({n}, {l}, {1}, name);
}

inline RingPtr build_ring(const RingSpec& spec) {
  if (spec.kind == "zmod") return zmod_ring(spec.n, spec.name);
  if (spec.kind == "gf") {
    const Int p = spec.p;
    if (!detail::is_prime(p)) throw InputError("gf: characteristic must be prime");
    Vec f = spec.min_poly;
    for (auto& c : f) c = mod(c, p);
    const Int deg = static_cast<Int>(f.size()) - 1;
    if (deg < 1 || (spec.deg != 0 && spec.deg != deg)) throw InputError("gf: min_poly degree mismatch");
    if (f.back() != 1) throw InputError("gf: min_poly must be monic");
    if (!detail::irreducible(f, p)) throw InputError("gf: min_poly is not irreducible");
    const auto k = static_cast<std::size_t>(deg);
    // multiplication by x: companion matrix
    Mat x(k, k);
    for (std::size_t i = 0; i + 1 < k; ++i) x(i + 1, i) = 1;
    for (std::size_t i = 0; i < k; ++i) x(i, k - 1) = mod(-f[i], p);
    std::vector<Mat> left;
    Mat pw = Mat::identity(k);
    for (std::size_t i = 0; i < k; ++i) {
      left.push_back(pw);
      pw = mul(x, pw, p);
    }
    Vec one(k, 0);
    one[0] = 1;
    std::string name = spec.name.empty() ? "gf" + std::to_string(p) + "^" + std::to_string(deg) : spec.name;
    return Ring::make(Vec(k, p), std::move(left), one, name);
  }
  if (spec.kind == "quot") {
    const Int c = spec.characteristic;
    if (c < 2) throw InputError("quot: char must be >= 2");
    const std::size_t nv = spec.vars.size();
    if (nv == 0) throw InputError("quot: no variables");
    std::map<std::string, std::size_t> var_index;
    for (std::size_t i = 0; i < nv; ++i) var_index[spec.vars[i]] = i;
    std::vector<std::vector<Int>> rels;
    std::vector<Int> bound(nv, -1);
    for (const auto& rel : spec.relations) {
      std::vector<Int> e(nv, 0);
      for (const auto& [v, k] : rel) {
        auto it = var_index.find(v);
        if (it == var_index.end()) throw InputError("quot: unknown variable '" + v + "'");
        if (k < 0) throw InputError("quot: negative exponent");
        e[it->second] += k;
      }
      std::size_t support = 0, which = 0;
      for (std::size_t i = 0; i < nv; ++i)
        if (e[i] > 0) {
          ++support;
          which = i;
        }
      if (support == 0) throw InputError("quot: relation 1 = 0 gives the zero ring");
      if (support == 1 && (bound[which] < 0 || e[which] < bound[which])) bound[which] = e[which];
      rels.push_back(e);
    }
    for (std::size_t i = 0; i < nv; ++i)
      if (bound[i] < 0) throw InputError("quot: quotient not finite-dimensional (no power of '" + spec.vars[i] + "' vanishes)");
    auto divides = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
      for (std::size_t i = 0; i < nv; ++i)
        if (a[i] > b[i]) return false;
      return true;
    };
    std::vector<std::vector<Int>> basis;
    std::vector<Int> e(nv, 0);
    for (;;) {
      bool standard = true;
      for (const auto& r : rels)
        if (divides(r, e)) standard = false;
      if (standard) basis.push_back(e);
      std::size_t i = 0;
      while (i < nv && ++e[i] >= bound[i]) e[i++] = 0;
      if (i == nv) break;
    }
    const std::size_t k = basis.size();
    std::map<std::vector<Int>, std::size_t> pos;
    for (std::size_t i = 0; i < k; ++i) pos[basis[i]] = i;
    std::vector<Mat> left(k, Mat(k, k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<Int> s(nv);
        for (std::size_t v = 0; v < nv; ++v) s[v] = basis[i][v] + basis[j][v];
        auto it = pos.find(s);
        if (it != pos.end()) left[i](it->second, j) = 1;
      }
    Vec one(k, 0);
    one[pos.at(std::vector<Int>(nv, 0))] = 1;
    return Ring::make(Vec(k, c), std::move(left), one, spec.name.empty() ? "quot" : spec.name);
  }
  if (spec.kind == "product") {
    if (spec.factors.empty()) throw InputError("product: no factors");
    std::vector<RingPtr> parts;
    std::string name;
    for (const auto& f : spec.factors) {
      parts.push_back(build_ring(f));
      name += (name.empty() ? "" : "x") + parts.back()->name();
    }
    return detail::sorted_product(parts, spec.name.empty() ? name : spec.name);
  }
  throw InputError("unknown ring kind '" + spec.kind + "'");
}

// ---------------------------------------------------------------------------
// The fixed ring catalog used by the property suites.

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"z4", "z8", "z9", "z6", "z12", "f2x2", "f2x3", "f3x2", "gf4", "z2xz4"};
  return names;
}

inline RingSpec catalog_spec(const std::string& name) {
  auto zmod = [&](Int n) {
    RingSpec s;
    s.kind = "zmod";
    s.n = n;
    return s;
  };
  auto trunc = [&](Int c, Int e) {
    RingSpec s;
    s.kind = "quot";
    s.characteristic = c;
    s.vars = {"x"};
    s.relations = {{{"x", e}}};
    return s;
  };
  RingSpec s;
  if (name == "z4") s = zmod(4);
  else if (name == "z8") s = zmod(8);
  else if (name == "z9") s = zmod(9);
  else if (name == "z6") s = zmod(6);
  else if (name == "z12") s = zmod(12);
  else if (name == "f2x2") s = trunc(2, 2);
  else if (name == "f2x3") s = trunc(2, 3);
  else if (name == "f3x2") s = trunc(3, 2);
  else if (name == "gf4") {
    s.kind = "gf";
    s.p = 2;
    s.deg = 2;
    s.min_poly = {1, 1, 1};
  } else if (name == "z2xz4") {
    s.kind = "product";
    s.factors = {zmod(2), zmod(4)};
  } else
    throw InputError("unknown catalog ring '" + name + "'");
  s.name = name;
  return s;
}

/// Catalog rings are built once and shared.
inline RingPtr catalog_ring(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, RingPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  auto r = build_ring(catalog_spec(name));
  cache[name] = r;
  return r;
}

}  // namespace cosupp
