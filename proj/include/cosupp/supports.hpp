#pragma once
// Support-type invariants of complexes, each computable by several routes.

#include <array>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cosupp/dercat.hpp"

namespace cosupp {

enum class SupportKind { Supp, supp, coSupp, cosupp, co_supp, Co_supp };
enum class Route { definitional, dual, homology };

inline const char* kind_name(SupportKind k) {
  switch (k) {
    case SupportKind::Supp: return "Supp";
    case SupportKind::supp: return "supp";
    case SupportKind::coSupp: return "coSupp";
    case SupportKind::cosupp: return "cosupp";
    case SupportKind::co_supp: return "co_supp";
    case SupportKind::Co_supp: return "Co_supp";
  }
  return "?";
}

inline const char* route_name(Route r) {
  switch (r) {
    case Route::definitional: return "definitional";
    case Route::dual: return "dual";
    case Route::homology: return "homology";
  }
  return "?";
}

inline SupportKind parse_kind(const std::string& s) {
  for (auto k : {SupportKind::Supp, SupportKind::supp, SupportKind::coSupp, SupportKind::cosupp, SupportKind::co_supp,
                 SupportKind::Co_supp})
    if (s == kind_name(k)) return k;
  if (s == "co-supp") return SupportKind::co_supp;
  if (s == "Co-supp") return SupportKind::Co_supp;
  throw InputError("unknown support kind '" + s + "'");
}

inline Route parse_route(const std::string& s) {
  for (auto r : {Route::definitional, Route::dual, Route::homology})
    if (s == route_name(r)) return r;
  throw InputError("unknown route '" + s + "'");
}

/// Knobs shared by the support computations and the property harness.
struct Options {
  bool validate = false;       // cross-check NV criteria against windows
  bool fault_wrong_v = false;  // deliberately wrong V(Ann), for harness self-tests
};

struct SupportSet {
  PrimeSet primes;
  std::string kind;
  std::string route;
};

inline std::string format_primes(const PrimeSet& s) {
  std::ostringstream o;
  o << "{";
  for (std::size_t i = 0; i < s.size(); ++i) o << (i ? "," : "") << s[i];
  o << "}";
  return o.str();
}

/// Two routes to the same invariant gave different answers.
struct RouteDisagreement : std::runtime_error {
  std::string kind;
  std::vector<SupportSet> results;

  RouteDisagreement(std::string k, std::vector<SupportSet> r)
      : std::runtime_error(message(k, r)), kind(std::move(k)), results(std::move(r)) {}

  static std::string message(const std::string& k, const std::vector<SupportSet>& r) {
    std::string m = "routes disagree on " + k + ":";
    for (const auto& s : r) m += " " + s.route + "=" + format_primes(s.primes);
    return m;
  }
};

// ---------------------------------------------------------------------------
// Per-prime building blocks

inline bool homology_nonzero(const Complex& c) { return !c.empty() && !is_exact(c); }

inline Complex direct_sum_complex(const std::vector<Complex>& parts, RingPtr r) {
  Complex out(r);
  int a = 0, b = -1;
  bool any = false;
  for (const auto& c : parts)
    if (!c.empty()) {
      a = any ? std::min(a, c.lo()) : c.lo();
      b = any ? std::max(b, c.hi()) : c.hi();
      any = true;
    }
  if (!any) return out;
  std::vector<DirectSum> sums;
  for (int n = a; n <= b; ++n) {
    std::vector<FinModule> mods;
    for (const auto& c : parts) mods.push_back(c.at(n));
    sums.push_back(direct_sum(r, mods));
    out.set(n, sums.back().module);
  }
  for (int n = a + 1; n <= b; ++n) {
    const auto& src = sums[static_cast<std::size_t>(n - a)];
    const auto& dst = sums[static_cast<std::size_t>(n - 1 - a)];
    Mat d(dst.module.dim(), src.module.dim());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      Mat dk = parts[k].d(n);
      for (std::size_t i = 0; i < dk.rows; ++i)
        for (std::size_t j = 0; j < dk.cols; ++j) d(dst.offsets[k] + i, src.offsets[k] + j) = dk(i, j);
    }
    out.set_d(n, std::move(d));
  }
  return out;
}

/// Window [lo-2, hi+2] of an argument complex.
inline std::pair<int, int> padded_range(const Complex& c) { return {c.lo() - kWindowPadding, c.hi() + kWindowPadding}; }

/// RHom(X, Y) ≄ 0, decided on a window containing every possible top degree.
inline bool rhom_nonzero_window(const Complex& x, const Complex& y) {
  if (x.empty() || y.empty()) return false;
  // top homology of RHom(X, Y) sits at sup Y - inf X
  return window_nonzero(derived_hom(x, y, y.lo() - x.hi() - kWindowPadding, y.hi() - x.lo() + kWindowPadding));
}

/// X ⊗^L Y ≄ 0, decided on a window containing the bottom degree.
inline bool tensor_nonzero_window(const Complex& x, const Complex& y) {
  if (x.empty() || y.empty()) return false;
  return window_nonzero(derived_tensor(x, y, x.lo() + y.lo() - kWindowPadding, x.hi() + y.hi() + kWindowPadding));
}

inline Complex residue_complex(const RingPtr& r, std::size_t p) { return module_complex(residue_field(r, p)); }

inline bool member_definitional(const Complex& c, SupportKind kind, std::size_t p, const Options& opt) {
  switch (kind) {
    case SupportKind::Supp: return homology_nonzero(localize_complex(c, p));
    case SupportKind::supp: return derived_nonvanishing(c, p, NVKind::tensor_residue, opt.validate).nonzero;
    case SupportKind::coSupp: return homology_nonzero(colocalize_complex(c, p));
    case SupportKind::cosupp:
      return derived_nonvanishing(colocalize_complex(c, p), p, NVKind::rhom_residue, opt.validate).nonzero;
    case SupportKind::co_supp: return derived_nonvanishing(c, p, NVKind::rhom_residue, opt.validate).nonzero;
    case SupportKind::Co_supp: return homology_nonzero(idempotent_hom_complex(c, p));
  }
  return false;
}

inline PrimeSet support_definitional(const Complex& c, SupportKind kind, const Options& opt) {
  PrimeSet s;
  if (c.empty()) return s;
  for (std::size_t p = 0; p < c.ring()->spectrum().size(); ++p)
    if (member_definitional(c, kind, p, opt)) s.push_back(p);
  return s;
}

/// Route through the Matlis dual D_R.
inline PrimeSet support_dual(const Complex& c, SupportKind kind, const Options& opt) {
  Complex d = char_dual_complex(c);
  switch (kind) {
    case SupportKind::coSupp:
    case SupportKind::Co_supp: return support_definitional(d, SupportKind::Supp, opt);
    case SupportKind::cosupp:
    case SupportKind::co_supp: return support_definitional(d, SupportKind::supp, opt);
    case SupportKind::Supp: return support_definitional(d, SupportKind::coSupp, opt);
    case SupportKind::supp: return support_definitional(d, SupportKind::cosupp, opt);
  }
  return {};
}

/// Union over the homology modules of the module-level definitional sets.
inline PrimeSet support_homology(const Complex& c, SupportKind kind, const Options& opt) {
  PrimeSet s;
  for (const auto& [n, h] : homology_profile(c).groups)
    s = set_union(s, support_definitional(module_complex(h, n), kind, opt));
  return s;
}

inline PrimeSet support_by(const Complex& c, SupportKind kind, Route route, const Options& opt = {}) {
  switch (route) {
    case Route::definitional: return support_definitional(c, kind, opt);
    case Route::dual: return support_dual(c, kind, opt);
    case Route::homology: return support_homology(c, kind, opt);
  }
  return {};
}

/// Computes every requested route; throws RouteDisagreement unless all agree.
inline SupportSet support_set(const Complex& c, SupportKind kind, const std::vector<Route>& routes, const Options& opt = {}) {
  if (routes.empty()) throw InputError("no route requested");
  std::vector<SupportSet> results;
  for (auto r : routes) results.push_back(SupportSet{support_by(c, kind, r, opt), kind_name(kind), route_name(r)});
  for (const auto& s : results)
    if (s.primes != results.front().primes) throw RouteDisagreement(kind_name(kind), results);
  SupportSet out = results.front();
  if (routes.size() > 1) {
    out.route.clear();
    for (auto r : routes) out.route += (out.route.empty() ? "" : "+") + std::string(route_name(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annihilators, depth and width

/// ∩_j Ann H_j(C).
inline Ideal ann_complex(const Complex& c) {
  const Ring& r = *c.ring();
  Ideal a = unit_ideal(r);
  for (const auto& [n, h] : homology_profile(c).groups) a = ideal_intersection(r, a, annihilator(h));
  return a;
}

struct DepthWidth {
  std::optional<int> depth;  // nullopt: +∞
  std::optional<int> width;  // nullopt: −∞
};

inline DepthWidth depth_width(const Complex& c, std::size_t p, const Options& opt = {}) {
  if (p >= c.ring()->spectrum().size()) throw InputError("prime not in Spec R");
  DepthWidth dw;
  auto rh = derived_nonvanishing(c, p, NVKind::rhom_residue, opt.validate);
  auto tn = derived_nonvanishing(c, p, NVKind::tensor_residue, opt.validate);
  if (rh.nonzero) dw.depth = -*rh.witness;
  if (tn.nonzero) dw.width = *tn.witness;
  return dw;
}

// ---------------------------------------------------------------------------
// Associated and coassociated primes

/// Ass: depth of C_p (from a derived window) equals -sup C_p.
inline PrimeSet ass_definitional(const Complex& c) {
  PrimeSet s;
  if (c.empty()) return s;
  for (std::size_t p = 0; p < c.ring()->spectrum().size(); ++p) {
    auto hp = homology_profile(localize_complex(c, p));
    if (hp.is_zero()) continue;
    auto [a, b] = padded_range(c);
    auto w = derived_hom(residue_complex(c.ring(), p), c, a, b);
    if (w.sup && *w.sup == *hp.sup) s.push_back(p);
  }
  return s;
}

/// Coass via width: inf(k(p) ⊗^L ^pC) equals inf ^pC.
inline PrimeSet coass_definitional(const Complex& c) {
  PrimeSet s;
  if (c.empty()) return s;
  for (std::size_t p = 0; p < c.ring()->spectrum().size(); ++p) {
    Complex cp = colocalize_complex(c, p);
    auto hp = homology_profile(cp);
    if (hp.is_zero()) continue;
    auto [a, b] = padded_range(cp);
    auto w = derived_tensor(residue_complex(c.ring(), p), cp, a, b);
    if (w.inf && *w.inf == *hp.inf) s.push_back(p);
  }
  return s;
}

/// Coass C = Ass D_R(C).
inline PrimeSet coass_dual(const Complex& c) { return ass_definitional(char_dual_complex(c)); }

enum class PrimeFamily { Ass, ass, Coass, coass };

inline const char* family_name(PrimeFamily f) {
  switch (f) {
    case PrimeFamily::Ass: return "Ass";
    case PrimeFamily::ass: return "ass";
    case PrimeFamily::Coass: return "Coass";
    case PrimeFamily::coass: return "coass";
  }
  return "?";
}

/// Ring elements (sorted indices) lying in some prime of the set.
inline std::vector<std::size_t> union_of_primes(const Ring& r, const PrimeSet& s) {
  std::set<std::size_t> out;
  for (auto p : s)
    for (auto e : ideal_elements(r, r.spectrum()[p].ideal)) out.insert(e);
  return {out.begin(), out.end()};
}

/// r with r· not injective (zero divisors) on a module.
inline std::vector<std::size_t> zero_divisors(const FinModule& m) {
  std::vector<std::size_t> out;
  if (m.is_zero()) return out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(m.ring->size()); ++i)
    if (!acts_injectively(m, m.ring->element(i))) out.push_back(i);
  return out;
}

/// r with r· not surjective on a module.
inline std::vector<std::size_t> non_surjective(const FinModule& m) {
  std::vector<std::size_t> out;
  if (m.is_zero()) return out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(m.ring->size()); ++i)
    if (!acts_surjectively(m, m.ring->element(i))) out.push_back(i);
  return out;
}

struct PrimeBundle {
  PrimeFamily family;
  PrimeSet primes;
  std::vector<std::size_t> elements;       // z (ass), Z (Ass), w (coass), W (Coass)
  std::vector<std::string> provenance;
};

inline PrimeBundle ass_coass(const Complex& c, PrimeFamily family, const Options& opt = {}) {
  (void)opt;
  PrimeBundle b{family, {}, {}, {}};
  const Ring& r = *c.ring();
  auto hp = homology_profile(c);
  switch (family) {
    case PrimeFamily::Ass:
      b.primes = ass_definitional(c);
      b.elements = union_of_primes(r, b.primes);
      b.provenance = {"depth-window"};
      break;
    case PrimeFamily::Coass: {
      b.primes = coass_definitional(c);
      PrimeSet other = coass_dual(c);
      if (other != b.primes)
        throw RouteDisagreement("Coass", {{b.primes, "Coass", "width"}, {other, "Coass", "dual-ass"}});
      b.elements = union_of_primes(r, b.primes);
      b.provenance = {"width", "dual-ass"};
      break;
    }
    case PrimeFamily::ass:
      if (hp.is_zero()) break;
      b.primes = ass_definitional(module_complex(hp.groups.at(*hp.sup)));
      b.elements = zero_divisors(hp.groups.at(*hp.sup));
      b.provenance = {"top-homology"};
      break;
    case PrimeFamily::coass:
      if (hp.is_zero()) break;
      b.primes = ass_coass(module_complex(hp.groups.at(*hp.inf)), PrimeFamily::Coass).primes;
      b.elements = non_surjective(hp.groups.at(*hp.inf));
      b.provenance = {"bottom-homology"};
      break;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Brute-force coassociated primes by enumerating submodules

inline constexpr std::size_t kMaxSubmodules = 60000;

struct BruteForceCoass {
  PrimeSet coass;
  PrimeSet cosupp_yassemi;
  std::size_t submodules = 0;
  std::size_t cocyclic = 0;
};

inline BruteForceCoass coass_bruteforce(const FinModule& k) {
  if (k.size() > kMaxEnumeratedModule) throw InputError("coass_bruteforce: module exceeds 256 elements");
  const Ring& r = *k.ring;
  const std::size_t size = static_cast<std::size_t>(k.size());
  using Bits = std::array<std::uint64_t, 4>;
  auto has = [](const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1; };
  auto put = [](Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); };
  std::vector<Vec> elems = enumerate(k);
  // additive table: sum index
  auto add_idx = [&](std::size_t a, std::size_t b) { return k.index(k.add(elems[a], elems[b])); };
  // action of ring generators on elements
  std::vector<std::vector<std::size_t>> gen_act(k.action.size(), std::vector<std::size_t>(size));
  for (std::size_t i = 0; i < k.action.size(); ++i)
    for (std::size_t x = 0; x < size; ++x) gen_act[i][x] = k.index(k.apply(k.action[i], elems[x]));
  // subgroup generated by a set plus new generators
  auto close = [&](const Bits& start, const std::vector<std::size_t>& gens) {
    Bits b = start;
    std::vector<std::size_t> members;
    for (std::size_t x = 0; x < size; ++x)
      if (has(b, x)) members.push_back(x);
    for (auto g : gens) {
      if (has(b, g)) continue;
      std::vector<std::size_t> frontier = members;
      while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (auto m : frontier) {
          auto y = add_idx(m, g);
          if (!has(b, y)) {
            put(b, y);
            members.push_back(y);
            next.push_back(y);
          }
        }
        frontier = std::move(next);
      }
    }
    return b;
  };
  auto add_cyclic = [&](const Bits& s, std::size_t x) {
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < k.action.size(); ++i) gens.push_back(gen_act[i][x]);
    return close(s, gens);
  };
  Bits zero{};
  put(zero, k.index(k.zero()));
  std::set<Bits> seen{zero};
  std::vector<Bits> queue{zero};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (std::size_t x = 0; x < size; ++x) {
      if (has(queue[q], x)) continue;
      Bits t = add_cyclic(queue[q], x);
      if (seen.insert(t).second) {
        queue.push_back(t);
        if (queue.size() > kMaxSubmodules) throw InputError("coass_bruteforce: too many submodules");
      }
    }
  }
  BruteForceCoass out;
  out.submodules = queue.size();
  // additive generators of the Jacobson radical
  const Mat& jb = r.jacobson_radical().basis();
  std::vector<std::vector<std::size_t>> j_act;
  for (std::size_t t = 0; t < jb.cols; ++t) {
    Mat a = k.act(jb.col(t));
    std::vector<std::size_t> v(size);
    for (std::size_t x = 0; x < size; ++x) v[x] = k.index(k.apply(a, elems[x]));
    j_act.push_back(std::move(v));
  }
  std::set<std::size_t> coass, yassemi;
  for (const auto& n : queue) {
    // socle of K/N: {x : J x ⊆ N}
    Bits soc{};
    std::size_t soc_count = 0, n_count = 0;
    for (std::size_t x = 0; x < size; ++x) {
      if (has(n, x)) ++n_count;
      bool killed = true;
      for (const auto& v : j_act)
        if (!has(n, v[x])) {
          killed = false;
          break;
        }
      if (killed) {
        put(soc, x);
        ++soc_count;
      }
    }
    if (soc_count == n_count) continue;  // K/N = 0
    bool simple = true;
    for (std::size_t x = 0; x < size && simple; ++x)
      if (has(soc, x) && !has(n, x) && add_cyclic(n, x) != soc) simple = false;
    if (!simple) continue;
    ++out.cocyclic;
    // Ann(K/N) = {r : r K ⊆ N}
    std::vector<Vec> ann;
    for (std::size_t i = 0; i < static_cast<std::size_t>(r.size()); ++i) {
      Mat a = k.act(r.element(i));
      bool in = true;
      for (std::size_t j = 0; j < k.dim() && in; ++j)
        if (!has(n, k.index(a.col(j)))) in = false;
      if (in) ann.push_back(r.element(i));
    }
    Ideal a = make_ideal(r, ann);
    for (std::size_t p = 0; p < r.spectrum().size(); ++p) {
      const Ideal& pi = r.spectrum()[p].ideal;
      if (ideal_equal(a, pi)) coass.insert(p);
      if (ideal_subset(pi, a)) yassemi.insert(p);
    }
  }
  out.coass.assign(coass.begin(), coass.end());
  out.cosupp_yassemi.assign(yassemi.begin(), yassemi.end());
  return out;
}

// ---------------------------------------------------------------------------
// Nakayama-type implications

struct NakayamaResult {
  bool coass_meets_max = false;  // hypothesis of the tensor form
  bool tensor_nonzero = false;   // R/a ⊗^L C ≄ 0
  bool ass_meets_max = false;    // hypothesis of the RHom form
  bool rhom_nonzero = false;     // RHom(R/a, C) ≄ 0

  bool holds() const { return (!coass_meets_max || tensor_nonzero) && (!ass_meets_max || rhom_nonzero); }
};

inline NakayamaResult nakayama_check(const Ideal& a, const Complex& c) {
  const RingPtr& r = c.ring();
  if (!ideal_subset(a, r->jacobson_radical())) throw InputError("nakayama_check: ideal is not inside the Jacobson radical");
  NakayamaResult res;
  const PrimeSet max = maximal(*r, all_primes(*r));
  res.coass_meets_max = !set_intersection(ass_coass(c, PrimeFamily::Coass).primes, max).empty();
  res.ass_meets_max = !set_intersection(ass_coass(c, PrimeFamily::Ass).primes, max).empty();
  Complex quo = module_complex(cyclic_module(r, a));
  res.tensor_nonzero = tensor_nonzero_window(quo, c);
  res.rhom_nonzero = rhom_nonzero_window(quo, c);
  return res;
}

// ---------------------------------------------------------------------------
// Clause-by-clause evaluation of the equivalence theorems

/// Big cosupport clauses (1)-(4): coSupp, Supp D_R, Supp D_m, RHom(R_p, C^~).
inline bool big_cosupport_clause(const Complex& c, std::size_t p, int clause, const Options& opt = {}) {
  const Ring& r = *c.ring();
  switch (clause) {
    case 1: return member_definitional(c, SupportKind::coSupp, p, opt);
    case 2: return member_definitional(char_dual_complex(c), SupportKind::Supp, p, opt);
    case 3: {
      for (auto m : maximal(r, vlocus(r, r.spectrum()[p].ideal)))
        if (member_definitional(single_dual_complex(c, m), SupportKind::Supp, p, opt)) return true;
      return false;
    }
    case 4: return homology_nonzero(idempotent_hom_complex(tilde_complex(c), p));
  }
  throw InputError("clause must be 1..4");
}

/// Small cosupport clauses (1)-(9).
inline bool small_cosupport_clause(const Complex& c, std::size_t p, int clause, const Options& opt = {}) {
  const RingPtr& r = c.ring();
  Complex k = residue_complex(r, p);
  switch (clause) {
    case 1: return member_definitional(c, SupportKind::cosupp, p, opt);
    case 2: return rhom_nonzero_window(char_dual_complex(c), k);
    case 3: return member_definitional(char_dual_complex(c), SupportKind::supp, p, opt);
    case 4: return tensor_nonzero_window(k, colocalize_complex(c, p));
    case 5: {
      Complex local = restrict_complex(colocalize_complex(c, p), p);
      if (local.empty()) return false;
      return member_definitional(local, SupportKind::cosupp, 0, opt);
    }
    case 6: return derived_nonvanishing(tilde_complex(c), p, NVKind::rhom_residue, opt.validate).nonzero;
    case 7: {
      std::vector<Complex> parts;
      for (auto m : maximal(*r, all_primes(*r))) parts.push_back(single_dual_complex(c, m));
      return rhom_nonzero_window(direct_sum_complex(parts, r), k);
    }
    case 8: {
      for (auto m : maximal(*r, vlocus(*r, r->spectrum()[p].ideal)))
        if (member_definitional(single_dual_complex(c, m), SupportKind::supp, p, opt)) return true;
      return false;
    }
    case 9: return tensor_nonzero_window(k, idempotent_hom_complex(tilde_complex(c), p));
  }
  throw InputError("clause must be 1..9");
}

inline PrimeSet clause_set(const Complex& c, int clause, bool small, const Options& opt = {}) {
  PrimeSet s;
  if (c.empty()) return s;
  for (std::size_t p = 0; p < c.ring()->spectrum().size(); ++p)
    if (small ? small_cosupport_clause(c, p, clause, opt) : big_cosupport_clause(c, p, clause, opt)) s.push_back(p);
  return s;
}

/// V(Ann C), optionally with a deliberate defect used to exercise the harness.
inline PrimeSet v_ann(const Complex& c, const Options& opt = {}) {
  PrimeSet v = c.empty() ? PrimeSet{} : vlocus(*c.ring(), ann_complex(c));
  if (opt.fault_wrong_v && !v.empty()) v.pop_back();
  return v;
}

}  // namespace cosupp
