#pragma once
// Randomized property harness: deterministic instance generation, the
// property registry, greedy shrinking and JSONL reports.

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "cosupp/dvr.hpp"
#include "cosupp/io.hpp"

namespace cosupp::verify {

using io::json;

// ---------------------------------------------------------------------------
// Deterministic randomness

/// mt19937_64 with plain modulo reduction, so streams are identical on every
/// standard library (uniform_int_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : g_() % n; }
  int range(int a, int b) { return a + static_cast<int>(below(static_cast<std::uint64_t>(b - a + 1))); }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 g_;
};

struct Profile {
  std::vector<std::string> rings = catalog_names();
  std::vector<unsigned> weights = std::vector<unsigned>(catalog_names().size(), 1);
  Int module_cap = 64;          // |M| for every generated module
  Int bruteforce_cap = 64;      // |K| for the enumeration oracle
  int max_degrees = 5;          // nonzero degrees of the main complex
  unsigned multi_homology = 30;  // percent of seeds forced to have >= 2 homologies
};

struct Instance {
  std::uint64_t seed = 0;
  std::string ring_name;
  RingPtr ring;
  Complex c{nullptr};      // main complex
  Complex other{nullptr};  // second argument of tensor and Hom
  Vec scalar;              // multiplier for cone triangles
  Ideal ideal;             // arbitrary ideal for V(a) statements
  Ideal radical;           // ideal inside J(R)
  FinModule small;         // |K| <= bruteforce cap
  dvr::Object object;      // DVR-class payload
};

// ---------------------------------------------------------------------------
// Generation

inline Vec random_element(const Ring& r, Rng& g) { return r.element(g.below(static_cast<std::uint64_t>(r.size()))); }

/// One building block: R, R/(x), R/(x,y), k(p) or E(R/p).
inline FinModule random_block(const RingPtr& r, Rng& g, Int cap) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    FinModule m{};
    switch (g.below(5)) {
      case 0: m = free_module(r, 1); break;
      case 1: m = cyclic_module(r, make_ideal(*r, {random_element(*r, g)})); break;
      case 2: m = cyclic_module(r, make_ideal(*r, {random_element(*r, g), random_element(*r, g)})); break;
      case 3: m = residue_field(r, g.below(r->spectrum().size())); break;
      default: m = injective_envelope(r, g.below(r->spectrum().size())).module; break;
    }
    if (!m.is_zero() && m.size() <= cap) return m;
  }
  return residue_field(r, 0);
}

inline FinModule random_module(const RingPtr& r, Rng& g, Int cap) {
  FinModule m = random_block(r, g, cap);
  if (g.chance(35)) {
    FinModule extra = random_block(r, g, cap);
    if (m.size() * extra.size() <= cap) m = direct_sum(m, extra);
  }
  return m;
}

/// Random R-linear map X -> Y as a matrix.
inline Mat random_map(const FinModule& x, const FinModule& y, Rng& g) {
  if (x.is_zero() || y.is_zero()) return Mat(y.dim(), x.dim());
  HomModule h = hom(x, y);
  Vec c(h.module.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<Int>(g.below(static_cast<std::uint64_t>(h.module.orders[i])));
  return h.to_matrix(c);
}

/// d_{n+1} is a random map into Ker d_n, so d^2 = 0 by construction.
inline Complex random_complex(const RingPtr& r, Rng& g, int degrees, int lo, Int cap) {
  std::map<int, FinModule> mods;
  std::map<int, Mat> diffs;
  mods.emplace(lo, random_module(r, g, cap));
  for (int n = lo + 1; n < lo + degrees; ++n) {
    FinModule src = random_module(r, g, cap);
    const FinModule& dst = mods.at(n - 1);
    Subquotient z = n - 1 == lo ? subquotient(dst, all_of(dst), Mat(dst.dim(), 0))
                                : kernel_of(dst, mods.at(n - 2), diffs.at(n - 1));
    Mat f = random_map(src, z.module, g);
    diffs[n] = compose(dst, z.lift, f);
    mods.emplace(n, src);
  }
  return make_complex(r, mods, diffs);
}

/// 0 -> M -> M -> 0 with the identity: exact, nonzero terms.
inline Complex exact_complex(const RingPtr& r, Rng& g, Int cap) {
  FinModule m = random_module(r, g, cap);
  return make_complex(r, {{0, m}, {1, m}}, {{1, Mat::identity(m.dim())}});
}

inline std::size_t homology_degrees(const Complex& c) { return homology_profile(c).groups.size(); }

inline dvr::Object random_dvr_object(Rng& g) {
  dvr::Object o;
  int terms = g.range(1, 3);
  for (int t = 0; t < terms; ++t) switch (g.below(4)) {
      case 0: ++o.free; break;
      case 1: ++o.frac; break;
      case 2: ++o.env; break;
      default: ++o.tors[static_cast<unsigned>(g.range(1, 3))]; break;
    }
  return o;
}

inline std::string pick_ring(const Profile& p, Rng& g) {
  if (p.rings.empty() || p.rings.size() != p.weights.size()) throw InputError("profile: rings and weights differ in length");
  std::uint64_t total = 0;
  for (auto w : p.weights) total += w;
  if (total == 0) throw InputError("profile: all ring weights are zero");
  std::uint64_t x = g.below(total);
  for (std::size_t i = 0; i < p.rings.size(); ++i) {
    if (x < p.weights[i]) return p.rings[i];
    x -= p.weights[i];
  }
  return p.rings.back();
}

inline void check_profile(const Profile& p) {
  if (p.module_cap < 2 || p.module_cap > 1024) throw InputError("profile: module cap must be in [2, 1024]");
  if (p.bruteforce_cap < 2 || p.bruteforce_cap > kMaxEnumeratedModule) throw InputError("profile: brute-force cap must be in [2, 256]");
  if (p.max_degrees < 1 || p.max_degrees > 5) throw InputError("profile: complexes have 1 to 5 nonzero degrees");
}

inline Instance generate_instance(std::uint64_t seed, const Profile& prof = {}) {
  check_profile(prof);
  Rng g(seed);
  Instance in;
  in.seed = seed;
  in.ring_name = pick_ring(prof, g);
  in.ring = catalog_ring(in.ring_name);
  const RingPtr& r = in.ring;
  const bool force_multi = seed % 100 < prof.multi_homology;
  if (!force_multi && g.chance(6)) {
    in.c = exact_complex(r, g, prof.module_cap);
  } else {
    for (int attempt = 0; attempt < 40; ++attempt) {
      int lo = g.range(-2, 2);
      int deg = g.range(force_multi ? std::min(2, prof.max_degrees) : 1, prof.max_degrees);
      in.c = random_complex(r, g, deg, lo, prof.module_cap);
      if (!force_multi || homology_degrees(in.c) >= 2) break;
    }
    // a stubborn seed still gets two homologies from a direct construction
    if (force_multi && homology_degrees(in.c) < 2 && prof.max_degrees >= 2) {
      FinModule m = random_module(r, g, prof.module_cap);
      in.c = make_complex(r, {{0, m}, {1, m}}, {});
    }
  }
  in.other = random_complex(r, g, g.range(1, 2), g.range(-1, 1), std::min<Int>(prof.module_cap, 16));
  in.scalar = random_element(*r, g);
  in.ideal = make_ideal(*r, {random_element(*r, g)});
  const Mat& jb = r->jacobson_radical().basis();
  Vec rad = r->zero();
  for (std::size_t t = 0; t < jb.cols; ++t) rad = r->add(rad, r->scale(static_cast<Int>(g.below(4)), jb.col(t)));
  in.radical = make_ideal(*r, {rad});
  in.small = random_module(r, g, prof.bruteforce_cap);
  in.object = random_dvr_object(g);
  return in;
}

inline json instance_to_json(const Instance& in) {
  return {{"seed", in.seed},
          {"ring", in.ring_name},
          {"ring_data", io::ring_to_json(*in.ring)},
          {"complex", io::complex_to_json(in.c)},
          {"other", io::complex_to_json(in.other)},
          {"scalar", in.scalar},
          {"ideal", io::ideal_to_json(in.ideal)},
          {"radical", io::ideal_to_json(in.radical)},
          {"small", io::module_to_json(in.small)},
          {"dvr", dvr::to_string(in.object)}};
}

// ---------------------------------------------------------------------------
// Verdicts and the registry

enum class Status { pass, fail, flagged };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::flagged: return "flagged";
  }
  return "?";
}

struct Outcome {
  Status status = Status::pass;
  bool vacuous = false;
  json details = json::object();
};

struct Verdict {
  std::string property;
  std::uint64_t seed = 0;
  std::string ring;
  Outcome outcome;
  json instance;  // set for failures
  std::string digest;
};

using CheckFn = std::function<Outcome(const Instance&, const Options&)>;

struct Property {
  std::string id;
  std::string domain;  // "finite" or "dvr"
  bool implication = false;
  CheckFn check;
};

namespace detail {

inline PrimeSet def(const Complex& c, SupportKind k, const Options& o) { return support_definitional(c, k, o); }

inline json set_json(const PrimeSet& s) { return s; }

/// Accumulates named equalities and inclusions, failing on the first miss.
struct Ledger {
  Outcome out;
  void eq(const std::string& what, const PrimeSet& a, const PrimeSet& b) {
    out.details[what] = {set_json(a), set_json(b)};
    if (a != b) fail(what);
  }
  void sub(const std::string& what, const PrimeSet& a, const PrimeSet& b) {
    out.details[what] = {set_json(a), set_json(b)};
    if (!set_subset(a, b)) fail(what);
  }
  void truth(const std::string& what, bool ok) {
    out.details[what] = ok;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (out.status == Status::pass) out.details["failed"] = what;
    out.status = Status::fail;
  }
};

inline PrimeSet homology_union(const Complex& c, SupportKind k, const Options& o) { return support_homology(c, k, o); }

/// Homology of a total complex restricted to degrees [a, b].
inline Complex window(const Complex& t, int a, int b) { return trunc_ge(trunc_le(t, b), a); }

inline Complex rhom_window(const Complex& x, const Complex& y) {
  if (x.empty() || y.empty()) return Complex(x.ring());
  int a = y.lo() - x.hi() - kWindowPadding, b = y.hi() - x.lo() + kWindowPadding;
  return window(hom_total(resolve(x, y.hi() - a + 1 + kWindowPadding), y), a, b);
}

inline Complex tensor_window(const Complex& x, const Complex& y) {
  if (x.empty() || y.empty()) return Complex(x.ring());
  int a = x.lo() + y.lo() - kWindowPadding, b = x.hi() + y.hi() + kWindowPadding;
  return window(tensor_total(resolve(x, b - y.lo() + 1 + kWindowPadding), y), a, b);
}

inline PrimeSet maxima(const Ring& r, const PrimeSet& s) { return maximal(r, s); }
inline PrimeSet minima(const Ring& r, const PrimeSet& s) { return minimal(r, s); }

}  // namespace detail

inline Outcome check_routes(const Instance& in, const Options& o) {
  detail::Ledger l;
  Options v = o;
  v.validate = true;
  for (auto k : {SupportKind::Supp, SupportKind::supp, SupportKind::coSupp, SupportKind::cosupp, SupportKind::co_supp,
                 SupportKind::Co_supp}) {
    try {
      auto s = support_set(in.c, k, {Route::definitional, Route::dual, Route::homology}, v);
      l.out.details[kind_name(k)] = s.primes;
    } catch (const RouteDisagreement& e) {
      json routes = json::object();
      for (const auto& r : e.results) routes[r.route] = r.primes;
      l.out.details[kind_name(k)] = routes;
      l.fail(kind_name(k));
    }
  }
  return l.out;
}

inline Outcome check_thm_a(const Instance& in, const Options& o) {
  detail::Ledger l;
  l.eq("coSupp=union", detail::def(in.c, SupportKind::coSupp, o), detail::homology_union(in.c, SupportKind::coSupp, o));
  return l.out;
}

inline Outcome check_nonempty(const Instance& in, const Options& o) {
  detail::Ledger l;
  bool nonzero = !is_exact(in.c);
  l.out.details["nonzero"] = nonzero;
  l.truth("coSupp-nonempty", nonzero == !detail::def(in.c, SupportKind::coSupp, o).empty());
  l.truth("cosupp-nonempty", nonzero == !detail::def(in.c, SupportKind::cosupp, o).empty());
  return l.out;
}

inline Outcome check_vann(const Instance& in, const Options& o) {
  detail::Ledger l;
  if (is_exact(in.c)) {
    l.out.vacuous = true;
    return l.out;
  }
  PrimeSet co = detail::def(in.c, SupportKind::coSupp, o);
  l.eq("coSupp=V(Ann)", co, v_ann(in.c, o));
  l.eq("coSupp=Supp(R/Ann)", co, detail::def(module_complex(cyclic_module(in.ring, ann_complex(in.c))), SupportKind::Supp, o));
  return l.out;
}

inline Outcome check_thm_b(const Instance& in, const Options& o) {
  detail::Ledger l;
  PrimeSet base = clause_set(in.c, 1, false, o);
  for (int k = 2; k <= 4; ++k) l.eq("clause1=clause" + std::to_string(k), base, clause_set(in.c, k, false, o));
  return l.out;
}

inline Outcome check_dual(const Instance& in, const Options& o) {
  detail::Ledger l;
  Complex d = char_dual_complex(in.c);
  using K = SupportKind;
  l.eq("Supp=coSupp(D)", detail::def(in.c, K::Supp, o), detail::def(d, K::coSupp, o));
  l.eq("coSupp=Supp(D)", detail::def(in.c, K::coSupp, o), detail::def(d, K::Supp, o));
  l.eq("supp=cosupp(D)", detail::def(in.c, K::supp, o), detail::def(d, K::cosupp, o));
  l.eq("cosupp=supp(D)", detail::def(in.c, K::cosupp, o), detail::def(d, K::supp, o));
  return l.out;
}

inline Outcome check_thm32(const Instance& in, const Options& o) {
  detail::Ledger l;
  PrimeSet base = clause_set(in.c, 1, true, o);
  for (int k = 2; k <= 9; ++k) l.eq("clause1=clause" + std::to_string(k), base, clause_set(in.c, k, true, o));
  return l.out;
}

inline Outcome check_triangle(const Instance& in, const Options& o) {
  detail::Ledger l;
  using K = SupportKind;
  const Complex& c = in.c;
  PrimeSet cs = detail::def(c, K::coSupp, o);
  // C --r--> C --> Cone(r)
  Complex cr = cone(multiplication_map(c, in.scalar));
  l.sub("Cone(r)⊆C∪C", detail::def(cr, K::coSupp, o), cs);
  // σ≥n C --> C --> Cone, and its rotations
  if (!c.empty()) {
    int n = c.lo() + static_cast<int>(in.seed % static_cast<std::uint64_t>(c.hi() - c.lo() + 1));
    ChainMap inc{trunc_ge(c, n), c, trunc_ge_inclusion(c, n)};
    if (inc.source.empty()) inc.source = Complex(c.ring());
    l.truth("inclusion-is-chain-map", is_chain_map(inc));
    PrimeSet ls = detail::def(inc.source, K::coSupp, o), ns = detail::def(cone(inc), K::coSupp, o);
    l.sub("M⊆L∪N", cs, set_union(ls, ns));
    l.sub("N⊆M∪ΣL", ns, set_union(cs, ls));
    l.sub("L⊆M∪N", ls, set_union(cs, ns));
  }
  for (int k : {-1, 1, 2}) {
    Complex s = shift(c, k);
    l.eq("coSupp-shift" + std::to_string(k), detail::def(s, K::coSupp, o), cs);
    l.eq("cosupp-shift" + std::to_string(k), detail::def(s, K::cosupp, o), detail::def(c, K::cosupp, o));
  }
  return l.out;
}

inline Outcome check_tensor_hom(const Instance& in, const Options& o) {
  detail::Ledger l;
  using K = SupportKind;
  const Complex &m = in.c, &n = in.other;
  Complex rh = detail::rhom_window(m, n), tn = detail::tensor_window(m, n);
  PrimeSet supp_m = detail::def(m, K::supp, o), cosupp_n = detail::def(n, K::cosupp, o);
  l.eq("cosupp RHom", detail::def(rh, K::cosupp, o), set_intersection(supp_m, cosupp_n));
  l.eq("cosupp tensor", detail::def(tn, K::cosupp, o), set_intersection(supp_m, cosupp_n));
  // R/a specializations
  Complex quo = module_complex(cyclic_module(in.ring, in.ideal));
  PrimeSet va = in.c.empty() ? PrimeSet{} : vlocus(*in.ring, in.ideal);
  PrimeSet cm = detail::def(m, K::cosupp, o);
  l.eq("cosupp RHom(R/a,M)", detail::def(detail::rhom_window(quo, m), K::cosupp, o), set_intersection(cm, va));
  l.eq("cosupp R/a⊗M", detail::def(detail::tensor_window(quo, m), K::cosupp, o), set_intersection(cm, va));
  // big-support containments
  PrimeSet big = set_intersection(detail::def(m, K::Supp, o), detail::def(n, K::coSupp, o));
  l.sub("coSupp tensor⊆", detail::def(tn, K::coSupp, o), big);
  l.sub("coSupp RHom⊆", detail::def(rh, K::coSupp, o), big);
  // associated and coassociated primes
  try {
    l.eq("Ass RHom", ass_coass(rh, PrimeFamily::Ass).primes,
         set_intersection(detail::def(m, K::Supp, o), ass_coass(n, PrimeFamily::Ass).primes));
    l.eq("Coass tensor", ass_coass(tn, PrimeFamily::Coass).primes,
         set_intersection(detail::def(m, K::Supp, o), ass_coass(n, PrimeFamily::Coass).primes));
  } catch (const RouteDisagreement& e) {
    l.out.details["disagreement"] = e.what();
    l.fail("Coass routes");
  }
  return l.out;
}

inline Outcome check_min_max(const Instance& in, const Options& o) {
  detail::Ledger l;
  using K = SupportKind;
  const Ring& r = *in.ring;
  PrimeSet s = detail::def(in.c, K::supp, o), cs = detail::def(in.c, K::cosupp, o), cw = detail::def(in.c, K::co_supp, o),
           big = detail::def(in.c, K::coSupp, o);
  l.eq("max supp=max cosupp", detail::maxima(r, s), detail::maxima(r, cs));
  l.eq("max cosupp=max co-supp", detail::maxima(r, cs), detail::maxima(r, cw));
  l.eq("min cosupp=min coSupp", detail::minima(r, cs), detail::minima(r, big));
  PrimeSet va = vlocus(r, in.ideal);
  l.truth("V(a)-confinement", set_subset(big, va) == set_subset(cs, va));
  l.eq("zariski closures", zariski_closure(r, big), zariski_closure(r, cs));
  return l.out;
}

inline Outcome check_inclusion(const Instance& in, const Options& o) {
  detail::Ledger l;
  using K = SupportKind;
  PrimeSet cs = detail::def(in.c, K::cosupp, o), big = detail::def(in.c, K::coSupp, o), s = detail::def(in.c, K::supp, o);
  l.sub("cosupp⊆coSupp", cs, big);
  l.eq("cosupp=coSupp", cs, big);
  l.eq("cosupp=co-supp", cs, detail::def(in.c, K::co_supp, o));
  l.eq("coSupp=Co-supp", big, detail::def(in.c, K::Co_supp, o));
  l.sub("cosupp⊆supp", cs, s);
  l.sub("supp⊆cosupp", s, cs);
  return l.out;
}

inline Outcome check_homology_bounds(const Instance& in, const Options& o) {
  detail::Ledger l;
  using K = SupportKind;
  PrimeSet hs = detail::homology_union(in.c, K::supp, o), hc = detail::homology_union(in.c, K::cosupp, o);
  PrimeSet s = detail::def(in.c, K::supp, o), cs = detail::def(in.c, K::cosupp, o);
  l.sub("supp⊆∪supp H", s, hs);
  l.sub("cosupp⊆∪cosupp H", cs, hc);
  l.eq("supp=∪supp H", s, hs);
  l.eq("cosupp=∪cosupp H", cs, hc);
  return l.out;
}

inline Outcome check_coass(const Instance& in, const Options& o) {
  detail::Ledger l;
  const Ring& r = *in.ring;
  try {
    PrimeSet big = ass_coass(in.c, PrimeFamily::Coass).primes;
    l.eq("Coass=Ass D", big, coass_dual(in.c));
    l.sub("coass⊆Coass", ass_coass(in.c, PrimeFamily::coass).primes, big);
    PrimeSet ass = ass_coass(in.c, PrimeFamily::Ass).primes;
    // existence of a maximal ideal witness, both forms
    bool tensor_any = false, rhom_any = false;
    for (auto m : maximal(r, all_primes(r))) {
      Complex km = module_complex(residue_field(in.ring, m));
      tensor_any = tensor_any || tensor_nonzero_window(km, in.c);
      rhom_any = rhom_any || rhom_nonzero_window(km, in.c);
    }
    PrimeSet mx = maximal(r, all_primes(r));
    l.truth("Coass∩Max≠∅ ⟺ R/m⊗M≄0", set_intersection(big, mx).empty() != tensor_any);
    l.truth("Ass∩Max≠∅ ⟺ RHom(R/m,M)≄0", set_intersection(ass, mx).empty() != rhom_any);
    // enumeration oracle on a small module
    auto bf = coass_bruteforce(in.small);
    Complex k = module_complex(in.small);
    l.eq("bruteforce Coass=Ass D", bf.coass, ass_definitional(char_dual_complex(k)));
    l.eq("Yassemi Cosupp=coSupp", bf.cosupp_yassemi, detail::def(k, SupportKind::coSupp, o));
  } catch (const RouteDisagreement& e) {
    l.out.details["disagreement"] = e.what();
    l.fail("Coass routes");
  }
  return l.out;
}

inline Outcome check_nakayama(const Instance& in, const Options&) {
  detail::Ledger l;
  auto res = nakayama_check(in.radical, in.c);
  l.out.details["coass_meets_max"] = res.coass_meets_max;
  l.out.details["ass_meets_max"] = res.ass_meets_max;
  l.out.vacuous = !res.coass_meets_max && !res.ass_meets_max;
  if (res.coass_meets_max) l.truth("R/a⊗M≄0", res.tensor_nonzero);
  if (res.ass_meets_max) l.truth("RHom(R/a,M)≄0", res.rhom_nonzero);
  return l.out;
}

inline Outcome check_cor34(const Instance& in, const Options& o) {
  detail::Ledger l;
  const Ring& r = *in.ring;
  PrimeSet cs = detail::def(in.c, SupportKind::cosupp, o), hc = detail::homology_union(in.c, SupportKind::cosupp, o);
  l.eq("literal", cs, detail::minima(r, hc));
  l.eq("min-min", detail::minima(r, cs), detail::minima(r, hc));
  return l.out;
}

inline Outcome check_cor34_literal_dvr(const Instance& in, const Options&) {
  Outcome out;
  dvr::PointSet cs = dvr::support(in.object, dvr::Kind::cosupp);
  out.details["object"] = dvr::to_string(in.object);
  out.details["cosupp"] = dvr::format(cs);
  out.details["min_cosupp_H"] = dvr::format(dvr::minimal(cs));
  // a module in one degree is its own homology
  if (cs != dvr::minimal(cs)) out.status = Status::flagged;
  return out;
}

inline Outcome check_cor34_minmin_dvr(const Instance& in, const Options&) {
  Outcome out;
  // H(M) = M splits into summands; min(cosupp H) from the per-symbol table
  const dvr::Object& ob = in.object;
  dvr::PointSet cs = dvr::support(ob, dvr::Kind::cosupp), h = 0;
  if (ob.free) h |= dvr::table(dvr::Symbol::free, dvr::Kind::cosupp);
  if (ob.frac) h |= dvr::table(dvr::Symbol::frac, dvr::Kind::cosupp);
  if (ob.env) h |= dvr::table(dvr::Symbol::env, dvr::Kind::cosupp);
  if (!ob.tors.empty()) h |= dvr::table(dvr::Symbol::tors, dvr::Kind::cosupp);
  out.details["object"] = dvr::to_string(ob);
  out.details["min_cosupp"] = dvr::format(dvr::minimal(cs));
  out.details["min_cosupp_H"] = dvr::format(dvr::minimal(h));
  if (dvr::minimal(cs) != dvr::minimal(h)) out.status = Status::fail;
  return out;
}

inline Outcome check_dvr_tables(const Instance& in, const Options&) {
  detail::Ledger l;
  const dvr::Object& ob = in.object;
  using dvr::Kind;
  auto eq = [&](const std::string& what, dvr::PointSet a, dvr::PointSet b) {
    l.out.details[what] = {dvr::format(a), dvr::format(b)};
    if (a != b) l.fail(what);
  };
  l.out.details["object"] = dvr::to_string(ob);
  dvr::PointSet cs = dvr::support(ob, Kind::cosupp), big = dvr::support(ob, Kind::coSupp), s = dvr::support(ob, Kind::supp);
  l.truth("cosupp⊆coSupp", (cs & ~big) == 0);
  l.truth("strictness needs K", cs == big || ob.frac > 0);
  eq("max supp=max cosupp", dvr::maximal(s), dvr::maximal(cs));
  eq("min cosupp=min coSupp", dvr::minimal(cs), dvr::minimal(big));
  if (!ob.frac) {
    auto d = dvr::dual(ob);
    eq("cosupp=supp D", cs, dvr::support(d, Kind::supp));
    eq("coSupp=Supp D", big, dvr::support(d, Kind::Supp));
    eq("Coass=Ass D", dvr::support(ob, Kind::Coass), dvr::support(d, Kind::Ass));
  }
  // additivity against the single symbols
  dvr::PointSet acc = 0;
  if (ob.free) acc |= dvr::support(dvr::free_obj(), Kind::cosupp);
  if (ob.frac) acc |= dvr::support(dvr::frac_obj(), Kind::cosupp);
  if (ob.env) acc |= dvr::support(dvr::env_obj(), Kind::cosupp);
  for (const auto& [e, n] : ob.tors)
    if (n) acc |= dvr::support(dvr::tors_obj(e), Kind::cosupp);
  eq("additivity", cs, acc);
  return l.out;
}

inline const std::vector<Property>& registry() {
  static const std::vector<Property> props = {
      {"P-Routes", "finite", false, check_routes},
      {"P-ThmA", "finite", false, check_thm_a},
      {"P-Nonempty", "finite", false, check_nonempty},
      {"P-VAnn", "finite", true, check_vann},
      {"P-ThmB", "finite", false, check_thm_b},
      {"P-Dual", "finite", false, check_dual},
      {"P-Thm32", "finite", false, check_thm32},
      {"P-Triangle", "finite", false, check_triangle},
      {"P-TensorHom", "finite", false, check_tensor_hom},
      {"P-MinMax", "finite", false, check_min_max},
      {"P-Inclusion", "finite", false, check_inclusion},
      {"P-HomologyBounds", "finite", false, check_homology_bounds},
      {"P-Coass", "finite", false, check_coass},
      {"P-Nakayama", "finite", true, check_nakayama},
      {"P-Cor34", "finite", false, check_cor34},
      {"P-Cor34-literal", "dvr", false, check_cor34_literal_dvr},
      {"P-Cor34-minmin", "dvr", false, check_cor34_minmin_dvr},
      {"P-DVR", "dvr", false, check_dvr_tables},
  };
  return props;
}

inline const Property& find_property(const std::string& id) {
  for (const auto& p : registry())
    if (p.id == id) return p;
  throw InputError("unknown property '" + id + "'");
}

/// "all", or a comma-separated list of ids.
inline std::vector<const Property*> select(const std::string& suite) {
  std::vector<const Property*> out;
  if (suite == "all") {
    for (const auto& p : registry()) out.push_back(&p);
    return out;
  }
  std::size_t start = 0;
  while (start <= suite.size()) {
    std::size_t end = suite.find(',', start);
    if (end == std::string::npos) end = suite.size();
    std::string id = suite.substr(start, end - start);
    if (!id.empty()) out.push_back(&find_property(id));
    start = end + 1;
  }
  return out;
}

/// Runs one check; unexpected exceptions become failures.
inline Outcome run_check(const Property& p, const Instance& in, const Options& o) {
  try {
    return p.check(in, o);
  } catch (const KernelBug& e) {
    Outcome out;
    out.status = Status::fail;
    out.details["kernel_bug"] = e.what();
    return out;
  } catch (const InputError& e) {
    Outcome out;
    out.status = Status::fail;
    out.details["input_error"] = e.what();
    return out;
  }
}

// ---------------------------------------------------------------------------
// Shrinking

/// Degreewise C / aC.
inline Complex quotient_complex(const Complex& c, const Ideal& a) {
  Complex out(c.ring());
  if (c.empty()) return out;
  std::vector<Subquotient> q;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    const FinModule& m = c.at(n);
    std::vector<Vec> gens;
    for (std::size_t t = 0; t < a.basis().cols; ++t) {
      Mat act = m.act(a.basis().col(t));
      for (std::size_t j = 0; j < m.dim(); ++j) gens.push_back(act.col(j));
    }
    q.push_back(quotient(m, gens));
    out.set(n, q.back().module);
  }
  for (int n = c.lo() + 1; n <= c.hi(); ++n) {
    const auto& src = q[static_cast<std::size_t>(n - c.lo())];
    const auto& dst = q[static_cast<std::size_t>(n - 1 - c.lo())];
    Mat d(dst.module.dim(), src.module.dim());
    for (std::size_t t = 0; t < src.module.dim(); ++t)
      d.set_col(t, dst.class_of_checked(c.at(n - 1).apply(c.d(n), src.lift.col(t))));
    out.set_d(n, std::move(d));
  }
  return out;
}

/// The same complex viewed over a different ring via the factor embedding.
inline Instance on_factor(const Instance& in, std::size_t p) {
  Instance out = in;
  const auto& lf = in.ring->local_factors()[in.ring->spectrum()[p].local_index];
  out.ring = in.ring->factor_ring(in.ring->spectrum()[p].local_index);
  out.ring_name = in.ring_name + "/e" + std::to_string(p);
  out.c = restrict_complex(in.c, p);
  out.other = restrict_complex(in.other, p);
  out.scalar = out.ring->reduce(mul(lf.project, in.scalar, out.ring->characteristic()));
  auto project_ideal = [&](const Ideal& a) {
    std::vector<Vec> gens;
    for (std::size_t t = 0; t < a.basis().cols; ++t) gens.push_back(mul(lf.project, a.basis().col(t), out.ring->characteristic()));
    return make_ideal(*out.ring, gens);
  };
  out.ideal = project_ideal(in.ideal);
  out.radical = project_ideal(in.radical);
  out.small = restrict_to_factor(in.small, p);
  if (out.c.empty()) out.c = Complex(out.ring);
  if (out.other.empty()) out.other = Complex(out.ring);
  return out;
}

inline std::tuple<Int, int, Int> instance_size(const Instance& in) {
  int degrees = in.c.empty() ? 0 : in.c.hi() - in.c.lo() + 1;
  return {in.ring->size(), degrees, in.c.total_size()};
}

inline std::vector<Instance> shrink_candidates(const Instance& in) {
  std::vector<Instance> out;
  const Complex& c = in.c;
  const Ring& r = *in.ring;
  if (!r.is_local())
    for (std::size_t p = 0; p < r.spectrum().size(); ++p) {
      try {
        out.push_back(on_factor(in, p));
      } catch (const std::exception&) {
      }
    }
  if (!c.empty() && c.hi() > c.lo()) {
    // drop an end degree
    Instance a = in, b = in;
    a.c = Complex(c.ring());
    for (int n = c.lo(); n < c.hi(); ++n) a.c.set(n, c.at(n));
    for (int n = c.lo() + 1; n < c.hi(); ++n) a.c.set_d(n, c.d(n));
    b.c = Complex(c.ring());
    for (int n = c.lo() + 1; n <= c.hi(); ++n) b.c.set(n, c.at(n));
    for (int n = c.lo() + 2; n <= c.hi(); ++n) b.c.set_d(n, c.d(n));
    out.push_back(a);
    out.push_back(b);
    // a single homology module
    for (const auto& [n, h] : homology_profile(c).groups) {
      Instance s = in;
      s.c = module_complex(h, n);
      out.push_back(s);
    }
  }
  for (std::size_t p = 0; p < r.spectrum().size(); ++p) {
    Instance q = in;
    q.c = quotient_complex(c, r.spectrum()[p].ideal);
    if (q.c.total_size() < c.total_size()) out.push_back(q);
  }
  return out;
}

/// Greedy minimization keeping the property failing.
inline Instance shrink(const Property& prop, const Instance& failing, const Options& o, int max_steps = 64) {
  Instance cur = failing;
  for (int step = 0; step < max_steps; ++step) {
    bool moved = false;
    for (auto& cand : shrink_candidates(cur)) {
      if (!(instance_size(cand) < instance_size(cur))) continue;
      if (run_check(prop, cand, o).status == Status::fail) {
        cur = std::move(cand);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteConfig {
  std::string suite = "all";
  std::uint64_t first = 0, last = 0;
  unsigned jobs = 1;
  Profile profile;
  Options options;
  bool shrink_failures = true;
};

struct PropertyStats {
  std::size_t pass = 0, fail = 0, flagged = 0, vacuous = 0, total = 0;
  double vacuous_rate() const { return total ? static_cast<double>(vacuous) / static_cast<double>(total) : 0.0; }
};

struct SuiteResult {
  std::vector<Verdict> verdicts;
  std::map<std::string, PropertyStats> stats;
  std::size_t pass = 0, fail = 0, flagged = 0;
  std::size_t multi_homology = 0, instances = 0;
  std::vector<std::string> vacuity_violations;
  double elapsed_ms = 0;

  bool ok() const { return fail == 0 && vacuity_violations.empty(); }
};

inline constexpr double kMaxVacuousRate = 0.8;

inline json verdict_to_json(const Verdict& v) {
  json j = {{"property", v.property}, {"seed", v.seed}, {"ring", v.ring}, {"verdict", status_name(v.outcome.status)}};
  json d = v.outcome.details;
  if (v.outcome.vacuous) d["vacuous"] = true;
  j["details"] = d;
  if (!v.instance.is_null()) j["instance"] = v.instance;
  if (!v.digest.empty()) j["digest"] = v.digest;
  return j;
}

inline json summary_to_json(const SuiteResult& r, bool with_timing = true) {
  json props = json::object();
  for (const auto& [id, s] : r.stats)
    props[id] = {{"pass", s.pass}, {"fail", s.fail}, {"flagged", s.flagged}, {"vacuous", s.vacuous}, {"total", s.total},
                 {"vacuous_rate", s.vacuous_rate()}};
  json flagged = json::array();
  for (const auto& v : r.verdicts)
    if (v.outcome.status == Status::flagged) flagged.push_back({{"property", v.property}, {"seed", v.seed}});
  json j = {{"summary", true},
            {"pass", r.pass},
            {"fail", r.fail},
            {"flagged", r.flagged},
            {"properties", props},
            {"instances", r.instances},
            {"multi_homology_instances", r.multi_homology},
            {"vacuity_violations", r.vacuity_violations},
            {"flagged_list", flagged},
            {"ok", r.ok()}};
  if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline SuiteResult run_suite(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.last < cfg.first) throw InputError("seed range is empty (a..b with b < a)");
  check_profile(cfg.profile);
  auto props = select(cfg.suite);
  const std::size_t seeds = static_cast<std::size_t>(cfg.last - cfg.first + 1);
  std::vector<std::vector<Verdict>> per_seed(seeds);
  std::vector<char> multi(seeds, 0);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= seeds) return;
      try {
        std::uint64_t seed = cfg.first + i;
        if (props.empty()) continue;
        Instance in = generate_instance(seed, cfg.profile);
        multi[i] = homology_degrees(in.c) >= 2;
        for (const Property* p : props) {
          Verdict v{p->id, seed, p->domain == "dvr" ? "dvr" : in.ring_name, run_check(*p, in, cfg.options), nullptr, ""};
          if (v.outcome.status == Status::fail) {
            json full = instance_to_json(in);
            v.digest = io::digest(full.dump());
            v.instance = full;
            if (cfg.shrink_failures && p->domain == "finite") {
              Instance small = shrink(*p, in, cfg.options);
              json sj = instance_to_json(small);
              v.outcome.details["shrunk"] = sj;
              v.outcome.details["shrunk_digest"] = io::digest(sj.dump());
            }
          }
          per_seed[i].push_back(std::move(v));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  unsigned jobs = std::max(1u, cfg.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  SuiteResult res;
  for (const Property* p : props) res.stats[p->id];
  for (std::size_t i = 0; i < seeds; ++i) {
    if (!props.empty()) ++res.instances;
    res.multi_homology += static_cast<std::size_t>(multi[i]);
    for (auto& v : per_seed[i]) {
      auto& s = res.stats[v.property];
      ++s.total;
      if (v.outcome.vacuous) ++s.vacuous;
      switch (v.outcome.status) {
        case Status::pass: ++s.pass, ++res.pass; break;
        case Status::fail: ++s.fail, ++res.fail; break;
        case Status::flagged: ++s.flagged, ++res.flagged; break;
      }
      res.verdicts.push_back(std::move(v));
    }
  }
  for (const Property* p : props)
    if (p->implication && res.stats[p->id].vacuous_rate() > kMaxVacuousRate) res.vacuity_violations.push_back(p->id);
  res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

/// One JSON object per line, then the summary line.
inline void write_jsonl(std::ostream& out, const SuiteResult& r, bool with_timing = true) {
  for (const auto& v : r.verdicts) out << verdict_to_json(v).dump() << '\n';
  out << summary_to_json(r, with_timing).dump() << '\n';
}

}  // namespace cosupp::verify
