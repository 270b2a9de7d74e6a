// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>

#include "cosupp/verify.hpp"

using namespace cosupp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::string note;

  Criterion(int i, std::string t) : id(i), title(std::move(t)) {}

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      note = why;
    }
  }
};

int report(Criterion& c) {
  std::printf("%s %d %s%s%s\n", c.ok ? "PASS" : "FAIL", c.id, c.title.c_str(), c.note.empty() ? "" : ": ", c.note.c_str());
  std::fflush(stdout);
  return c.ok ? 0 : 1;
}

verify::SuiteResult run_registry() {
  verify::SuiteConfig cfg;
  cfg.suite = "all";
  cfg.first = 0;
  cfg.last = 199;
  cfg.profile.module_cap = 1024;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  return verify::run_suite(cfg);
}

// 1. full registry, 200 seeds, no failures outside the flagged probe class
Criterion registry_green(const verify::SuiteResult& r) {
  Criterion c{1, "registry green run"};
  c.require(r.fail == 0, std::to_string(r.fail) + " failing verdicts");
  for (const auto& v : r.verdicts)
    if (v.outcome.status == verify::Status::flagged)
      c.require(v.property == "P-Cor34-literal", "flagged verdict outside the probe class: " + v.property);
  c.require(r.instances == 200, "expected 200 instances");
  c.require(r.vacuity_violations.empty(), "vacuity above 80%");
  c.require(r.elapsed_ms <= 300000, "took " + std::to_string(r.elapsed_ms / 1000) + " s");
  if (c.ok)
    c.note = std::to_string(r.pass) + " pass, " + std::to_string(r.flagged) + " flagged, " +
             std::to_string(static_cast<int>(r.elapsed_ms / 1000)) + " s";
  return c;
}

// 2. the three routes agree on all six kinds for every instance
Criterion routes_agree(const verify::SuiteResult& r) {
  Criterion c{2, "multi-path exactness"};
  const auto& s = r.stats.at("P-Routes");
  c.require(s.pass == 200 && s.fail == 0, "P-Routes not green");
  const std::vector<Route> all{Route::definitional, Route::dual, Route::homology};
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 200 && c.ok; ++seed) {
    verify::Profile p;
    p.module_cap = 1024;
    auto in = verify::generate_instance(seed, p);
    for (auto k : {SupportKind::Supp, SupportKind::supp, SupportKind::coSupp, SupportKind::cosupp, SupportKind::co_supp,
                   SupportKind::Co_supp}) {
      try {
        (void)support_set(in.c, k, all);
        ++checked;
      } catch (const RouteDisagreement& e) {
        c.require(false, "seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  if (c.ok) c.note = std::to_string(checked) + " (instance, kind) pairs, exact equality";
  return c;
}

// 3. DVR rule tables
Criterion dvr_tables() {
  using namespace dvr;
  Criterion c{3, "DVR table reproduction"};
  const PointSet mx = max, spec = kSpec, z = zero;
  auto expect = [&](const Object& o, Kind k, PointSet want, const std::string& what) {
    PointSet got = support(o, k);
    c.require(got == want, what + " = " + format(got) + ", expected " + format(want));
  };
  expect(free_obj(), Kind::cosupp, mx, "cosupp R");
  expect(free_obj(), Kind::supp, spec, "supp R");
  expect(tors_obj(1), Kind::cosupp, mx, "cosupp k(m)");
  expect(tors_obj(1), Kind::supp, mx, "supp k(m)");
  expect(frac_obj(), Kind::cosupp, z, "cosupp k((0))");
  expect(frac_obj(), Kind::supp, z, "supp k((0))");
  expect(env_obj(), Kind::supp, mx, "supp E");
  expect(env_obj(), Kind::cosupp, up_to(max), "cosupp E");
  c.require(up_to(max) == spec, "primes inside m should be all of Spec");
  return c;
}

// 4. strict inclusions on the DVR
Criterion strictness() {
  using namespace dvr;
  Criterion c{4, "strictness demo"};
  auto rep = demo("strictness");
  c.require(rep.ok(), "demo report not as expected");
  c.require(strict_subset(support(free_obj(), Kind::cosupp), support(free_obj(), Kind::supp)), "cosupp R not strictly inside supp R");
  c.require(strict_subset(support(env_obj(), Kind::supp), support(env_obj(), Kind::cosupp)), "supp E not strictly inside cosupp E");
  c.require(strict_subset(support(frac_obj(), Kind::cosupp), support(frac_obj(), Kind::coSupp)), "cosupp K not strictly inside coSupp K");
  return c;
}

// 5. minimal-primes identity: literal on finite rings, flagged on the hull
Criterion minimal_cosupport(const verify::SuiteResult& r) {
  Criterion c{5, "minimal cosupport probe"};
  const auto& fin = r.stats.at("P-Cor34");
  c.require(fin.pass == 200, "finite literal form not green on all instances");
  const auto& mm = r.stats.at("P-Cor34-minmin");
  c.require(mm.pass == 200, "min-min form not green on all DVR instances");
  const auto& lit = r.stats.at("P-Cor34-literal");
  c.require(lit.fail == 0, "literal DVR probe reported as failure");
  verify::Instance in = verify::generate_instance(0);
  in.object = dvr::env_obj();
  c.require(verify::run_check(verify::find_property("P-Cor34-literal"), in, {}).status == verify::Status::flagged,
            "hull probe not flagged");
  c.require(verify::run_check(verify::find_property("P-Cor34-minmin"), in, {}).status == verify::Status::pass,
            "min-min fails on the hull");
  c.require(dvr::demo("cor34").ok(), "cor34 demo not as expected");
  if (c.ok) c.note = std::to_string(lit.flagged) + " DVR objects flagged, 0 failures";
  return c;
}

// Every module with at most 64 elements, up to isomorphism, over rings whose
// modules are sums of cyclics: products of R/(t) over the listed quotients.
std::vector<std::pair<std::string, FinModule>> enumerate_small_modules() {
  std::vector<std::pair<std::string, FinModule>> out;
  auto elem = [](const RingPtr& r, Int n) { return r->scale(n, r->one()); };
  std::vector<std::pair<RingPtr, std::vector<std::pair<std::string, Vec>>>> fams;
  auto z4 = catalog_ring("z4"), z6 = catalog_ring("z6"), z8 = catalog_ring("z8"), f2 = catalog_ring("f2x2");
  fams.push_back({z4, {{"Z/2", elem(z4, 2)}, {"Z/4", elem(z4, 0)}}});
  fams.push_back({z6, {{"Z/2", elem(z6, 2)}, {"Z/3", elem(z6, 3)}}});
  fams.push_back({z8, {{"Z/2", elem(z8, 2)}, {"Z/4", elem(z8, 4)}, {"Z/8", elem(z8, 0)}}});
  fams.push_back({f2, {{"k", f2->jacobson_radical().basis().col(0)}, {"R", elem(f2, 0)}}});
  for (auto& [r, cyc] : fams) {
    std::vector<FinModule> blocks;
    for (auto& [name, g] : cyc) blocks.push_back(cyclic_module(r, make_ideal(*r, {g})));
    // multiplicities for each block, bounded by the size cap
    std::vector<int> mult(blocks.size(), 0);
    std::function<void(std::size_t, Int)> rec = [&](std::size_t i, Int size) {
      if (i == blocks.size()) {
        if (size == 1) return;
        std::vector<FinModule> parts;
        std::string label = r->name() + ":";
        for (std::size_t b = 0; b < blocks.size(); ++b) {
          for (int k = 0; k < mult[b]; ++k) parts.push_back(blocks[b]);
          if (mult[b]) label += " " + cyc[b].first + "^" + std::to_string(mult[b]);
        }
        out.emplace_back(label, direct_sum(r, parts).module);
        return;
      }
      for (mult[i] = 0; size <= 64; ++mult[i], size *= blocks[i].size()) rec(i + 1, size);
      mult[i] = 0;
    };
    rec(0, 1);
  }
  return out;
}

// 6. brute-force coassociated primes against Ass of the dual
Criterion coass_oracle() {
  Criterion c{6, "coassociated primes oracle"};
  auto t0 = Clock::now();
  auto mods = enumerate_small_modules();
  std::size_t submodules = 0;
  for (const auto& [label, m] : mods) {
    auto brute = coass_bruteforce(m);
    submodules += brute.submodules;
    PrimeSet via_dual = ass_coass(module_complex(char_dual(m)), PrimeFamily::Ass).primes;
    PrimeSet via_literal = ass_coass(module_complex(matlis_dual_literal(m).module), PrimeFamily::Ass).primes;
    c.require(brute.coass == via_dual, label + ": brute force " + format_primes(brute.coass) + " vs " + format_primes(via_dual));
    c.require(via_literal == via_dual, label + ": literal Matlis dual disagrees");
  }
  double secs = seconds_since(t0);
  c.require(mods.size() >= 50, "only " + std::to_string(mods.size()) + " modules enumerated");
  c.require(secs <= 120, "took " + std::to_string(secs) + " s");
  if (c.ok)
    c.note = std::to_string(mods.size()) + " modules, " + std::to_string(submodules) + " submodules, " +
             std::to_string(static_cast<int>(secs)) + " s";
  return c;
}

bool same_mod(Mat a, Mat b, const Vec& orders) {
  reduce_rows(a, orders);
  reduce_rows(b, orders);
  return a == b;
}

// 7. Tor/Ext over Z/4 and duality invariants on catalog modules
Criterion kernel_oracles() {
  Criterion c{7, "kernel oracles"};
  auto z4 = catalog_ring("z4");
  FinModule k = residue_field(z4, 0);
  for (auto kind : {Derived::tor, Derived::ext}) {
    auto w = ext_tor_window(k, k, kind, 0, 3);
    for (int i = 0; i <= 3; ++i) {
      bool ok = w.count(i) && w.at(i).orders == Vec{2};
      c.require(ok, std::string(kind == Derived::tor ? "Tor_" : "Ext^") + std::to_string(i) + "(Z/2,Z/2) is not Z/2");
    }
  }
  std::size_t modules = 0;
  verify::Rng g(7);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    std::vector<FinModule> ms{free_module(r, 1), free_module(r, 2)};
    for (std::size_t p = 0; p < r->spectrum().size(); ++p) {
      auto env = injective_envelope(r, p).module;
      c.require(is_essential_extension_of_residue(env, p), name + ": E(p" + std::to_string(p) + ") not essential");
      ms.push_back(env);
      ms.push_back(residue_field(r, p));
    }
    std::set<Vec> seen;
    for (std::size_t i = 0; i < static_cast<std::size_t>(r->size()); ++i) {
      auto a = make_ideal(*r, {r->element(i)});
      FinModule q = cyclic_module(r, a);
      if (!q.is_zero() && seen.insert(q.orders).second) ms.push_back(q);
    }
    ms.push_back(direct_sum(ms[0], ms.back()));
    for (const auto& m : ms) {
      ++modules;
      FinModule d = char_dual(m), dd = char_dual(d);
      c.require(d.size() == m.size(), name + ": |dual| != |M|");
      c.require(matlis_dual_literal(m).module.size() == m.size(), name + ": |Hom(M, E)| != |M|");
      Mat ev = double_dual_evaluation(m);
      c.require(is_isomorphism(m, dd, ev), name + ": evaluation M -> M** not an isomorphism");
      // naturality against a random map into another catalog module
      const FinModule& n = ms[g.below(ms.size())];
      Mat f = verify::random_map(m, n, g);
      Mat fdd = char_dual_map(char_dual(n), char_dual(m), char_dual_map(m, n, f));
      c.require(same_mod(mul(double_dual_evaluation(n), f, r->characteristic()), mul(fdd, ev, r->characteristic()), n.orders),
                name + ": evaluation not natural");
    }
  }
  if (c.ok) c.note = "Tor/Ext windows 0..3, " + std::to_string(modules) + " catalog modules";
  return c;
}

// 8. Nakayama extension on the targeted generator
Criterion nakayama() {
  Criterion c{8, "Nakayama extension"};
  verify::SuiteConfig cfg;
  cfg.suite = "P-Nakayama";
  cfg.first = 0;
  cfg.last = 199;
  cfg.profile.module_cap = 1024;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  auto r = verify::run_suite(cfg);
  std::size_t meets = 0;
  for (const auto& v : r.verdicts) {
    c.require(v.outcome.status == verify::Status::pass, "seed " + std::to_string(v.seed) + " fails");
    auto in = verify::generate_instance(v.seed, cfg.profile);
    c.require(ideal_subset(in.radical, in.ring->jacobson_radical()), "generated ideal not inside J");
    if (v.outcome.details.value("coass_meets_max", false)) ++meets;
  }
  const auto& s = r.stats.at("P-Nakayama");
  c.require(meets >= 50, "only " + std::to_string(meets) + " instances with Coass meeting Max");
  c.require(s.vacuous_rate() < verify::kMaxVacuousRate, "vacuity rate too high");
  if (c.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu non-vacuous instances, vacuity %.1f%%", meets, 100 * s.vacuous_rate());
    c.note = buf;
  }
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](Criterion c) { failures += report(c); };
  auto suite = run_registry();
  run(registry_green(suite));
  run(routes_agree(suite));
  run(dvr_tables());
  run(strictness());
  run(minimal_cosupport(suite));
  run(coass_oracle());
  run(kernel_oracles());
  run(nakayama());
  return failures == 0 ? 0 : 1;
}
