#include <gtest/gtest.h>

#include <random>

#include "cosupp/dercat.hpp"

using namespace cosupp;

namespace {

FinModule zmod_module(const RingPtr& r, Int m) {
  Mat a(1, 1);
  a(0, 0) = 1;
  return make_module(r, {m}, {a});
}

Mat scalar(Int x) {
  Mat m(1, 1);
  m(0, 0) = x;
  return m;
}

// 0 -> Z/4 -(2)-> Z/4 -> 0 in degrees [0, 1]
Complex two_term() {
  auto r = zmod_ring(4);
  auto f = free_module(r, 1);
  return make_complex(r, {{0, f}, {1, f}}, {{1, scalar(2)}});
}

Vec orders_of(const FinModule& m) { return canonical_form(m).first.orders; }

std::size_t prime_containing(const Ring& r, Int x) {
  for (std::size_t p = 0; p < r.spectrum().size(); ++p)
    if (r.spectrum()[p].ideal.contains({x})) return p;
  throw std::runtime_error("no prime");
}

// random complex of cyclic free modules over Z/n with multiplication maps
Complex random_scalar_complex(const RingPtr& r, std::mt19937_64& rng) {
  const Int n = r->characteristic();
  auto f = free_module(r, 1);
  std::map<int, FinModule> mods;
  std::map<int, Mat> diffs;
  int len = 1 + static_cast<int>(rng() % 3);
  Int prev = 0;
  for (int k = 0; k <= len; ++k) mods.emplace(k, f);
  for (int k = 1; k <= len; ++k) {
    Int x;
    do x = static_cast<Int>(rng() % static_cast<std::uint64_t>(n));
    while (mod(x * prev, n) != 0);
    diffs[k] = scalar(x);
    prev = x;
  }
  return make_complex(r, mods, diffs);
}

}  // namespace

TEST(Complex, BuildAndReject) {
  auto c = two_term();
  EXPECT_EQ(c.lo(), 0);
  EXPECT_EQ(c.hi(), 1);
  auto r = zmod_ring(4);
  auto f = free_module(r, 1);
  EXPECT_THROW(make_complex(r, {{0, f}, {1, f}, {2, f}}, {{1, scalar(2)}, {2, scalar(1)}}), InputError);
  EXPECT_NO_THROW(module_complex(f));
}

TEST(Complex, Homology) {
  auto h = homology_profile(two_term());
  ASSERT_EQ(h.groups.size(), 2u);
  EXPECT_EQ(h.groups.at(0).orders, Vec{2});
  EXPECT_EQ(h.groups.at(1).orders, Vec{2});
  auto r = zmod_ring(4);
  auto f = free_module(r, 1);
  EXPECT_TRUE(is_exact(make_complex(r, {{0, f}, {1, f}}, {{1, scalar(1)}})));
  EXPECT_EQ(homology_profile(module_complex(f)).groups.at(0).orders, Vec{4});
}

TEST(Complex, Truncations) {
  auto c = two_term();
  auto ge = trunc_ge(c, 1);
  auto hg = homology_profile(ge);
  ASSERT_EQ(hg.groups.size(), 1u);
  EXPECT_EQ(hg.groups.at(1).orders, Vec{2});
  auto le = trunc_le(c, 0);
  auto hl = homology_profile(le);
  ASSERT_EQ(hl.groups.size(), 1u);
  EXPECT_EQ(hl.groups.at(0).orders, Vec{2});
  auto s0 = shift(c, 0);
  EXPECT_EQ(s0.lo(), c.lo());
  EXPECT_EQ(s0.d(1), c.d(1));
  auto s1 = shift(c, 3);
  EXPECT_EQ(homology_profile(s1).inf, 3);
}

TEST(Complex, TruncationPreservesHomologyInRange) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    auto r = catalog_ring(k % 2 ? "z8" : "z12");
    auto c = random_scalar_complex(r, rng);
    auto full = homology_profile(c);
    for (int n = c.lo(); n <= c.hi(); ++n) {
      auto ge = homology_profile(trunc_ge(c, n));
      auto le = homology_profile(trunc_le(c, n));
      for (int m = c.lo(); m <= c.hi(); ++m) {
        Int a = full.groups.count(m) ? full.groups.at(m).size() : 1;
        if (m >= n) {
          EXPECT_EQ(ge.groups.count(m) ? ge.groups.at(m).size() : 1, a);
        }
        if (m <= n) {
          EXPECT_EQ(le.groups.count(m) ? le.groups.at(m).size() : 1, a);
        }
      }
    }
  }
}

TEST(Complex, EulerCharacteristic) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    auto c = random_scalar_complex(catalog_ring("z12"), rng);
    auto h = homology_profile(c);
    // alternating product compared via cross multiplication
    Int lhs = 1, rhs = 1, hl = 1, hr = 1;
    for (int n = c.lo(); n <= c.hi(); ++n) {
      Int m = c.at(n).size();
      Int hm = h.groups.count(n) ? h.groups.at(n).size() : 1;
      (n % 2 == 0 ? lhs : rhs) *= m;
      (n % 2 == 0 ? hl : hr) *= hm;
    }
    EXPECT_EQ(lhs * hr, rhs * hl);
  }
}

TEST(Cone, Examples) {
  auto r = zmod_ring(4);
  auto f = free_module(r, 1);
  auto m = module_complex(f);
  ChainMap two{m, m, {{0, scalar(2)}}};
  auto h = homology_profile(cone(two));
  ASSERT_EQ(h.groups.size(), 2u);
  EXPECT_EQ(h.groups.at(0).orders, Vec{2});
  EXPECT_EQ(h.groups.at(1).orders, Vec{2});
  auto c = two_term();
  ChainMap id{c, c, {{0, scalar(1)}, {1, scalar(1)}}};
  EXPECT_TRUE(is_exact(cone(id)));
  ChainMap from_zero{Complex(c.ring()), c, {}};
  auto hz = homology_profile(cone(from_zero));
  EXPECT_EQ(hz.groups.size(), 2u);
}

TEST(Resolution, PeriodicOverZ4) {
  auto r = zmod_ring(4);
  auto res = resolve(module_complex(zmod_module(r, 2)), 3);
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(res.rank(n), 1u);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(mod(res.entry(n, 0, 0)[0], 2), 0);
  auto p = res.as_complex();
  auto h = homology_profile(p, 0, 2);
  ASSERT_EQ(h.groups.size(), 1u);
  EXPECT_EQ(h.groups.at(0).orders, Vec{2});
}

TEST(Resolution, FreeModuleResolvesItself) {
  auto r = catalog_ring("f2x3");
  auto res = resolve(module_complex(free_module(r, 1)), 3);
  EXPECT_EQ(res.rank(0), 1u);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(res.rank(n), 0u);
}

TEST(Resolution, Z3OverZ6) {
  auto r = zmod_ring(6);
  auto res = resolve(module_complex(zmod_module(r, 3)), 2);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(res.rank(n), 1u);
}

TEST(Resolution, MinimalGeneratorsAcrossFactors) {
  auto r = catalog_ring("z2xz4");
  EXPECT_EQ(module_generators(free_module(r, 1)).size(), 1u);
  EXPECT_EQ(module_generators(free_module(r, 2)).size(), 2u);
  // one residue field per factor: a single generator reaches both
  auto kk = direct_sum(residue_field(r, 0), residue_field(r, 1));
  EXPECT_EQ(module_generators(kk).size(), 1u);
  auto res = resolve(module_complex(kk), 6);
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(res.rank(n), 1u) << n;
  auto f = catalog_ring("f2x2");
  auto m = direct_sum(injective_envelope(f, 0).module, residue_field(f, 0));
  EXPECT_EQ(module_generators(m).size(), 2u);
  EXPECT_TRUE(module_generators(zero_module(f)).empty());
}

TEST(Resolution, ComplexIsQuasiIsomorphic) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 15; ++k) {
    auto c = random_scalar_complex(catalog_ring(k % 2 ? "z9" : "z12"), rng);
    auto res = resolve(c, c.hi() + 2);
    auto p = res.as_complex();
    for (int n = res.lo + 1; n <= res.top; ++n)
      EXPECT_TRUE(is_linear(p.at(n), c.at(n).is_zero() ? p.at(n - 1) : p.at(n - 1), p.d(n)));
    ChainMap phi{p, c, {}};
    for (int n = res.lo; n <= res.top; ++n) phi.maps[n] = res.phi_matrix(n);
    // cone is exact through the certified range
    auto h = homology_profile(cone(phi), std::nullopt, res.top);
    EXPECT_TRUE(h.is_zero());
  }
}

TEST(Windows, TorAndExtOverZ4) {
  auto r = zmod_ring(4);
  auto k = zmod_module(r, 2);
  auto tor = ext_tor_window(k, k, Derived::tor, 0, 3);
  for (int i = 0; i <= 3; ++i) {
    ASSERT_TRUE(tor.count(i)) << i;
    EXPECT_EQ(tor.at(i).size(), 2);
  }
  auto ext = ext_tor_window(k, k, Derived::ext, 0, 2);
  for (int i = 0; i <= 2; ++i) {
    ASSERT_TRUE(ext.count(i)) << i;
    EXPECT_EQ(ext.at(i).size(), 2);
  }
  auto m = free_module(r, 1);
  auto t0 = ext_tor_window(m, k, Derived::tor, 0, 0);
  EXPECT_EQ(t0.at(0).size(), 2);
}

TEST(Windows, TorSymmetryOrders) {
  std::mt19937_64 rng(8);
  for (const auto& name : {"z4", "z12", "f2x2", "z2xz4"}) {
    auto r = catalog_ring(name);
    for (std::size_t p = 0; p < r->spectrum().size(); ++p) {
      auto a = residue_field(r, p);
      auto b = cyclic_module(r, make_ideal(*r, {r->element(rng() % r->size())}));
      auto x = ext_tor_window(a, b, Derived::tor, 0, 2), y = ext_tor_window(b, a, Derived::tor, 0, 2);
      for (int i = 0; i <= 2; ++i)
        EXPECT_EQ(x.count(i) ? x.at(i).size() : 1, y.count(i) ? y.at(i).size() : 1) << name << " " << i;
    }
  }
}

TEST(Nonvanishing, Examples) {
  auto z4 = zmod_ring(4);
  auto r1 = derived_nonvanishing(module_complex(zmod_module(z4, 2)), 0, NVKind::rhom_residue, true);
  EXPECT_TRUE(r1.nonzero);
  EXPECT_EQ(r1.witness, 0);
  EXPECT_FALSE(derived_nonvanishing(Complex(z4), 0, NVKind::rhom_residue, true).nonzero);
  auto z6 = zmod_ring(6);
  auto r3 = derived_nonvanishing(module_complex(zmod_module(z6, 3)), prime_containing(*z6, 2), NVKind::tensor_residue, true);
  EXPECT_FALSE(r3.nonzero);
}

TEST(Nonvanishing, WindowCrossCheck) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    auto r = catalog_ring(k % 2 ? "z6" : "z12");
    auto c = random_scalar_complex(r, rng);
    for (std::size_t p = 0; p < r->spectrum().size(); ++p) {
      EXPECT_NO_THROW(derived_nonvanishing(c, p, NVKind::rhom_residue, true));
      EXPECT_NO_THROW(derived_nonvanishing(c, p, NVKind::tensor_residue, true));
    }
  }
}

TEST(Duality, TwoTermSelfDual) {
  auto c = two_term();
  auto d = char_dual_complex(c);
  EXPECT_TRUE(is_valid(d));
  auto h = homology_profile(d);
  ASSERT_EQ(h.groups.size(), 2u);
  EXPECT_EQ(h.groups.at(0).orders, Vec{2});
  EXPECT_EQ(h.groups.at(-1).orders, Vec{2});
  EXPECT_TRUE(homology_commutes_with_dual(c));
  EXPECT_TRUE(char_dual_complex(Complex(zmod_ring(4))).empty());
}

TEST(Duality, LiteralRoutesAreComplexes) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 6; ++k) {
    auto r = catalog_ring(k % 2 ? "z6" : "z12");
    auto c = random_scalar_complex(r, rng);
    EXPECT_TRUE(is_valid(literal_dual_complex(c)));
    EXPECT_TRUE(is_valid(tilde_complex(c)));
    EXPECT_TRUE(homology_commutes_with_dual(c));
    for (std::size_t p = 0; p < r->spectrum().size(); ++p) {
      auto cc = colocalize_complex(c, p);
      EXPECT_TRUE(is_valid(cc));
      auto lc = localize_complex(c, p);
      auto h1 = homology_profile(cc), h2 = homology_profile(lc);
      ASSERT_EQ(h1.groups.size(), h2.groups.size());
      for (auto& [n, g] : h2.groups) EXPECT_EQ(orders_of(h1.groups.at(n)), orders_of(g));
    }
  }
}

TEST(Duality, ColocalizeKillsOtherPrimaryParts) {
  auto r = zmod_ring(6);
  auto f = free_module(r, 1);
  auto c = make_complex(r, {{0, f}, {1, f}}, {{1, scalar(3)}});
  auto p2 = prime_containing(*r, 2);
  auto cc = colocalize_complex(c, p2);
  for (int n = cc.lo(); n <= cc.hi(); ++n) EXPECT_EQ(cc.at(n).size() % 3 == 0 && cc.at(n).size() > 1, false);
}
