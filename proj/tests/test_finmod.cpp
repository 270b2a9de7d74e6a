#include <gtest/gtest.h>

#include <random>

#include "cosupp/finmod.hpp"

using namespace cosupp;

namespace {

// Z/m viewed as a module over Z/n (m | n).
FinModule zmod_module(const RingPtr& r, Int m) {
  Mat a(1, 1);
  a(0, 0) = 1;
  return make_module(r, {m}, {a});
}

Vec canonical_orders(const FinModule& m) { return canonical_form(m).first.orders; }

std::size_t prime_containing(const Ring& r, Int x) {
  for (std::size_t p = 0; p < r.spectrum().size(); ++p)
    if (r.spectrum()[p].ideal.contains({x})) return p;
  throw std::runtime_error("no prime");
}

// a small random module: quotient of R^k by random elements
FinModule random_module(const RingPtr& r, std::mt19937_64& rng) {
  std::size_t k = 1 + rng() % 2;
  FinModule f = free_module(r, k);
  std::vector<Vec> rel;
  std::size_t nrel = rng() % 3;
  for (std::size_t t = 0; t < nrel; ++t) {
    Vec v(f.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<Int>(rng() % static_cast<std::uint64_t>(f.orders[i]));
    rel.push_back(v);
  }
  return quotient(f, rel).module;
}

}  // namespace

TEST(FinModule, CokernelOfTwoOverZ4) {
  auto r = zmod_ring(4);
  auto m = cokernel_presentation(r, {{{2}}}, 1, 1);
  EXPECT_EQ(m.orders, Vec{2});
  EXPECT_TRUE(m.is_zero(m.apply(m.act({2}), {1})));
}

TEST(FinModule, FreeModuleIsRing) {
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    auto m = free_module(r, 1);
    EXPECT_EQ(m.size(), r->size());
    EXPECT_FALSE(module_defect(m)) << name;
  }
}

TEST(FinModule, Z3OverZ6LivesOnOneFactor) {
  auto r = zmod_ring(6);
  auto m = zmod_module(r, 3);
  auto p2 = prime_containing(*r, 2), p3 = prime_containing(*r, 3);
  EXPECT_TRUE(localize(m, p2).module().is_zero());
  EXPECT_EQ(localize(m, p3).module().size(), 3);
}

TEST(FinModule, RejectsBadAction) {
  auto r = zmod_ring(4);
  Mat a(1, 1);
  a(0, 0) = 2;  // 1 must act as the identity
  EXPECT_THROW(make_module(r, {4}, {a}), InputError);
  Mat b(1, 1);
  b(0, 0) = 1;
  EXPECT_THROW(make_module(r, {3}, {b}), InputError);  // 3 does not divide 4
}

TEST(Hom, Examples) {
  auto z4 = zmod_ring(4);
  EXPECT_EQ(canonical_orders(hom(zmod_module(z4, 2), zmod_module(z4, 4)).module), Vec{2});
  EXPECT_TRUE(hom(zmod_module(z4, 4), zero_module(z4)).module.is_zero());
  auto z6 = zmod_ring(6);
  EXPECT_TRUE(hom(zmod_module(z6, 2), zmod_module(z6, 3)).module.is_zero());
}

TEST(Hom, GeneratorsAreLinearMaps) {
  auto r = catalog_ring("f2x2");
  auto m = free_module(r, 2);
  auto n = residue_field(r, 0);
  auto h = hom(m, n);
  EXPECT_EQ(h.module.size(), 4);  // Hom(R^2, k) = k^2
  for (std::size_t t = 0; t < h.module.dim(); ++t) EXPECT_TRUE(is_linear(m, n, h.generator(t)));
}

TEST(Tensor, Examples) {
  auto z4 = zmod_ring(4);
  EXPECT_EQ(canonical_orders(tensor(zmod_module(z4, 2), zmod_module(z4, 2)).module), Vec{2});
  auto z6 = zmod_ring(6);
  EXPECT_TRUE(tensor(zmod_module(z6, 2), zmod_module(z6, 3)).module.is_zero());
}

TEST(Tensor, UnitLaw) {
  std::mt19937_64 rng(7);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    for (int k = 0; k < 3; ++k) {
      auto m = random_module(r, rng);
      EXPECT_EQ(tensor(free_module(r, 1), m).module.size(), m.size()) << name;
    }
  }
}

TEST(MapSpaces, KernelImageCokernel) {
  auto z4 = zmod_ring(4);
  auto m = free_module(z4, 1);
  EXPECT_EQ(kernel_of(m, m, m.act({2})).module.orders, Vec{2});
  EXPECT_TRUE(cokernel_of(m, Mat::identity(1)).module.is_zero());
  auto z12 = zmod_ring(12);
  auto n = free_module(z12, 1);
  EXPECT_EQ(image_of(n, n.act({3})).module.orders, Vec{4});
}

TEST(Localize, Examples) {
  auto z12 = zmod_ring(12);
  auto rr = free_module(z12, 1);
  EXPECT_EQ(localize(rr, prime_containing(*z12, 2)).module().orders, Vec{4});
  auto z4 = zmod_ring(4);
  auto m = zmod_module(z4, 2);
  EXPECT_EQ(localize(m, 0).module().size(), 2);
}

TEST(CharDual, Examples) {
  auto z4 = zmod_ring(4);
  auto d = char_dual(free_module(z4, 1));
  EXPECT_EQ(d.orders, Vec{4});
  EXPECT_FALSE(module_defect(d));
}

TEST(CharDual, DoubleDualIsNaturalIso) {
  std::mt19937_64 rng(11);
  int count = 0;
  for (int k = 0; k < 20; ++k) {
    auto r = catalog_ring(catalog_names()[rng() % catalog_names().size()]);
    auto m = random_module(r, rng);
    auto d = char_dual(m);
    EXPECT_EQ(d.size(), m.size());
    EXPECT_FALSE(module_defect(d));
    auto dd = char_dual(d);
    EXPECT_TRUE(is_isomorphism(m, dd, double_dual_evaluation(m)));
    ++count;
  }
  EXPECT_EQ(count, 20);
}

TEST(Envelope, Examples) {
  auto z4 = zmod_ring(4);
  auto e = checked_envelope(z4, 0);
  EXPECT_EQ(e.module.orders, Vec{4});
  auto gf4 = catalog_ring("gf4");
  EXPECT_EQ(checked_envelope(gf4, 0).module.size(), 4);
  auto z6 = zmod_ring(6);
  EXPECT_EQ(checked_envelope(z6, prime_containing(*z6, 2)).module.size(), 2);
}

TEST(Envelope, EssentialOverCatalog) {
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    for (std::size_t p = 0; p < r->spectrum().size(); ++p)
      EXPECT_TRUE(is_essential_extension_of_residue(injective_envelope(r, p).module, p)) << name;
  }
}

TEST(MatlisDual, Examples) {
  auto z6 = zmod_ring(6);
  auto m = zmod_module(z6, 2);
  EXPECT_EQ(matlis_dual_literal(m).module.size(), 2);
  EXPECT_TRUE(matlis_dual_literal(zero_module(z6)).module.is_zero());
  auto z9 = zmod_ring(9);
  auto n = zmod_module(z9, 3);
  EXPECT_EQ(matlis_dual_single(n, 0).module.size(), matlis_dual_literal(n).module.size());
}

TEST(MatlisDual, LiteralAgreesWithCharacterRoute) {
  std::mt19937_64 rng(3);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(matlis_routes_agree(random_module(r, rng))) << name;
  }
}

TEST(Colocalize, Examples) {
  auto z6 = zmod_ring(6);
  auto p2 = prime_containing(*z6, 2), p3 = prime_containing(*z6, 3);
  auto m = zmod_module(z6, 2);
  EXPECT_EQ(colocalize(m, p2).module.size(), 2);
  EXPECT_TRUE(colocalize(m, p3).module.is_zero());
  auto z12 = zmod_ring(12);
  auto rr = free_module(z12, 1);
  EXPECT_EQ(canonical_orders(colocalize(rr, prime_containing(*z12, 2)).module), Vec{4});
}

TEST(Colocalize, ComparisonMapIsIso) {
  std::mt19937_64 rng(5);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    auto m = random_module(r, rng);
    for (std::size_t p = 0; p < r->spectrum().size(); ++p) EXPECT_TRUE(colocalization_routes_agree(m, p)) << name;
  }
}

TEST(Tilde, Examples) {
  auto z6 = zmod_ring(6);
  EXPECT_EQ(tilde_bidual(zmod_module(z6, 2)).module.size(), 2);
  EXPECT_TRUE(tilde_bidual(zero_module(z6)).module.is_zero());
  auto z4 = zmod_ring(4);
  EXPECT_TRUE(tilde_is_natural_iso(free_module(z4, 1)));
  EXPECT_TRUE(tilde_is_natural_iso(zmod_module(z6, 2)));
}

TEST(Annihilator, Examples) {
  auto z4 = zmod_ring(4);
  auto a = annihilator(zmod_module(z4, 2));
  EXPECT_TRUE(ideal_equal(a, make_ideal(*z4, {{2}})));
  EXPECT_EQ(annihilator(free_module(z4, 1)).dim(), 0u);
  auto z12 = zmod_ring(12);
  auto b = annihilator(zmod_module(z12, 3));
  EXPECT_TRUE(ideal_equal(b, make_ideal(*z12, {{3}})));
}

TEST(Exactness, DualReversesShortExactSequence) {
  // 0 -> Z/2 -> Z/4 -> Z/2 -> 0 over Z/4
  auto z4 = zmod_ring(4);
  auto a = zmod_module(z4, 2), b = free_module(z4, 1), c = zmod_module(z4, 2);
  Mat i(1, 1), p(1, 1);
  i(0, 0) = 2;
  p(0, 0) = 1;
  ASSERT_TRUE(is_linear(a, b, i));
  ASSERT_TRUE(is_linear(b, c, p));
  EXPECT_EQ(b.size(), a.size() * c.size());
  Mat pd = char_dual_map(b, c, p), id = char_dual_map(a, b, i);
  auto cd = char_dual(c), bd = char_dual(b), ad = char_dual(a);
  EXPECT_TRUE(kernel_of(cd, bd, pd).module.is_zero());
  EXPECT_TRUE(cokernel_of(ad, id).module.is_zero());
  EXPECT_EQ(homology_at(bd, ad, pd, id).module.size(), 1);
}

TEST(Adjunction, HomTensorOrders) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    auto r = catalog_ring(catalog_names()[rng() % catalog_names().size()]);
    auto m = random_module(r, rng), n = random_module(r, rng);
    auto e = dualizing_data(r)->sum.module;
    EXPECT_EQ(hom(tensor(m, n).module, e).module.size(), hom(m, hom(n, e).module).module.size());
  }
}
