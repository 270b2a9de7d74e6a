#include <gtest/gtest.h>

#include <random>

#include "cosupp/supports.hpp"

using namespace cosupp;

namespace {

Mat scalar(Int x) {
  Mat m(1, 1);
  m(0, 0) = x;
  return m;
}

FinModule zmod_module(const RingPtr& r, Int m) { return make_module(r, {m}, {scalar(1)}); }

std::size_t prime_of(const Ring& r, Int x) {
  for (std::size_t p = 0; p < r.spectrum().size(); ++p)
    if (r.spectrum()[p].ideal.contains({x})) return p;
  throw std::runtime_error("no prime");
}

Complex two_term(const RingPtr& r) {
  auto f = free_module(r, 1);
  return make_complex(r, {{0, f}, {1, f}}, {{1, scalar(2)}});
}

const std::vector<SupportKind> kKinds = {SupportKind::Supp,   SupportKind::supp,    SupportKind::coSupp,
                                         SupportKind::cosupp, SupportKind::co_supp, SupportKind::Co_supp};
const std::vector<Route> kRoutes = {Route::definitional, Route::dual, Route::homology};

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

TEST(Supports, CosuppOfZ12IsMax) {
  auto r = zmod_ring(12);
  auto c = module_complex(free_module(r, 1));
  auto s = support_set(c, SupportKind::cosupp, kRoutes, {true, false});
  EXPECT_EQ(s.primes, (PrimeSet{0, 1}));
  EXPECT_EQ(s.primes, maximal(*r, all_primes(*r)));
}

TEST(Supports, CoSuppOfResidueIsVAnn) {
  auto r = zmod_ring(4);
  auto c = module_complex(zmod_module(r, 2));
  auto s = support_set(c, SupportKind::coSupp, kRoutes);
  EXPECT_EQ(s.primes, PrimeSet{0});
  EXPECT_EQ(s.primes, vlocus(*r, ann_complex(c)));
}

TEST(Supports, AllKindsAgreeOnTwoTerm) {
  auto r = zmod_ring(4);
  auto c = two_term(r);
  for (auto k : kKinds) EXPECT_EQ(support_set(c, k, kRoutes, {true, false}).primes, PrimeSet{0}) << kind_name(k);
}

TEST(Supports, ZeroComplexHasEmptySupports) {
  auto r = zmod_ring(6);
  auto f = free_module(r, 1);
  auto c = make_complex(r, {{0, f}, {1, f}}, {{1, scalar(1)}});
  for (auto k : kKinds) EXPECT_TRUE(support_set(c, k, kRoutes).primes.empty());
}

TEST(Supports, PrimaryPartsAreSeparated) {
  auto r = zmod_ring(6);
  auto c = module_complex(zmod_module(r, 3));
  PrimeSet three{prime_of(*r, 3)};
  for (auto k : kKinds) EXPECT_EQ(support_set(c, k, kRoutes).primes, three) << kind_name(k);
}

TEST(Supports, RoutesAgreeOnRandomComplexes) {
  std::mt19937_64 rng(7);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    if (r->dim() != 1) continue;
    for (int t = 0; t < 4; ++t) {
      auto c = random_scalar_complex(r, rng);
      for (auto k : kKinds) EXPECT_NO_THROW(support_set(c, k, kRoutes)) << name << " " << kind_name(k);
    }
  }
}

TEST(Supports, DisagreementIsReported) {
  RouteDisagreement e("coSupp", {{{0}, "coSupp", "definitional"}, {{}, "coSupp", "dual"}});
  EXPECT_NE(std::string(e.what()).find("definitional={0}"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("dual={}"), std::string::npos);
}

TEST(Supports, ParseNames) {
  EXPECT_EQ(parse_kind("co_supp"), SupportKind::co_supp);
  EXPECT_EQ(parse_kind("Co-supp"), SupportKind::Co_supp);
  EXPECT_THROW(parse_kind("bogus"), InputError);
  EXPECT_EQ(parse_route("dual"), Route::dual);
  EXPECT_THROW(parse_route("x"), InputError);
}

TEST(AssCoass, CoassOfZ3OverZ6) {
  auto r = zmod_ring(6);
  auto b = ass_coass(module_complex(zmod_module(r, 3)), PrimeFamily::Coass);
  EXPECT_EQ(b.primes, PrimeSet{prime_of(*r, 3)});
  // W is the union of the primes: {0, 3}
  EXPECT_EQ(b.elements.size(), 2u);
}

TEST(AssCoass, AssOfTwoTermIsTopHomology) {
  auto r = zmod_ring(4);
  auto b = ass_coass(two_term(r), PrimeFamily::ass);
  EXPECT_EQ(b.primes, PrimeSet{0});
  // zero divisors on Z/2: 0 and 2
  EXPECT_EQ(b.elements, (std::vector<std::size_t>{0, 2}));
}

TEST(AssCoass, ZeroComplexIsEmpty) {
  auto r = zmod_ring(4);
  Complex z(r);
  for (auto f : {PrimeFamily::Ass, PrimeFamily::ass, PrimeFamily::Coass, PrimeFamily::coass})
    EXPECT_TRUE(ass_coass(z, f).primes.empty());
}

TEST(AssCoass, CoassContainedInCoassBig) {
  std::mt19937_64 rng(11);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    if (r->dim() != 1) continue;
    for (int t = 0; t < 3; ++t) {
      auto c = random_scalar_complex(r, rng);
      auto small = ass_coass(c, PrimeFamily::coass).primes;
      auto big = ass_coass(c, PrimeFamily::Coass).primes;
      EXPECT_TRUE(set_subset(small, big)) << name;
      EXPECT_TRUE(set_subset(ass_coass(c, PrimeFamily::ass).primes, ass_coass(c, PrimeFamily::Ass).primes)) << name;
    }
  }
}

TEST(DepthWidth, ResidueField) {
  auto r = zmod_ring(4);
  auto dw = depth_width(module_complex(zmod_module(r, 2)), 0, {true, false});
  ASSERT_TRUE(dw.depth && dw.width);
  EXPECT_EQ(*dw.depth, 0);
  EXPECT_EQ(*dw.width, 0);
  auto z = depth_width(Complex(r), 0);
  EXPECT_FALSE(z.depth);
  EXPECT_FALSE(z.width);
  EXPECT_THROW(depth_width(Complex(r), 5), InputError);
}

TEST(DepthWidth, ShiftMovesBoth) {
  auto r = zmod_ring(4);
  auto dw = depth_width(module_complex(zmod_module(r, 2), 3), 0);
  EXPECT_EQ(*dw.depth, -3);
  EXPECT_EQ(*dw.width, 3);
}

TEST(Ann, Examples) {
  auto r4 = zmod_ring(4);
  EXPECT_TRUE(ideal_equal(ann_complex(two_term(r4)), make_ideal(*r4, {{2}})));
  EXPECT_TRUE(ideal_equal(ann_complex(module_complex(free_module(r4, 1))), zero_ideal(*r4)));
  auto r6 = zmod_ring(6);
  auto k = direct_sum(zmod_module(r6, 2), zmod_module(r6, 3));
  EXPECT_TRUE(ideal_equal(ann_complex(module_complex(k)), zero_ideal(*r6)));
}

TEST(BruteForce, Examples) {
  auto r4 = zmod_ring(4);
  auto b = coass_bruteforce(free_module(r4, 1));
  EXPECT_EQ(b.coass, PrimeSet{0});
  EXPECT_EQ(b.submodules, 3u);
  EXPECT_TRUE(coass_bruteforce(zero_module(r4)).coass.empty());
  auto r6 = zmod_ring(6);
  auto k = direct_sum(zmod_module(r6, 2), zmod_module(r6, 3));
  EXPECT_EQ(coass_bruteforce(k).coass, (PrimeSet{0, 1}));
}

TEST(BruteForce, MatchesDualRouteOnCatalog) {
  std::mt19937_64 rng(3);
  for (const auto& name : catalog_names()) {
    auto r = catalog_ring(name);
    std::vector<FinModule> mods = {free_module(r, 1)};
    for (std::size_t p = 0; p < r->spectrum().size(); ++p) {
      mods.push_back(residue_field(r, p));
      mods.push_back(injective_envelope(r, p).module);
    }
    for (const auto& m : mods) {
      if (m.size() > kMaxEnumeratedModule) continue;
      auto b = coass_bruteforce(m);
      auto c = module_complex(m);
      EXPECT_EQ(b.coass, ass_coass(c, PrimeFamily::Coass).primes) << name << " " << describe(m);
      EXPECT_EQ(b.cosupp_yassemi, support_set(c, SupportKind::coSupp, {Route::definitional}).primes) << name;
    }
  }
}

TEST(BruteForce, CapEnforced) {
  auto r = zmod_ring(4);
  EXPECT_THROW(coass_bruteforce(free_module(r, 5)), InputError);
}

TEST(Nakayama, Examples) {
  auto r4 = zmod_ring(4);
  auto res = nakayama_check(make_ideal(*r4, {{2}}), module_complex(zmod_module(r4, 2)));
  EXPECT_TRUE(res.coass_meets_max);
  EXPECT_TRUE(res.tensor_nonzero);
  EXPECT_TRUE(res.holds());
  auto zero = nakayama_check(zero_ideal(*r4), two_term(r4));
  EXPECT_TRUE(zero.tensor_nonzero && zero.rhom_nonzero);
  auto r6 = zmod_ring(6);
  auto z6 = nakayama_check(zero_ideal(*r6), module_complex(zmod_module(r6, 2)));
  EXPECT_TRUE(z6.coass_meets_max && z6.tensor_nonzero && z6.holds());
  EXPECT_THROW(nakayama_check(make_ideal(*r6, {{2}}), module_complex(zmod_module(r6, 2))), InputError);
}

TEST(Clauses, SmallCosupportClausesAgree) {
  std::mt19937_64 rng(5);
  for (const auto& name : {"z4", "z6", "z12", "f2x2"}) {
    auto r = catalog_ring(name);
    for (int t = 0; t < 2; ++t) {
      Complex c = r->dim() == 1 ? random_scalar_complex(r, rng) : module_complex(free_module(r, 1));
      auto base = clause_set(c, 1, true);
      for (int k = 2; k <= 9; ++k) EXPECT_EQ(clause_set(c, k, true), base) << name << " clause " << k;
      for (int k = 1; k <= 4; ++k)
        EXPECT_EQ(clause_set(c, k, false), support_set(c, SupportKind::coSupp, {Route::definitional}).primes)
            << name << " clause " << k;
    }
  }
}

TEST(Clauses, FaultBreaksVAnn) {
  auto r = zmod_ring(4);
  auto c = two_term(r);
  EXPECT_EQ(v_ann(c), PrimeSet{0});
  EXPECT_TRUE(v_ann(c, {false, true}).empty());
}
