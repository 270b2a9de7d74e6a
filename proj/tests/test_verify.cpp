#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "cosupp/verify.hpp"

using namespace cosupp;
using namespace cosupp::verify;

TEST(Generate, Deterministic) {
  auto a = instance_to_json(generate_instance(1));
  auto b = instance_to_json(generate_instance(1));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_NE(a.dump(), instance_to_json(generate_instance(2)).dump());
}

TEST(Generate, CapsRespected) {
  Profile p;
  p.module_cap = 16;
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto in = generate_instance(s, p);
    for (int n = in.c.lo(); !in.c.empty() && n <= in.c.hi(); ++n) EXPECT_LE(in.c.at(n).size(), 16) << s;
    EXPECT_LE(in.c.hi() - in.c.lo() + 1, 5);
    EXPECT_TRUE(is_valid(in.c));
  }
  p.module_cap = 4096;
  EXPECT_THROW(generate_instance(0, p), InputError);
}

TEST(Generate, CatalogCoverageAndMultiHomology) {
  std::set<std::string> rings;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Rng g(s);
    rings.insert(pick_ring(Profile{}, g));
  }
  EXPECT_GE(rings.size(), 8u);
  std::size_t multi = 0;
  for (std::uint64_t s = 0; s < 100; ++s) multi += homology_degrees(generate_instance(s).c) >= 2;
  EXPECT_GE(multi, 30u);
}

TEST(Registry, SelectAndUnknown) {
  EXPECT_EQ(select("all").size(), registry().size());
  EXPECT_EQ(select("P-ThmA,P-Dual").size(), 2u);
  EXPECT_TRUE(select("").empty());
  EXPECT_THROW(select("P-Nope"), InputError);
}

TEST(Registry, ExpectedVerdicts) {
  auto in = generate_instance(17);
  EXPECT_EQ(run_check(find_property("P-ThmA"), in, {}).status, Status::pass);
  // zero complex: both sets empty
  Instance z = in;
  z.c = Complex(in.ring);
  auto nz = run_check(find_property("P-Nonempty"), z, {});
  EXPECT_EQ(nz.status, Status::pass);
  // DVR hull: literal identity flagged
  Instance e = in;
  e.object = dvr::env_obj();
  EXPECT_EQ(run_check(find_property("P-Cor34-literal"), e, {}).status, Status::flagged);
  EXPECT_EQ(run_check(find_property("P-Cor34-minmin"), e, {}).status, Status::pass);
  e.object = dvr::tors_obj(2);
  EXPECT_EQ(run_check(find_property("P-Cor34-literal"), e, {}).status, Status::pass);
}

TEST(Suite, SmallRunIsGreenAndDeterministic) {
  SuiteConfig cfg;
  cfg.first = 0;
  cfg.last = 5;
  cfg.jobs = 2;
  auto a = run_suite(cfg);
  for (const auto& v : a.verdicts)
    EXPECT_NE(v.outcome.status, Status::fail) << v.property << " seed " << v.seed << " " << v.outcome.details.dump();
  cfg.jobs = 1;
  auto b = run_suite(cfg);
  std::ostringstream sa, sb;
  write_jsonl(sa, a, false);
  write_jsonl(sb, b, false);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Suite, EmptySubset) {
  SuiteConfig cfg;
  cfg.suite = "";
  cfg.last = 3;
  auto r = run_suite(cfg);
  EXPECT_TRUE(r.verdicts.empty());
  EXPECT_TRUE(r.ok());
}

TEST(Shrink, InjectedFaultShrinksToOneModuleOverLocalRing) {
  Options fault;
  fault.fault_wrong_v = true;
  const Property& p = find_property("P-VAnn");
  // find a failing instance over a non-local ring
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto in = generate_instance(s);
    if (in.ring->is_local() || homology_degrees(in.c) < 2) continue;
    if (run_check(p, in, fault).status != Status::fail) continue;
    auto small = shrink(p, in, fault);
    EXPECT_EQ(run_check(p, small, fault).status, Status::fail);
    EXPECT_TRUE(small.ring->is_local());
    EXPECT_EQ(small.c.hi(), small.c.lo());
    // already minimal: unchanged
    auto again = shrink(p, small, fault);
    EXPECT_EQ(instance_to_json(again).dump(), instance_to_json(small).dump());
    return;
  }
  FAIL() << "no failing instance found";
}

TEST(Shrink, QuotientComplexIsValid) {
  auto in = generate_instance(3);
  for (std::size_t p = 0; p < in.ring->spectrum().size(); ++p)
    EXPECT_TRUE(is_valid(quotient_complex(in.c, in.ring->spectrum()[p].ideal)));
}
