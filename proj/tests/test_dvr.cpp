#include <gtest/gtest.h>

#include "cosupp/dvr.hpp"

using namespace cosupp;
using namespace cosupp::dvr;

TEST(DvrParse, RoundTrip) {
  auto o = parse("R + 2*E + T(3) + K");
  EXPECT_EQ(o.free, 1u);
  EXPECT_EQ(o.env, 2u);
  EXPECT_EQ(o.frac, 1u);
  EXPECT_EQ(o.tors.at(3), 1u);
  EXPECT_EQ(parse(to_string(o)), o);
  EXPECT_TRUE(parse("0").is_zero());
  EXPECT_EQ(to_string(parse("0")), "0");
  EXPECT_EQ(parse(" T( 2 )+T(2) ").tors.at(2), 2u);
}

TEST(DvrParse, Rejects) {
  for (const char* bad : {"", "R +", "X", "T(0)", "T(", "2 E", "R E", "T(x)"}) EXPECT_THROW(parse(bad), InputError) << bad;
}

TEST(DvrTable, ResidueFieldsAndHull) {
  // k(m) = T(1), k((0)) = K
  EXPECT_EQ(support(free_obj(), Kind::cosupp), PointSet{max});
  EXPECT_EQ(support(free_obj(), Kind::supp), kSpec);
  EXPECT_EQ(support(tors_obj(1), Kind::cosupp), PointSet{max});
  EXPECT_EQ(support(tors_obj(1), Kind::supp), PointSet{max});
  EXPECT_EQ(support(frac_obj(), Kind::cosupp), PointSet{zero});
  EXPECT_EQ(support(frac_obj(), Kind::supp), PointSet{zero});
  EXPECT_EQ(support(env_obj(), Kind::supp), PointSet{max});
  EXPECT_EQ(support(env_obj(), Kind::cosupp), up_to(Point::max));
}

TEST(DvrTable, Additivity) {
  auto o = parse("R + E");
  for (auto k : {Kind::Supp, Kind::supp, Kind::coSupp, Kind::cosupp, Kind::Ass, Kind::Coass})
    EXPECT_EQ(support(o, k), support(free_obj(), k) | support(env_obj(), k));
  EXPECT_EQ(support(Object{}, Kind::cosupp), 0u);
}

TEST(DvrDual, Table) {
  EXPECT_EQ(dual(free_obj()), env_obj());
  EXPECT_EQ(dual(tors_obj(3)), tors_obj(3));
  EXPECT_EQ(dual(env_obj()), free_obj());
  EXPECT_THROW(dual(frac_obj()), InputError);
}

TEST(DvrDual, Consistency) {
  for (const auto& [name, o] : alphabet()) {
    EXPECT_TRUE((support(o, Kind::cosupp) & ~support(o, Kind::coSupp)) == 0) << name;
    EXPECT_EQ(strict_subset(support(o, Kind::cosupp), support(o, Kind::coSupp)), name == "K") << name;
    if (o.frac) continue;
    auto d = dual(o);
    EXPECT_EQ(support(o, Kind::cosupp), support(d, Kind::supp)) << name;
    EXPECT_EQ(support(o, Kind::coSupp), support(d, Kind::Supp)) << name;
    EXPECT_EQ(support(o, Kind::Coass), support(d, Kind::Ass)) << name;
  }
}

TEST(DvrDemo, Strictness) {
  auto r = demo("strictness");
  EXPECT_TRUE(r.ok());
  ASSERT_GE(r.checks.size(), 3u);
  EXPECT_EQ(r.checks[0].detail, "cosupp R = {m} ⊊ {(0),m} = supp R");
  EXPECT_EQ(r.checks[1].detail, "supp E = {m} ⊊ {(0),m} = cosupp E");
}

TEST(DvrDemo, Cor34LiteralFailsOnHullOnly) {
  auto r = demo("cor34");
  EXPECT_TRUE(r.ok());
  for (const auto& c : r.checks) {
    if (c.label == "literal E") EXPECT_FALSE(c.holds);
    else EXPECT_TRUE(c.holds) << c.label;
  }
}

TEST(DvrDemo, MaxMin) {
  auto r = demo("maxmin");
  EXPECT_TRUE(r.ok());
  for (const auto& c : r.checks) EXPECT_TRUE(c.holds) << c.label;
  EXPECT_THROW(demo("nope"), InputError);
}
