#include <gtest/gtest.h>

#include <set>

#include "cosupp/linalg.hpp"

using namespace cosupp;

TEST(Linalg, ExtGcdBezout) {
  for (Int a = -20; a <= 20; ++a)
    for (Int b = -20; b <= 20; ++b) {
      auto e = ext_gcd(a, b);
      EXPECT_EQ(e.g, std::gcd(a, b));
      EXPECT_EQ(e.s * a + e.t * b, e.g);
    }
}

TEST(Linalg, InverseMod) {
  EXPECT_EQ(inv_mod(3, 7), 5);
  EXPECT_EQ(inv_mod(5, 12), 5);
}

TEST(Linalg, SmithIsUnimodularFactorization) {
  const Int n = 12;
  Mat a(3, 4);
  a.data = {2, 4, 6, 3, 0, 6, 9, 1, 4, 8, 0, 10};
  auto s = smith(a, n);
  Mat d = mul(mul(s.U, a, n), s.V, n);
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t j = 0; j < d.cols; ++j)
      if (i != j) EXPECT_EQ(d(i, j), 0) << i << "," << j;
  EXPECT_EQ(mul(s.U, s.Uinv, n), Mat::identity(3));
  // invariant factors divide one another after reduction by gcd with n
  for (std::size_t t = 0; t + 1 < s.diag.size(); ++t) {
    Int x = std::gcd(s.diag[t], n), y = std::gcd(s.diag[t + 1], n);
    EXPECT_EQ(y % x, 0);
  }
}

TEST(Linalg, KernelOfMultiplicationByTwoOnZ12) {
  Mat a(1, 1);
  a(0, 0) = 2;
  Mat k = kernel(a, 12);
  ASSERT_EQ(k.rows, 1u);
  // kernel is {0, 6}
  std::set<Int> vals;
  for (Int c = 0; c < 12; ++c)
    for (std::size_t j = 0; j < k.cols; ++j) vals.insert(mod(c * k(0, j), 12));
  EXPECT_EQ(vals, (std::set<Int>{0, 6}));
}

TEST(Linalg, SolveFindsSolutionsAndRejectsInconsistent) {
  Mat a(2, 2);
  a.data = {2, 0, 0, 3};
  auto x = solve(a, {4, 9}, 12);
  ASSERT_TRUE(x);
  EXPECT_EQ(mul(a, *x, 12), (Vec{4, 9}));
  EXPECT_FALSE(solve(a, {1, 0}, 12));
}

TEST(Linalg, QuotientInvariantFactors) {
  // Z^2/(2e1, 6e2) over Z/12 has invariant factors (2, 6)
  Mat rel(2, 2);
  rel.data = {2, 0, 0, 6};
  auto q = present_quotient(rel, 2, 12);
  EXPECT_EQ(q.orders, (Vec{2, 6}));
  // Z/4 (+) Z/6 inside Z/12-land: invariant factors 2, 12
  EXPECT_EQ(invariant_factors({4, 6}, 12), (Vec{2, 12}));
}

TEST(Linalg, SubGroupCoordinates) {
  // subgroup of Z/4 (+) Z/2 generated by (2,1)
  Mat span(2, 1);
  span.data = {2, 1};
  auto sg = present_sub({4, 2}, span, 4);
  EXPECT_EQ(sg.orders, (Vec{2}));
  EXPECT_TRUE(sg.contains({2, 1}));
  EXPECT_TRUE(sg.contains({0, 0}));
  EXPECT_FALSE(sg.contains({2, 0}));
  EXPECT_FALSE(sg.contains({1, 0}));
}

TEST(Linalg, GroupOrderSaturates) {
  EXPECT_EQ(group_order({2, 3, 4}), 24);
  EXPECT_EQ(group_order(Vec(80, 2)), INT64_MAX);
}
