#include <gtest/gtest.h>

#include "fpbasis/interpolation.hpp"
#include "fpbasis/verify/random.hpp"

using namespace fpbasis;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }

}  // namespace

TEST(Hat, Values) {
  EXPECT_EQ(hat(dy("0"), 0), DyadicRational(1));
  EXPECT_EQ(hat(dy("1/2"), 1), dy("1/2"));
  EXPECT_EQ(hat(dy("1/4"), 5), DyadicRational());
  EXPECT_EQ(hat(dy("1/4"), 0), dy("3/4"));
  EXPECT_EQ(hat(dy("1/4"), -1), DyadicRational());
  EXPECT_THROW(hat(dy("5/4"), 0), DomainError);
  EXPECT_THROW(hat(dy("-1/4"), 1), DomainError);
}

TEST(Lambda, WorkedValues) {
  const GridSpec g1(1, 0), g2(2, 0);
  EXPECT_EQ(lambda(Point{dy("0")}, Point{dy("1/2")}, g1), dy("1/2"));
  EXPECT_EQ(lambda(Point{dy("1")}, Point{dy("1")}, g1), DyadicRational(1));
  EXPECT_EQ(lambda(Point{dy("1"), dy("1")}, Point{dy("1/2"), dy("1/4")}, g2), dy("1/8"));
  EXPECT_THROW(lambda(Point{dy("1/2")}, Point{dy("1/2")}, g1), DomainError);
}

TEST(Lambda, Weights) {
  const GridSpec g1(1, 0);
  auto w = lambda_weights(Point{dy("1/4")}, g1);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w.at(Point{dy("0")}), dy("3/4"));
  EXPECT_EQ(w.at(Point{dy("1")}), dy("1/4"));

  w = lambda_weights(Point{dy("3/2"), dy("-2")}, GridSpec(2, -1));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.begin()->second, DyadicRational(1));
}

TEST(Lambda, WeightsSumToOneAndMatchPointwise) {
  verify::Rng rng(5);
  for (std::size_t d = 1; d <= 3; ++d)
    for (int log2 : {0, -1, -2})
      for (int s = 0; s < 100; ++s) {
        const GridSpec grid(d, log2);
        const Point x = verify::random_point(rng, d, -40, 40, -5);
        const auto w = lambda_weights(x, grid);
        EXPECT_LE(w.size(), std::size_t{1} << d);
        DyadicRational total;
        for (const auto& [v, c] : w) {
          total += c;
          EXPECT_EQ(lambda(v, x, grid), c);
          EXPECT_GT(c, DyadicRational());
        }
        EXPECT_EQ(total, DyadicRational(1));
        // Every vertex of the containing cubes not in the map has weight 0.
        for (const auto& q : cubes_containing(x, grid))
          for (const auto& v : q.vertices()) {
            if (!w.count(v)) {
              EXPECT_EQ(lambda(v, x, grid), DyadicRational());
            }
          }
      }
}

TEST(Lambda, WellDefinedAcrossCubes) {
  const GridSpec grid(2, -1);
  for (long long a = -4; a <= 4; ++a)
    for (long long b = -4; b <= 4; ++b) {
      const Point x{DyadicRational(a).ldexp(-2), DyadicRational(b).ldexp(-2)};
      const auto cubes = cubes_containing(x, grid);
      for (const auto& q : cubes)
        for (const auto& v : cubes.front().vertices())
          EXPECT_EQ(lambda_via_cube(v, x, q), lambda(v, x, grid)) << x << " " << v;
    }
}

TEST(Lambda, ProductLipschitzBound) {
  verify::Rng rng(9);
  for (std::size_t d = 1; d <= 4; ++d)
    for (int s = 0; s < 200; ++s) {
      const Point x = verify::random_point(rng, d, 0, 64, -6);
      const Point y = verify::random_point(rng, d, 0, 64, -6);
      DyadicRational px(1), py(1);
      for (std::size_t i = 0; i < d; ++i) {
        px *= x[i];
        py *= y[i];
      }
      EXPECT_LE(abs(px - py), l1_dist(x, y));
    }
}
