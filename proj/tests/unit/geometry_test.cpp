#include <gtest/gtest.h>

#include <cmath>

#include "fpbasis/geometry.hpp"
#include "fpbasis/verify/random.hpp"

using namespace fpbasis;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }

}  // namespace

TEST(Geometry, SupDist) {
  EXPECT_EQ(sup_dist({dy("0"), dy("0")}, {dy("0"), dy("0")}), DyadicRational());
  EXPECT_EQ(sup_dist({dy("1/2"), dy("0")}, {dy("0"), dy("1/4")}), dy("1/2"));
  EXPECT_EQ(sup_dist(Point{dy("3/4")}, Point{dy("-1/4")}), DyadicRational(1));
  EXPECT_THROW(sup_dist(Point{dy("1")}, Point{dy("1"), dy("2")}), DimensionMismatch);
}

TEST(Geometry, L1Dist) {
  EXPECT_EQ(l1_dist({dy("0"), dy("0")}, {dy("0"), dy("0")}), DyadicRational());
  EXPECT_EQ(l1_dist({dy("1/2"), dy("0")}, {dy("0"), dy("1/4")}), dy("3/4"));
  EXPECT_THROW(l1_dist(Point{dy("1")}, Point{dy("1"), dy("2")}), DimensionMismatch);
}

TEST(Geometry, CubesContaining) {
  const GridSpec unit(1, 0);
  auto c = cubes_containing(Point{dy("1/2")}, unit);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].index(), std::vector<BigInt>{0});

  c = cubes_containing(Point{dy("1")}, unit);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].index(), std::vector<BigInt>{0});
  EXPECT_EQ(c[1].index(), std::vector<BigInt>{1});

  c = cubes_containing(Point{dy("0"), dy("0")}, GridSpec(2, 0));
  ASSERT_EQ(c.size(), 4u);
  for (const auto& q : c)
    for (const auto& w : q.index()) EXPECT_TRUE(w == -1 || w == 0);
}

TEST(Geometry, CubesContainingMatchesBruteForce) {
  verify::Rng rng(3);
  for (int log2 : {0, -1, -2}) {
    const GridSpec grid(2, log2);
    for (int s = 0; s < 200; ++s) {
      const Point x = verify::random_point(rng, 2, -12, 12, -3);
      const auto got = cubes_containing(x, grid);
      std::vector<std::vector<BigInt>> brute;
      for (long long a = -20; a <= 20; ++a)
        for (long long b = -20; b <= 20; ++b) {
          Cube q(grid, {BigInt(a), BigInt(b)});
          if (q.contains(x)) brute.push_back(q.index());
        }
      ASSERT_EQ(got.size(), brute.size()) << x;
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].index(), brute[i]);
      for (const auto& q : got) EXPECT_TRUE(q.contains(x));
    }
  }
}

TEST(Geometry, CubeVertices) {
  Cube q(GridSpec(2, -1), {BigInt(1), BigInt(-1)});
  auto v = q.vertices();
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], (Point{dy("1/2"), dy("-1/2")}));
  EXPECT_EQ(v[1], (Point{dy("1/2"), dy("0")}));
  EXPECT_EQ(v[2], (Point{dy("1"), dy("-1/2")}));
  EXPECT_EQ(v[3], (Point{dy("1"), dy("0")}));
  EXPECT_EQ(Cube(GridSpec(3, 0), {0, 0, 0}).vertices().size(), 8u);
}

TEST(Geometry, GridSnap) {
  EXPECT_TRUE(grid_snap(Point{dy("1/2")}, GridSpec(1, -1)));
  EXPECT_FALSE(grid_snap(Point{dy("1/2")}, GridSpec(1, 0)));
  EXPECT_TRUE(grid_snap(Point{dy("3/4"), dy("-1/4")}, GridSpec(2, -2)));
  EXPECT_THROW(GridSpec::from_mesh(1, dy("3/4")), DomainError);
  EXPECT_EQ(GridSpec::from_mesh(1, dy("1/4")).log2_mesh(), -2);
}

TEST(Geometry, LatticeBox) {
  auto box = lattice_box(2, DyadicRational(1), -1);
  EXPECT_EQ(box.size(), 25u);
  EXPECT_EQ(box.front(), (Point{dy("-1"), dy("-1")}));
  EXPECT_EQ(box.back(), (Point{dy("1"), dy("1")}));
  EXPECT_TRUE(std::is_sorted(box.begin(), box.end()));
}

TEST(Geometry, MetricAxiomsAndPTriangle) {
  verify::Rng rng(11);
  for (int s = 0; s < 500; ++s) {
    const Point x = verify::random_point(rng, 3, -64, 64, -4);
    const Point y = verify::random_point(rng, 3, -64, 64, -4);
    const Point z = verify::random_point(rng, 3, -64, 64, -4);
    EXPECT_EQ(sup_dist(x, y), sup_dist(y, x));
    EXPECT_EQ(l1_dist(x, y), l1_dist(y, x));
    EXPECT_EQ(sup_dist(x, x), DyadicRational());
    EXPECT_LE(sup_dist(x, z), sup_dist(x, y) + sup_dist(y, z));
    EXPECT_LE(l1_dist(x, z), l1_dist(x, y) + l1_dist(y, z));
    EXPECT_GE(l1_dist(x, y), sup_dist(x, y));
    for (double p : {1.0, 2.0 / 3.0, 0.5, 0.25}) {
      const double xz = std::pow(sup_dist(x, z).to_double(), p);
      const double xy = std::pow(sup_dist(x, y).to_double(), p);
      const double yz = std::pow(sup_dist(y, z).to_double(), p);
      EXPECT_LE(xz, xy + yz + 1e-12);
    }
  }
}
