#include <gtest/gtest.h>

#include "fpbasis/retraction.hpp"
#include "fpbasis/verify/random.hpp"

using namespace fpbasis;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }
Point pt(const char* a) { return Point{dy(a)}; }

}  // namespace

TEST(Retraction, Images) {
  const Patch unit(GridSpec(1, 0), {{0}});
  EXPECT_EQ(retraction_image(pt("1"), unit), Molecule::delta(unit.vertex_space(), pt("1")));
  EXPECT_TRUE(retraction_image(pt("0"), unit).empty());
  const auto mid = retraction_image(pt("1/2"), unit);
  EXPECT_EQ(mid.size(), 1u);
  EXPECT_EQ(mid.coefficient(pt("1")), Rational(1, 2));
  EXPECT_THROW(retraction_image(pt("3/2"), unit), DomainError);
}

TEST(Retraction, IdentityOnVertices) {
  for (std::size_t d = 1; d <= 2; ++d) {
    const auto patch = Patch::four_cube(d);
    for (const auto& v : patch.vertices())
      EXPECT_EQ(retraction_image(v, patch), Molecule::delta(patch.vertex_space(), v));
  }
}

TEST(Retraction, PatchBase) {
  const Patch shifted(GridSpec(1, 0), {{2}});
  EXPECT_EQ(shifted.base(), pt("2"));
  EXPECT_THROW(Patch(GridSpec(1, 0), {{0}}, pt("5")), DomainError);
  EXPECT_THROW(Patch(GridSpec(1, 0), {}), DomainError);
  EXPECT_EQ(Patch::four_cube(2).vertices().size(), 9u);
  EXPECT_EQ(Patch::four_cube(1).vertices().size(), 5u);
}

TEST(Retraction, ProbeNormsAgreeWithExactNorm) {
  const auto patch = Patch::four_cube(2);
  verify::Rng rng(51);
  std::vector<Point> others;
  for (const auto& v : patch.vertices())
    if (!(v == patch.base())) others.push_back(v);
  const GroundSet ground(patch.base(), others);
  for (int s = 0; s < 10; ++s) {
    const Point x = verify::random_point(rng, 2, 0, 16, -3), y = verify::random_point(rng, 2, 0, 16, -3);
    const auto diff = retraction_image(x, patch) - retraction_image(y, patch);
    EXPECT_NEAR(exact_norm_dp(diff, ground, 0.5), exact_norm(diff, ground, 0.5).value, 1e-12);
  }
}

TEST(Retraction, ProbeWithinBounds) {
  for (std::size_t d = 1; d <= 2; ++d)
    for (double p : {1.0, 2.0 / 3.0, 0.5}) {
      ProbeOptions opt;
      opt.mesh_log2 = d == 1 ? -4 : -2;
      const auto rep = lipschitz_probe(Patch::four_cube(d), p, opt);
      EXPECT_GT(rep.samples, 0u);
      EXPECT_TRUE(rep.within_envelope()) << rep.measured_max << " > " << rep.envelope;
      EXPECT_LE(rep.within_cube_max_excess, 1e-9);
      EXPECT_GT(rep.within_cube_pairs, 0u);
      EXPECT_GE(rep.measured_max, 1.0 - 1e-12);  // r is the identity on V
    }
}

TEST(Retraction, SinglePairWithinCubeD1) {
  // Same cell, p = 1: ||r(x) - r(y)|| = |x - y| on one cell of the line.
  const Patch unit(GridSpec(1, 0), {{0}});
  ProbeOptions opt;
  opt.mesh_log2 = -3;
  const auto rep = lipschitz_probe(unit, 1.0, opt);
  EXPECT_NEAR(rep.measured_max, 1.0, 1e-12);
}

TEST(Retraction, SampledProbeIsDeterministic) {
  ProbeOptions opt;
  opt.mesh_log2 = -3;
  opt.max_pairs = 500;
  opt.seed = 5;
  const auto a = lipschitz_probe(Patch::four_cube(2), 0.5, opt);
  const auto b = lipschitz_probe(Patch::four_cube(2), 0.5, opt);
  EXPECT_EQ(a.samples, 500u);
  EXPECT_EQ(a.measured_max, b.measured_max);
  EXPECT_EQ(a.argmax_x, b.argmax_x);
}
