#include <gtest/gtest.h>

#include "fpbasis/molecule.hpp"
#include "fpbasis/verify/random.hpp"

using namespace fpbasis;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }
Point pt(const char* a) { return Point{dy(a)}; }
Point pt(const char* a, const char* b) { return Point{dy(a), dy(b)}; }

Molecule random_full(verify::Rng& rng, std::size_t d, std::size_t terms, long long span = 32, int log2 = -3) {
  Molecule m(Space::full(d));
  for (std::size_t i = 0; i < terms; ++i)
    m.accumulate(verify::random_point(rng, d, -span, span, log2), verify::random_rational(rng));
  return m;
}

}  // namespace

TEST(Molecule, Canonicalize) {
  const Space s = Space::full(1);
  EXPECT_TRUE(Molecule::canonicalize({{pt("1/2"), 2}, {pt("1/2"), -2}}, s).empty());
  EXPECT_TRUE(Molecule::canonicalize({{pt("0"), 5}}, s).empty());
  const auto m = Molecule::canonicalize({{pt("1"), 1}, {pt("2"), 1}, {pt("1"), 3}}, s);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.coefficient(pt("1")), 4);
  EXPECT_EQ(m.coefficient(pt("2")), 1);
  EXPECT_THROW(Molecule::canonicalize({{pt("2"), 1}}, Space::unit_cube(1)), DomainError);
  EXPECT_THROW(Molecule::canonicalize({{pt("2"), 1}}, Space::ball(1, dy("3/2"))), DomainError);
  EXPECT_THROW(Molecule::canonicalize({{pt("1", "1"), 1}}, s), DomainError);
}

TEST(Molecule, FiniteSpaceBase) {
  const Space s = Space::finite({pt("0"), pt("1"), pt("2")}, pt("1"));
  const auto m = Molecule::canonicalize({{pt("0"), 1}, {pt("1"), 7}}, s);
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.coefficient(pt("0")), 1);
  EXPECT_THROW(Space::finite({pt("0")}, pt("1")), DomainError);
}

TEST(Molecule, LinearStructure) {
  const Space s = Space::full(2);
  const auto x = Molecule::delta(s, pt("1", "1/2"));
  EXPECT_TRUE(add(x, scale(-1, x)).empty());
  EXPECT_TRUE(scale(0, x).empty());
  EXPECT_EQ((x + x).coefficient(pt("1", "1/2")), 2);
  EXPECT_THROW(add(x, Molecule(Space::full(1))), DomainError);
  EXPECT_THROW(add(x, Molecule(Space::unit_cube(2))), DomainError);
}

TEST(Molecule, Pushforward) {
  const auto m = Molecule::canonicalize({{pt("1/2"), 1}, {pt("1"), Rational(-3, 2)}}, Space::unit_cube(1));
  const auto inc = include_into(m, Space::full(1));
  EXPECT_EQ(inc.terms(), m.terms());
  EXPECT_EQ(inc.space().kind(), SpaceKind::FullSpace);

  TabulatedMap id(Space::unit_cube(1), Space::full(1), [](const Point& p) { return p; });
  EXPECT_EQ(pushforward(id, m), inc);

  EXPECT_EQ(clamp_linearized(m, dy("1")).terms(), m.terms());

  const auto opp = Molecule::canonicalize({{pt("2"), 1}, {pt("3"), -1}}, Space::full(1));
  TabulatedMap collapse(Space::full(1), Space::full(1), [](const Point& p) {
    return p.is_origin() ? p : pt("1");
  });
  EXPECT_TRUE(pushforward(collapse, opp).empty());

  EXPECT_THROW(TabulatedMap(Space::full(1), Space::full(1), [](const Point&) { return pt("1"); }), DomainError);
}

TEST(Molecule, PushforwardIsLinear) {
  verify::Rng rng(21);
  TabulatedMap f(Space::full(2), Space::full(2), [](const Point& x) {
    return Point{x[0] * x[1], abs(x[0])};
  });
  for (int s = 0; s < 100; ++s) {
    const auto a = random_full(rng, 2, 5), b = random_full(rng, 2, 5);
    EXPECT_EQ(pushforward(f, a + b), pushforward(f, a) + pushforward(f, b));
  }
}

TEST(Molecule, Retract) {
  const GridSpec g(1, 0);
  const Space s = Space::full(1);
  EXPECT_EQ(retract(Molecule::delta(s, pt("3")), g), Molecule::delta(s, pt("3")));
  const auto r = retract(Molecule::delta(s, pt("1/4")), g);
  EXPECT_EQ(r.size(), 1u);
  EXPECT_EQ(r.coefficient(pt("1")), Rational(1, 4));
}

TEST(Molecule, RetractMassAndIdempotence) {
  verify::Rng rng(4);
  for (std::size_t d = 1; d <= 3; ++d)
    for (int s = 0; s < 60; ++s) {
      const auto m = random_full(rng, d, 6);
      const GridSpec grid(d, static_cast<int>(rng.uniform(-2, 1)));
      const auto r = retract(m, grid);
      // Mass lost to the base point is exactly the weight Lambda(0, .) carries.
      Rational to_base;
      for (const auto& [x, a] : m.terms()) to_base += a * lambda(Point::origin(d), x, grid).to_rational();
      EXPECT_EQ(r.mass() + to_base, m.mass());
      EXPECT_EQ(retract(r, grid), r);
      for (const auto& [v, a] : r.terms()) EXPECT_TRUE(grid_snap(v, grid));
      // Refinement: coarse retract after a finer one equals coarse retract.
      const GridSpec coarse(d, grid.log2_mesh() + static_cast<int>(rng.uniform(1, 2)));
      EXPECT_EQ(retract(r, coarse), retract(m, coarse));
    }
}

TEST(Molecule, Clamp) {
  const Space s1 = Space::full(1), s2 = Space::full(2);
  const auto c = clamp_linearized(Molecule::delta(s1, pt("3")), dy("1"));
  EXPECT_EQ(c.coefficient(pt("1")), 1);
  EXPECT_EQ(c.space().kind(), SpaceKind::Ball);
  EXPECT_EQ(clamp_linearized(Molecule::delta(s2, pt("3", "1/2")), dy("1")).terms(),
            Molecule::delta(s2, pt("1", "1/2")).terms());
  EXPECT_THROW(clamp_linearized(Molecule::delta(s1, pt("3")), dy("0")), DomainError);
}

TEST(Molecule, ClampCommutesWithRetract) {
  verify::Rng rng(8);
  for (std::size_t d = 1; d <= 2; ++d)
    for (int s = 0; s < 100; ++s) {
      const auto m = random_full(rng, d, 6, 40);
      const int log2 = static_cast<int>(rng.uniform(-2, 0));
      const DyadicRational t = DyadicRational(rng.uniform(1, 8)).ldexp(log2);
      const GridSpec grid(d, log2);
      EXPECT_EQ(clamp_linearized(retract(m, grid), t), retract(clamp_linearized(m, t), grid));
    }
}

TEST(Molecule, Project) {
  const GridSpec g(1, 0);
  const Space s = Space::full(1);
  EXPECT_EQ(project(Molecule::delta(s, pt("5/2")), dy("1"), g), Molecule::delta(s, pt("1")));
  const auto on = Molecule::canonicalize({{pt("1"), 3}, {pt("-1"), Rational(1, 3)}}, s);
  EXPECT_EQ(project(on, dy("1"), g), on);
  EXPECT_THROW(project(on, dy("1/2"), g), DomainError);
}

TEST(Molecule, ProjectionAlgebra) {
  verify::Rng rng(12);
  for (std::size_t d = 1; d <= 2; ++d)
    for (int s = 0; s < 60; ++s) {
      const auto m = random_full(rng, d, 5, 48, -4);
      const int lr = static_cast<int>(rng.uniform(-2, 0));
      const int lr2 = lr - static_cast<int>(rng.uniform(0, 2));  // R' divides R
      const DyadicRational t = DyadicRational(rng.uniform(1, 3)).ldexp(lr + static_cast<int>(rng.uniform(0, 1)));
      const DyadicRational t2 = t + DyadicRational(rng.uniform(0, 4)).ldexp(lr2);
      const GridSpec g(d, lr), g2(d, lr2);
      const auto p = project(m, t, g);
      EXPECT_EQ(project(p, t, g), p);
      EXPECT_EQ(project(project(m, t2, g2), t, g), p);
      EXPECT_EQ(project(p, t2, g2), p);
    }
}

TEST(Molecule, Pair) {
  const Space s = Space::full(1);
  const auto m = Molecule::delta(s, pt("3/2"));
  std::map<Point, Rational> zero{{pt("0"), 0}, {pt("3/2"), 0}};
  EXPECT_EQ(pair(zero, m), 0);
  std::map<Point, Rational> dist{{pt("0"), 0}, {pt("3/2"), Rational(3, 2)}};
  EXPECT_EQ(pair(dist, m), Rational(3, 2));
  EXPECT_THROW(pair({{pt("0"), 0}}, m), DomainError);
  EXPECT_THROW(pair({{pt("0"), 1}, {pt("3/2"), 0}}, m), DomainError);
}
