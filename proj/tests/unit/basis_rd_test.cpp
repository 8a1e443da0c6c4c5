#include <gtest/gtest.h>

#include "fpbasis/basis_rd.hpp"
#include "fpbasis/verify/random.hpp"

using namespace fpbasis;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }
Point pt(const char* a) { return Point{dy(a)}; }
Point pt(const char* a, const char* b) { return Point{dy(a), dy(b)}; }

const CutoffSequence kDefault = CutoffSequence::linear(2);

Molecule random_rd_molecule(verify::Rng& rng, std::size_t d, int depth, const CutoffSequence& k, std::size_t terms) {
  Molecule m(Space::full(d));
  const long long r = k.at(depth) << depth;
  for (std::size_t i = 0; i < terms; ++i)
    m.accumulate(verify::random_point(rng, d, -r, r, -depth), verify::random_rational(rng));
  return m;
}

}  // namespace

TEST(Cutoffs, Parse) {
  const auto lin = CutoffSequence::parse("linear:+2");
  EXPECT_EQ(lin.at(-1), 1);
  EXPECT_EQ(lin.at(0), 2);
  EXPECT_EQ(lin.at(5), 7);
  const auto list = CutoffSequence::parse("1,3,4");
  EXPECT_EQ(list.at(0), 3);
  EXPECT_THROW(list.at(2), DomainError);
  EXPECT_EQ(list.describe(), "1,3,4");
  EXPECT_THROW(CutoffSequence::parse("1,1,2"), DomainError);
  EXPECT_THROW(CutoffSequence::parse("0,1,2"), DomainError);
  EXPECT_THROW(CutoffSequence::parse("linear:+1"), DomainError);
  EXPECT_THROW(CutoffSequence::parse("linear:x"), ParseError);
  EXPECT_THROW(CutoffSequence::parse("1,,2"), ParseError);
}

TEST(ShellMap, Examples) {
  const auto k = CutoffSequence::explicit_values({1, 3, 4, 5});
  EXPECT_EQ(shell_map(pt("3"), 0, k), pt("2"));
  EXPECT_EQ(shell_map(pt("3", "1"), 0, k), pt("2", "1"));
  EXPECT_EQ(shell_step(pt("3/2", "-3/2"), 1), pt("1", "-1"));
  EXPECT_THROW(shell_map(pt("1"), 0, k), DomainError);
  EXPECT_THROW(shell_map(pt("1/2"), 0, k), DomainError);
}

TEST(ShellMap, StepsOneMeshInwardAndKeepsClamp) {
  for (const auto& k : {kDefault, CutoffSequence::explicit_values({1, 3, 4, 6})})
    for (int n = 0; n <= 2; ++n)
      for (const auto& x : rd_window(n, 2, k)) {
        if (x.is_origin() || rd_level(x, k) != n || rd_index(x, k).kind != RdKind::OuterShell) continue;
        const Point y = shell_map(x, n, k);
        EXPECT_EQ(sup_norm(y), sup_norm(x) - DyadicRational::pow2(-n));
        EXPECT_TRUE(lattice_index(y, GridSpec(2, -n)));
        for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(y[i].sign() == 0 || y[i].sign() == x[i].sign());
        const DyadicRational inner(k.at(n - 1));
        EXPECT_EQ(clamp_point(x, inner), clamp_point(y, inner));
      }
}

TEST(RdBasis, BasisVectors) {
  const auto k = CutoffSequence::explicit_values({1, 3, 4, 5});
  const auto f = basis_vector_rd(rd_index(pt("3"), k), k);
  EXPECT_EQ(f.coefficient(pt("3")), 1);
  EXPECT_EQ(f.coefficient(pt("2")), -1);
  EXPECT_EQ(f.size(), 2u);
  const auto g = basis_vector_rd(rd_index(pt("1/2"), kDefault), kDefault);
  EXPECT_EQ(g.coefficient(pt("1/2")), 1);
  EXPECT_EQ(g.coefficient(pt("1")), Rational(-1, 2));
  EXPECT_EQ(g.size(), 2u);
  EXPECT_THROW(basis_vector_rd({0, pt("3"), RdKind::InnerRefine, {}}, k), DomainError);
}

TEST(RdBasis, ArrangementLevelZero) {
  const auto arr = arrangement_rd(0, 1, kDefault);
  ASSERT_EQ(arr.size(), 4u);
  EXPECT_EQ(arr[0].point, pt("-1"));
  EXPECT_EQ(arr[1].point, pt("1"));
  EXPECT_EQ(arr[2].point, pt("-2"));
  EXPECT_EQ(arr[3].point, pt("2"));
  EXPECT_EQ(arr[0].kind, RdKind::InnerRefine);
  EXPECT_EQ(arr[3].kind, RdKind::OuterShell);
  EXPECT_EQ(arr[3].eta, DyadicRational(1));
}

TEST(RdBasis, ArrangementCountsAndOrder) {
  for (std::size_t d = 1; d <= 2; ++d)
    for (int depth = 0; depth <= 2; ++depth) {
      const auto arr = arrangement_rd(depth, d, kDefault);
      EXPECT_TRUE(std::is_sorted(arr.begin(), arr.end()));
      for (int n = 0; n <= depth; ++n) {
        const auto count = std::count_if(arr.begin(), arr.end(), [&](const auto& i) { return i.level == n; });
        EXPECT_EQ(static_cast<std::size_t>(count), rd_window(n, d, kDefault).size() - rd_window(n - 1, d, kDefault).size());
      }
      for (const auto& idx : arr) EXPECT_NO_THROW(require_valid(idx, kDefault));
    }
}

TEST(RdBasis, Ladder) {
  verify::Rng rng(41);
  const auto m = random_rd_molecule(rng, 1, 2, kDefault, 5);
  EXPECT_TRUE(projection_ladder(-2, m, kDefault).empty());
  for (int j = -1; j <= 6; ++j)
    for (int i = -2; i <= 6; ++i)
      EXPECT_EQ(projection_ladder(i, projection_ladder(j, m, kDefault), kDefault),
                projection_ladder(std::min(i, j), m, kDefault));
  // Range identity on the inner window.
  Molecule inner(Space::full(2));
  for (const auto& x : rd_inner_window(2, 2, kDefault)) inner.accumulate(x, verify::random_rational(rng));
  EXPECT_EQ(projection_ladder(3, inner, kDefault), inner);
}

TEST(RdBasis, OuterShellAnnihilation) {
  for (std::size_t d = 1; d <= 2; ++d)
    for (const auto& idx : arrangement_rd(2, d, kDefault))
      if (idx.kind == RdKind::OuterShell) {
        EXPECT_TRUE(projection_ladder(2 * idx.level - 1, basis_vector_rd(idx, kDefault), kDefault).empty());
      }
}

TEST(RdBasis, ExpandWorkedExample) {
  const auto c = expand_rd(Molecule::delta(Space::full(1), pt("2")), 0, kDefault);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].index.point, pt("1"));
  EXPECT_EQ(c[0].coeff, 1);
  EXPECT_EQ(c[1].index.point, pt("2"));
  EXPECT_EQ(c[1].coeff, 1);
  EXPECT_EQ(reconstruct_rd(c, 1, kDefault), Molecule::delta(Space::full(1), pt("2")));
  EXPECT_TRUE(expand_rd(Molecule(Space::full(1)), 2, kDefault).empty());
  EXPECT_THROW(expand_rd(Molecule::delta(Space::full(1), pt("3")), 0, kDefault), DomainError);
  EXPECT_THROW(expand_rd(Molecule::delta(Space::full(1), pt("1/2")), 0, kDefault), DomainError);
}

TEST(RdBasis, BasisVectorsExpandToThemselves) {
  for (const auto& k : {kDefault, CutoffSequence::explicit_values({1, 3, 4, 6})})
    for (const auto& idx : arrangement_rd(2, 1, k)) {
      const auto c = expand_rd(basis_vector_rd(idx, k), 2, k);
      ASSERT_EQ(c.size(), 1u) << idx.point;
      EXPECT_EQ(c[0].index, idx);
      EXPECT_EQ(c[0].coeff, 1);
    }
}

TEST(RdBasis, RoundTrip) {
  verify::Rng rng(42);
  for (const auto& k : {kDefault, CutoffSequence::explicit_values({1, 2, 4, 5, 7})})
    for (std::size_t d = 1; d <= 2; ++d)
      for (int s = 0; s < 15; ++s) {
        const int depth = static_cast<int>(rng.uniform(0, 2));
        const auto m = random_rd_molecule(rng, d, depth, k, static_cast<std::size_t>(rng.uniform(0, 6)));
        const auto c = expand_rd(m, depth, k);
        EXPECT_EQ(reconstruct_rd(c, d, k), m);
        for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1].index, c[i].index);
      }
}

TEST(RdBasis, Constants) { EXPECT_DOUBLE_EQ(shell_glue_constant(1.0), 3.0); }
