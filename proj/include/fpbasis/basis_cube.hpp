#pragma once

// Hierarchical basis of the free p-space over [0,1]^d.  Level n collects the
// dyadic points V_n = [0,1]^d cap 2^-n Z^d not already in V_{n-1}
// (V_{-1} = {0}); the basis vector of x at level n is delta(x) minus the
// Lambda-interpolant of x from the coarser level.

#include <cmath>
#include <compare>
#include <set>
#include <vector>

#include "fpbasis/molecule.hpp"

namespace fpbasis {

struct CubeBasisIndex {
  int level = 0;
  Point point;

  friend bool operator==(const CubeBasisIndex&, const CubeBasisIndex&) = default;
  /// Arrangement order: level first, then coordinate-lexicographic.
  friend std::strong_ordering operator<=>(const CubeBasisIndex& a, const CubeBasisIndex& b) {
    if (auto c = a.level <=> b.level; c != 0) return c;
    return a.point <=> b.point;
  }
};

struct CubeCoefficient {
  CubeBasisIndex index;
  Rational coeff;
  friend bool operator==(const CubeCoefficient&, const CubeCoefficient&) = default;
};

/// Nonzero coefficients in arrangement order.
using CubeBasisCoefficients = std::vector<CubeCoefficient>;

/// V_n in coordinate-lexicographic order; V_{-1} = {0}.
inline std::vector<Point> level_points(int n, std::size_t d) {
  if (n < -1) throw DomainError("level_points: level must be >= -1");
  if (d == 0) throw DomainError("level_points: dimension must be positive");
  if (n == -1) return {Point::origin(d)};
  const long long side = 1LL << n;
  std::vector<Point> out;
  std::vector<long long> idx(d, 0);
  while (true) {
    std::vector<DyadicRational> c;
    for (auto k : idx) c.push_back(DyadicRational(BigInt(k), static_cast<std::uint32_t>(n)));
    out.emplace_back(std::move(c));
    std::size_t i = d;
    bool done = true;
    while (i > 0) {
      --i;
      if (idx[i] < side) {
        ++idx[i];
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) return out;
  }
}

/// The level alpha(x): smallest n with x in V_n, or nullopt if x is not a
/// dyadic point of the cube.
inline std::optional<int> cube_level(const Point& x) {
  std::uint32_t e = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x[i].sign() < 0 || x[i] > DyadicRational(1)) return std::nullopt;
    e = std::max(e, x[i].exponent());
  }
  if (e == 0 && x.is_origin()) return -1;
  return static_cast<int>(e);
}

inline bool is_valid(const CubeBasisIndex& idx) {
  if (idx.level < 0 || idx.point.dim() == 0) return false;
  auto lvl = cube_level(idx.point);
  return lvl && *lvl == idx.level;
}

inline void require_valid(const CubeBasisIndex& idx) {
  if (!is_valid(idx))
    throw DomainError("invalid cube basis index: level " + std::to_string(idx.level) + ", point " +
                      idx.point.to_string());
}

/// f(x) = delta(x) - sum_{v in V_{n-1}} Lambda_{2^{-n+1}}(v, x) delta(v).
inline Molecule basis_vector(const CubeBasisIndex& idx) {
  require_valid(idx);
  const std::size_t d = idx.point.dim();
  Molecule f = Molecule::delta(Space::unit_cube(d), idx.point);
  if (idx.level == 0) return f;  // V_{-1} = {0} and delta(0) vanishes
  for (const auto& [v, w] : lambda_weights(idx.point, GridSpec(d, 1 - idx.level)))
    f.accumulate(v, -w.to_rational());
  return f;
}

/// All indices with level <= max_level in arrangement order:
/// (2^max_level + 1)^d - 1 of them.
inline std::vector<CubeBasisIndex> arrangement(int max_level, std::size_t d) {
  if (max_level < 0) throw DomainError("arrangement: depth must be >= 0");
  std::vector<CubeBasisIndex> out;
  for (int n = 0; n <= max_level; ++n)
    for (auto& x : level_points(n, d))
      if (cube_level(x) == n) out.push_back({n, std::move(x)});
  return out;
}

inline void require_on_level_grid(const Molecule& m, int depth) {
  if (m.space().kind() != SpaceKind::UnitCube) throw DomainError("expected a molecule over the unit cube");
  for (const auto& [x, a] : m.terms()) {
    auto lvl = cube_level(x);
    if (!lvl || *lvl > depth)
      throw DomainError("support point " + x.to_string() + " not in V_" + std::to_string(depth));
  }
}

/// Coefficients of m (supported on V_depth) in the basis.  The level-n
/// coefficient of f(x) is the coefficient of delta(x) in retract(m, 2^-n),
/// from the telescoping identity T_n m - T_{n-1} m = sum c_n(x) f(x).
inline CubeBasisCoefficients expand(const Molecule& m, int depth) {
  if (depth < 0) throw DomainError("expand: depth must be >= 0");
  require_on_level_grid(m, depth);
  const std::size_t d = m.space().dim();
  CubeBasisCoefficients out;
  for (int n = 0; n <= depth; ++n) {
    const Molecule level = retract(m, GridSpec(d, -n));
    for (const auto& [x, c] : level.terms())
      if (cube_level(x) == n) out.push_back({{n, x}, c});
  }
  return out;
}

/// sum c * f(idx), exact.  Molecules over the cube of dimension d.
inline Molecule reconstruct(const CubeBasisCoefficients& coeffs, std::size_t d) {
  Molecule out(Space::unit_cube(d));
  for (const auto& [idx, c] : coeffs) {
    const Molecule f = basis_vector(idx);
    for (const auto& [x, a] : f.terms()) out.accumulate(x, c * a);
  }
  return out;
}

/// Partial sum P_j: reconstruction from the first j coefficients of the full
/// arrangement (zero coefficients included in the count).
inline Molecule partial_sum(const Molecule& m, int depth, std::size_t j) {
  const auto order = arrangement(depth, m.space().dim());
  const auto coeffs = expand(m, depth);
  CubeBasisCoefficients head;
  const CubeBasisIndex* limit = j < order.size() ? &order[j] : nullptr;
  for (const auto& c : coeffs)
    if (!limit || c.index < *limit) head.push_back(c);
  return reconstruct(head, m.space().dim());
}

/// Q_{n,F}: keeps the components of f(x), x in F, of a molecule lying in
/// the level-n block span{f(x) : x in V_n minus V_{n-1}}.
inline Molecule block_projection(int n, const std::set<Point>& keep, const Molecule& m) {
  if (n < 0) throw DomainError("block_projection: level must be >= 0");
  const std::size_t d = m.space().dim();
  for (const auto& x : keep)
    if (cube_level(x) != n) throw DomainError("block_projection: " + x.to_string() + " is not a level-" + std::to_string(n) + " point");
  CubeBasisCoefficients coeffs;
  try {
    coeffs = expand(m, n);
  } catch (const DomainError&) {
    throw DomainError("block_projection: molecule is not in the level-" + std::to_string(n) + " block");
  }
  CubeBasisCoefficients kept;
  for (const auto& c : coeffs) {
    if (c.index.level != n)
      throw DomainError("block_projection: molecule is not in the level-" + std::to_string(n) + " block");
    if (keep.count(c.index.point)) kept.push_back(c);
  }
  return reconstruct(kept, d);
}

/// Lipschitz constant of the retraction onto a cube lattice patch:
/// (1 + 2d(2^d - 1))^(1/p).
inline double retraction_constant(double p, std::size_t d) {
  const double dd = static_cast<double>(d);
  return std::pow(1.0 + 2.0 * dd * (std::pow(2.0, dd) - 1.0), 1.0 / p);
}

/// Lipschitz constant of the level gluing maps r_{n,F}:
/// (1 + 2^(1/p)) 2^(1/p - 1) C(p, d).
inline double cube_glue_constant(double p, std::size_t d) {
  return (1.0 + std::pow(2.0, 1.0 / p)) * std::pow(2.0, 1.0 / p - 1.0) * retraction_constant(p, d);
}

}  // namespace fpbasis
