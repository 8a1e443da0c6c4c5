#pragma once

#include <map>
#include <vector>

#include "fpbasis/geometry.hpp"

namespace fpbasis {

/// Sparse partition-of-unity weights of a point over the vertex lattice.
/// Holds at most 2^d nonzero entries summing to exactly one.
using WeightMap = std::map<Point, DyadicRational>;

/// The one-dimensional hat value x^(w): x if w = 1, 1 - x if w = 0, else 0.
inline DyadicRational hat(const DyadicRational& x, const BigInt& w) {
  if (x.sign() < 0 || x > DyadicRational(1))
    throw DomainError("hat: argument " + x.to_string() + " outside [0, 1]");
  if (w == 1) return x;
  if (w == 0) return DyadicRational(1) - x;
  return {};
}

inline DyadicRational hat(const DyadicRational& x, long long w) { return hat(x, BigInt(w)); }

namespace detail {

// Lattice indices are carried as integer-valued dyadics, which stay inline
// for every realistic grid.
using IntIndex = std::vector<DyadicRational>;

/// Index of the lexicographically smallest cube containing x, together with
/// the local coordinates t = x/R - w in [0,1]^d.
inline void smallest_cube(const Point& x, const GridSpec& grid, IntIndex& w, std::vector<DyadicRational>& t) {
  const std::size_t d = x.dim();
  w.resize(d);
  t.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    DyadicRational q = grid.to_grid_units(x[i]);
    w[i] = q.is_integer() ? q - DyadicRational(1) : q.floor_dyadic();
    t[i] = q - w[i];
  }
}

inline IntIndex require_lattice(const Point& v, const GridSpec& grid) {
  IntIndex u(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    u[i] = grid.to_grid_units(v[i]);
    if (!u[i].is_integer())
      throw DomainError("vertex " + v.to_string() + " is not on the lattice of mesh " + grid.mesh().to_string());
  }
  return u;
}

inline DyadicRational product_of_hats(const IntIndex& u, const IntIndex& w, const std::vector<DyadicRational>& t) {
  static const DyadicRational one(1);
  DyadicRational value(1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const DyadicRational k = u[i] - w[i];
    if (k.is_zero()) {
      value *= one - t[i];
    } else if (k == one) {
      value *= t[i];
    } else {
      return {};
    }
    if (value.is_zero()) return value;
  }
  return value;
}

}  // namespace detail

/// Lambda_R^d(v, x), evaluated through the lexicographically smallest cube
/// containing x.  v must lie on the lattice R Z^d.
inline DyadicRational lambda(const Point& v, const Point& x, const GridSpec& grid) {
  require_same_dim(v, x);
  if (x.dim() != grid.dim()) throw DimensionMismatch(x.dim(), grid.dim());
  static const DyadicRational one(1);
  DyadicRational value(1);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const DyadicRational u = grid.to_grid_units(v[i]);
    if (!u.is_integer())
      throw DomainError("vertex " + v.to_string() + " is not on the lattice of mesh " + grid.mesh().to_string());
    if (value.is_zero()) continue;
    const DyadicRational q = grid.to_grid_units(x[i]);
    const DyadicRational w = q.is_integer() ? q - one : q.floor_dyadic();
    const DyadicRational k = u - w;
    if (k.is_zero()) value *= one - (q - w);
    else if (k == one) value *= q - w;
    else value = DyadicRational();
  }
  return value;
}

/// Lambda_R^d(v, x) evaluated through an explicitly chosen cube containing x.
/// Agreement across all containing cubes is what makes lambda well defined.
inline DyadicRational lambda_via_cube(const Point& v, const Point& x, const Cube& cube) {
  require_same_dim(v, x);
  if (!cube.contains(x)) throw DomainError("lambda_via_cube: point not in cube");
  const GridSpec& grid = cube.grid();
  const auto u = detail::require_lattice(v, grid);
  detail::IntIndex w(x.dim());
  std::vector<DyadicRational> t(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    w[i] = DyadicRational(cube.index()[i]);
    t[i] = grid.to_grid_units(x[i]) - w[i];
  }
  return detail::product_of_hats(u, w, t);
}

/// The full nonzero weight profile of x, keyed by vertices of one cube
/// containing x.
inline WeightMap lambda_weights(const Point& x, const GridSpec& grid) {
  if (x.dim() != grid.dim()) throw DimensionMismatch(x.dim(), grid.dim());
  const std::size_t d = x.dim();
  detail::IntIndex w;
  std::vector<DyadicRational> t;
  detail::smallest_cube(x, grid, w, t);

  // Tensor product one axis at a time, skipping zero factors.  Vertex
  // coordinates are built directly, so the output is already sorted.
  std::vector<std::pair<std::vector<DyadicRational>, DyadicRational>> partial(1);
  partial[0].second = DyadicRational(1);
  for (std::size_t i = 0; i < d; ++i) {
    const DyadicRational lo = DyadicRational(1) - t[i];
    const bool use_lo = !lo.is_zero(), use_hi = !t[i].is_zero();
    if (use_lo && use_hi) {
      const std::size_t n = partial.size();
      partial.reserve(2 * n);
      for (std::size_t j = 0; j < n; ++j) partial.push_back(partial[j]);
      const DyadicRational c_lo = w[i].ldexp(grid.log2_mesh());
      const DyadicRational c_hi = (w[i] + DyadicRational(1)).ldexp(grid.log2_mesh());
      for (std::size_t j = 0; j < n; ++j) {
        partial[j].first.push_back(c_lo);
        partial[j].second *= lo;
        partial[n + j].first.push_back(c_hi);
        partial[n + j].second *= t[i];
      }
    } else {
      const DyadicRational c = (use_lo ? w[i] : w[i] + DyadicRational(1)).ldexp(grid.log2_mesh());
      for (auto& p : partial) p.first.push_back(c);
    }
  }
  WeightMap out;
  for (auto& [c, wt] : partial) out.emplace(Point(std::move(c)), std::move(wt));
  return out;
}

}  // namespace fpbasis
