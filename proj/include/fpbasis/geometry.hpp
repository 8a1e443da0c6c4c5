#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fpbasis/dyadic.hpp"

namespace fpbasis {

/// A point of R^d with dyadic coordinates.  The dimension is fixed per value.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<DyadicRational> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<DyadicRational> coords) : coords_(coords) {}

  static Point origin(std::size_t dim) { return Point(std::vector<DyadicRational>(dim)); }

  std::size_t dim() const { return coords_.size(); }
  const DyadicRational& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<DyadicRational>& coords() const { return coords_; }

  bool is_origin() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const auto& c) { return c.is_zero(); });
  }

  /// Coordinates at the given indices, in the given order.
  Point project(const std::vector<std::size_t>& axes) const {
    std::vector<DyadicRational> out;
    out.reserve(axes.size());
    for (auto a : axes) out.push_back(coords_.at(a));
    return Point(std::move(out));
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ", ";
      s += coords_[i].to_string();
    }
    return s + ")";
  }

  friend bool operator==(const Point&, const Point&) = default;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) return a.dim() <=> b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (auto c = a.coords_[i] <=> b.coords_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  std::vector<DyadicRational> coords_;
};

inline std::ostream& operator<<(std::ostream& os, const Point& p) { return os << p.to_string(); }

inline void require_same_dim(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch(x.dim(), y.dim());
}

/// max_i |x_i - y_i|
inline DyadicRational sup_dist(const Point& x, const Point& y) {
  require_same_dim(x, y);
  DyadicRational best;
  for (std::size_t i = 0; i < x.dim(); ++i) best = std::max(best, abs(x[i] - y[i]));
  return best;
}

/// sum_i |x_i - y_i|
inline DyadicRational l1_dist(const Point& x, const Point& y) {
  require_same_dim(x, y);
  DyadicRational sum;
  for (std::size_t i = 0; i < x.dim(); ++i) sum += abs(x[i] - y[i]);
  return sum;
}

inline DyadicRational sup_norm(const Point& x) { return sup_dist(x, Point::origin(x.dim())); }

/// The tessellation of R^d by closed cubes of side R.  R is restricted to
/// powers of two, which keeps every interpolation weight dyadic.
class GridSpec {
 public:
  GridSpec(std::size_t dim, int log2_mesh) : dim_(dim), log2_mesh_(log2_mesh) {
    if (dim == 0) throw DomainError("grid dimension must be positive");
  }

  static GridSpec from_mesh(std::size_t dim, const DyadicRational& mesh) {
    auto e = log2_exact(mesh);
    if (!e) throw DomainError("grid mesh must be a positive power of two, got " + mesh.to_string());
    return GridSpec(dim, *e);
  }

  std::size_t dim() const { return dim_; }
  int log2_mesh() const { return log2_mesh_; }
  DyadicRational mesh() const { return DyadicRational::pow2(log2_mesh_); }

  /// x / R, exact.
  DyadicRational to_grid_units(const DyadicRational& x) const { return x.ldexp(-log2_mesh_); }
  /// R * k, exact.
  DyadicRational from_grid_units(const BigInt& k) const { return DyadicRational(k).ldexp(log2_mesh_); }

  /// The lattice point R * index.
  Point lattice_point(const std::vector<BigInt>& index) const {
    std::vector<DyadicRational> c;
    c.reserve(index.size());
    for (const auto& k : index) c.push_back(from_grid_units(k));
    return Point(std::move(c));
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t dim_;
  int log2_mesh_;
};

/// Q_{w,R} = R w + [0, R]^d.
class Cube {
 public:
  Cube(GridSpec grid, std::vector<BigInt> index) : grid_(grid), index_(std::move(index)) {
    if (index_.size() != grid_.dim()) throw DimensionMismatch(index_.size(), grid_.dim());
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<BigInt>& index() const { return index_; }

  bool contains(const Point& x) const {
    if (x.dim() != grid_.dim()) throw DimensionMismatch(x.dim(), grid_.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      DyadicRational t = grid_.to_grid_units(x[i]) - DyadicRational(index_[i]);
      if (t.sign() < 0 || t > DyadicRational(1)) return false;
    }
    return true;
  }

  /// The 2^d vertices R w + R eps, eps in {0,1}^d, ordered by eps read as a
  /// binary number with coordinate 0 most significant (lexicographic).
  std::vector<Point> vertices() const {
    const std::size_t d = grid_.dim();
    std::vector<Point> out;
    out.reserve(std::size_t{1} << d);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<BigInt> v(index_);
      for (std::size_t i = 0; i < d; ++i)
        if (mask & (std::size_t{1} << (d - 1 - i))) v[i] += 1;
      out.push_back(grid_.lattice_point(v));
    }
    return out;
  }

  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube& a, const Cube& b) { return a.index_ <=> b.index_; }

 private:
  GridSpec grid_;
  std::vector<BigInt> index_;
};

/// Every cube of the grid containing x, in lexicographic index order.  One
/// cube for interior points, up to 2^d on grid hyperplanes.
inline std::vector<Cube> cubes_containing(const Point& x, const GridSpec& grid) {
  if (x.dim() != grid.dim()) throw DimensionMismatch(x.dim(), grid.dim());
  std::vector<std::vector<BigInt>> choices(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    DyadicRational q = grid.to_grid_units(x[i]);
    if (q.is_integer())
      choices[i] = {q.numerator() - 1, q.numerator()};
    else
      choices[i] = {q.floor()};
  }
  std::vector<std::vector<BigInt>> indices{{}};
  for (const auto& c : choices) {
    std::vector<std::vector<BigInt>> next;
    for (const auto& prefix : indices)
      for (const auto& k : c) {
        auto v = prefix;
        v.push_back(k);
        next.push_back(std::move(v));
      }
    indices = std::move(next);
  }
  std::vector<Cube> out;
  out.reserve(indices.size());
  for (auto& idx : indices) out.emplace_back(grid, std::move(idx));
  return out;
}

/// The integer index u with x = R u, or nullopt when x is off the lattice.
inline std::optional<std::vector<BigInt>> lattice_index(const Point& x, const GridSpec& grid) {
  if (x.dim() != grid.dim()) throw DimensionMismatch(x.dim(), grid.dim());
  std::vector<BigInt> u;
  u.reserve(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    DyadicRational q = grid.to_grid_units(x[i]);
    if (!q.is_integer()) return std::nullopt;
    u.push_back(q.numerator());
  }
  return u;
}

/// Lattice membership test: x if x is in R Z^d, nullopt otherwise.
inline std::optional<Point> grid_snap(const Point& x, const GridSpec& grid) {
  if (!lattice_index(x, grid)) return std::nullopt;
  return x;
}

/// All points of R Z^d inside the box [-radius, radius]^d, lexicographic.
/// radius / R must be an integer.
inline std::vector<Point> lattice_box(std::size_t dim, const DyadicRational& radius, int log2_mesh) {
  GridSpec grid(dim, log2_mesh);
  DyadicRational k = grid.to_grid_units(radius);
  if (!k.is_integer() || k.sign() < 0) throw DomainError("box radius must be a non-negative multiple of the mesh");
  const long long n = k.numerator().convert_to<long long>();
  std::vector<Point> out;
  std::vector<long long> idx(dim, -n);
  while (true) {
    std::vector<BigInt> b(idx.begin(), idx.end());
    out.push_back(grid.lattice_point(b));
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (idx[i] < n) {
        ++idx[i];
        break;
      }
      idx[i] = -n;
      if (i == 0) return out;
    }
  }
}

}  // namespace fpbasis
