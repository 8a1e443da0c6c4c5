#pragma once

// Lipschitz behaviour of the lattice retraction x -> sum_v Lambda_R(v, x) delta(v)
// from a union of grid cubes K into the free p-space over its vertex set V.

#include <cmath>
#include <cstdint>
#include <random>
#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "fpbasis/basis_cube.hpp"
#include "fpbasis/pnorm.hpp"

namespace fpbasis {

/// A finite union K of grid cubes, its vertex set V and a base vertex.
class Patch {
 public:
  Patch(GridSpec grid, std::vector<std::vector<long long>> cubes, std::optional<Point> base = std::nullopt)
      : grid_(grid), cubes_(std::move(cubes)) {
    if (cubes_.empty()) throw DomainError("patch needs at least one cube");
    for (const auto& w : cubes_) {
      if (w.size() != grid_.dim()) throw DimensionMismatch(w.size(), grid_.dim());
      for (const auto& v : Cube(grid_, to_big(w)).vertices()) vertices_.insert(v);
    }
    if (base) {
      if (!vertices_.count(*base)) throw DomainError("patch base " + base->to_string() + " is not a vertex");
      base_ = *base;
    } else {
      const Point o = Point::origin(grid_.dim());
      base_ = vertices_.count(o) ? o : *vertices_.begin();
    }
  }

  /// The 2^d-cell block {0,1}^d for d >= 2, or the row 0..3 for d = 1.
  static Patch four_cube(std::size_t d, int log2_mesh = 0) {
    std::vector<std::vector<long long>> cubes;
    if (d == 1) {
      for (long long i = 0; i < 4; ++i) cubes.push_back({i});
    } else if (d == 2) {
      for (long long i = 0; i < 2; ++i)
        for (long long j = 0; j < 2; ++j) cubes.push_back({i, j});
    } else {
      throw DomainError("four_cube: only d in {1, 2}");
    }
    return Patch(GridSpec(d, log2_mesh), std::move(cubes));
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<std::vector<long long>>& cubes() const { return cubes_; }
  const std::set<Point>& vertices() const { return vertices_; }
  const Point& base() const { return base_; }

  Space vertex_space() const { return Space::finite(vertices_, base_); }

  bool contains(const Point& x) const {
    for (const auto& w : cubes_)
      if (Cube(grid_, to_big(w)).contains(x)) return true;
    return false;
  }

 private:
  static std::vector<BigInt> to_big(const std::vector<long long>& w) { return {w.begin(), w.end()}; }

  GridSpec grid_;
  std::vector<std::vector<long long>> cubes_;
  std::set<Point> vertices_;
  Point base_;
};

/// r(x) as a molecule over the finite vertex set of the patch.
inline Molecule retraction_image(const Point& x, const Patch& patch) {
  if (!patch.contains(x)) throw DomainError("retraction_image: " + x.to_string() + " outside the patch");
  Molecule out(patch.vertex_space());
  for (const auto& [v, w] : lambda_weights(x, patch.grid())) out.accumulate(v, w.to_rational());
  return out;
}

/// d * 2^((1-p)/p) * (1 + 2d(2^d - 1))^(1/p): dominates every branch of the
/// retraction estimate in the sup metric.
inline double retraction_envelope(double p, std::size_t d) {
  return static_cast<double>(d) * std::pow(2.0, (1.0 - p) / p) * retraction_constant(p, d);
}

struct ProbeOptions {
  int mesh_log2 = -4;          ///< sample mesh 2^mesh_log2
  std::size_t max_pairs = 0;   ///< 0: every pair; otherwise a seeded random subset
  std::uint64_t seed = 42;
};

struct ProbeReport {
  double p = 1;
  std::size_t dim = 1;
  double measured_max = 0;        ///< max ||r(x) - r(y)|| / |x - y|_inf
  double measured_max_pth = 0;    ///< max ||r(x) - r(y)||^p / |x - y|_inf
  double stated_constant = 0;      ///< (1 + 2d(2^d - 1))^(1/p)
  double envelope = 0;            ///< retraction_envelope(p, d)
  Point argmax_x, argmax_y;
  std::size_t samples = 0;        ///< number of pairs evaluated
  std::size_t points = 0;         ///< number of sample points
  double within_cube_max_excess = -1;  ///< max ||.||^p - (2^d-1)|x-y|_1^p over same-cube pairs
  std::size_t within_cube_pairs = 0;

  bool within_envelope() const { return measured_max <= envelope; }
  bool stated_constant_holds() const { return measured_max <= stated_constant; }
  /// The printed chain read literally: ||r(x) - r(y)||^p <= (1 + 2d(2^d-1)) |x - y|_inf.
  bool literal_chain_holds() const { return measured_max_pth <= std::pow(stated_constant, p); }
};

namespace detail {

struct VectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

/// Index permutations of the ground set induced by the signed axis
/// permutations of its bounding box that map the vertices onto themselves.
inline std::vector<std::vector<std::size_t>> vertex_symmetries(const GroundSet& ground, const GridSpec& grid) {
  const std::size_t d = grid.dim(), nv = ground.size();
  std::vector<std::vector<long long>> c(nv, std::vector<long long>(d));
  std::vector<long long> lo(d, std::numeric_limits<long long>::max()), hi(d, std::numeric_limits<long long>::min());
  std::map<std::vector<long long>, std::size_t> index;
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i < d; ++i) {
      c[v][i] = ground.point(v)[i].ldexp(-grid.log2_mesh()).numerator().convert_to<long long>();
      lo[i] = std::min(lo[i], c[v][i]);
      hi[i] = std::max(hi[i], c[v][i]);
    }
    index[c[v]] = v;
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  do {
    for (std::size_t signs = 0; signs < (std::size_t{1} << d); ++signs) {
      std::vector<std::size_t> g(nv);
      bool ok = true;
      for (std::size_t v = 0; v < nv && ok; ++v) {
        std::vector<long long> y(d);
        for (std::size_t i = 0; i < d; ++i) {
          const std::size_t a = perm[i];
          y[i] = (signs >> i & 1) ? hi[a] - c[v][a] + lo[i] : c[v][a] - lo[a] + lo[i];
        }
        auto it = index.find(y);
        if (it == index.end()) ok = false;
        else g[v] = it->second;
      }
      if (ok) out.push_back(std::move(g));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

/// Maximum Lipschitz ratio of the retraction over all (or sampled) pairs of
/// dyadic points of the patch at the given mesh.  Norms are exact over V.
inline ProbeReport lipschitz_probe(const Patch& patch, double p, const ProbeOptions& opt = {}) {
  detail::check_p(p);
  const GridSpec& grid = patch.grid();
  const std::size_t d = grid.dim();
  const int rel = grid.log2_mesh() - opt.mesh_log2;  // sample points per cell edge = 2^rel
  if (rel < 0) throw DomainError("probe mesh must not be coarser than the grid");
  if (rel * static_cast<int>(d) > 50) throw DomainError("probe mesh too fine");

  std::vector<Point> others;
  for (const auto& v : patch.vertices())
    if (!(v == patch.base())) others.push_back(v);
  const GroundSet ground(patch.base(), others);
  const std::size_t nv = ground.size();
  const auto cost = detail::cost_table(ground, p);

  // Sample points in mesh units, and their weights scaled by 2^(rel*d) to integers.
  const long long per_cell = 1LL << rel;
  std::set<std::vector<long long>> grid_pts;
  for (const auto& w : patch.cubes()) {
    std::vector<long long> off(d, 0);
    while (true) {
      std::vector<long long> q(d);
      for (std::size_t i = 0; i < d; ++i) q[i] = w[i] * per_cell + off[i];
      grid_pts.insert(q);
      std::size_t i = d;
      bool done = true;
      while (i > 0) {
        --i;
        if (off[i] < per_cell) {
          ++off[i];
          done = false;
          break;
        }
        off[i] = 0;
      }
      if (done) break;
    }
  }
  std::vector<std::vector<long long>> coords(grid_pts.begin(), grid_pts.end());
  std::vector<Point> pts;
  std::vector<std::vector<std::int64_t>> weights;
  const int scale_bits = rel * static_cast<int>(d);
  for (const auto& q : coords) {
    std::vector<DyadicRational> c;
    for (auto k : q) c.push_back(DyadicRational(k).ldexp(opt.mesh_log2));
    Point x(std::move(c));
    std::vector<std::int64_t> w(nv, 0);
    for (const auto& [v, lw] : lambda_weights(x, grid)) {
      auto idx = ground.index_of(v);
      if (!idx) throw InternalError("lattice weight outside the patch");
      w[*idx] = lw.ldexp(scale_bits).numerator().convert_to<std::int64_t>();
    }
    pts.push_back(std::move(x));
    weights.push_back(std::move(w));
  }

  const double mesh = std::ldexp(1.0, opt.mesh_log2);
  const double unit = std::ldexp(1.0, -scale_bits);
  const double chain = std::pow(2.0, static_cast<double>(d)) - 1.0;
  auto same_cube = [&](const std::vector<long long>& a, const std::vector<long long>& b) {
    for (const auto& w : patch.cubes()) {
      bool ok = true;
      for (std::size_t i = 0; i < d && ok; ++i) {
        const long long lo = w[i] * per_cell, hi = lo + per_cell;
        ok = a[i] >= lo && a[i] <= hi && b[i] >= lo && b[i] <= hi;
      }
      if (ok) return true;
    }
    return false;
  };

  ProbeReport rep;
  rep.p = p;
  rep.dim = d;
  rep.stated_constant = retraction_constant(p, d);
  rep.envelope = retraction_envelope(p, d);
  rep.points = pts.size();

  // r(x) - r(y) has mass zero, so its norm over V is unchanged by isometries
  // of V and by negation.  Costs are cached per orbit.
  const auto symmetries = detail::vertex_symmetries(ground, grid);
  std::unordered_map<std::vector<std::int64_t>, double, detail::VectorHash> cache;
  std::vector<std::int64_t> div(nv), image(nv), key(nv);
  auto evaluate = [&](std::size_t i, std::size_t j) {
    std::int64_t total = 0;
    for (std::size_t v = 1; v < nv; ++v) {
      div[v] = weights[i][v] - weights[j][v];
      total += div[v];
    }
    div[0] = -total;
    bool first = true;
    for (const auto& g : symmetries)
      for (const std::int64_t sign : {1, -1}) {
        for (std::size_t v = 0; v < nv; ++v) image[g[v]] = sign * div[v];
        if (first || image < key) key = image;
        first = false;
      }
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, detail::subset_dp_min_cost(key, cost, p)).first;
    const double c = it->second;
    const double norm_p = c * std::pow(unit, p);  // ||.||^p
    const double norm = p == 1.0 ? norm_p : std::pow(norm_p, 1.0 / p);
    long long sup = 0, l1 = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const long long g = std::llabs(coords[i][k] - coords[j][k]);
      sup = std::max(sup, g);
      l1 += g;
    }
    const double sup_d = static_cast<double>(sup) * mesh;
    const double ratio = norm / sup_d;
    if (ratio > rep.measured_max) {
      rep.measured_max = ratio;
      rep.argmax_x = pts[i];
      rep.argmax_y = pts[j];
    }
    rep.measured_max_pth = std::max(rep.measured_max_pth, norm_p / sup_d);
    if (same_cube(coords[i], coords[j])) {
      const double bound = chain * std::pow(static_cast<double>(l1) * mesh, p);
      rep.within_cube_max_excess =
          rep.within_cube_pairs == 0 ? norm_p - bound : std::max(rep.within_cube_max_excess, norm_p - bound);
      ++rep.within_cube_pairs;
    }
    ++rep.samples;
  };

  const std::size_t n = pts.size();
  const std::size_t all_pairs = n * (n - 1) / 2;
  if (opt.max_pairs == 0 || opt.max_pairs >= all_pairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) evaluate(i, j);
  } else {
    std::mt19937_64 rng(opt.seed);
    for (std::size_t s = 0; s < opt.max_pairs; ++s) {
      const std::size_t i = rng() % n;
      std::size_t j = rng() % (n - 1);
      if (j >= i) ++j;
      evaluate(std::min(i, j), std::max(i, j));
    }
  }
  return rep;
}

}  // namespace fpbasis
