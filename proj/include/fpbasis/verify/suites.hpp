#pragma once

// Property suites.  Each check function takes explicit scale parameters so
// the CLI can run a quick pass and the acceptance driver the full one.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fpbasis/json_io.hpp"
#include "fpbasis/verify/oracle.hpp"
#include "fpbasis/verify/random.hpp"

namespace fpbasis::verify {

struct Check {
  std::string name;
  bool pass = true;
  double measured = 0;   ///< violation count for exact checks, extreme value otherwise
  double bound = 0;
  double tolerance = 0;
  std::string note;
};

inline Check exact_check(std::string name, std::size_t failures, std::size_t cases, std::string note = {}) {
  Check c{std::move(name), failures == 0, static_cast<double>(failures), 0, 0, std::to_string(cases) + " cases"};
  if (!note.empty()) c.note += "; " + note;
  return c;
}

inline Check bound_check(std::string name, double measured, double bound, double tolerance, std::string note = {}) {
  return {std::move(name), measured <= bound + tolerance, measured, bound, tolerance, std::move(note)};
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string mesh_tag(int log2) { return "R=2^" + std::to_string(log2); }

inline std::string p_tag(double p) {
  if (p == 1.0) return "p=1";
  if (std::fabs(p - 2.0 / 3.0) < 1e-15) return "p=2/3";
  if (p == 0.5) return "p=1/2";
  return "p=" + fmt(p);
}

/// Calls f(coords) for every integer vector in [lo, hi]^d, last axis fastest.
inline void for_each_box(std::size_t d, long long lo, long long hi, const std::function<void(const std::vector<long long>&)>& f) {
  std::vector<long long> idx(d, lo);
  while (true) {
    f(idx);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (idx[i] < hi) {
        ++idx[i];
        break;
      }
      idx[i] = lo;
      if (i == 0) return;
    }
  }
}

inline Point mesh_point(const std::vector<long long>& k, int log2_mesh) {
  std::vector<DyadicRational> c;
  c.reserve(k.size());
  for (auto v : k) c.push_back(DyadicRational(v).ldexp(log2_mesh));
  return Point(std::move(c));
}

inline long long floor_div(long long a, long long b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

inline DyadicRational weight_at(const WeightMap& w, const Point& v) {
  auto it = w.find(v);
  return it == w.end() ? DyadicRational() : it->second;
}

/// |a(v) - b(v)| <= bound for every v, walking both sorted maps together.
inline bool within_step(const WeightMap& a, const WeightMap& b, const DyadicRational& bound) {
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    DyadicRational gap;
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      gap = abs(i->second);
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      gap = abs(j->second);
      ++j;
    } else {
      gap = abs(i->second - j->second);
      ++i;
      ++j;
    }
    if (gap > bound) return false;
  }
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------- lambda

struct LambdaParams {
  std::vector<std::size_t> dims{1, 2};
  std::vector<int> cell_log2{0, -1, -2};  ///< R = 2^r
  std::vector<int> ratio_log2{1, 2};      ///< S / R = 2^s
  int mesh_log2 = -3;                     ///< query points on 2^mesh_log2 Z^d
  int cells = 3;                          ///< window is `cells` cells per axis, starting at -R
  std::size_t random_samples = 200;       ///< tensorization, in-cube pairs, product bound
  std::size_t ring_stride = 1;            ///< scalar cross-check on every ring_stride-th point
  std::uint64_t seed = 42;
};

/// Partition of unity, Kronecker, support, intra-cube Lipschitz and
/// refinement exhaustively over the window; tensorization, in-cube pairs and
/// the product bound on random samples.
inline std::vector<Check> lambda_checks(const LambdaParams& prm) {
  std::vector<Check> out;
  Rng rng(prm.seed);
  for (std::size_t d : prm.dims) {
    for (int r : prm.cell_log2) {
      if (r < prm.mesh_log2) throw DomainError("lambda_checks: cell finer than the query mesh");
      const GridSpec grid(d, r);
      const long long per = 1LL << (r - prm.mesh_log2);
      const long long lo = -per, hi = (prm.cells - 1) * per;
      const auto n = static_cast<std::size_t>(hi - lo + 1);
      std::vector<std::size_t> stride(d, 1);
      for (std::size_t i = d - 1; i > 0; --i) stride[i - 1] = stride[i] * n;
      const std::size_t ring_size = stride[0] + 1;
      std::vector<WeightMap> recent(ring_size);
      const DyadicRational step_bound = DyadicRational::pow2(prm.mesh_log2 - r);

      std::vector<std::map<std::vector<long long>, WeightMap>> coarse(prm.ratio_log2.size());
      std::size_t points = 0, ring_points = 0, lattice_points = 0, neighbor_pairs = 0;
      std::size_t bad_count = 0, bad_sum = 0, bad_range = 0, bad_support = 0, bad_kron = 0, bad_lip = 0;
      std::vector<std::size_t> bad_refine(prm.ratio_log2.size(), 0);
      std::size_t linear = 0;

      detail::for_each_box(d, lo, hi, [&](const std::vector<long long>& k) {
        const Point x = detail::mesh_point(k, prm.mesh_log2);
        WeightMap w = lambda_weights(x, grid);
        ++points;
        if (w.size() > (std::size_t{1} << d)) ++bad_count;
        DyadicRational sum;
        for (const auto& [v, q] : w) {
          sum += q;
          if (q.sign() < 0 || q > DyadicRational(1)) ++bad_range;
        }
        if (sum != DyadicRational(1)) ++bad_sum;

        bool on_lattice = true;
        for (auto ki : k) on_lattice = on_lattice && ki % per == 0;
        if (on_lattice) {
          ++lattice_points;
          if (w.size() != 1 || w.begin()->first != x || w.begin()->second != DyadicRational(1)) ++bad_kron;
        }

        // Scalar path against the weight map on the 4^d lattice box around x.
        if (linear % prm.ring_stride == 0) {
          ++ring_points;
          std::vector<long long> c(d);
          for (std::size_t i = 0; i < d; ++i) c[i] = detail::floor_div(k[i], per);
          std::size_t inside = 0;
          bool ok = true;
          // The box is visited in lexicographic order, the order of the map.
          auto next = w.begin();
          detail::for_each_box(d, -1, 2, [&](const std::vector<long long>& off) {
            std::vector<DyadicRational> vc(d);
            bool adjacent = true;
            for (std::size_t i = 0; i < d; ++i) {
              const long long u = c[i] + off[i];
              vc[i] = DyadicRational(u).ldexp(r);
              adjacent = adjacent && std::llabs(u * per - k[i]) <= per;
            }
            const Point v(std::move(vc));
            DyadicRational expect;
            if (next != w.end() && next->first == v) expect = (next++)->second;
            if (!expect.is_zero()) ++inside;
            if (!expect.is_zero() && !adjacent) ok = false;
            if (lambda(v, x, grid) != expect) ok = false;
          });
          if (inside != w.size()) ok = false;
          if (!ok) ++bad_support;
        }

        // Axis neighbours one mesh step back share a cube with x.
        for (std::size_t i = 0; i < d; ++i) {
          if (k[i] == lo) continue;
          const WeightMap& wy = recent[(linear - stride[i]) % ring_size];
          ++neighbor_pairs;
          if (!detail::within_step(w, wy, step_bound)) ++bad_lip;
        }

        for (std::size_t s = 0; s < prm.ratio_log2.size(); ++s) {
          const GridSpec coarse_grid(d, r + prm.ratio_log2[s]);
          WeightMap via;
          for (const auto& [u, q] : w) {
            std::vector<long long> key(d);
            for (std::size_t i = 0; i < d; ++i) {
              const DyadicRational ui = u[i].ldexp(-r);
              key[i] = ui.is_small() ? ui.small_numerator() : ui.numerator().convert_to<long long>();
            }
            auto it = coarse[s].find(key);
            if (it == coarse[s].end()) it = coarse[s].emplace(std::move(key), lambda_weights(u, coarse_grid)).first;
            for (const auto& [v, qv] : it->second) via[v] += q * qv;
          }
          std::erase_if(via, [](const auto& e) { return e.second.is_zero(); });
          if (via != lambda_weights(x, coarse_grid)) ++bad_refine[s];
        }

        recent[linear % ring_size] = std::move(w);
        ++linear;
      });

      const std::string tag = "lambda.d" + std::to_string(d) + "." + detail::mesh_tag(r) + ".";
      out.push_back(exact_check(tag + "at_most_2^d_weights", bad_count, points));
      out.push_back(exact_check(tag + "weights_in_unit_interval", bad_range, points));
      out.push_back(exact_check(tag + "partition_of_unity", bad_sum, points));
      out.push_back(exact_check(tag + "kronecker", bad_kron, lattice_points));
      out.push_back(exact_check(tag + "support_and_scalar_agreement", bad_support, ring_points,
                                "scalar lambda over the 4^d lattice box of each point"));
      out.push_back(exact_check(tag + "intra_cube_lipschitz", bad_lip, neighbor_pairs,
                                "all axis-adjacent pairs; chains of these cover every in-cube pair"));
      for (std::size_t s = 0; s < prm.ratio_log2.size(); ++s)
        out.push_back(exact_check(tag + "refinement.S/R=2^" + std::to_string(prm.ratio_log2[s]), bad_refine[s], points));

      // Random pairs in one cube, compared directly against |x - y|_1 / R.
      std::size_t bad_pairs = 0;
      const long long cell_count = prm.cells;
      for (std::size_t t = 0; t < prm.random_samples; ++t) {
        std::vector<long long> cell(d), kx(d), ky(d);
        for (std::size_t i = 0; i < d; ++i) {
          cell[i] = rng.uniform(-1, cell_count - 2);
          kx[i] = cell[i] * per + rng.uniform(0, per);
          ky[i] = cell[i] * per + rng.uniform(0, per);
        }
        const Point px = detail::mesh_point(kx, prm.mesh_log2), py = detail::mesh_point(ky, prm.mesh_log2);
        const DyadicRational bound = l1_dist(px, py).ldexp(-r);
        const WeightMap wx = lambda_weights(px, grid), wy = lambda_weights(py, grid);
        bool ok = true;
        for (const auto& [v, q] : wx)
          if (abs(q - detail::weight_at(wy, v)) > bound) ok = false;
        for (const auto& [v, q] : wy)
          if (abs(q - detail::weight_at(wx, v)) > bound) ok = false;
        if (!ok) ++bad_pairs;
      }
      out.push_back(exact_check(tag + "intra_cube_lipschitz_random_pairs", bad_pairs, prm.random_samples));

      // Tensorization over a random split of the coordinates.
      if (d >= 2) {
        std::size_t bad_tensor = 0;
        for (std::size_t t = 0; t < prm.random_samples; ++t) {
          std::vector<long long> kx(d);
          for (auto& v : kx) v = rng.uniform(lo, hi);
          const Point px = detail::mesh_point(kx, prm.mesh_log2);
          std::vector<std::size_t> a, b;
          const auto mask = static_cast<unsigned long long>(rng.uniform(1, (1LL << d) - 2));
          for (std::size_t i = 0; i < d; ++i) (mask >> i & 1 ? a : b).push_back(i);
          const GridSpec ga(a.size(), r), gb(b.size(), r);
          std::vector<long long> c(d);
          for (std::size_t i = 0; i < d; ++i) c[i] = detail::floor_div(kx[i], per);
          bool ok = true;
          detail::for_each_box(d, -1, 2, [&](const std::vector<long long>& off) {
            std::vector<DyadicRational> vc(d);
            for (std::size_t i = 0; i < d; ++i) vc[i] = DyadicRational(c[i] + off[i]).ldexp(r);
            const Point v(std::move(vc));
            if (lambda(v, px, grid) != lambda(v.project(a), px.project(a), ga) * lambda(v.project(b), px.project(b), gb))
              ok = false;
          });
          if (!ok) ++bad_tensor;
        }
        out.push_back(exact_check(tag + "tensorization", bad_tensor, prm.random_samples));
      }
    }

    // |prod x_i - prod y_i| <= |x - y|_1 on [0,1]^d.
    std::size_t bad_prod = 0;
    for (std::size_t t = 0; t < prm.random_samples; ++t) {
      const Point x = random_point(rng, d, 0, 256, -8), y = random_point(rng, d, 0, 256, -8);
      DyadicRational px(1), py(1);
      for (std::size_t i = 0; i < d; ++i) {
        px *= x[i];
        py *= y[i];
      }
      if (abs(px - py) > l1_dist(x, y)) ++bad_prod;
    }
    out.push_back(exact_check("lambda.d" + std::to_string(d) + ".product_bound", bad_prod, prm.random_samples));
  }
  return out;
}

/// Boundary points evaluated through every containing cube agree with lambda.
inline std::vector<Check> well_defined_checks(const LambdaParams& prm) {
  std::vector<Check> out;
  for (std::size_t d : prm.dims)
    for (int r : prm.cell_log2) {
      const GridSpec grid(d, r);
      const long long per = 1LL << (r - prm.mesh_log2);
      const long long lo = -per, hi = (prm.cells - 1) * per;
      std::size_t boundary = 0, evaluations = 0, bad = 0;
      detail::for_each_box(d, lo, hi, [&](const std::vector<long long>& k) {
        bool on_face = false;
        for (auto ki : k) on_face = on_face || ki % per == 0;
        if (!on_face) return;
        ++boundary;
        const Point x = detail::mesh_point(k, prm.mesh_log2);
        const auto cubes = cubes_containing(x, grid);
        std::set<Point> verts;
        for (const auto& q : cubes)
          for (auto& v : q.vertices()) verts.insert(std::move(v));
        bool ok = true;
        for (const auto& v : verts) {
          const DyadicRational ref = lambda(v, x, grid);
          for (const auto& q : cubes) {
            ++evaluations;
            if (lambda_via_cube(v, x, q) != ref) ok = false;
          }
        }
        if (!ok) ++bad;
      });
      out.push_back(exact_check("well_defined.d" + std::to_string(d) + "." + detail::mesh_tag(r), bad, boundary,
                                std::to_string(evaluations) + " cube evaluations"));
    }
  return out;
}

// ---------------------------------------------------------------- retraction

struct RetractionParams {
  std::vector<std::size_t> dims{1, 2};
  std::vector<double> ps{1.0, 2.0 / 3.0, 0.5};
  int mesh_log2 = -3;
};

inline std::vector<Check> retraction_checks(const RetractionParams& prm) {
  std::vector<Check> out;
  for (std::size_t d : prm.dims) {
    const Patch patch = Patch::four_cube(d);
    std::size_t bad_id = 0;
    for (const auto& v : patch.vertices())
      if (retraction_image(v, patch) != Molecule::delta(patch.vertex_space(), v)) ++bad_id;
    const std::string tag = "retraction.d" + std::to_string(d) + ".";
    out.push_back(exact_check(tag + "identity_on_vertices", bad_id, patch.vertices().size()));
    for (double p : prm.ps) {
      ProbeOptions opt;
      opt.mesh_log2 = prm.mesh_log2;
      const ProbeReport rep = lipschitz_probe(patch, p, opt);
      const std::string pt = tag + detail::p_tag(p) + ".";
      out.push_back(bound_check(pt + "lipschitz_envelope", rep.measured_max, rep.envelope, 0,
                                "pairs " + std::to_string(rep.samples) + "; stated constant " + fmt(rep.stated_constant) +
                                    (rep.stated_constant_holds() ? " holds" : " exceeded") +
                                    "; p-th power reading " + (rep.literal_chain_holds() ? "holds" : "exceeded") +
                                    "; argmax " + rep.argmax_x.to_string() + " " + rep.argmax_y.to_string()));
      out.push_back(bound_check(pt + "within_cube_chain", rep.within_cube_max_excess, 0, 1e-9,
                                "excess of ||r(x)-r(y)||^p over (2^d-1)|x-y|_1^p; pairs " +
                                    std::to_string(rep.within_cube_pairs)));
    }
  }
  return out;
}

// ---------------------------------------------------------------- projection

struct ProjectionConfig {
  DyadicRational t, r, t2, r2;  ///< P_{t,R} and P_{t2,R2}: R2 | R, R | t, R2 | t2, t <= t2
};

inline std::vector<ProjectionConfig> default_projection_configs() {
  auto q = [](const char* s) { return DyadicRational::parse(s); };
  return {{q("1"), q("1"), q("2"), q("1/2")},
          {q("1"), q("1/2"), q("1"), q("1/4")},
          {q("2"), q("1"), q("4"), q("1/4")},
          {q("1/2"), q("1/2"), q("3/2"), q("1/4")},
          {q("2"), q("2"), q("3"), q("1")}};
}

struct ProjectionParams {
  std::vector<std::size_t> dims{1, 2};
  std::size_t samples = 20;  ///< random molecules per configuration
  std::vector<ProjectionConfig> configs = default_projection_configs();
  std::uint64_t seed = 42;
};

inline Molecule random_full_molecule(Rng& rng, std::size_t d, long long half_units, int log2_mesh, std::size_t max_terms) {
  Molecule m(Space::full(d));
  const auto terms = static_cast<std::size_t>(rng.uniform(1, static_cast<long long>(max_terms)));
  for (std::size_t i = 0; i < terms; ++i) m.accumulate(random_point(rng, d, -half_units, half_units, log2_mesh), random_rational(rng));
  return m;
}

inline std::vector<Check> projection_checks(const ProjectionParams& prm) {
  std::vector<Check> out;
  Rng rng(prm.seed);
  for (std::size_t d : prm.dims) {
    for (std::size_t ci = 0; ci < prm.configs.size(); ++ci) {
      const auto& c = prm.configs[ci];
      const GridSpec g1(d, log2_exact(c.r).value()), g2(d, log2_exact(c.r2).value());
      std::size_t bad = 0;
      for (std::size_t s = 0; s < prm.samples; ++s) {
        const Molecule m = random_full_molecule(rng, d, 48, -3, 6);
        const Molecule a = project(m, c.t, g1);
        const Molecule ab = project(project(m, c.t2, g2), c.t, g1);
        const Molecule ba = project(project(m, c.t, g1), c.t2, g2);
        if (ab != a || ba != a) ++bad;
      }
      const std::string name = "projection.d" + std::to_string(d) + ".config" + std::to_string(ci) +
                               "[t=" + c.t.to_string() + ",R=" + c.r.to_string() + ",t'=" + c.t2.to_string() +
                               ",R'=" + c.r2.to_string() + "].composition";
      out.push_back(exact_check(name, bad, prm.samples));
    }
    // Clamp commutes with lattice retraction; retraction refines and is idempotent.
    std::size_t bad_clamp = 0, bad_refine = 0, bad_idem = 0;
    for (std::size_t s = 0; s < prm.samples; ++s) {
      const Molecule m = random_full_molecule(rng, d, 48, -3, 6);
      const int r = static_cast<int>(rng.uniform(-2, 0));
      const DyadicRational t = DyadicRational(rng.uniform(1, 3)).ldexp(r);
      const GridSpec g(d, r), coarse(d, r + static_cast<int>(rng.uniform(1, 2)));
      if (clamp_linearized(retract(m, g), t) != retract(clamp_linearized(m, t), g)) ++bad_clamp;
      if (retract(retract(m, g), coarse) != retract(m, coarse)) ++bad_refine;
      if (retract(retract(m, g), g) != retract(m, g)) ++bad_idem;
    }
    const std::string tag = "projection.d" + std::to_string(d) + ".";
    out.push_back(exact_check(tag + "clamp_commutes_with_retract", bad_clamp, prm.samples));
    out.push_back(exact_check(tag + "retract_refinement", bad_refine, prm.samples));
    out.push_back(exact_check(tag + "retract_idempotent", bad_idem, prm.samples));
  }
  return out;
}

// ---------------------------------------------------------------- bases

inline double cube_block_constant(double p, std::size_t d) { return retraction_constant(p, d) * cube_glue_constant(p, d); }
inline double shell_block_constant(double p, std::size_t d) { return retraction_constant(p, d) * shell_glue_constant(p); }

struct BasisParams {
  std::vector<std::size_t> dims{1, 2};
  std::size_t samples = 20;       ///< random molecules for the round trips
  int max_depth = 3;              ///< cube depth; rd uses max_depth - 1
  int annihilation_depth = 2;     ///< exhaustive shell levels 0..annihilation_depth
  std::vector<double> ps{0.5};    ///< exponents for the norm-based checks
  std::size_t norm_samples = 3;   ///< molecules for the partial-sum bound
  std::size_t max_blocks = 4;     ///< sign-flip blocks per (basis, d, p)
  CutoffSequence cutoffs = CutoffSequence::linear(2);
  std::uint64_t seed = 42;
};

namespace detail {

inline GroundSet ground_of(const std::set<Point>& pts, std::size_t d) { return GroundSet::from_points(Point::origin(d), pts); }

/// max over sign patterns of ||sum eps_i c_i f_i|| / ||sum c_i f_i||, norms exact over the union support.
inline double sign_flip_ratio(const std::vector<Molecule>& vecs, const std::vector<Rational>& coeffs, double p) {
  std::set<Point> pts;
  for (const auto& f : vecs)
    for (const auto& x : f.support()) pts.insert(x);
  const GroundSet g = ground_of(pts, vecs.front().space().dim());
  Molecule base(vecs.front().space());
  for (std::size_t i = 0; i < vecs.size(); ++i) base = base + scale(coeffs[i], vecs[i]);
  const double denom = exact_norm_dp(base, g, p);
  double worst = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << vecs.size()); ++mask) {
    Molecule m(vecs.front().space());
    for (std::size_t i = 0; i < vecs.size(); ++i) m = m + scale(mask >> i & 1 ? -coeffs[i] : coeffs[i], vecs[i]);
    worst = std::max(worst, exact_norm_dp(m, g, p) / denom);
  }
  return worst;
}

/// Greedy groups of at most 8 vectors whose union support plus origin stays within `cap` points.
inline std::vector<std::vector<std::size_t>> greedy_blocks(const std::vector<Molecule>& vecs, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::set<Point> pts;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    std::set<Point> next = pts;
    for (const auto& x : vecs[i].support()) next.insert(x);
    next.insert(Point::origin(vecs[i].space().dim()));
    if (cur.size() == 8 || next.size() > cap) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      next.clear();
      for (const auto& x : vecs[i].support()) next.insert(x);
      next.insert(Point::origin(vecs[i].space().dim()));
      if (next.size() > cap) continue;
    }
    cur.push_back(i);
    pts = std::move(next);
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

/// Sign-flip ratios on level blocks of the cube basis, against C * C1.
inline std::vector<Check> cube_unconditionality_checks(const BasisParams& prm) {
  std::vector<Check> out;
  Rng rng(prm.seed + 7);
  for (std::size_t d : prm.dims)
    for (double p : prm.ps) {
      const double bound = cube_block_constant(p, d);
      double worst = 0;
      std::size_t blocks = 0, vectors = 0;
      const int top = d == 1 ? 3 : 2;
      for (int n = 1; n <= top; ++n) {
        std::vector<Molecule> level;
        for (const auto& idx : arrangement(n, d))
          if (idx.level == n) level.push_back(basis_vector(idx));
        std::size_t used = 0;
        for (const auto& blk : detail::greedy_blocks(level, 9)) {
          if (blk.size() < 2 || used == prm.max_blocks) continue;
          ++used;
          std::vector<Molecule> vecs;
          std::vector<Rational> cs;
          for (auto i : blk) {
            vecs.push_back(level[i]);
            cs.push_back(random_rational(rng));
          }
          worst = std::max(worst, detail::sign_flip_ratio(vecs, cs, p));
          ++blocks;
          vectors += blk.size();
        }
      }
      out.push_back(bound_check("basis_cube.d" + std::to_string(d) + "." + detail::p_tag(p) + ".block_unconditional",
                                worst, bound, 1e-6,
                                std::to_string(blocks) + " blocks, " + std::to_string(vectors) + " vectors; bound C*C1"));
    }
  return out;
}

/// Sign-flip ratios on single shells (against C * C_p) and on inner-refine
/// level blocks (against C * C1) of the R^d basis.
inline std::vector<Check> rd_unconditionality_checks(const BasisParams& prm) {
  std::vector<Check> out;
  Rng rng(prm.seed + 11);
  const auto& k = prm.cutoffs;
  for (std::size_t d : prm.dims)
    for (double p : prm.ps) {
      double worst_shell = 0, worst_inner = 0;
      std::size_t shell_blocks = 0, inner_blocks = 0;
      for (int n = 0; n <= 1; ++n) {
        std::map<std::pair<int, DyadicRational>, std::vector<Molecule>> shells;
        std::vector<Molecule> inner;
        for (const auto& idx : arrangement_rd(n, d, k)) {
          if (idx.level != n) continue;
          if (idx.kind == RdKind::OuterShell) shells[{idx.level, idx.eta}].push_back(basis_vector_rd(idx, k));
          else inner.push_back(basis_vector_rd(idx, k));
        }
        for (const auto& [eta, vecs] : shells) {
          std::size_t used = 0;
          for (const auto& blk : detail::greedy_blocks(vecs, 12)) {
            if (blk.size() < 2 || used == prm.max_blocks) continue;
            ++used;
            std::vector<Molecule> v;
            std::vector<Rational> cs;
            for (auto i : blk) {
              v.push_back(vecs[i]);
              cs.push_back(random_rational(rng));
            }
            worst_shell = std::max(worst_shell, detail::sign_flip_ratio(v, cs, p));
            ++shell_blocks;
          }
        }
        std::size_t used = 0;
        for (const auto& blk : detail::greedy_blocks(inner, 9)) {
          if (blk.size() < 2 || used == prm.max_blocks) continue;
          ++used;
          std::vector<Molecule> v;
          std::vector<Rational> cs;
          for (auto i : blk) {
            v.push_back(inner[i]);
            cs.push_back(random_rational(rng));
          }
          worst_inner = std::max(worst_inner, detail::sign_flip_ratio(v, cs, p));
          ++inner_blocks;
        }
      }
      const std::string tag = "basis_rd.d" + std::to_string(d) + "." + detail::p_tag(p) + ".";
      out.push_back(bound_check(tag + "shell_block_unconditional", worst_shell, shell_block_constant(p, d), 1e-6,
                                std::to_string(shell_blocks) + " blocks; bound C*(1+2^(1/p))"));
      out.push_back(bound_check(tag + "inner_block_unconditional", worst_inner, cube_block_constant(p, d), 1e-6,
                                std::to_string(inner_blocks) + " blocks; bound C*C1"));
    }
  return out;
}

inline Molecule random_cube_molecule(Rng& rng, std::size_t d, int depth, std::size_t max_terms) {
  Molecule m(Space::unit_cube(d));
  const auto terms = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(max_terms)));
  for (std::size_t i = 0; i < terms; ++i) m.accumulate(random_point(rng, d, 0, 1LL << depth, -depth), random_rational(rng));
  return m;
}

inline Molecule random_rd_molecule(Rng& rng, std::size_t d, int depth, const CutoffSequence& k, std::size_t max_terms) {
  Molecule m(Space::full(d));
  const long long r = k.at(depth) << depth;
  const auto terms = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(max_terms)));
  for (std::size_t i = 0; i < terms; ++i) m.accumulate(random_point(rng, d, -r, r, -depth), random_rational(rng));
  return m;
}

inline std::vector<Check> basis_cube_checks(const BasisParams& prm, bool with_norms = true) {
  std::vector<Check> out;
  Rng rng(prm.seed);
  for (std::size_t d : prm.dims) {
    std::size_t bad_round = 0, bad_trunc = 0, truncations = 0;
    for (std::size_t s = 0; s < prm.samples; ++s) {
      const int depth = static_cast<int>(rng.uniform(0, prm.max_depth));
      const Molecule m = random_cube_molecule(rng, d, depth, 6);
      const auto coeffs = expand(m, depth);
      if (reconstruct(coeffs, d) != m) ++bad_round;
      for (int n = 0; n <= depth; ++n) {
        CubeBasisCoefficients head;
        for (const auto& c : coeffs)
          if (c.index.level <= n) head.push_back(c);
        ++truncations;
        if (reconstruct(head, d) != retract(m, GridSpec(d, -n))) ++bad_trunc;
      }
    }
    const std::string tag = "basis_cube.d" + std::to_string(d) + ".";
    out.push_back(exact_check(tag + "round_trip", bad_round, prm.samples));
    out.push_back(exact_check(tag + "truncation_is_retraction", bad_trunc, truncations));

    // Block projections on level 2.
    std::vector<Point> level;
    for (const auto& idx : arrangement(2, d))
      if (idx.level == 2) level.push_back(idx.point);
    std::size_t bad_block = 0;
    for (std::size_t s = 0; s < prm.samples; ++s) {
      Molecule m(Space::unit_cube(d));
      std::set<Point> f1, f2;
      for (const auto& x : level) {
        m = m + scale(random_rational(rng), basis_vector({2, x}));
        const auto pick = rng.uniform(0, 2);
        if (pick == 0) f1.insert(x);
        if (pick == 1) f2.insert(x);
      }
      const Molecule q1 = block_projection(2, f1, m), q2 = block_projection(2, f2, m);
      if (block_projection(2, f1, q1) != q1 || block_projection(2, f1, q2) != block_projection(2, f2, q1) ||
          !block_projection(2, f1, q2).empty())
        ++bad_block;
    }
    out.push_back(exact_check(tag + "block_projection_idempotent_commuting", bad_block, prm.samples));

    if (!with_norms) continue;
    // Partial sums over the fixed ground set V_N (nine points).
    const int depth = d == 1 ? 3 : 1;
    const auto all = level_points(depth, d);
    const GroundSet g = detail::ground_of({all.begin(), all.end()}, d);
    const auto order = arrangement(depth, d);
    for (double p : prm.ps) {
      const double k_const = std::pow(2.0, 1.0 / p) * cube_block_constant(p, d);
      double worst = 0;
      for (std::size_t s = 0; s < prm.norm_samples; ++s) {
        Molecule m = random_cube_molecule(rng, d, depth, 4);
        if (m.empty()) m.accumulate(all.back(), Rational(1));
        const double base = exact_norm_dp(m, g, p);
        const auto coeffs = expand(m, depth);
        for (std::size_t j = 0; j <= order.size(); ++j) {
          CubeBasisCoefficients head;
          for (const auto& c : coeffs)
            if (j == order.size() || c.index < order[j]) head.push_back(c);
          worst = std::max(worst, exact_norm_dp(reconstruct(head, d), g, p) / base);
        }
      }
      out.push_back(bound_check(tag + detail::p_tag(p) + ".partial_sum_bound", worst, k_const, 1e-9,
                                "max ||P_j m|| / ||m|| over V_" + std::to_string(depth) + "; bound 2^(1/p)*C*C1"));
    }
  }
  if (with_norms) {
    auto u = cube_unconditionality_checks(prm);
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

inline std::vector<Check> basis_rd_checks(const BasisParams& prm, bool with_norms = true) {
  std::vector<Check> out;
  Rng rng(prm.seed + 1);
  const auto& k = prm.cutoffs;
  const int rd_depth = std::max(0, prm.max_depth - 1);
  for (std::size_t d : prm.dims) {
    std::size_t bad_round = 0, residue = 0;
    for (std::size_t s = 0; s < prm.samples; ++s) {
      const int depth = static_cast<int>(rng.uniform(0, rd_depth));
      const Molecule m = random_rd_molecule(rng, d, depth, k, 6);
      try {
        if (reconstruct_rd(expand_rd(m, depth, k), d, k) != m) ++bad_round;
      } catch (const InternalError&) {
        ++residue;
        ++bad_round;
      }
    }
    const std::string tag = "basis_rd.d" + std::to_string(d) + ".";
    out.push_back(exact_check(tag + "round_trip", bad_round, prm.samples));
    out.push_back(exact_check(tag + "peeling_residue_zero", residue, prm.samples));

    std::size_t bad_ladder = 0, ladder_cases = 0;
    for (std::size_t s = 0; s < prm.samples; ++s) {
      const Molecule m = random_rd_molecule(rng, d, rd_depth, k, 4);
      const int i = static_cast<int>(rng.uniform(-2, 8)), j = static_cast<int>(rng.uniform(-2, 8));
      ++ladder_cases;
      const Molecule a = projection_ladder(i, projection_ladder(j, m, k), k);
      if (a != projection_ladder(std::min(i, j), m, k) || a != projection_ladder(j, projection_ladder(i, m, k), k))
        ++bad_ladder;
    }
    out.push_back(exact_check(tag + "ladder_algebra", bad_ladder, ladder_cases));

    std::size_t shell_points = 0, bad_annih = 0, bad_clamp = 0, bad_peel = 0;
    for (int n = 0; n <= prm.annihilation_depth; ++n)
      for (const auto& x : rd_window(n, d, k)) {
        if (x.is_origin() || rd_level(x, k) != n) continue;
        const RdBasisIndex idx = rd_index(x, k);
        if (idx.kind != RdKind::OuterShell) continue;
        ++shell_points;
        if (!projection_ladder(2 * n - 1, basis_vector_rd(idx, k), k).empty()) ++bad_annih;
        const Point y = shell_map(x, n, k);
        const DyadicRational inner(k.at(n - 1));
        if (clamp_point(x, inner) != clamp_point(y, inner)) ++bad_clamp;
        if (sup_norm(y) != sup_norm(x) - DyadicRational::pow2(-n)) ++bad_peel;
      }
    out.push_back(exact_check(tag + "outer_shell_annihilation", bad_annih, shell_points,
                              "levels 0.." + std::to_string(prm.annihilation_depth)));
    out.push_back(exact_check(tag + "clamp_compatibility", bad_clamp, shell_points));
    out.push_back(exact_check(tag + "peeling_step", bad_peel, shell_points));

    if (!with_norms || d != 1) continue;
    // Partial sums over the window V_1 in d = 1 (thirteen points).
    const auto window = rd_window(1, 1, k);
    const GroundSet g = detail::ground_of({window.begin(), window.end()}, 1);
    const auto order = arrangement_rd(1, 1, k);
    for (double p : prm.ps) {
      const double k_const = std::pow(2.0, 1.0 / p) * shell_block_constant(p, 1);
      double worst = 0;
      for (std::size_t s = 0; s < prm.norm_samples; ++s) {
        Molecule m = random_rd_molecule(rng, 1, 1, k, 4);
        if (m.empty()) m.accumulate(window.back(), Rational(1));
        const double base = exact_norm_dp(m, g, p);
        const auto coeffs = expand_rd(m, 1, k);
        for (std::size_t j = 0; j <= order.size(); ++j) {
          RdBasisCoefficients head;
          for (const auto& c : coeffs)
            if (j == order.size() || c.index < order[j]) head.push_back(c);
          worst = std::max(worst, exact_norm_dp(reconstruct_rd(head, 1, k), g, p) / base);
        }
      }
      out.push_back(bound_check(tag + detail::p_tag(p) + ".partial_sum_bound", worst, k_const, 1e-9,
                                "max ||P_j m|| / ||m|| over V_1; bound 2^(1/p)*C*(1+2^(1/p))"));
    }
  }
  if (with_norms) {
    auto u = rd_unconditionality_checks(prm);
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

// ---------------------------------------------------------------- norms

struct NormParams {
  std::size_t line_samples = 100;       ///< molecules against the line formula
  std::size_t oracle_samples = 40;      ///< molecules against brute-force forests, per p
  std::size_t perturbation_molecules = 4;
  std::size_t perturbations = 500;      ///< per molecule and p
  std::size_t axiom_samples = 40;
  std::uint64_t seed = 42;
};

inline std::vector<Check> norm_oracle_checks(const NormParams& prm) {
  std::vector<Check> out;
  Rng rng(prm.seed);
  const Space line = Space::full(1);
  auto pt1 = [](const char* s) { return Point{DyadicRational::parse(s)}; };

  {
    const Molecule m = Molecule::canonicalize({{pt1("1"), 1}, {pt1("2"), 1}}, line);
    const GroundSet g = GroundSet::from_support(m);
    out.push_back(bound_check("norm.worked.p=1", std::fabs(exact_norm(m, g, 1.0).value - 3.0), 0, 1e-12));
    out.push_back(bound_check("norm.worked.p=1/2", std::fabs(exact_norm(m, g, 0.5).value - (3 + 2 * std::sqrt(2.0))), 0,
                              1e-12));
    out.push_back(bound_check("norm.worked.delta.p=1/2",
                              std::fabs(exact_norm(Molecule::delta(line, pt1("1")), GroundSet::from_support(Molecule::delta(line, pt1("1"))), 0.5).value - 1.0),
                              0, 1e-12));
  }

  // p = 1 on the line against the integral formula.
  double worst_line = 0;
  for (std::size_t s = 0; s < prm.line_samples; ++s) {
    Molecule m(line);
    const auto terms = rng.uniform(1, 7);
    for (long long i = 0; i < terms; ++i) m.accumulate(random_point(rng, 1, -32, 32, -2), random_rational(rng));
    if (m.empty()) continue;
    const double ref = line_f1_norm(m);
    const double v = exact_norm(m, GroundSet::from_support(m), 1.0).value;
    worst_line = std::max(worst_line, std::fabs(v - ref) / std::max(1.0, ref));
  }
  out.push_back(bound_check("norm.line_formula_p=1", worst_line, 0, 1e-12,
                            std::to_string(prm.line_samples) + " molecules, up to 7 points; relative error"));

  // Brute-force forest enumeration on ground sets of at most five points.
  for (double p : {1.0, 0.5}) {
    double worst = 0;
    for (std::size_t s = 0; s < prm.oracle_samples; ++s) {
      const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 2));
      const Space sp = Space::full(d);
      std::set<Point> pts;
      const auto size = rng.uniform(1, 4);
      while (static_cast<long long>(pts.size()) < size) {
        Point x = random_point(rng, d, -8, 8, -1);
        if (!x.is_origin()) pts.insert(std::move(x));
      }
      const GroundSet g = GroundSet::from_points(Point::origin(d), pts);
      Molecule m(sp);
      for (const auto& x : pts)
        if (rng.uniform(0, 3) > 0) m.accumulate(x, random_rational(rng));
      if (m.empty()) m.accumulate(*pts.begin(), Rational(1));
      const double ref = brute_force_norm(m, g, p).value;
      worst = std::max(worst, std::fabs(exact_norm(m, g, p).value - ref) / std::max(1.0, ref));
    }
    out.push_back(bound_check("norm.brute_force." + detail::p_tag(p), worst, 0, 1e-12,
                              std::to_string(prm.oracle_samples) + " molecules, |S| <= 5; relative error"));
  }

  // Random circulations on the optimal flow never beat it.
  for (double p : {1.0, 0.5}) {
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t trials = 0;
    for (std::size_t s = 0; s < prm.perturbation_molecules; ++s) {
      Molecule m(Space::full(2));
      std::set<Point> pts;
      while (pts.size() < 5) {
        Point x = random_point(rng, 2, -8, 8, -1);
        if (!x.is_origin()) pts.insert(std::move(x));
      }
      for (const auto& x : pts) m.accumulate(x, random_rational(rng));
      const GroundSet g = GroundSet::from_points(Point::origin(2), pts);
      const auto rep = perturbation_search(m, g, p, prm.perturbations, rng);
      worst = std::max(worst, rep.optimum - rep.best_found);
      trials += rep.trials;
    }
    out.push_back(bound_check("norm.perturbation." + detail::p_tag(p), worst, 0, 1e-9,
                              std::to_string(trials) + " perturbed representations; measured = optimum - best found"));
  }
  return out;
}

inline std::vector<Check> norm_axiom_checks(const NormParams& prm) {
  std::vector<Check> out;
  Rng rng(prm.seed + 3);
  auto random_ground = [&](std::size_t d, std::size_t size) {
    std::set<Point> pts;
    while (pts.size() < size) {
      Point x = random_point(rng, d, -8, 8, -1);
      if (!x.is_origin()) pts.insert(std::move(x));
    }
    return pts;
  };
  auto random_on = [&](const std::set<Point>& pts, std::size_t d) {
    Molecule m(Space::full(d));
    for (const auto& x : pts)
      if (rng.uniform(0, 2) > 0) m.accumulate(x, random_rational(rng));
    if (m.empty()) m.accumulate(*pts.begin(), Rational(1));
    return m;
  };

  double homog = 0, tri = -1e300, two = 0, p_vs_1 = -1e300, mono = -1e300;
  for (std::size_t s = 0; s < prm.axiom_samples; ++s) {
    const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 2));
    const double p = std::vector<double>{1.0, 2.0 / 3.0, 0.5}[static_cast<std::size_t>(rng.uniform(0, 2))];
    const auto pts = random_ground(d, static_cast<std::size_t>(rng.uniform(2, 6)));
    const GroundSet g = GroundSet::from_points(Point::origin(d), pts);
    const Molecule m1 = random_on(pts, d), m2 = random_on(pts, d);
    const double n1 = exact_norm(m1, g, p).value, n2 = exact_norm(m2, g, p).value;

    const Rational c = random_rational(rng);
    const double nc = exact_norm(scale(c, m1), g, p).value;
    homog = std::max(homog, std::fabs(nc - std::fabs(c.convert_to<double>()) * n1) / std::max(1.0, nc));

    const Molecule sum = m1 + m2;
    const double ns = sum.empty() ? 0.0 : exact_norm(sum, g, p).value;
    tri = std::max(tri, std::pow(ns, p) - std::pow(n1, p) - std::pow(n2, p));

    p_vs_1 = std::max(p_vs_1, exact_norm(m1, g, 1.0).value - n1);

    // Two points and the base.
    const Point x = *pts.begin(), y = *pts.rbegin();
    const Molecule diff = Molecule::delta(Space::full(d), x) - Molecule::delta(Space::full(d), y);
    const GroundSet g2 = GroundSet::from_points(Point::origin(d), {x, y});
    two = std::max(two, std::fabs(exact_norm(diff, g2, p).value - sup_dist(x, y).to_double()));

    // Augment the ground set with lattice points of the box.
    std::set<Point> big = pts;
    for (const auto& v : lattice_box(d, DyadicRational(4), d == 1 ? 1 : 2))
      if (big.size() < 14) big.insert(v);
    const GroundSet gb = GroundSet::from_points(Point::origin(d), big);
    mono = std::max(mono, exact_norm_dp(m1, gb, p) - n1);
  }
  const std::string n = std::to_string(prm.axiom_samples) + " molecules";
  out.push_back(bound_check("norm.axiom.homogeneity", homog, 0, 1e-12, n + "; relative error"));
  out.push_back(bound_check("norm.axiom.p_triangle", tri, 0, 1e-9, n + "; measured = ||a+b||^p - ||a||^p - ||b||^p"));
  out.push_back(bound_check("norm.axiom.two_point", two, 0, 1e-12, n));
  out.push_back(bound_check("norm.axiom.dominates_p=1", p_vs_1, 0, 1e-12, n + "; measured = ||m||_1 - ||m||_p"));
  out.push_back(bound_check("norm.axiom.ground_set_monotone", mono, 0, 1e-12, n + "; measured = ||m||_{S+grid} - ||m||_S"));
  return out;
}

// ---------------------------------------------------------------- reports

struct SuiteConfig {
  std::size_t d = 0;  ///< 0: the suite's default dimensions
  double p = 0;       ///< 0: the suite's default exponents
  std::uint64_t seed = 42;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::vector<Check> checks;

  bool overall() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lambda", "retraction", "projection", "basis-cube", "basis-rd", "norm-oracle"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  const bool known = name == "all" || std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end();
  if (!known) throw ParseError("unknown suite '" + name + "'");
  if (cfg.p != 0) fpbasis::detail::check_p(cfg.p);
  SuiteReport rep{name, cfg, {}};
  auto add = [&](std::vector<Check> v) { rep.checks.insert(rep.checks.end(), v.begin(), v.end()); };
  auto dims = [&](std::vector<std::size_t> dflt) { return cfg.d ? std::vector<std::size_t>{cfg.d} : dflt; };
  auto ps = [&](std::vector<double> dflt) { return cfg.p ? std::vector<double>{cfg.p} : dflt; };
  auto wants = [&](const char* s) { return name == "all" || name == s; };

  if (wants("lambda")) {
    LambdaParams lp;
    lp.dims = dims({1, 2});
    lp.seed = cfg.seed;
    if (std::find(lp.dims.begin(), lp.dims.end(), 3) != lp.dims.end()) {
      lp.mesh_log2 = -2;
      lp.cell_log2 = {0, -1};
      lp.ratio_log2 = {1};
    }
    add(lambda_checks(lp));
    add(well_defined_checks(lp));
  }
  if (wants("retraction")) {
    RetractionParams rp;
    rp.dims = dims({1, 2});
    if (std::any_of(rp.dims.begin(), rp.dims.end(), [](std::size_t d) { return d > 2; }))
      throw DomainError("retraction suite supports d in {1, 2}");
    rp.ps = ps({1.0, 2.0 / 3.0, 0.5});
    rp.mesh_log2 = -2;
    add(retraction_checks(rp));
  }
  if (wants("projection")) {
    ProjectionParams pp;
    pp.dims = dims({1, 2});
    pp.seed = cfg.seed;
    add(projection_checks(pp));
  }
  if (wants("basis-cube") || wants("basis-rd")) {
    BasisParams bp;
    bp.dims = dims({1, 2});
    if (std::any_of(bp.dims.begin(), bp.dims.end(), [](std::size_t d) { return d > 2; }))
      throw DomainError("basis suites support d in {1, 2}");
    bp.ps = ps({0.5});
    bp.seed = cfg.seed;
    bp.max_blocks = 2;
    if (wants("basis-cube")) add(basis_cube_checks(bp));
    if (wants("basis-rd")) add(basis_rd_checks(bp));
  }
  if (wants("norm-oracle")) {
    NormParams np;
    np.seed = cfg.seed;
    add(norm_oracle_checks(np));
    add(norm_axiom_checks(np));
  }
  std::stable_sort(rep.checks.begin(), rep.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  return rep;
}

inline io::Json to_json(const Check& c) {
  io::Json j = {{"name", c.name},
                {"status", c.pass ? "pass" : "fail"},
                {"measured", c.measured},
                {"bound", c.bound},
                {"tolerance", c.tolerance}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline io::Json to_json(const SuiteReport& r) {
  io::Json checks = io::Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  io::Json config = {{"d", r.config.d == 0 ? io::Json("default") : io::Json(r.config.d)},
                     {"p", r.config.p == 0 ? io::Json("default") : io::Json(r.config.p)}};
  return {{"suite", r.suite},
          {"seed", r.config.seed},
          {"config", config},
          {"overall", r.overall() ? "pass" : "fail"},
          {"checks", checks}};
}

}  // namespace fpbasis::verify
