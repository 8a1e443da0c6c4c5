#pragma once

// Free p-norms of molecules over finite pointed ground sets, 0 < p <= 1.
//
// The norm of m = sum a_i delta(x_i) over a finite set S is the infimum of
// (sum_j |b_j|^p d(x_j, y_j)^p)^(1/p) over all representations
// m = sum_j b_j (delta(y_j) - delta(x_j)) with x_j, y_j in S.  A
// representation is an edge flow on the complete graph over S whose node
// divergences equal the coefficients of m (the base absorbs -sum a_i).
//
// Why spanning trees suffice: the cost sum_e |f_e|^p c_e is concave on each
// sign-orthant of flow space, and the feasible flows of one orthant form a
// polyhedron.  A concave function attains its minimum over a polyhedron at
// a vertex, and the vertices are exactly the flows whose support is a forest
// (a cycle in the support could be perturbed in both directions).  Every
// forest extends to a spanning tree carrying zero flow on the extra edges, at
// equal cost.  So the minimum over all labeled spanning trees of the unique
// tree flow is the exact norm.  Trees are enumerated through Pruefer
// sequences; an independent subset dynamic program over rooted trees gives a
// second exact route used for bulk evaluation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <thread>
#include <vector>

#include "fpbasis/molecule.hpp"

namespace fpbasis {

enum class Metric { Sup, L1 };

/// A finite pointed subset of R^d.  Index 0 is always the base point.
class GroundSet {
 public:
  GroundSet(const Point& base, const std::vector<Point>& others, Metric metric = Metric::Sup)
      : metric_(metric) {
    points_.push_back(base);
    for (const auto& p : others) {
      require_same_dim(p, base);
      if (p == base) continue;
      if (std::find(points_.begin(), points_.end(), p) != points_.end())
        throw DomainError("ground set points must be distinct: " + p.to_string());
      points_.push_back(p);
    }
  }

  /// supp(m) together with the molecule's base point.
  static GroundSet from_support(const Molecule& m, Metric metric = Metric::Sup) {
    return GroundSet(m.space().base(), m.support(), metric);
  }

  /// An arbitrary collection (duplicates merged) plus the base point.
  static GroundSet from_points(const Point& base, const std::set<Point>& pts, Metric metric = Metric::Sup) {
    std::vector<Point> others;
    for (const auto& p : pts)
      if (!(p == base)) others.push_back(p);
    return GroundSet(base, others, metric);
  }

  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  const Point& base() const { return points_[0]; }
  const std::vector<Point>& points() const { return points_; }
  Metric metric() const { return metric_; }

  std::optional<std::size_t> index_of(const Point& x) const {
    auto it = std::find(points_.begin(), points_.end(), x);
    if (it == points_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
  }

  DyadicRational distance(std::size_t i, std::size_t j) const {
    return metric_ == Metric::Sup ? sup_dist(points_[i], points_[j]) : l1_dist(points_[i], points_[j]);
  }

 private:
  std::vector<Point> points_;
  Metric metric_;
};

/// One edge of a witness tree; `flow` (exact) moves along from -> to, i.e.
/// contributes flow * (delta(to) - delta(from)).
struct WitnessEdge {
  std::size_t from;
  std::size_t to;
  Rational flow;
};

struct NormResult {
  double value = 0;        ///< exact norm, or the upper bound when !exact
  double p = 1;
  bool exact = true;
  double lower_bound = 0;  ///< the p = 1 (Kantorovich) value over the same ground set
  double upper_bound = 0;
  std::vector<WitnessEdge> witness_tree;
  std::vector<std::uint32_t> witness_pruefer;
};

struct NormOptions {
  std::size_t cap = 9;   ///< maximum ground-set size for exact Pruefer enumeration
  unsigned threads = 1;  ///< 0 = hardware concurrency
};

/// The unique flow on a spanning tree whose divergence (inflow - outflow) at
/// every non-base node equals the given value; the base absorbs the
/// negative total.  Flows are returned per input edge, oriented from
/// edges[k].first to edges[k].second.
inline std::vector<Rational> tree_flow(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                       const std::vector<Rational>& divergences, std::size_t base = 0) {
  const std::size_t n = divergences.size();
  if (n == 0 || base >= n) throw DomainError("tree_flow: empty node set");
  if (edges.size() + 1 != n) throw DomainError("tree_flow: a spanning tree on n nodes has n - 1 edges");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbor, edge id)
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [a, b] = edges[k];
    if (a >= n || b >= n || a == b) throw DomainError("tree_flow: bad edge");
    adj[a].push_back({b, k});
    adj[b].push_back({a, k});
  }
  // Root at the base; process nodes leaves-first.
  std::vector<std::size_t> order, parent_edge(n, SIZE_MAX), parent(n, SIZE_MAX);
  std::vector<bool> seen(n, false);
  order.push_back(base);
  seen[base] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t u = order[head];
    for (auto [v, k] : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        parent_edge[v] = k;
        order.push_back(v);
      }
  }
  if (order.size() != n) throw DomainError("tree_flow: edges do not span the node set");

  std::vector<Rational> acc(divergences);
  std::vector<Rational> flows(edges.size());
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t v = order[i];
    const std::size_t k = parent_edge[v];
    // acc[v] must flow from the parent into v's subtree.
    flows[k] = edges[k].second == v ? acc[v] : Rational(-acc[v]);
    acc[parent[v]] += acc[v];
  }
  return flows;
}

namespace detail {

/// d(i, j)^p for all pairs.
struct CostTable {
  std::size_t n = 0;
  std::vector<double> c;
  double operator()(std::size_t i, std::size_t j) const { return c[i * n + j]; }
};

inline double pow_p(double x, double p) {
  if (p == 1.0) return x;
  if (x == 0.0) return 0.0;
  return std::exp(p * std::log(x));
}

inline CostTable cost_table(const GroundSet& s, double p) {
  CostTable t;
  t.n = s.size();
  t.c.assign(t.n * t.n, 0.0);
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = i + 1; j < t.n; ++j) t.c[i * t.n + j] = t.c[j * t.n + i] = pow_p(s.distance(i, j).to_double(), p);
  return t;
}

/// Coefficients of m on the ground set scaled to integers: divergence[i] =
/// scale * a_i for i >= 1, and divergence[0] absorbs the negative sum.
struct ScaledDivergence {
  std::vector<BigInt> values;
  BigInt scale;  ///< common denominator
};

inline ScaledDivergence scaled_divergence(const Molecule& m, const GroundSet& s) {
  if (!(m.space().base() == s.base())) throw DomainError("ground set base differs from the molecule's base");
  std::vector<Rational> a(s.size());
  for (const auto& [x, c] : m.terms()) {
    auto i = s.index_of(x);
    if (!i) throw DomainError("support point " + x.to_string() + " not in ground set");
    a[*i] = c;
  }
  BigInt scale = 1;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const BigInt den = boost::multiprecision::denominator(a[i]);
    scale = scale / boost::multiprecision::gcd(scale, den) * den;
  }
  ScaledDivergence out;
  out.scale = scale;
  out.values.resize(s.size());
  BigInt total = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    out.values[i] = BigInt(boost::multiprecision::numerator(a[i]) * (scale / boost::multiprecision::denominator(a[i])));
    total += out.values[i];
  }
  out.values[0] = -total;
  return out;
}

inline bool fits_int64(const std::vector<BigInt>& v) {
  BigInt sum = 0;
  for (const auto& x : v) sum += abs(x);
  return sum < (BigInt(1) << 62);
}

inline std::vector<std::int64_t> to_int64(const std::vector<BigInt>& v) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].convert_to<std::int64_t>();
  return out;
}

inline double abs_to_double(std::int64_t x) { return static_cast<double>(x < 0 ? -x : x); }
inline double abs_to_double(const BigInt& x) { return abs(x).convert_to<double>(); }
inline bool is_zero(std::int64_t x) { return x == 0; }
inline bool is_zero(const BigInt& x) { return x.is_zero(); }

/// Decodes a Pruefer sequence into the edge list produced by successive
/// smallest-leaf removal (each edge is (leaf, neighbor)).
inline std::vector<std::pair<std::size_t, std::size_t>> pruefer_decode(const std::vector<std::uint32_t>& seq,
                                                                       std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (n < 2) return edges;
  std::vector<std::uint32_t> degree(n, 1);
  for (auto s : seq) ++degree[s];
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  std::size_t leaf = ptr;
  for (auto s : seq) {
    edges.push_back({leaf, s});
    if (--degree[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back({leaf, n - 1});
  return edges;
}

struct BlockBest {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> seq;
};

/// |sum_{i in S} div_i|^p for every subset S of the nodes, bit i <-> node i.
/// Every subtree divergence met during decoding is one of these sums.
template <class Int>
std::vector<double> subset_weights(const std::vector<Int>& div, double p) {
  const std::size_t n = div.size();
  std::vector<double> w(std::size_t{1} << n, 0.0);
  std::vector<Int> sum(w.size());
  for (std::size_t s = 1; s < w.size(); ++s) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(s));
    sum[s] = sum[s & (s - 1)] + div[low];
    w[s] = is_zero(sum[s]) ? 0.0 : pow_p(abs_to_double(sum[s]), p);
  }
  return w;
}

/// Minimum tree cost over all Pruefer sequences whose first digit is
/// `first`, scanned in lexicographic order; ties keep the earliest sequence.
/// Sequences costing more than `outside` (a cost already attained in another
/// block) are pruned; equal ones are kept so the block order decides ties.
inline BlockBest search_block(std::size_t n, std::uint32_t first, const std::vector<double>& weight,
                              const CostTable& cost, double outside) {
  BlockBest best;
  const std::size_t len = n - 2;
  std::vector<std::uint32_t> seq(len, 0);
  seq[0] = first;
  // Degrees of the current sequence, maintained across odometer steps.
  std::vector<std::uint32_t> seq_degree(n, 1u), degree(n), mask(n), unit_mask(n);
  for (auto s : seq) ++seq_degree[s];
  for (std::size_t i = 0; i < n; ++i) unit_mask[i] = 1u << i;
  while (true) {
    // Decode by smallest-leaf elimination, tracking each subtree as a node mask.
    std::copy(seq_degree.begin(), seq_degree.end(), degree.begin());
    std::copy(unit_mask.begin(), unit_mask.end(), mask.begin());
    std::size_t ptr = 0;
    while (degree[ptr] != 1) ++ptr;
    std::size_t leaf = ptr;
    double total = 0;
    bool pruned = false;
    for (std::size_t k = 0; k < len; ++k) {
      const std::uint32_t s = seq[k];
      total += weight[mask[leaf]] * cost(leaf, s);
      if (total >= best.cost || total > outside) {
        pruned = true;
        break;
      }
      mask[s] |= mask[leaf];
      if (--degree[s] == 1 && s < ptr) {
        leaf = s;
      } else {
        ++ptr;
        while (degree[ptr] != 1) ++ptr;
        leaf = ptr;
      }
    }
    if (!pruned) {
      total += weight[mask[leaf]] * cost(leaf, n - 1);
      if (total < best.cost && !(total > outside)) {
        best.cost = total;
        best.seq = seq;
      }
    }
    // Next sequence (odometer over positions 1..len-1).
    if (len <= 1) return best;
    std::size_t i = len;
    while (i > 1) {
      --i;
      --seq_degree[seq[i]];
      if (++seq[i] < n) {
        ++seq_degree[seq[i]];
        break;
      }
      seq[i] = 0;
      ++seq_degree[0];
      if (i == 1) return best;
    }
  }
}

template <class Int>
BlockBest pruefer_minimum(std::size_t n, const std::vector<Int>& div, const CostTable& cost, double p,
                          unsigned threads) {
  const auto weight = subset_weights(div, p);
  std::vector<BlockBest> blocks(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::atomic<double> shared{std::numeric_limits<double>::infinity()};
  auto work = [&](unsigned tid) {
    for (std::size_t b = tid; b < n; b += threads) {
      blocks[b] = search_block(n, static_cast<std::uint32_t>(b), weight, cost, shared.load());
      double cur = shared.load();
      while (blocks[b].cost < cur && !shared.compare_exchange_weak(cur, blocks[b].cost)) {
      }
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  BlockBest best;
  for (auto& b : blocks)
    if (b.cost < best.cost) best = std::move(b);
  return best;
}

/// Minimum over spanning trees rooted at node 0 of
/// sum_{v != 0} |D(subtree(v))|^p cost(v, parent(v)), by dynamic programming
/// over subsets of the non-base nodes.
template <class Int>
double subset_dp_min_cost(const std::vector<Int>& div, const CostTable& cost, double p) {
  const std::size_t n = div.size();
  if (n <= 1) return 0.0;
  const std::size_t k = n - 1;  // non-base nodes are 1..k, bit i <-> node i+1
  const std::size_t full = (std::size_t{1} << k) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> weight(full + 1, 0.0);
  {
    std::vector<Int> sum(full + 1);
    for (std::size_t s = 1; s <= full; ++s) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(s));
      sum[s] = sum[s & (s - 1)] + div[low + 1];
      weight[s] = is_zero(sum[s]) ? 0.0 : pow_p(abs_to_double(sum[s]), p);
    }
  }
  // F[S][c]: subtree spanning S rooted at c in S.  G[S][r]: S hung below r not in S.
  // H[U][c]: U split into blocks, each hung below c not in U.
  std::vector<double> F((full + 1) * k, inf), G((full + 1) * n, inf), H((full + 1) * n, inf);
  for (std::size_t r = 0; r < n; ++r) H[r] = 0.0;  // H[empty][r]
  for (std::size_t s = 1; s <= full; ++s) {
    for (std::size_t c = 0; c < k; ++c)
      if (s >> c & 1) F[s * k + c] = H[(s & ~(std::size_t{1} << c)) * n + (c + 1)];
    for (std::size_t r = 0; r < n; ++r) {
      if (r > 0 && (s >> (r - 1) & 1)) continue;
      double best = inf;
      for (std::size_t c = 0; c < k; ++c)
        if (s >> c & 1) best = std::min(best, F[s * k + c] + weight[s] * cost(c + 1, r));
      G[s * n + r] = best;
    }
    const std::size_t low = s & (~s + 1);
    const std::size_t rest = s ^ low;
    for (std::size_t r = 0; r < n; ++r) {
      if (r > 0 && (s >> (r - 1) & 1)) continue;
      double best = inf;
      // Blocks B containing the lowest element: B = low | sub, sub subset of rest.
      for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
        const std::size_t block = low | sub;
        best = std::min(best, G[block * n + r] + H[(s ^ block) * n + r]);
        if (sub == 0) break;
      }
      H[s * n + r] = best;
    }
  }
  return H[full * n + 0];
}

inline double cost_to_norm(double cost, double p, const BigInt& scale) {
  const double root = p == 1.0 ? cost : std::pow(cost, 1.0 / p);
  return root / scale.convert_to<double>();
}

/// Min-cost transport (p = 1) by successive shortest paths; returns the
/// transported amounts per ordered pair, in scaled units.
inline std::vector<double> transport_plan(const std::vector<double>& div, const CostTable& dist) {
  const std::size_t n = div.size();
  std::vector<double> supply(n), demand(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (div[i] < 0) supply[i] = -div[i];
    else demand[i] = div[i];
  }
  std::vector<double> plan(n * n, 0.0);
  const double eps = 1e-12 * (1.0 + std::accumulate(demand.begin(), demand.end(), 0.0));
  while (true) {
    // Bellman-Ford from a virtual source attached to all nodes with remaining supply.
    std::vector<double> dist_to(n, std::numeric_limits<double>::infinity());
    std::vector<std::ptrdiff_t> pred(n, -1);
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > eps) dist_to[i] = 0;
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (!std::isfinite(dist_to[u])) continue;
        for (std::size_t v = 0; v < n; ++v) {
          if (u == v) continue;
          // forward arc u->v always available; backward arc uses plan[v][u] > 0
          double c = dist(u, v);
          if (dist_to[u] + c < dist_to[v] - 1e-15) {
            dist_to[v] = dist_to[u] + c;
            pred[v] = static_cast<std::ptrdiff_t>(u);
            changed = true;
          }
          if (plan[v * n + u] > eps && dist_to[u] - c < dist_to[v] - 1e-15) {
            dist_to[v] = dist_to[u] - c;
            pred[v] = -static_cast<std::ptrdiff_t>(u) - 2;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::ptrdiff_t target = -1;
    for (std::size_t v = 0; v < n; ++v)
      if (demand[v] > eps && std::isfinite(dist_to[v]) && (target < 0 || dist_to[v] < dist_to[target]))
        target = static_cast<std::ptrdiff_t>(v);
    if (target < 0) break;
    // Bottleneck along the path.
    double amount = demand[target];
    std::size_t v = static_cast<std::size_t>(target);
    std::size_t guard = 0;
    while (pred[v] != -1) {
      if (pred[v] <= -2) {
        const std::size_t u = static_cast<std::size_t>(-pred[v] - 2);
        amount = std::min(amount, plan[v * n + u]);
        v = u;
      } else {
        v = static_cast<std::size_t>(pred[v]);
      }
      if (++guard > n) break;
    }
    amount = std::min(amount, supply[v]);
    const std::size_t source = v;
    v = static_cast<std::size_t>(target);
    while (pred[v] != -1 && guard-- > 0) {
      if (pred[v] <= -2) {
        const std::size_t u = static_cast<std::size_t>(-pred[v] - 2);
        plan[v * n + u] -= amount;
        v = u;
      } else {
        const std::size_t u = static_cast<std::size_t>(pred[v]);
        plan[u * n + v] += amount;
        v = u;
      }
    }
    supply[source] -= amount;
    demand[static_cast<std::size_t>(target)] -= amount;
  }
  return plan;
}

}  // namespace detail

/// Bounds for ground sets above the enumeration cap: the p = 1 optimal
/// transport value below, and the better of the star representation and the
/// transport plan's p-cost above.
inline NormResult bounds_only(const Molecule& m, const GroundSet& s, double p) {
  const auto sd = detail::scaled_divergence(m, s);
  const std::size_t n = s.size();
  std::vector<double> div(n);
  for (std::size_t i = 0; i < n; ++i) div[i] = sd.values[i].convert_to<double>();
  const auto dist = detail::cost_table(s, 1.0);
  const auto plan = detail::transport_plan(div, dist);
  double w1 = 0, plan_p = 0, star_p = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double f = plan[i * n + j];
      if (f <= 0) continue;
      w1 += f * dist(i, j);
      plan_p += detail::pow_p(f, p) * detail::pow_p(dist(i, j), p);
    }
  for (std::size_t i = 1; i < n; ++i)
    star_p += detail::pow_p(std::fabs(div[i]), p) * detail::pow_p(dist(i, 0), p);
  NormResult r;
  r.p = p;
  r.exact = false;
  r.lower_bound = w1 / sd.scale.convert_to<double>();
  r.upper_bound = detail::cost_to_norm(std::min(plan_p, star_p), p, sd.scale);
  r.value = r.upper_bound;
  return r;
}

namespace detail {

inline void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
}

template <class Int>
BlockBest run_pruefer(std::size_t n, const std::vector<Int>& div, const GroundSet& s, double p, unsigned threads) {
  return pruefer_minimum(n, div, cost_table(s, p), p, threads);
}

}  // namespace detail

/// Exact free p-norm of m over the finite ground set s, by minimizing the
/// tree-flow cost over all labeled spanning trees.  Above the cap, returns
/// bounds only (exact = false).
inline NormResult exact_norm(const Molecule& m, const GroundSet& s, double p, const NormOptions& opt = {}) {
  detail::check_p(p);
  const std::size_t n = s.size();
  if (n > opt.cap) return bounds_only(m, s, p);
  const auto sd = detail::scaled_divergence(m, s);

  NormResult r;
  r.p = p;
  if (n <= 1) return r;

  detail::BlockBest best_p, best_1;
  if (n == 2) {
    best_p.cost = detail::pow_p(detail::abs_to_double(sd.values[1]), p) * detail::pow_p(s.distance(0, 1).to_double(), p);
    best_1.cost = detail::abs_to_double(sd.values[1]) * s.distance(0, 1).to_double();
  } else if (detail::fits_int64(sd.values)) {
    // The p = 1 value comes from the subset program, the second exact route.
    const auto div = detail::to_int64(sd.values);
    best_p = detail::run_pruefer(n, div, s, p, opt.threads);
    best_1.cost = p == 1.0 ? best_p.cost : detail::subset_dp_min_cost(div, detail::cost_table(s, 1.0), 1.0);
  } else {
    best_p = detail::run_pruefer(n, sd.values, s, p, opt.threads);
    best_1.cost = p == 1.0 ? best_p.cost : detail::subset_dp_min_cost(sd.values, detail::cost_table(s, 1.0), 1.0);
  }
  r.value = detail::cost_to_norm(best_p.cost, p, sd.scale);
  r.upper_bound = r.value;
  r.lower_bound = detail::cost_to_norm(best_1.cost, 1.0, sd.scale);
  r.witness_pruefer = best_p.seq;

  const auto edges = detail::pruefer_decode(best_p.seq, n);
  std::vector<Rational> div(n);
  for (const auto& [x, c] : m.terms()) div[*s.index_of(x)] = c;
  div[0] = -m.mass();
  const auto flows = tree_flow(edges, div, 0);
  for (std::size_t k = 0; k < edges.size(); ++k) r.witness_tree.push_back({edges[k].first, edges[k].second, flows[k]});
  return r;
}

/// Exact norm value by the subset dynamic program.  Same quantity as
/// exact_norm, different algorithm; practical up to about 15 ground points.
inline double exact_norm_dp(const Molecule& m, const GroundSet& s, double p) {
  detail::check_p(p);
  if (s.size() > 20) throw DomainError("exact_norm_dp: ground set too large");
  const auto sd = detail::scaled_divergence(m, s);
  const auto cost = detail::cost_table(s, p);
  const double c = detail::fits_int64(sd.values) ? detail::subset_dp_min_cost(detail::to_int64(sd.values), cost, p)
                                                 : detail::subset_dp_min_cost(sd.values, cost, p);
  return detail::cost_to_norm(c, p, sd.scale);
}

/// Lower and upper bounds for the ambient norm in F_p(R^d).
struct Sandwich {
  double lower = 0;
  double upper = 0;
  bool exact = true;  ///< both values computed exactly over supp(m) + base
};

inline Sandwich norm_sandwich(const Molecule& m, double p, const NormOptions& opt = {}) {
  detail::check_p(p);
  const GroundSet s = GroundSet::from_support(m);
  const NormResult r = exact_norm(m, s, p, opt);
  return {r.lower_bound, r.exact ? r.value : r.upper_bound, r.exact};
}

/// int |A(t)| dt for a molecule on the line, exact.  A(t) = sum_{x_i > t} a_i
/// for t >= 0 and -sum_{x_i < t} a_i for t < 0.
inline Rational line_f1_norm_exact(const Molecule& m) {
  if (m.space().dim() != 1) throw DomainError("line_f1_norm: dimension must be 1");
  if (!m.space().base().is_origin()) throw DomainError("line_f1_norm: base point must be 0");
  std::vector<std::pair<DyadicRational, Rational>> pos, neg;
  for (const auto& [x, a] : m.terms()) (x[0].sign() > 0 ? pos : neg).push_back({abs(x[0]), a});
  auto side = [](std::vector<std::pair<DyadicRational, Rational>> pts) {
    // Sort by distance from 0; integrate the tail mass over each gap.
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Rational tail;
    for (const auto& [r, a] : pts) tail += a;
    Rational total;
    DyadicRational prev;
    for (const auto& [r, a] : pts) {
      total += abs(tail) * (r - prev).to_rational();
      tail -= a;
      prev = r;
    }
    return total;
  };
  return side(pos) + side(neg);
}

inline double line_f1_norm(const Molecule& m) { return line_f1_norm_exact(m).convert_to<double>(); }

}  // namespace fpbasis
