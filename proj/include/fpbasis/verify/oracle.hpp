#pragma once

// Reference computations for the free p-norm that share no code with the
// tree enumeration: every edge subset of the complete graph that is a forest
// is tried, and its flow is found by Gaussian elimination on the incidence
// system.  Feasible only for ground sets of at most six points.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fpbasis/pnorm.hpp"
#include "fpbasis/verify/random.hpp"

namespace fpbasis::verify {

struct OracleResult {
  double value = std::numeric_limits<double>::infinity();
  std::size_t forests = 0;   ///< acyclic edge sets examined
  std::size_t feasible = 0;  ///< of those, ones carrying a representation
};

namespace detail {

/// Solves A f = b exactly for a full-column-rank A; nullopt when inconsistent.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

inline bool is_forest(const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t n) {
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) {
    const auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

}  // namespace detail

/// Minimum cost over all forest-supported representations of m on s.
inline OracleResult brute_force_norm(const Molecule& m, const GroundSet& s, double p) {
  const std::size_t n = s.size();
  if (n > 6) throw DomainError("brute_force_norm: at most 6 ground points");
  std::vector<Rational> div(n);
  for (const auto& [x, a] : m.terms()) {
    auto i = s.index_of(x);
    if (!i) throw DomainError("brute_force_norm: support outside the ground set");
    div[*i] = a;
  }
  div[0] = -m.mass();

  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) all.push_back({i, j});

  OracleResult out;
  bool zero = true;
  for (const auto& a : div) zero = zero && a == 0;
  if (zero) {
    out.value = 0;
    return out;
  }
  for (std::size_t mask = 1; mask < (std::size_t{1} << all.size()); ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t e = 0; e < all.size(); ++e)
      if (mask >> e & 1) edges.push_back(all[e]);
    if (edges.size() >= n || !detail::is_forest(edges, n)) continue;
    ++out.forests;
    // Incidence matrix: flow on (i, j) adds delta(j) - delta(i).
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(edges.size()));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      a[edges[e].first][e] = -1;
      a[edges[e].second][e] = 1;
    }
    auto f = detail::solve_exact(a, div);
    if (!f) continue;
    ++out.feasible;
    double cost = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      cost += std::pow(std::fabs((*f)[e].convert_to<double>()) * s.distance(edges[e].first, edges[e].second).to_double(), p);
    out.value = std::min(out.value, std::pow(cost, 1.0 / p));
  }
  return out;
}

struct PerturbationReport {
  double optimum = 0;     ///< the tree optimum being challenged
  double best_found = 0;  ///< smallest representation cost seen, as a norm
  std::size_t trials = 0;
};

/// Starts from the optimal tree flow and applies random cycle circulations;
/// every perturbed flow is still a representation of m.  Reports the
/// smallest norm value reached.
inline PerturbationReport perturbation_search(const Molecule& m, const GroundSet& s, double p, std::size_t trials,
                                              Rng& rng) {
  const std::size_t n = s.size();
  if (n < 3) throw DomainError("perturbation_search: need at least three ground points");
  const NormResult opt = exact_norm(m, s, p);
  std::vector<double> base_flow(n * n, 0.0);  // antisymmetric: flow i -> j
  double scale = 0;
  for (const auto& e : opt.witness_tree) {
    const double f = e.flow.convert_to<double>();
    base_flow[e.from * n + e.to] += f;
    base_flow[e.to * n + e.from] -= f;
    scale = std::max(scale, std::fabs(f));
  }
  if (scale == 0) scale = 1;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = s.distance(i, j).to_double();

  PerturbationReport rep;
  rep.optimum = opt.value;
  rep.best_found = std::numeric_limits<double>::infinity();
  std::vector<double> flow;
  for (std::size_t t = 0; t < trials; ++t) {
    flow = base_flow;
    const long long cycles = rng.uniform(1, 3);
    for (long long c = 0; c < cycles; ++c) {
      // A random triangle i -> j -> k -> i with a random signed amount.
      const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 1));
      auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 2));
      if (j >= i) ++j;
      std::size_t k = i;
      while (k == i || k == j) k = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 1));
      const double mag = scale * std::pow(10.0, -static_cast<double>(rng.uniform(0, 6))) * (2.0 * rng.unit() - 1.0);
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, k}, std::pair{k, i}}) {
        flow[a * n + b] += mag;
        flow[b * n + a] -= mag;
      }
    }
    double cost = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double f = std::fabs(flow[a * n + b]);
        if (f > 0) cost += std::pow(f * dist[a * n + b], p);
      }
    rep.best_found = std::min(rep.best_found, std::pow(cost, 1.0 / p));
    ++rep.trials;
  }
  return rep;
}

}  // namespace fpbasis::verify
