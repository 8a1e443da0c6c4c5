#pragma once

// Basis of the free p-space over R^d built from growing windows.  With an
// increasing cutoff sequence (k_n), level n uses the lattice 2^-n Z^d inside
// the sup-ball of radius k_n (V_n) and splits it into the inner window W_n
// (radius k_{n-1}), refined as in the cube basis, and outer shells, which
// are linked inward by one mesh step through the shell map s_n.

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "fpbasis/basis_cube.hpp"

namespace fpbasis {

/// Strictly increasing positive integers k_{-1}, k_0, k_1, ...
class CutoffSequence {
 public:
  /// k_n = n + offset.
  static CutoffSequence linear(long long offset) {
    CutoffSequence s;
    s.offset_ = offset;
    if (offset - 1 < 1) throw DomainError("cutoff sequence must be positive (need offset >= 2)");
    return s;
  }

  /// Explicit values starting at k_{-1}.
  static CutoffSequence explicit_values(std::vector<long long> values) {
    if (values.empty()) throw DomainError("cutoff sequence is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] <= 0) throw DomainError("cutoff values must be positive");
      if (i && values[i] <= values[i - 1]) throw DomainError("cutoff values must be strictly increasing");
    }
    CutoffSequence s;
    s.values_ = std::move(values);
    return s;
  }

  /// "linear:+c" or a comma-separated list "k_{-1},k_0,...".
  static CutoffSequence parse(const std::string& text) {
    if (text.rfind("linear:", 0) == 0) {
      std::string rest = text.substr(7);
      if (!rest.empty() && rest[0] == '+') rest = rest.substr(1);
      try {
        std::size_t used = 0;
        long long c = std::stoll(rest, &used);
        if (used != rest.size()) throw ParseError("");
        return linear(c);
      } catch (const std::logic_error&) {
        throw ParseError("invalid cutoff rule '" + text + "'");
      }
    }
    std::vector<long long> vals;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        std::size_t used = 0;
        vals.push_back(std::stoll(item, &used));
        if (used != item.size()) throw ParseError("");
      } catch (const std::logic_error&) {
        throw ParseError("invalid cutoff list '" + text + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return explicit_values(std::move(vals));
  }

  /// k_n for n >= -1.
  long long at(int n) const {
    if (n < -1) throw DomainError("cutoff index must be >= -1");
    if (values_.empty()) return n + offset_;
    const auto i = static_cast<std::size_t>(n + 1);
    if (i >= values_.size()) throw DomainError("cutoff sequence has no value for level " + std::to_string(n));
    return values_[i];
  }

  std::string describe() const {
    if (values_.empty()) return "linear:+" + std::to_string(offset_);
    std::string s;
    for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + std::to_string(values_[i]);
    return s;
  }

 private:
  CutoffSequence() = default;
  long long offset_ = 2;
  std::vector<long long> values_;
};

enum class RdKind { InnerRefine, OuterShell };

inline const char* to_string(RdKind k) { return k == RdKind::InnerRefine ? "inner-refine" : "outer-shell"; }

struct RdBasisIndex {
  int level = 0;
  Point point;
  RdKind kind = RdKind::InnerRefine;
  DyadicRational eta;  ///< second component of eta(x); the first is `level`

  friend bool operator==(const RdBasisIndex&, const RdBasisIndex&) = default;
  /// Arrangement order: eta lexicographic, then coordinate-lexicographic.
  friend std::strong_ordering operator<=>(const RdBasisIndex& a, const RdBasisIndex& b) {
    if (auto c = a.level <=> b.level; c != 0) return c;
    if (auto c = a.eta <=> b.eta; c != 0) return c;
    return a.point <=> b.point;
  }
};

struct RdCoefficient {
  RdBasisIndex index;
  Rational coeff;
  friend bool operator==(const RdCoefficient&, const RdCoefficient&) = default;
};

using RdBasisCoefficients = std::vector<RdCoefficient>;

/// V_n = {|x| <= k_n} cap 2^-n Z^d (V_{-1} = {0}), lexicographic.
inline std::vector<Point> rd_window(int n, std::size_t d, const CutoffSequence& k) {
  if (n == -1) return {Point::origin(d)};
  return lattice_box(d, DyadicRational(k.at(n)), -n);
}

/// W_n = {|x| <= k_{n-1}} cap 2^-n Z^d, lexicographic.
inline std::vector<Point> rd_inner_window(int n, std::size_t d, const CutoffSequence& k) {
  if (n < 0) throw DomainError("inner window needs level >= 0");
  return lattice_box(d, DyadicRational(k.at(n - 1)), -n);
}

/// Smallest n with x in V_n (-1 for the origin).
inline int rd_level(const Point& x, const CutoffSequence& k) {
  if (x.is_origin()) return -1;
  std::uint32_t e = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) e = std::max(e, x[i].exponent());
  const DyadicRational r = sup_norm(x);
  int n = static_cast<int>(e);
  while (DyadicRational(k.at(n)) < r) ++n;
  return n;
}

/// The basis index attached to a non-zero lattice point.
inline RdBasisIndex rd_index(const Point& x, const CutoffSequence& k) {
  const int n = rd_level(x, k);
  if (n < 0) throw DomainError("the origin carries no basis vector");
  const DyadicRational r = sup_norm(x);
  const DyadicRational inner(k.at(n - 1));
  if (r > inner) return {n, x, RdKind::OuterShell, r - inner};
  return {n, x, RdKind::InnerRefine, DyadicRational()};
}

inline void require_valid(const RdBasisIndex& idx, const CutoffSequence& k) {
  bool ok = idx.level >= 0 && idx.point.dim() > 0 && !idx.point.is_origin();
  if (ok) {
    const RdBasisIndex expect = rd_index(idx.point, k);
    ok = expect == idx;
  }
  if (!ok)
    throw DomainError("invalid R^d basis index: level " + std::to_string(idx.level) + ", point " + idx.point.to_string());
}

/// The componentwise rule sgn(x_i) min(|x|_inf - 2^-n, |x_i|), unchecked.
inline Point shell_step(const Point& x, int n) {
  const DyadicRational cap = sup_norm(x) - DyadicRational::pow2(-n);
  std::vector<DyadicRational> c(x.coords());
  for (auto& ci : c) {
    if (ci > cap) ci = cap;
    else if (ci < -cap) ci = -cap;
  }
  return Point(std::move(c));
}

/// s_n(x) for x in V_n minus W_n: one mesh step inward.
inline Point shell_map(const Point& x, int n, const CutoffSequence& k) {
  if (n < 0) throw DomainError("shell_map: level must be >= 0");
  const DyadicRational r = sup_norm(x);
  const bool on_grid = lattice_index(x, GridSpec(x.dim(), -n)).has_value();
  if (!on_grid || !(r > DyadicRational(k.at(n - 1))) || r > DyadicRational(k.at(n)))
    throw DomainError("shell_map: " + x.to_string() + " is not an outer-shell point of level " + std::to_string(n));
  return shell_step(x, n);
}

/// f(x): delta(x) - delta(s_n(x)) on outer shells, the cube-style refinement
/// vector on the inner window.
inline Molecule basis_vector_rd(const RdBasisIndex& idx, const CutoffSequence& k) {
  require_valid(idx, k);
  const std::size_t d = idx.point.dim();
  const Space space = Space::full(d);
  Molecule f = Molecule::delta(space, idx.point);
  if (idx.kind == RdKind::OuterShell) {
    f.accumulate(shell_map(idx.point, idx.level, k), Rational(-1));
  } else if (idx.level > 0) {
    for (const auto& [v, w] : lambda_weights(idx.point, GridSpec(d, 1 - idx.level)))
      f.accumulate(v, -w.to_rational());
  }
  return f;
}

/// All indices of levels <= depth in eta order (inner-refine first within a
/// level, then shells outward), coordinate-lexicographic within equal eta.
inline std::vector<RdBasisIndex> arrangement_rd(int depth, std::size_t d, const CutoffSequence& k) {
  if (depth < 0) throw DomainError("arrangement_rd: depth must be >= 0");
  std::vector<RdBasisIndex> out;
  for (int n = 0; n <= depth; ++n) {
    std::vector<RdBasisIndex> level;
    for (const auto& x : rd_window(n, d, k))
      if (!x.is_origin() && rd_level(x, k) == n) level.push_back(rd_index(x, k));
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Ladder of commuting projections: P_{2n} = P_{k_n, 2^-n},
/// P_{2n-1} = P_{k_{n-1}, 2^-n} for n >= 0, and P_{-2} = 0.
inline Molecule projection_ladder(int j, const Molecule& m, const CutoffSequence& k) {
  if (j < -2) throw DomainError("projection_ladder: index must be >= -2");
  const std::size_t d = m.space().dim();
  if (j == -2) return Molecule(Space::full(d));
  if (j % 2 == 0) {
    const int n = j / 2;
    return project(m, DyadicRational(k.at(n)), GridSpec(d, -n));
  }
  const int n = (j + 1) / 2;
  return project(m, DyadicRational(k.at(n - 1)), GridSpec(d, -n));
}

inline void require_in_window(const Molecule& m, int depth, const CutoffSequence& k) {
  if (m.space().kind() != SpaceKind::FullSpace) throw DomainError("expected a molecule over R^d");
  const GridSpec grid(m.space().dim(), -depth);
  const DyadicRational radius(k.at(depth));
  for (const auto& [x, a] : m.terms())
    if (!lattice_index(x, grid) || sup_norm(x) > radius)
      throw DomainError("support point " + x.to_string() + " not in V_" + std::to_string(depth));
}

/// Coefficients of m (supported on V_depth).  Inner blocks P_{2n-1} m -
/// P_{2n-2} m take the coefficient of delta(x) in P_{2n-1} m; outer blocks
/// P_{2n} m - P_{2n-1} m are resolved by peeling shells from radius k_n
/// inward, moving each coefficient from x to s_n(x).
inline RdBasisCoefficients expand_rd(const Molecule& m, int depth, const CutoffSequence& k) {
  if (depth < 0) throw DomainError("expand_rd: depth must be >= 0");
  require_in_window(m, depth, k);
  RdBasisCoefficients out;
  for (int n = 0; n <= depth; ++n) {
    const Molecule inner = projection_ladder(2 * n - 1, m, k);
    for (const auto& [x, c] : inner.terms())
      if (rd_level(x, k) == n) out.push_back({rd_index(x, k), c});

    Molecule current = projection_ladder(2 * n, m, k) - inner;
    const DyadicRational step = DyadicRational::pow2(-n);
    const DyadicRational floor_radius(k.at(n - 1));
    for (DyadicRational t(k.at(n)); t > floor_radius; t -= step) {
      std::vector<std::pair<Point, Rational>> shell;
      for (const auto& [x, c] : current.terms())
        if (sup_norm(x) == t) shell.emplace_back(x, c);
      for (const auto& [x, c] : shell) {
        out.push_back({rd_index(x, k), c});
        current.accumulate(x, -c);
        current.accumulate(shell_map(x, n, k), c);
      }
    }
    if (!current.empty())
      throw InternalError("expand_rd: nonzero peeling residue at level " + std::to_string(n) + ": " +
                          current.to_string());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

inline Molecule reconstruct_rd(const RdBasisCoefficients& coeffs, std::size_t d, const CutoffSequence& k) {
  Molecule out(Space::full(d));
  for (const auto& [idx, c] : coeffs) {
    const Molecule f = basis_vector_rd(idx, k);
    for (const auto& [x, a] : f.terms()) out.accumulate(x, c * a);
  }
  return out;
}

/// Constant of the shell gluing maps: 1 + 2^(1/p).
inline double shell_glue_constant(double p) { return 1.0 + std::pow(2.0, 1.0 / p); }

}  // namespace fpbasis
