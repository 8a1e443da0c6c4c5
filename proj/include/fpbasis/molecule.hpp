#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fpbasis/interpolation.hpp"

namespace fpbasis {

enum class SpaceKind { FullSpace, UnitCube, Ball, FiniteSet };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::FullSpace: return "full";
    case SpaceKind::UnitCube: return "cube";
    case SpaceKind::Ball: return "ball";
    case SpaceKind::FiniteSet: return "finite";
  }
  return "?";
}

/// A pointed metric space: R^d, [0,1]^d, the sup-ball B_t, or an explicit
/// finite point set.  The base point is the origin except for finite sets.
class Space {
 public:
  static Space full(std::size_t dim) { return Space(SpaceKind::FullSpace, dim); }
  static Space unit_cube(std::size_t dim) { return Space(SpaceKind::UnitCube, dim); }
  static Space ball(std::size_t dim, DyadicRational radius) {
    if (radius.sign() <= 0) throw DomainError("ball radius must be positive");
    Space s(SpaceKind::Ball, dim);
    s.radius_ = std::move(radius);
    return s;
  }
  static Space finite(std::set<Point> points, Point base) {
    if (points.empty()) throw DomainError("finite space needs at least one point");
    const std::size_t dim = base.dim();
    for (const auto& p : points) require_same_dim(p, base);
    if (!points.count(base)) throw DomainError("base point " + base.to_string() + " not in finite space");
    Space s(SpaceKind::FiniteSet, dim);
    s.points_ = std::move(points);
    s.base_ = std::move(base);
    return s;
  }

  SpaceKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const Point& base() const { return base_; }
  const DyadicRational& radius() const { return radius_; }
  const std::set<Point>& points() const { return points_; }

  bool contains(const Point& x) const {
    if (x.dim() != dim_) return false;
    switch (kind_) {
      case SpaceKind::FullSpace: return true;
      case SpaceKind::UnitCube:
        for (std::size_t i = 0; i < dim_; ++i)
          if (x[i].sign() < 0 || x[i] > DyadicRational(1)) return false;
        return true;
      case SpaceKind::Ball: return sup_norm(x) <= radius_;
      case SpaceKind::FiniteSet: return points_.count(x) > 0;
    }
    return false;
  }

  std::string describe() const {
    std::string s = std::string(to_string(kind_)) + "(d=" + std::to_string(dim_);
    if (kind_ == SpaceKind::Ball) s += ", t=" + radius_.to_string();
    if (kind_ == SpaceKind::FiniteSet) s += ", |S|=" + std::to_string(points_.size());
    return s + ")";
  }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(SpaceKind kind, std::size_t dim) : kind_(kind), dim_(dim), base_(Point::origin(dim)) {
    if (dim == 0) throw DomainError("space dimension must be positive");
  }

  SpaceKind kind_;
  std::size_t dim_;
  Point base_;
  DyadicRational radius_;
  std::set<Point> points_;
};

using Term = std::pair<Point, Rational>;

/// A finite combination sum a_i delta(x_i) in the free space over a pointed
/// space.  Always canonical: no zero coefficients, no base-point entry.
class Molecule {
 public:
  explicit Molecule(Space space) : space_(std::move(space)) {}

  /// Merges duplicates, drops zero and base-point entries.  Throws when a
  /// point lies outside the space.
  static Molecule canonicalize(const std::vector<Term>& terms, Space space) {
    Molecule m(std::move(space));
    for (const auto& [x, a] : terms) m.accumulate(x, a);
    return m;
  }

  static Molecule delta(const Space& space, const Point& x) {
    return canonicalize({{x, Rational(1)}}, space);
  }

  const Space& space() const { return space_; }
  const std::map<Point, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Point& x) const {
    auto it = terms_.find(x);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::vector<Point> support() const {
    std::vector<Point> out;
    out.reserve(terms_.size());
    for (const auto& [x, a] : terms_) out.push_back(x);
    return out;
  }

  /// Sum of all coefficients.
  Rational mass() const {
    Rational s;
    for (const auto& [x, a] : terms_) s += a;
    return s;
  }

  /// Adds a * delta(x) in place.
  void accumulate(const Point& x, const Rational& a) {
    if (!space_.contains(x))
      throw DomainError("point " + x.to_string() + " outside space " + space_.describe());
    if (a == 0 || x == space_.base()) return;
    auto [it, inserted] = terms_.emplace(x, a);
    if (!inserted) {
      it->second += a;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [x, a] : terms_) {
      if (!first) s += ", ";
      first = false;
      s += x.to_string() + ": " + a.str();
    }
    return s + "}";
  }

  friend bool operator==(const Molecule&, const Molecule&) = default;

 private:
  Space space_;
  std::map<Point, Rational> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Molecule& m) { return os << m.to_string(); }

inline Molecule add(const Molecule& a, const Molecule& b) {
  if (!(a.space() == b.space()))
    throw DomainError("space mismatch: " + a.space().describe() + " vs " + b.space().describe());
  Molecule out = a;
  for (const auto& [x, c] : b.terms()) out.accumulate(x, c);
  return out;
}

inline Molecule scale(const Rational& c, const Molecule& m) {
  Molecule out(m.space());
  if (c == 0) return out;
  for (const auto& [x, a] : m.terms()) out.accumulate(x, c * a);
  return out;
}

inline Molecule operator+(const Molecule& a, const Molecule& b) { return add(a, b); }
inline Molecule operator-(const Molecule& a, const Molecule& b) { return add(a, scale(-1, b)); }
inline Molecule operator*(const Rational& c, const Molecule& m) { return scale(c, m); }

/// The same terms viewed in another space (linearized inclusion).
inline Molecule include_into(const Molecule& m, const Space& target) {
  if (!(m.space().base() == target.base()))
    throw DomainError("inclusion must preserve the base point");
  Molecule out(target);
  for (const auto& [x, a] : m.terms()) out.accumulate(x, a);
  return out;
}

/// A base-point preserving map between pointed spaces, given by a rule.
class TabulatedMap {
 public:
  using Rule = std::function<Point(const Point&)>;

  TabulatedMap(Space domain, Space codomain, Rule rule)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), rule_(std::move(rule)) {
    if (!(rule_(domain_.base()) == codomain_.base()))
      throw DomainError("map must send the base point to the base point");
  }

  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  Point operator()(const Point& x) const { return rule_(x); }

 private:
  Space domain_;
  Space codomain_;
  Rule rule_;
};

/// sum a_i delta(f(x_i)) in the codomain.
inline Molecule pushforward(const TabulatedMap& f, const Molecule& m) {
  if (!(m.space() == f.domain())) throw DomainError("pushforward: molecule not in the map's domain");
  Molecule out(f.codomain());
  for (const auto& [x, a] : m.terms()) out.accumulate(f(x), a);
  return out;
}

/// Coordinatewise clamp r_t: x_i -> sign(x_i) min(|x_i|, t).
inline Point clamp_point(const Point& x, const DyadicRational& t) {
  std::vector<DyadicRational> c(x.coords());
  for (auto& ci : c) {
    if (ci > t) ci = t;
    else if (ci < -t) ci = -t;
  }
  return Point(std::move(c));
}

/// Lambda-weighted vertex combination sum_i a_i sum_v Lambda_R(v, x_i) delta(v),
/// in the molecule's own space.
inline Molecule retract(const Molecule& m, const GridSpec& grid) {
  if (m.space().dim() != grid.dim()) throw DimensionMismatch(m.space().dim(), grid.dim());
  Molecule out(m.space());
  for (const auto& [x, a] : m.terms())
    for (const auto& [v, w] : lambda_weights(x, grid)) out.accumulate(v, a * w.to_rational());
  return out;
}

/// Linearization S_t of the clamp r_t, landing in the ball B_t.
inline Molecule clamp_linearized(const Molecule& m, const DyadicRational& t) {
  if (t.sign() <= 0) throw DomainError("clamp radius must be positive");
  const std::size_t d = m.space().dim();
  TabulatedMap clamp(m.space(), Space::ball(d, t), [t](const Point& x) { return clamp_point(x, t); });
  return pushforward(clamp, m);
}

/// P_{t,R}: delta(x) -> sum_v Lambda_R(v, x) delta(r_t(v)), as a molecule over R^d.
/// t / R must be a positive integer.
inline Molecule project(const Molecule& m, const DyadicRational& t, const GridSpec& grid) {
  const DyadicRational ratio = grid.to_grid_units(t);
  if (!ratio.is_integer() || ratio.sign() <= 0)
    throw DomainError("project: t / R must be a positive integer (t=" + t.to_string() +
                      ", R=" + grid.mesh().to_string() + ")");
  if (!m.space().base().is_origin()) throw DomainError("project: base point must be the origin");
  Molecule out(Space::full(m.space().dim()));
  for (const auto& [x, a] : m.terms())
    for (const auto& [v, w] : lambda_weights(x, grid)) out.accumulate(clamp_point(v, t), a * w.to_rational());
  return out;
}

/// Duality pairing sum a_i f(x_i) with a function tabulated on supp(m) and the base.
inline Rational pair(const std::map<Point, Rational>& f, const Molecule& m) {
  auto base = f.find(m.space().base());
  if (base == f.end()) throw DomainError("pair: function missing the base point");
  if (base->second != 0) throw DomainError("pair: function must vanish at the base point");
  Rational s;
  for (const auto& [x, a] : m.terms()) {
    auto it = f.find(x);
    if (it == f.end()) throw DomainError("pair: function missing point " + x.to_string());
    s += a * it->second;
  }
  return s;
}

}  // namespace fpbasis
