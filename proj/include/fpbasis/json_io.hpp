#pragma once

// JSON forms of the library types.  Dyadics are [numerator, exponent],
// rationals [numerator, denominator]; numerators beyond 64 bits are written
// as decimal strings.  Input also accepts plain integers and strings such as
// "3/8", "-0.375" or "5/2^7".  Requires nlohmann/json.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpbasis/basis_rd.hpp"
#include "fpbasis/pnorm.hpp"
#include "fpbasis/retraction.hpp"

namespace fpbasis::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Json(v.convert_to<std::int64_t>());
  return Json(v.str());
}

inline BigInt big_from_json(const Json& j, const char* what) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto q = DyadicRational::parse(j.get<std::string>());
    if (!q.is_integer()) throw ParseError(std::string(what) + ": expected an integer, got " + j.dump());
    return q.numerator();
  }
  throw ParseError(std::string(what) + ": expected an integer, got " + j.dump());
}

/// cpp_rational rejects a negative denominator.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  return den.sign() < 0 ? Rational(BigInt(-num), BigInt(-den)) : Rational(num, den);
}

inline const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

inline bool one_line(const Json& j, std::size_t& leaves) {
  if (j.is_object()) return false;
  if (!j.is_array()) return ++leaves, true;
  for (const auto& e : j)
    if (!one_line(e, leaves)) return false;
  return true;
}

inline void write(std::string& out, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
      }
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Small arrays of scalars, possibly nested (points, dyadics), stay on one line.
      std::size_t leaves = 0;
      const bool flat = one_line(j, leaves) && leaves <= 8;
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat || indent < 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Serializes with every float printed to 17 significant digits.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::write(out, j, indent, 0);
  return out;
}

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

// ---- scalars ----

inline Json to_json(const DyadicRational& q) {
  return Json::array({detail::big_to_json(q.numerator()), q.exponent()});
}

inline DyadicRational dyadic_from_json(const Json& j) {
  if (j.is_number_integer()) return DyadicRational(j.get<std::int64_t>());
  if (j.is_string()) return DyadicRational::parse(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    const BigInt num = detail::big_from_json(j[0], "dyadic numerator");
    if (!j[1].is_number_integer() || j[1].get<std::int64_t>() < 0 || j[1].get<std::int64_t>() > 1000000)
      throw ParseError("dyadic exponent must be a non-negative integer: " + j.dump());
    return DyadicRational(num, static_cast<std::uint32_t>(j[1].get<std::int64_t>()));
  }
  throw ParseError("expected a dyadic [num, exp] or a decimal string, got " + j.dump());
}

inline Json to_json(const Rational& q) {
  return Json::array({detail::big_to_json(boost::multiprecision::numerator(q)),
                      detail::big_to_json(boost::multiprecision::denominator(q))});
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2) {
    const BigInt num = detail::big_from_json(j[0], "rational numerator");
    const BigInt den = detail::big_from_json(j[1], "rational denominator");
    if (den.is_zero()) throw ParseError("zero denominator in " + j.dump());
    return detail::make_rational(num, den);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash != std::string::npos && s.find("2^") == std::string::npos) {
      const BigInt num = detail::big_from_json(Json(s.substr(0, slash)), "rational numerator");
      const BigInt den = detail::big_from_json(Json(s.substr(slash + 1)), "rational denominator");
      if (den.is_zero()) throw ParseError("zero denominator in " + s);
      return detail::make_rational(num, den);
    }
    return DyadicRational::parse(s).to_rational();
  }
  throw ParseError("expected a rational [num, den], got " + j.dump());
}

inline Json to_json(const Point& x) {
  Json a = Json::array();
  for (const auto& c : x.coords()) a.push_back(to_json(c));
  return a;
}

inline Point point_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty coordinate list, got " + j.dump());
  std::vector<DyadicRational> c;
  for (const auto& e : j) c.push_back(dyadic_from_json(e));
  return Point(std::move(c));
}

// ---- spaces and molecules ----

inline Json to_json(const Space& s) {
  Json j;
  j["kind"] = to_string(s.kind());
  j["dim"] = s.dim();
  if (s.kind() == SpaceKind::Ball) j["radius"] = to_json(s.radius());
  if (s.kind() == SpaceKind::FiniteSet) {
    j["base"] = to_json(s.base());
    Json pts = Json::array();
    for (const auto& p : s.points()) pts.push_back(to_json(p));
    j["points"] = pts;
  }
  return j;
}

/// `dim` may be omitted when it can be read off other fields or `fallback_dim`.
inline Space space_from_json(const Json& j, std::size_t fallback_dim = 0) {
  const std::string kind = detail::field(j, "kind", "space").get<std::string>();
  std::size_t dim = fallback_dim;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<std::int64_t>() <= 0)
      throw ParseError("space dim must be a positive integer");
    dim = j["dim"].get<std::size_t>();
  }
  if (kind == "finite") {
    const Json& pts = detail::field(j, "points", "finite space");
    if (!pts.is_array()) throw ParseError("finite space points must be a list");
    std::set<Point> points;
    for (const auto& p : pts) points.insert(point_from_json(p));
    if (points.empty() && !j.contains("base")) throw ParseError("finite space needs points");
    Point base = j.contains("base") ? point_from_json(j["base"]) : Point::origin(dim ? dim : points.begin()->dim());
    if (dim && base.dim() != dim) throw DimensionMismatch(base.dim(), dim);
    points.insert(base);
    return Space::finite(std::move(points), std::move(base));
  }
  if (dim == 0) throw ParseError("space dim missing");
  if (kind == "full") return Space::full(dim);
  if (kind == "cube") return Space::unit_cube(dim);
  if (kind == "ball") return Space::ball(dim, dyadic_from_json(detail::field(j, "radius", "ball space")));
  throw ParseError("unknown space kind '" + kind + "'");
}

inline Json to_json(const Molecule& m) {
  Json terms = Json::array();
  for (const auto& [x, a] : m.terms()) terms.push_back({{"point", to_json(x)}, {"coeff", to_json(a)}});
  return {{"space", to_json(m.space())}, {"terms", terms}};
}

struct LoadedMolecule {
  Molecule molecule;
  bool canonical_input = true;  ///< false if loading merged or dropped terms
  std::vector<std::string> warnings;
};

inline LoadedMolecule molecule_from_json(const Json& j) {
  const Json& terms = detail::field(j, "terms", "molecule");
  if (!terms.is_array()) throw ParseError("molecule terms must be a list");
  std::vector<Term> raw;
  for (const auto& t : terms)
    raw.emplace_back(point_from_json(detail::field(t, "point", "term")), rational_from_json(detail::field(t, "coeff", "term")));
  const std::size_t dim = raw.empty() ? 0 : raw.front().first.dim();
  Space space = space_from_json(detail::field(j, "space", "molecule"), dim);
  for (const auto& [x, a] : raw)
    if (x.dim() != space.dim()) throw DimensionMismatch(x.dim(), space.dim());

  LoadedMolecule out{Molecule::canonicalize(raw, space), true, {}};
  std::set<Point> seen;
  for (const auto& [x, a] : raw) {
    if (a == 0) out.warnings.push_back("dropped zero coefficient at " + x.to_string());
    if (x == space.base()) out.warnings.push_back("dropped base-point entry " + x.to_string());
    if (!seen.insert(x).second) out.warnings.push_back("merged duplicate point " + x.to_string());
  }
  out.canonical_input = out.warnings.empty();
  return out;
}

// ---- basis coefficients ----

inline Json to_json(const CubeBasisCoefficients& c) {
  Json a = Json::array();
  for (const auto& [idx, coeff] : c)
    a.push_back({{"level", idx.level}, {"point", to_json(idx.point)}, {"coeff", to_json(coeff)}});
  return a;
}

inline CubeBasisCoefficients cube_coefficients_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("coefficients must be a list");
  CubeBasisCoefficients out;
  for (const auto& e : j) {
    CubeBasisIndex idx{detail::field(e, "level", "coefficient").get<int>(), point_from_json(detail::field(e, "point", "coefficient"))};
    require_valid(idx);
    out.push_back({std::move(idx), rational_from_json(detail::field(e, "coeff", "coefficient"))});
  }
  return out;
}

inline Json to_json(const RdBasisCoefficients& c) {
  Json a = Json::array();
  for (const auto& [idx, coeff] : c)
    a.push_back({{"level", idx.level},
                 {"point", to_json(idx.point)},
                 {"coeff", to_json(coeff)},
                 {"kind", to_string(idx.kind)},
                 {"eta", Json::array({idx.level, to_json(idx.eta)})}});
  return a;
}

/// kind and eta are optional on input; when present they must match the point.
inline RdBasisCoefficients rd_coefficients_from_json(const Json& j, const CutoffSequence& k) {
  if (!j.is_array()) throw ParseError("coefficients must be a list");
  RdBasisCoefficients out;
  for (const auto& e : j) {
    const int level = detail::field(e, "level", "coefficient").get<int>();
    const Point x = point_from_json(detail::field(e, "point", "coefficient"));
    RdBasisIndex idx = rd_index(x, k);
    if (idx.level != level)
      throw DomainError("coefficient at " + x.to_string() + " has level " + std::to_string(idx.level) + ", not " +
                        std::to_string(level));
    if (e.contains("kind") && e["kind"].get<std::string>() != to_string(idx.kind))
      throw DomainError("coefficient at " + x.to_string() + " has kind " + to_string(idx.kind));
    if (e.contains("eta")) {
      const Json& eta = e["eta"];
      if (!eta.is_array() || eta.size() != 2 || eta[0].get<int>() != level || dyadic_from_json(eta[1]) != idx.eta)
        throw DomainError("coefficient at " + x.to_string() + " has a mismatched eta");
    }
    out.push_back({std::move(idx), rational_from_json(detail::field(e, "coeff", "coefficient"))});
  }
  return out;
}

// ---- reports ----

inline Json to_json(const NormResult& r, const GroundSet& s) {
  Json tree = Json::array();
  for (const auto& e : r.witness_tree)
    tree.push_back({{"from", to_json(s.point(e.from))}, {"to", to_json(s.point(e.to))}, {"flow", to_json(e.flow)}});
  Json ground = Json::array();
  for (const auto& p : s.points()) ground.push_back(to_json(p));
  return {{"value", r.value},
          {"p", r.p},
          {"exact", r.exact},
          {"lower_bound", r.lower_bound},
          {"upper_bound", r.upper_bound},
          {"metric", s.metric() == Metric::Sup ? "sup" : "l1"},
          {"ground_set", ground},
          {"witness_tree", tree},
          {"witness_pruefer", r.witness_pruefer}};
}

inline Json to_json(const WeightMap& w) {
  Json a = Json::array();
  for (const auto& [v, q] : w) a.push_back({{"vertex", to_json(v)}, {"weight", to_json(q)}});
  return a;
}

inline Json to_json(const ProbeReport& r) {
  return {{"p", r.p},
          {"dim", r.dim},
          {"measured_max", r.measured_max},
          {"envelope", r.envelope},
          {"stated_constant", r.stated_constant},
          {"measured_max_pth", r.measured_max_pth},
          {"argmax_pair", Json::array({to_json(r.argmax_x), to_json(r.argmax_y)})},
          {"samples", r.samples},
          {"points", r.points},
          {"within_cube_pairs", r.within_cube_pairs},
          {"within_cube_max_excess", r.within_cube_max_excess},
          {"within_envelope", r.within_envelope()},
          {"stated_constant_holds", r.stated_constant_holds()},
          {"literal_chain_holds", r.literal_chain_holds()}};
}

}  // namespace fpbasis::io
