#pragma once

// Seeded generators for dyadic points, rationals and molecules.  Draws use
// raw mt19937_64 output with modular reduction so streams are identical on
// every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "fpbasis/molecule.hpp"

namespace fpbasis::verify {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  long long uniform(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(0, static_cast<long long>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

/// k * 2^log2_mesh for k uniform in [lo_units, hi_units].
inline DyadicRational random_dyadic(Rng& rng, long long lo_units, long long hi_units, int log2_mesh) {
  return DyadicRational(rng.uniform(lo_units, hi_units)).ldexp(log2_mesh);
}

/// A point of the mesh 2^log2_mesh in the box [lo, hi]^d (bounds in mesh units).
inline Point random_point(Rng& rng, std::size_t d, long long lo_units, long long hi_units, int log2_mesh) {
  std::vector<DyadicRational> c;
  c.reserve(d);
  for (std::size_t i = 0; i < d; ++i) c.push_back(random_dyadic(rng, lo_units, hi_units, log2_mesh));
  return Point(std::move(c));
}

/// Nonzero rational with small numerator and denominator.
inline Rational random_rational(Rng& rng, long long max_num = 9, long long max_den = 7) {
  long long num = 0;
  while (num == 0) num = rng.uniform(-max_num, max_num);
  return Rational(num, rng.uniform(1, max_den));
}

/// Up to `terms` random points drawn from `candidates`, random coefficients.
inline Molecule random_molecule(Rng& rng, const Space& space, const std::vector<Point>& candidates,
                                std::size_t terms) {
  Molecule m(space);
  for (std::size_t i = 0; i < terms; ++i) m.accumulate(rng.pick(candidates), random_rational(rng));
  return m;
}

}  // namespace fpbasis::verify
