// Acceptance run: every criterion at full scale, one PASS/FAIL line each.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>

#include "fpbasis/verify/suites.hpp"

using namespace fpbasis;
using namespace fpbasis::verify;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<Check> (*run)();
};

std::vector<Check> lambda_identities() {
  LambdaParams p;
  p.dims = {1, 2, 3};
  p.cell_log2 = {0, -1, -2};
  p.ratio_log2 = {1, 2};
  p.mesh_log2 = -5;
  p.cells = 3;
  p.random_samples = 1000;
  return lambda_checks(p);
}

std::vector<Check> well_defined() {
  LambdaParams p;
  p.dims = {1, 2, 3};
  p.cell_log2 = {0, -1, -2};
  p.mesh_log2 = -5;
  p.cells = 3;
  return well_defined_checks(p);
}

std::vector<Check> retraction_constant_check() {
  RetractionParams p;
  p.dims = {1, 2};
  p.ps = {1.0, 2.0 / 3.0, 0.5};
  p.mesh_log2 = -4;
  return retraction_checks(p);
}

std::vector<Check> projection_algebra() {
  ProjectionParams p;
  p.dims = {1, 2};
  p.samples = 100;
  return projection_checks(p);
}

std::vector<Check> basis_round_trip() {
  BasisParams p;
  p.dims = {1, 2};
  p.samples = 200;
  p.max_depth = 4;  // rd runs to depth 3
  p.annihilation_depth = 3;
  auto out = basis_cube_checks(p, false);
  auto rd = basis_rd_checks(p, false);
  out.insert(out.end(), rd.begin(), rd.end());
  return out;
}

std::vector<Check> norm_oracles() {
  NormParams p;
  p.line_samples = 500;
  p.oracle_samples = 200;
  p.perturbation_molecules = 10;
  p.perturbations = 1000;
  return norm_oracle_checks(p);
}

std::vector<Check> norm_axioms() {
  NormParams p;
  p.axiom_samples = 200;
  return norm_axiom_checks(p);
}

std::vector<Check> block_unconditionality() {
  BasisParams p;
  p.dims = {1, 2};
  p.ps = {1.0, 2.0 / 3.0, 0.5};
  p.max_blocks = 4;
  auto out = cube_unconditionality_checks(p);
  auto rd = rd_unconditionality_checks(p);
  out.insert(out.end(), rd.begin(), rd.end());
  return out;
}

const Criterion kCriteria[] = {
    {1, "interpolation weight identities", lambda_identities},
    {2, "interpolation well-defined on cube faces", well_defined},
    {3, "retraction Lipschitz constant", retraction_constant_check},
    {4, "projection composition algebra", projection_algebra},
    {5, "basis round trips, truncation, shell annihilation, peeling", basis_round_trip},
    {6, "norm against independent oracles", norm_oracles},
    {7, "norm axioms", norm_axioms},
    {8, "block unconditionality", block_unconditionality},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool all_ok = true;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> checks;
    std::string error;
    try {
      checks = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = error.empty() && !checks.empty();
    for (const auto& k : checks) ok = ok && k.pass;
    all_ok = all_ok && ok;
    for (const auto& k : checks)
      std::printf("    %s %-62s measured %-22s bound %-20s %s\n", k.pass ? "ok  " : "FAIL", k.name.c_str(),
                  fmt(k.measured).c_str(), fmt(k.bound).c_str(), k.note.c_str());
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    std::printf("criterion %d: %s  %s (%zu checks, %.1f s)\n", c.id, ok ? "PASS" : "FAIL", c.title, checks.size(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("acceptance: %s (%.1f s)\n", all_ok ? "PASS" : "FAIL", total);
  return all_ok ? 0 : 1;
}
