// fpbasis-cli: norms, basis expansion and the property suites from the shell.
//
// Exit codes: 0 ok, 1 a verification check failed, 2 usage or parse error,
// 3 precondition violated by the input.  Internal errors exit 1.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "fpbasis/json_io.hpp"
#include "fpbasis/verify/suites.hpp"

using namespace fpbasis;
using io::Json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const std::string& path, const Json& j) {
  const std::string text = io::dump(j) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Json warnings_json(const io::LoadedMolecule& lm) {
  Json w = Json::array();
  for (const auto& s : lm.warnings) w.push_back(s);
  return w;
}

GroundSet ground_for(const Molecule& m, const std::string& spec, Metric metric) {
  if (spec == "support") return GroundSet::from_support(m, metric);
  // box:<radius>:<log2 mesh> adds the lattice points of that box.
  if (spec.rfind("box:", 0) == 0) {
    const auto colon = spec.find(':', 4);
    if (colon == std::string::npos) throw UsageError("--ground box:<radius>:<log2 mesh>");
    const DyadicRational radius = DyadicRational::parse(spec.substr(4, colon - 4));
    int log2 = 0;
    try {
      log2 = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("--ground: bad mesh exponent in " + spec);
    }
    const auto sup = m.support();
    std::set<Point> pts(sup.begin(), sup.end());
    for (auto& v : lattice_box(m.space().dim(), radius, log2)) pts.insert(std::move(v));
    return GroundSet::from_points(m.space().base(), pts, metric);
  }
  throw UsageError("--ground must be 'support' or 'box:<radius>:<log2 mesh>'");
}

int cmd_norm(const std::string& in, const std::string& out, double p, std::size_t cap, const std::string& ground,
             const std::string& metric_name, unsigned threads) {
  const auto lm = io::molecule_from_json(io::parse_text(read_input(in)));
  if (metric_name != "sup" && metric_name != "l1") throw UsageError("--metric must be sup or l1");
  const GroundSet s = ground_for(lm.molecule, ground, metric_name == "sup" ? Metric::Sup : Metric::L1);
  NormOptions opt;
  opt.cap = cap;
  opt.threads = threads;
  const NormResult r = exact_norm(lm.molecule, s, p, opt);
  Json j = io::to_json(r, s);
  j["canonical_input"] = lm.canonical_input;
  j["warnings"] = warnings_json(lm);
  if (!r.exact)
    j["note"] = "ground set of " + std::to_string(s.size()) + " points exceeds cap " + std::to_string(cap) +
                "; value is the upper bound";
  write_output(out, j);
  return 0;
}

int cmd_expand(const std::string& in, const std::string& out, const std::string& space, int depth, const std::string& kseq) {
  const auto lm = io::molecule_from_json(io::parse_text(read_input(in)));
  const std::size_t d = lm.molecule.space().dim();
  Json j;
  j["space"] = space;
  j["dim"] = d;
  j["depth"] = depth;
  if (space == "cube") {
    j["coefficients"] = io::to_json(expand(lm.molecule, depth));
  } else if (space == "rd") {
    const CutoffSequence k = CutoffSequence::parse(kseq);
    j["k_seq"] = k.describe();
    j["coefficients"] = io::to_json(expand_rd(lm.molecule, depth, k));
  } else {
    throw UsageError("--space must be cube or rd");
  }
  j["canonical_input"] = lm.canonical_input;
  j["warnings"] = warnings_json(lm);
  write_output(out, j);
  return 0;
}

int cmd_reconstruct(const std::string& in, const std::string& out, std::string space, std::size_t d, std::string kseq) {
  const Json doc = io::parse_text(read_input(in));
  const Json* coeffs = &doc;
  if (doc.is_object()) {
    coeffs = &io::detail::field(doc, "coefficients", "coefficient document");
    if (doc.contains("space") && space.empty()) space = doc["space"].get<std::string>();
    if (doc.contains("dim") && d == 0) d = doc["dim"].get<std::size_t>();
    if (doc.contains("k_seq") && kseq.empty()) kseq = doc["k_seq"].get<std::string>();
  }
  if (space.empty()) space = "cube";
  if (d == 0) throw UsageError("reconstruct needs --d or a 'dim' field");
  Molecule m(Space::full(d));
  if (space == "cube") {
    m = reconstruct(io::cube_coefficients_from_json(*coeffs), d);
  } else if (space == "rd") {
    const CutoffSequence k = CutoffSequence::parse(kseq.empty() ? "linear:+2" : kseq);
    m = reconstruct_rd(io::rd_coefficients_from_json(*coeffs, k), d, k);
  } else {
    throw UsageError("--space must be cube or rd");
  }
  write_output(out, io::to_json(m));
  return 0;
}

int cmd_probe(const std::string& out, std::size_t d, double p, const std::string& mesh, std::size_t max_pairs,
              std::uint64_t seed) {
  ProbeOptions opt;
  const auto e = log2_exact(DyadicRational::parse(mesh));
  if (!e) throw UsageError("--mesh must be a power of two");
  opt.mesh_log2 = *e;
  opt.max_pairs = max_pairs;
  opt.seed = seed;
  const ProbeReport r = lipschitz_probe(Patch::four_cube(d), p, opt);
  write_output(out, io::to_json(r));
  return r.within_envelope() ? 0 : 1;
}

int cmd_verify(const std::string& out, const std::string& suite, std::size_t d, double p, std::uint64_t seed) {
  verify::SuiteConfig cfg;
  cfg.d = d;
  cfg.p = p;
  cfg.seed = seed;
  const auto rep = verify::run_suite(suite, cfg);
  write_output(out, verify::to_json(rep));
  return rep.overall() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact free p-space computations: norms, bases, verification suites"};
  app.require_subcommand(1);

  std::string input, out;
  double p = 1.0;
  std::size_t d = 0, cap = 9, max_pairs = 0;
  int depth = 0;
  std::string kseq, space, ground = "support", metric = "sup", mesh = "1/16", suite = "all";
  std::uint64_t seed = 42;
  unsigned threads = 1;

  auto* norm = app.add_subcommand("norm", "free p-norm of a molecule");
  norm->add_option("input", input, "molecule JSON file ('-' for stdin)")->required();
  norm->add_option("--p", p, "exponent in (0, 1]")->required();
  norm->add_option("--cap", cap, "largest ground set solved exactly")->capture_default_str();
  norm->add_option("--ground", ground, "support | box:<radius>:<log2 mesh>")->capture_default_str();
  norm->add_option("--metric", metric, "sup | l1")->capture_default_str();
  norm->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  norm->add_option("--out", out, "output file (default stdout)");

  auto* exp = app.add_subcommand("expand", "basis coefficients of a molecule");
  exp->add_option("input", input, "molecule JSON file ('-' for stdin)")->required();
  exp->add_option("--space", space, "cube | rd")->required();
  exp->add_option("--depth", depth, "level N")->required();
  exp->add_option("--k-seq", kseq, "cutoffs for rd: linear:+c or 2,3,5,...")->default_str("linear:+2");
  exp->add_option("--out", out, "output file (default stdout)");

  auto* rec = app.add_subcommand("reconstruct", "molecule from basis coefficients");
  rec->add_option("input", input, "coefficient JSON file ('-' for stdin)")->required();
  rec->add_option("--space", space, "cube | rd (default: from the file, else cube)");
  rec->add_option("--d", d, "dimension (default: from the file)");
  rec->add_option("--k-seq", kseq, "cutoffs for rd (default: from the file, else linear:+2)");
  rec->add_option("--out", out, "output file (default stdout)");

  auto* probe = app.add_subcommand("probe-lipschitz", "measure the retraction Lipschitz ratio on a 4-cube patch");
  probe->add_option("--d", d, "dimension, 1 or 2")->required();
  probe->add_option("--p", p, "exponent in (0, 1]")->required();
  probe->add_option("--mesh", mesh, "sample mesh, a power of two")->capture_default_str();
  probe->add_option("--max-pairs", max_pairs, "0 = every pair")->capture_default_str();
  probe->add_option("--seed", seed)->capture_default_str();
  probe->add_option("--out", out, "output file (default stdout)");

  double verify_p = 0;
  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("--suite", suite, "lambda | retraction | projection | basis-cube | basis-rd | norm-oracle | all")
      ->capture_default_str();
  ver->add_option("--d", d, "restrict to one dimension");
  ver->add_option("--p", verify_p, "restrict to one exponent");
  ver->add_option("--seed", seed)->capture_default_str();
  ver->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (norm->parsed()) return cmd_norm(input, out, p, cap, ground, metric, threads);
    if (exp->parsed()) return cmd_expand(input, out, space, depth, kseq.empty() ? "linear:+2" : kseq);
    if (rec->parsed()) return cmd_reconstruct(input, out, space, d, kseq);
    if (probe->parsed()) return cmd_probe(out, d, p, mesh, max_pairs, seed);
    if (ver->parsed()) return cmd_verify(out, suite, d, verify_p, seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const DimensionMismatch& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
