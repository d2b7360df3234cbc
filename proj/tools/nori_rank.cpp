// nori-rank: command-line front end.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nori/acceptance.hpp"
#include "nori/nori.hpp"

namespace {

using nori::json;

struct Common {
  std::uint64_t oracle_cap = nori::kDefaultOracleCap;
  std::uint64_t seed = 0x5eed;
  unsigned threshold_mult = nori::kDefaultThresholdMult;
  unsigned max_iter = 16;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--oracle-cap", c.oracle_cap, "Largest group enumerated for composition factors")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for sampled rank sweeps and unipotent harvests")->capture_default_str();
  cmd->add_option("--threshold-mult", c.threshold_mult, "Heuristic-regime threshold: ell > M * dim")
      ->capture_default_str();
  cmd->add_option("--max-iter", c.max_iter, "Lattice stabilization rounds for rational input")->capture_default_str();
}

nori::AnalyzeOptions analyze_options(const Common& c) {
  nori::AnalyzeOptions o;
  o.oracle_cap = c.oracle_cap;
  o.envelope.rank.seed = c.seed;
  o.envelope.threshold_mult = c.threshold_mult;
  o.harvest.seed = c.seed;
  return o;
}

json options_json(const Common& c) {
  return {{"oracle_cap", c.oracle_cap}, {"seed", c.seed}, {"threshold_mult", c.threshold_mult}, {"max_iter", c.max_iter}};
}

/// Finite-field group for an instance; rational input goes through the
/// lattice front door first.
nori::GroupInstance resolve(const nori::Instance& inst, const Common& c, std::optional<json>& lattice) {
  if (inst.group) return *inst.group;
  auto s = nori::stabilize_lattice(inst.rational_gens, inst.prime, c.max_iter);
  nori::GroupInstance g = nori::reduce_mod_ell(s.integral, inst.prime);
  if (inst.ambient) g.ambient = inst.ambient;
  lattice = json{{"basis", nori::rational_to_json(s.basis)}, {"iterations", s.iterations}};
  return g;
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

int analyze_exit(const nori::Report& r) {
  if (nori::any_verdict(r, nori::Verdict::Refuted)) return nori::exit_code::refuted;
  if (r.heuristic_regime && nori::any_verdict(r, nori::Verdict::Certified)) return nori::exit_code::certified_heuristic;
  return nori::exit_code::ok;
}

int cmd_analyze(const std::string& path, const Common& c) {
  nori::Instance inst = nori::parse_instance_file(path);
  print_warnings(inst.warnings);
  std::optional<json> lattice;
  nori::GroupInstance g = resolve(inst, c, lattice);
  nori::Report r = nori::analyze(g, analyze_options(c));
  nori::ReportContext ctx{inst.digest, options_json(c), inst.warnings, lattice};
  std::cout << nori::report_to_json(g, r, ctx).dump(2) << "\n";
  return analyze_exit(r);
}

int cmd_certify(const std::string& path, const std::string& criterion, const Common& c) {
  nori::Instance inst = nori::parse_instance_file(path);
  print_warnings(inst.warnings);
  std::optional<json> lattice;
  nori::GroupInstance g = resolve(inst, c, lattice);
  if (!g.ambient) throw nori::Error(nori::ErrorKind::MissingAmbient, "instance declares no ambient group");
  nori::Report r = nori::analyze(g, analyze_options(c));
  const std::vector<std::string> names{"rank", "typea", "pertype", "dim"};
  std::size_t idx = std::find(names.begin(), names.end(), criterion) - names.begin();
  const nori::Certificate& cert = r.certificates.at(idx);
  json out = nori::certificate_to_json(cert);
  out["input_digest"] = inst.digest;
  std::cout << out.dump(2) << "\n";
  switch (cert.verdict) {
    case nori::Verdict::Refuted: return nori::exit_code::refuted;
    case nori::Verdict::Inconclusive: return nori::exit_code::inconclusive;
    case nori::Verdict::Certified:
      return cert.evidence.heuristic_regime ? nori::exit_code::certified_heuristic : nori::exit_code::ok;
  }
  return nori::exit_code::failure;
}

int cmd_reduce(const std::string& path, std::uint64_t ell, const Common& c) {
  nori::Instance inst = nori::parse_instance_file(path);
  if (!inst.rational) throw nori::Error(nori::ErrorKind::SchemaError, "at /rational: reduce expects a rational instance");
  auto s = nori::stabilize_lattice(inst.rational_gens, ell, c.max_iter);
  nori::GroupInstance g = nori::reduce_mod_ell(s.integral, ell);
  json gens = json::array();
  for (const auto& m : g.generators) gens.push_back(nori::matrix_to_json(*g.field, m));
  json integral = json::array();
  for (const auto& m : s.integral) integral.push_back(nori::rational_to_json(m));
  json reduced = {{"prime", ell}, {"ext_degree", 1}, {"dim", g.n}, {"generators", gens}};
  if (auto it = inst.canonical.find("ambient"); it != inst.canonical.end()) reduced["ambient"] = *it;
  json out = {{"input_digest", inst.digest},
              {"basis", nori::rational_to_json(s.basis)},
              {"iterations", s.iterations},
              {"integral_generators", integral},
              {"reduced", reduced}};
  std::cout << out.dump(2) << "\n";
  return nori::exit_code::ok;
}

int cmd_oracle(const std::string& path, const Common& c) {
  nori::Instance inst = nori::parse_instance_file(path);
  print_warnings(inst.warnings);
  std::optional<json> lattice;
  nori::GroupInstance g = resolve(inst, c, lattice);
  auto e = nori::enumerate(g, c.oracle_cap);
  auto factors = nori::composition_series(e, g.field->ell(), {c.oracle_cap, nori::kDefaultDomainBound});
  json comp = json::array();
  for (const auto& f : factors) comp.push_back(nori::factor_to_json(f));
  json out = {{"input_digest", inst.digest},
              {"order", e.order()},
              {"composition", comp},
              {"profile", nori::profile_to_json(nori::rank_profile(factors, g.field->ell()))}};
  std::cout << out.dump(2) << "\n";
  return nori::exit_code::ok;
}

int cmd_tables(const std::string& format, std::optional<std::uint64_t> ell) {
  if (ell && !nori::is_prime(*ell)) throw nori::Error(nori::ErrorKind::NotPrime, std::to_string(*ell) + " is not prime");
  json t = nori::tables_json(ell);
  if (format == "json") std::cout << t.dump(2) << "\n";
  else std::cout << nori::tables_text(t);
  return nori::exit_code::ok;
}

int cmd_selftest(const std::string& fault_name, bool timings, const std::vector<int>& only, bool skip_sl3_f7) {
  nori::acceptance::Options opt;
  opt.include_sl3_f7 = !skip_sl3_f7;
  std::optional<nori::FaultGuard> guard;
  if (!fault_name.empty()) {
    auto f = nori::fault_from_string(fault_name);
    if (!f) throw nori::Error(nori::ErrorKind::InvalidArgument, "unknown fault '" + fault_name + "'");
    guard.emplace(*f);
  }
  auto results = nori::acceptance::run(opt, std::cout, timings, only);
  for (const auto& r : results)
    if (!r.pass) return nori::exit_code::failure;
  return nori::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank invariants of finite matrix groups and fullness certificates"};
  app.require_subcommand(1);
  Common common;
  std::string path, criterion, format = "json", fault;
  std::uint64_t ell = 0;
  std::optional<std::uint64_t> table_ell;
  bool timings = false, skip_sl3_f7 = false;
  std::vector<int> only;

  auto* analyze = app.add_subcommand("analyze", "Both routes plus every certificate; prints the report JSON");
  analyze->add_option("instance", path, "Instance JSON file")->required();
  add_common(analyze, common);

  auto* certify = app.add_subcommand("certify", "Evaluate one certificate");
  certify->add_option("instance", path, "Instance JSON file")->required();
  certify->add_option("--criterion", criterion, "rank | typea | pertype | dim")
      ->required()
      ->check(CLI::IsMember({"rank", "typea", "pertype", "dim"}));
  add_common(certify, common);

  auto* reduce = app.add_subcommand("reduce", "Stabilize a lattice for rational generators and reduce mod ell");
  reduce->add_option("instance", path, "Rational instance JSON file")->required();
  reduce->add_option("--ell", ell, "Prime")->required();
  add_common(reduce, common);

  auto* tables = app.add_subcommand("tables", "Dimension, rank and order tables");
  tables->add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  tables->add_option("--ell", table_ell, "Restrict orders and simple groups to this characteristic");

  auto* oracle = app.add_subcommand("oracle", "Composition factors and profile only");
  oracle->add_option("instance", path, "Instance JSON file")->required();
  add_common(oracle, common);

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance corpus");
  selftest->add_option("--inject-fault", fault, "Activate a deliberate table fault");
  selftest->add_flag("--timings", timings, "Append run times to each line");
  selftest->add_option("--only", only, "Run only these criterion numbers")->delimiter(',');
  selftest->add_flag("--skip-sl3-f7", skip_sl3_f7, "Leave SL_3(F_7) out of the corpus");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(path, common);
    if (*certify) return cmd_certify(path, criterion, common);
    if (*reduce) return cmd_reduce(path, ell, common);
    if (*tables) return cmd_tables(format, table_ell);
    if (*oracle) return cmd_oracle(path, common);
    if (*selftest) return cmd_selftest(fault, timings, only, skip_sl3_f7);
  } catch (const nori::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nori::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nori::exit_code::failure;
  }
  return nori::exit_code::failure;
}
