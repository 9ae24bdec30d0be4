// cycleforge: exact combinatorial machinery for small covers, right-angled
// Coxeter state machines, cycle-realizing covers, and spherical map
// synthesis, with machine-checkable certificates.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cycleforge/json_io.hpp"
#include "cycleforge/permutahedron.hpp"

namespace cf = cycleforge;
using cf::io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kSemanticFail = 1, kBudget = 2, kParse = 3 };

struct Config {
  std::string input;
  std::string lambda_path;
  std::string pairings_path;
  std::string phi_path;
  uint64_t budget = 1000000;
  uint64_t seed = 0;
  bool exact = false;
  double tolerance = 1e-9;
  bool json_out = true;
  bool auto_subdivide = false;
  int n = 0;
  double eps = 0;
  bool flag_square = false;
  bool real_moment_angle = false;
};

class Reporter {
 public:
  Reporter(std::string command, bool json_out)
      : command_(std::move(command)), json_out_(json_out),
        start_(std::chrono::steady_clock::now()) {}

  int emit(const std::string& status, const json& payload) {
    if (json_out_) {
      json out;
      out["command"] = command_;
      out["status"] = status;
      out["payload"] = payload;
      out["timing_ms"] = elapsed_ms();
      out["version"] = kVersion;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << command_ << ": " << status << "\n";
      print_text(payload, "");
    }
    if (status == "pass") return kOk;
    if (status == "partial") return kBudget;
    return kSemanticFail;
  }

 private:
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

  void print_text(const json& j, const std::string& prefix) const {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        print_text(*it, prefix + it.key() + ".");
      } else {
        std::cout << "  " << prefix << it.key() << " = " << it->dump() << "\n";
      }
    }
  }

  std::string command_;
  bool json_out_;
  std::chrono::steady_clock::time_point start_;
};

json violations_to_json(const cf::simplicial::PmReport& rep) {
  json v = json::array();
  for (auto violation : rep.violations) v.push_back(cf::simplicial::to_string(violation));
  return v;
}

int cmd_check(const Config& cfg) {
  Reporter reporter("check", cfg.json_out);
  auto file = cf::io::parse_complex(cf::io::load_file(cfg.input));
  auto rep = cf::simplicial::validate_pseudo_manifold(file.complex, true);

  json payload;
  payload["pseudo_manifold"] = rep.pseudo_manifold;
  payload["strongly_connected"] = rep.strongly_connected;
  payload["orientable"] = rep.orientable;
  payload["violations"] = violations_to_json(rep);
  payload["bad_ridges"] = rep.bad_ridges.size();
  bool pass = rep.pseudo_manifold;
  if (file.orientation) {
    bool orientation_ok = cf::simplicial::is_valid_orientation(file.complex, *file.orientation);
    payload["orientation_valid"] = orientation_ok;
    pass = pass && orientation_ok;
  }

  if (cfg.flag_square) {
    auto fs = cf::small_cover::flag_square_predicates(file.complex);
    payload["is_flag"] = fs.is_flag;
    payload["has_empty_4_circuit"] = fs.has_empty_4_circuit;
    if (!fs.is_flag) payload["flag_witness"] = fs.flag_witness;
    if (fs.has_empty_4_circuit) payload["square_witness"] = fs.square_witness;
  }
  if (!cfg.lambda_path.empty()) {
    auto lam = cf::io::parse_lambda(cf::io::load_file(cfg.lambda_path));
    auto cell = cf::small_cover::SimpleCellInput::analyze(file.complex);
    auto res = cf::small_cover::validate_characteristic(cell, lam);
    payload["characteristic_ok"] = res.ok;
    if (!res.ok) payload["offending_simplex"] = res.offending;
    pass = pass && res.ok;
  }
  return reporter.emit(pass ? "pass" : "fail", payload);
}

int cmd_realize(const Config& cfg) {
  Reporter reporter("realize", cfg.json_out);
  auto file = cf::io::parse_complex(cf::io::load_file(cfg.input));
  auto complex = file.complex;
  auto coloring = file.coloring;
  const int n = complex.dim;
  bool subdivided = false;

  bool coloring_usable = coloring && coloring->regular;
  if (coloring_usable)
    for (int c : coloring->colors)
      if (c < 1 || c > n + 1) coloring_usable = false;
  if (!coloring_usable) {
    if (!cfg.auto_subdivide)
      return reporter.emit("fail",
                           {{"error", "input has no regular coloring in n+1 colors; "
                                      "rerun with --auto-subdivide"}});
    auto [sub, col] = cf::simplicial::barycentric_subdivide(complex);
    complex = std::move(sub);
    coloring = std::move(col);
    subdivided = true;
  }

  auto pm = cf::simplicial::validate_pseudo_manifold(complex, true);
  if (!pm.ok() || !pm.strongly_connected)
    return reporter.emit("fail", {{"error", "input is not an oriented strongly connected "
                                            "pseudo-manifold"},
                                  {"violations", violations_to_json(pm)}});

  auto input = cf::realization::ColoredCycleInput::prepare(*pm.value, *coloring);
  cf::realization::PairingFamily fam;
  if (!cfg.pairings_path.empty())
    fam = cf::io::parse_pairings(cf::io::load_file(cfg.pairings_path), input.n);
  else
    fam = cf::realization::build_pairings(input);
  if (auto bad = cf::realization::validate_pairings(input, fam))
    return reporter.emit("fail", {{"error", "pairing family violates condition " +
                                                bad->condition},
                                  {"sigma", bad->sigma},
                                  {"omega", bad->omega}});

  auto atlas = cf::realization::enumerate_covering(input, fam, cfg.budget);
  auto cert = cf::realization::verify_certificate(atlas, input, fam);

  json checks;
  checks["fiber_uniform"] = cert.fiber_uniform;
  checks["parity_coherent"] = cert.parity_coherent;
  checks["typeface_coherent"] = cert.typeface_coherent;
  checks["codim2_commutes"] = cert.codim2_commutes;
  checks["projection_uniform"] = cert.projection_uniform;
  checks["involutive"] = cert.involutive;

  json payload;
  payload["cells"] = cert.cells;
  payload["k"] = cert.k;
  payload["projection_fiber"] = cert.projection_fiber;
  payload["complete"] = cert.complete;
  payload["checks"] = checks;
  payload["subdivided"] = subdivided;
  if (!cert.witnesses.empty()) payload["witnesses"] = cert.witnesses;

  bool local_ok = cert.parity_coherent && cert.typeface_coherent && cert.codim2_commutes &&
                  cert.involutive;
  if (atlas.complete && cert.all_checks_pass()) return reporter.emit("pass", payload);
  if (!atlas.complete && local_ok) return reporter.emit("partial", payload);
  return reporter.emit("fail", payload);
}

int cmd_constants(const Config& cfg) {
  Reporter reporter("constants", cfg.json_out);
  auto t = cf::permutahedron::constants(cfg.n);
  json payload;
  payload["n"] = cfg.n;
  payload["eps"] = static_cast<double>(t.eps);
  payload["rho"] = static_cast<double>(t.rho);
  payload["circumradius"] = static_cast<double>(t.circumradius);
  payload["facet_inradius"] = static_cast<double>(t.facet_inradius);
  payload["identity_residual"] = static_cast<double>(t.identity_residual);
  payload["squared_circumradius"] = t.squared_circumradius.str();
  payload["squared_facet_inradius"] = t.squared_facet_inradius.str();
  return reporter.emit("pass", payload);
}

int cmd_dominate(const Config& cfg) {
  Reporter reporter("dominate", cfg.json_out);
  if (!cfg.phi_path.empty()) {
    auto phi = cf::io::parse_map(cf::io::load_file(cfg.phi_path));
    auto pm1 = cf::simplicial::validate_pseudo_manifold(phi.source, true);
    auto pm2 = cf::simplicial::validate_pseudo_manifold(phi.target, true);
    if (!pm1.ok() || !pm2.ok())
      return reporter.emit("fail", {{"error", "both complexes must be oriented "
                                              "pseudo-manifolds"}});
    try {
      auto res = cf::small_cover::induced_domination(phi, *pm1.value, *pm2.value);
      return reporter.emit("pass", {{"phi_degree", res.phi_degree},
                                    {"cell_degree", res.cell_degree}});
    } catch (const cf::small_cover::ZeroDegreeInputError& e) {
      return reporter.emit("fail", {{"error", e.what()}});
    }
  }
  auto placement = cf::io::parse_placement(cf::io::load_file(cfg.input));
  const int n = placement.complex.dim + 1;
  if (cfg.n != 0 && cfg.n != n)
    return reporter.emit("fail", {{"error", "--n disagrees with the complex dimension"}});
  double eps = cfg.eps > 0 ? cfg.eps
                           : static_cast<double>(cf::permutahedron::constants(n).eps);
  auto fine = cf::sphere_maps::make_fine_data(placement.complex, placement.vectors, eps,
                                              placement.exact);
  auto rep = cf::sphere_maps::dominate_via_permutahedron(fine, cfg.tolerance);
  json payload;
  payload["n"] = rep.n;
  payload["fine_eps"] = rep.fine_eps;
  payload["eps_n"] = rep.eps_n;
  payload["phi_degree"] = rep.phi_degree;
  payload["phi_into_delta_prime_degree"] = rep.phi_into_delta_prime_degree;
  payload["cell_degree"] = rep.cell_degree;
  return reporter.emit(rep.ok ? "pass" : "fail", payload);
}

int cmd_covers(const Config& cfg) {
  Reporter reporter("covers", cfg.json_out);
  auto file = cf::io::parse_complex(cf::io::load_file(cfg.input));
  auto cell = cf::small_cover::SimpleCellInput::analyze(file.complex);
  if (!cell.pm.pseudo_manifold)
    return reporter.emit("fail", {{"error", "input is not a pseudo-manifold"}});

  cf::small_cover::QuotientComplex q;
  if (cfg.real_moment_angle || cfg.lambda_path.empty()) {
    q = cf::small_cover::build_real_moment_angle(cell);
  } else {
    auto lam = cf::io::parse_lambda(cf::io::load_file(cfg.lambda_path));
    try {
      q = cf::small_cover::build_quotient(cell, lam.values, lam.rank);
    } catch (const cf::small_cover::InvalidCharacteristicError& e) {
      return reporter.emit("fail", {{"error", e.what()}});
    }
  }
  auto check = cf::small_cover::euler_and_local_check(q);
  json payload;
  payload["cells"] = q.total_cells();
  payload["f_vector"] = q.f_vector();
  payload["euler"] = check.euler;
  payload["local_ok"] = check.local_ok;
  payload["orientable"] = q.orientable_by_parity;
  return reporter.emit(check.local_ok ? "pass" : "fail", payload);
}

json verify_report_to_json(const cf::coxeter::VerifyReport& rep) {
  json failures = json::array();
  for (const auto& f : rep.failures) {
    json entry;
    entry["check"] = f.check;
    entry["word"] = f.word;
    if (f.omega >= 0) entry["omega"] = f.omega;
    failures.push_back(entry);
  }
  return {{"trials", rep.trials}, {"failures", failures}};
}

int cmd_verify_algebra(const Config& cfg, int trials, int max_len, bool artin) {
  Reporter reporter("verify-algebra", cfg.json_out);
  auto poset = cf::io::parse_poset(cf::io::load_file(cfg.input));
  auto rep = cf::coxeter::verify_semidirect_algebra(poset, trials, max_len, cfg.seed);
  json payload;
  payload["elements"] = poset.size;
  payload["semidirect"] = verify_report_to_json(rep);
  bool ok = rep.ok();
  if (artin) {
    auto arep = cf::coxeter::verify_artin(poset, trials, cfg.seed);
    payload["artin"] = verify_report_to_json(arep);
    ok = ok && arep.ok();
  }
  return reporter.emit(ok ? "pass" : "fail", payload);
}

int cmd_certify_fine(const Config& cfg) {
  Reporter reporter("certify-fine", cfg.json_out);
  auto placement = cf::io::parse_placement(cf::io::load_file(cfg.input));
  if (cfg.exact && !placement.exact)
    return reporter.emit("fail", {{"error", "--exact requires exact vectors in the file"}});
  auto fine = cf::sphere_maps::make_fine_data(placement.complex, placement.vectors, cfg.eps,
                                              placement.exact);
  auto cert = cf::sphere_maps::fine_certificate(fine, cfg.seed);
  json payload;
  payload["pass"] = cert.pass;
  payload["degree"] = cert.degree;
  json viols = json::array();
  for (const auto& v : cert.violations)
    viols.push_back({{"simplex", v.simplex}, {"diameter", v.diameter}});
  payload["violations"] = viols;
  return reporter.emit(cert.pass ? "pass" : "fail", payload);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycleforge: certified combinatorics of small covers and cycle realization"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed (default 0)");
    auto* ef = sub->add_flag("--exact", cfg.exact, "require exact rational arithmetic");
    sub->add_flag("--float", "allow floating point (default)")->excludes(ef);
    sub->add_option("--tolerance", cfg.tolerance, "float-mode tolerance")
        ->check(CLI::Range(1e-300, 1e-3));
    auto* jf = sub->add_flag("--json", "JSON report output");
    auto* tf = sub->add_flag("--text", "plain text report output");
    tf->excludes(jf);
  };

  auto* check = app.add_subcommand("check", "validate a complex file");
  check->add_option("--input", cfg.input, "complex JSON file")->required();
  check->add_flag("--flag-square", cfg.flag_square, "also run flag/no-square predicates");
  check->add_option("--lambda", cfg.lambda_path, "characteristic function JSON file");
  add_common(check);

  auto* realize = app.add_subcommand("realize", "enumerate the realization cover");
  realize->add_option("--input", cfg.input, "pseudo-manifold JSON file")->required();
  realize->add_option("--budget", cfg.budget, "state budget")->check(CLI::PositiveNumber);
  realize->add_option("--pairings", cfg.pairings_path, "pairing family JSON file");
  realize->add_flag("--auto-subdivide", cfg.auto_subdivide,
                    "barycentrically subdivide uncolored input");
  add_common(realize);

  auto* constants = app.add_subcommand("constants", "fine/sparse constants table");
  constants->add_option("--n", cfg.n, "dimension")->required()->check(CLI::PositiveNumber);
  add_common(constants);

  auto* dominate = app.add_subcommand("dominate", "nonzero-degree domination pipelines");
  dominate->add_option("--input", cfg.input, "placement JSON file");
  dominate->add_option("--phi", cfg.phi_path, "simplicial map JSON file");
  dominate->add_option("--n", cfg.n, "expected dimension");
  dominate->add_option("--eps", cfg.eps, "fineness parameter override");
  add_common(dominate);

  auto* covers = app.add_subcommand("covers", "quotient cell complexes");
  covers->add_option("--input", cfg.input, "complex JSON file")->required();
  covers->add_option("--lambda", cfg.lambda_path, "characteristic function JSON file");
  covers->add_flag("--real-moment-angle", cfg.real_moment_angle,
                   "one generator per facet instead of the characteristic function");
  add_common(covers);

  auto* fine = app.add_subcommand("certify-fine", "fineness certificate for a placement");
  fine->add_option("--input", cfg.input, "placement JSON file")->required();
  fine->add_option("--eps", cfg.eps, "fineness parameter")->required();
  add_common(fine);

  int va_trials = 500;
  int va_max_len = 12;
  bool va_artin = false;
  auto* verify = app.add_subcommand("verify-algebra",
                                    "randomized semidirect-product property suite");
  verify->add_option("--poset", cfg.input, "poset JSON file")->required();
  verify->add_option("--trials", va_trials, "number of random trials")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-len", va_max_len, "maximum word length")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--artin", va_artin, "also run the right-angled Artin variant");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  // text is the natural default for the constants table, json elsewhere
  auto resolve_output = [&cfg](CLI::App* sub, bool default_json) {
    if (sub->count("--json"))
      cfg.json_out = true;
    else if (sub->count("--text"))
      cfg.json_out = false;
    else
      cfg.json_out = default_json;
  };

  try {
    if (app.got_subcommand(check)) {
      resolve_output(check, true);
      return cmd_check(cfg);
    }
    if (app.got_subcommand(realize)) {
      resolve_output(realize, true);
      return cmd_realize(cfg);
    }
    if (app.got_subcommand(constants)) {
      resolve_output(constants, false);
      return cmd_constants(cfg);
    }
    if (app.got_subcommand(dominate)) {
      resolve_output(dominate, true);
      if (cfg.input.empty() && cfg.phi_path.empty()) {
        std::cerr << "dominate needs --input or --phi\n";
        return kParse;
      }
      return cmd_dominate(cfg);
    }
    if (app.got_subcommand(covers)) {
      resolve_output(covers, true);
      return cmd_covers(cfg);
    }
    if (app.got_subcommand(fine)) {
      resolve_output(fine, true);
      return cmd_certify_fine(cfg);
    }
    if (app.got_subcommand(verify)) {
      resolve_output(verify, true);
      return cmd_verify_algebra(cfg, va_trials, va_max_len, va_artin);
    }
  } catch (const cf::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemanticFail;
  }
  return kParse;
}
