// twoweight: weight characteristics, corona decompositions and the full
// bilinear-form ledger for pairs of atomic measures on a dyadic grid.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "twoweight/harness.hpp"

using namespace twoweight;

namespace {

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
}

std::string text_table(const json& j, int indent = 0) {
  std::string out;
  const std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object()) {
      out += pad + it.key() + ":\n" + text_table(it.value(), indent + 2);
    } else {
      out += pad + it.key() + " = " + it.value().dump() + "\n";
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  // timings go to stderr: stdout stays byte-identical across runs
  const auto t_start = std::chrono::steady_clock::now();
  CLI::App app{"two-weight Hilbert transform toolkit"};
  app.require_subcommand(1);

  // characteristics <sigma-file> <omega-file>
  std::string sigma_path, omega_path, out_path;
  double eps = 0.2, eps_trunc = -1.0, outer_R = -1.0, gamma_flag = -1.0;
  int r = 5, tau = 6, depth = 10, tail_doublings = 6;
  bool local_tails = false, text = false;
  auto* chars = app.add_subcommand("characteristics",
                                   "weight characteristics of a measure pair");
  chars->add_option("sigma", sigma_path, "sigma measure file")->required();
  chars->add_option("omega", omega_path, "omega measure file")->required();
  chars->add_option("--eps", eps, "goodness exponent in (0, 1/2)");
  chars->add_option("--r", r, "goodness parameter");
  chars->add_option("--tau", tau, "comparability cutoff (> r)");
  chars->add_option("--depth", depth, "grid depth");
  chars->add_option("--eps-trunc", eps_trunc,
                    "inner truncation (default: half the minimal gap)");
  chars->add_option("--outer-R", outer_R, "outer truncation radius");
  chars->add_option("--gamma", gamma_flag,
                    "corona parameter (default 4*E2+1)");
  chars->add_option("--tail-doublings", tail_doublings,
                    "root ancestors included in suprema");
  chars->add_flag("--local-tails", local_tails,
                  "integrate s_I^2 over I only in the two-tailed A2");
  chars->add_flag("--text", text, "aligned text output instead of JSON");
  chars->add_option("--out", out_path, "write the report to a file");

  // decompose <instance-file>
  std::string instance_path;
  double gamma_opt = -1.0, theta_opt = -1.0;
  std::string dec_out;
  bool dec_text = false;
  auto* dec = app.add_subcommand("decompose",
                                 "corona decomposition and form ledger");
  dec->add_option("instance", instance_path, "instance JSON file")->required();
  dec->add_option("--gamma", gamma_opt, "corona parameter (default 4*E2+1)");
  dec->add_option("--theta", theta_opt, "dual-tree parameter in (0, 1/2)");
  dec->add_flag("--text", dec_text, "aligned text output");
  dec->add_option("--out", dec_out, "write the report to a file");

  // verify --suite NAME --seeds a..b
  std::string suite_name, seed_spec = "1..20", baseline_dir = "baselines";
  bool update_baselines = false;
  std::string verify_out;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("--suite", suite_name,
                  "identities | lemmas | coronas | theorem | tree-oracle")
      ->required();
  ver->add_option("--seeds", seed_spec, "seed range a..b or list a,b,c");
  ver->add_option("--baseline-dir", baseline_dir,
                  "directory holding measured-constant baselines");
  ver->add_flag("--update-baselines", update_baselines,
                "rewrite the stored baselines from this run");
  ver->add_option("--out", verify_out, "write the report to a file");

  // sweep --profile P --out report.json
  std::string profile = "uniform", sweep_out = "report.json",
              sweep_seeds = "1..8";
  int sweep_atoms = 24, sweep_depth = 10;
  auto* sw = app.add_subcommand("sweep", "run full reports over seeds");
  sw->add_option("--profile", profile,
                 "uniform | clustered | common-atoms | adversarial-spike");
  sw->add_option("--seeds", sweep_seeds, "seed range");
  sw->add_option("--atoms", sweep_atoms, "atoms per measure");
  sw->add_option("--depth", sweep_depth, "grid depth");
  sw->add_option("--out", sweep_out, "output JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  auto finish = [&](int code) {
    std::cerr << "timing: "
              << std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t_start)
                     .count()
              << " s\n";
    return code;
  };

  try {
    if (*chars) {
      const DiscreteMeasure sigma = load_measure(sigma_path);
      const DiscreteMeasure omega = load_measure(omega_path);
      GridConfig cfg;
      cfg.r = r;
      cfg.eps = eps;
      cfg.tau = tau;
      cfg.max_depth = depth;
      cfg.tail_doublings = tail_doublings;
      cfg.validate();
      const Grid grid(choose_root(sigma, omega), depth);
      Truncation trunc = truncation_ladder(sigma, omega)[0];
      if (eps_trunc > 0.0) trunc.eps = eps_trunc;
      if (outer_R > 0.0) trunc.outer = outer_R;
      // weights-only corona: a constant test function never fires the
      // average criterion, so the forest is driven by Poisson-Energy alone
      const double e2 = energy_char(sigma, omega, grid).value;
      const double gm = gamma_flag > 1.0 ? gamma_flag : 4.0 * e2 + 1.0;
      std::vector<double> ones(sigma.size(), 1.0);
      StoppingForest forest(&grid, grid.root());
      if (mass(sigma, grid.root_interval()) > 0.0)
        forest = cz_pe_stopping(ones, sigma, omega, grid, gm, cfg);
      const auto rep = characteristic_report(sigma, omega, grid, cfg, trunc,
                                             forest, local_tails);
      json j;
      j["a2_offset"] = {{"value", rep.a2_offset.value},
                        {"witness", rep.a2_offset.witness}};
      j["a2_hole"] = {{"value", rep.a2_hole.value},
                      {"witness", rep.a2_hole.witness}};
      j["a2_twotailed"] = {{"value", rep.a2_twotailed.value},
                           {"witness", rep.a2_twotailed.witness}};
      j["testing_fwd"] = {{"value", rep.testing_fwd.value},
                          {"witness", rep.testing_fwd.witness}};
      j["testing_bwd"] = {{"value", rep.testing_bwd.value},
                          {"witness", rep.testing_bwd.witness}};
      j["testing_local"] = {{"value", rep.testing_local.value},
                            {"witness", rep.testing_local.witness}};
      j["weak_bdd"] = {{"value", rep.weak_bdd.value},
                       {"witness", rep.weak_bdd.witness}};
      j["energy_fwd"] = {{"value", rep.energy_fwd.value},
                         {"witness", rep.energy_fwd.witness}};
      j["energy_bwd"] = {{"value", rep.energy_bwd.value},
                         {"witness", rep.energy_bwd.witness}};
      j["pe"] = {{"value", rep.pe.value}, {"witness", rep.pe.witness}};
      j["func_energy"] = {{"direct", rep.func_energy.direct},
                          {"khat_fwd", rep.func_energy.khat_fwd},
                          {"khat_bwd", rep.func_energy.khat_bwd},
                          {"value", rep.func_energy.value}};
      j["gamma"] = gm;
      j["operator_norm"] = operator_norm(sigma, omega, trunc).value;
      j["root"] = {{"left", grid.root_interval().left},
                   {"length", grid.root_interval().length}};
      if (text) {
        std::cout << text_table(j);
      } else {
        emit(j, out_path);
      }
      return finish(0);
    }
    if (*dec) {
      std::ifstream in(instance_path);
      if (!in) throw std::runtime_error("cannot open " + instance_path);
      json ij;
      in >> ij;
      Instance inst = Instance::from_json(ij);
      if (theta_opt > 0.0) inst.cfg.theta = theta_opt;
      inst.cfg.validate();
      std::optional<double> gm;
      if (gamma_opt > 1.0) gm = gamma_opt;
      const RunReport rep = run_instance(inst, gm);
      const Grid grid = inst.grid();
      CoronaLog log;
      const StoppingForest forest =
          cz_pe_stopping(inst.f, inst.sigma, inst.omega, grid,
                         rep.corona.gamma, inst.cfg, &log);
      json j = rep.to_json();
      j["forest"] = forest.serialize();
      json skipped = json::array();
      for (const Dyad& d : log.skipped_zero_mass)
        skipped.push_back(grid.label(d));
      j["skipped_zero_mass_candidates"] = skipped;
      j["root"] = {{"left", grid.root_interval().left},
                   {"length", grid.root_interval().length}};
      if (dec_text) {
        std::cout << forest.serialize() << "\n" << text_table(j["forms"]);
      } else {
        emit(j, dec_out);
      }
      return finish(0);
    }
    if (*ver) {
      const auto seeds = parse_seed_range(seed_spec);
      const SuiteResult res =
          run_suite(suite_name, seeds, baseline_dir, update_baselines);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
      emit(res.report, verify_out);
      return finish(res.pass ? 0 : 1);
    }
    if (*sw) {
      GenOptions opt;
      opt.atoms = sweep_atoms;
      opt.max_depth = sweep_depth;
      json reports = json::array();
      for (std::uint64_t seed : parse_seed_range(sweep_seeds)) {
        const Instance inst = generate(seed, profile, opt);
        json j = run_instance(inst).to_json();
        j["seed"] = seed;
        j["profile"] = profile;
        reports.push_back(j);
      }
      json doc;
      doc["profile"] = profile;
      doc["reports"] = reports;
      emit(doc, sweep_out);
      return finish(0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
