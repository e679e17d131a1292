#include "twoweight/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "twoweight/haar.hpp"

namespace twoweight {

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::int64_t Rng::below(std::int64_t n) {
  return static_cast<std::int64_t>(uniform() * static_cast<double>(n)) % n;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Instance generate(std::uint64_t seed, const std::string& profile,
                  const GenOptions& opt) {
  Instance inst;
  inst.seed = seed;
  inst.profile = profile;
  inst.cfg.r = opt.r;
  inst.cfg.eps = opt.eps;
  inst.cfg.tau = opt.tau;
  inst.cfg.max_depth = opt.max_depth;
  inst.cfg.theta = opt.theta;
  inst.cfg.tail_doublings = opt.tail_doublings;
  inst.cfg.validate();
  inst.root = {0.0, 1.0};

  Rng rng(seed * 0x9E3779B97F4A7C15ULL ^ fnv1a(profile));
  const int pos_depth =
      opt.position_depth < 0 ? opt.max_depth : opt.position_depth;
  const std::int64_t slots = std::int64_t{1} << pos_depth;
  const double unit = std::ldexp(1.0, -pos_depth);
  const int n = std::max(2, opt.atoms);
  const Grid grid0(inst.root, inst.cfg.max_depth);

  // Anchors: good intervals with good children. Placing atoms in both halves
  // of an anchor puts it into the good Haar support, so supports reach deep
  // scales and the below/diagonal pair classes are populated.
  std::vector<Dyad> anchor_pool;
  for (int d = inst.cfg.tau; d <= inst.cfg.max_depth - 1; ++d)
    for (std::int64_t k = 0; k < (std::int64_t{1} << d); ++k) {
      const Dyad cand{d, k};
      auto [lo, hi] = grid0.children(cand);
      if (grid0.is_good(cand, inst.cfg) && grid0.is_good(lo, inst.cfg) &&
          grid0.is_good(hi, inst.cfg))
        anchor_pool.push_back(cand);
    }

  auto slot_span = [&](Dyad d) {
    const std::int64_t width = std::int64_t{1} << (pos_depth - d.n);
    return std::pair<std::int64_t, std::int64_t>{d.k * width,
                                                 (d.k + 1) * width};
  };
  auto add_anchor_atoms = [&](std::set<std::int64_t>& used, Dyad anchor) {
    for (const Dyad& child : {Dyad{anchor.n + 1, 2 * anchor.k},
                              Dyad{anchor.n + 1, 2 * anchor.k + 1}}) {
      auto [lo, hi] = slot_span(child);
      const int want = 1 + static_cast<int>(rng.below(2));
      for (int a = 0; a < want; ++a)
        used.insert(lo + rng.below(std::max<std::int64_t>(1, hi - lo)));
    }
  };
  auto anchored_slots = [&](int count, int anchors, bool deep) {
    std::set<std::int64_t> used;
    for (int a = 0; a < anchors && !anchor_pool.empty(); ++a) {
      std::size_t pick;
      if (deep) {
        // bias towards the deepest candidates
        pick = anchor_pool.size() - 1 -
               static_cast<std::size_t>(
                   rng.below(std::max<std::int64_t>(
                       1, static_cast<std::int64_t>(anchor_pool.size()) / 3)));
      } else {
        pick = static_cast<std::size_t>(
            rng.below(static_cast<std::int64_t>(anchor_pool.size())));
      }
      add_anchor_atoms(used, anchor_pool[pick]);
    }
    while (static_cast<int>(used.size()) < count)
      used.insert(rng.below(slots));
    return std::vector<std::int64_t>(used.begin(), used.end());
  };

  std::vector<std::int64_t> s_slots, w_slots;
  if (profile == "clustered") {
    s_slots = anchored_slots(n, 3, true);
    w_slots = anchored_slots(n, 3, true);
  } else if (profile == "common-atoms") {
    s_slots = anchored_slots(n, 2, false);
    std::set<std::int64_t> shared(s_slots.begin(),
                                  s_slots.begin() + (n + 1) / 2);
    while (static_cast<int>(shared.size()) < n) shared.insert(rng.below(slots));
    w_slots.assign(shared.begin(), shared.end());
  } else {  // uniform, adversarial-spike
    s_slots = anchored_slots(n, 2, false);
    w_slots = anchored_slots(n, 2, false);
  }

  auto build = [&](const std::vector<std::int64_t>& ks) {
    std::vector<double> pos, mass;
    for (std::int64_t k : ks) {
      pos.push_back(static_cast<double>(k) * unit);
      mass.push_back(std::exp(rng.uniform(-std::log(4.0), std::log(4.0))));
    }
    return DiscreteMeasure(std::move(pos), std::move(mass));
  };
  DiscreteMeasure sigma = build(s_slots), omega = build(w_slots);
  std::size_t spike = 0;
  if (profile == "adversarial-spike") {
    spike = static_cast<std::size_t>(rng.below(sigma.size()));
    auto pos = sigma.positions();
    auto ms = sigma.masses();
    ms[spike] *= 500.0;
    sigma = DiscreteMeasure(std::move(pos), std::move(ms));
  }
  inst.sigma = std::move(sigma);
  inst.omega = std::move(omega);

  const Grid grid = inst.grid();
  auto draw = [&](const DiscreteMeasure& mu, std::uint64_t sub) {
    Rng r2(seed ^ sub);
    std::vector<double> v(mu.size());
    for (double& x : v) x = r2.uniform(-1.0, 1.0);
    return v;
  };
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto fraw = draw(inst.sigma, 0x0F0F0F0FULL + attempt * 7919);
    if (profile == "adversarial-spike") fraw[spike] = 50.0;
    auto graw = draw(inst.omega, 0xF0F0F0F0ULL + attempt * 7919);
    inst.lambda_f = haar_support(fraw, inst.sigma, grid, inst.cfg, true);
    inst.lambda_g = haar_support(graw, inst.omega, grid, inst.cfg, true);
    if ((!inst.lambda_f.empty() && !inst.lambda_g.empty()) || attempt > 50) {
      inst.f = project(fraw, inst.sigma, grid, inst.lambda_f);
      inst.g = project(graw, inst.omega, grid, inst.lambda_g);
      break;
    }
  }
  inst.trunc = truncation_ladder(inst.sigma, inst.omega)[0];
  return inst;
}

json Instance::to_json() const {
  json j;
  j["seed"] = seed;
  j["profile"] = profile;
  j["root"] = {{"left", root.left}, {"length", root.length}};
  j["config"] = {{"r", cfg.r},
                 {"eps", cfg.eps},
                 {"tau", cfg.tau},
                 {"max_depth", cfg.max_depth},
                 {"gamma", cfg.gamma},
                 {"theta", cfg.theta},
                 {"tail_doublings", cfg.tail_doublings}};
  auto atoms = [](const DiscreteMeasure& mu) {
    json a = json::array();
    for (std::size_t i = 0; i < mu.size(); ++i)
      a.push_back({mu.position(i), mu.mass_at(i)});
    return a;
  };
  j["sigma"] = atoms(sigma);
  j["omega"] = atoms(omega);
  j["f"] = f;
  j["g"] = g;
  j["trunc"] = {{"eps", trunc.eps}};
  if (std::isfinite(trunc.outer)) j["trunc"]["outer"] = trunc.outer;
  return j;
}

Instance Instance::from_json(const json& j) {
  Instance inst;
  inst.seed = j.value("seed", std::uint64_t{0});
  inst.profile = j.value("profile", std::string("file"));
  inst.root = {j["root"]["left"].get<double>(),
               j["root"]["length"].get<double>()};
  const auto& c = j["config"];
  inst.cfg.r = c["r"].get<int>();
  inst.cfg.eps = c["eps"].get<double>();
  inst.cfg.tau = c["tau"].get<int>();
  inst.cfg.max_depth = c["max_depth"].get<int>();
  inst.cfg.gamma = c.value("gamma", 2.0);
  inst.cfg.theta = c.value("theta", 0.25);
  inst.cfg.tail_doublings = c.value("tail_doublings", 6);
  inst.cfg.validate();
  auto parse_measure = [](const json& a) {
    std::vector<double> pos, mass;
    for (const auto& row : a) {
      pos.push_back(row[0].get<double>());
      mass.push_back(row[1].get<double>());
    }
    return DiscreteMeasure(std::move(pos), std::move(mass));
  };
  inst.sigma = parse_measure(j["sigma"]);
  inst.omega = parse_measure(j["omega"]);
  inst.f = j["f"].get<std::vector<double>>();
  inst.g = j["g"].get<std::vector<double>>();
  if (inst.f.size() != inst.sigma.size() ||
      inst.g.size() != inst.omega.size())
    throw std::invalid_argument("instance: f/g do not match the atom counts");
  inst.trunc.eps = j["trunc"]["eps"].get<double>();
  inst.trunc.outer = j["trunc"].contains("outer")
                         ? j["trunc"]["outer"].get<double>()
                         : std::numeric_limits<double>::infinity();
  const Grid grid = inst.grid();
  inst.lambda_f = haar_support(inst.f, inst.sigma, grid, inst.cfg, true);
  inst.lambda_g = haar_support(inst.g, inst.omega, grid, inst.cfg, true);
  return inst;
}

DiscreteMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open measure file: " + path);
  std::vector<std::pair<double, double>> atoms;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double p, m;
    if (ls >> p >> m) atoms.emplace_back(p, m);
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> pos, mass;
  for (const auto& [p, m] : atoms) {
    if (!pos.empty() && pos.back() == p) {
      mass.back() += m;  // merge coincident atoms
    } else {
      pos.push_back(p);
      mass.push_back(m);
    }
  }
  return DiscreteMeasure(std::move(pos), std::move(mass));
}

void save_measure(const DiscreteMeasure& mu, const std::string& path) {
  std::ofstream out(path);
  out << "# position mass\n";
  out.precision(17);
  for (std::size_t i = 0; i < mu.size(); ++i)
    out << mu.position(i) << " " << mu.mass_at(i) << "\n";
}

Interval choose_root(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto* mu : {&a, &b}) {
    if (mu->empty()) continue;
    const double l = mu->position(0), h = mu->position(mu->size() - 1);
    if (!any) {
      lo = l;
      hi = h;
      any = true;
    } else {
      lo = std::min(lo, l);
      hi = std::max(hi, h);
    }
  }
  if (!any) return {0.0, 1.0};
  const double left = std::floor(lo);
  double len = 1.0;
  while (left + len <= hi) len *= 2.0;
  return {left, len};
}

namespace {

json witness_json(const ValueWitness& v) {
  return json{{"value", v.value}, {"witness", v.witness}};
}

json chars_json(const CharacteristicReport& r) {
  json j;
  j["a2_offset"] = witness_json(r.a2_offset);
  j["a2_hole"] = witness_json(r.a2_hole);
  j["a2_twotailed"] = witness_json(r.a2_twotailed);
  j["testing_fwd"] = witness_json(r.testing_fwd);
  j["testing_bwd"] = witness_json(r.testing_bwd);
  j["testing_local"] = witness_json(r.testing_local);
  j["weak_bdd"] = witness_json(r.weak_bdd);
  j["energy_fwd"] = witness_json(r.energy_fwd);
  j["energy_bwd"] = witness_json(r.energy_bwd);
  j["pe"] = witness_json(r.pe);
  j["func_energy"] = {{"direct", r.func_energy.direct},
                      {"khat_fwd", r.func_energy.khat_fwd},
                      {"khat_bwd", r.func_energy.khat_bwd},
                      {"value", r.func_energy.value}};
  return j;
}

json ledger_json(const FormLedger& l) {
  json j;
  j["total"] = l.total;
  j["below"] = l.below;
  j["above"] = l.above;
  j["disjoint"] = l.disjoint;
  j["comparable"] = l.comparable;
  j["comparable_star"] = l.comparable_star;
  j["home"] = l.home;
  j["neigh"] = l.neigh;
  j["diag"] = l.diag;
  j["far"] = l.far;
  j["para"] = l.para;
  j["stop"] = l.stop;
  j["diagstop"] = l.diagstop;
  j["farstop"] = l.farstop;
  j["inter"] = l.inter;
  j["difference_direct"] = l.difference_direct;
  j["counts"] = {{"below", l.n_below},
                 {"above", l.n_above},
                 {"disjoint", l.n_disjoint},
                 {"comparable", l.n_comparable},
                 {"comparable_star", l.n_comparable_star},
                 {"diag", l.n_diag},
                 {"far", l.n_far}};
  j["residuals"] = {{"grand", l.residual_grand},
                    {"below_split", l.residual_below_split},
                    {"home_split", l.residual_home_split},
                    {"reach_split", l.residual_reach_split},
                    {"stop_split", l.residual_stop_split},
                    {"intertwining", l.residual_intertwining}};
  j["max_ff_deviation"] = l.max_ff_deviation;
  j["minimal_U_contribution"] = l.minimal_U_contribution;
  if (!l.ratios.empty()) j["ratios"] = l.ratios;
  return j;
}

}  // namespace

json RunReport::to_json() const {
  json j;
  j["characteristics"] = chars_json(chars);
  j["forms"] = ledger_json(ledger);
  j["corona"] = {{"carleson", corona.carleson},
                 {"decay", corona.decay},
                 {"qorth", corona.qorth},
                 {"gamma", corona.gamma},
                 {"members", corona.members}};
  j["operator_norm"] = op_norm;
  j["theorem_lower"] = theorem_lower;
  j["theorem_upper"] = theorem_upper;
  return j;
}

RunReport run_instance(const Instance& inst,
                       std::optional<double> gamma_override,
                       bool local_tails) {
  RunReport rep;
  const Grid grid = inst.grid();
  const double e2 = energy_char(inst.sigma, inst.omega, grid).value;
  const double gamma = gamma_override.value_or(4.0 * e2 + 1.0);
  const StoppingForest forest = cz_pe_stopping(
      inst.f, inst.sigma, inst.omega, grid, gamma, inst.cfg);
  rep.chars = characteristic_report(inst.sigma, inst.omega, grid, inst.cfg,
                                    inst.trunc, forest, local_tails);
  rep.ledger = compute_ledger(inst.f, inst.g, inst.lambda_f, inst.lambda_g,
                              inst.sigma, inst.omega, forest, grid, inst.cfg,
                              inst.trunc);
  rep.corona.carleson = carleson_norm(forest, inst.sigma);
  rep.corona.decay = decay_report(forest, inst.sigma).rho;
  rep.corona.qorth = quasi_orthogonality(forest, inst.f, inst.sigma);
  rep.corona.gamma = gamma;
  rep.corona.members = forest.size();

  for (const Truncation& t : truncation_ladder(inst.sigma, inst.omega))
    rep.op_norm = std::max(rep.op_norm,
                           operator_norm(inst.sigma, inst.omega, t).value);
  const double num = std::sqrt(rep.chars.a2_hole.value) +
                     rep.chars.testing_fwd.value +
                     rep.chars.testing_bwd.value;
  if (rep.op_norm > 0.0) {
    rep.theorem_lower = num / rep.op_norm;
    rep.theorem_upper = rep.op_norm / num;
  }

  const double nf = std::sqrt(l2_norm_sq(inst.f, inst.sigma));
  const double ng = std::sqrt(l2_norm_sq(inst.g, inst.omega));
  auto& ratios = rep.ledger.ratios;
  const double fg = nf * ng;
  if (fg > 0.0) {
    if (rep.chars.a2_offset.value > 0.0)
      ratios["neighbour_over_sqrt_a2offset"] =
          std::abs(rep.ledger.neigh) /
          (std::sqrt(rep.chars.a2_offset.value) * fg);
    if (rep.chars.testing_fwd.value > 0.0)
      ratios["para_over_testing"] =
          std::abs(rep.ledger.para) / (rep.chars.testing_fwd.value * fg);
    if (rep.chars.pe.value > 0.0) {
      double worst = 0.0;
      for (const auto& sd : rep.ledger.per_corona_stop)
        worst = std::max(worst, std::abs(sd.diagstop + sd.farstop));
      ratios["stop_over_pe"] = worst / (rep.chars.pe.value * fg);
    }
    const double fe_t =
        rep.chars.func_energy.value + rep.chars.testing_fwd.value;
    if (fe_t > 0.0)
      ratios["inter_over_fe_plus_testing"] =
          std::abs(rep.ledger.inter) / (fe_t * fg);
  }
  const double et = rep.chars.testing_fwd.value + rep.chars.a2_offset.value;
  if (et > 0.0) ratios["energy_control_c"] = rep.chars.energy_fwd.value / et;
  if (rep.chars.a2_offset.value > 0.0)
    ratios["weak_over_a2offset"] =
        rep.chars.weak_bdd.value / rep.chars.a2_offset.value;
  return rep;
}

// ---------------------------------------------------------------------------
// suites

namespace {

struct Baselines {
  std::map<std::string, double> values;
  bool loaded = false;
};

Baselines load_baselines(const std::string& dir, const std::string& suite) {
  Baselines b;
  std::ifstream in(dir + "/" + suite + ".json");
  if (!in) return b;
  json j;
  in >> j;
  for (auto it = j.begin(); it != j.end(); ++it)
    b.values[it.key()] = it.value().get<double>();
  b.loaded = true;
  return b;
}

void save_baselines(const std::string& dir, const std::string& suite,
                    const std::map<std::string, double>& values) {
  std::ofstream out(dir + "/" + suite + ".json");
  json j;
  for (const auto& [k, v] : values) j[k] = v;
  out << j.dump(2) << "\n";
}

// regression rule: measured > 1.05 x baseline (all metrics are stored so
// that larger means worse)
void check_baselines(SuiteResult& result, const std::string& dir,
                     const std::string& suite,
                     const std::map<std::string, double>& measured,
                     bool update) {
  if (dir.empty()) return;
  Baselines base = load_baselines(dir, suite);
  if (!base.loaded || update) {
    save_baselines(dir, suite, measured);
    result.warnings.push_back("baseline file for suite '" + suite +
                              "' was " +
                              (base.loaded ? "updated" : "missing; generated"));
    return;
  }
  json cmp;
  for (const auto& [k, v] : measured) {
    auto it = base.values.find(k);
    if (it == base.values.end()) {
      result.warnings.push_back("baseline missing key " + k);
      continue;
    }
    cmp[k] = {{"measured", v}, {"baseline", it->second}};
    // 5% headroom on the magnitude so the rule also works for metrics
    // stored negated (lower envelopes, slopes)
    if (v > it->second + 0.05 * std::abs(it->second) + 1e-12) {
      result.pass = false;
      result.failures.push_back("regression: " + k + " measured " +
                                std::to_string(v) + " > 1.05 x baseline " +
                                std::to_string(it->second));
    }
  }
  result.report["baseline_comparison"] = cmp;
}

std::string profile_for(std::uint64_t seed) {
  static const char* kProfiles[] = {"uniform", "clustered", "common-atoms",
                                    "adversarial-spike"};
  return kProfiles[seed % 4];
}

GenOptions suite_gen_options(const std::string& suite, std::uint64_t seed) {
  GenOptions opt;
  opt.max_depth = 8;
  if (suite == "identities") {
    opt.atoms = 14 + static_cast<int>(seed % 11);  // 14..24, cap 32 with anchors
  } else if (suite == "coronas") {
    opt.atoms = 24;
  } else {
    opt.atoms = 20;
  }
  return opt;
}

// rotate the corona parameter so the suites exercise trivial, shallow and
// deep stopping structure alike; decorrelated from the profile cycle so all
// sixteen profile/gamma combinations appear over sixteen seeds
double suite_gamma(std::uint64_t seed, double e2) {
  switch ((seed >> 2) % 4) {
    case 0: return 1.5;
    case 1: return 32.0;
    case 2: return 200.0;
    default: return 4.0 * e2 + 1.0;
  }
}

void require(SuiteResult& r, bool ok, const std::string& msg) {
  if (!ok) {
    r.pass = false;
    r.failures.push_back(msg);
  }
}

SuiteResult suite_identities(const std::vector<std::uint64_t>& seeds) {
  SuiteResult r;
  r.report["suite"] = "identities";
  json insts = json::array();
  double worst = 0.0;
  for (std::uint64_t seed : seeds) {
    const Instance inst =
        generate(seed, profile_for(seed), suite_gen_options("identities", seed));
    const Grid grid = inst.grid();
    const double e2 = energy_char(inst.sigma, inst.omega, grid).value;
    const double gamma = suite_gamma(seed, e2);
    const StoppingForest forest = cz_pe_stopping(
        inst.f, inst.sigma, inst.omega, grid, gamma, inst.cfg);
    const FormLedger led =
        compute_ledger(inst.f, inst.g, inst.lambda_f, inst.lambda_g,
                       inst.sigma, inst.omega, forest, grid, inst.cfg,
                       inst.trunc);
    const double res =
        std::max({led.residual_grand, led.residual_below_split,
                  led.residual_home_split, led.residual_reach_split,
                  led.residual_stop_split, led.residual_intertwining});
    worst = std::max(worst, res);
    require(r, res < 1e-10,
            "seed " + std::to_string(seed) + ": residual " +
                std::to_string(res) + " exceeds 1e-10");
    json ji = ledger_json(led);
    ji["seed"] = seed;
    ji["profile"] = inst.profile;
    insts.push_back(ji);
  }
  r.report["instances"] = insts;
  r.report["max_residual"] = worst;
  r.report["pass"] = r.pass;
  return r;
}

SuiteResult suite_coronas(const std::vector<std::uint64_t>& seeds) {
  SuiteResult r;
  r.report["suite"] = "coronas";
  json insts = json::array();
  double qorth_sup = 0.0, carleson_sup = 0.0;
  for (std::uint64_t seed : seeds) {
    const Instance inst =
        generate(seed, profile_for(seed), suite_gen_options("coronas", seed));
    const Grid grid = inst.grid();
    const double e2 = energy_char(inst.sigma, inst.omega, grid).value;
    const double gamma = 4.0 * e2 + 1.0;
    const StoppingForest forest = cz_pe_stopping(inst.f, inst.sigma,
                                                 inst.omega, grid, gamma,
                                                 inst.cfg);
    const std::string tag = "seed " + std::to_string(seed) + ": ";

    // half-mass and generation decay
    for (std::size_t fi = 0; fi < forest.size(); ++fi) {
      const double mF = mass(inst.sigma, grid.interval(forest.node(fi).iv));
      if (!(mF > 0.0)) continue;
      double kids = 0.0;
      for (int c : forest.children_of(static_cast<int>(fi)))
        kids += mass(inst.sigma, grid.interval(forest.node(c).iv));
      require(r, kids <= 0.5 * mF * (1.0 + 1e-12),
              tag + "children mass exceeds half the parent at " +
                  grid.label(forest.node(fi).iv));
    }
    const auto decay = decay_report(forest, inst.sigma);
    for (std::size_t m = 0; m < decay.rho.size(); ++m)
      require(r, decay.rho[m] <= std::ldexp(1.0, -static_cast<int>(m) - 1) +
                                     1e-12,
              tag + "generation decay fails at m=" + std::to_string(m + 1));

    // corona guarantees: averages and the Poisson-Energy bound
    for (std::size_t fi = 0; fi < forest.size(); ++fi) {
      const Dyad F = forest.node(fi).iv;
      const Interval Fiv = grid.interval(F);
      auto proj = project_subtree(inst.f, inst.sigma, grid, F);
      for (double& v : proj) v = std::abs(v);
      const double avgF = expectation(proj, inst.sigma, Fiv).value;
      for (const Dyad& I : forest.corona_members(static_cast<int>(fi))) {
        if (!grid.is_good(I, inst.cfg) || I == F) continue;
        const Interval iv = grid.interval(I);
        const double mI = mass(inst.sigma, iv);
        if (!(mI > 0.0)) continue;
        require(r, expectation(proj, inst.sigma, iv).value <= 4.0 * avgF,
                tag + "corona average bound fails at " + grid.label(I));
        const double pt = poisson_annulus(iv, inst.sigma, Fiv, iv);
        const double pe2 =
            pt * pt * energy(iv, inst.omega) * mass(inst.omega, iv) / mI;
        require(r, pe2 <= gamma,
                tag + "Poisson-Energy bound fails at " + grid.label(I));
      }
    }

    // coronas partition the grid; pi composition law
    {
      std::size_t count = 0;
      std::vector<std::size_t> bucket(forest.size(), 0);
      for (const Dyad& d : grid.descendants(grid.root())) {
        const int p = forest.pi0(d);
        require(r, p >= 0, tag + "interval outside all coronas");
        if (p >= 0) ++bucket[p];
        ++count;
      }
      std::size_t total = 0;
      for (std::size_t b : bucket) total += b;
      require(r, total == count, tag + "coronas fail to partition the grid");
      Rng rng(seed ^ 0xABCDEF);
      for (int t = 0; t < 10; ++t) {
        Dyad J{inst.cfg.max_depth,
               rng.below(std::int64_t{1} << inst.cfg.max_depth)};
        const int s = static_cast<int>(rng.below(3));
        const int u = static_cast<int>(rng.below(3));
        int a = forest.pi0(J);
        for (int q = 0; q < u; ++q) a = forest.pi(a);
        for (int q = 0; q < s; ++q) a = forest.pi(a);
        require(r, a == forest.pi_s(J, s + u), tag + "pi composition fails");
      }
    }

    // U[F] guarantees: (tight) and (geo dec)
    for (std::size_t fi = 0; fi < forest.size(); ++fi) {
      std::vector<Dyad> lg_F;
      for (const Dyad& J : inst.lambda_g)
        if (forest.pi0(J) == static_cast<int>(fi)) lg_F.push_back(J);
      const UBuild u = build_U(forest.node(fi).iv, lg_F, inst.omega,
                               inst.cfg.theta, grid, inst.cfg);
      const auto chk = verify_U_guarantees(u, lg_F, inst.omega,
                                           inst.cfg.theta, grid, inst.cfg);
      for (const auto& v : chk.violations) require(r, false, tag + v);
    }

    carleson_sup = std::max(carleson_sup, carleson_norm(forest, inst.sigma));
    require(r, carleson_norm(forest, inst.sigma) <= 2.0 + 1e-9,
            tag + "Carleson norm exceeds 2");
    qorth_sup =
        std::max(qorth_sup, quasi_orthogonality(forest, inst.f, inst.sigma));
    json ji;
    ji["seed"] = seed;
    ji["gamma"] = gamma;
    ji["members"] = forest.size();
    ji["carleson"] = carleson_norm(forest, inst.sigma);
    ji["decay"] = decay.rho;
    ji["qorth"] = quasi_orthogonality(forest, inst.f, inst.sigma);
    insts.push_back(ji);
  }
  r.report["instances"] = insts;
  r.report["carleson_sup"] = carleson_sup;
  r.report["qorth_sup"] = qorth_sup;
  r.report["pass"] = r.pass;
  r.report["measured"] = {{"qorth_ratio", qorth_sup}};
  return r;
}

SuiteResult suite_theorem(const std::vector<std::uint64_t>& seeds) {
  SuiteResult r;
  r.report["suite"] = "theorem";
  json insts = json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::uint64_t seed : seeds) {
    const Instance inst =
        generate(seed, profile_for(seed), suite_gen_options("theorem", seed));
    const Grid grid = inst.grid();
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    double op = 0.0;
    for (const Truncation& t : truncation_ladder(inst.sigma, inst.omega))
      op = std::max(op, operator_norm(inst.sigma, inst.omega, t).value);
    ValueWitness tf, tb, tl;
    for (const Truncation& t : truncation_ladder(inst.sigma, inst.omega)) {
      const auto a = testing(inst.sigma, inst.omega, grid, inst.cfg, t, false);
      const auto b = testing(inst.omega, inst.sigma, grid, inst.cfg, t, false);
      const auto c = testing(inst.sigma, inst.omega, grid, inst.cfg, t, true);
      if (a.value > tf.value) tf = a;
      if (b.value > tb.value) tb = b;
      if (c.value > tl.value) tl = c;
    }
    require(r, tf.value <= op + 1e-8,
            tag + "testing(sigma,omega) exceeds the operator norm");
    require(r, tb.value <= op + 1e-8,
            tag + "testing(omega,sigma) exceeds the operator norm");
    require(r, tl.value <= tf.value + 1e-12,
            tag + "local testing exceeds global testing");
    const double hole = a2_hole(inst.sigma, inst.omega, grid, inst.cfg).value;
    json ji;
    ji["seed"] = seed;
    ji["profile"] = inst.profile;
    ji["norm"] = op;
    ji["testing_fwd"] = tf.value;
    ji["testing_bwd"] = tb.value;
    ji["a2_hole"] = hole;
    if (op > 0.0) {
      const double ratio = (std::sqrt(hole) + tf.value + tb.value) / op;
      ji["theorem_ratio"] = ratio;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    insts.push_back(ji);
  }
  r.report["instances"] = insts;
  r.report["theorem_ratio_min"] = std::isfinite(lo) ? lo : 0.0;
  r.report["theorem_ratio_max"] = hi;
  r.report["pass"] = r.pass;
  r.report["measured"] = {
      {"theorem_ratio_max", hi},
      {"theorem_ratio_min_neg", std::isfinite(lo) ? -lo : 0.0}};
  return r;
}

}  // namespace

// tree enumeration and the brute-force oracle live in their own block below
namespace {

// All canonical rooted trees with <= max_nodes nodes, as parent vectors.
std::string canonical_code(const RootedTree& t, int v) {
  std::vector<std::string> subs;
  for (int c : t.children[v]) subs.push_back(canonical_code(t, c));
  std::sort(subs.begin(), subs.end());
  std::string out = "(";
  for (const auto& s : subs) out += s;
  out += ")";
  return out;
}

void enumerate_parent_vectors(int n, std::vector<int>& cur,
                              std::map<std::string, std::vector<int>>& out) {
  const int i = static_cast<int>(cur.size());
  if (i == n) {
    const RootedTree t = RootedTree::from_parents(cur);
    out.emplace(canonical_code(t, 0), cur);
    return;
  }
  for (int p = 0; p < i; ++p) {
    cur.push_back(p);
    enumerate_parent_vectors(n, cur, out);
    cur.pop_back();
  }
}

std::vector<RootedTree> all_rooted_trees(int max_nodes) {
  std::vector<RootedTree> out;
  for (int n = 1; n <= max_nodes; ++n) {
    std::map<std::string, std::vector<int>> canon;
    std::vector<int> cur{-1};
    enumerate_parent_vectors(n, cur, canon);
    for (auto& [code, parents] : canon)
      out.push_back(RootedTree::from_parents(parents));
  }
  return out;
}

// Brute-force mirror of the decomposition: istar by explicit subtree walks,
// candidate scans by pairwise ancestor checks.
struct BruteDecomposition {
  bool irreducible = false;
  bool top_organic = false;
  std::vector<std::vector<int>> levels;
  std::vector<std::vector<int>> fresh;
};

bool brute_is_strict_ancestor(const RootedTree& t, int anc, int node) {
  for (int v = t.parent[node]; v >= 0; v = t.parent[v])
    if (v == anc) return true;
  return false;
}

double brute_istar(const RootedTree& t, std::span<const double> mu, int a) {
  double s = mu[a];
  for (std::size_t v = 0; v < t.size(); ++v)
    if (brute_is_strict_ancestor(t, a, static_cast<int>(v)))
      s += mu[v];
  return s;
}

BruteDecomposition brute_decompose(const RootedTree& t,
                                   std::span<const double> mu, double gamma) {
  BruteDecomposition out;
  const int n = static_cast<int>(t.size());
  std::vector<int> t0;
  for (int v = 0; v < n; ++v) {
    if (!(mu[v] > 0.0)) continue;
    bool minimal = true;
    for (int w = 0; w < n; ++w)
      if (mu[w] > 0.0 && brute_is_strict_ancestor(t, v, w)) minimal = false;
    if (minimal) t0.push_back(v);
  }
  out.levels.push_back(t0);
  out.fresh.push_back({});
  bool first = true;
  while (true) {
    const auto& prev = out.levels.back();
    std::vector<int> fresh;
    for (int a = 0; a < n; ++a) {
      double below = 0.0;
      bool has = false;
      for (int b : prev)
        if (brute_is_strict_ancestor(t, a, b)) {
          below += brute_istar(t, mu, b);
          has = true;
        }
      if (!has || !(brute_istar(t, mu, a) > gamma * below)) continue;
      bool minimal = true;
      for (int c = 0; c < n && minimal; ++c) {
        if (!brute_is_strict_ancestor(t, a, c)) continue;
        double below_c = 0.0;
        bool has_c = false;
        for (int b : prev)
          if (brute_is_strict_ancestor(t, c, b)) {
            below_c += brute_istar(t, mu, b);
            has_c = true;
          }
        if (has_c && brute_istar(t, mu, c) > gamma * below_c) minimal = false;
      }
      if (minimal) fresh.push_back(a);
    }
    if (fresh.empty()) {
      if (first) out.irreducible = true;
      if (!(prev.size() == 1 && prev[0] == 0)) {
        out.levels.push_back({0});
        out.fresh.push_back({});
      }
      return out;
    }
    first = false;
    std::vector<int> next = fresh;
    for (int b : prev) {
      bool dominated = false;
      for (int a : fresh)
        if (a == b || brute_is_strict_ancestor(t, a, b)) dominated = true;
      if (!dominated) next.push_back(b);
    }
    std::sort(next.begin(), next.end());
    const bool at_root = next.size() == 1 && next[0] == 0;
    out.levels.push_back(next);
    out.fresh.push_back(fresh);
    if (at_root) {
      out.top_organic = true;
      return out;
    }
  }
}

SuiteResult suite_tree_oracle() {
  SuiteResult r;
  r.report["suite"] = "tree-oracle";
  const auto trees = all_rooted_trees(9);
  Rng rng(0xBADDECAF);
  std::size_t cases = 0, irreducible_cases = 0;
  for (std::size_t ti = 0; ti < trees.size(); ++ti) {
    const RootedTree& t = trees[ti];
    const int n = static_cast<int>(t.size());
    const int samples = n <= 3 ? 30 : 24;
    for (int s = 0; s < samples; ++s) {
      std::vector<double> mu(n, 0.0);
      bool any = false;
      for (int v = 0; v < n; ++v) {
        mu[v] = static_cast<double>(rng.below(3));
        if (mu[v] > 0.0) any = true;
      }
      const double gamma = (s % 3 == 0) ? 1.5 : (s % 3 == 1 ? 2.0 : 3.0);
      if (!any) {
        bool threw = false;
        try {
          dual_tree_decompose(t, mu, gamma);
        } catch (const std::invalid_argument&) {
          threw = true;
        }
        require(r, threw, "trivial mu must be rejected");
        continue;
      }
      ++cases;
      const auto lib = dual_tree_decompose(t, mu, gamma);
      const auto brute = brute_decompose(t, mu, gamma);
      const std::string tag =
          "tree " + std::to_string(ti) + " sample " + std::to_string(s) + ": ";
      require(r, lib.irreducible == brute.irreducible,
              tag + "irreducibility mismatch");
      if (lib.irreducible) {
        ++irreducible_cases;
        continue;
      }
      require(r, lib.levels == brute.levels, tag + "level mismatch");
      require(r, lib.fresh == brute.fresh, tag + "fresh-set mismatch");
      require(r, lib.top_organic == brute.top_organic,
              tag + "top flag mismatch");

      // istar against an independent walk
      for (int v = 0; v < n; ++v)
        require(r, std::abs(istar(t, mu, v) - brute_istar(t, mu, v)) < 1e-12,
                tag + "istar mismatch");

      const auto chk = verify_tree_decomposition(t, mu, gamma, lib);
      for (const auto& v : chk.violations) require(r, false, tag + v);

      // uniqueness: single-element perturbations break the inequalities or the
      // reconstruction rule
      for (std::size_t lev = 1; lev + 1 < lib.levels.size(); ++lev) {
        if (lib.fresh[lev].empty()) continue;
        auto perturbed = lib;
        perturbed.levels[lev].erase(
            std::find(perturbed.levels[lev].begin(),
                      perturbed.levels[lev].end(), perturbed.fresh[lev][0]));
        perturbed.fresh[lev].erase(perturbed.fresh[lev].begin());
        const bool checks_fail =
            !verify_tree_decomposition(t, mu, gamma, perturbed).ok;
        // reconstruction: rebuilding from the perturbed level must disagree
        bool rule_breaks = checks_fail;
        if (!rule_breaks) {
          const auto rebuilt = brute_decompose(t, mu, gamma);
          rule_breaks = rebuilt.levels != perturbed.levels;
        }
        require(r, rule_breaks, tag + "perturbed sequence not rejected");
        break;  // one perturbation per case keeps the suite fast
      }
    }
  }
  r.report["cases"] = cases;
  r.report["irreducible_cases"] = irreducible_cases;
  r.report["trees"] = trees.size();
  require(r, cases >= 10000, "tree-oracle must cover at least 10^4 cases");
  r.report["pass"] = r.pass;
  return r;
}

}  // namespace

// lemmas suite (measured constants)
namespace {

struct LemmaMeasurements {
  std::map<std::string, double> sup;  // larger = worse, baseline-tracked
};

void energy_lemma_samples(const Instance& inst, const Grid& grid,
                          LemmaMeasurements& m) {
  double worst = 0.0;
  const DiffCache dg(inst.g, inst.omega, grid, inst.lambda_g);
  for (const Dyad& J : inst.lambda_g) {
    const auto& dJ = dg.at(J).values;
    const double ndj2 = l2_norm_sq(dJ, inst.omega);
    const double ndx2 = coordinate_energy(grid, J, inst.omega);
    if (!(ndj2 > 0.0) || !(ndx2 > 0.0)) continue;
    for (int gap1 = 1; gap1 <= J.n; ++gap1) {
      const Dyad Ip = grid.ancestor(J, J.n - gap1);
      for (int up = 1; up <= Ip.n; ++up) {
        const Dyad F = grid.ancestor(Ip, Ip.n - up);
        // 2I' inside F: cell offset within [1, 2^g - 2]
        const int g2 = Ip.n - F.n;
        const std::int64_t cells = std::int64_t{1} << g2;
        const std::int64_t off = Ip.k - (F.k << g2);
        if (!(off >= 1 && off <= cells - 2)) continue;
        const Interval Jiv = grid.interval(J);
        const Interval Fiv = grid.interval(F);
        const Interval Piv = grid.interval(Ip);
        const double pj = poisson_annulus(Jiv, inst.sigma, Fiv, Piv);
        const double denom = (pj / Jiv.length) * (pj / Jiv.length) *
                             ndx2 * ndj2;
        if (!(denom > 0.0)) continue;
        std::vector<double> ind(inst.sigma.size(), 0.0);
        auto [a, b] = inst.sigma.range(Fiv.left, Fiv.right());
        for (std::size_t i = a; i < b; ++i)
          if (!Piv.contains(inst.sigma.position(i))) ind[i] = 1.0;
        const double lhs =
            hilbert_pairing(ind, dJ, inst.sigma, inst.omega, inst.trunc);
        worst = std::max(worst, lhs * lhs / denom);
      }
    }
  }
  m.sup["energy_lemma_ratio"] =
      std::max(m.sup["energy_lemma_ratio"], worst);
}

void poisson_decay_samples(LemmaMeasurements& m, SuiteResult& r) {
  // Deep grid so that the strong ( eps = 0.1 ) distance gate is satisfiable.
  const double eps = 0.1;
  const Grid grid({0.0, 1.0}, 30);
  Rng rng(0x5EEDDECA1ULL);
  std::vector<double> pos, ms;
  std::set<std::int64_t> used;
  while (used.size() < 32) used.insert(rng.below(256));
  for (std::int64_t k : used) {
    pos.push_back(static_cast<double>(k) / 256.0);
    ms.push_back(std::exp(rng.uniform(-1.0, 1.0)));
  }
  const DiscreteMeasure sigma(std::move(pos), std::move(ms));

  std::map<int, double> envelope;
  double worst_const = 0.0;
  int triples = 0;
  for (int trial = 0; trial < 4000 && triples < 320; ++trial) {
    const int kn = static_cast<int>(rng.below(3));
    const Dyad K{kn, rng.below(std::int64_t{1} << kn)};
    const int an = kn + 1 + static_cast<int>(rng.below(3));
    const int gk = an - kn;
    const Dyad I{an, (K.k << gk) + rng.below(std::int64_t{1} << gk)};
    const int s = 21 + static_cast<int>(rng.below(7));
    const int bn = an + s;
    if (bn > grid.max_depth()) continue;
    // J adjacent to the center of I (left or right)
    const std::int64_t base = I.k << s;
    const std::int64_t half = std::int64_t{1} << (s - 1);
    const Dyad J{bn, base + half - (rng.below(2) == 0 ? 1 : 0)};
    const Interval Jiv = grid.interval(J), Iiv = grid.interval(I),
                   Kiv = grid.interval(K);
    const double gate = 2.0 * std::pow(Jiv.length, eps) *
                        std::pow(Iiv.length, 1.0 - eps);
    if (!(grid.boundary_distance(J, I) > gate)) continue;
    const double pI = poisson_annulus(Iiv, sigma, Kiv, Iiv);
    if (!(pI > 0.0)) continue;
    const double pJ = poisson_annulus(Jiv, sigma, Kiv, Iiv);
    const double ratio = pJ / pI;
    ++triples;
    auto it = envelope.find(s);
    if (it == envelope.end() || ratio > it->second) envelope[s] = ratio;
    worst_const =
        std::max(worst_const, ratio / std::pow(Jiv.length / Iiv.length, 0.7));
  }
  require(r, triples >= 200, "poisson decay: not enough admissible triples");
  // least-squares slope of -log2(envelope) against the depth gap
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int np = 0;
  for (const auto& [s, v] : envelope) {
    const double y = -std::log2(v);
    sx += s;
    sy += y;
    sxx += static_cast<double>(s) * s;
    sxy += s * y;
    ++np;
  }
  double slope = 0.0;
  if (np >= 2) slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
  require(r, slope >= 0.7, "poisson decay: envelope slope below 0.7");
  m.sup["poisson_decay_const"] =
      std::max(m.sup["poisson_decay_const"], worst_const);
  m.sup["poisson_decay_neg_slope"] = -slope;  // single run per suite
  r.report["poisson_decay"] = {{"triples", triples},
                               {"slope", slope},
                               {"const", worst_const}};
}

void khat_properties(const Instance& inst, const Grid& grid,
                     const StoppingForest& forest, LemmaMeasurements& m) {
  const auto fe =
      functional_energy(forest, inst.sigma, inst.omega, grid, inst.cfg);
  if (fe.rows == 0) return;
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < fe.rows; ++i) {
    const double x = inst.omega.position(i);
    for (std::size_t j1 = 0; j1 < fe.cols; ++j1)
      for (std::size_t j2 = 0; j2 < fe.cols; ++j2) {
        const double k1 = fe.khat[i * fe.cols + j1];
        const double k2 = fe.khat[i * fe.cols + j2];
        if (!(k2 > 0.0)) continue;
        if (std::abs(inst.sigma.position(j1) - x) >=
            std::abs(inst.sigma.position(j2) - x))
          c1 = std::max(c1, k1 / k2);
      }
  }
  for (const Dyad& d : grid.all(4)) {
    const Interval I = grid.interval(d);
    const Interval twoI{I.left - 0.5 * I.length, 2.0 * I.length};
    for (std::size_t i = 0; i < fe.rows; ++i) {
      if (twoI.contains(inst.omega.position(i))) continue;
      for (std::size_t j1 = 0; j1 < fe.cols; ++j1) {
        if (!I.contains(inst.sigma.position(j1))) continue;
        for (std::size_t j2 = 0; j2 < fe.cols; ++j2) {
          if (!I.contains(inst.sigma.position(j2))) continue;
          const double k1 = fe.khat[i * fe.cols + j1];
          const double k2 = fe.khat[i * fe.cols + j2];
          if (k1 > 0.0 && k2 > 0.0) c2 = std::max(c2, k1 / k2);
        }
      }
    }
  }
  m.sup["khat_decreasing_const"] = std::max(m.sup["khat_decreasing_const"], c1);
  m.sup["khat_constant_const"] = std::max(m.sup["khat_constant_const"], c2);
}

// Deterministic deep configurations that actually produce a nonzero
// stopping-child form: one Haar-support interval P two levels above a
// stopping child S and one deep J inside S, with background mass outside.
// Random desk instances almost never reach this regime, so the measured
// constants would otherwise sit at zero.
void structured_stopping_child(LemmaMeasurements& m, SuiteResult& r) {
  const Grid grid({0.0, 1.0}, 10);
  GridConfig cfg;
  cfg.max_depth = 10;
  cfg.validate();
  std::vector<Dyad> pool;
  for (std::int64_t k = 0; k < (std::int64_t{1} << 8); ++k) {
    const Dyad cand{8, k};
    auto [lo, hi] = grid.children(cand);
    if (grid.is_good(cand, cfg) && grid.is_good(lo, cfg) &&
        grid.is_good(hi, cfg))
      pool.push_back(cand);
  }
  require(r, !pool.empty(), "structured stopping child: empty good pool");
  Rng rng(0x57A661E);
  const Truncation trunc{1e-9,
                         std::numeric_limits<double>::infinity()};
  int produced = 0;
  for (std::size_t v = 0; v < pool.size() && produced < 4; ++v) {
    const Dyad J = pool[v];
    const Dyad S = grid.ancestor(J, J.n - 5);
    const Dyad P = grid.ancestor(J, J.n - 6);
    const Interval sv = grid.interval(grid.child_containing(P, J));
    if (!(grid.child_containing(P, J) == S)) continue;
    const Interval other = grid.interval(grid.sibling(S));
    const double out_pos = grid.interval(P).left > 0.25 ? 0.125 : 0.875;
    std::vector<std::pair<double, double>> atoms{
        {sv.left, 1.0 + rng.uniform()},
        {other.left, 1.0 + rng.uniform()},
        {out_pos, 2.0 + rng.uniform()}};
    std::sort(atoms.begin(), atoms.end());
    std::vector<double> sp, sm;
    for (auto& [p, q] : atoms) {
      sp.push_back(p);
      sm.push_back(q);
    }
    const DiscreteMeasure sigma(sp, sm);
    std::vector<double> f(3, 0.0);
    for (std::size_t i = 0; i < 3; ++i)
      f[i] = sigma.position(i) == sv.left      ? 1.0
             : sigma.position(i) == other.left ? -1.0
                                               : 0.0;
    auto [jlo, jhi] = grid.children(J);
    const DiscreteMeasure omega(
        {grid.interval(jlo).left, grid.interval(jhi).left},
        {1.0 + rng.uniform(), 1.0 + rng.uniform()});
    std::vector<double> g{1.0, -1.0};
    const auto lambda_f = haar_support(f, sigma, grid, cfg, true);
    const auto lambda_g = haar_support(g, omega, grid, cfg, true);
    if (lambda_f.empty() || lambda_g.empty()) continue;
    StoppingForest main_forest(&grid, grid.root());
    StoppingForest a_forest(&grid, grid.root());
    a_forest.add(S);
    const DiffCache df(f, sigma, grid, lambda_f);
    const DiffCache dg(g, omega, grid, lambda_g);
    const auto sc =
        stopping_child_form(main_forest, 0, a_forest, 0, f, df, dg, lambda_f,
                            lambda_g, sigma, omega, grid, cfg, trunc);
    const double scale =
        std::max({std::abs(sc.value), std::abs(sc.value_pair_sum), 1e-300});
    require(r, std::abs(sc.value - sc.value_pair_sum) / scale < 1e-10,
            "structured stopping child: assembly mismatch");
    require(r, sc.max_phi_on_S == 0.0,
            "structured stopping child: phi does not vanish on S");
    if (sc.value != 0.0) ++produced;
    m.sup["bfi3_const"] = std::max(m.sup["bfi3_const"], sc.phi_bound_const);
    m.sup["straddle_const"] =
        std::max(m.sup["straddle_const"], sc.straddle_const);
  }
  require(r, produced > 0,
          "structured stopping child: no nonzero configuration produced");
}

SuiteResult suite_lemmas(const std::vector<std::uint64_t>& seeds) {
  SuiteResult r;
  r.report["suite"] = "lemmas";
  LemmaMeasurements m;
  json insts = json::array();
  poisson_decay_samples(m, r);
  structured_stopping_child(m, r);
  for (std::uint64_t seed : seeds) {
    const Instance inst =
        generate(seed, profile_for(seed), suite_gen_options("lemmas", seed));
    const Grid grid = inst.grid();
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    const double e2 = energy_char(inst.sigma, inst.omega, grid).value;
    const double gamma = suite_gamma(seed, e2);
    const StoppingForest forest = cz_pe_stopping(
        inst.f, inst.sigma, inst.omega, grid, gamma, inst.cfg);
    const RunReport rep = run_instance(inst, gamma);
    for (const auto& [k, v] : rep.ledger.ratios)
      m.sup[k] = std::max(m.sup[k], v);

    energy_lemma_samples(inst, grid, m);
    khat_properties(inst, grid, forest, m);

    // functional energy: enlarged-kernel testing dominates the direct map
    require(r, std::max(rep.chars.func_energy.khat_fwd,
                        rep.chars.func_energy.khat_bwd) >=
                   rep.chars.func_energy.direct * (1.0 - 1e-9),
            tag + "enlarged-kernel testing below the direct estimate");

    // maximal function bound
    {
      const auto mf = maximal_fn(inst.f, inst.sigma, grid);
      const double nf2 = l2_norm_sq(inst.f, inst.sigma);
      if (nf2 > 0.0) {
        const double c = std::sqrt(l2_norm_sq(mf, inst.sigma) / nf2);
        require(r, c <= 4.0, tag + "maximal function constant exceeds 4");
        m.sup["maximal_fn_const"] = std::max(m.sup["maximal_fn_const"], c);
      }
    }

    const DiffCache df(inst.f, inst.sigma, grid, inst.lambda_f);
    const DiffCache dg(inst.g, inst.omega, grid, inst.lambda_g);

    // paraproduct telescoping identity + coefficient bound, per corona
    for (std::size_t fi = 0; fi < forest.size(); ++fi) {
      const auto pid = paraproduct_identity(
          forest, static_cast<int>(fi), inst.f, inst.lambda_f, df, dg,
          inst.lambda_g, inst.sigma, inst.omega, inst.trunc, inst.cfg.r);
      const double scale =
          std::max({std::abs(pid.pair_sum), std::abs(pid.coefficient_form),
                    1e-300});
      require(r,
              std::abs(pid.pair_sum - pid.coefficient_form) / scale < 1e-10 ||
                  scale == 1e-300,
              tag + "paraproduct identity fails in corona " +
                  grid.label(forest.node(fi).iv));
      m.sup["lambda_over_alpha"] =
          std::max(m.sup["lambda_over_alpha"], pid.max_lambda_over_alpha);
    }

    // stopping child lemma, with A = members of U[F]
    for (std::size_t fi = 0; fi < forest.size(); ++fi) {
      std::vector<Dyad> lg_F;
      for (const Dyad& J : inst.lambda_g)
        if (forest.pi0(J) == static_cast<int>(fi)) lg_F.push_back(J);
      const UBuild u = build_U(forest.node(fi).iv, lg_F, inst.omega,
                               inst.cfg.theta, grid, inst.cfg);
      if (u.irreducible) continue;
      for (std::size_t ai = 0; ai < u.forest.size(); ++ai) {
        if (u.forest.children_of(static_cast<int>(ai)).empty()) continue;
        const auto sc = stopping_child_form(
            forest, static_cast<int>(fi), u.forest, static_cast<int>(ai),
            inst.f, df, dg, inst.lambda_f, inst.lambda_g, inst.sigma,
            inst.omega, grid, inst.cfg, inst.trunc);
        const double scale =
            std::max({std::abs(sc.value), std::abs(sc.value_pair_sum), 1e-300});
        require(r, std::abs(sc.value - sc.value_pair_sum) / scale < 1e-10 ||
                       scale == 1e-300,
                tag + "stopping child assembly mismatch");
        require(r, sc.max_phi_on_S == 0.0, tag + "phi fails to vanish on S");
        m.sup["bfi3_const"] = std::max(m.sup["bfi3_const"], sc.phi_bound_const);
        m.sup["straddle_const"] =
            std::max(m.sup["straddle_const"], sc.straddle_const);
      }

      // the characteristic chain: refined <= size <= PE^F <= PE
      const double pe_all =
          pe_characteristic(forest, inst.sigma, inst.omega, inst.cfg).value;
      const double size_v =
          size_functional(forest, static_cast<int>(fi), lg_F, inst.sigma,
                          inst.omega, inst.cfg)
              .value;
      double pe_F = 0.0;
      {
        const Interval Fiv = grid.interval(forest.node(fi).iv);
        for (const Dyad& I : forest.corona_members(static_cast<int>(fi))) {
          if (!grid.is_good(I, inst.cfg)) continue;
          const Interval iv = grid.interval(I);
          const double mI = mass(inst.sigma, iv);
          if (!(mI > 0.0)) continue;
          const double p = poisson_annulus(iv, inst.sigma, Fiv, iv);
          pe_F = std::max(
              p * std::sqrt(energy(iv, inst.omega) * mass(inst.omega, iv) / mI),
              pe_F);
        }
      }
      for (std::size_t ai = 0; ai < u.forest.size(); ++ai) {
        const double refined =
            refined_trip_char(forest, static_cast<int>(fi), u.forest,
                              static_cast<int>(ai), lg_F, inst.sigma,
                              inst.omega, inst.cfg)
                .value;
        require(r, refined <= size_v * (1.0 + 1e-12) + 1e-300,
                tag + "chain: refined exceeds the size functional");
      }
      require(r, size_v <= pe_F * (1.0 + 1e-12) + 1e-300,
              tag + "chain: size functional exceeds PE^F");
      require(r, pe_F <= pe_all * (1.0 + 1e-12) + 1e-300,
              tag + "chain: PE^F exceeds PE");
    }

    json ji;
    ji["seed"] = seed;
    ji["ratios"] = rep.ledger.ratios;
    insts.push_back(ji);
  }
  r.report["instances"] = insts;
  json measured;
  for (const auto& [k, v] : m.sup) measured[k] = v;
  r.report["measured"] = measured;
  r.report["pass"] = r.pass;
  return r;
}

}  // namespace

SuiteResult run_suite(const std::string& name,
                      const std::vector<std::uint64_t>& seeds,
                      const std::string& baseline_dir,
                      bool update_baselines) {
  SuiteResult r;
  if (name == "identities") {
    r = suite_identities(seeds);
  } else if (name == "lemmas") {
    r = suite_lemmas(seeds);
  } else if (name == "coronas") {
    r = suite_coronas(seeds);
  } else if (name == "theorem") {
    r = suite_theorem(seeds);
  } else if (name == "tree-oracle") {
    r = suite_tree_oracle();
  } else {
    throw std::invalid_argument("unknown suite: " + name);
  }
  if (r.report.contains("measured")) {
    std::map<std::string, double> measured;
    for (auto it = r.report["measured"].begin();
         it != r.report["measured"].end(); ++it)
      measured[it.key()] = it.value().get<double>();
    check_baselines(r, baseline_dir, name, measured, update_baselines);
  }
  r.report["pass"] = r.pass;
  if (!r.failures.empty()) r.report["failures"] = r.failures;
  return r;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& spec) {
  std::vector<std::uint64_t> out;
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(std::stoull(tok));
    return out;
  }
  const std::uint64_t a = std::stoull(spec.substr(0, dots));
  const std::uint64_t b = std::stoull(spec.substr(dots + 2));
  for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
  return out;
}

}  // namespace twoweight
