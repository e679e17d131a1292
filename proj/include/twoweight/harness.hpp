#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twoweight/characteristics.hpp"
#include "twoweight/corona.hpp"
#include "twoweight/dyadic.hpp"
#include "twoweight/forms.hpp"
#include "twoweight/hilbert.hpp"
#include "twoweight/measure.hpp"

namespace twoweight {

using json = nlohmann::ordered_json;

// Deterministic splitmix64 stream; no std distributions, so sequences are
// identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  std::int64_t below(std::int64_t n);    // [0, n)

 private:
  std::uint64_t state_;
};

struct GenOptions {
  int atoms = 24;          // per measure (upper bound; profiles may vary it)
  int max_depth = 10;
  int position_depth = -1;  // atom sub-grid depth; -1 means max_depth
  int r = 5;
  double eps = 0.2;
  int tau = 6;
  double theta = 0.25;
  int tail_doublings = 6;
};

struct Instance {
  std::uint64_t seed = 0;
  std::string profile;
  GridConfig cfg;
  Interval root{0.0, 1.0};
  DiscreteMeasure sigma, omega;
  std::vector<double> f, g;  // good-projected; Haar supports below
  std::vector<Dyad> lambda_f, lambda_g;
  Truncation trunc;

  Grid grid() const { return Grid(root, cfg.max_depth); }
  json to_json() const;
  static Instance from_json(const json& j);
};

// profile: uniform | clustered | common-atoms | adversarial-spike
Instance generate(std::uint64_t seed, const std::string& profile,
                  const GenOptions& opt = {});

struct CoronaStats {
  double carleson = 0.0;
  std::vector<double> decay;
  double qorth = 0.0;
  double gamma = 0.0;
  std::size_t members = 0;
};

struct RunReport {
  CharacteristicReport chars;
  FormLedger ledger;
  CoronaStats corona;
  double op_norm = 0.0;
  double theorem_lower = 0.0;  // (sqrt(A2hole)+T+T*)/N
  double theorem_upper = 0.0;  // its reciprocal
  json to_json() const;
};

RunReport run_instance(const Instance& inst,
                       std::optional<double> gamma_override = std::nullopt,
                       bool local_tails = false);

// measure files: `position mass` lines, '#' comments
DiscreteMeasure load_measure(const std::string& path);
void save_measure(const DiscreteMeasure& mu, const std::string& path);
Interval choose_root(const DiscreteMeasure& a, const DiscreteMeasure& b);

struct SuiteResult {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  json report;
};

// suites: identities | lemmas | coronas | theorem | tree-oracle.
// Hard assertions decide the exit status; measured ratios only regress
// against stored baselines (written with a warning when absent).
SuiteResult run_suite(const std::string& name,
                      const std::vector<std::uint64_t>& seeds,
                      const std::string& baseline_dir,
                      bool update_baselines = false);

std::vector<std::uint64_t> parse_seed_range(const std::string& spec);

}  // namespace twoweight
