#include <doctest.h>

#include <cstdio>

#include "twoweight/harness.hpp"

using namespace twoweight;

TEST_CASE("generation is deterministic and honours profiles") {
  GenOptions opt;
  opt.atoms = 18;
  opt.max_depth = 8;
  const Instance a = generate(7, "uniform", opt);
  const Instance b = generate(7, "uniform", opt);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.sigma.size() >= 18);

  const Instance c = generate(7, "common-atoms", opt);
  std::size_t shared = 0;
  for (std::size_t i = 0; i < c.sigma.size(); ++i)
    for (std::size_t j = 0; j < c.omega.size(); ++j)
      if (c.sigma.position(i) == c.omega.position(j)) ++shared;
  CHECK(shared >= 1);

  const Instance d = generate(7, "adversarial-spike", opt);
  double maxmass = 0.0;
  for (std::size_t i = 0; i < d.sigma.size(); ++i)
    maxmass = std::max(maxmass, d.sigma.mass_at(i));
  CHECK(maxmass > 100.0);
}

TEST_CASE("instance json round trip") {
  GenOptions opt;
  opt.atoms = 14;
  opt.max_depth = 8;
  const Instance a = generate(3, "clustered", opt);
  const Instance b = Instance::from_json(a.to_json());
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.lambda_f == b.lambda_f);
  CHECK(a.lambda_g == b.lambda_g);
}

TEST_CASE("measure file io") {
  const char* path = "tw_test_measure.txt";
  const DiscreteMeasure mu({-1.5, 0.25, 3.0}, {0.5, 2.0, 1.25});
  save_measure(mu, path);
  const DiscreteMeasure back = load_measure(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.position(i) == mu.position(i));
    CHECK(back.mass_at(i) == mu.mass_at(i));
  }
  std::remove(path);

  const Interval root = choose_root(mu, DiscreteMeasure());
  CHECK(root.left <= -1.5);
  CHECK(root.right() > 3.0);
  // power-of-two length
  CHECK(std::ldexp(1.0, static_cast<int>(std::log2(root.length))) ==
        root.length);
}

TEST_CASE("seed range parsing") {
  CHECK(parse_seed_range("1..4") == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(parse_seed_range("9") == std::vector<std::uint64_t>{9});
  CHECK(parse_seed_range("2,5,7") == std::vector<std::uint64_t>{2, 5, 7});
}

TEST_CASE("suites: empty seed list passes; identities run is deterministic") {
  const auto empty = run_suite("identities", {}, "");
  CHECK(empty.pass);

  const auto r1 = run_suite("identities", {1, 2}, "");
  CHECK(r1.pass);
  const auto r2 = run_suite("identities", {1, 2}, "");
  CHECK(r1.report.dump() == r2.report.dump());

  CHECK_THROWS(run_suite("nonsense", {1}, ""));
}

TEST_CASE("run_instance report is self-consistent") {
  GenOptions opt;
  opt.atoms = 16;
  opt.max_depth = 8;
  const Instance inst = generate(11, "common-atoms", opt);
  const RunReport rep = run_instance(inst);
  CHECK(rep.op_norm > 0.0);
  CHECK(rep.theorem_lower > 0.0);
  CHECK(rep.theorem_upper == doctest::Approx(1.0 / rep.theorem_lower));
  CHECK(rep.chars.testing_fwd.value <= rep.op_norm + 1e-8);
  CHECK(rep.corona.carleson >= 1.0);
  const json j = rep.to_json();
  CHECK(j.contains("characteristics"));
  CHECK(j.contains("forms"));
  CHECK(j["forms"]["residuals"]["grand"].get<double>() < 1e-10);
}
