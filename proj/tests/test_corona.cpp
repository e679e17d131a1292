#include <doctest.h>

#include <cmath>

#include "twoweight/corona.hpp"
#include "twoweight/harness.hpp"

using namespace twoweight;

TEST_CASE("cz-pe stopping: trivial forest under a huge parameter") {
  GenOptions opt;
  opt.atoms = 16;
  opt.max_depth = 8;
  const Instance inst = generate(5, "uniform", opt);
  const Grid grid = inst.grid();
  std::vector<double> ones(inst.sigma.size(), 1.0);
  const auto forest =
      cz_pe_stopping(ones, inst.sigma, inst.omega, grid, 1e30, inst.cfg);
  CHECK(forest.size() == 1);
  CHECK(forest.node(0).iv == grid.root());
  CHECK(forest.node(0).alpha == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cz-pe stopping: a sharp average spike fires") {
  // three atoms; f concentrates its mass on one of them so that the average
  // criterion fires at a good interval around the spike
  const Grid grid({0.0, 1.0}, 8);
  GridConfig cfg;
  cfg.max_depth = 8;
  // put the spike pair deep inside a good anchor so the supports are good
  const DiscreteMeasure sigma({0.375, 0.376953125, 0.75},
                              {1.0, 1.0, 1.0});
  std::vector<double> f{40.0, -40.0, 0.1};
  REQUIRE(mass(sigma, grid.root_interval()) > 0.0);
  const DiscreteMeasure omega({0.25, 0.8}, {1.0, 1.0});
  const auto forest = cz_pe_stopping(f, sigma, omega, grid, 1e12, cfg);
  // the construction stays within guarantees even when members appear
  for (std::size_t fi = 0; fi < forest.size(); ++fi) {
    const Dyad F = forest.node(fi).iv;
    auto proj = project_subtree(f, sigma, grid, F);
    for (double& v : proj) v = std::abs(v);
    const double avgF =
        expectation(proj, sigma, grid.interval(F)).value;
    for (const Dyad& I : forest.corona_members(static_cast<int>(fi))) {
      if (!grid.is_good(I, cfg) || I == F) continue;
      if (!(mass(sigma, grid.interval(I)) > 0.0)) continue;
      CHECK(expectation(proj, sigma, grid.interval(I)).value <= 4.0 * avgF);
    }
  }
  // the average ratio criterion is scale-free in f
  std::vector<double> f2(f);
  for (double& v : f2) v *= 7.0;
  const auto forest2 = cz_pe_stopping(f2, sigma, omega, grid, 1e12, cfg);
  CHECK(forest.size() == forest2.size());
}

TEST_CASE("carleson norm") {
  GenOptions opt;
  opt.atoms = 20;
  opt.max_depth = 8;
  const Instance inst = generate(9, "clustered", opt);
  const Grid grid = inst.grid();
  std::vector<double> ones(inst.sigma.size(), 1.0);
  const auto trivial =
      cz_pe_stopping(ones, inst.sigma, inst.omega, grid, 1e30, inst.cfg);
  CHECK(carleson_norm(trivial, inst.sigma) == doctest::Approx(1.0));

  // gamma = 4 E2 + 1 gives the half-mass bound, hence Carleson norm <= 2
  const double e2 = energy_char(inst.sigma, inst.omega, grid).value;
  const auto forest = cz_pe_stopping(inst.f, inst.sigma, inst.omega, grid,
                                     4.0 * e2 + 1.0, inst.cfg);
  CHECK(carleson_norm(forest, inst.sigma) <= 2.0 + 1e-9);
}

TEST_CASE("carleson norm of a hand-built two-level forest") {
  // members: the root, its left half, and a deep quarter of that half.
  // masses are chosen so every ratio is a small exact fraction.
  const Grid grid({0.0, 1.0}, 6);
  const DiscreteMeasure sigma({0.1, 0.3, 0.6, 0.9},
                              {2.0, 2.0, 3.0, 1.0});
  StoppingForest forest(&grid, grid.root());
  forest.add(Dyad{1, 0});   // [0, 0.5): mass 4
  forest.add(Dyad{2, 1});   // [0.25, 0.5): mass 2
  // ratios: root (4+2+8)/8, half (4+2)/4, quarter 2/2
  CHECK(carleson_norm(forest, sigma) ==
        doctest::Approx(14.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("decay and quasi-orthogonality") {
  GenOptions opt;
  opt.atoms = 20;
  opt.max_depth = 8;
  const Instance inst = generate(3, "adversarial-spike", opt);
  const Grid grid = inst.grid();

  // constant f: the projections vanish, alpha = 0, ratio 0
  std::vector<double> ones(inst.sigma.size(), 1.0);
  const auto forest =
      cz_pe_stopping(ones, inst.sigma, inst.omega, grid, 1e30, inst.cfg);
  CHECK(decay_report(forest, inst.sigma).rho.empty());
  CHECK(quasi_orthogonality(forest, ones, inst.sigma) ==
        doctest::Approx(0.0).epsilon(1e-20));

  // a structured forest: alpha is monotone along descending chains
  const auto deep = cz_pe_stopping(inst.f, inst.sigma, inst.omega, grid, 1.5,
                                   inst.cfg);
  for (std::size_t i = 1; i < deep.size(); ++i)
    CHECK(deep.node(static_cast<int>(i)).alpha >=
          deep.node(deep.node(static_cast<int>(i)).parent).alpha - 1e-15);
}

TEST_CASE("istar on hand trees") {
  // path 0 - 1 - 2 with mass only at the leaf
  const auto path = RootedTree::from_parents({-1, 0, 1});
  std::vector<double> mu{0.0, 0.0, 1.0};
  CHECK(istar(path, mu, 2) == 1.0);
  CHECK(istar(path, mu, 0) == 1.0);
  std::vector<double> mu2{0.5, 2.0, 1.0};
  CHECK(istar(path, mu2, 0) == doctest::Approx(3.5));
  CHECK(istar(path, mu2, 1) == doctest::Approx(3.0));
}

TEST_CASE("dual tree decomposition: the hand-checked irreducible cases") {
  // path o - a - b with mu(b) = 1, Gamma = 2: neither a nor o fires
  const auto path = RootedTree::from_parents({-1, 0, 1});
  const auto d1 = dual_tree_decompose(path, std::vector<double>{0, 0, 1}, 2.0);
  CHECK(d1.irreducible);

  // star with three unit leaves, Gamma = 2: 3 > 6 is false at the root
  const auto star = RootedTree::from_parents({-1, 0, 0, 0});
  const auto d2 =
      dual_tree_decompose(star, std::vector<double>{0, 1, 1, 1}, 2.0);
  CHECK(d2.irreducible);

  // trivial mu is rejected
  CHECK_THROWS_AS(
      dual_tree_decompose(star, std::vector<double>{0, 0, 0, 0}, 2.0),
      std::invalid_argument);

  // a mass-heavy root over a light leaf fires immediately
  const auto d3 =
      dual_tree_decompose(path, std::vector<double>{0, 9, 1}, 2.0);
  CHECK_FALSE(d3.irreducible);
  CHECK(d3.levels.front() == std::vector<int>{2});
  const auto chk = verify_tree_decomposition(
      path, std::vector<double>{0, 9, 1}, 2.0, d3);
  CHECK(chk.ok);
}

TEST_CASE("build_U: degenerate inputs") {
  const Grid grid({0.0, 1.0}, 8);
  GridConfig cfg;
  cfg.max_depth = 8;
  const DiscreteMeasure omega({0.3, 0.31}, {1.0, 1.0});

  // empty Lambda_g: trivial forest with the flag
  const auto u0 = build_U(grid.root(), {}, omega, 0.25, grid, cfg);
  CHECK(u0.irreducible);
  CHECK(u0.forest.size() == 1);

  // a single support interval cannot dominate anything
  Dyad leaf{};
  REQUIRE(grid.locate(0.3, 5, &leaf));
  const std::vector<Dyad> lone{leaf};
  const auto u1 = build_U(grid.root(), lone, omega, 0.25, grid, cfg);
  CHECK(u1.irreducible);
}

TEST_CASE("build_U guarantees on generated instances") {
  int nontrivial = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenOptions opt;
    opt.atoms = 20;
    opt.max_depth = 8;
    const Instance inst = generate(seed, "clustered", opt);
    const Grid grid = inst.grid();
    const auto u = build_U(grid.root(), inst.lambda_g, inst.omega,
                           inst.cfg.theta, grid, inst.cfg);
    const auto chk = verify_U_guarantees(u, inst.lambda_g, inst.omega,
                                         inst.cfg.theta, grid, inst.cfg);
    CHECK(chk.ok);
    if (!u.irreducible) {
      ++nontrivial;
      CHECK(u.forest.size() > 1);
      CHECK(chk.tight_checked > 0);
    }
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("pi composition and corona partition") {
  GenOptions opt;
  opt.atoms = 18;
  opt.max_depth = 8;
  const Instance inst = generate(12, "clustered", opt);
  const Grid grid = inst.grid();
  const auto forest =
      cz_pe_stopping(inst.f, inst.sigma, inst.omega, grid, 1.5, inst.cfg);
  REQUIRE(forest.size() > 1);

  Rng rng(88);
  for (int t = 0; t < 50; ++t) {
    const int n = static_cast<int>(rng.below(8)) + 1;
    const Dyad J{n, rng.below(std::int64_t{1} << n)};
    const int s = static_cast<int>(rng.below(3));
    const int u = static_cast<int>(rng.below(3));
    int a = forest.pi0(J);
    REQUIRE(a >= 0);
    for (int q = 0; q < u; ++q) a = forest.pi(a);
    for (int q = 0; q < s; ++q) a = forest.pi(a);
    CHECK(a == forest.pi_s(J, s + u));
  }

  std::size_t covered = 0;
  for (std::size_t fi = 0; fi < forest.size(); ++fi)
    covered += forest.corona_members(static_cast<int>(fi)).size();
  CHECK(covered == grid.descendants(grid.root()).size());
}

TEST_CASE("forest serialization mentions every member") {
  GenOptions opt;
  opt.atoms = 16;
  opt.max_depth = 8;
  const Instance inst = generate(2, "clustered", opt);
  const Grid grid = inst.grid();
  const auto forest =
      cz_pe_stopping(inst.f, inst.sigma, inst.omega, grid, 1.5, inst.cfg);
  const std::string text = forest.serialize();
  for (std::size_t i = 0; i < forest.size(); ++i)
    CHECK(text.find(grid.label(forest.node(static_cast<int>(i)).iv)) !=
          std::string::npos);
}

TEST_CASE("cz-pe stopping: the spike criterion fires where the oracle says") {
  // a localized pair of sigma-atoms carrying a sharp f-spike while a heavy
  // background atom drags the global average down: the average criterion
  // fires exactly at the maximal good intervals the hand-run oracle selects
  const Grid grid({0.0, 1.0}, 8);
  GridConfig cfg;
  cfg.max_depth = 8;
  cfg.validate();
  const DiscreteMeasure sigma({5.0 / 16, 6.0 / 16, 12.0 / 16},
                              {1.0, 1.0, 14.0});
  const DiscreteMeasure omega({0.4, 0.9}, {1.0, 1.0});
  std::vector<double> f{8.0, -8.0, 0.0};

  const double gamma = 1e12;  // the energy criterion stays silent
  const auto forest = cz_pe_stopping(f, sigma, omega, grid, gamma, cfg);

  // oracle: scan every good interval, fire on the average criterion, keep
  // the maximal ones
  auto proj = project_subtree(f, sigma, grid, grid.root());
  for (double& v : proj) v = std::abs(v);
  const double avg_root = expectation(proj, sigma, grid.root_interval()).value;
  std::vector<Dyad> firing;
  for (const Dyad& d : grid.descendants(grid.root())) {
    if (d == grid.root() || !grid.is_good(d, cfg)) continue;
    const Interval iv = grid.interval(d);
    if (!(mass(sigma, iv) > 0.0)) continue;
    if (expectation(proj, sigma, iv).value > 4.0 * avg_root)
      firing.push_back(d);
  }
  std::vector<Dyad> maximal;
  for (const Dyad& d : firing) {
    bool top = true;
    for (const Dyad& e : firing)
      if (!(e == d) && grid.contains(e, d)) top = false;
    if (top) maximal.push_back(d);
  }
  std::sort(maximal.begin(), maximal.end());
  REQUIRE(!maximal.empty());

  std::vector<Dyad> children;
  for (int c : forest.children_of(0)) children.push_back(forest.node(c).iv);
  std::sort(children.begin(), children.end());
  CHECK(children == maximal);

  // the spike atoms live inside some stopping child
  bool covered = false;
  for (const Dyad& d : children)
    if (grid.interval(d).contains(5.0 / 16)) covered = true;
  CHECK(covered);
}
