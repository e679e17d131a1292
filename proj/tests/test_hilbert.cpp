#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twoweight/harness.hpp"
#include "twoweight/hilbert.hpp"

using namespace twoweight;

TEST_CASE("truncated application") {
  const Truncation t{1e-6, std::numeric_limits<double>::infinity()};
  const DiscreteMeasure one({1.0}, {1.0});
  std::vector<double> zero{0.0}, unit{1.0};
  CHECK(hilbert_apply(zero, one, 0.0, t) == 0.0);
  CHECK(hilbert_apply(unit, one, 0.0, t) == doctest::Approx(1.0));

  const DiscreteMeasure pair({-1.0, 1.0}, {1.0, 1.0});
  std::vector<double> ones{1.0, 1.0};
  CHECK(hilbert_apply(ones, pair, 0.0, t) == doctest::Approx(0.0));

  // atoms inside the hole are excluded by definition
  const Truncation wide{2.0, std::numeric_limits<double>::infinity()};
  CHECK(hilbert_apply(unit, one, 0.0, wide) == 0.0);
}

TEST_CASE("bilinear form") {
  const Truncation t{1e-9, std::numeric_limits<double>::infinity()};
  const DiscreteMeasure sigma({0.0, 1.0}, {1.0, 2.0});
  const DiscreteMeasure omega({0.25, 0.875}, {1.5, 0.5});
  std::vector<double> f{0.3, -0.7}, g{1.1, 0.4}, zero{0.0, 0.0};
  CHECK(hilbert_bilinear(f, zero, sigma, omega, t) == 0.0);

  // brute-force double sum
  double expect = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      expect += g[i] * omega.mass_at(i) * f[j] * sigma.mass_at(j) /
                (sigma.position(j) - omega.position(i));
  CHECK(hilbert_bilinear(f, g, sigma, omega, t) ==
        doctest::Approx(expect).epsilon(1e-13));

  // antisymmetry on a common measure
  const DiscreteMeasure mu({0.0, 0.5, 1.0}, {1.0, 2.0, 0.5});
  std::vector<double> a{0.2, -0.3, 0.9}, b{-1.0, 0.4, 0.1};
  CHECK(hilbert_bilinear(a, b, mu, mu, t) ==
        doctest::Approx(-hilbert_bilinear(b, a, mu, mu, t)).epsilon(1e-12));
}

TEST_CASE("operator norm: closed forms and the SVD oracle") {
  const Truncation t{1e-9, std::numeric_limits<double>::infinity()};
  // single pair at distance 2: a 1x1 matrix
  CHECK(operator_norm(DiscreteMeasure({0.0}, {1.0}),
                      DiscreteMeasure({2.0}, {1.0}), t)
            .value == doctest::Approx(0.5).epsilon(1e-8));

  // only a shared atom, excluded by every truncation: empty kernel
  const DiscreteMeasure common({0.5}, {3.0});
  CHECK(operator_norm(common, common, t).value == 0.0);

  // zero measures are flagged
  CHECK(operator_norm(DiscreteMeasure(), common, t).zero_measure);

  // 3x3 against the Jacobi oracle
  const DiscreteMeasure s3({0.1, 0.5, 0.9}, {1.0, 2.0, 0.5});
  const DiscreteMeasure w3({0.2, 0.6, 1.4}, {0.7, 1.1, 2.0});
  std::vector<double> m(9, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i * 3 + j] = std::sqrt(w3.mass_at(i)) * std::sqrt(s3.mass_at(j)) /
                     (s3.position(j) - w3.position(i));
  CHECK(operator_norm(s3, w3, t).value ==
        doctest::Approx(oracles::jacobi_sigma_max(m, 3, 3)).epsilon(1e-6));
}

TEST_CASE("operator norm properties on random instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenOptions opt;
    opt.atoms = 10;
    opt.max_depth = 8;
    const Instance inst = generate(seed, seed % 2 ? "uniform" : "common-atoms",
                                   opt);
    const Truncation t = truncation_ladder(inst.sigma, inst.omega)[0];
    const double n1 = operator_norm(inst.sigma, inst.omega, t).value;
    const double n2 = operator_norm(inst.omega, inst.sigma, t).value;
    CHECK(n1 == doctest::Approx(n2).epsilon(1e-7));

    // reproducibility, bit for bit
    CHECK(operator_norm(inst.sigma, inst.omega, t).value == n1);

    // duality bound on the bilinear form
    const double nf = std::sqrt(l2_norm_sq(inst.f, inst.sigma));
    const double ng = std::sqrt(l2_norm_sq(inst.g, inst.omega));
    CHECK(std::abs(hilbert_bilinear(inst.f, inst.g, inst.sigma, inst.omega,
                                    t)) <= n1 * nf * ng + 1e-8);

    // matches the dense oracle at every size
    const std::size_t rows = inst.omega.size(), cols = inst.sigma.size();
    std::vector<double> m(rows * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const double d = inst.sigma.position(j) - inst.omega.position(i);
        if (std::abs(d) > t.eps && std::abs(d) < t.outer)
          m[i * cols + j] = std::sqrt(inst.omega.mass_at(i)) *
                            std::sqrt(inst.sigma.mass_at(j)) / d;
      }
    CHECK(n1 == doctest::Approx(oracles::jacobi_sigma_max(m, rows, cols))
                    .epsilon(1e-6));
  }
}

TEST_CASE("truncation gap and ladder") {
  const DiscreteMeasure s({0.0, 0.5}, {1.0, 1.0});
  const DiscreteMeasure w({0.5, 0.75}, {1.0, 1.0});
  CHECK(truncation_gap(s, w) == doctest::Approx(0.25));
  const auto ladder = truncation_ladder(s, w);
  REQUIRE(ladder.size() == 2);
  CHECK(ladder[0].eps == doctest::Approx(0.125));
  CHECK(ladder[1].eps == doctest::Approx(0.0625));
  CHECK(std::isinf(ladder[0].outer));
  // no distinct pair: fall back to 1
  CHECK(truncation_gap(DiscreteMeasure({0.5}, {1.0}),
                       DiscreteMeasure({0.5}, {2.0})) == 1.0);
}
