#include <doctest.h>

#include <cmath>

#include "twoweight/harness.hpp"
#include "twoweight/measure.hpp"

using namespace twoweight;

TEST_CASE("interval mass over the half-open window") {
  const DiscreteMeasure single({0.5}, {1.0});
  CHECK(mass(single, {0.0, 1.0}) == 1.0);

  const DiscreteMeasure empty;
  CHECK(mass(empty, {0.0, 1.0}) == 0.0);
  CHECK(mass(empty, {-5.0, 100.0}) == 0.0);

  const DiscreteMeasure three({0.25, 0.75, 1.5}, {2.0, 3.0, 7.0});
  CHECK(mass(three, {0.0, 1.0}) == 5.0);
  // half-open: an atom exactly on the right endpoint is excluded
  CHECK(mass(three, {0.0, 0.75}) == 2.0);
  CHECK(mass(three, {0.75, 0.75}) == 3.0);  // [0.75, 1.5): right end excluded
}

TEST_CASE("measure invariants are enforced") {
  CHECK_THROWS(DiscreteMeasure({0.5, 0.5}, {1.0, 1.0}));
  CHECK_THROWS(DiscreteMeasure({0.5, 0.2}, {1.0, 1.0}));
  CHECK_THROWS(DiscreteMeasure({0.5}, {0.0}));
  CHECK_THROWS(DiscreteMeasure({0.5}, {1.0, 2.0}));
}

TEST_CASE("poisson integral on atoms") {
  CHECK(poisson({0.0, 1.0}, DiscreteMeasure({0.5}, {1.0})) == doctest::Approx(1.0));
  CHECK(poisson({0.0, 1.0}, DiscreteMeasure({1.5}, {1.0})) ==
        doctest::Approx(0.25));
  CHECK(poisson({0.0, 2.0}, DiscreteMeasure({-1.0, 3.0}, {1.0, 1.0})) ==
        doctest::Approx(0.25));
  CHECK(poisson({0.0, 1.0}, DiscreteMeasure()) == 0.0);
}

TEST_CASE("tail weight") {
  const Interval I{0.0, 1.0};
  CHECK(tail_weight(I, I.center()) == 1.0);
  CHECK(tail_weight(I, 1.5) == doctest::Approx(0.5));
  CHECK(tail_weight({0.0, 2.0}, 7.0) == doctest::Approx(0.25));
}

TEST_CASE("energy functional") {
  CHECK(energy({0.0, 1.0}, DiscreteMeasure({0.3}, {5.0})) == 0.0);
  CHECK(energy({0.0, 1.0}, DiscreteMeasure()) == 0.0);
  // two equal masses at the endpoints: mean-square deviation (l/2)^2 / l^2
  CHECK(energy({0.0, 1.0}, DiscreteMeasure({0.0, 1.0 - 1e-15}, {1.0, 1.0})) ==
        doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("poisson scaling, additivity; energy bound; mass additivity") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    std::vector<double> pos, m1, m2;
    double x = rng.uniform(-2.0, 0.0);
    for (int i = 0; i < n; ++i) {
      x += rng.uniform(0.01, 1.0);
      pos.push_back(x);
      m1.push_back(rng.uniform(0.1, 3.0));
      m2.push_back(rng.uniform(0.1, 3.0));
    }
    const DiscreteMeasure mu(pos, m1), nu(pos, m2);
    const Interval I{rng.uniform(-1.0, 0.0), rng.uniform(0.5, 2.0)};

    // translation invariance
    const double t = rng.uniform(-3.0, 3.0);
    std::vector<double> shifted = pos;
    for (double& p : shifted) p += t;
    const DiscreteMeasure mu_t(shifted, m1);
    CHECK(poisson({I.left + t, I.length}, mu_t) ==
          doctest::Approx(poisson(I, mu)).epsilon(1e-12));
    CHECK(tail_weight({I.left + t, I.length}, pos[0] + t) ==
          doctest::Approx(tail_weight(I, pos[0])).epsilon(1e-12));

    // dilation: all lengths scaled by L with fixed masses => P scales by 1/L
    const double L = rng.uniform(0.5, 4.0);
    std::vector<double> dil = pos;
    for (double& p : dil) p *= L;
    const DiscreteMeasure mu_d(dil, m1);
    CHECK(poisson({I.left * L, I.length * L}, mu_d) ==
          doctest::Approx(poisson(I, mu) / L).epsilon(1e-12));

    // additivity in the measure
    std::vector<double> msum(m1);
    for (int i = 0; i < n; ++i) msum[i] += m2[i];
    CHECK(poisson(I, DiscreteMeasure(pos, msum)) ==
          doctest::Approx(poisson(I, mu) + poisson(I, nu)).epsilon(1e-12));

    // energy never exceeds 1/4
    CHECK(energy(I, mu) <= 0.25);

    // mass is additive over a dyadic split of the parent
    const Interval lo{I.left, I.length / 2.0};
    const Interval hi{I.left + I.length / 2.0, I.length / 2.0};
    CHECK(mass(mu, I) == doctest::Approx(mass(mu, lo) + mass(mu, hi))
                             .epsilon(1e-14));
  }
}
