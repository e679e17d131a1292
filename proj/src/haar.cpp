#include "twoweight/haar.hpp"

#include <algorithm>
#include <cmath>

namespace twoweight {

Expectation expectation(std::span<const double> f, const DiscreteMeasure& mu,
                        const Interval& I) {
  auto [a, b] = mu.range(I.left, I.right());
  double m = 0.0, s = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    m += mu.mass_at(i);
    s += mu.mass_at(i) * f[i];
  }
  if (!(m > 0.0)) return {0.0, true};
  return {s / m, false};
}

namespace {

struct ChildAverages {
  double lo = 0.0, hi = 0.0, whole = 0.0;
  bool degenerate = true;
  double mass_lo = 0.0, mass_hi = 0.0;
};

ChildAverages child_averages(std::span<const double> f,
                             const DiscreteMeasure& mu, const Grid& grid,
                             Dyad I) {
  ChildAverages out;
  const Interval iv = grid.interval(I);
  const double mid = iv.left + 0.5 * iv.length;
  auto [a, b] = mu.range(iv.left, iv.right());
  auto [c, dummy] = mu.range(mid, iv.right());
  (void)dummy;
  double mlo = 0.0, slo = 0.0, mhi = 0.0, shi = 0.0;
  for (std::size_t i = a; i < c; ++i) {
    mlo += mu.mass_at(i);
    slo += mu.mass_at(i) * f[i];
  }
  for (std::size_t i = c; i < b; ++i) {
    mhi += mu.mass_at(i);
    shi += mu.mass_at(i) * f[i];
  }
  out.mass_lo = mlo;
  out.mass_hi = mhi;
  if (!(mlo > 0.0) || !(mhi > 0.0)) return out;
  out.degenerate = false;
  out.lo = slo / mlo;
  out.hi = shi / mhi;
  out.whole = (slo + shi) / (mlo + mhi);
  return out;
}

}  // namespace

HaarDifference haar_diff(std::span<const double> f, const DiscreteMeasure& mu,
                         const Grid& grid, Dyad I) {
  HaarDifference out;
  out.interval = I;
  out.values.assign(mu.size(), 0.0);
  const auto avg = child_averages(f, mu, grid, I);
  if (avg.degenerate) return out;
  out.degenerate = false;
  const Interval iv = grid.interval(I);
  const double mid = iv.left + 0.5 * iv.length;
  auto [a, b] = mu.range(iv.left, iv.right());
  for (std::size_t i = a; i < b; ++i)
    out.values[i] = (mu.position(i) < mid ? avg.lo : avg.hi) - avg.whole;
  out.coefficient = std::sqrt(avg.mass_lo * avg.mass_hi /
                              (avg.mass_lo + avg.mass_hi)) *
                    (avg.hi - avg.lo);
  return out;
}

void add_haar_diff(std::span<const double> f, const DiscreteMeasure& mu,
                   const Grid& grid, Dyad I, std::span<double> acc) {
  const auto avg = child_averages(f, mu, grid, I);
  if (avg.degenerate) return;
  const Interval iv = grid.interval(I);
  const double mid = iv.left + 0.5 * iv.length;
  auto [a, b] = mu.range(iv.left, iv.right());
  for (std::size_t i = a; i < b; ++i)
    acc[i] += (mu.position(i) < mid ? avg.lo : avg.hi) - avg.whole;
}

std::vector<double> project(std::span<const double> f,
                            const DiscreteMeasure& mu, const Grid& grid,
                            std::span<const Dyad> H) {
  std::vector<double> acc(mu.size(), 0.0);
  for (const Dyad& I : H) add_haar_diff(f, mu, grid, I, acc);
  return acc;
}

std::vector<double> project_local(std::span<const double> f,
                                  const DiscreteMeasure& mu, const Grid& grid,
                                  std::span<const Dyad> H, Dyad J) {
  std::vector<double> acc(mu.size(), 0.0);
  for (const Dyad& I : H)
    if (grid.contains(J, I)) add_haar_diff(f, mu, grid, I, acc);
  return acc;
}

std::vector<double> project_subtree(std::span<const double> f,
                                    const DiscreteMeasure& mu, const Grid& grid,
                                    Dyad I) {
  std::vector<double> out(mu.size(), 0.0);
  const Interval iv = grid.interval(I);
  const auto whole = expectation(f, mu, iv);
  if (whole.zero_mass) return out;
  auto [a, b] = mu.range(iv.left, iv.right());
  // Atoms sharing a depth-max_depth leaf share its average.
  std::size_t i = a;
  while (i < b) {
    Dyad leaf{};
    grid.locate(mu.position(i), grid.max_depth(), &leaf);
    std::size_t j = i;
    double m = 0.0, s = 0.0;
    for (; j < b; ++j) {
      Dyad lj{};
      grid.locate(mu.position(j), grid.max_depth(), &lj);
      if (!(lj == leaf)) break;
      m += mu.mass_at(j);
      s += mu.mass_at(j) * f[j];
    }
    const double leaf_avg = s / m;
    for (std::size_t t = i; t < j; ++t) out[t] = leaf_avg - whole.value;
    i = j;
  }
  return out;
}

std::vector<Dyad> haar_support(std::span<const double> f,
                               const DiscreteMeasure& mu, const Grid& grid,
                               const GridConfig& cfg, bool good_filter) {
  std::vector<Dyad> out;
  const double scale = std::sqrt(l2_norm_sq(f, mu));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (const Dyad& I : grid.all(grid.max_depth() - 1)) {
    const Interval iv = grid.interval(I);
    auto [a, b] = mu.range(iv.left, iv.right());
    if (b - a < 2) continue;
    const auto d = haar_diff(f, mu, grid, I);
    if (d.degenerate || std::abs(d.coefficient) <= tol) continue;
    if (good_filter) {
      auto [lo, hi] = grid.children(I);
      if (!grid.is_good(I, cfg) || !grid.is_good(lo, cfg) ||
          !grid.is_good(hi, cfg))
        continue;
    }
    out.push_back(I);
  }
  return out;
}

double coordinate_energy(const Grid& grid, Dyad J,
                         const DiscreteMeasure& omega) {
  const auto z = identity_values(omega);
  const auto d = haar_diff(z, omega, grid, J);
  return l2_norm_sq(d.values, omega);
}

std::vector<double> maximal_fn(std::span<const double> f,
                               const DiscreteMeasure& mu, const Grid& grid) {
  std::vector<double> absf(f.begin(), f.end());
  for (double& v : absf) v = std::abs(v);
  std::vector<double> out(mu.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Dyad leaf;
    if (!grid.locate(mu.position(i), grid.max_depth(), &leaf)) continue;
    double best = 0.0;
    Dyad cur = leaf;
    while (true) {
      const auto e = expectation(absf, mu, grid.interval(cur));
      if (!e.zero_mass) best = std::max(best, e.value);
      if (cur.n == 0) break;
      cur = grid.parent(cur);
    }
    out[i] = best;
  }
  return out;
}

double l2_norm_sq(std::span<const double> f, const DiscreteMeasure& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.mass_at(i) * f[i] * f[i];
  return s;
}

double inner_product(std::span<const double> f, std::span<const double> g,
                     const DiscreteMeasure& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.mass_at(i) * f[i] * g[i];
  return s;
}

std::vector<double> identity_values(const DiscreteMeasure& mu) {
  return mu.positions();
}

}  // namespace twoweight
