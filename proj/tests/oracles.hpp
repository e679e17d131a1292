#pragma once

// Independent brute-force oracles for the unit and acceptance suites. These
// deliberately avoid the library's own code paths (index arithmetic, DP,
// power iteration) and recompute everything from the defining formulas.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "twoweight/characteristics.hpp"
#include "twoweight/dyadic.hpp"
#include "twoweight/measure.hpp"

namespace oracles {

using twoweight::DiscreteMeasure;
using twoweight::Dyad;
using twoweight::Grid;
using twoweight::GridConfig;
using twoweight::Interval;

// Largest singular value via cyclic Jacobi on M^T M.
inline double jacobi_sigma_max(const std::vector<double>& m, std::size_t rows,
                               std::size_t cols) {
  std::vector<double> a(cols * cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += m[r * cols + i] * m[r * cols + j];
      a[i * cols + j] = s;
    }
  const std::size_t n = cols;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a[p * n + q]);
    if (off < 1e-15) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  double lam = 0.0;
  for (std::size_t i = 0; i < n; ++i) lam = std::max(lam, a[i * n + i]);
  return std::sqrt(std::max(0.0, lam));
}

inline bool good_by_formula(const Grid& grid, Dyad j, const GridConfig& cfg) {
  const Interval J = grid.interval(j);
  for (int d = 0; d + cfg.r <= j.n; ++d) {
    const Interval K = grid.interval(grid.ancestor(j, d));
    const double dist = std::min(J.left - K.left, K.right() - J.right());
    if (dist < 0.5 * std::pow(J.length, cfg.eps) *
                   std::pow(K.length, 1.0 - cfg.eps))
      return false;
  }
  return true;
}

// Maximal qualifying subintervals by exhaustive enumeration + pairwise
// containment checks, to the grid's depth cap.
inline std::vector<Dyad> brute_maximal(
    const Grid& grid, Dyad top, const std::function<bool(Dyad)>& qualifies) {
  std::vector<Dyad> qual;
  for (const Dyad& d : grid.descendants(top))
    if (!(d == top) && qualifies(d)) qual.push_back(d);
  std::vector<Dyad> out;
  for (const Dyad& d : qual) {
    bool maximal = true;
    for (const Dyad& e : qual)
      if (!(e == d) && grid.contains(e, d)) maximal = false;
    if (maximal) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Dyad> brute_whitney_deep(const Grid& grid, Dyad f,
                                            const GridConfig& cfg) {
  const Interval F = grid.interval(f);
  return brute_maximal(grid, f, [&](Dyad w) {
    if (w.n - f.n < cfg.r) return false;
    const Interval W = grid.interval(w);
    const double dist = std::min(W.left - F.left, F.right() - W.right());
    return dist >= 0.5 * std::pow(W.length, cfg.eps) *
                       std::pow(F.length, 1.0 - cfg.eps);
  });
}

inline std::vector<Dyad> brute_whitney_triple(const Grid& grid, Dyad s,
                                              const GridConfig& cfg) {
  const Interval S = grid.interval(s);
  return brute_maximal(grid, s, [&](Dyad i) {
    const Interval I = grid.interval(i);
    return I.center() - 1.5 * I.length >= S.left &&
           I.center() + 1.5 * I.length <= S.right() &&
           good_by_formula(grid, i, cfg);
  });
}

// Offset-A2 by exhaustive pair enumeration over interval geometry.
inline double brute_a2_offset(const DiscreteMeasure& sigma,
                              const DiscreteMeasure& omega, const Grid& grid,
                              int r) {
  const auto all = grid.all();
  double best = 0.0;
  for (const Dyad& q : all)
    for (const Dyad& p : all) {
      const Interval Q = grid.interval(q), P = grid.interval(p);
      const double ratio = Q.length / P.length;
      if (ratio > std::ldexp(1.0, r) || ratio < std::ldexp(1.0, -r)) continue;
      const bool touching = Q.right() == P.left || P.right() == Q.left;
      if (!touching) continue;  // touching closures and disjoint
      best = std::max(best, (twoweight::mass(omega, P) / P.length) *
                                (twoweight::mass(sigma, Q) / Q.length));
    }
  return best;
}

// Exhaustive best-subpartition value for the energy characteristic: every
// pairwise disjoint dyadic subfamily of `top` is enumerated explicitly.
inline double brute_energy_best(const Grid& grid, Dyad top,
                                const DiscreteMeasure& sigma,
                                const DiscreteMeasure& omega) {
  const Interval topiv = grid.interval(top);
  // per-interval terms from the defining formula
  std::vector<Dyad> nodes = grid.descendants(top);
  std::vector<double> term(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Interval iv = grid.interval(nodes[i]);
    if (nodes[i] == top) continue;
    double p = 0.0;
    for (std::size_t a = 0; a < sigma.size(); ++a) {
      const double y = sigma.position(a);
      if (!topiv.contains(y) || iv.contains(y)) continue;
      const double d = iv.length + std::abs(y - iv.center());
      p += sigma.mass_at(a) * iv.length / (d * d);
    }
    term[i] = (p / iv.length) * (p / iv.length) *
              twoweight::energy(iv, omega) * twoweight::mass(omega, iv);
  }
  auto index_of = [&](Dyad d) {
    const int g = d.n - top.n;
    return static_cast<std::size_t>(((std::int64_t{1} << g) - 1) +
                                    (d.k - (top.k << g)));
  };
  double best = 0.0;
  // enumerate families recursively: at each node either take it, or recurse
  // into both children, or drop the subtree
  std::function<void(std::vector<Dyad>, double)> walk =
      [&](std::vector<Dyad> frontier, double acc) {
        if (frontier.empty()) {
          best = std::max(best, acc);
          return;
        }
        const Dyad cur = frontier.back();
        frontier.pop_back();
        // drop
        walk(frontier, acc);
        // take
        walk(frontier, acc + term[index_of(cur)]);
        // split
        if (cur.n < grid.max_depth()) {
          auto [lo, hi] = grid.children(cur);
          auto f2 = frontier;
          f2.push_back(lo);
          f2.push_back(hi);
          walk(f2, acc);
        }
      };
  if (top.n < grid.max_depth()) {
    auto [lo, hi] = grid.children(top);
    walk({lo, hi}, 0.0);
  }
  return best;
}

}  // namespace oracles
