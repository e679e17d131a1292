#include "twoweight/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "twoweight/haar.hpp"

namespace twoweight {

ScanIntervals scan_intervals(const Grid& grid, int tail_doublings) {
  ScanIntervals out;
  for (const Dyad& d : grid.all()) {
    out.ivs.push_back(grid.interval(d));
    out.labels.push_back(grid.label(d));
  }
  const auto anc = grid.root_ancestors(tail_doublings);
  for (std::size_t j = 0; j < anc.size(); ++j) {
    out.ivs.push_back(anc[j]);
    out.labels.push_back("A" + std::to_string(j + 1));
  }
  return out;
}

namespace {

// Disjoint touching dyadic pairs (Q, Q') with |depth difference| <= span.
// visit(Q, Q') is called once per ordered pair.
template <typename F>
void adjacent_pairs(const Grid& grid, int span, F&& visit) {
  for (const Dyad& q : grid.all()) {
    for (int dn = -span; dn <= span; ++dn) {
      const int n2 = q.n + dn;
      if (n2 < 0 || n2 > grid.max_depth()) continue;
      for (int side = 0; side < 2; ++side) {
        // shared edge index in units of 2^-q.n: left edge k, right edge k+1
        const std::int64_t edge = side == 0 ? q.k : q.k + 1;
        std::int64_t e2;
        if (n2 >= q.n) {
          e2 = edge << (n2 - q.n);
        } else {
          const int g = q.n - n2;
          if (edge & ((std::int64_t{1} << g) - 1)) continue;  // not aligned
          e2 = edge >> g;
        }
        const std::int64_t k2 = side == 0 ? e2 - 1 : e2;
        const Dyad cand{n2, k2};
        if (!grid.valid(cand)) continue;
        visit(q, cand);
      }
    }
  }
}

}  // namespace

ValueWitness a2_offset(const DiscreteMeasure& sigma,
                       const DiscreteMeasure& omega, const Grid& grid,
                       const GridConfig& cfg) {
  ValueWitness best;
  adjacent_pairs(grid, cfg.r, [&](Dyad q, Dyad qp) {
    const Interval Q = grid.interval(q), Qp = grid.interval(qp);
    const double v =
        (mass(omega, Qp) / Qp.length) * (mass(sigma, Q) / Q.length);
    if (v > best.value) {
      best.value = v;
      best.witness = grid.label(q) + "|" + grid.label(qp);
    }
  });
  return best;
}

ValueWitness a2_hole(const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
                     const Grid& grid, const GridConfig& cfg) {
  ValueWitness best;
  const Interval everything = hull({&sigma, &omega});
  const auto scan = scan_intervals(grid, cfg.tail_doublings);
  for (std::size_t i = 0; i < scan.ivs.size(); ++i) {
    const Interval& I = scan.ivs[i];
    const double v =
        poisson_annulus(I, omega, everything, I) * (mass(sigma, I) / I.length) +
        (mass(omega, I) / I.length) * poisson_annulus(I, sigma, everything, I);
    if (v > best.value) {
      best.value = v;
      best.witness = scan.labels[i];
    }
  }
  return best;
}

ValueWitness a2_twotailed(const DiscreteMeasure& sigma,
                          const DiscreteMeasure& omega, const Grid& grid,
                          const GridConfig& cfg, bool local_tails) {
  ValueWitness best;
  auto factor = [&](const Interval& I, const DiscreteMeasure& mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double x = mu.position(i);
      if (local_tails && !I.contains(x)) continue;
      const double w = tail_weight(I, x);
      s += w * w * mu.mass_at(i);
    }
    return s / I.length;
  };
  const auto scan = scan_intervals(grid, cfg.tail_doublings);
  for (std::size_t i = 0; i < scan.ivs.size(); ++i) {
    const double v = factor(scan.ivs[i], omega) * factor(scan.ivs[i], sigma);
    if (v > best.value) {
      best.value = v;
      best.witness = scan.labels[i];
    }
  }
  return best;
}

ValueWitness testing(const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
                     const Grid& grid, const GridConfig& cfg,
                     const Truncation& trunc, bool local) {
  ValueWitness best;
  const auto scan = scan_intervals(grid, cfg.tail_doublings);
  std::vector<double> ind(sigma.size(), 0.0);
  for (std::size_t i = 0; i < scan.ivs.size(); ++i) {
    const Interval& I = scan.ivs[i];
    const double mI = mass(sigma, I);
    if (!(mI > 0.0)) continue;
    for (std::size_t j = 0; j < sigma.size(); ++j)
      ind[j] = I.contains(sigma.position(j)) ? 1.0 : 0.0;
    double norm2 = 0.0;
    for (std::size_t x = 0; x < omega.size(); ++x) {
      if (local && !I.contains(omega.position(x))) continue;
      const double h = hilbert_apply(ind, sigma, omega.position(x), trunc);
      norm2 += omega.mass_at(x) * h * h;
    }
    const double v = std::sqrt(norm2 / mI);
    if (v > best.value) {
      best.value = v;
      best.witness = scan.labels[i];
    }
  }
  return best;
}

ValueWitness weak_boundedness(const DiscreteMeasure& sigma,
                              const DiscreteMeasure& omega, const Grid& grid,
                              const GridConfig& cfg, const Truncation& trunc) {
  ValueWitness best;
  std::vector<double> ind(sigma.size(), 0.0);
  adjacent_pairs(grid, cfg.tau, [&](Dyad i, Dyad j) {
    const Interval I = grid.interval(i), J = grid.interval(j);
    if (!(mass(sigma, I) > 0.0) || !(mass(omega, J) > 0.0)) return;
    for (std::size_t t = 0; t < sigma.size(); ++t)
      ind[t] = I.contains(sigma.position(t)) ? 1.0 : 0.0;
    double v = 0.0;
    for (std::size_t x = 0; x < omega.size(); ++x) {
      if (!J.contains(omega.position(x))) continue;
      v += omega.mass_at(x) * hilbert_apply(ind, sigma, omega.position(x), trunc);
    }
    if (std::abs(v) > best.value) {
      best.value = std::abs(v);
      best.witness = grid.label(i) + "|" + grid.label(j);
    }
  });
  return best;
}

ValueWitness energy_char(const DiscreteMeasure& sigma,
                         const DiscreteMeasure& omega, const Grid& grid) {
  ValueWitness best;
  for (const Dyad& top : grid.all()) {
    const Interval topiv = grid.interval(top);
    const double mtop = mass(sigma, topiv);
    if (!(mtop > 0.0)) continue;
    // bottom-up DP over the subtree: val(J) = best subpartition value below J
    const auto nodes = grid.descendants(top);
    std::vector<double> val(nodes.size(), 0.0);
    for (std::size_t i = nodes.size(); i-- > 0;) {
      const Dyad J = nodes[i];
      const Interval Jiv = grid.interval(J);
      double term = 0.0;
      const double e2 = energy(Jiv, omega);
      if (e2 > 0.0 && !(J == top)) {
        const double p = poisson_annulus(Jiv, sigma, topiv, Jiv) / Jiv.length;
        term = p * p * e2 * mass(omega, Jiv);
      }
      double split = 0.0;
      if (J.n < grid.max_depth()) {
        const int g = J.n - top.n;
        const std::int64_t off = J.k - (top.k << g);
        const std::size_t lo =
            ((std::size_t{1} << (g + 1)) - 1) + 2 * static_cast<std::size_t>(off);
        split = val[lo] + val[lo + 1];
      }
      val[i] = std::max(term, split);
    }
    const double cand = val[0] / mtop;
    if (cand > best.value) {
      best.value = cand;
      best.witness = grid.label(top);
    }
  }
  best.value = std::sqrt(best.value);
  return best;
}

ValueWitness pe_characteristic(const StoppingForest& forest,
                               const DiscreteMeasure& sigma,
                               const DiscreteMeasure& omega,
                               const GridConfig& cfg) {
  ValueWitness best;
  const Grid& grid = forest.grid();
  for (std::size_t fi = 0; fi < forest.size(); ++fi) {
    const Interval F = grid.interval(forest.node(fi).iv);
    for (const Dyad& I : forest.corona_members(static_cast<int>(fi))) {
      if (!grid.is_good(I, cfg)) continue;
      const Interval iv = grid.interval(I);
      const double mI = mass(sigma, iv);
      if (!(mI > 0.0)) continue;
      const double p = poisson_annulus(iv, sigma, F, iv);
      const double v =
          p * std::sqrt(energy(iv, omega) * mass(omega, iv) / mI);
      if (v > best.value) {
        best.value = v;
        best.witness = grid.label(I);
      }
    }
  }
  return best;
}

namespace {

double lambda_tail_norm(const Grid& grid, std::span<const Dyad> lambda,
                        const std::map<Dyad, double>& coord, Dyad K) {
  double s = 0.0;
  for (const Dyad& J : lambda)
    if (grid.contains(K, J)) s += coord.at(J);
  return std::sqrt(s);
}

std::map<Dyad, double> coordinate_energies(const Grid& grid,
                                           std::span<const Dyad> lambda,
                                           const DiscreteMeasure& omega) {
  std::map<Dyad, double> out;
  for (const Dyad& J : lambda) out[J] = coordinate_energy(grid, J, omega);
  return out;
}

}  // namespace

ValueWitness size_functional(const StoppingForest& forest, int F_index,
                             std::span<const Dyad> lambda,
                             const DiscreteMeasure& sigma,
                             const DiscreteMeasure& omega,
                             const GridConfig& cfg) {
  ValueWitness best;
  const Grid& grid = forest.grid();
  const Interval F = grid.interval(forest.node(F_index).iv);
  const auto coord = coordinate_energies(grid, lambda, omega);
  for (const Dyad& K : forest.corona_members(F_index)) {
    if (!grid.is_good(K, cfg)) continue;
    const Interval iv = grid.interval(K);
    const double mK = mass(sigma, iv);
    if (!(mK > 0.0)) continue;
    const double p = poisson_annulus(iv, sigma, F, iv) / iv.length;
    const double v =
        p * lambda_tail_norm(grid, lambda, coord, K) / std::sqrt(mK);
    if (v > best.value) {
      best.value = v;
      best.witness = grid.label(K);
    }
  }
  return best;
}

ValueWitness refined_trip_char(const StoppingForest& main_forest, int F_index,
                               const StoppingForest& a_forest, int A_index,
                               std::span<const Dyad> lambda,
                               const DiscreteMeasure& sigma,
                               const DiscreteMeasure& omega,
                               const GridConfig& cfg) {
  ValueWitness best;
  const Grid& grid = main_forest.grid();
  const Interval F = grid.interval(main_forest.node(F_index).iv);
  const auto coord = coordinate_energies(grid, lambda, omega);
  for (int si : a_forest.children_of(A_index)) {
    const Dyad S = a_forest.node(si).iv;
    std::vector<Dyad> candidates = grid.whitney_triple(S, cfg).members;
    candidates.push_back(S);
    const Interval Siv = grid.interval(S);
    for (const Dyad& K : candidates) {
      if (!grid.is_good(K, cfg)) continue;
      if (main_forest.pi0(K) != F_index) continue;
      const Interval iv = grid.interval(K);
      const double mK = mass(sigma, iv);
      if (!(mK > 0.0)) continue;
      const double p = poisson_annulus(iv, sigma, F, Siv) / iv.length;
      const double v =
          p * lambda_tail_norm(grid, lambda, coord, K) / std::sqrt(mK);
      if (v > best.value) {
        best.value = v;
        best.witness = grid.label(S) + "|" + grid.label(K);
      }
    }
  }
  return best;
}

FunctionalEnergy functional_energy(const StoppingForest& forest,
                                   const DiscreteMeasure& sigma,
                                   const DiscreteMeasure& omega,
                                   const Grid& grid, const GridConfig& cfg) {
  FunctionalEnergy out;
  // Lambda: whitney_deep(F) members that stay in the corona of F.
  struct Piece {
    Dyad w;
    Interval wiv;
    Interval fiv;
    double coord_sq = 0.0;            // sum of ||Delta_J x||^2 over the piece
    std::vector<double> abs_proj;     // per omega-atom absolute projection
  };
  std::vector<Piece> pieces;
  const auto z = identity_values(omega);
  for (std::size_t fi = 0; fi < forest.size(); ++fi) {
    const Dyad Fd = forest.node(fi).iv;
    const auto corona = forest.corona_members(static_cast<int>(fi));
    for (const Dyad& W : grid.whitney_deep(Fd, cfg).members) {
      if (forest.pi0(W) != static_cast<int>(fi)) continue;
      Piece p;
      p.w = W;
      p.wiv = grid.interval(W);
      p.fiv = grid.interval(Fd);
      p.abs_proj.assign(omega.size(), 0.0);
      for (const Dyad& J : corona) {
        if (!grid.contains(W, J)) continue;
        const auto d = haar_diff(z, omega, grid, J);
        if (d.degenerate) continue;
        p.coord_sq += l2_norm_sq(d.values, omega);
        for (std::size_t x = 0; x < omega.size(); ++x)
          p.abs_proj[x] += d.values[x] * d.values[x];
      }
      for (double& v : p.abs_proj) v = std::sqrt(v);
      if (p.coord_sq > 0.0) pieces.push_back(std::move(p));
    }
  }
  if (pieces.empty()) return out;

  // (a) direct estimate: rows indexed by pieces, columns by sigma-atoms.
  {
    std::vector<double> A(pieces.size() * sigma.size(), 0.0);
    for (std::size_t r = 0; r < pieces.size(); ++r) {
      const Piece& p = pieces[r];
      const double rowf = std::sqrt(p.coord_sq);
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        const double y = sigma.position(j);
        if (p.fiv.contains(y)) continue;  // h 1_{F^c}
        const double d = p.wiv.length + std::abs(y - p.wiv.center());
        A[r * sigma.size() + j] = rowf * std::sqrt(sigma.mass_at(j)) / (d * d);
      }
    }
    out.direct = sigma_max(A, pieces.size(), sigma.size());
  }

  // (b) enlarged positive kernel and its two testing constants.
  out.rows = omega.size();
  out.cols = sigma.size();
  out.khat.assign(out.rows * out.cols, 0.0);
  for (std::size_t x = 0; x < out.rows; ++x)
    for (std::size_t j = 0; j < out.cols; ++j) {
      double k = 0.0;
      for (const Piece& p : pieces) {
        const double d =
            p.wiv.length + std::abs(sigma.position(j) - p.wiv.center());
        k += p.abs_proj[x] / (d * d);
      }
      out.khat[x * out.cols + j] = k;
    }
  const auto scan = scan_intervals(grid, cfg.tail_doublings);
  for (const Interval& I : scan.ivs) {
    const double mS = mass(sigma, I), mW = mass(omega, I);
    if (mS > 0.0) {
      double norm2 = 0.0;
      for (std::size_t x = 0; x < out.rows; ++x) {
        if (!I.contains(omega.position(x))) continue;
        double t = 0.0;
        for (std::size_t j = 0; j < out.cols; ++j)
          if (I.contains(sigma.position(j)))
            t += sigma.mass_at(j) * out.khat[x * out.cols + j];
        norm2 += omega.mass_at(x) * t * t;
      }
      out.khat_fwd = std::max(out.khat_fwd, std::sqrt(norm2 / mS));
    }
    if (mW > 0.0) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < out.cols; ++j) {
        if (!I.contains(sigma.position(j))) continue;
        double t = 0.0;
        for (std::size_t x = 0; x < out.rows; ++x)
          if (I.contains(omega.position(x)))
            t += omega.mass_at(x) * out.khat[x * out.cols + j];
        norm2 += sigma.mass_at(j) * t * t;
      }
      out.khat_bwd = std::max(out.khat_bwd, std::sqrt(norm2 / mW));
    }
  }
  out.value = std::max(out.direct, std::max(out.khat_fwd, out.khat_bwd));
  return out;
}

CharacteristicReport characteristic_report(const DiscreteMeasure& sigma,
                                           const DiscreteMeasure& omega,
                                           const Grid& grid,
                                           const GridConfig& cfg,
                                           const Truncation& trunc,
                                           const StoppingForest& forest,
                                           bool local_tails) {
  CharacteristicReport r;
  r.a2_offset = a2_offset(sigma, omega, grid, cfg);
  r.a2_hole = a2_hole(sigma, omega, grid, cfg);
  r.a2_twotailed = a2_twotailed(sigma, omega, grid, cfg, local_tails);
  r.testing_fwd = testing(sigma, omega, grid, cfg, trunc, false);
  r.testing_bwd = testing(omega, sigma, grid, cfg, trunc, false);
  r.testing_local = testing(sigma, omega, grid, cfg, trunc, true);
  r.weak_bdd = weak_boundedness(sigma, omega, grid, cfg, trunc);
  r.energy_fwd = energy_char(sigma, omega, grid);
  r.energy_bwd = energy_char(omega, sigma, grid);
  r.pe = pe_characteristic(forest, sigma, omega, cfg);
  r.func_energy = functional_energy(forest, sigma, omega, grid, cfg);
  return r;
}

}  // namespace twoweight
