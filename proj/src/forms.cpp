#include "twoweight/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twoweight/haar.hpp"

namespace twoweight {

std::size_t PairClassification::count(TopClass c) const {
  std::size_t n = 0;
  for (const auto& p : pairs)
    if (p.cls == c) ++n;
  return n;
}

PairClassification classify_pairs(std::span<const Dyad> lambda_f,
                                  std::span<const Dyad> lambda_g,
                                  const StoppingForest& forest,
                                  const GridConfig& cfg) {
  const Grid& grid = forest.grid();
  PairClassification out;
  std::vector<Dyad> lf(lambda_f.begin(), lambda_f.end());
  std::vector<Dyad> lg(lambda_g.begin(), lambda_g.end());
  std::sort(lf.begin(), lf.end());
  std::sort(lg.begin(), lg.end());
  for (const Dyad& I : lf)
    for (const Dyad& J : lg) {
      ClassifiedPair p;
      p.I = I;
      p.J = J;
      if (grid.contains(I, J)) {
        p.cls = J.n - I.n >= cfg.tau ? TopClass::Below
                                     : TopClass::ComparableBelow;
      } else if (grid.contains(J, I)) {
        p.cls = I.n - J.n >= cfg.tau ? TopClass::Above
                                     : TopClass::ComparableAbove;
      } else {
        p.cls = TopClass::Disjoint;
      }
      p.f_corona = forest.pi0(I);
      p.g_corona = forest.pi0(J);
      if (p.f_corona < 0 || p.g_corona < 0)
        throw std::runtime_error("classify_pairs: interval outside the forest");
      out.pairs.push_back(p);
    }
  return out;
}

DiffCache::DiffCache(std::span<const double> f, const DiscreteMeasure& mu,
                     const Grid& grid, std::span<const Dyad> support) {
  for (const Dyad& I : support) diffs_.emplace(I, haar_diff(f, mu, grid, I));
}

const HaarDifference& DiffCache::at(Dyad I) const {
  auto it = diffs_.find(I);
  if (it == diffs_.end())
    throw std::runtime_error("DiffCache: interval not cached");
  return it->second;
}

namespace {

// Value of Delta_I f on the child of I containing J (it is constant there).
double child_average(const Grid& grid, const HaarDifference& d,
                     const DiscreteMeasure& sigma, Dyad I, Dyad J) {
  const Dyad cj = grid.child_containing(I, J);
  const Interval civ = grid.interval(cj);
  auto [a, b] = sigma.range(civ.left, civ.right());
  if (a < b) return d.values[a];
  return 0.0;  // child carries no sigma-atoms; the restriction vanishes
}

std::vector<double> restrict_to(const std::vector<double>& values,
                                const DiscreteMeasure& sigma,
                                const Interval& iv) {
  std::vector<double> out(values.size(), 0.0);
  auto [a, b] = sigma.range(iv.left, iv.right());
  for (std::size_t i = a; i < b; ++i) out[i] = values[i];
  return out;
}

std::vector<double> scaled_indicator(const DiscreteMeasure& sigma,
                                     const Interval& iv, double scale) {
  std::vector<double> out(sigma.size(), 0.0);
  auto [a, b] = sigma.range(iv.left, iv.right());
  for (std::size_t i = a; i < b; ++i) out[i] = scale;
  return out;
}

std::vector<double> scaled_annulus(const DiscreteMeasure& sigma,
                                   const Interval& outer, const Interval& hole,
                                   double scale) {
  std::vector<double> out(sigma.size(), 0.0);
  auto [a, b] = sigma.range(outer.left, outer.right());
  for (std::size_t i = a; i < b; ++i)
    if (!hole.contains(sigma.position(i))) out[i] = scale;
  return out;
}

double pair_term(const ClassifiedPair& p, const DiffCache& df,
                 const DiffCache& dg, const StoppingForest& forest,
                 const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
                 const Truncation& trunc, FormMode mode) {
  const Grid& grid = forest.grid();
  const HaarDifference& dI = df.at(p.I);
  const HaarDifference& dJ = dg.at(p.J);
  switch (mode) {
    case FormMode::Full:
      return hilbert_pairing(dI.values, dJ.values, sigma, omega, trunc);
    case FormMode::HomeChild: {
      const Interval c = grid.interval(grid.child_containing(p.I, p.J));
      return hilbert_pairing(restrict_to(dI.values, sigma, c), dJ.values,
                             sigma, omega, trunc);
    }
    case FormMode::NeighbourChild: {
      const Interval c =
          grid.interval(grid.sibling(grid.child_containing(p.I, p.J)));
      return hilbert_pairing(restrict_to(dI.values, sigma, c), dJ.values,
                             sigma, omega, trunc);
    }
    case FormMode::CoronaTop: {
      const double e = child_average(grid, dI, sigma, p.I, p.J);
      if (e == 0.0) return 0.0;
      const Interval F = grid.interval(forest.node(p.f_corona).iv);
      return hilbert_pairing(scaled_indicator(sigma, F, e), dJ.values, sigma,
                             omega, trunc);
    }
    case FormMode::StopComplement: {
      const double e = child_average(grid, dI, sigma, p.I, p.J);
      if (e == 0.0) return 0.0;
      const Interval F = grid.interval(forest.node(p.f_corona).iv);
      const Interval c = grid.interval(grid.child_containing(p.I, p.J));
      return hilbert_pairing(scaled_annulus(sigma, F, c, -e), dJ.values,
                             sigma, omega, trunc);
    }
  }
  return 0.0;
}

}  // namespace

double form_value(std::span<const ClassifiedPair> pairs, const DiffCache& df,
                  const DiffCache& dg, const StoppingForest& forest,
                  const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
                  const Truncation& trunc, FormMode mode) {
  double s = 0.0;
  for (const auto& p : pairs)
    s += pair_term(p, df, dg, forest, sigma, omega, trunc, mode);
  return s;
}

ReachSplit ntv_reach_split(int F_index, std::span<const ClassifiedPair> pairs,
                           const DiffCache& df, const DiffCache& dg,
                           const StoppingForest& forest,
                           const DiscreteMeasure& sigma,
                           const DiscreteMeasure& omega,
                           const Truncation& trunc) {
  ReachSplit out;
  for (const auto& p : pairs) {
    if (p.cls != TopClass::Below || p.f_corona != F_index ||
        p.g_corona != F_index)
      continue;
    out.para += pair_term(p, df, dg, forest, sigma, omega, trunc,
                          FormMode::CoronaTop);
    out.stop += pair_term(p, df, dg, forest, sigma, omega, trunc,
                          FormMode::StopComplement);
    out.diag += pair_term(p, df, dg, forest, sigma, omega, trunc,
                          FormMode::HomeChild);
  }
  return out;
}

std::vector<ParaCoefficient> paraproduct_coefficients(
    const StoppingForest& forest, int F_index, std::span<const double> f,
    std::span<const Dyad> lambda_f, const DiscreteMeasure& sigma,
    std::span<const Dyad> js, int cutoff) {
  const Grid& grid = forest.grid();
  const Dyad F = forest.node(F_index).iv;
  const Interval Fiv = grid.interval(F);
  const double ef = expectation(f, sigma, Fiv).value;
  std::vector<ParaCoefficient> out;
  for (const Dyad& J : js) {
    ParaCoefficient pc;
    pc.J = J;
    if (J.n - F.n >= cutoff) {
      // The literal sum telescopes from the lowest tower interval whose
      // martingale difference is nondegenerate (both children carry mass);
      // purely one-sided levels pass their average through unchanged.
      const Dyad bottom = grid.ancestor(J, J.n - cutoff);
      Dyad start{};
      bool found = false;
      for (Dyad I = bottom;;) {
        auto [lo, hi] = grid.children(I);
        if (mass(sigma, grid.interval(lo)) > 0.0 &&
            mass(sigma, grid.interval(hi)) > 0.0) {
          start = grid.child_containing(I, J);
          found = true;
          break;
        }
        if (I == F || I.n == 0) break;
        I = grid.parent(I);
      }
      if (found) {
        pc.lambda =
            expectation(f, sigma, grid.interval(start)).value - ef;
        pc.telescoped_to_top = true;
        for (const Dyad& I : lambda_f)
          if (forest.pi0(I) == F_index && grid.contains(I, bottom))
            pc.telescoped_to_top = false;
      }
    }
    out.push_back(pc);
  }
  return out;
}

ParaIdentity paraproduct_identity(const StoppingForest& forest, int F_index,
                                  std::span<const double> f,
                                  std::span<const Dyad> lambda_f,
                                  const DiffCache& df, const DiffCache& dg,
                                  std::span<const Dyad> lambda_g,
                                  const DiscreteMeasure& sigma,
                                  const DiscreteMeasure& omega,
                                  const Truncation& trunc, int cutoff) {
  ParaIdentity out;
  const Grid& grid = forest.grid();
  const Dyad F = forest.node(F_index).iv;
  const Interval Fiv = grid.interval(F);

  std::vector<Dyad> js;
  for (const Dyad& J : lambda_g)
    if (forest.pi0(J) == F_index) js.push_back(J);
  if (js.empty()) return out;

  // Route 1: literal pair sum over I in the corona with the depth cutoff.
  for (const Dyad& J : js) {
    for (const Dyad& I : lambda_f) {
      if (forest.pi0(I) != F_index) continue;
      if (!grid.contains(I, J) || J.n - I.n < cutoff) continue;
      const double e = child_average(grid, df.at(I), sigma, I, J);
      if (e == 0.0) continue;
      out.pair_sum += hilbert_pairing(scaled_indicator(sigma, Fiv, e),
                                      dg.at(J).values, sigma, omega, trunc);
    }
  }

  // Route 2: telescoped coefficients.
  const auto coeffs =
      paraproduct_coefficients(forest, F_index, f, lambda_f, sigma, js, cutoff);
  std::vector<double> acc(omega.size(), 0.0);
  const double alpha = forest.node(F_index).alpha;
  for (const auto& pc : coeffs) {
    if (pc.lambda == 0.0) continue;
    if (alpha > 0.0)
      out.max_lambda_over_alpha =
          std::max(out.max_lambda_over_alpha, std::abs(pc.lambda) / alpha);
    const auto& dJ = dg.at(pc.J).values;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pc.lambda * dJ[i];
  }
  out.coefficient_form = hilbert_pairing(
      scaled_indicator(sigma, Fiv, 1.0), acc, sigma, omega, trunc);
  return out;
}

Intertwining intertwining(const StoppingForest& forest, const DiffCache& df,
                          const DiffCache& dg, std::span<const Dyad> lambda_f,
                          std::span<const Dyad> lambda_g,
                          const DiscreteMeasure& sigma,
                          const DiscreteMeasure& omega, const Grid& grid,
                          const Truncation& trunc, const GridConfig& cfg) {
  Intertwining out;
  for (std::size_t fi = 0; fi < forest.size(); ++fi) {
    const Dyad F = forest.node(fi).iv;
    if (F.n == 0) continue;  // no I strictly above the root in the grid
    std::vector<Dyad> js;
    for (const Dyad& J : lambda_g)
      if (forest.pi0(J) == static_cast<int>(fi)) js.push_back(J);

    // g_F = sum of Delta_J g over the corona's Haar support.
    std::vector<double> gF(omega.size(), 0.0);
    for (const Dyad& J : js) {
      const auto& v = dg.at(J).values;
      for (std::size_t i = 0; i < gF.size(); ++i) gF[i] += v[i];
    }

    // f_F = sum over strict ancestors I of 1_{I_F} Delta_I f.
    std::vector<double> fF(sigma.size(), 0.0);
    for (const Dyad& I : lambda_f) {
      if (!(grid.contains(I, F)) || I == F) continue;
      const Interval child = grid.interval(grid.child_containing(I, F));
      const auto& v = df.at(I).values;
      auto [a, b] = sigma.range(child.left, child.right());
      for (std::size_t i = a; i < b; ++i) fF[i] += v[i];
    }
    if (!js.empty())
      out.inter += hilbert_pairing(fF, gF, sigma, omega, trunc);

    // constancy of f_F on F
    const Interval Fiv = grid.interval(F);
    auto [a, b] = sigma.range(Fiv.left, Fiv.right());
    for (std::size_t i = a; i < b; ++i)
      for (std::size_t j = a; j < b; ++j)
        out.max_ff_deviation =
            std::max(out.max_ff_deviation, std::abs(fF[i] - fF[j]));

    // The exact residual of B_far - B_Inter: pairs with J too shallow for
    // the below cutoff relative to I drop out of the far form only.
    for (const Dyad& I : lambda_f) {
      if (!(grid.contains(I, F)) || I == F) continue;
      const Interval child = grid.interval(grid.child_containing(I, F));
      const auto& v = df.at(I).values;
      std::vector<double> phi(sigma.size(), 0.0);
      auto [c, d] = sigma.range(child.left, child.right());
      for (std::size_t i = c; i < d; ++i) phi[i] = v[i];
      for (const Dyad& J : js) {
        if (J.n - I.n >= cfg.tau) continue;  // kept by the far form
        out.difference_direct -=
            hilbert_pairing(phi, dg.at(J).values, sigma, omega, trunc);
      }
    }
  }
  return out;
}

StoppingChild stopping_child_form(const StoppingForest& main_forest,
                                  int F_index, const StoppingForest& a_forest,
                                  int A_index, std::span<const double> f,
                                  const DiffCache& df, const DiffCache& dg,
                                  std::span<const Dyad> lambda_f,
                                  std::span<const Dyad> lambda_g,
                                  const DiscreteMeasure& sigma,
                                  const DiscreteMeasure& omega,
                                  const Grid& grid, const GridConfig& cfg,
                                  const Truncation& trunc) {
  StoppingChild out;
  const Dyad A = a_forest.node(A_index).iv;
  const Dyad F = main_forest.node(F_index).iv;
  const Interval Fiv = grid.interval(F);

  double alpha_mass_sum = 0.0;
  for (int si : a_forest.children_of(A_index)) {
    const Dyad S = a_forest.node(si).iv;
    const Interval Siv = grid.interval(S);
    // smallest Haar-support interval containing S (fallback: S itself)
    Dyad lam_s = S;
    bool found = false;
    for (const Dyad& L : lambda_f)
      if (grid.contains(L, S) && (!found || L.n > lam_s.n)) {
        lam_s = L;
        found = true;
      }
    // alpha_A(S) = sup over good towers (lam_s, A] of |E_I f|
    double alpha = 0.0;
    for (Dyad I = lam_s; I.n > A.n; I = grid.parent(I)) {
      if (!grid.is_good(I, cfg)) continue;
      const auto e = expectation(f, sigma, grid.interval(I));
      if (!e.zero_mass) alpha = std::max(alpha, std::abs(e.value));
    }
    alpha_mass_sum += mass(sigma, Siv) * alpha * alpha;

    for (const Dyad& J : lambda_g) {
      if (!grid.contains(S, J)) continue;
      if (J.n - lam_s.n < cfg.tau) continue;  // J subset_tau Lambda_f[S]
      // phi_J^S = sum over I strictly above S, I inside the tower
      // (Lambda_f[S], A], of (E_{I_J} Delta_I f) 1_{F \ I_J}.
      std::vector<double> phi(sigma.size(), 0.0);
      for (Dyad I = grid.parent(S); I.n > A.n; I = grid.parent(I)) {
        if (I.n > lam_s.n) continue;  // below the tower bottom
        const auto it = std::find(lambda_f.begin(), lambda_f.end(), I);
        if (it == lambda_f.end()) continue;
        const HaarDifference& dI = df.at(I);
        const double e = child_average(grid, dI, sigma, I, J);
        if (e == 0.0) continue;
        const Interval child = grid.interval(grid.child_containing(I, J));
        const auto annulus = scaled_annulus(sigma, Fiv, child, e);
        for (std::size_t t = 0; t < phi.size(); ++t) phi[t] += annulus[t];
        out.value_pair_sum +=
            hilbert_pairing(annulus, dg.at(J).values, sigma, omega, trunc);
      }
      out.value += hilbert_pairing(phi, dg.at(J).values, sigma, omega, trunc);
      // support facts
      auto [a, b] = sigma.range(Siv.left, Siv.right());
      for (std::size_t t = a; t < b; ++t)
        out.max_phi_on_S = std::max(out.max_phi_on_S, std::abs(phi[t]));
      if (alpha > 0.0)
        for (std::size_t t = 0; t < phi.size(); ++t)
          if (!Siv.contains(sigma.position(t)))
            out.phi_bound_const =
                std::max(out.phi_bound_const, std::abs(phi[t]) / alpha);
    }
  }

  const double pe_trip =
      refined_trip_char(main_forest, F_index, a_forest, A_index, lambda_g,
                        sigma, omega, cfg)
          .value;
  std::vector<double> gvec(omega.size(), 0.0);
  const double ng = [&] {
    double s = 0.0;
    for (const Dyad& J : lambda_g) {
      const auto& v = dg.at(J).values;
      for (std::size_t i = 0; i < gvec.size(); ++i) gvec[i] += v[i];
    }
    s = l2_norm_sq(gvec, omega);
    return std::sqrt(s);
  }();
  const double denom = pe_trip * std::sqrt(alpha_mass_sum) * ng;
  if (denom > 0.0) out.straddle_const = std::abs(out.value) / denom;
  return out;
}

StopDecomposition stop_decompose(int F_index,
                                 std::span<const ClassifiedPair> pairs,
                                 std::span<const double> f,
                                 std::span<const double> g,
                                 const DiffCache& df, const DiffCache& dg,
                                 std::span<const Dyad> lambda_g,
                                 const StoppingForest& forest,
                                 const DiscreteMeasure& sigma,
                                 const DiscreteMeasure& omega,
                                 const GridConfig& cfg,
                                 const Truncation& trunc) {
  StopDecomposition out;
  const Grid& grid = forest.grid();
  const Dyad F = forest.node(F_index).iv;

  std::vector<Dyad> lg_F;
  for (const Dyad& J : lambda_g)
    if (forest.pi0(J) == F_index) lg_F.push_back(J);

  const UBuild u = build_U(F, lg_F, omega, cfg.theta, grid, cfg);
  out.irreducible = u.irreducible;

  std::vector<ClassifiedPair> stop_pairs;
  for (const auto& p : pairs)
    if (p.cls == TopClass::Below && p.f_corona == F_index &&
        p.g_corona == F_index)
      stop_pairs.push_back(p);

  std::map<Dyad, double> per_minimal;
  for (const auto& p : stop_pairs) {
    const double term = pair_term(p, df, dg, forest, sigma, omega, trunc,
                                  FormMode::StopComplement);
    const int ui = u.forest.pi0(p.I);
    const int uj = u.forest.pi0(p.J);
    if (ui == uj) {
      out.diagstop += term;
      if (u.forest.children_of(uj).empty() && uj != 0)
        per_minimal[u.forest.node(uj).iv] += term;
    } else {
      out.farstop += term;
    }
  }
  for (const auto& [iv, v] : per_minimal)
    out.minimal_U_contribution =
        std::max(out.minimal_U_contribution, std::abs(v));

  // measured Theta and the fixed-point report
  const double pe_size =
      size_functional(forest, F_index, lg_F, sigma, omega, cfg).value;
  const double nf = std::sqrt(l2_norm_sq(f, sigma));
  const double ngv = std::sqrt(l2_norm_sq(g, omega));
  const double denom = pe_size * nf * ngv;
  if (denom > 0.0) {
    out.theta_measured = std::abs(out.diagstop + out.farstop) / denom;
    out.two_c_measured =
        (std::abs(out.diagstop) + std::abs(out.farstop)) / denom;
    out.fixed_point_bound = out.two_c_measured / (1.0 - cfg.theta);
  }

  // claim-theta ratio: for good corona members K of F, compare the no-top
  // Haar mass inside K against the full one.
  if (!u.irreducible) {
    std::map<Dyad, double> mu;
    for (const Dyad& J : lg_F) mu[J] = coordinate_energy(grid, J, omega);
    for (const Dyad& K : forest.corona_members(F_index)) {
      if (!grid.is_good(K, cfg)) continue;
      double full = 0.0;
      for (const auto& [J, m] : mu)
        if (grid.contains(K, J)) full += m;
      if (!(full > 0.0)) continue;
      double notop = 0.0;
      for (const auto& [J, m] : mu) {
        if (!grid.contains(K, J)) continue;
        const int uj = u.forest.pi0(J);
        if (uj >= 0 && !(u.forest.node(uj).iv == J)) notop += m;
      }
      out.tight_ratio =
          std::max(out.tight_ratio, std::sqrt(notop / full));
    }
  }
  return out;
}

FormLedger compute_ledger(std::span<const double> f, std::span<const double> g,
                          std::span<const Dyad> lambda_f,
                          std::span<const Dyad> lambda_g,
                          const DiscreteMeasure& sigma,
                          const DiscreteMeasure& omega,
                          const StoppingForest& forest, const Grid& grid,
                          const GridConfig& cfg, const Truncation& trunc) {
  FormLedger led;
  const DiffCache df(f, sigma, grid, lambda_f);
  const DiffCache dg(g, omega, grid, lambda_g);
  const auto cls = classify_pairs(lambda_f, lambda_g, forest, cfg);

  led.total = hilbert_bilinear(f, g, sigma, omega, trunc);

  auto class_pairs = [&](TopClass c) {
    std::vector<ClassifiedPair> out;
    for (const auto& p : cls.pairs)
      if (p.cls == c) out.push_back(p);
    return out;
  };
  const auto below_pairs = class_pairs(TopClass::Below);
  led.below = form_value(below_pairs, df, dg, forest, sigma, omega, trunc,
                         FormMode::Full);
  led.above = form_value(class_pairs(TopClass::Above), df, dg, forest, sigma,
                         omega, trunc, FormMode::Full);
  led.disjoint = form_value(class_pairs(TopClass::Disjoint), df, dg, forest,
                            sigma, omega, trunc, FormMode::Full);
  led.comparable = form_value(class_pairs(TopClass::ComparableBelow), df, dg,
                              forest, sigma, omega, trunc, FormMode::Full);
  led.comparable_star =
      form_value(class_pairs(TopClass::ComparableAbove), df, dg, forest,
                 sigma, omega, trunc, FormMode::Full);
  led.n_below = below_pairs.size();
  led.n_above = cls.count(TopClass::Above);
  led.n_disjoint = cls.count(TopClass::Disjoint);
  led.n_comparable = cls.count(TopClass::ComparableBelow);
  led.n_comparable_star = cls.count(TopClass::ComparableAbove);

  led.home = form_value(below_pairs, df, dg, forest, sigma, omega, trunc,
                        FormMode::HomeChild);
  led.neigh = form_value(below_pairs, df, dg, forest, sigma, omega, trunc,
                         FormMode::NeighbourChild);

  std::vector<ClassifiedPair> diag_pairs, far_pairs;
  for (const auto& p : below_pairs)
    (p.f_corona == p.g_corona ? diag_pairs : far_pairs).push_back(p);
  led.n_diag = diag_pairs.size();
  led.n_far = far_pairs.size();
  led.diag = form_value(diag_pairs, df, dg, forest, sigma, omega, trunc,
                        FormMode::HomeChild);
  led.far = form_value(far_pairs, df, dg, forest, sigma, omega, trunc,
                       FormMode::HomeChild);

  for (std::size_t fi = 0; fi < forest.size(); ++fi) {
    const auto split = ntv_reach_split(static_cast<int>(fi), cls.pairs, df, dg,
                                       forest, sigma, omega, trunc);
    led.para += split.para;
    led.stop += split.stop;
    const auto sd =
        stop_decompose(static_cast<int>(fi), cls.pairs, f, g, df, dg,
                       lambda_g, forest, sigma, omega, cfg, trunc);
    led.diagstop += sd.diagstop;
    led.farstop += sd.farstop;
    led.minimal_U_contribution =
        std::max(led.minimal_U_contribution, sd.minimal_U_contribution);
    led.per_corona_stop.push_back(sd);
  }

  const auto itw = intertwining(forest, df, dg, lambda_f, lambda_g, sigma,
                                omega, grid, trunc, cfg);
  led.inter = itw.inter;
  led.difference_direct = itw.difference_direct;
  led.max_ff_deviation = itw.max_ff_deviation;

  led.scale = std::max({std::abs(led.total), std::abs(led.below),
                        std::abs(led.above), std::abs(led.disjoint),
                        std::abs(led.comparable),
                        std::abs(led.comparable_star), 1e-300});
  const double five = led.below + led.above + led.disjoint + led.comparable +
                      led.comparable_star;
  led.residual_grand = std::abs(five - led.total) / led.scale;
  led.residual_below_split =
      std::abs(led.home + led.neigh - led.below) / led.scale;
  led.residual_home_split =
      std::abs(led.diag + led.far - led.home) / led.scale;
  led.residual_reach_split =
      std::abs(led.para + led.stop - led.diag) / led.scale;
  led.residual_stop_split =
      std::abs(led.diagstop + led.farstop - led.stop) / led.scale;
  led.residual_intertwining =
      std::abs((led.far - led.inter) - led.difference_direct) / led.scale;
  return led;
}

}  // namespace twoweight
