#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "twoweight/characteristics.hpp"
#include "twoweight/corona.hpp"
#include "twoweight/dyadic.hpp"
#include "twoweight/hilbert.hpp"

namespace twoweight {

enum class TopClass { Below, Above, Disjoint, ComparableBelow, ComparableAbove };

struct ClassifiedPair {
  Dyad I, J;
  TopClass cls = TopClass::Disjoint;
  int f_corona = -1;  // forest corona of I
  int g_corona = -1;  // forest corona of J
};

struct PairClassification {
  std::vector<ClassifiedPair> pairs;  // lexicographic in (I, J)
  std::size_t count(TopClass c) const;
};

// Every (I, J) in Lambda_f x Lambda_g lands in exactly one class:
// below/above use the strict tau cutoff, the comparable classes take the
// complements within nesting, disjoint pairs the rest.
PairClassification classify_pairs(std::span<const Dyad> lambda_f,
                                  std::span<const Dyad> lambda_g,
                                  const StoppingForest& forest,
                                  const GridConfig& cfg);

// Indicator inserted against Delta_I f in a pair term.
enum class FormMode {
  Full,            // <H(Delta_I f), Delta_J g>
  HomeChild,       // 1_{I_J}
  NeighbourChild,  // 1_{theta(I_J)}
  CoronaTop,       // (E_{I_J} Delta_I f) <H 1_F, .>
  StopComplement,  // -(E_{I_J} Delta_I f) <H 1_{F \ I_J}, .>
};

// Cache of the Haar differences the pair sums consume.
class DiffCache {
 public:
  DiffCache(std::span<const double> f, const DiscreteMeasure& mu,
            const Grid& grid, std::span<const Dyad> support);
  const HaarDifference& at(Dyad I) const;

 private:
  std::map<Dyad, HaarDifference> diffs_;
};

double form_value(std::span<const ClassifiedPair> pairs,
                  const DiffCache& df, const DiffCache& dg,
                  const StoppingForest& forest, const DiscreteMeasure& sigma,
                  const DiscreteMeasure& omega, const Truncation& trunc,
                  FormMode mode);

// B_diag^F = B_para^F + B_stop^F via 1_{I_J} = 1_F - 1_{F\I_J}.
struct ReachSplit {
  double para = 0.0;
  double stop = 0.0;
  double diag = 0.0;
};
ReachSplit ntv_reach_split(int F_index,
                           std::span<const ClassifiedPair> pairs,
                           const DiffCache& df, const DiffCache& dg,
                           const StoppingForest& forest,
                           const DiscreteMeasure& sigma,
                           const DiscreteMeasure& omega,
                           const Truncation& trunc);

// Telescoped paraproduct coefficients lambda_J = E_{I#(J)_J} f - E_F f for
// J in the corona of F, with the given depth cutoff (the smallest admissible
// I has l(J) <= 2^-cutoff l(I)). Entries for J too shallow are zero.
struct ParaCoefficient {
  Dyad J;
  double lambda = 0.0;
  bool telescoped_to_top = false;  // no Haar-support interval qualified
};
std::vector<ParaCoefficient> paraproduct_coefficients(
    const StoppingForest& forest, int F_index, std::span<const double> f,
    std::span<const Dyad> lambda_f, const DiscreteMeasure& sigma,
    std::span<const Dyad> js, int cutoff);

// The same value assembled two ways: literal pair sum with the cutoff, and
// <H 1_F, sum lambda_J Delta_J g>.
struct ParaIdentity {
  double pair_sum = 0.0;
  double coefficient_form = 0.0;
  double max_lambda_over_alpha = 0.0;
};
ParaIdentity paraproduct_identity(const StoppingForest& forest, int F_index,
                                  std::span<const double> f,
                                  std::span<const Dyad> lambda_f,
                                  const DiffCache& df, const DiffCache& dg,
                                  std::span<const Dyad> lambda_g,
                                  const DiscreteMeasure& sigma,
                                  const DiscreteMeasure& omega,
                                  const Truncation& trunc, int cutoff);

struct Intertwining {
  double inter = 0.0;
  double difference_direct = 0.0;  // independent triple sum
  double max_ff_deviation = 0.0;   // constancy of f_F on F, per corona
};
Intertwining intertwining(const StoppingForest& forest, const DiffCache& df,
                          const DiffCache& dg, std::span<const Dyad> lambda_f,
                          std::span<const Dyad> lambda_g,
                          const DiscreteMeasure& sigma,
                          const DiscreteMeasure& omega, const Grid& grid,
                          const Truncation& trunc, const GridConfig& cfg);

struct StoppingChild {
  double value = 0.0;
  double value_pair_sum = 0.0;  // independent assembly
  double max_phi_on_S = 0.0;    // must vanish
  double phi_bound_const = 0.0; // max |phi_J^S| / alpha_A(S) off S
  double straddle_const = 0.0;  // |B| / (PE_trip sqrt(sum |S| alpha^2) ||g||)
};
StoppingChild stopping_child_form(const StoppingForest& main_forest,
                                  int F_index, const StoppingForest& a_forest,
                                  int A_index, std::span<const double> f,
                                  const DiffCache& df, const DiffCache& dg,
                                  std::span<const Dyad> lambda_f,
                                  std::span<const Dyad> lambda_g,
                                  const DiscreteMeasure& sigma,
                                  const DiscreteMeasure& omega,
                                  const Grid& grid, const GridConfig& cfg,
                                  const Truncation& trunc);

struct StopDecomposition {
  double diagstop = 0.0;
  double farstop = 0.0;
  bool irreducible = false;
  double minimal_U_contribution = 0.0;  // diagstop mass at minimal members
  double theta_measured = 0.0;
  double two_c_measured = 0.0;
  double fixed_point_bound = 0.0;
  double tight_ratio = 0.0;  // max no-top/full sqrt coordinate-mass ratio
};
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
                                 const Truncation& trunc);

struct FormLedger {
  double total = 0.0;
  double below = 0.0, above = 0.0, disjoint = 0.0;
  double comparable = 0.0, comparable_star = 0.0;
  double home = 0.0, neigh = 0.0, diag = 0.0, far = 0.0;
  double para = 0.0, stop = 0.0, diagstop = 0.0, farstop = 0.0;
  double inter = 0.0, difference_direct = 0.0;
  std::size_t n_below = 0, n_above = 0, n_disjoint = 0;
  std::size_t n_comparable = 0, n_comparable_star = 0;
  std::size_t n_diag = 0, n_far = 0;
  double scale = 0.0;  // residuals are measured against this
  double residual_grand = 0.0;
  double residual_below_split = 0.0;
  double residual_home_split = 0.0;
  double residual_reach_split = 0.0;
  double residual_stop_split = 0.0;
  double residual_intertwining = 0.0;
  double max_ff_deviation = 0.0;
  double minimal_U_contribution = 0.0;
  std::vector<StopDecomposition> per_corona_stop;
  std::map<std::string, double> ratios;  // measured-constant table
};

FormLedger compute_ledger(std::span<const double> f, std::span<const double> g,
                          std::span<const Dyad> lambda_f,
                          std::span<const Dyad> lambda_g,
                          const DiscreteMeasure& sigma,
                          const DiscreteMeasure& omega,
                          const StoppingForest& forest, const Grid& grid,
                          const GridConfig& cfg, const Truncation& trunc);

}  // namespace twoweight
