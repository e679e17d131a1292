#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twoweight/dyadic.hpp"
#include "twoweight/haar.hpp"
#include "twoweight/measure.hpp"

namespace twoweight {

// Why a candidate entered the stopping collection.
enum CriterionFired : int {
  kFiredNone = 0,
  kFiredEnergy = 1,
  kFiredAverage = 2,
};

struct ForestNode {
  Dyad iv;
  int parent = -1;  // index into nodes, -1 for the top
  double alpha = 0.0;
  int fired = kFiredNone;
  int level = -1;  // dual-tree construction level, -1 when not applicable
};

// A stopping collection organized as a tree under inclusion. The top interval
// is always a member; coronas partition the dyadic subtree of the top.
class StoppingForest {
 public:
  StoppingForest(const Grid* grid, Dyad top);

  const Grid& grid() const { return *grid_; }
  Dyad top() const { return nodes_[0].iv; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<ForestNode>& nodes() const { return nodes_; }
  ForestNode& node(int i) { return nodes_[i]; }
  const ForestNode& node(int i) const { return nodes_[i]; }

  // Adds a member; its parent is the smallest existing member containing it.
  // Members must be inserted top-down (parents before descendants).
  int add(Dyad iv, int fired = kFiredNone, int level = -1);

  int find(Dyad iv) const;             // index or -1
  int pi0(Dyad K) const;               // smallest member containing K, -1 if none
  int pi(int index) const;             // forest parent
  int pi_s(Dyad K, int s) const;       // s-fold forest parent of pi0(K)
  std::vector<int> children_of(int index) const;
  std::vector<int> generation(int index, int m) const;

  // Members of the corona C(F): every dyad in the subtree of the top whose
  // smallest containing member is nodes_[index].
  std::vector<Dyad> corona_members(int index) const;

  std::string serialize() const;  // indented tree of n:k with alpha and tags

  bool irreducible = false;  // set by build_U when mu_g is Gamma-irreducible
  bool top_organic = false;  // dual-tree top fired rather than added by fiat
  std::vector<std::vector<Dyad>> levels;  // dual-tree T_0..T_{N+1}

 private:
  const Grid* grid_;
  std::vector<ForestNode> nodes_;
};

struct CoronaLog {
  std::vector<Dyad> skipped_zero_mass;  // candidates with |I'|_sigma = 0
};

// CZ-PE stopping times for top interval T: children are the maximal good
// subintervals where either the Poisson-energy criterion
//   P(I', 1_{F\I'} sigma)^2 E(I', omega)^2 |I'|_omega / |I'|_sigma > Gamma
// or the average criterion
//   E_{I'}|P_{D[F]} f| > 4 E_F|P_{D[F]} f|
// fires. alpha_F(F) = sup over forest ancestors G of E_G|P_{D[pi G]} f|.
StoppingForest cz_pe_stopping(std::span<const double> f,
                              const DiscreteMeasure& sigma,
                              const DiscreteMeasure& omega, const Grid& grid,
                              double gamma, const GridConfig& cfg,
                              CoronaLog* log = nullptr);

// max over members S with |S|_sigma > 0 of
// sum_{F member, F inside S} |F|_sigma / |S|_sigma.
double carleson_norm(const StoppingForest& forest,
                     const DiscreteMeasure& sigma);

struct DecayReport {
  // rho[m] = max over members F of (generation-m sigma mass)/(|F|_sigma).
  std::vector<double> rho;
};

DecayReport decay_report(const StoppingForest& forest,
                         const DiscreteMeasure& sigma);

// sum |F|_sigma alpha(F)^2 / ||f||^2.
double quasi_orthogonality(const StoppingForest& forest,
                           std::span<const double> f,
                           const DiscreteMeasure& sigma);

// ---- generic rooted trees and the dual stopping-time decomposition ----

struct RootedTree {
  std::vector<int> parent;  // parent[0] == -1, parent[i] < i
  std::vector<std::vector<int>> children;

  static RootedTree from_parents(std::vector<int> parents);
  std::size_t size() const { return parent.size(); }
};

// I* mu(alpha): total mu over the subtree of alpha (alpha included).
double istar(const RootedTree& tree, std::span<const double> mu, int alpha);

struct TreeDecomposition {
  bool irreducible = false;
  bool top_organic = false;          // the root itself fired
  std::vector<std::vector<int>> levels;  // T_0 .. T_{N+1}, each sorted
  // The freshly fired subset of each level; the rest of a level is carried
  // forward from the previous one (points no fresh element dominates).
  std::vector<std::vector<int>> fresh;
};

// Bottom-up stopping times of Lemma-style dual tree decomposition: T_0 is the
// set of minimal support elements; T_{n+1} collects the minimal alpha lying
// strictly above some T_n element with
//   I*mu(alpha) > Gamma * sum of I*mu(beta) over beta in T_n strictly below.
// When no element ever fires the measure is Gamma-irreducible.
TreeDecomposition dual_tree_decompose(const RootedTree& tree,
                                      std::span<const double> mu,
                                      double gamma);

struct TreeDecompositionCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

// Verifies the defining inequalities and both Carleson-small bounds
// on a built decomposition (quantifiers restricted to candidates that lie
// strictly above the previous stopping time).
TreeDecompositionCheck verify_tree_decomposition(const RootedTree& tree,
                                                 std::span<const double> mu,
                                                 double gamma,
                                                 const TreeDecomposition& dec);

// ---- the bottom-up U[F] construction ----

struct UBuild {
  StoppingForest forest;
  bool irreducible = false;
  TreeDecomposition dec;
  std::vector<Dyad> tree_nodes;  // BFS order of the dyadic subtree of F
};

// Runs the dual tree decomposition on the dyadic subtree of F with
// mu_g(J) = ||Delta_J^omega Z||^2 on Lambda_g and Gamma = 1 + theta;
// members are the union of all stopping levels plus F.
UBuild build_U(Dyad F, std::span<const Dyad> lambda_g,
               const DiscreteMeasure& omega, double theta, const Grid& grid,
               const GridConfig& cfg);

struct UGuaranteeCheck {
  bool ok = true;
  std::vector<std::string> violations;
  int tight_checked = 0;
  int geo_checked = 0;
};

// Post-hoc verification of the (tight) corona bound and of geometric decay
// along full stopping-time chains (ratio (1+theta)^-m).
UGuaranteeCheck verify_U_guarantees(const UBuild& u,
                                    std::span<const Dyad> lambda_g,
                                    const DiscreteMeasure& omega, double theta,
                                    const Grid& grid, const GridConfig& cfg);

}  // namespace twoweight
