#include "twoweight/corona.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace twoweight {

StoppingForest::StoppingForest(const Grid* grid, Dyad top) : grid_(grid) {
  nodes_.push_back(ForestNode{top, -1, 0.0, kFiredNone, -1});
}

int StoppingForest::add(Dyad iv, int fired, int level) {
  const int p = pi0(iv);
  if (p < 0) throw std::invalid_argument("forest: member outside the top");
  if (nodes_[p].iv == iv)
    throw std::invalid_argument("forest: duplicate member " + grid_->label(iv));
  nodes_.push_back(ForestNode{iv, p, 0.0, fired, level});
  return static_cast<int>(nodes_.size()) - 1;
}

int StoppingForest::find(Dyad iv) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].iv == iv) return static_cast<int>(i);
  return -1;
}

int StoppingForest::pi0(Dyad K) const {
  int best = -1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!grid_->contains(nodes_[i].iv, K)) continue;
    if (best < 0 || nodes_[i].iv.n > nodes_[best].iv.n)
      best = static_cast<int>(i);
  }
  return best;
}

int StoppingForest::pi(int index) const {
  return index <= 0 ? 0 : nodes_[index].parent;
}

int StoppingForest::pi_s(Dyad K, int s) const {
  int i = pi0(K);
  if (i < 0) return -1;
  for (int t = 0; t < s; ++t) i = pi(i);
  return i;
}

std::vector<int> StoppingForest::children_of(int index) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].parent == index) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> StoppingForest::generation(int index, int m) const {
  std::vector<int> cur{index};
  for (int t = 0; t < m; ++t) {
    std::vector<int> next;
    for (int i : cur)
      for (int c : children_of(i)) next.push_back(c);
    cur = std::move(next);
  }
  return cur;
}

std::vector<Dyad> StoppingForest::corona_members(int index) const {
  std::vector<Dyad> out;
  for (const Dyad& d : grid_->descendants(top()))
    if (pi0(d) == index) out.push_back(d);
  return out;
}

std::string StoppingForest::serialize() const {
  std::ostringstream os;
  // depth-first, children in (n,k) order
  std::vector<std::vector<int>> kids(nodes_.size());
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    kids[nodes_[i].parent].push_back(static_cast<int>(i));
  for (auto& k : kids)
    std::sort(k.begin(), k.end(), [&](int a, int b) {
      return nodes_[a].iv < nodes_[b].iv;
    });
  struct Item {
    int idx;
    int depth;
  };
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    const ForestNode& nd = nodes_[idx];
    for (int t = 0; t < depth; ++t) os << "  ";
    os << grid_->label(nd.iv) << "  alpha=" << nd.alpha;
    if (nd.fired & kFiredEnergy) os << " [energy]";
    if (nd.fired & kFiredAverage) os << " [average]";
    if (nd.level >= 0) os << " [level " << nd.level << "]";
    os << "\n";
    const auto& k = kids[idx];
    for (auto it = k.rbegin(); it != k.rend(); ++it)
      stack.push_back({*it, depth + 1});
  }
  return os.str();
}

// ---------------------------------------------------------------------------

StoppingForest cz_pe_stopping(std::span<const double> f,
                              const DiscreteMeasure& sigma,
                              const DiscreteMeasure& omega, const Grid& grid,
                              double gamma, const GridConfig& cfg,
                              CoronaLog* log) {
  const Dyad T = grid.root();
  if (!(mass(sigma, grid.interval(T)) > 0.0))
    throw std::invalid_argument("cz_pe_stopping: |T|_sigma = 0");
  if (!(gamma >= 1.0))
    throw std::invalid_argument("cz_pe_stopping: gamma must be at least 1");
  StoppingForest forest(&grid, T);

  std::vector<int> queue{0};
  while (!queue.empty()) {
    const int fi = queue.back();
    queue.pop_back();
    const Dyad F = forest.node(fi).iv;
    const Interval Fiv = grid.interval(F);

    auto proj = project_subtree(f, sigma, grid, F);
    for (double& v : proj) v = std::abs(v);
    const double avgF = expectation(proj, sigma, Fiv).value;

    std::vector<Dyad> stack;
    if (F.n < grid.max_depth()) {
      auto [lo, hi] = grid.children(F);
      stack.push_back(hi);
      stack.push_back(lo);
    }
    std::vector<Dyad> fired_children;
    while (!stack.empty()) {
      const Dyad K = stack.back();
      stack.pop_back();
      const Interval Kiv = grid.interval(K);
      const double mK = mass(sigma, Kiv);
      const bool good = grid.is_good(K, cfg);
      if (!(mK > 0.0)) {
        // both criteria carry |I'|_sigma in a denominator: skip the subtree
        if (good && log) log->skipped_zero_mass.push_back(K);
        continue;
      }
      int fired = kFiredNone;
      if (good) {
        const double pt = poisson_annulus(Kiv, sigma, Fiv, Kiv);
        const double pe2 = pt * pt * energy(Kiv, omega) *
                           mass(omega, Kiv) / mK;
        if (pe2 > gamma) fired |= kFiredEnergy;
        const double avgK = expectation(proj, sigma, Kiv).value;
        if (avgK > 4.0 * avgF) fired |= kFiredAverage;
      }
      if (fired != kFiredNone) {
        fired_children.push_back(K);
      } else if (K.n < grid.max_depth()) {
        auto [lo, hi] = grid.children(K);
        stack.push_back(hi);
        stack.push_back(lo);
      }
    }
    std::sort(fired_children.begin(), fired_children.end());
    for (const Dyad& K : fired_children) {
      int fired = kFiredNone;
      {
        const Interval Kiv = grid.interval(K);
        const double mK = mass(sigma, Kiv);
        const double pt = poisson_annulus(Kiv, sigma, Fiv, Kiv);
        if (pt * pt * energy(Kiv, omega) * mass(omega, Kiv) / mK > gamma)
          fired |= kFiredEnergy;
        if (expectation(proj, sigma, Kiv).value > 4.0 * avgF)
          fired |= kFiredAverage;
      }
      queue.push_back(forest.add(K, fired));
    }
  }

  // alpha(F) = sup over forest ancestors G (G itself included) of
  // E_G |P_{D[pi G]} f|, with pi(top) = top.
  const std::size_t n = forest.size();
  std::vector<double> beta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int p = forest.pi(static_cast<int>(i));
    auto proj = project_subtree(f, sigma, grid, forest.node(p).iv);
    for (double& v : proj) v = std::abs(v);
    beta[i] =
        expectation(proj, sigma, grid.interval(forest.node(i).iv)).value;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int p = forest.node(static_cast<int>(i)).parent;
    forest.node(static_cast<int>(i)).alpha =
        p < 0 ? beta[i] : std::max(beta[i], forest.node(p).alpha);
  }
  return forest;
}

double carleson_norm(const StoppingForest& forest,
                     const DiscreteMeasure& sigma) {
  const Grid& grid = forest.grid();
  double best = 0.0;
  for (std::size_t s = 0; s < forest.size(); ++s) {
    const Dyad S = forest.node(static_cast<int>(s)).iv;
    const double mS = mass(sigma, grid.interval(S));
    if (!(mS > 0.0)) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < forest.size(); ++i) {
      const Dyad F = forest.node(static_cast<int>(i)).iv;
      if (grid.contains(S, F)) sum += mass(sigma, grid.interval(F));
    }
    best = std::max(best, sum / mS);
  }
  return best;
}

DecayReport decay_report(const StoppingForest& forest,
                         const DiscreteMeasure& sigma) {
  DecayReport out;
  const Grid& grid = forest.grid();
  for (std::size_t i = 0; i < forest.size(); ++i) {
    const double mF = mass(sigma, grid.interval(forest.node(i).iv));
    if (!(mF > 0.0)) continue;
    for (int m = 1;; ++m) {
      const auto gen = forest.generation(static_cast<int>(i), m);
      if (gen.empty()) break;
      double s = 0.0;
      for (int g : gen) s += mass(sigma, grid.interval(forest.node(g).iv));
      if (out.rho.size() < static_cast<std::size_t>(m)) out.rho.resize(m, 0.0);
      out.rho[m - 1] = std::max(out.rho[m - 1], s / mF);
    }
  }
  return out;
}

double quasi_orthogonality(const StoppingForest& forest,
                           std::span<const double> f,
                           const DiscreteMeasure& sigma) {
  const double nf = l2_norm_sq(f, sigma);
  if (!(nf > 0.0)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < forest.size(); ++i) {
    const auto& nd = forest.node(static_cast<int>(i));
    s += mass(sigma, forest.grid().interval(nd.iv)) * nd.alpha * nd.alpha;
  }
  return s / nf;
}

// ---------------------------------------------------------------------------

RootedTree RootedTree::from_parents(std::vector<int> parents) {
  RootedTree t;
  t.parent = std::move(parents);
  if (t.parent.empty() || t.parent[0] != -1)
    throw std::invalid_argument("tree: node 0 must be the root");
  t.children.resize(t.parent.size());
  for (std::size_t i = 1; i < t.parent.size(); ++i) {
    if (t.parent[i] < 0 || t.parent[i] >= static_cast<int>(i))
      throw std::invalid_argument("tree: parent indices must precede children");
    t.children[t.parent[i]].push_back(static_cast<int>(i));
  }
  return t;
}

double istar(const RootedTree& tree, std::span<const double> mu, int alpha) {
  double s = 0.0;
  std::vector<int> stack{alpha};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    s += mu[v];
    for (int c : tree.children[v]) stack.push_back(c);
  }
  return s;
}

namespace {

struct LevelScan {
  std::vector<double> covered;   // sum of I*mu over T-members at or below node
  std::vector<double> strict;    // sum of I*mu over T-members strictly below
  std::vector<char> has_below;   // node has a T-member strictly below
};

LevelScan scan_level(const RootedTree& tree, std::span<const double> is,
                     const std::vector<char>& in_level) {
  const std::size_t n = tree.size();
  LevelScan s;
  s.covered.assign(n, 0.0);
  s.strict.assign(n, 0.0);
  s.has_below.assign(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    if (in_level[i]) {
      s.covered[i] = is[i];
    } else {
      double acc = 0.0;
      for (int c : tree.children[i]) acc += s.covered[c];
      s.covered[i] = acc;
    }
    double st = 0.0;
    char hb = 0;
    for (int c : tree.children[i]) {
      st += s.covered[c];
      if (in_level[c] || s.has_below[c]) hb = 1;
    }
    s.strict[i] = st;
    s.has_below[i] = hb;
  }
  return s;
}

std::vector<double> istar_all(const RootedTree& tree,
                              std::span<const double> mu) {
  const std::size_t n = tree.size();
  std::vector<double> is(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    is[i] = mu[i];
    for (int c : tree.children[i]) is[i] += is[c];
  }
  return is;
}

}  // namespace

TreeDecomposition dual_tree_decompose(const RootedTree& tree,
                                      std::span<const double> mu,
                                      double gamma) {
  const std::size_t n = tree.size();
  if (mu.size() != n) throw std::invalid_argument("decompose: mu size mismatch");
  if (!(gamma > 1.0)) throw std::invalid_argument("decompose: gamma <= 1");
  bool nontrivial = false;
  for (double v : mu) {
    if (v < 0.0) throw std::invalid_argument("decompose: mu must be >= 0");
    if (v > 0.0) nontrivial = true;
  }
  if (!nontrivial) throw std::invalid_argument("decompose: mu is trivial");

  const auto is = istar_all(tree, mu);

  // T_0: minimal elements of the support.
  std::vector<char> has_supp(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    has_supp[i] = mu[i] > 0.0 ? 1 : 0;
    for (int c : tree.children[i])
      if (has_supp[c]) has_supp[i] = 1;
  }
  TreeDecomposition dec;
  std::vector<int> t0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mu[i] > 0.0)) continue;
    bool below = false;
    for (int c : tree.children[i])
      if (has_supp[c]) below = true;
    if (!below) t0.push_back(static_cast<int>(i));
  }
  dec.levels.push_back(std::move(t0));
  dec.fresh.push_back({});

  bool first_round = true;
  while (true) {
    std::vector<char> in_level(n, 0);
    for (int v : dec.levels.back()) in_level[v] = 1;
    const auto scan = scan_level(tree, is, in_level);

    // Candidates lie strictly above some current stopping point.
    std::vector<char> fires(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      fires[i] = (scan.has_below[i] && is[i] > gamma * scan.strict[i]) ? 1 : 0;
    std::vector<char> fire_below(n, 0);
    for (std::size_t i = n; i-- > 0;)
      for (int c : tree.children[i])
        if (fires[c] || fire_below[c]) fire_below[i] = 1;

    std::vector<int> fresh;
    for (std::size_t i = 0; i < n; ++i)
      if (fires[i] && !fire_below[i]) fresh.push_back(static_cast<int>(i));

    if (fresh.empty()) {
      if (first_round) dec.irreducible = true;
      if (!(dec.levels.back().size() == 1 && dec.levels.back()[0] == 0)) {
        dec.levels.push_back({0});
        dec.fresh.push_back({});
      }
      return dec;
    }
    first_round = false;

    // Carry forward the points the fresh ones do not dominate, so the
    // sequence stays increasing and no support is ever stranded.
    std::vector<char> fresh_mask(n, 0), dominated(n, 0);
    for (int v : fresh) fresh_mask[v] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      char dom = fresh_mask[i];
      if (!dom && tree.parent[i] >= 0 && dominated[tree.parent[i]]) dom = 1;
      dominated[i] = dom;
    }
    std::vector<int> next = fresh;
    for (int v : dec.levels.back())
      if (!dominated[v]) next.push_back(v);
    std::sort(next.begin(), next.end());
    const bool at_root = next.size() == 1 && next[0] == 0;
    dec.levels.push_back(std::move(next));
    dec.fresh.push_back(std::move(fresh));
    if (at_root) {
      dec.top_organic = true;
      return dec;
    }
  }
}

TreeDecompositionCheck verify_tree_decomposition(
    const RootedTree& tree, std::span<const double> mu, double gamma,
    const TreeDecomposition& dec) {
  TreeDecompositionCheck out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.violations.push_back(msg);
  };
  const std::size_t n = tree.size();
  const auto is = istar_all(tree, mu);
  const double slack = 1e-12;

  auto is_ancestor = [&](int anc, int node) {
    for (int v = tree.parent[node]; v >= 0; v = tree.parent[v])
      if (v == anc) return true;
    return false;
  };

  for (std::size_t lev = 1; lev < dec.levels.size(); ++lev) {
    std::vector<char> prev(n, 0), fresh_mask(n, 0);
    for (int v : dec.levels[lev - 1]) prev[v] = 1;
    if (lev < dec.fresh.size())
      for (int v : dec.fresh[lev]) fresh_mask[v] = 1;
    const auto scan = scan_level(tree, is, prev);
    const bool by_fiat_top =
        lev + 1 == dec.levels.size() && !dec.top_organic;

    for (int alpha : dec.levels[lev]) {
      // (dec corona) line 1: trivial for carried points (empty sum),
      // the real criterion for freshly fired ones.
      if (!(is[alpha] > gamma * scan.strict[alpha]) && !by_fiat_top)
        fail("dec corona line 1 fails at node " + std::to_string(alpha));
      if (fresh_mask[alpha] && !scan.has_below[alpha])
        fail("fresh node without a predecessor below: " +
             std::to_string(alpha));

      if (fresh_mask[alpha] || by_fiat_top) {
        // Carleson-small line 1: mass strictly between T_{n-1} and alpha.
        double between = 0.0;
        for (int c : tree.children[alpha]) between += is[c] - scan.covered[c];
        if (between >
            (gamma - 1.0) * scan.strict[alpha] * (1.0 + slack) + 1e-300)
          fail("dec corona small line 1 fails at node " +
               std::to_string(alpha));
      }
      // Failed-candidate lines for gamma' strictly between T_{n-1}
      // and alpha (the candidates that were not chosen).
      for (std::size_t g = 0; g < n; ++g) {
        const int gi = static_cast<int>(g);
        if (gi == alpha || prev[g] || !scan.has_below[g]) continue;
        if (!is_ancestor(alpha, gi)) continue;
        if (is[g] > gamma * scan.strict[g] * (1.0 + slack))
          fail("dec corona line 2 fails at node " + std::to_string(gi));
        const double closed = is[g] - scan.covered[g];
        if (closed > (gamma - 1.0) * scan.strict[g] * (1.0 + slack) + 1e-300)
          fail("dec corona small line 2 fails at node " + std::to_string(gi));
      }
    }
    if (by_fiat_top) {
      // (dec corona) line 3 at the root.
      if (scan.has_below[0] &&
          is[0] > gamma * scan.strict[0] * (1.0 + slack))
        fail("dec corona line 3 fails at the root");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Index of a dyad inside the BFS enumeration of descendants(F).
int subtree_index(Dyad F, Dyad J) {
  const int g = J.n - F.n;
  const std::int64_t offset = J.k - (F.k << g);
  return static_cast<int>(((std::int64_t{1} << g) - 1) + offset);
}

RootedTree subtree_tree(const Grid& grid, Dyad F) {
  const auto nodes = grid.descendants(F);
  std::vector<int> parents(nodes.size(), -1);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    parents[i] = subtree_index(F, grid.parent(nodes[i]));
  return RootedTree::from_parents(std::move(parents));
}

}  // namespace

UBuild build_U(Dyad F, std::span<const Dyad> lambda_g,
               const DiscreteMeasure& omega, double theta, const Grid& grid,
               const GridConfig& cfg) {
  (void)cfg;  // mu_g lives on the caller-filtered good support
  if (!(theta > 0.0 && theta < 0.5))
    throw std::invalid_argument("build_U: theta must lie in (0, 1/2)");
  UBuild out{StoppingForest(&grid, F), false, {}, {}};
  out.tree_nodes = grid.descendants(F);
  std::vector<double> mu(out.tree_nodes.size(), 0.0);
  bool any = false;
  for (const Dyad& J : lambda_g) {
    if (!grid.contains(F, J))
      throw std::invalid_argument("build_U: Lambda_g member outside F");
    const double m = coordinate_energy(grid, J, omega);
    mu[subtree_index(F, J)] = m;
    if (m > 0.0) any = true;
  }
  if (!any) {
    out.irreducible = true;
    out.forest.irreducible = true;
    return out;
  }
  const RootedTree tree = subtree_tree(grid, F);
  out.dec = dual_tree_decompose(tree, mu, 1.0 + theta);
  if (out.dec.irreducible) {
    out.irreducible = true;
    out.forest.irreducible = true;
    return out;
  }
  // Members: union of the levels; a member's level is the first one
  // containing it. Insert top-down so parents precede descendants.
  std::map<Dyad, int> first_level;
  for (std::size_t lev = 0; lev < out.dec.levels.size(); ++lev)
    for (int v : out.dec.levels[lev])
      if (!first_level.count(out.tree_nodes[v]))
        first_level[out.tree_nodes[v]] = static_cast<int>(lev);
  out.forest.node(0).level = static_cast<int>(out.dec.levels.size()) - 1;
  out.forest.top_organic = out.dec.top_organic;
  out.forest.levels.resize(out.dec.levels.size());
  for (std::size_t lev = 0; lev < out.dec.levels.size(); ++lev)
    for (int v : out.dec.levels[lev])
      out.forest.levels[lev].push_back(out.tree_nodes[v]);
  for (const auto& [iv, lev] : first_level)
    if (!(iv == F)) out.forest.add(iv, kFiredNone, lev);
  return out;
}

UGuaranteeCheck verify_U_guarantees(const UBuild& u,
                                    std::span<const Dyad> lambda_g,
                                    const DiscreteMeasure& omega, double theta,
                                    const Grid& grid, const GridConfig& cfg) {
  UGuaranteeCheck out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.violations.push_back(msg);
  };
  if (u.irreducible) return out;
  const StoppingForest& forest = u.forest;
  const double gamma = 1.0 + theta;
  const double slack = 1.0 + 1e-12;

  std::map<Dyad, double> mu;
  for (const Dyad& J : lambda_g) mu[J] = coordinate_energy(grid, J, omega);
  auto subtree_mass = [&](Dyad K) {
    double s = 0.0;
    for (const auto& [J, m] : mu)
      if (grid.contains(K, J)) s += m;
    return s;
  };
  // minimal members of Lambda_g with positive mass
  auto is_min = [&](Dyad K) {
    auto it = mu.find(K);
    if (it == mu.end() || !(it->second > 0.0)) return false;
    for (const auto& [J, m] : mu)
      if (m > 0.0 && !(J == K) && grid.contains(K, J)) return false;
    return true;
  };

  // (tight): for each member U' and good corona member K not in MIN,
  // mass strictly below K outside the child subtrees is <= theta * mass(K).
  for (std::size_t ui = 0; ui < forest.size(); ++ui) {
    const auto kids = forest.children_of(static_cast<int>(ui));
    for (const Dyad& K : forest.corona_members(static_cast<int>(ui))) {
      if (!grid.is_good(K, cfg) || is_min(K)) continue;
      double lhs = 0.0;
      for (const auto& [J, m] : mu) {
        if (!(m > 0.0) || J == K || !grid.contains(K, J)) continue;
        bool in_child = false;
        for (int c : kids)
          if (grid.contains(forest.node(c).iv, J)) in_child = true;
        if (!in_child) lhs += m;
      }
      const double rhs = theta * subtree_mass(K);
      ++out.tight_checked;
      if (lhs > rhs * slack + 1e-300)
        fail("tight fails at K=" + grid.label(K) +
             " in corona of " + grid.label(forest.node(ui).iv));
    }
  }

  // (geo dec): forest-generation decay below every member that actually
  // fired (carry-over makes a member's forest children exactly the previous
  // stopping time below it, so the firing inequality iterates).
  std::map<Dyad, bool> fired;
  for (std::size_t lev = 0; lev < u.dec.fresh.size(); ++lev)
    for (int v : u.dec.fresh[lev]) fired[u.tree_nodes[v]] = true;
  auto corona_mass = [&](int vi) {
    double s = subtree_mass(forest.node(vi).iv);
    for (int c : forest.children_of(vi))
      s -= subtree_mass(forest.node(c).iv);
    return s;
  };
  for (std::size_t ui = 0; ui < forest.size(); ++ui) {
    const Dyad U = forest.node(ui).iv;
    if (!fired.count(U)) continue;
    const double mU = subtree_mass(U);
    for (int m = 1;; ++m) {
      const auto gen = forest.generation(static_cast<int>(ui), m);
      if (gen.empty()) break;
      double lhs = 0.0;
      for (int v : gen) lhs += corona_mass(v);
      const double rhs = mU / std::pow(gamma, static_cast<double>(m));
      ++out.geo_checked;
      if (lhs > rhs * slack + 1e-300)
        fail("geo dec fails at U=" + grid.label(U) + " m=" + std::to_string(m));
    }
  }
  return out;
}

}  // namespace twoweight
