#include "twoweight/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twoweight {

void GridConfig::validate() const {
  if (r < 1) throw std::invalid_argument("cfg: r must be >= 1");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("cfg: eps must lie in (0, 1/2)");
  if (tau <= r) throw std::invalid_argument("cfg: tau must exceed r");
  if (max_depth < 1) throw std::invalid_argument("cfg: max_depth must be >= 1");
  if (!(gamma > 1.0)) throw std::invalid_argument("cfg: gamma must exceed 1");
  if (!(theta > 0.0 && theta < 0.5))
    throw std::invalid_argument("cfg: theta must lie in (0, 1/2)");
  if (tail_doublings < 0)
    throw std::invalid_argument("cfg: tail_doublings must be >= 0");
}

Grid::Grid(Interval root, int max_depth) : root_(root), max_depth_(max_depth) {
  if (!(root.length > 0.0)) throw std::invalid_argument("grid: empty root");
  if (max_depth < 1 || max_depth > 40)
    throw std::invalid_argument("grid: max_depth out of range");
}

bool Grid::valid(Dyad d) const {
  return d.n >= 0 && d.n <= max_depth_ && d.k >= 0 &&
         d.k < (std::int64_t{1} << d.n);
}

Interval Grid::interval(Dyad d) const {
  const double len = std::ldexp(root_.length, -d.n);
  return {root_.left + static_cast<double>(d.k) * len, len};
}

double Grid::length(Dyad d) const { return std::ldexp(root_.length, -d.n); }

std::string Grid::label(Dyad d) const {
  return std::to_string(d.n) + ":" + std::to_string(d.k);
}

Dyad Grid::parse_label(const std::string& s) const {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad interval label: " + s);
  Dyad d{std::stoi(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  if (!valid(d)) throw std::invalid_argument("interval label out of grid: " + s);
  return d;
}

std::pair<Dyad, Dyad> Grid::children(Dyad I) const {
  if (I.n >= max_depth_)
    throw std::out_of_range("children: depth overflow at max_depth");
  return {Dyad{I.n + 1, 2 * I.k}, Dyad{I.n + 1, 2 * I.k + 1}};
}

Dyad Grid::parent(Dyad I) const {
  if (I.n < 1) throw std::out_of_range("parent: root has no parent");
  return {I.n - 1, I.k >> 1};
}

Dyad Grid::sibling(Dyad K) const {
  if (K.n < 1) throw std::out_of_range("sibling: root has no sibling");
  return {K.n, K.k ^ 1};
}

Dyad Grid::ancestor(Dyad I, int depth) const {
  if (depth < 0 || depth > I.n) throw std::out_of_range("ancestor: bad depth");
  return {depth, I.k >> (I.n - depth)};
}

bool Grid::contains(Dyad I, Dyad J) const {
  return J.n >= I.n && (J.k >> (J.n - I.n)) == I.k;
}

bool Grid::disjoint(Dyad I, Dyad J) const {
  return !contains(I, J) && !contains(J, I);
}

Dyad Grid::child_containing(Dyad I, Dyad J) const {
  if (!(J.n > I.n && contains(I, J)))
    throw std::invalid_argument("child_containing: J is not strictly inside I");
  return {I.n + 1, J.k >> (J.n - I.n - 1)};
}

bool Grid::locate(double x, int depth, Dyad* out) const {
  if (x < root_.left || x >= root_.right()) return false;
  const double len = std::ldexp(root_.length, -depth);
  auto k = static_cast<std::int64_t>(std::floor((x - root_.left) / len));
  const std::int64_t hi = std::int64_t{1} << depth;
  if (k < 0) k = 0;
  if (k >= hi) k = hi - 1;
  // floor can land one cell off at exact boundaries; nudge to the half-open cell
  while (k > 0 && x < root_.left + static_cast<double>(k) * len) --k;
  while (k + 1 < hi && x >= root_.left + static_cast<double>(k + 1) * len) ++k;
  *out = {depth, k};
  return true;
}

double Grid::boundary_distance(Dyad J, Dyad K) const {
  // J inside K: distance of closure(J) to the nearer endpoint of K,
  // computed in units of 2^-J.n so that it is exact.
  const int gap = J.n - K.n;
  const std::int64_t cells = std::int64_t{1} << gap;
  const std::int64_t j0 = J.k - K.k * cells;          // left offset in cells
  const std::int64_t j1 = (K.k + 1) * cells - (J.k + 1);  // right offset
  const double unit = std::ldexp(root_.length, -J.n);
  return static_cast<double>(j0 < j1 ? j0 : j1) * unit;
}

bool Grid::is_good(Dyad J, const GridConfig& cfg) const {
  const double lJ = length(J);
  for (int d = 0; d <= J.n - cfg.r; ++d) {
    const Dyad K = ancestor(J, d);
    const double thr =
        0.5 * std::pow(lJ, cfg.eps) * std::pow(length(K), 1.0 - cfg.eps);
    if (boundary_distance(J, K) < thr) return false;
  }
  return true;
}

WhitneyResult Grid::whitney_deep(Dyad F, const GridConfig& cfg) const {
  WhitneyResult out;
  const double lF = length(F);
  auto qualifies = [&](Dyad W) {
    if (W.n - F.n < cfg.r) return false;
    const double thr =
        0.5 * std::pow(length(W), cfg.eps) * std::pow(lF, 1.0 - cfg.eps);
    return boundary_distance(W, F) >= thr;
  };
  if (F.n >= max_depth_) {
    out.truncated = true;
    return out;
  }
  std::vector<Dyad> stack{F};
  while (!stack.empty()) {
    const Dyad cur = stack.back();
    stack.pop_back();
    auto [lo, hi] = children(cur);
    for (Dyad c : {lo, hi}) {
      if (qualifies(c)) {
        out.members.push_back(c);
      } else if (c.n >= max_depth_) {
        out.truncated = true;
      } else {
        stack.push_back(c);
      }
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

WhitneyResult Grid::whitney_triple(Dyad S, const GridConfig& cfg) const {
  WhitneyResult out;
  auto triple_inside = [&](Dyad I) {
    // 3I inside S <=> the cell offset j of I at depth gap g obeys
    // 1 <= j <= 2^g - 2 (integer arithmetic, exact).
    const int g = I.n - S.n;
    const std::int64_t cells = std::int64_t{1} << g;
    const std::int64_t j = I.k - S.k * cells;
    return j >= 1 && j <= cells - 2;
  };
  if (S.n >= max_depth_) {
    out.truncated = true;
    return out;
  }
  std::vector<Dyad> stack{S};
  while (!stack.empty()) {
    const Dyad cur = stack.back();
    stack.pop_back();
    auto [lo, hi] = children(cur);
    for (Dyad c : {lo, hi}) {
      if (triple_inside(c) && is_good(c, cfg)) {
        out.members.push_back(c);
      } else if (c.n >= max_depth_) {
        out.truncated = true;
      } else {
        stack.push_back(c);
      }
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

std::vector<Dyad> Grid::nearby(Dyad S, int tau) const {
  if (tau < 0 || S.n + tau > max_depth_)
    throw std::out_of_range("nearby: depth overflow");
  std::vector<Dyad> out;
  for (int g = 0; g <= tau; ++g) {
    const std::int64_t base = S.k << g;
    for (std::int64_t j = 0; j < (std::int64_t{1} << g); ++j)
      out.push_back({S.n + g, base + j});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Dyad> Grid::tower(Dyad S, Dyad A) const {
  if (!contains(A, S)) throw std::invalid_argument("tower: S is not inside A");
  std::vector<Dyad> out;
  for (Dyad K = S; K.n > A.n; K = parent(K)) out.push_back(K);
  return out;
}

std::vector<Dyad> Grid::all(int cap) const {
  if (cap < 0 || cap > max_depth_) cap = max_depth_;
  std::vector<Dyad> out;
  out.reserve((std::size_t{2} << cap) - 1);
  for (int n = 0; n <= cap; ++n)
    for (std::int64_t k = 0; k < (std::int64_t{1} << n); ++k)
      out.push_back({n, k});
  return out;
}

std::vector<Dyad> Grid::descendants(Dyad F, int cap) const {
  if (cap < 0 || cap > max_depth_) cap = max_depth_;
  std::vector<Dyad> out;
  for (int n = F.n; n <= cap; ++n) {
    const int g = n - F.n;
    const std::int64_t base = F.k << g;
    for (std::int64_t j = 0; j < (std::int64_t{1} << g); ++j)
      out.push_back({n, base + j});
  }
  return out;
}

std::vector<Interval> Grid::root_ancestors(int doublings) const {
  // Alternate right/left extension so the chain grows around the root:
  // each interval is a dyadic child of the next.
  std::vector<Interval> out;
  Interval cur = root_;
  for (int j = 0; j < doublings; ++j) {
    cur = (j % 2 == 0) ? Interval{cur.left, 2.0 * cur.length}
                       : Interval{cur.left - cur.length, 2.0 * cur.length};
    out.push_back(cur);
  }
  return out;
}

}  // namespace twoweight
