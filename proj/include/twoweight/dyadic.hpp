#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twoweight/measure.hpp"

namespace twoweight {

// Parameters shared by the whole grid machinery.
//   r     goodness parameter
//   eps   goodness exponent, in (0, 1/2)
//   tau   below/comparable cutoff, > r
//   gamma corona parameter, > 1
//   theta dual-tree parameter, in (0, 1/2)
struct GridConfig {
  int r = 5;
  double eps = 0.2;
  int tau = 6;
  int max_depth = 12;
  double gamma = 2.0;
  double theta = 0.25;
  int tail_doublings = 6;

  void validate() const;
};

// Dyadic address: depth n (scale 2^-n relative to the root) and index k.
struct Dyad {
  int n = 0;
  std::int64_t k = 0;

  friend bool operator==(const Dyad&, const Dyad&) = default;
  friend auto operator<=>(const Dyad& a, const Dyad& b) {
    if (a.n != b.n) return a.n <=> b.n;
    return a.k <=> b.k;
  }
};

struct WhitneyResult {
  std::vector<Dyad> members;
  bool truncated = false;
};

// The dyadic grid rooted at a fixed top interval T, depths 0..max_depth.
// Endpoints are exact in double as long as the root has dyadic coordinates.
class Grid {
 public:
  Grid(Interval root, int max_depth);

  const Interval& root_interval() const { return root_; }
  int max_depth() const { return max_depth_; }
  Dyad root() const { return {0, 0}; }
  bool valid(Dyad d) const;

  Interval interval(Dyad d) const;
  double length(Dyad d) const;
  std::string label(Dyad d) const;  // "n:k"
  Dyad parse_label(const std::string& s) const;

  std::pair<Dyad, Dyad> children(Dyad I) const;
  Dyad parent(Dyad I) const;
  Dyad sibling(Dyad K) const;
  Dyad ancestor(Dyad I, int depth) const;  // the depth-`depth` ancestor
  Dyad child_containing(Dyad I, Dyad J) const;  // needs J strictly inside I
  bool contains(Dyad I, Dyad J) const;          // J subseteq I
  bool disjoint(Dyad I, Dyad J) const;

  // Containing dyad of x at the given depth; false when x is outside the root.
  bool locate(double x, int depth, Dyad* out) const;

  // dist(J, boundary of K) for J inside K, exact on grid coordinates.
  double boundary_distance(Dyad J, Dyad K) const;

  // J is (r,eps)-good: dist(J, dK) >= 1/2 l(J)^eps l(K)^(1-eps) for every
  // ancestor K within the root with l(K) >= 2^r l(J).
  bool is_good(Dyad J, const GridConfig& cfg) const;

  // Maximal W inside F with l(W) <= 2^-r l(F) and
  // dist(W, dF) >= 1/2 l(W)^eps l(F)^(1-eps). Truncated flag is set when
  // max_depth cuts the search before maximality is resolved.
  WhitneyResult whitney_deep(Dyad F, const GridConfig& cfg) const;

  // Maximal good I inside S whose concentric triple 3I lies in S.
  WhitneyResult whitney_triple(Dyad S, const GridConfig& cfg) const;

  // All 2^(tau+1)-1 descendants of S within tau generations, S included.
  std::vector<Dyad> nearby(Dyad S, int tau) const;

  // Tower {K : S subseteq K strictly inside A}; empty when S == A.
  std::vector<Dyad> tower(Dyad S, Dyad A) const;

  // Every dyad with depth <= cap (default max_depth), in (n,k) order.
  std::vector<Dyad> all(int cap = -1) const;
  std::vector<Dyad> descendants(Dyad F, int cap = -1) const;  // incl. F

  // Doubling ancestors of the root (zig-zag extension), for tail suprema.
  std::vector<Interval> root_ancestors(int doublings) const;

 private:
  Interval root_;
  int max_depth_;
};

}  // namespace twoweight
