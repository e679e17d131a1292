#include "twoweight/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace twoweight {

static bool in_window(double dist, const Truncation& t) {
  return dist > t.eps && dist < t.outer;
}

double hilbert_apply(std::span<const double> f, const DiscreteMeasure& sigma,
                     double x, const Truncation& trunc) {
  double s = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double y = sigma.position(j);
    if (!in_window(std::abs(y - x), trunc)) continue;
    s += f[j] * sigma.mass_at(j) / (y - x);
  }
  return s;
}

double hilbert_bilinear(std::span<const double> f, std::span<const double> g,
                        const DiscreteMeasure& sigma,
                        const DiscreteMeasure& omega, const Truncation& trunc) {
  return hilbert_pairing(f, g, sigma, omega, trunc);
}

double hilbert_pairing(std::span<const double> phi, std::span<const double> dg,
                       const DiscreteMeasure& sigma,
                       const DiscreteMeasure& omega, const Truncation& trunc) {
  double s = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (dg[i] == 0.0) continue;
    const double x = omega.position(i);
    double hx = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (phi[j] == 0.0) continue;
      const double y = sigma.position(j);
      if (!in_window(std::abs(y - x), trunc)) continue;
      hx += phi[j] * sigma.mass_at(j) / (y - x);
    }
    s += dg[i] * omega.mass_at(i) * hx;
  }
  return s;
}

namespace {

// splitmix64: a fixed, platform-independent stream for start vectors.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1p-53;
}

}  // namespace

namespace {

struct PowerResult {
  double value = 0.0;
  int iterations = 0;
};

PowerResult power_sigma_max(const std::vector<double>& M, std::size_t rows,
                            std::size_t cols) {
  bool any = false;
  for (double x : M)
    if (x != 0.0) any = true;
  if (!any || rows == 0 || cols == 0) return {0.0, 0};

  std::uint64_t state = 0x2545F4914F6CDD1DULL;
  std::vector<double> v(cols), mv(rows), w(cols);
  for (double& x : v) x = 0.5 + unit_double(state);
  double norm =
      std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (double& x : v) x /= norm;

  constexpr int kMaxIter = 2000;
  constexpr double kRelTol = 1e-8;
  constexpr int kStableChecks = 8;
  double lambda = 0.0;
  int stable = 0;
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += M[i * cols + j] * v[j];
      mv[i] = s;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += M[i * cols + j] * mv[i];
      w[j] = s;
    }
    const double rayleigh =
        std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    const double wn =
        std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (!(wn > 0.0)) return {0.0, iter};
    for (std::size_t j = 0; j < cols; ++j) v[j] = w[j] / wn;
    if (iter > 1 && std::abs(rayleigh - lambda) <=
                        kRelTol * std::max(std::abs(rayleigh), 1e-300)) {
      if (++stable >= kStableChecks) return {std::sqrt(rayleigh), iter};
    } else {
      stable = 0;
    }
    lambda = rayleigh;
  }
  throw std::runtime_error("power iteration did not converge");
}

}  // namespace

double sigma_max(const std::vector<double>& m, std::size_t rows,
                 std::size_t cols) {
  return power_sigma_max(m, rows, cols).value;
}

OperatorNorm operator_norm(const DiscreteMeasure& sigma,
                           const DiscreteMeasure& omega,
                           const Truncation& trunc) {
  if (sigma.empty() || omega.empty()) return {0.0, 0, true};
  const std::size_t rows = omega.size(), cols = sigma.size();
  std::vector<double> M(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double x = omega.position(i);
    const double wx = std::sqrt(omega.mass_at(i));
    for (std::size_t j = 0; j < cols; ++j) {
      const double y = sigma.position(j);
      if (!in_window(std::abs(y - x), trunc)) continue;
      M[i * cols + j] = wx * std::sqrt(sigma.mass_at(j)) / (y - x);
    }
  }
  const auto r = power_sigma_max(M, rows, cols);
  return {r.value, r.iterations, false};
}

double truncation_gap(const DiscreteMeasure& sigma,
                      const DiscreteMeasure& omega) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      const double d = std::abs(sigma.position(j) - omega.position(i));
      if (d > 0.0) gap = std::min(gap, d);
    }
  return std::isfinite(gap) ? gap : 1.0;
}

std::vector<Truncation> truncation_ladder(const DiscreteMeasure& sigma,
                                          const DiscreteMeasure& omega) {
  const double gap = truncation_gap(sigma, omega);
  return {Truncation{gap / 2.0, std::numeric_limits<double>::infinity()},
          Truncation{gap / 4.0, std::numeric_limits<double>::infinity()}};
}

}  // namespace twoweight
