#pragma once

// Reference computations that share no code with the library. Tests
// compare library results against these.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

struct Pose {
  double x, y, theta;
};

// Forward Euler with a fixed number of substeps.
inline Pose euler_unicycle(Pose p, double v, double omega, double dt, long substeps) {
  const double h = dt / static_cast<double>(substeps);
  for (long i = 0; i < substeps; ++i) {
    p.x += v * std::cos(p.theta) * h;
    p.y += v * std::sin(p.theta) * h;
    p.theta += omega * h;
  }
  return p;
}

// Lower regularized incomplete gamma P(a, x) from its power series.
inline double regularized_gamma_p(double a, double x) {
  if (x <= 0) return 0.0;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double chi_square_cdf(double x, int dof) { return regularized_gamma_p(0.5 * dof, 0.5 * x); }

// Bisection on the CDF; accurate to ~1e-12.
inline double chi_square_quantile(double p, int dof) {
  double lo = 0.0;
  double hi = 1.0;
  while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Best partial matching by exhaustive search. Cells that are not finite
// are forbidden. Maximizes the number of pairs first, then minimizes the
// cost summed in row order. Returns {pairs, cost}.
struct BruteForceResult {
  int pairs{0};
  double cost{0.0};
  std::vector<int> col_of_row;  // -1 when unmatched
};

inline BruteForceResult brute_force_assignment(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(cost[0].size());
  BruteForceResult best;
  best.pairs = -1;
  std::vector<int> assign(rows, -1);
  std::vector<bool> used(cols, false);
  std::function<void(int, int)> visit = [&](int r, int pairs) {
    if (r == rows) {
      double total = 0.0;
      for (int i = 0; i < rows; ++i) {
        if (assign[i] >= 0) total += cost[i][assign[i]];
      }
      if (pairs > best.pairs || (pairs == best.pairs && total < best.cost)) {
        best.pairs = pairs;
        best.cost = total;
        best.col_of_row = assign;
      }
      return;
    }
    assign[r] = -1;
    visit(r + 1, pairs);
    for (int c = 0; c < cols; ++c) {
      if (used[c] || !std::isfinite(cost[r][c])) continue;
      used[c] = true;
      assign[r] = c;
      visit(r + 1, pairs + 1);
      assign[r] = -1;
      used[c] = false;
    }
  };
  visit(0, 0);
  return best;
}

// Central difference gradient of a scalar field in the plane.
inline void central_gradient(const std::function<double(double, double)>& f, double x, double y, double h,
                             double& gx, double& gy) {
  gx = (f(x + h, y) - f(x - h, y)) / (2 * h);
  gy = (f(x, y + h) - f(x, y - h)) / (2 * h);
}

// Length of the union of intervals intersected with [lo, hi].
inline double covered_length(std::vector<std::pair<double, double>> intervals, double lo, double hi) {
  for (auto& iv : intervals) {
    iv.first = std::max(iv.first, lo);
    iv.second = std::min(iv.second, hi);
  }
  std::erase_if(intervals, [](const auto& iv) { return iv.second <= iv.first; });
  std::sort(intervals.begin(), intervals.end());
  double total = 0.0;
  double cur_lo = 0.0;
  double cur_hi = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : intervals) {
    if (a > cur_hi) {
      if (cur_hi > cur_lo) total += cur_hi - cur_lo;
      cur_lo = a;
      cur_hi = b;
    } else {
      cur_hi = std::max(cur_hi, b);
    }
  }
  if (cur_hi > cur_lo) total += cur_hi - cur_lo;
  return total;
}

}  // namespace oracle
