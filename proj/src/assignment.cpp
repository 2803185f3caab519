#include "wfollow/assignment.hpp"

#include <algorithm>
#include <cmath>

namespace wfollow::tracker {
namespace {

// Lexicographic cost: number of infeasible cells first, then real cost.
// Running the Hungarian method over this ordered group yields the
// max-cardinality, min-cost matching without a large finite stand-in.
struct LexCost {
  long long infeasible{0};
  double cost{0.0};

  friend LexCost operator+(LexCost a, LexCost b) { return {a.infeasible + b.infeasible, a.cost + b.cost}; }
  friend LexCost operator-(LexCost a, LexCost b) { return {a.infeasible - b.infeasible, a.cost - b.cost}; }
  friend bool operator<(LexCost a, LexCost b) {
    return a.infeasible != b.infeasible ? a.infeasible < b.infeasible : a.cost < b.cost;
  }
};

constexpr LexCost kUnbounded{std::numeric_limits<long long>::max() / 4, 0.0};

// Shortest augmenting path Hungarian algorithm; requires rows <= cols.
// `a` is 1-indexed. Returns col -> row (0 = unassigned).
std::vector<int> hungarian(const std::vector<std::vector<LexCost>>& a, int n, int m) {
  std::vector<LexCost> u(n + 1), v(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<LexCost> minv(m + 1, kUnbounded);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      LexCost delta = kUnbounded;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const LexCost cur = a[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] = u[p[j]] + delta;
          v[j] = v[j] - delta;
        } else {
          minv[j] = minv[j] - delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return p;
}

}  // namespace

Matching solve_assignment(const Eigen::MatrixXd& cost, double infeasible_marker) {
  const auto rows = static_cast<int>(cost.rows());
  const auto cols = static_cast<int>(cost.cols());
  if (rows == 0 || cols == 0) return {};

  const bool transpose = rows > cols;
  const int n = transpose ? cols : rows;
  const int m = transpose ? rows : cols;

  auto infeasible = [&](double c) {
    return std::isnan(c) || c == infeasible_marker || std::isinf(c);
  };

  std::vector<std::vector<LexCost>> a(n + 1, std::vector<LexCost>(m + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double c = transpose ? cost(j, i) : cost(i, j);
      a[i + 1][j + 1] = infeasible(c) ? LexCost{1, 0.0} : LexCost{0, c};
    }
  }

  const std::vector<int> p = hungarian(a, n, m);
  Matching out;
  for (int j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const int i = p[j] - 1;
    const std::size_t r = static_cast<std::size_t>(transpose ? j - 1 : i);
    const std::size_t c = static_cast<std::size_t>(transpose ? i : j - 1);
    if (infeasible(cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)))) continue;
    out.emplace_back(r, c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wfollow::tracker
