#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oracle {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_assignment(const Matrix &scores) {
  const std::size_t rows = scores.size();
  const std::size_t cols = rows ? scores[0].size() : 0;
  std::vector<bool> row_used(rows), col_used(cols);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  while (out.size() < std::min(rows, cols)) {
    std::size_t bi = rows, bj = cols;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        if (bi == rows || scores[i][j] > scores[bi][bj]) {
          bi = i;
          bj = j;
        }
      }
    }
    row_used[bi] = col_used[bj] = true;
    out.emplace_back(bi, bj);
  }
  return out;
}

double best_assignment_total(const Matrix &scores) {
  const std::size_t rows = scores.size();
  const std::size_t cols = rows ? scores[0].size() : 0;
  if (rows == 0 || cols == 0) return 0.0;
  const bool transpose = rows > cols;
  const std::size_t small = std::min(rows, cols), large = std::max(rows, cols);
  auto at = [&](std::size_t s, std::size_t l) { return transpose ? scores[l][s] : scores[s][l]; };
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t s = 0; s < small; ++s) total += at(s, perm[s]);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double hungarian_total(const Matrix &scores) {
  const std::size_t rows = scores.size();
  const std::size_t cols = rows ? scores[0].size() : 0;
  if (rows > 8 || cols > 8) throw std::invalid_argument("hungarian oracle is limited to 8x8");
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return 0.0;
  double top = 0.0;
  for (const auto &r : scores) {
    for (double v : r) top = std::max(top, v);
  }
  // minimise (top - score) on a square matrix padded with `top` (score 0)
  std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, top));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) cost[i + 1][j + 1] = top - scores[i][j];
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1), v(n + 1);
  std::vector<std::size_t> p(n + 1), way(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    std::size_t i = p[j];
    if (i <= rows && j <= cols) total += scores[i - 1][j - 1];
  }
  return total;
}

Matrix margin_matrix(const Matrix &cos, std::size_t k) {
  const std::size_t rows = cos.size();
  const std::size_t cols = rows ? cos[0].size() : 0;
  auto mean_top = [k](std::vector<double> values) {
    std::sort(values.begin(), values.end(), [](double a, double b) { return a > b; });
    std::size_t kk = std::min(k, values.size());
    double s = 0.0;
    for (std::size_t i = 0; i < kk; ++i) s += values[i];
    return s / static_cast<double>(kk);
  };
  Matrix out(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> x_neighbours = cos[i];
      std::vector<double> y_neighbours;
      for (std::size_t r = 0; r < rows; ++r) y_neighbours.push_back(cos[r][j]);
      double denom = (mean_top(x_neighbours) + mean_top(y_neighbours)) / 2.0;
      out[i][j] = denom > 0 ? cos[i][j] / denom : -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

namespace {

std::size_t tokens(const std::string &s) {
  std::istringstream in(s);
  std::string w;
  std::size_t n = 0;
  while (in >> w) ++n;
  return n;
}

}  // namespace

double sl_weight(const std::vector<std::string> &sentences, std::size_t i) {
  std::map<std::string, std::size_t> count;
  for (const auto &s : sentences) ++count[s];
  double denom = 0.0;
  for (const auto &[s, c] : count) denom += static_cast<double>(c * tokens(s));
  return static_cast<double>(tokens(sentences[i])) / denom;
}

double idf_weight(const std::string &sentence, const std::vector<std::vector<std::string>> &documents) {
  std::size_t df = 0;
  for (const auto &d : documents) {
    if (std::find(d.begin(), d.end(), sentence) != d.end()) ++df;
  }
  return std::log((static_cast<double>(documents.size()) + 1.0) / (1.0 + static_cast<double>(df)));
}

double alpha_pairwise(const std::vector<Rating> &ratings) {
  std::map<std::string, std::vector<std::string>> units;
  for (const auto &r : ratings) units[r.unit].push_back(r.label);
  std::vector<std::string> pooled;
  double observed = 0.0;
  for (const auto &[u, labels] : units) {
    if (labels.size() < 2) continue;
    double mismatched = 0.0;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      for (std::size_t b = 0; b < labels.size(); ++b) {
        if (a != b && labels[a] != labels[b]) mismatched += 1.0;
      }
    }
    observed += mismatched / static_cast<double>(labels.size() - 1);
    pooled.insert(pooled.end(), labels.begin(), labels.end());
  }
  const double n = static_cast<double>(pooled.size());
  double expected = 0.0;
  for (std::size_t a = 0; a < pooled.size(); ++a) {
    for (std::size_t b = 0; b < pooled.size(); ++b) {
      if (a != b && pooled[a] != pooled[b]) expected += 1.0;
    }
  }
  if (observed == 0.0) return 1.0;
  return 1.0 - (observed / n) / (expected / (n * (n - 1.0)));
}

}  // namespace oracle
