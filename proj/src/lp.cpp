#include "logflat/lp.hpp"

#include "logflat/error.hpp"

namespace logflat {

std::optional<QVec> lp_feasible(const std::vector<QVec>& a, const QVec& b) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  if (b.size() != m) fail(ErrorCode::InvalidArgument, "lp: rhs size mismatch");
  if (m == 0) return QVec(n);
  // Tableau columns: n structural, m artificial, then rhs.
  const std::size_t width = n + m + 1;
  std::vector<QVec> t(m, QVec(width));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) fail(ErrorCode::InvalidArgument, "lp: ragged matrix");
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = flip ? mpq_class(-a[i][j]) : a[i][j];
    t[i][n + i] = 1;
    t[i][n + m] = flip ? mpq_class(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // Reduced costs of min Σ artificials.
  QVec cost(width);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < width; ++j)
      if (j < n || j == n + m) cost[j] -= t[i][j];
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      mpq_class ratio = t[i][n + m] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    mpq_class piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      mpq_class f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j)
        if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
    }
    if (cost[enter] != 0) {
      mpq_class f = cost[enter];
      for (std::size_t j = 0; j < width; ++j)
        if (t[leave][j] != 0) cost[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  if (cost[n + m] != 0) return std::nullopt;
  QVec x(n);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = t[i][n + m];
    else if (t[i][n + m] != 0) return std::nullopt;
  return x;
}

std::optional<QVec> separating_functional(const std::vector<QVec>& vectors,
                                          const std::vector<bool>& zero_set, std::size_t dim) {
  const std::size_t k = vectors.size();
  if (k == 0) return QVec(dim);
  std::size_t slacks = 0;
  for (std::size_t j = 0; j < k; ++j)
    if (!zero_set[j]) ++slacks;
  const std::size_t n = 2 * dim + slacks;
  std::vector<QVec> a;
  QVec b;
  std::size_t s = 0;
  for (std::size_t j = 0; j < k; ++j) {
    QVec row(n);
    for (std::size_t c = 0; c < dim; ++c) {
      row[c] = vectors[j][c];
      row[dim + c] = -vectors[j][c];
    }
    if (zero_set[j]) {
      b.push_back(0);
    } else {
      row[2 * dim + s++] = -1;
      b.push_back(1);
    }
    a.push_back(row);
  }
  auto x = lp_feasible(a, b);
  if (!x) return std::nullopt;
  QVec w(dim);
  for (std::size_t c = 0; c < dim; ++c) w[c] = (*x)[c] - (*x)[dim + c];
  return w;
}

std::optional<QVec> cone_combination(const std::vector<QVec>& vectors, const QVec& x,
                                     std::size_t dim) {
  std::vector<QVec> a(dim, QVec(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j)
    for (std::size_t c = 0; c < dim; ++c) a[c][j] = vectors[j][c];
  return lp_feasible(a, x);
}

}  // namespace logflat
