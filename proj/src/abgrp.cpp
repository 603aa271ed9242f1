#include "logflat/abgrp.hpp"

#include <algorithm>
#include <sstream>

#include "logflat/error.hpp"

namespace logflat {

IntVec int_vec(std::initializer_list<long> values) {
  IntVec v;
  for (long x : values) v.emplace_back(x);
  return v;
}

std::string to_string(const IntVec& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i].get_str();
  out << ")";
  return out.str();
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) fail(ErrorCode::InvalidArgument, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVec>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) fail(ErrorCode::InvalidArgument, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

IntVec IntMatrix::column(std::size_t j) const {
  IntVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntVec IntMatrix::row(std::size_t i) const {
  IntVec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

IntVec IntMatrix::apply(const IntVec& x) const {
  if (x.size() != cols_) fail(ErrorCode::InvalidArgument, "matrix/vector size mismatch");
  IntVec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn((*this)(i, j)) != 0 && sgn(x[j]) != 0) y[i] += (*this)(i, j) * x[j];
  return y;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) fail(ErrorCode::InvalidArgument, "matrix product size mismatch");
  IntMatrix r(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const mpz_class& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
    }
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::hcat(const IntMatrix& other) const {
  if (rows_ != other.rows_) fail(ErrorCode::InvalidArgument, "hcat row mismatch");
  IntMatrix r(rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j) r(i, cols_ + j) = other(i, j);
  }
  return r;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpz_class& x) { return sgn(x) == 0; });
}

mpz_class determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  // Bareiss fraction-free elimination.
  IntMatrix a = m;
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  mpz_class sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && sgn(a(p, k)) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

void swap_rows(IntMatrix& a, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}
void swap_cols(IntMatrix& a, std::size_t i, std::size_t j) {
  for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
}
// row_i += c·row_j
void add_row(IntMatrix& a, std::size_t i, std::size_t j, const mpz_class& c) {
  for (std::size_t k = 0; k < a.cols(); ++k)
    if (sgn(a(j, k)) != 0) a(i, k) += c * a(j, k);
}
// col_i += c·col_j
void add_col(IntMatrix& a, std::size_t i, std::size_t j, const mpz_class& c) {
  for (std::size_t k = 0; k < a.rows(); ++k)
    if (sgn(a(k, j)) != 0) a(k, i) += c * a(k, j);
}

struct SmithState {
  IntMatrix A, U, Ui, V;

  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_rows(A, i, j);
    swap_rows(U, i, j);
    swap_cols(Ui, i, j);
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_cols(A, i, j);
    swap_cols(V, i, j);
  }
  void row_add(std::size_t i, std::size_t j, const mpz_class& c) {
    add_row(A, i, j, c);
    add_row(U, i, j, c);
    add_col(Ui, j, i, -c);
  }
  void col_add(std::size_t i, std::size_t j, const mpz_class& c) {
    add_col(A, i, j, c);
    add_col(V, i, j, c);
  }
  void row_negate(std::size_t i) {
    for (std::size_t k = 0; k < A.cols(); ++k) A(i, k) = -A(i, k);
    for (std::size_t k = 0; k < U.cols(); ++k) U(i, k) = -U(i, k);
    for (std::size_t k = 0; k < Ui.rows(); ++k) Ui(k, i) = -Ui(k, i);
  }
};

bool better_pivot(const mpz_class& cand, std::size_t ci, std::size_t cj, const mpz_class* best,
                  std::size_t bi, std::size_t bj) {
  if (best == nullptr) return true;
  int c = mpz_cmpabs(cand.get_mpz_t(), best->get_mpz_t());
  if (c != 0) return c < 0;
  return std::make_pair(ci, cj) < std::make_pair(bi, bj);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  SmithState s{m, IntMatrix::identity(r), IntMatrix::identity(r), IntMatrix::identity(c)};
  std::size_t t = 0;
  for (; t < std::min(r, c); ++t) {
    const mpz_class* best = nullptr;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (sgn(s.A(i, j)) != 0 && better_pivot(s.A(i, j), i, j, best, bi, bj)) {
          best = &s.A(i, j);
          bi = i;
          bj = j;
        }
    if (best == nullptr) break;
    s.row_swap(t, bi);
    s.col_swap(t, bj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (sgn(s.A(i, t)) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), s.A(i, t).get_mpz_t(), s.A(t, t).get_mpz_t());
        if (sgn(q) != 0) s.row_add(i, t, -q);
        if (sgn(s.A(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (sgn(s.A(t, j)) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), s.A(t, j).get_mpz_t(), s.A(t, t).get_mpz_t());
        if (sgn(q) != 0) s.col_add(j, t, -q);
        if (sgn(s.A(t, j)) != 0) clean = false;
      }
      if (!clean) {
        // Bring the smallest remainder of row t / column t into the pivot position.
        const mpz_class* b = nullptr;
        std::size_t pi = t, pj = t;
        for (std::size_t i = t; i < r; ++i)
          if (sgn(s.A(i, t)) != 0 && better_pivot(s.A(i, t), i, t, b, pi, pj)) {
            b = &s.A(i, t);
            pi = i;
            pj = t;
          }
        for (std::size_t j = t + 1; j < c; ++j)
          if (sgn(s.A(t, j)) != 0 && better_pivot(s.A(t, j), t, j, b, pi, pj)) {
            b = &s.A(t, j);
            pi = t;
            pj = j;
          }
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < r && divisible; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (!mpz_divisible_p(s.A(i, j).get_mpz_t(), s.A(t, t).get_mpz_t())) {
            s.row_add(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (sgn(s.A(t, t)) < 0) s.row_negate(t);
  }
  return SmithForm{std::move(s.U), std::move(s.Ui), std::move(s.A), std::move(s.V), t};
}

IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  std::vector<IntVec> cols;
  for (std::size_t j = s.rank; j < m.cols(); ++j) cols.push_back(s.V.column(j));
  return IntMatrix::from_columns(m.cols(), cols);
}

std::optional<IntVec> solve_integer(const IntMatrix& m, const IntVec& y) {
  if (y.size() != m.rows()) fail(ErrorCode::InvalidArgument, "solve_integer size mismatch");
  SmithForm s = smith_normal_form(m);
  IntVec uy = s.U.apply(y);
  IntVec w(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(uy[i].get_mpz_t(), s.D(i, i).get_mpz_t())) return std::nullopt;
      mpz_divexact(w[i].get_mpz_t(), uy[i].get_mpz_t(), s.D(i, i).get_mpz_t());
    } else if (sgn(uy[i]) != 0) {
      return std::nullopt;
    }
  }
  return s.V.apply(w);
}

FgAbGroup::FgAbGroup(std::size_t rank, std::vector<mpz_class> torsion)
    : rank_(rank), torsion_(std::move(torsion)) {
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) fail(ErrorCode::InvalidArgument, "torsion coefficient below 2");
    if (i > 0 && !mpz_divisible_p(torsion_[i].get_mpz_t(), torsion_[i - 1].get_mpz_t()))
      fail(ErrorCode::InvalidArgument, "torsion coefficients violate the divisibility chain");
  }
}

FgAbGroup FgAbGroup::free(std::size_t rank) { return FgAbGroup(rank, {}); }

FgAbGroup FgAbGroup::cyclic(const mpz_class& n) {
  if (n == 0) return free(1);
  mpz_class a = abs(n);
  if (a == 1) return FgAbGroup();
  return FgAbGroup(0, {a});
}

std::optional<mpz_class> FgAbGroup::order() const {
  if (rank_ > 0) return std::nullopt;
  mpz_class o = 1;
  for (const auto& d : torsion_) o *= d;
  return o;
}

IntVec FgAbGroup::basis(std::size_t i) const {
  IntVec v(dim());
  v.at(i) = 1;
  return v;
}

void FgAbGroup::check_element(const IntVec& x) const {
  if (x.size() != dim())
    fail(ErrorCode::AmbientMismatch, "element " + logflat::to_string(x) + " not in " + to_string());
}

IntVec FgAbGroup::reduce(IntVec x) const {
  check_element(x);
  for (std::size_t i = 0; i < torsion_.size(); ++i)
    mpz_fdiv_r(x[rank_ + i].get_mpz_t(), x[rank_ + i].get_mpz_t(), torsion_[i].get_mpz_t());
  return x;
}

IntVec FgAbGroup::add(const IntVec& a, const IntVec& b) const {
  check_element(a);
  check_element(b);
  IntVec r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = a[i] + b[i];
  return reduce(std::move(r));
}

IntVec FgAbGroup::sub(const IntVec& a, const IntVec& b) const {
  check_element(a);
  check_element(b);
  IntVec r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = a[i] - b[i];
  return reduce(std::move(r));
}

IntVec FgAbGroup::neg(const IntVec& a) const { return sub(zero(), a); }

IntVec FgAbGroup::scale(const mpz_class& c, const IntVec& a) const {
  check_element(a);
  IntVec r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = c * a[i];
  return reduce(std::move(r));
}

bool FgAbGroup::is_zero(const IntVec& x) const {
  IntVec r = reduce(x);
  return std::all_of(r.begin(), r.end(), [](const mpz_class& v) { return sgn(v) == 0; });
}

std::optional<mpz_class> FgAbGroup::element_order(const IntVec& x) const {
  IntVec r = reduce(x);
  for (std::size_t i = 0; i < rank_; ++i)
    if (sgn(r[i]) != 0) return std::nullopt;
  mpz_class o = 1;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    mpz_class g, ord;
    mpz_gcd(g.get_mpz_t(), r[rank_ + i].get_mpz_t(), torsion_[i].get_mpz_t());
    ord = torsion_[i] / g;
    mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), ord.get_mpz_t());
  }
  return o;
}

IntMatrix FgAbGroup::relation_matrix() const {
  IntMatrix m(dim(), torsion_.size());
  for (std::size_t i = 0; i < torsion_.size(); ++i) m(rank_ + i, i) = torsion_[i];
  return m;
}

std::string FgAbGroup::to_string() const {
  std::ostringstream out;
  bool first = true;
  if (rank_ > 0 || torsion_.empty()) {
    out << "Z^" << rank_;
    first = false;
  }
  for (const auto& d : torsion_) {
    out << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  return out.str();
}

FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  std::vector<IntVec> cols;
  for (std::size_t i = 0; i < a.torsion().size(); ++i) {
    IntVec v(a.dim() + b.dim());
    v[a.rank() + i] = a.torsion()[i];
    cols.push_back(v);
  }
  for (std::size_t i = 0; i < b.torsion().size(); ++i) {
    IntVec v(a.dim() + b.dim());
    v[a.dim() + b.rank() + i] = b.torsion()[i];
    cols.push_back(v);
  }
  return presented_group(IntMatrix::from_columns(a.dim() + b.dim(), cols)).group;
}

FgAbGroup power(const FgAbGroup& a, std::size_t n) {
  FgAbGroup r;
  for (std::size_t i = 0; i < n; ++i) r = direct_sum(r, a);
  return r;
}

GroupHom::GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
    fail(ErrorCode::InvalidArgument, "group hom matrix has wrong shape");
  for (std::size_t j = 0; j < source_.dim(); ++j) {
    IntVec col = target_.reduce(matrix_.column(j));
    for (std::size_t i = 0; i < target_.dim(); ++i) matrix_(i, j) = col[i];
    if (j >= source_.rank()) {
      const mpz_class& d = source_.torsion()[j - source_.rank()];
      if (!target_.is_zero(target_.scale(d, col)))
        fail(ErrorCode::InvalidArgument, "group hom does not respect torsion");
    }
  }
}

GroupHom GroupHom::identity(const FgAbGroup& g) { return GroupHom(g, g, IntMatrix::identity(g.dim())); }

GroupHom GroupHom::zero(const FgAbGroup& source, const FgAbGroup& target) {
  return GroupHom(source, target, IntMatrix(target.dim(), source.dim()));
}

GroupHom GroupHom::from_images(const FgAbGroup& source, const FgAbGroup& target,
                               const std::vector<IntVec>& images) {
  if (images.size() != source.dim()) fail(ErrorCode::InvalidArgument, "wrong number of images");
  return GroupHom(source, target, IntMatrix::from_columns(target.dim(), images));
}

IntVec GroupHom::apply(const IntVec& x) const {
  source_.check_element(x);
  return target_.reduce(matrix_.apply(x));
}

GroupHom GroupHom::after(const GroupHom& inner) const {
  if (!(inner.target_ == source_)) fail(ErrorCode::InvalidArgument, "composition type mismatch");
  return GroupHom(inner.source_, target_, matrix_ * inner.matrix_);
}

std::optional<IntVec> GroupHom::preimage(const IntVec& y) const {
  target_.check_element(y);
  IntMatrix sys = matrix_.hcat(target_.relation_matrix());
  auto sol = solve_integer(sys, y);
  if (!sol) return std::nullopt;
  IntVec x(sol->begin(), sol->begin() + static_cast<long>(source_.dim()));
  return source_.reduce(x);
}

bool GroupHom::is_injective() const { return kernel(*this).group.is_trivial(); }
bool GroupHom::is_surjective() const { return cokernel(*this).group.is_trivial(); }

Quotient presented_group(const IntMatrix& relations) {
  const std::size_t n = relations.rows();
  SmithForm s = smith_normal_form(relations);
  std::vector<std::size_t> free_rows, torsion_rows;
  std::vector<mpz_class> torsion;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < s.rank) {
      if (s.D(i, i) == 1) continue;
      torsion_rows.push_back(i);
      torsion.push_back(s.D(i, i));
    } else {
      free_rows.push_back(i);
    }
  }
  FgAbGroup g(free_rows.size(), torsion);
  std::vector<std::size_t> order = free_rows;
  order.insert(order.end(), torsion_rows.begin(), torsion_rows.end());
  IntMatrix proj(g.dim(), n), section(n, g.dim());
  for (std::size_t k = 0; k < order.size(); ++k) {
    mpz_class sign = 1;
    if (k < free_rows.size()) {
      // Free coordinates: make the first nonzero projection entry positive.
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(s.U(order[k], j)) != 0) {
          sign = sgn(s.U(order[k], j)) < 0 ? -1 : 1;
          break;
        }
    }
    for (std::size_t j = 0; j < n; ++j) proj(k, j) = sign * s.U(order[k], j);
    for (std::size_t j = 0; j < n; ++j) section(j, k) = sign * s.U_inverse(j, order[k]);
  }
  return Quotient{g, GroupHom(FgAbGroup::free(n), g, proj), section};
}

Quotient cokernel(const GroupHom& h) {
  IntMatrix rel = h.matrix().hcat(h.target().relation_matrix());
  Quotient q = presented_group(rel);
  return Quotient{q.group, GroupHom(h.target(), q.group, q.projection.matrix()), q.section};
}

Subgroup subgroup_generated(const FgAbGroup& g, const std::vector<IntVec>& generators) {
  for (const auto& x : generators) g.check_element(x);
  const std::size_t s = generators.size();
  IntMatrix gens = IntMatrix::from_columns(g.dim(), generators);
  IntMatrix ker = integer_kernel(gens.hcat(g.relation_matrix()));
  IntMatrix rel(s, ker.cols());
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < ker.cols(); ++j) rel(i, j) = ker(i, j);
  Quotient q = presented_group(rel);
  std::vector<IntVec> images;
  for (std::size_t k = 0; k < q.group.dim(); ++k) images.push_back(g.reduce(gens.apply(q.section.column(k))));
  return Subgroup{q.group, GroupHom::from_images(q.group, g, images)};
}

Subgroup kernel(const GroupHom& h) {
  IntMatrix sys = h.matrix().hcat(h.target().relation_matrix());
  IntMatrix ker = integer_kernel(sys);
  std::vector<IntVec> gens;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    IntVec x(h.source().dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = ker(i, j);
    gens.push_back(h.source().reduce(x));
  }
  return subgroup_generated(h.source(), gens);
}

Subgroup image(const GroupHom& h) {
  std::vector<IntVec> gens;
  for (std::size_t j = 0; j < h.source().dim(); ++j) gens.push_back(h.apply(h.source().basis(j)));
  return subgroup_generated(h.target(), gens);
}

std::optional<IntVec> solve_combination(const FgAbGroup& g, const std::vector<IntVec>& generators,
                                        const IntVec& y) {
  g.check_element(y);
  IntMatrix sys = IntMatrix::from_columns(g.dim(), generators).hcat(g.relation_matrix());
  auto sol = solve_integer(sys, y);
  if (!sol) return std::nullopt;
  return IntVec(sol->begin(), sol->begin() + static_cast<long>(generators.size()));
}

bool isomorphic(const FgAbGroup& a, const FgAbGroup& b) { return a == b; }

namespace {

// Block coordinates: B^n presented on ℤ^(n·dim B) with blockwise torsion relations.
Quotient block_power(const FgAbGroup& b, std::size_t n) {
  const std::size_t m = b.dim();
  std::vector<IntVec> cols;
  for (std::size_t blk = 0; blk < n; ++blk)
    for (std::size_t i = 0; i < b.torsion().size(); ++i) {
      IntVec v(n * m);
      v[blk * m + b.rank() + i] = b.torsion()[i];
      cols.push_back(v);
    }
  return presented_group(IntMatrix::from_columns(n * m, cols));
}

// φ : B^(r+k) → B^k, (b_j) ↦ (d_i·b_{r+i}); Hom = ker φ, Ext¹ = coker φ.
struct ResolutionMap {
  Quotient big;
  Quotient small;
  GroupHom phi;
};

ResolutionMap resolution_map(const FgAbGroup& a, const FgAbGroup& b) {
  const std::size_t n = a.dim(), k = a.torsion().size(), m = b.dim(), r = a.rank();
  Quotient big = block_power(b, n), small = block_power(b, k);
  IntMatrix block(k * m, n * m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < m; ++c) block(i * m + c, (r + i) * m + c) = a.torsion()[i];
  IntMatrix mat = small.projection.matrix() * block * big.section;
  GroupHom phi(big.group, small.group, mat);
  return ResolutionMap{big, small, phi};
}

}  // namespace

GroupHom HomGroup::to_hom(const IntVec& element) const {
  group.check_element(element);
  IntVec flat = to_blocks.apply(element);
  std::vector<IntVec> images;
  const std::size_t m = target.dim();
  for (std::size_t j = 0; j < source.dim(); ++j)
    images.push_back(target.reduce(IntVec(flat.begin() + static_cast<long>(j * m),
                                          flat.begin() + static_cast<long>((j + 1) * m))));
  return GroupHom::from_images(source, target, images);
}

HomGroup hom_group(const FgAbGroup& a, const FgAbGroup& b) {
  ResolutionMap rm = resolution_map(a, b);
  Subgroup ker = kernel(rm.phi);
  return HomGroup{ker.group, rm.big.section * ker.inclusion.matrix(), a, b};
}

Ext1 ext1(const FgAbGroup& a, const FgAbGroup& b) {
  ResolutionMap rm = resolution_map(a, b);
  Quotient coker = cokernel(rm.phi);
  FgAbGroup cocycles = FgAbGroup::free(a.torsion().size() * b.dim());
  GroupHom class_map(cocycles, coker.group,
                     coker.projection.matrix() * rm.small.projection.matrix());
  return Ext1{coker.group, cocycles, class_map, a, b};
}

Extension Ext1::realize(const IntVec& cocycle) const {
  const FgAbGroup& a = source;
  const FgAbGroup& b = target;
  const std::size_t k = a.torsion().size(), m = b.dim(), r = a.rank(), n = a.dim();
  if (cocycle.size() != k * m) fail(ErrorCode::InvalidArgument, "cocycle has wrong length");
  // E = (B ⊕ ℤ^n) / ⟨B-relations, (−c_i, d_i·e_{r+i})⟩
  std::vector<IntVec> rels;
  for (std::size_t i = 0; i < b.torsion().size(); ++i) {
    IntVec v(m + n);
    v[b.rank() + i] = b.torsion()[i];
    rels.push_back(v);
  }
  for (std::size_t i = 0; i < k; ++i) {
    IntVec v(m + n);
    for (std::size_t c = 0; c < m; ++c) v[c] = -cocycle[i * m + c];
    v[m + r + i] = a.torsion()[i];
    rels.push_back(v);
  }
  Quotient e = presented_group(IntMatrix::from_columns(m + n, rels));
  std::vector<IntVec> inc;
  for (std::size_t c = 0; c < m; ++c) {
    IntVec v(m + n);
    v[c] = 1;
    inc.push_back(e.projection.apply(v));
  }
  std::vector<IntVec> proj;
  for (std::size_t j = 0; j < e.group.dim(); ++j) {
    IntVec lift = e.section.column(j);
    IntVec img(n);
    for (std::size_t t = 0; t < n; ++t) img[t] = lift[m + t];
    proj.push_back(a.reduce(img));
  }
  return Extension{e.group, GroupHom::from_images(b, e.group, inc),
                   GroupHom::from_images(e.group, a, proj)};
}

std::optional<GroupHom> split_surjection(const GroupHom& h) {
  if (!h.is_surjective()) fail(ErrorCode::NotSurjective, "split_surjection needs a surjective map");
  const FgAbGroup& e = h.source();
  const FgAbGroup& a = h.target();
  Subgroup ker = kernel(h);
  std::vector<IntVec> images;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    auto y0 = h.preimage(a.basis(j));
    if (!y0) fail(ErrorCode::NotSurjective, "generator without preimage");
    if (j < a.rank()) {
      images.push_back(*y0);
      continue;
    }
    // Need x ∈ ker h with d·(y0 + x) = 0.
    const mpz_class& d = a.torsion()[j - a.rank()];
    IntMatrix kmat = ker.inclusion.matrix();
    IntMatrix scaled(kmat.rows(), kmat.cols());
    for (std::size_t p = 0; p < kmat.rows(); ++p)
      for (std::size_t q = 0; q < kmat.cols(); ++q) scaled(p, q) = d * kmat(p, q);
    IntMatrix sys = scaled.hcat(e.relation_matrix());
    IntVec rhs(e.dim());
    for (std::size_t p = 0; p < e.dim(); ++p) rhs[p] = -d * (*y0)[p];
    auto sol = solve_integer(sys, rhs);
    if (!sol) return std::nullopt;
    IntVec c(sol->begin(), sol->begin() + static_cast<long>(kmat.cols()));
    images.push_back(e.add(*y0, e.reduce(kmat.apply(c))));
  }
  return GroupHom::from_images(a, e, images);
}

}  // namespace logflat
