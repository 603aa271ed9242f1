#include "logflat/linalg.hpp"

#include "logflat/error.hpp"

namespace logflat {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) fail(ErrorCode::InvalidArgument, "matrix shapes do not compose");
  Matrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r(i, j) = field_.add(r(i, j), field_.mul((*this)(i, k), o(k, j)));
    }
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::InvalidArgument, "matrix shapes differ");
  Matrix r(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.sub(data_[i], o.data_[i]);
  return r;
}

QRow Matrix::apply(const QRow& x) const {
  if (x.size() != cols_) fail(ErrorCode::InvalidArgument, "vector length mismatch");
  QRow r(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0 && x[j] != 0) r[i] = field_.add(r[i], field_.mul((*this)(i, j), x[j]));
  return r;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> echelon(Matrix& a) {
  const Field& f = a.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t p = row;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    mpq_class inv = f.inv(a(row, c));
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) = f.mul(a(row, j), inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, c) == 0) continue;
      mpq_class k = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = f.sub(a(i, j), f.mul(k, a(row, j)));
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t Matrix::rank() const {
  Matrix a(*this);
  return echelon(a).size();
}

std::vector<QRow> Matrix::nullspace() const {
  Matrix a(*this);
  std::vector<std::size_t> piv = echelon(a);
  std::vector<bool> is_piv(cols_, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<QRow> out;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_piv[free]) continue;
    QRow v(cols_, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = field_.neg(a(r, free));
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<QRow> Matrix::solve(const QRow& b) const {
  if (b.size() != rows_) fail(ErrorCode::InvalidArgument, "right-hand side length mismatch");
  Matrix aug(field_, rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = field_.reduce(b[i]);
  }
  std::vector<std::size_t> piv = echelon(aug);
  if (!piv.empty() && piv.back() == cols_) return std::nullopt;
  QRow x(cols_, 0);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, cols_);
  return x;
}

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  Matrix aug(field_, rows_, 2 * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_ + i) = 1;
  }
  std::vector<std::size_t> piv = echelon(aug);
  if (piv.size() < rows_ || piv[rows_ - 1] >= cols_) return std::nullopt;
  Matrix inv(field_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
  return inv;
}

FiniteModule::FiniteModule(ModulePresentation m) : m_(std::move(m)), basis_(m_.standard_basis()) {
  for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
}

QRow FiniteModule::coordinates(const PolyVec& v) const {
  PolyVec nf = m_.normal_form(v);
  QRow c(basis_.size(), 0);
  for (std::size_t comp = 0; comp < nf.size(); ++comp)
    for (const auto& t : nf[comp].terms()) {
      auto it = index_.find({comp, t.e});
      if (it == index_.end()) fail(ErrorCode::Validation, "normal form left the standard basis");
      c[it->second] = t.c;
    }
  return c;
}

PolyVec FiniteModule::element(const QRow& c) const {
  const PolyRing& r = m_.ring().ambient();
  PolyVec v = zero_vec(r, m_.rank());
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (c[i] != 0) v[basis_[i].first] += r.monomial(basis_[i].second, c[i]);
  return v;
}

Matrix FiniteModule::action(const Poly& f) const {
  Matrix a(m_.ring().field(), dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const PolyRing& r = m_.ring().ambient();
    PolyVec v = zero_vec(r, m_.rank());
    v[basis_[j].first] = r.monomial(basis_[j].second) * f;
    QRow c = coordinates(v);
    for (std::size_t i = 0; i < dim(); ++i) a(i, j) = c[i];
  }
  return a;
}

namespace {

// Hom(F_a, N) → Hom(F_b, N) induced by d : F_b → F_a (columns of d are the images of F_b's basis).
Matrix induced(const FiniteModule& n, std::size_t a, const std::vector<PolyVec>& d) {
  const std::size_t dn = n.dim(), b = d.size();
  Matrix out(n.module().ring().field(), b * dn, a * dn);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      if (d[j][i].is_zero()) continue;
      Matrix act = n.action(d[j][i]);
      for (std::size_t r = 0; r < dn; ++r)
        for (std::size_t c = 0; c < dn; ++c) out(j * dn + r, i * dn + c) = act(r, c);
    }
  return out;
}

}  // namespace

HomSpace hom_space(const ModulePresentation& m, const FiniteModule& n) {
  Resolution2 res = resolve2(m);
  Matrix d0 = induced(n, res.f0, res.d1);
  std::vector<QRow> basis = d0.nullspace();
  return {basis.size(), basis};
}

std::size_t ext1_dim(const ModulePresentation& m, const FiniteModule& n) {
  Resolution2 res = resolve2(m);
  const std::size_t dn = n.dim();
  std::size_t rank0 = induced(n, res.f0, res.d1).rank();
  std::size_t rank1 = res.d2.empty() ? 0 : induced(n, res.f1, res.d2).rank();
  return res.f1 * dn - rank1 - rank0;
}

}  // namespace logflat
