#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "logflat/presentation.hpp"

namespace logflat {

using QRow = std::vector<mpq_class>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(Field field, std::size_t rows, std::size_t cols);
  static Matrix identity(Field field, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }
  mpq_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  QRow apply(const QRow& x) const;
  bool is_zero() const;
  bool operator==(const Matrix& o) const;

  std::size_t rank() const;
  std::vector<QRow> nullspace() const;
  std::optional<QRow> solve(const QRow& b) const;
  std::optional<Matrix> inverse() const;

 private:
  Field field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpq_class> data_;
};

// A finite-dimensional presented module with its standard-monomial basis.
class FiniteModule {
 public:
  explicit FiniteModule(ModulePresentation m);

  const ModulePresentation& module() const { return m_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::pair<std::size_t, Exps>>& basis() const { return basis_; }
  QRow coordinates(const PolyVec& v) const;
  PolyVec element(const QRow& c) const;
  // Multiplication by f in the standard basis (columns are images of basis vectors).
  Matrix action(const Poly& f) const;

 private:
  ModulePresentation m_;
  std::vector<std::pair<std::size_t, Exps>> basis_;
  std::map<std::pair<std::size_t, Exps>, std::size_t> index_;
};

// Hom_R(M, N): each homomorphism is recorded by the images of the generators of M (in N, concatenated coordinates).
struct HomSpace {
  std::size_t dim;
  std::vector<QRow> basis;
};
HomSpace hom_space(const ModulePresentation& m, const FiniteModule& n);
std::size_t ext1_dim(const ModulePresentation& m, const FiniteModule& n);

}  // namespace logflat
