#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace logflat {

using IntVec = std::vector<mpz_class>;

IntVec int_vec(std::initializer_list<long> values);
std::string to_string(const IntVec& v);

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVec>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVec column(std::size_t j) const;
  IntVec row(std::size_t i) const;
  IntVec apply(const IntVec& x) const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix transpose() const;
  IntMatrix hcat(const IntMatrix& other) const;
  bool is_zero() const;
  bool operator==(const IntMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

mpz_class determinant(const IntMatrix& m);

struct SmithForm {
  IntMatrix U;
  IntMatrix U_inverse;
  IntMatrix D;
  IntMatrix V;
  std::size_t rank = 0;
};

// U·m·V = D, pivots chosen by smallest absolute value, ties by lowest (row, col).
SmithForm smith_normal_form(const IntMatrix& m);

// Columns span {x : m·x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);
std::optional<IntVec> solve_integer(const IntMatrix& m, const IntVec& y);

class FgAbGroup {
 public:
  FgAbGroup() = default;
  FgAbGroup(std::size_t rank, std::vector<mpz_class> torsion);

  static FgAbGroup free(std::size_t rank);
  static FgAbGroup cyclic(const mpz_class& n);

  std::size_t rank() const { return rank_; }
  const std::vector<mpz_class>& torsion() const { return torsion_; }
  std::size_t dim() const { return rank_ + torsion_.size(); }
  bool is_trivial() const { return dim() == 0; }
  bool is_free() const { return torsion_.empty(); }
  std::optional<mpz_class> order() const;

  IntVec zero() const { return IntVec(dim()); }
  IntVec basis(std::size_t i) const;
  IntVec reduce(IntVec x) const;
  IntVec add(const IntVec& a, const IntVec& b) const;
  IntVec sub(const IntVec& a, const IntVec& b) const;
  IntVec neg(const IntVec& a) const;
  IntVec scale(const mpz_class& c, const IntVec& a) const;
  bool is_zero(const IntVec& x) const;
  bool equal(const IntVec& a, const IntVec& b) const { return is_zero(sub(a, b)); }
  void check_element(const IntVec& x) const;
  // Order of the element, nullopt when infinite.
  std::optional<mpz_class> element_order(const IntVec& x) const;

  // dim × |torsion| matrix whose columns are d_i·e_{rank+i}.
  IntMatrix relation_matrix() const;

  std::string to_string() const;
  bool operator==(const FgAbGroup& other) const = default;

 private:
  std::size_t rank_ = 0;
  std::vector<mpz_class> torsion_;
};

FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b);
FgAbGroup power(const FgAbGroup& a, std::size_t n);

class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix);

  static GroupHom identity(const FgAbGroup& g);
  static GroupHom zero(const FgAbGroup& source, const FgAbGroup& target);
  static GroupHom from_images(const FgAbGroup& source, const FgAbGroup& target,
                              const std::vector<IntVec>& images);

  const FgAbGroup& source() const { return source_; }
  const FgAbGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  IntVec apply(const IntVec& x) const;
  // this ∘ inner
  GroupHom after(const GroupHom& inner) const;
  std::optional<IntVec> preimage(const IntVec& y) const;

  bool is_injective() const;
  bool is_surjective() const;
  bool is_isomorphism() const { return is_injective() && is_surjective(); }
  bool operator==(const GroupHom& other) const = default;

 private:
  FgAbGroup source_;
  FgAbGroup target_;
  IntMatrix matrix_;
};

struct Quotient {
  FgAbGroup group;
  GroupHom projection;
  // Column j is a lift to the source of canonical generator j of the quotient.
  IntMatrix section;
};

struct Subgroup {
  FgAbGroup group;
  GroupHom inclusion;
};

// ℤ^n modulo the column span of relations.
Quotient presented_group(const IntMatrix& relations);
Quotient cokernel(const GroupHom& h);
Subgroup kernel(const GroupHom& h);
Subgroup image(const GroupHom& h);
Subgroup subgroup_generated(const FgAbGroup& g, const std::vector<IntVec>& generators);
// Integer coefficients c with Σ c_i·gens_i = y in g.
std::optional<IntVec> solve_combination(const FgAbGroup& g, const std::vector<IntVec>& generators,
                                        const IntVec& y);

bool isomorphic(const FgAbGroup& a, const FgAbGroup& b);

struct HomGroup {
  FgAbGroup group;
  // Block coordinates in B^dim(A): block j holds the image of the j-th canonical generator of A.
  IntMatrix to_blocks;
  FgAbGroup source;
  FgAbGroup target;

  GroupHom to_hom(const IntVec& element) const;
};

HomGroup hom_group(const FgAbGroup& a, const FgAbGroup& b);

struct Extension {
  FgAbGroup middle;
  GroupHom inclusion;   // B → E
  GroupHom projection;  // E → A
};

struct Ext1 {
  FgAbGroup group;
  FgAbGroup cocycles;  // B^k, k = number of torsion summands of A
  GroupHom class_map;  // cocycles → group
  FgAbGroup source;
  FgAbGroup target;

  Extension realize(const IntVec& cocycle) const;
};

Ext1 ext1(const FgAbGroup& a, const FgAbGroup& b);

std::optional<GroupHom> split_surjection(const GroupHom& h);

}  // namespace logflat
