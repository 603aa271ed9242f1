#include <random>
#include <set>

#include "doctest.h"
#include "logflat/abgrp.hpp"
#include "logflat/error.hpp"

using namespace logflat;

namespace {

// Independent oracle: determinant by cofactor expansion.
mpz_class cofactor_det(const std::vector<std::vector<mpz_class>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    mpz_class term = m[0][j] * cofactor_det(minor);
    d += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return d;
}

std::vector<std::vector<mpz_class>> as_rows(const IntMatrix& m) {
  std::vector<std::vector<mpz_class>> r(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

// Independent oracle: rank over ℚ by Gaussian elimination.
std::size_t rational_rank(const IntMatrix& m) {
  std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t p = rank;
    while (p < m.rows() && a[p][col] == 0) ++p;
    if (p == m.rows()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || a[i][col] == 0) continue;
      mpq_class f = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < m.cols(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Oracle: |coker(·m : ℤ/n → ℤ/n)| by enumerating the image.
long brute_ext_order(long m, long n) {
  std::set<long> img;
  for (long x = 0; x < n; ++x) img.insert((m * x) % n);
  return n / static_cast<long>(img.size());
}

void check_smith(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  CHECK(s.U * m * s.V == s.D);
  CHECK(s.U * s.U_inverse == IntMatrix::identity(m.rows()));
  CHECK(abs(determinant(s.U)) == 1);
  CHECK(abs(determinant(s.V)) == 1);
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) CHECK(s.D(i, j) == 0);
  for (std::size_t i = 0; i + 1 < s.rank; ++i)
    CHECK(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
}

}  // namespace

TEST_CASE("smith normal form of [[2,4],[6,8]]") {
  IntMatrix m = IntMatrix::from_rows({{2, 4}, {6, 8}});
  // Oracle: d1 = gcd of entries, d1·d2 = |det|.
  mpz_class g = 0;
  for (long v : {2, 4, 6, 8}) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(v).get_mpz_t());
  mpz_class det = abs(cofactor_det(as_rows(m)));
  SmithForm s = smith_normal_form(m);
  CHECK(s.D(0, 0) == g);
  CHECK(s.D(1, 1) == det / g);
  CHECK(s.D(0, 0) == 2);
  CHECK(s.D(1, 1) == 4);
  check_smith(m);
}

TEST_CASE("smith normal form fixed points") {
  IntMatrix id = IntMatrix::identity(3);
  CHECK(smith_normal_form(id).D == id);
  IntMatrix z(2, 2);
  CHECK(smith_normal_form(z).D == z);
  CHECK(smith_normal_form(z).rank == 0);
}

TEST_CASE("smith normal form is deterministic and valid on random matrices") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-9, 9), dim(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
    check_smith(m);
    CHECK(smith_normal_form(m).D == smith_normal_form(m).D);
    CHECK(smith_normal_form(m).rank == rational_rank(m));
  }
}

TEST_CASE("group canonical form") {
  FgAbGroup g(1, {mpz_class(2), mpz_class(6)});
  CHECK(g.dim() == 3);
  CHECK(g.reduce(int_vec({-3, 5, -1})) == int_vec({-3, 1, 5}));
  CHECK(g.is_zero(int_vec({0, 2, 6})));
  CHECK(g.element_order(int_vec({0, 1, 2})) == mpz_class(6));
  CHECK_FALSE(g.element_order(int_vec({1, 0, 0})).has_value());
  CHECK_THROWS_AS(FgAbGroup(0, {mpz_class(4), mpz_class(6)}), Error);
  CHECK_THROWS_AS(g.reduce(int_vec({1, 2})), Error);
}

TEST_CASE("cokernel examples") {
  GroupHom diag = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(3), {int_vec({1, 1, 1})});
  Quotient q = cokernel(diag);
  CHECK(q.group == FgAbGroup::free(2));
  CHECK(q.projection.after(diag) == GroupHom::zero(FgAbGroup::free(1), q.group));

  GroupHom id = GroupHom::identity(FgAbGroup::free(1));
  CHECK(cokernel(id).group.is_trivial());

  GroupHom two = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(1), {int_vec({2})});
  CHECK(cokernel(two).group == FgAbGroup::cyclic(2));
}

TEST_CASE("cokernel of the nodal diagonal has first generator in positive degree") {
  GroupHom diag = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(2), {int_vec({1, 1})});
  Quotient q = cokernel(diag);
  CHECK(q.projection.apply(int_vec({1, 0})) == int_vec({1}));
  CHECK(q.projection.apply(int_vec({0, 1})) == int_vec({-1}));
}

TEST_CASE("kernel, image and cokernel are exact on random maps") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dist(-4, 4), dim(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t a = dim(rng), b = dim(rng);
    IntMatrix m(b, a);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < a; ++j) m(i, j) = dist(rng);
    GroupHom h(FgAbGroup::free(a), FgAbGroup::free(b), m);
    Subgroup k = kernel(h);
    Quotient c = cokernel(h);
    std::size_t r = rational_rank(m);
    CHECK(k.group.rank() == a - r);
    CHECK(k.group.torsion().empty());
    CHECK(c.group.rank() == b - r);
    CHECK(h.after(k.inclusion) == GroupHom::zero(k.group, h.target()));
    CHECK(c.projection.after(h) == GroupHom::zero(h.source(), c.group));
    if (r == b) {
      // |coker| = gcd of maximal minors; enumerate column subsets.
      mpz_class g = 0;
      std::vector<std::size_t> idx(b);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == b) {
          std::vector<std::vector<mpz_class>> sub(b, std::vector<mpz_class>(b));
          for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < b; ++j) sub[i][j] = m(i, idx[j]);
          mpz_class d = abs(cofactor_det(sub));
          mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
          return;
        }
        for (std::size_t s = start; s < a; ++s) {
          idx[depth] = s;
          rec(s + 1, depth + 1);
        }
      };
      rec(0, 0);
      CHECK(c.group.order() == g);
    }
    // Membership in the image agrees with vanishing in the cokernel.
    IntVec y(b);
    for (auto& v : y) v = dist(rng);
    CHECK(h.preimage(y).has_value() == c.group.is_zero(c.projection.apply(y)));
  }
}

TEST_CASE("ext and hom examples") {
  CHECK(ext1(FgAbGroup::cyclic(4), FgAbGroup::cyclic(6)).group == FgAbGroup::cyclic(2));
  for (const auto& b : {FgAbGroup::free(2), FgAbGroup::cyclic(6), FgAbGroup(1, {mpz_class(3)})})
    CHECK(ext1(FgAbGroup::free(1), b).group.is_trivial());
  CHECK(hom_group(FgAbGroup::cyclic(2), FgAbGroup::free(1)).group.is_trivial());
  CHECK(hom_group(FgAbGroup::cyclic(4), FgAbGroup::cyclic(6)).group == FgAbGroup::cyclic(2));
  CHECK(hom_group(FgAbGroup::free(2), FgAbGroup::cyclic(3)).group ==
        FgAbGroup(0, {mpz_class(3), mpz_class(3)}));
}

TEST_CASE("ext order equals gcd against the resolution oracle") {
  for (long m = 2; m <= 12; ++m)
    for (long n = 2; n <= 12; ++n) {
      Ext1 e = ext1(FgAbGroup::cyclic(m), FgAbGroup::cyclic(n));
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), mpz_class(m).get_mpz_t(), mpz_class(n).get_mpz_t());
      CHECK(e.group.order() == g);
      CHECK(e.group.order() == mpz_class(brute_ext_order(m, n)));
    }
}

TEST_CASE("hom group elements are homomorphisms") {
  FgAbGroup a(1, {mpz_class(4)}), b(0, {mpz_class(2), mpz_class(6)});
  HomGroup hg = hom_group(a, b);
  for (std::size_t i = 0; i < hg.group.dim(); ++i) {
    GroupHom f = hg.to_hom(hg.group.basis(i));
    CHECK(f.source() == a);
  }
  // |Hom(ℤ ⊕ ℤ/4, ℤ/2 ⊕ ℤ/6)| = |B| · |B[4]| = 12 · 4.
  CHECK(hg.group.order() == mpz_class(48));
}

TEST_CASE("ext classes realize extensions") {
  Ext1 e = ext1(FgAbGroup::cyclic(4), FgAbGroup::cyclic(6));
  Extension split = e.realize(int_vec({0}));
  CHECK(split.middle == direct_sum(FgAbGroup::cyclic(4), FgAbGroup::cyclic(6)));
  CHECK(split_surjection(split.projection).has_value());
  Extension twisted = e.realize(int_vec({1}));
  CHECK(twisted.middle == FgAbGroup::cyclic(24));
  CHECK_FALSE(split_surjection(twisted.projection).has_value());
  CHECK(twisted.projection.after(twisted.inclusion) ==
        GroupHom::zero(FgAbGroup::cyclic(6), FgAbGroup::cyclic(4)));
  CHECK(twisted.projection.is_surjective());
  CHECK(twisted.inclusion.is_injective());
  // A cocycle in the image of φ gives the split class.
  CHECK(e.group.is_zero(e.class_map.apply(int_vec({4}))));
}

TEST_CASE("split surjection examples") {
  GroupHom q = GroupHom::from_images(FgAbGroup::free(2), FgAbGroup::free(1),
                                     {int_vec({1}), int_vec({-1})});
  auto s = split_surjection(q);
  REQUIRE(s.has_value());
  CHECK(q.after(*s) == GroupHom::identity(FgAbGroup::free(1)));

  auto sid = split_surjection(GroupHom::identity(FgAbGroup::free(1)));
  REQUIRE(sid.has_value());
  CHECK(*sid == GroupHom::identity(FgAbGroup::free(1)));

  GroupHom mod2 = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::cyclic(2), {int_vec({1})});
  CHECK_FALSE(split_surjection(mod2).has_value());

  GroupHom two = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(1), {int_vec({2})});
  CHECK_THROWS_AS(split_surjection(two), Error);
}

TEST_CASE("split surjection sections are exact on random surjections") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> dist(-3, 3);
  int found = 0;
  for (int trial = 0; trial < 80; ++trial) {
    FgAbGroup src(2, {mpz_class(2), mpz_class(4)});
    FgAbGroup tgt(1, {mpz_class(2)});
    std::vector<IntVec> imgs;
    for (std::size_t j = 0; j < src.dim(); ++j) {
      IntVec v{mpz_class(dist(rng)), mpz_class(dist(rng))};
      if (j == 2) v[0] = 0;
      if (j == 3) v = tgt.scale(2, v), v[0] = 0;
      imgs.push_back(tgt.reduce(v));
    }
    GroupHom h = GroupHom::from_images(src, tgt, imgs);
    if (!h.is_surjective()) continue;
    auto s = split_surjection(h);
    if (s) {
      ++found;
      CHECK(h.after(*s) == GroupHom::identity(tgt));
    }
  }
  CHECK(found > 0);
}
