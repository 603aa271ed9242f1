#include "logflat/descent.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "logflat/error.hpp"
#include "logflat/groebner.hpp"
#include "logflat/linalg.hpp"

namespace logflat {

namespace {

std::vector<Poly> nonzero_in(const RingPresentation& r, const std::vector<Poly>& gens) {
  std::vector<Poly> out;
  for (const auto& g : gens)
    if (!r.is_zero(g)) out.push_back(g);
  return out;
}

std::string fresh(std::vector<std::string>& taken, std::string name, const std::string& suffix) {
  while (std::find(taken.begin(), taken.end(), name) != taken.end()) name += suffix;
  taken.push_back(name);
  return name;
}

struct Presented {
  PolyRing ring;
  std::vector<Poly> relations;
  std::vector<Poly> img1, img2;  // images of the variables under p₁, p₂
};

// Drops a variable t whenever t ≡ g(other variables) in the quotient, substituting g.
Presented prune(Presented p) {
  for (std::size_t t = p.ring.nvars(); t-- > 0;) {
    const std::size_t n = p.ring.nvars();
    if (n == 0) break;
    std::vector<std::string> names{p.ring.vars()[t]};
    for (std::size_t i = 0; i < n; ++i)
      if (i != t) names.push_back(p.ring.vars()[i]);
    PolyRing elim(p.ring.field(), names, MonomialOrder::blocks({1, n - 1}));
    std::vector<Poly> to_elim(n);
    for (std::size_t i = 0, k = 1; i < n; ++i) to_elim[i] = i == t ? elim.var(0) : elim.var(k++);
    std::vector<Poly> rels;
    for (const auto& r : p.relations) rels.push_back(r.map(elim, to_elim));
    Poly nf = RingPresentation(elim, rels).normal_form(elim.var(0));
    bool free_of_t = true;
    for (const auto& term : nf.terms())
      if (term.e[0] != 0) free_of_t = false;
    if (!free_of_t) continue;

    std::vector<std::string> kept(names.begin() + 1, names.end());
    PolyRing small(p.ring.field(), kept);
    std::vector<Poly> from_elim{small.zero()};
    for (std::size_t i = 0; i < n - 1; ++i) from_elim.push_back(small.var(i));
    Poly sub = nf.map(small, from_elim);
    std::vector<Poly> to_small(n);
    for (std::size_t i = 0, k = 0; i < n; ++i) to_small[i] = i == t ? sub : small.var(k++);
    std::vector<Poly> new_rels;
    for (const auto& r : p.relations) new_rels.push_back(r.map(small, to_small));
    Presented q{small, RingPresentation(small, new_rels).reduced_relations(), {}, {}};
    for (std::size_t i = 0; i < n; ++i)
      if (i != t) {
        q.img1.push_back(p.img1[i]);
        q.img2.push_back(p.img2[i]);
      }
    p = std::move(q);
  }
  return p;
}

void check_over(const ModulePresentation& m, const RingPresentation& r, const char* what) {
  if (m.ring().ambient() != r.ambient()) fail(ErrorCode::InvalidArgument, std::string("module is not over ") + what);
}

RingMap to_c0(const GluingDatum& g) {
  std::vector<Poly> imgs;
  for (const auto& p : g.p1.images()) imgs.push_back(g.f1.apply(p));
  return RingMap(g.c, g.c0, imgs);
}

// M over the target of a surjection q : C → R with kernel K, as a C-module.
ModulePresentation restrict_along(const RingMap& q, const std::vector<Poly>& kernel, const ModulePresentation& m) {
  const PolyRing& a = q.source().ambient();
  std::vector<PolyVec> rel;
  for (const auto& v : m.relations()) {
    PolyVec w;
    for (const auto& e : v) {
      auto pre = q.preimage(e);
      if (!pre) fail(ErrorCode::Validation, "restriction along a map that is not surjective");
      w.push_back(*pre);
    }
    rel.push_back(std::move(w));
  }
  for (const auto& k : kernel)
    for (std::size_t c = 0; c < m.rank(); ++c) rel.push_back(vec_scale(k, unit_vec(a, m.rank(), c)));
  return ModulePresentation(q.source(), m.rank(), rel);
}

PolyVec map_vec(const RingMap& f, const PolyVec& v) {
  PolyVec out;
  for (const auto& e : v) out.push_back(f.apply(e));
  return out;
}

struct Descent {
  Subquotient d;
  ModulePresentation sum;  // M₁ ⊕ M₂ over C
};

Descent descend(const DescentDatum& d) {
  const GluingDatum& g = d.gluing;
  ModulePresentation m1c = restrict_to_C(g, 1, d.m1), m2c = restrict_to_C(g, 2, d.m2);
  RingMap q = to_c0(g);
  ModulePresentation m0c = restrict_along(q, g.k0, d.m2_0());
  ModulePresentation sum = m1c.direct_sum(m2c);
  const PolyRing& a = g.c.ambient();
  const std::size_t r2 = d.m2.rank();
  std::vector<PolyVec> images;
  for (const auto& col : d.phi) {
    PolyVec w;
    for (const auto& e : col) w.push_back(*q.preimage(e));
    images.push_back(std::move(w));
  }
  for (std::size_t j = 0; j < r2; ++j) images.push_back(vec_scale(-a.one(), unit_vec(a, r2, j)));
  return {kernel(ModuleMap{sum, m0c, images}), sum};
}

// ---- linear algebra on finite modules ----

Matrix from_columns(const Field& k, std::size_t rows, const std::vector<QRow>& cols) {
  Matrix m(k, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  return m;
}

Matrix hcat(const Field& k, const std::vector<Matrix>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows = std::max(rows, b.rows());
    cols += b.cols();
  }
  Matrix out(k, rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, off + j) = b(i, j);
    off += b.cols();
  }
  return out;
}

Matrix vcat(const Field& k, const Matrix& a, const Matrix& b) {
  Matrix out(k, a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

Matrix negate(const Matrix& a) { return Matrix(a.field(), a.rows(), a.cols()) - a; }

std::size_t rank_of(const Matrix& m) { return m.cols() == 0 || m.rows() == 0 ? 0 : m.rank(); }

// Coordinates of N in those of N′ along a ring map applied entrywise.
Matrix projection(const FiniteModule& from, const FiniteModule& to, const RingMap& f) {
  Matrix out(f.target().field(), to.dim(), from.dim());
  for (std::size_t j = 0; j < from.dim(); ++j) {
    QRow e(from.dim(), 0);
    e[j] = 1;
    QRow c = to.coordinates(map_vec(f, from.element(e)));
    for (std::size_t i = 0; i < to.dim(); ++i) out(i, j) = c[i];
  }
  return out;
}

Matrix block_diagonal(const Matrix& a, std::size_t copies) {
  Matrix out(a.field(), a.rows() * copies, a.cols() * copies);
  for (std::size_t b = 0; b < copies; ++b)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) out(b * a.rows() + i, b * a.cols() + j) = a(i, j);
  return out;
}

// Hom(F_a, N) → Hom(F_b, N) along d, coordinates concatenated per generator.
Matrix induced(const FiniteModule& n, std::size_t a, const std::vector<PolyVec>& d) {
  const std::size_t dn = n.dim();
  Matrix out(n.module().ring().field(), d.size() * dn, a * dn);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d[j][i].is_zero()) continue;
      Matrix act = n.action(d[j][i]);
      for (std::size_t r = 0; r < dn; ++r)
        for (std::size_t c = 0; c < dn; ++c) out(j * dn + r, i * dn + c) = act(r, c);
    }
  return out;
}

// Hom and the cocycles and coboundaries of Ext¹ for M against N, over one ring.
struct Cochains {
  Matrix hom;       // columns span Hom(M, N) ⊆ N^{f0}
  Matrix cocycles;  // Z ⊆ N^{f1}
  Matrix boundaries;  // spans B ⊆ Z
  Matrix d2_star;   // Hom(F₁, N) → Hom(F₂, N)
  std::size_t ext() const { return cocycles.cols() - rank_of(boundaries); }
};

Cochains cochains(const ModulePresentation& m, const FiniteModule& n) {
  const Field& k = n.module().ring().field();
  Resolution2 res = resolve2(m);
  const std::size_t dn = n.dim();
  Matrix d1 = induced(n, res.f0, res.d1);
  Matrix d2 = induced(n, res.f1, res.d2);
  std::vector<QRow> h;
  if (res.f1 != 0) {
    h = d1.nullspace();
  } else {
    for (std::size_t i = 0; i < res.f0 * dn; ++i) {
      QRow e(res.f0 * dn, 0);
      e[i] = 1;
      h.push_back(e);
    }
  }
  std::vector<QRow> z;
  if (res.d2.empty()) {
    for (std::size_t i = 0; i < res.f1 * dn; ++i) {
      QRow e(res.f1 * dn, 0);
      e[i] = 1;
      z.push_back(e);
    }
  } else {
    z = d2.nullspace();
  }
  return {from_columns(k, res.f0 * dn, h), from_columns(k, res.f1 * dn, z), d1, d2};
}

bool kills(const Matrix& d2_star, const Matrix& z) {
  if (d2_star.rows() == 0 || z.cols() == 0) return true;
  return (d2_star * z).is_zero();
}

std::vector<Exps> monomials_of_degree(std::size_t n, int e) {
  std::vector<Exps> out;
  if (n == 0) {
    if (e == 0) out.push_back({});
    return out;
  }
  Exps cur(n, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == n) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[i] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, e);
  return out;
}

bool homogeneous(const Poly& f) {
  if (f.is_zero()) return true;
  int d = degree(f.terms().front().e);
  for (const auto& t : f.terms())
    if (degree(t.e) != d) return false;
  return true;
}

// Coefficient rows of polynomials over a shared monomial index.
struct MonomialIndex {
  std::map<Exps, std::size_t> index;
  std::size_t at(const Exps& e) {
    auto [it, inserted] = index.emplace(e, index.size());
    return it->second;
  }
};

std::size_t span_rank(const Field& k, const std::vector<Poly>& polys) {
  MonomialIndex idx;
  for (const auto& p : polys)
    for (const auto& t : p.terms()) idx.at(t.e);
  Matrix m(k, idx.index.size(), polys.size());
  for (std::size_t j = 0; j < polys.size(); ++j)
    for (const auto& t : polys[j].terms()) m(idx.at(t.e), j) = t.c;
  return rank_of(m);
}

}  // namespace

GluingDatum fiber_product_ring(const RingPresentation& c1, const RingPresentation& c2, const RingPresentation& c0,
                               const RingMap& f1, const RingMap& f2) {
  if (f1.source().ambient() != c1.ambient() || f2.source().ambient() != c2.ambient() ||
      f1.target().ambient() != c0.ambient() || f2.target().ambient() != c0.ambient())
    fail(ErrorCode::InvalidArgument, "gluing maps do not match the rings");
  if (!f1.well_defined() || !f2.well_defined()) fail(ErrorCode::InvalidArgument, "gluing map is not well defined");
  const bool s1 = f1.is_surjective(), s2 = f2.is_surjective();
  if (!s1 && !s2) fail(ErrorCode::NotSurjective, "neither C1 -> C0 nor C2 -> C0 is surjective");
  if (!s1 || !s2)
    fail(ErrorCode::KernelNotFinitelyGenerated,
         "only one map is surjective; finite generation of the fiber product is not decided, use the truncated "
         "fiber product");

  std::vector<Poly> i1 = nonzero_in(c1, f1.kernel()), i2 = nonzero_in(c2, f2.kernel());
  const PolyRing& a1 = c1.ambient();
  const PolyRing& a2 = c2.ambient();
  std::vector<std::string> names;
  for (const auto& v : a1.vars()) fresh(names, v, "_1");
  std::vector<Poly> img1, img2;
  for (std::size_t i = 0; i < a1.nvars(); ++i) {
    img1.push_back(a1.var(i));
    img2.push_back(*f2.preimage(f1.apply(a1.var(i))));
  }
  for (std::size_t j = 0; j < a2.nvars(); ++j) {
    fresh(names, a2.vars()[j], "_2");
    img1.push_back(*f1.preimage(f2.apply(a2.var(j))));
    img2.push_back(a2.var(j));
  }
  for (std::size_t k = 0; k < i1.size(); ++k) {
    fresh(names, "z" + std::to_string(k + 1), "_");
    img1.push_back(c1.normal_form(i1[k]));
    img2.push_back(a2.zero());
  }
  const std::size_t recipe = names.size();
  PolyRing big(c1.field(), names);
  RingPresentation free_big(big);
  std::vector<Poly> rels =
      ideal_intersection(big, RingMap(free_big, c1, img1).kernel(), RingMap(free_big, c2, img2).kernel());
  Presented p = prune({big, RingPresentation(big, rels).reduced_relations(), img1, img2});

  RingPresentation c(p.ring, p.relations);
  RingMap p1(c, c1, p.img1), p2(c, c2, p.img2);
  std::vector<Poly> ker1 = p1.kernel(), ker2 = p2.kernel();
  GluingDatum g{c1, c2, c0, f1, f2, c, p1, p2, nonzero_in(c, ker1), nonzero_in(c, ker2), {}, i1, i2, recipe, {}};
  g.k0 = nonzero_in(c, to_c0(g).kernel());

  CocartesianCertificate& cert = g.certificate;
  cert.commutes = true;
  for (std::size_t i = 0; i < p.ring.nvars(); ++i)
    if (!c0.equal(f1.apply(p.img1[i]), f2.apply(p.img2[i]))) cert.commutes = false;
  cert.projections_surjective = p1.is_surjective() && p2.is_surjective();
  cert.injective = true;
  for (const auto& h : ideal_intersection(p.ring, ker1, ker2))
    if (!c.is_zero(h)) cert.injective = false;
  std::vector<Poly> j = c1.relations();
  for (const auto& k : g.k2) j.push_back(p1.apply(k));
  cert.tensor_is_c0 = same_ideal(a1, j, f1.kernel());
  cert.kernels_multiply_to_zero = true;
  for (const auto& x : g.k1)
    for (const auto& y : g.k2)
      if (!c.is_zero(x * y)) cert.kernels_multiply_to_zero = false;
  return g;
}

GluingDatum nodal_gluing(Field k) {
  RingPresentation c1(PolyRing(k, {"x"})), c2(PolyRing(k, {"y"})), c0(PolyRing(k, {}));
  RingMap f1(c1, c0, {c0.ambient().zero()}), f2(c2, c0, {c0.ambient().zero()});
  return fiber_product_ring(c1, c2, c0, f1, f2);
}

bool TruncatedFiberProduct::first_projection_contains(const Poly& c) const {
  std::map<int, std::vector<Term>> parts;
  for (const auto& t : c.terms()) parts[logflat::degree(t.e)].push_back(t);
  for (const auto& [e, terms] : parts) {
    if (e < 0 || static_cast<std::size_t>(e) > this->degree) fail(ErrorCode::InvalidArgument, "degree beyond the truncation");
    Poly part = Poly::from_terms(c.ring(), terms);
    std::vector<Poly> span;
    for (const auto& b : pieces[e].basis) span.push_back(b.first);
    std::size_t r = span_rank(c.ring().field(), span);
    span.push_back(part);
    if (span_rank(c.ring().field(), span) != r) return false;
  }
  return true;
}

TruncatedFiberProduct truncated_fiber_product(const RingMap& f1, const RingMap& f2, std::size_t degree) {
  if (!f1.source().relations().empty() || !f2.source().relations().empty())
    fail(ErrorCode::InvalidArgument, "truncated fiber product needs polynomial rings C1, C2");
  if (f1.target().ambient() != f2.target().ambient()) fail(ErrorCode::InvalidArgument, "maps to different rings");
  const RingPresentation& c0 = f1.target();
  for (const auto& r : c0.relations())
    if (!homogeneous(r)) fail(ErrorCode::InvalidArgument, "C0 must be graded");
  for (const RingMap* f : {&f1, &f2})
    for (const auto& p : f->images())
      if (!homogeneous(p) || (!p.is_zero() && p.total_degree() != 1))
        fail(ErrorCode::InvalidArgument, "maps must send variables to linear forms or zero");

  const Field& k = c0.field();
  const PolyRing& a1 = f1.source().ambient();
  const PolyRing& a2 = f2.source().ambient();
  TruncatedFiberProduct out;
  out.degree = degree;
  std::vector<std::vector<Poly>> kernel_basis;
  for (std::size_t e = 0; e <= degree; ++e) {
    std::vector<Exps> m1 = monomials_of_degree(a1.nvars(), static_cast<int>(e));
    std::vector<Exps> m2 = monomials_of_degree(a2.nvars(), static_cast<int>(e));
    std::vector<Poly> cols;
    for (const auto& m : m1) cols.push_back(f1.apply(a1.monomial(m)));
    for (const auto& m : m2) cols.push_back(-f2.apply(a2.monomial(m)));
    MonomialIndex idx;
    for (const auto& p : cols)
      for (const auto& t : p.terms()) idx.at(t.e);
    const std::size_t rows = std::max<std::size_t>(idx.index.size(), 1);
    Matrix mat(k, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& t : cols[j].terms()) mat(idx.at(t.e), j) = t.c;

    TruncatedFiberProduct::Piece piece;
    for (const auto& v : mat.nullspace()) {
      Poly a = a1.zero(), b = a2.zero();
      for (std::size_t i = 0; i < m1.size(); ++i)
        if (v[i] != 0) a += a1.monomial(m1[i], v[i]);
      for (std::size_t i = 0; i < m2.size(); ++i)
        if (v[m1.size() + i] != 0) b += a2.monomial(m2[i], v[m1.size() + i]);
      piece.basis.emplace_back(a, b);
    }
    Matrix left(k, rows, m1.size());
    for (std::size_t j = 0; j < m1.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) left(i, j) = mat(i, j);
    std::vector<Poly> kb;
    if (!m1.empty())
      for (const auto& v : left.nullspace()) {
        Poly a = a1.zero();
        for (std::size_t i = 0; i < m1.size(); ++i)
          if (v[i] != 0) a += a1.monomial(m1[i], v[i]);
        kb.push_back(a);
      }
    piece.kernel_dim = kb.size();
    std::vector<Poly> products;
    for (std::size_t d = 1; d <= e; ++d)
      for (const auto& c : d < e ? out.pieces[d].basis : piece.basis)
        for (const auto& z : kernel_basis[e - d]) products.push_back(c.first * z);
    piece.new_kernel_generators = kb.size() - span_rank(k, products);
    kernel_basis.push_back(kb);
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

LineContraction line_contraction(Field k) {
  RingPresentation plane(PolyRing(k, {"x", "y"})), line(PolyRing(k, {"x"})), point(PolyRing(k, {}));
  return {RingMap(plane, line, {line.var(0), line.ambient().zero()}), RingMap(point, line, {})};
}

ModulePresentation DescentDatum::m1_0() const { return base_change(m1, gluing.f1); }
ModulePresentation DescentDatum::m2_0() const { return base_change(m2, gluing.f2); }

DescentDatum make_descent_datum(const GluingDatum& g, ModulePresentation m1, ModulePresentation m2,
                                std::vector<PolyVec> phi) {
  check_over(m1, g.c1, "C1");
  check_over(m2, g.c2, "C2");
  const std::size_t r1 = m1.rank(), r2 = m2.rank();
  if (phi.size() != r1) fail(ErrorCode::Validation, "clutching needs one image per generator of M1");
  for (const auto& v : phi)
    if (v.size() != r2) fail(ErrorCode::Validation, "clutching image has the wrong rank");
  DescentDatum d{g, std::move(m1), std::move(m2), std::move(phi), {}};
  ModulePresentation a = d.m1_0(), b = d.m2_0();
  ModuleMap f{a, b, d.phi};
  if (!f.well_defined()) fail(ErrorCode::Validation, "clutching is not well defined");
  const PolyRing& k0 = g.c0.ambient();
  std::vector<PolyVec> gens = d.phi;
  for (const auto& r : b.full_relations()) gens.push_back(r);
  for (std::size_t j = 0; j < r2; ++j) {
    PolyVec e = unit_vec(k0, r2, j);
    auto c = r1 == 0 ? (b.is_zero(e) ? std::optional<PolyVec>(PolyVec{}) : std::nullopt) : lift(k0, r2, gens, e);
    if (!c) fail(ErrorCode::Validation, "clutching is not surjective");
    d.phi_inverse.push_back(a.normal_form(PolyVec(c->begin(), c->begin() + static_cast<std::ptrdiff_t>(r1))));
  }
  ModuleMap inv{b, a, d.phi_inverse};
  for (std::size_t i = 0; i < r1; ++i)
    if (!a.is_zero(vec_sub(inv.apply(d.phi[i]), unit_vec(k0, r1, i))))
      fail(ErrorCode::Validation, "clutching is not injective");
  for (std::size_t j = 0; j < r2; ++j)
    if (!b.is_zero(vec_sub(f.apply(d.phi_inverse[j]), unit_vec(k0, r2, j))))
      fail(ErrorCode::Validation, "clutching inverse failed verification");
  return d;
}

ModulePresentation restrict_to_C(const GluingDatum& g, int side, const ModulePresentation& m) {
  if (side != 1 && side != 2) fail(ErrorCode::InvalidArgument, "side must be 1 or 2");
  check_over(m, side == 1 ? g.c1 : g.c2, side == 1 ? "C1" : "C2");
  return restrict_along(side == 1 ? g.p1 : g.p2, side == 1 ? g.k1 : g.k2, m);
}

DescentDatum pullback_P(const GluingDatum& g, const ModulePresentation& m) {
  check_over(m, g.c, "C");
  std::vector<PolyVec> id;
  for (std::size_t i = 0; i < m.rank(); ++i) id.push_back(unit_vec(g.c0.ambient(), m.rank(), i));
  return make_descent_datum(g, base_change(m, g.p1), base_change(m, g.p2), id);
}

Subquotient descend_D(const DescentDatum& d) { return descend(d).d; }

TorResult gate_tor(const GluingDatum& g, const ModulePresentation& m) {
  check_over(m, g.c, "C");
  return tor1(m, g.k0);
}

bool tor_gate(const GluingDatum& g, const ModulePresentation& m) { return gate_tor(g, m).is_zero; }

bool tor_gate_side(const GluingDatum& g, int side, const ModulePresentation& m) {
  if (side != 1 && side != 2) fail(ErrorCode::InvalidArgument, "side must be 1 or 2");
  check_over(m, side == 1 ? g.c1 : g.c2, side == 1 ? "C1" : "C2");
  return tor1(m, side == 1 ? g.i1 : g.i2).is_zero;
}

DatumRoundtrip roundtrip_check(const DescentDatum& d) {
  const GluingDatum& g = d.gluing;
  Subquotient dd = descend_D(d);
  const std::size_t r1 = d.m1.rank();
  std::vector<PolyVec> a1, a2;
  for (const auto& v : dd.generators) {
    a1.push_back(map_vec(g.p1, PolyVec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r1))));
    a2.push_back(map_vec(g.p2, PolyVec(v.begin() + static_cast<std::ptrdiff_t>(r1), v.end())));
  }
  auto iso = [](const ModuleMap& f) { return f.well_defined() && is_injective(f) && is_surjective(f); };
  DatumRoundtrip out;
  out.side1_iso = iso(ModuleMap{base_change(dd.module, g.p1), d.m1, a1});
  out.side2_iso = iso(ModuleMap{base_change(dd.module, g.p2), d.m2, a2});
  ModulePresentation m2_0 = d.m2_0();
  ModuleMap phi{d.m1_0(), m2_0, d.phi};
  out.clutching = true;
  for (std::size_t k = 0; k < dd.generators.size(); ++k)
    if (!m2_0.is_zero(vec_sub(phi.apply(map_vec(g.f1, a1[k])), map_vec(g.f2, a2[k])))) out.clutching = false;
  return out;
}

ModuleRoundtrip roundtrip_check(const GluingDatum& g, const ModulePresentation& m) {
  ModuleRoundtrip out;
  out.gate = tor_gate(g, m);
  Descent dp = descend(pullback_P(g, m));
  const std::size_t r = m.rank();
  const PolyRing& a = g.c.ambient();
  std::vector<PolyVec> gens = dp.d.generators;
  for (const auto& v : dp.sum.full_relations()) gens.push_back(v);
  std::vector<PolyVec> images;
  bool found = true;
  for (std::size_t i = 0; i < r; ++i) {
    PolyVec e = unit_vec(a, r, i);
    PolyVec v = e;
    v.insert(v.end(), e.begin(), e.end());
    auto c = dp.d.generators.empty() ? std::optional<PolyVec>() : lift(a, 2 * r, gens, v);
    if (!c) {
      if (!dp.sum.is_zero(v)) found = false;
      images.push_back(zero_vec(a, dp.d.generators.size()));
      continue;
    }
    images.push_back(PolyVec(c->begin(), c->begin() + static_cast<std::ptrdiff_t>(dp.d.generators.size())));
  }
  ModuleMap unit{m, dp.d.module, images};
  out.unit_well_defined = found && unit.well_defined();
  out.unit_injective = is_injective(unit);
  out.unit_surjective = is_surjective(unit);
  out.dim_m = m.vector_space_dim();
  out.dim_dp = dp.d.module.vector_space_dim();
  return out;
}

HomExtComparison hom_ext_fiber_product(const GluingDatum& g, const ModulePresentation& m,
                                       const ModulePresentation& n) {
  check_over(m, g.c, "C");
  check_over(n, g.c, "C");
  if (!tor_gate(g, m) || !tor_gate(g, n)) fail(ErrorCode::GateFailed, "Tor_1(-, C0) does not vanish");
  if (!n.vector_space_dim()) fail(ErrorCode::NotFiniteDimensional, "N is not finite-dimensional");

  const Field& k = g.c.field();
  ModulePresentation m1 = base_change(m, g.p1), m2 = base_change(m, g.p2), m0 = base_change(m1, g.f1);
  ModulePresentation n1 = base_change(n, g.p1), n2 = base_change(n, g.p2), n0 = base_change(n1, g.f1);
  FiniteModule fn(n), fn1(n1), fn2(n2), fn0(n0);
  const std::size_t f0 = m.rank(), f1 = m.relations().size();
  Matrix pc1 = projection(fn, fn1, g.p1), pc2 = projection(fn, fn2, g.p2);
  Matrix p10 = projection(fn1, fn0, g.f1), p20 = projection(fn2, fn0, g.f2);

  Cochains cc = cochains(m, fn), c1 = cochains(m1, fn1), c2 = cochains(m2, fn2), c0 = cochains(m0, fn0);
  HomExtComparison out;
  out.hom_c = cc.hom.cols();
  out.hom_1 = c1.hom.cols();
  out.hom_2 = c2.hom.cols();
  out.hom_0 = c0.hom.cols();
  {
    Matrix a = block_diagonal(p10, f0) * c1.hom, b = block_diagonal(p20, f0) * c2.hom;
    out.hom_fiber = out.hom_1 + out.hom_2 - rank_of(hcat(k, {a, negate(b)}));
    Matrix into = vcat(k, block_diagonal(pc1, f0) * cc.hom, block_diagonal(pc2, f0) * cc.hom);
    out.hom_bijective = rank_of(into) == out.hom_c && out.hom_c == out.hom_fiber;
  }
  out.ext_c = cc.ext();
  out.ext_1 = c1.ext();
  out.ext_2 = c2.ext();
  out.ext_0 = c0.ext();
  {
    Matrix a = block_diagonal(p10, f1) * c1.cocycles, b = block_diagonal(p20, f1) * c2.cocycles;
    std::size_t rb0 = rank_of(c0.boundaries);
    std::size_t to_quotient = rank_of(hcat(k, {a, negate(b), c0.boundaries})) - rb0;
    std::size_t s = c1.cocycles.cols() + c2.cocycles.cols() - to_quotient;
    out.ext_fiber = s - rank_of(c1.boundaries) - rank_of(c2.boundaries);
    out.cocycles_restrict = kills(c1.d2_star, block_diagonal(pc1, f1) * cc.cocycles) &&
                            kills(c2.d2_star, block_diagonal(pc2, f1) * cc.cocycles) && kills(c0.d2_star, a) &&
                            kills(c0.d2_star, b);
  }
  return out;
}

}  // namespace logflat
