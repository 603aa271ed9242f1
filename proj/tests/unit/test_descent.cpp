#include <random>

#include "descent_instances.hpp"
#include "doctest.h"
#include "logflat/error.hpp"
#include "logflat/linalg.hpp"

using namespace logflat;
using descent_instances::cyclic;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Validation;
}

// dim D = dim M₁ + dim M₂ − dim M₀, read off 0 → D → M₁ ⊕ M₂ → M₀ → 0.
std::optional<std::size_t> sequence_dim(const DescentDatum& d) {
  auto a = d.m1.vector_space_dim(), b = d.m2.vector_space_dim(), c = d.m1_0().vector_space_dim();
  if (!a || !b || !c) return std::nullopt;
  return *a + *b - *c;
}

}  // namespace

TEST_CASE("k[x] ×_k k[y] is the node") {
  GluingDatum g = nodal_gluing();
  CHECK(g.certificate.holds());
  CHECK(g.recipe_generators == 3);  // (x, 0), (0, y), and (x, 0) again from ker f₁
  REQUIRE(g.c.ambient().nvars() == 2);
  PolyRing r(Field::rationals(), {"x", "y"});
  RingPresentation node(r, {r.parse("x*y")});
  RingMap to(node, g.c, {g.c.var(0), g.c.var(1)}), from(g.c, node, {node.var(0), node.var(1)});
  CHECK(to.well_defined());
  CHECK(from.well_defined());
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(g.c.equal(to.apply(from.apply(g.c.var(i))), g.c.var(i)));
    CHECK(node.equal(from.apply(to.apply(node.var(i))), node.var(i)));
  }
  CHECK(g.p1.apply(g.c.var(0)) == g.c1.var(0));
  CHECK(g.p1.apply(g.c.var(1)).is_zero());
  CHECK(g.p2.apply(g.c.var(1)) == g.c2.var(0));
}

TEST_CASE("k × k over k is k") {
  RingPresentation k0(PolyRing(Field::rationals(), {}));
  RingMap id(k0, k0, {});
  GluingDatum g = fiber_product_ring(k0, k0, k0, id, id);
  CHECK(g.c.ambient().nvars() == 0);
  CHECK(g.c.vector_space_dim() == std::optional<std::size_t>(1));
  CHECK(g.certificate.holds());
}

TEST_CASE("k[x]/(x²) ×_k k[y]/(y³) has dimension 4") {
  GluingDatum g = descent_instances::fat_gluing();
  CHECK(g.certificate.holds());
  auto d1 = g.c1.vector_space_dim(), d2 = g.c2.vector_space_dim(), d0 = g.c0.vector_space_dim();
  CHECK(g.c.vector_space_dim() == std::optional<std::size_t>(*d1 + *d2 - *d0));
  CHECK(g.c.vector_space_dim() == std::optional<std::size_t>(4));
  PolyRing r(Field::rationals(), {"x", "y"});
  CHECK(RingPresentation(g.c.ambient(), g.c.relations())
            .same_ideal(RingPresentation(g.c.ambient(), {g.c.parse("x*y"), g.c.parse("x^2"), g.c.parse("y^3")})));
}

TEST_CASE("nodal family over the line") {
  GluingDatum g = descent_instances::family_gluing();
  CHECK(g.certificate.holds());
  CHECK(g.c.ambient().nvars() == 3);
  CHECK(g.recipe_generators == 5);
}

TEST_CASE("fiber product errors") {
  PolyRing rx(Field::rationals(), {"x"}), r0(Field::rationals(), {"t"});
  RingPresentation c1(rx), c0(r0);
  RingMap zero(c1, c0, {r0.zero()});
  CHECK(code_of([&] { fiber_product_ring(c1, c1, c0, zero, zero); }) == ErrorCode::NotSurjective);
  LineContraction lc = line_contraction();
  CHECK(code_of([&] { fiber_product_ring(lc.f1.source(), lc.f2.source(), lc.f1.target(), lc.f1, lc.f2); }) ==
        ErrorCode::KernelNotFinitelyGenerated);
}

TEST_CASE("line contraction: x is not in C through degree 6") {
  LineContraction lc = line_contraction();
  TruncatedFiberProduct t = truncated_fiber_product(lc.f1, lc.f2, 6);
  const PolyRing& r = lc.f1.source().ambient();
  CHECK_FALSE(t.first_projection_contains(r.parse("x")));
  CHECK_FALSE(t.first_projection_contains(r.parse("x^6")));
  CHECK(t.first_projection_contains(r.parse("1 + y + x*y + x^5*y")));
  CHECK(t.first_projection_contains(r.parse("x^2*y^3")));
  CHECK_THROWS_AS(t.first_projection_contains(r.parse("x^6*y")), Error);
  // C_e is spanned by the xᵐyⁿ with n ≥ 1 and m + n = e; each degree brings the new generator x^{e-1}y.
  for (std::size_t e = 0; e <= 6; ++e) {
    CAPTURE(e);
    CHECK(t.pieces[e].basis.size() == (e == 0 ? 1 : e));
    CHECK(t.pieces[e].kernel_dim == (e == 0 ? 0 : e));
    CHECK(t.pieces[e].new_kernel_generators == (e == 0 ? 0 : 1));
  }
}

TEST_CASE("kernel ideals multiply to zero and C covers both branches") {
  for (const GluingDatum& g : {nodal_gluing(), descent_instances::fat_gluing(), descent_instances::family_gluing()}) {
    CHECK(g.certificate.kernels_multiply_to_zero);
    CHECK(g.certificate.injective);
    CHECK(g.certificate.tensor_is_c0);
    CHECK_FALSE(g.k1.empty());
    CHECK_FALSE(g.k2.empty());
  }
}

TEST_CASE("pullback examples") {
  GluingDatum g = nodal_gluing();
  DescentDatum pc = pullback_P(g, ModulePresentation::free(g.c, 1));
  CHECK(pc.m1.rank() == 1);
  CHECK(pc.m2.rank() == 1);
  for (const auto& v : pc.m1.relations()) CHECK(g.c1.is_zero(v[0]));
  for (const auto& v : pc.m2.relations()) CHECK(g.c2.is_zero(v[0]));
  CHECK(pc.phi == std::vector<PolyVec>{{g.c0.ambient().one()}});

  DescentDatum pm = pullback_P(g, cyclic(g.c, {"x+y"}));
  DescentDatum pk = pullback_P(g, cyclic(g.c, {"x", "y"}));
  for (const DescentDatum* d : {&pm, &pk}) {
    CHECK(d->m1.vector_space_dim() == std::optional<std::size_t>(1));
    CHECK(d->m2.vector_space_dim() == std::optional<std::size_t>(1));
    CHECK(d->m1_0().vector_space_dim() == std::optional<std::size_t>(1));
  }
  // Same quotients of C₁ and C₂, same clutching: P cannot tell B/(x+y) from k.
  auto ideal_of = [](const ModulePresentation& m) {
    std::vector<Poly> out;
    for (const auto& v : m.relations()) out.push_back(v[0]);
    return RingPresentation(m.ring().ambient(), out);
  };
  CHECK(ideal_of(pm.m1).same_ideal(ideal_of(pk.m1)));
  CHECK(ideal_of(pm.m2).same_ideal(ideal_of(pk.m2)));
  CHECK(pm.phi == pk.phi);
  CHECK(cyclic(g.c, {"x+y"}).vector_space_dim() == std::optional<std::size_t>(2));
  CHECK(cyclic(g.c, {"x", "y"}).vector_space_dim() == std::optional<std::size_t>(1));
}

TEST_CASE("descent examples") {
  GluingDatum g = nodal_gluing();
  DescentDatum kk = make_descent_datum(g, cyclic(g.c1, {"x"}), cyclic(g.c2, {"y"}), {{g.c0.ambient().one()}});
  Subquotient d = descend_D(kk);
  CHECK(d.module.vector_space_dim() == std::optional<std::size_t>(1));
  CHECK(sequence_dim(kk) == std::optional<std::size_t>(1));
  CHECK(tor_gate(g, d.module) == false);

  // D(C₁, C₂) ≅ C via the unit of C.
  ModuleRoundtrip rc = roundtrip_check(g, ModulePresentation::free(g.c, 1));
  CHECK(rc.iso());
  CHECK(rc.gate);

  // D(k[x], k[y], id) presents k[x,y]/(xy): the kernel of (a(x), b(y)) ↦ a(0) − b(0).
  DescentDatum free = make_descent_datum(g, ModulePresentation::free(g.c1, 1), ModulePresentation::free(g.c2, 1),
                                         {{g.c0.ambient().one()}});
  Subquotient dc = descend_D(free);
  ModuleMap to_c{ModulePresentation::free(g.c, 1), dc.module, {}};
  REQUIRE(dc.generators.size() >= 1);
  // (1, 1) generates: it lies in D and the cokernel of C → D vanishes.
  PolyVec one{g.c.ambient().one(), g.c.ambient().one()};
  std::vector<PolyVec> gens = dc.generators;
  auto sum = restrict_to_C(g, 1, free.m1).direct_sum(restrict_to_C(g, 2, free.m2));
  for (const auto& v : sum.full_relations()) gens.push_back(v);
  auto coeffs = lift(g.c.ambient(), 2, gens, one);
  REQUIRE(coeffs);
  to_c.images = {PolyVec(coeffs->begin(), coeffs->begin() + static_cast<std::ptrdiff_t>(dc.generators.size()))};
  CHECK(to_c.well_defined());
  CHECK(is_injective(to_c));
  CHECK(is_surjective(to_c));
}

TEST_CASE("clutching must be an isomorphism") {
  GluingDatum g = nodal_gluing();
  const PolyRing& a0 = g.c0.ambient();
  CHECK(code_of([&] {
          make_descent_datum(g, ModulePresentation::free(g.c1, 1), ModulePresentation::free(g.c2, 1), {{a0.zero()}});
        }) == ErrorCode::Validation);
  CHECK(code_of([&] {
          make_descent_datum(g, ModulePresentation::free(g.c1, 2), ModulePresentation::free(g.c2, 1),
                             {{a0.one()}, {a0.one()}});
        }) == ErrorCode::Validation);
  DescentDatum swap = make_descent_datum(g, ModulePresentation::free(g.c1, 2), ModulePresentation::free(g.c2, 2),
                                         {{a0.zero(), a0.constant(3)}, {a0.one(), a0.zero()}});
  CHECK(swap.phi_inverse[0] == PolyVec{a0.zero(), a0.one()});
  CHECK(swap.phi_inverse[1] == PolyVec{a0.constant(mpq_class(1, 3)), a0.zero()});
}

TEST_CASE("gate examples") {
  GluingDatum g = nodal_gluing();
  CHECK(tor_gate(g, ModulePresentation::free(g.c, 1)));
  CHECK_FALSE(tor_gate(g, cyclic(g.c, {"x+y"})));
  CHECK(tor_gate(g, cyclic(g.c, {"x-1"})));
  CHECK_FALSE(tor_gate(g, cyclic(g.c, {"x", "y"})));
  CHECK(tor_gate_side(g, 1, ModulePresentation::free(g.c1, 1)));
  CHECK_FALSE(tor_gate_side(g, 1, cyclic(g.c1, {"x"})));
  CHECK(tor_gate_side(g, 2, cyclic(g.c2, {"y-3"})));
  CHECK_THROWS_AS(tor_gate_side(g, 3, ModulePresentation::free(g.c2, 1)), Error);
  // Tor₁ of B/(x+y) against C₀ is one-dimensional.
  CHECK(gate_tor(g, cyclic(g.c, {"x+y"})).dim == std::optional<std::size_t>(1));
}

TEST_CASE("roundtrips on the nodal corpus") {
  GluingDatum g = nodal_gluing();
  for (const auto& [name, m] : descent_instances::nodal_corpus(g)) {
    CAPTURE(name);
    ModuleRoundtrip r = roundtrip_check(g, m);
    CHECK(r.consistent());
    CHECK(r.unit_well_defined);
    CHECK(r.unit_surjective);
    if (r.gate) CHECK(r.iso());
    if (r.dim_m && r.dim_dp) CHECK((*r.dim_m == *r.dim_dp) == r.iso());
  }
  ModuleRoundtrip bad = roundtrip_check(g, cyclic(g.c, {"x+y"}));
  CHECK_FALSE(bad.gate);
  CHECK_FALSE(bad.iso());
  CHECK(bad.dim_m == std::optional<std::size_t>(2));
  CHECK(bad.dim_dp == std::optional<std::size_t>(1));
  // The converse fails: B/(y) = k[x] comes back although Tor₁(k[x], C₀) = k.
  ModuleRoundtrip branch = roundtrip_check(g, cyclic(g.c, {"y"}));
  CHECK_FALSE(branch.gate);
  CHECK(branch.iso());
  ModuleRoundtrip two = roundtrip_check(g, cyclic(g.c, {"x-1"}).direct_sum(ModulePresentation::free(g.c, 1)));
  CHECK(two.gate);
  CHECK(two.iso());
}

TEST_CASE("property: PD ≅ Id on random descent data") {
  std::mt19937_64 rng(11);
  std::vector<GluingDatum> gluings{nodal_gluing(), descent_instances::fat_gluing(), descent_instances::family_gluing()};
  int checked = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const GluingDatum& g = gluings[trial % gluings.size()];
    DescentDatum d = descent_instances::random_datum(rng, g, 1 + trial % 2);
    CAPTURE(trial);
    DatumRoundtrip r = roundtrip_check(d);
    CHECK(r.side1_iso);
    CHECK(r.side2_iso);
    CHECK(r.clutching);
    Subquotient dd = descend_D(d);
    if (auto s = sequence_dim(d)) CHECK(dd.module.vector_space_dim() == s);
    // Gate synthesis.
    if (tor_gate_side(g, 1, d.m1) && tor_gate_side(g, 2, d.m2)) CHECK(tor_gate(g, dd.module));
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("gate inheritance and synthesis on the corpus") {
  GluingDatum g = nodal_gluing();
  for (const auto& [name, m] : descent_instances::nodal_corpus(g)) {
    CAPTURE(name);
    DescentDatum p = pullback_P(g, m);
    bool s1 = tor_gate_side(g, 1, p.m1), s2 = tor_gate_side(g, 2, p.m2);
    if (tor_gate(g, m)) {
      CHECK(s1);
      CHECK(s2);
    }
    if (s1 && s2) CHECK(tor_gate(g, descend_D(p).module));
  }
}

TEST_CASE("gated modules are closed under kernels and extensions") {
  GluingDatum g = nodal_gluing();
  const RingPresentation& c = g.c;
  ModulePresentation a = cyclic(c, {"x-1"}), b = ModulePresentation::free(c, 1);
  // (u, v) ↦ u + v.
  ModuleMap proj{a.direct_sum(b), a, {{c.parse("1")}, {c.parse("1")}}};
  Subquotient k1 = kernel(proj);
  CHECK(tor_gate(g, a));
  CHECK(tor_gate(g, b));
  CHECK(tor_gate(g, k1.module));
  ModuleMap times{b, b, {{c.parse("x+y-1")}}};
  CHECK(tor_gate(g, kernel(times).module));
  CHECK(tor_gate(g, cokernel(times)));
  // Non-split self-extension of B/(x−1) and an extension of B/(y−2) by B/(x−1).
  CHECK(tor_gate(g, cyclic(c, {"x^2-2*x+1"})));
  ModulePresentation ext(c, 2, {{c.parse("x-1"), c.ambient().zero()}, {c.parse("-1"), c.parse("y-2")}});
  ModuleMap sub{a, ext, {{c.ambient().one(), c.ambient().zero()}}};
  CHECK(sub.well_defined());
  CHECK(is_injective(sub));
  CHECK(cokernel(sub).vector_space_dim() == std::optional<std::size_t>(1));
  CHECK(tor_gate(g, ext));
}

TEST_CASE("Hom and Ext over the node against the branches") {
  GluingDatum g = nodal_gluing();
  ModulePresentation m = cyclic(g.c, {"x-1"});
  HomExtComparison h = hom_ext_fiber_product(g, m, m);
  CHECK(h.holds());
  CHECK(h.hom_c == 1);
  CHECK(h.hom_1 == 1);
  CHECK(h.hom_2 == 0);
  CHECK(h.hom_0 == 0);
  CHECK(h.hom_fiber == 1);
  // x − 1 is a nonzerodivisor on C, so Ext¹(M, M) = M/(x−1)M.
  CHECK(h.ext_c == 1);
  CHECK(h.ext_1 == 1);
  CHECK(h.ext_fiber == 1);
  CHECK(h.ext_c == ext1_dim(m, FiniteModule(m)));
  CHECK(h.hom_c == hom_space(m, FiniteModule(m)).dim);

  ModulePresentation n = cyclic(g.c, {"x-1"}).direct_sum(cyclic(g.c, {"y-2"}));
  HomExtComparison f = hom_ext_fiber_product(g, ModulePresentation::free(g.c, 1), n);
  CHECK(f.holds());
  CHECK(f.hom_c == 2);
  CHECK(f.ext_c == 0);

  ModulePresentation mm = cyclic(g.c, {"x^2-2*x+1"}).direct_sum(cyclic(g.c, {"y+1"}));
  HomExtComparison e = hom_ext_fiber_product(g, mm, n);
  CHECK(e.holds());
  CHECK(e.hom_c == hom_space(mm, FiniteModule(n)).dim);
  CHECK(e.ext_c == ext1_dim(mm, FiniteModule(n)));
  CHECK(e.hom_1 == hom_space(base_change(mm, g.p1), FiniteModule(base_change(n, g.p1))).dim);
  CHECK(e.ext_2 == ext1_dim(base_change(mm, g.p2), FiniteModule(base_change(n, g.p2))));

  CHECK(code_of([&] { hom_ext_fiber_product(g, cyclic(g.c, {"x+y"}), m); }) == ErrorCode::GateFailed);
  CHECK(code_of([&] { hom_ext_fiber_product(g, m, ModulePresentation::free(g.c, 1)); }) ==
        ErrorCode::NotFiniteDimensional);
}

TEST_CASE("Hom and Ext on the fat gluing") {
  GluingDatum g = descent_instances::fat_gluing();
  ModulePresentation c = ModulePresentation::free(g.c, 1);
  CHECK(tor_gate(g, c));
  HomExtComparison h = hom_ext_fiber_product(g, c, c);
  CHECK(h.holds());
  CHECK(h.hom_c == 4);
  CHECK(h.hom_1 == 2);
  CHECK(h.hom_2 == 3);
  CHECK(h.hom_0 == 1);
}
