#include <random>

#include "doctest.h"
#include "logflat/chart.hpp"
#include "logflat/error.hpp"

using namespace logflat;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Validation;
}

ModulePresentation cyclic(const RingPresentation& r, const std::vector<std::string>& ideal) {
  std::vector<Poly> gens;
  for (const auto& s : ideal) gens.push_back(r.parse(s));
  return ModulePresentation::cyclic(r, gens);
}

// Q = 0 → P = ℕ², A = k, C = k[x,y].
ChartData toric_point_chart() {
  PolyRing a0(Field::rationals(), {});
  RingPresentation a(a0);
  PolyRing r(Field::rationals(), {"x", "y"});
  RingPresentation c(r);
  MonoidHom h(FineMonoid(), FineMonoid::free_monoid(2), {});
  return {h, a, c, {}, {r.var(0), r.var(1)}, RingMap(a, c, {}), {"x", "y"}};
}

// Q = ℕ → P = ℕ, 1 ↦ a, with t = 0 and C = B.
ChartData power_chart(int n) {
  PolyRing a0(Field::rationals(), {});
  RingPresentation a(a0);
  PolyRing r(Field::rationals(), {"x"});
  RingPresentation c(r, {r.var(0).pow(static_cast<unsigned>(n))});
  MonoidHom h(FineMonoid::free_monoid(1), FineMonoid::free_monoid(1), {int_vec({n})});
  return {h, a, c, {a0.zero()}, {r.var(0)}, RingMap(a, c, {}), {"x"}};
}

std::vector<std::vector<std::string>> plane_ideals() {
  return {{},           {"x", "y"},   {"x+y"},       {"x+y-1"},  {"x"},        {"y-1"},     {"x^2"},
          {"x*y"},      {"x-1"},      {"x^2", "y"},  {"x-y"},    {"x*y-1"},    {"x^2-y^3"}, {"x", "y-1"},
          {"x-1", "y-1"}, {"x^2+y^2"}, {"x*y", "x^2"}};
}

}  // namespace

TEST_CASE("chart validation") {
  CHECK_NOTHROW(validate_chart(nodal_chart()));
  CHECK_NOTHROW(validate_chart(nodal_unit_extension_chart()));
  CHECK_NOTHROW(validate_chart(smooth_divisor_chart()));
  CHECK_NOTHROW(validate_chart(nodal_family_chart()));
  ChartData broken = nodal_chart();
  broken.b[0] = broken.c.parse("x+1");
  CHECK(code_of([&] { validate_chart(broken); }) == ErrorCode::ChartInvalid);
  ChartData units = nodal_unit_extension_chart();
  units.t[2] = units.a.ambient().constant(3);  // t(−1) must invert t(1)
  CHECK(code_of([&] { validate_chart(units); }) == ErrorCode::ChartInvalid);
}

TEST_CASE("A(h,t): no relations when Q = 0") {
  AhtRing r = build_A_ht(smooth_divisor_chart());
  CHECK(r.ring.ambient().nvars() == 1);
  CHECK(r.ring.reduced_relations().empty());
  CHECK(r.generators.empty());
  const RingPresentation& t = r.target;
  CHECK(t.equal(r.comparison.images()[0], t.parse("x*p1")));
}

TEST_CASE("A(h,t) for the nodal chart with t = 0") {
  AhtRing r = build_A_ht(nodal_chart());
  const PolyRing& amb = r.ring.ambient();
  REQUIRE(amb.vars() == std::vector<std::string>{"q1", "q1i", "x", "y"});
  // t(1)·[1,0] − [0,(1,1)] with t(1) = 0, expanded by hand
  RingPresentation expected(amb, {amb.parse("q1*q1i-1"), amb.parse("x*y")});
  CHECK(r.ring.same_ideal(expected));
  CHECK(r.comparison.well_defined());
  // [q,0] ↦ [h(q)] and z ↦ b(z)[z]
  CHECK(r.target.equal(r.comparison.apply(amb.parse("q1")), r.target.parse("p1*p2")));
  CHECK(r.target.equal(r.comparison.apply(amb.parse("x")), r.target.parse("x*p1")));
}

TEST_CASE("A(h,t) with t = 1 is a localization") {
  PolyRing a0(Field::rationals(), {});
  RingPresentation a(a0);
  PolyRing cr(Field::rationals(), {"x", "y"});
  RingPresentation c(cr, {cr.parse("x*y-1")});
  MonoidHom h(FineMonoid::free_monoid(1), FineMonoid::free_monoid(2), {int_vec({1, 1})});
  ChartData chart{h, a, c, {a0.one()}, {cr.var(0), cr.var(1)}, RingMap(a, c, {}), {"u", "v"}};
  AhtRing r = build_A_ht(chart);
  const PolyRing& amb = r.ring.ambient();
  // Eliminating s: k[u,v,w]/(uvw − 1) maps isomorphically, w ↦ s⁻¹.
  PolyRing l(Field::rationals(), {"u", "v", "w"});
  RingPresentation loc(l, {l.parse("u*v*w-1")});
  RingMap m(loc, r.ring, {amb.parse("u"), amb.parse("v"), amb.parse("q1i")});
  CHECK(m.well_defined());
  CHECK(m.is_surjective());
  CHECK(same_ideal(l, m.kernel(), loc.relations()));
  CHECK(r.ring.equal(amb.parse("q1"), amb.parse("u*v")));
}

TEST_CASE("comparison square commutes for random diagonal-type charts") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(0, 3);
  for (int trial = 0; trial < 10; ++trial) {
    long e1 = d(rng), e2 = d(rng);
    if (e1 + e2 == 0) e2 = 1;
    PolyRing a0(Field::rationals(), {});
    RingPresentation a(a0);
    PolyRing cr(Field::rationals(), {"x", "y"});
    RingPresentation c(cr, {cr.var(0).pow(static_cast<unsigned>(e1)) * cr.var(1).pow(static_cast<unsigned>(e2))});
    MonoidHom h(FineMonoid::free_monoid(1), FineMonoid::free_monoid(2), {int_vec({e1, e2})});
    ChartData chart{h, a, c, {a0.zero()}, {cr.var(0), cr.var(1)}, RingMap(a, c, {}), {"x", "y"}};
    AhtRing r = build_A_ht(chart);
    CHECK(r.comparison.well_defined());
    for (std::size_t i = 0; i < r.ring.ambient().nvars(); ++i) {
      // every relation generator maps to zero
      for (const auto& g : r.ring.relations()) CHECK(r.target.is_zero(r.comparison.apply(g)));
    }
    ChartRing b = build_B(chart);
    CHECK(b.to_c.well_defined());
    CHECK(b.ring.group().rank() == 1);
  }
}

TEST_CASE("B for the nodal, smooth-divisor and family charts") {
  ChartRing nodal = build_B(nodal_chart());
  const PolyRing& na = nodal.ring.ring().ambient();
  CHECK(nodal.ring.ring().same_ideal(RingPresentation(na, {na.parse("x*y")})));
  CHECK(nodal.ring.group() == FgAbGroup::free(1));
  CHECK(nodal.ring.degrees() == std::vector<IntVec>{int_vec({1}), int_vec({-1})});

  ChartRing smooth = build_B(smooth_divisor_chart());
  CHECK(smooth.ring.ring().reduced_relations().empty());
  CHECK(smooth.ring.group() == FgAbGroup::free(1));
  CHECK(smooth.ring.degrees() == std::vector<IntVec>{int_vec({1})});

  ChartRing fam = build_B(nodal_family_chart());
  const PolyRing& fa = fam.ring.ring().ambient();
  CHECK(fa.vars() == std::vector<std::string>{"t", "x", "y"});
  CHECK(fam.ring.ring().same_ideal(RingPresentation(fa, {fa.parse("x*y-t")})));
  CHECK(fam.ring.degrees() == std::vector<IntVec>{int_vec({0}), int_vec({1}), int_vec({-1})});
}

TEST_CASE("free basis certificate for the diagonal") {
  for (const ChartData& chart : {nodal_chart(), nodal_family_chart(), smooth_divisor_chart()}) {
    Classification cl = classify_morphism(chart.h);
    REQUIRE(cl.basis.has_value());
    ChartRing b = build_B(chart);
    FreenessCertificate cert = free_basis_certificate(chart, b, *cl.basis, 5);
    CHECK(cert.spans);
    CHECK(cert.checked > 5);
    if (chart.a.ambient().nvars() == 0) {
      REQUIRE(cert.independent.has_value());
      CHECK(*cert.independent);
    }
  }
}

TEST_CASE("second chart criterion examples") {
  ChartData nodal = nodal_chart();
  CHECK(second_chart_criterion(nodal, ModulePresentation::free(nodal.c, 1)).log_flat);
  CHECK_FALSE(second_chart_criterion(nodal, cyclic(nodal.c, {"x+y"})).log_flat);
  CHECK(second_chart_criterion(nodal, cyclic(nodal.c, {"x-1"})).log_flat);
  CHECK_FALSE(second_chart_criterion(nodal, cyclic(nodal.c, {"x", "y"})).log_flat);

  ChartData smooth = smooth_divisor_chart();
  CHECK(second_chart_criterion(smooth, ModulePresentation::free(smooth.c, 1)).log_flat);
  CHECK_FALSE(second_chart_criterion(smooth, cyclic(smooth.c, {"x"})).log_flat);
  CHECK(second_chart_criterion(smooth, cyclic(smooth.c, {"x-1"})).log_flat);
  ChartVerdict v = second_chart_criterion(smooth, cyclic(smooth.c, {"x"}));
  CHECK(v.shape == shape_name(ShapeKind::Chart));
  CHECK_FALSE(v.certificate.holds);
}

TEST_CASE("second chart criterion guards") {
  PolyRing a0(Field::rationals(), {});
  RingPresentation a(a0);
  RingPresentation c(a0);
  MonoidHom h(FineMonoid::free_monoid(1), FineMonoid(), {IntVec{}});
  ChartData collapse{h, a, c, {a0.one()}, {}, RingMap(a, c, {}), {}};
  CHECK(code_of([&] { second_chart_criterion(collapse, ModulePresentation::free(c, 1)); }) ==
        ErrorCode::NotInjectiveH);

  // ℕ → ⟨2,3⟩: P is not free over its units and Q ≠ 0.
  PolyRing r(Field::rationals(), {"u", "v"});
  RingPresentation cc(r, {r.parse("u^3-v^2"), r.parse("u")});
  FineMonoid cusp(FgAbGroup::free(1), {int_vec({2}), int_vec({3})});
  MonoidHom hc(FineMonoid::free_monoid(1), cusp, {int_vec({2})});
  ChartData cusp_chart{hc, a, cc, {a0.zero()}, {r.var(0), r.var(1)}, RingMap(a, cc, {}), {"u", "v"}};
  CHECK(code_of([&] { second_chart_criterion(cusp_chart, ModulePresentation::free(cc, 1)); }) ==
        ErrorCode::UnsupportedShape);

  ChartData power = power_chart(2);
  CHECK_NOTHROW(second_chart_criterion(power, ModulePresentation::free(power.c, 1)));
}

TEST_CASE("log flatness over the toric point") {
  ToricAlgebra kp = toric_ideal(FineMonoid::free_monoid(2), {"x", "y"});
  const RingPresentation& r = kp.ring;
  PointVerdict free1 = log_flat_over_point(kp, ModulePresentation::free(r, 1));
  CHECK(free1.log_flat);
  CHECK(free1.primes.size() == 4);
  CHECK_FALSE(log_flat_over_point(kp, cyclic(r, {"x", "y"})).log_flat);
  PointVerdict diag = log_flat_over_point(kp, cyclic(r, {"x+y"}));
  CHECK_FALSE(diag.log_flat);
  for (const auto& pt : diag.primes) {
    bool maximal = pt.prime.contains(int_vec({1, 0})) && pt.prime.contains(int_vec({0, 1}));
    CHECK(pt.tor.is_zero == !maximal);
    if (maximal) CHECK(pt.tor.dim == 1);
  }
  PointVerdict shifted = log_flat_over_point(kp, cyclic(r, {"x+y-1"}));
  CHECK(shifted.log_flat);
  CHECK(shifted.primes.size() == 4);
}

TEST_CASE("second criterion agrees with the per-prime test when Q = 0 and A = k") {
  ChartData chart = toric_point_chart();
  ToricAlgebra kp = toric_ideal(FineMonoid::free_monoid(2), {"x", "y"});
  std::vector<ModulePresentation> corpus;
  for (const auto& ideal : plane_ideals()) corpus.push_back(cyclic(chart.c, ideal));
  corpus.push_back(cyclic(chart.c, {"x"}).direct_sum(cyclic(chart.c, {"y-1"})));
  corpus.push_back(ModulePresentation(chart.c, 2, {{chart.c.parse("x"), chart.c.parse("y")}}));
  corpus.push_back(ModulePresentation(chart.c, 2, {{chart.c.parse("x-1"), chart.c.parse("y")}}));
  std::size_t flat = 0;
  for (const auto& m : corpus) {
    CAPTURE(m.to_string());
    ModulePresentation mk(kp.ring, m.rank(), m.relations());
    bool chart_v = second_chart_criterion(chart, m).log_flat;
    CHECK(chart_v == log_flat_over_point(kp, mk).log_flat);
    flat += chart_v;
  }
  CHECK(flat > 3);
  CHECK(flat < corpus.size() - 3);

  ChartData line = smooth_divisor_chart();
  ToricAlgebra kn = toric_ideal(FineMonoid::free_monoid(1), {"x"});
  for (const auto& ideal : std::vector<std::vector<std::string>>{{}, {"x"}, {"x-1"}, {"x^2"}, {"x^2-x"}, {"x^3-1"}}) {
    ModulePresentation m = cyclic(line.c, ideal);
    CHECK(second_chart_criterion(line, m).log_flat ==
          log_flat_over_point(kn, ModulePresentation(kn.ring, 1, m.relations())).log_flat);
  }
}

TEST_CASE("monoid-algebra path for a non-free P with Q = 0") {
  FineMonoid cone(FgAbGroup::free(2), {int_vec({1, 0}), int_vec({1, 1}), int_vec({1, 2})});
  ToricAlgebra kp = toric_ideal(cone, {"a", "b", "c"});
  PolyRing a0(Field::rationals(), {});
  RingPresentation a(a0);
  const RingPresentation& c = kp.ring;
  MonoidHom h(FineMonoid(), cone, {});
  ChartData chart{h, a, c, {}, {c.var(0), c.var(1), c.var(2)}, RingMap(a, c, {}), {"a", "b", "c"}};
  for (const auto& ideal : std::vector<std::vector<std::string>>{{}, {"a", "b", "c"}, {"a-1"}, {"a", "b"}, {"b-1"}}) {
    ModulePresentation m = cyclic(c, ideal);
    ChartVerdict v = second_chart_criterion(chart, m);
    CHECK(v.shape == shape_name(ShapeKind::MonoidAlgebra));
    CHECK(v.log_flat == log_flat_over_point(kp, m).log_flat);
  }
}

TEST_CASE("chart change: the unit extension gives an isomorphic graded ring") {
  ChartData base = nodal_chart();
  ChartData ext = nodal_unit_extension_chart();
  ChartRing b2 = build_B(ext);
  CHECK(b2.ring.group() == FgAbGroup::free(1));
  for (const auto& ideal : std::vector<std::vector<std::string>>{{"x+y"}, {}, {"x-1"}, {"x", "y"}}) {
    InvarianceReport r = chart_change_invariance(base, ext, nodal_unit_extension_map(), cyclic(base.c, ideal));
    CHECK(r.well_defined);
    CHECK(r.bijective);
    CHECK(r.inverse_checked);
    CHECK(r.graded);
    CHECK(r.monomials_checked > 20);
    CHECK(r.holds());
  }
  InvarianceReport r = chart_change_invariance(base, ext, nodal_unit_extension_map(), cyclic(base.c, {"x+y"}));
  CHECK_FALSE(r.verdict);
  CHECK_FALSE(r.verdict_other);

  ChartMorphism self{MonoidHom::identity(base.q()), MonoidHom::identity(base.p())};
  CHECK(chart_change_invariance(base, base, self, cyclic(base.c, {"x+y"})).holds());

  ChartData smooth = smooth_divisor_chart();
  CHECK(code_of([&] {
          chart_change_invariance(base, smooth, self, ModulePresentation::free(base.c, 1));
        }) == ErrorCode::ChartsUnrelated);
  ChartMorphism swapped{MonoidHom(base.q(), ext.q(), {int_vec({1, 1})}), nodal_unit_extension_map().on_p};
  CHECK(code_of([&] { chart_change_invariance(base, ext, swapped, ModulePresentation::free(base.c, 1)); }) ==
        ErrorCode::ChartsUnrelated);
}

TEST_CASE("nodal family: graded verdict against flatness and fibers") {
  ChartData fam = nodal_family_chart();
  const RingPresentation& b = fam.c;
  struct Case {
    ModulePresentation m;
    bool graded;
  };
  std::vector<Case> corpus{
      {ModulePresentation::free(b, 1), true},
      {cyclic(b, {"x-1"}), true},
      {cyclic(b, {"x"}), false},
      {cyclic(b, {"x+y"}), false},
      {cyclic(b, {"t-1", "x-1"}), false},
      {cyclic(b, {"x^2-1"}), true},
      {cyclic(b, {"x-y"}), false},
      {cyclic(b, {"x-1"}).direct_sum(ModulePresentation::free(b, 1)), true},
      {cyclic(b, {"y-2"}), true},
  };
  for (const auto& c : corpus) {
    CAPTURE(c.m.to_string());
    FamilyReport r = nodal_family_check(c.m);
    CHECK(r.graded == c.graded);
    CHECK(r.implication_holds());
    CHECK_FALSE(r.discrepancy());
    CHECK(r.special_panel.all_agree());
    if (r.graded) CHECK(r.flat_over_base);
  }
}
