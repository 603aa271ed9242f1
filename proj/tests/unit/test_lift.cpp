#include <random>

#include "doctest.h"
#include "lift_instances.hpp"
#include "logflat/error.hpp"

using namespace logflat;
using lift_instances::at;
using lift_instances::dual_numbers;

namespace {

bool has_step(const HomotopyLift& l, const std::string& s) {
  for (const auto& x : l.steps)
    if (x == s) return true;
  return false;
}

bool is_one(const RingPresentation& r, const Poly& f) { return r.equal(f, r.ambient().one()); }

}  // namespace

TEST_CASE("square-zero extensions are checked") {
  PolyRing r(Field::rationals(), {"e"});
  RingPresentation cube(r, {r.var(0).pow(3)});
  CHECK_THROWS_AS(SquareZeroExtension(cube, {r.var(0)}), Error);
  SquareZeroExtension ok(cube, {r.var(0).pow(2)});
  CHECK(ok.thin().vector_space_dim() == 2);
}

TEST_CASE("zero kernel: the lift is b itself with trivial homotopies") {
  auto base = lift_instances::diagonal().problem;
  SquareZeroExtension trivial(base.ext.thick(), {});
  HomotopyProblem pr{trivial, base.chart, base.h, {at(trivial, {1, 1}, "1")}, base.b, base.eta};
  HomotopyLift l = homotopy_lift(pr);
  CHECK(check_lift(pr, l).all());
  CHECK(l.roots.empty());
  for (const auto& a : l.alpha) CHECK(is_one(l.cover_thin, a));
  for (const auto& b : l.beta) CHECK(is_one(l.cover, b));
  for (std::size_t i = 0; i < l.l.size(); ++i) {
    CHECK(l.l[i].r == pr.b[i].r);
    CHECK(l.cover.equal(l.l[i].u, pr.b[i].u));
  }
}

TEST_CASE("fixed instances satisfy the three identities") {
  for (const auto& inst : lift_instances::all()) {
    CAPTURE(inst.name);
    HomotopyLift l = homotopy_lift(inst.problem);
    LiftCheck c = check_lift(inst.problem, l);
    CHECK(c.homomorphisms);
    CHECK(c.alpha_b);
    CHECK(c.beta_l);
    CHECK(c.eta);
    CHECK(l.roots.size() == inst.roots);
    CHECK(cover_is_free(inst.problem, l));
    if (inst.problem.h.gp().is_injective())
      for (const auto& b : l.beta) CHECK(is_one(l.cover, b));
  }
}

TEST_CASE("diagonal: split cokernel, no cover") {
  auto inst = lift_instances::diagonal();
  HomotopyLift l = homotopy_lift(inst.problem);
  CHECK(has_step(l, "torsion-free cokernel"));
  CHECK_FALSE(has_step(l, "torsion cokernel"));
  CHECK(l.cover.ambient() == inst.problem.ext.thick().ambient());
  // l(e1)·l(e2) = a(1)
  CHECK(l.cover.equal(l.l[0].u * l.l[1].u, inst.problem.ext.thick().parse("1+e")));
  for (const auto& a : l.alpha) CHECK(is_one(l.cover_thin, a));
}

TEST_CASE("doubling: root of 1+e adjoined") {
  auto inst = lift_instances::doubling();
  HomotopyLift l = homotopy_lift(inst.problem);
  REQUIRE(l.roots.size() == 1);
  CHECK(has_step(l, "torsion cokernel"));
  const RootAdjunction& x = l.roots[0];
  CHECK(x.degree == 2);
  Poly xv = l.cover.var(x.variable);
  CHECK(l.cover.equal(xv * xv, l.cover.parse("1+e")));
  CHECK(l.cover.equal(l.l[0].u, xv));
  REQUIRE(l.torsion_roots.size() == 1);
  CHECK(l.cover_thin.equal(l.torsion_roots[0].second, xv));
  CHECK(l.cover_thin.equal(l.alpha[0], xv));
  CHECK(l.cover.vector_space_dim() == 4);
  CHECK(l.cover_thin.vector_space_dim() == 2);

  HomotopyLift cut = homotopy_lift(inst.problem, {.seed = 0, .shortcut = true});
  CHECK(cut.roots.empty());
  CHECK(check_lift(inst.problem, cut).all());
  CHECK(cut.cover.equal(cut.l[0].u, cut.cover.parse("1+3*e")));  // 1 + e/2 over 𝔽₅
  CHECK_THROWS_AS(verify_lift_uniqueness(inst.problem, l, cut), Error);
}

TEST_CASE("fold: β carries the kernel") {
  auto inst = lift_instances::fold();
  HomotopyLift l = homotopy_lift(inst.problem);
  CHECK(has_step(l, "surjection onto the image of h"));
  CHECK(l.roots.empty());
  CHECK(is_one(l.cover, l.beta[0]));
  CHECK(l.cover.equal(l.beta[1], l.cover.parse("1+e")));
}

TEST_CASE("sign: torsion target handled in the surjective step") {
  auto inst = lift_instances::sign();
  HomotopyLift l = homotopy_lift(inst.problem);
  CHECK(l.roots.empty());
  CHECK(l.cover.equal(l.l[0].u, l.cover.parse("-1")));
  CHECK(l.cover.equal(l.beta[0], l.cover.parse("1-e")));
  CHECK(l.cover.equal(l.beta[1], l.cover.parse("1+e")));
}

TEST_CASE("mixed: root of a unit reducing to eta") {
  auto inst = lift_instances::mixed();
  HomotopyLift l = homotopy_lift(inst.problem);
  CHECK(has_step(l, "torsion cokernel"));
  CHECK(has_step(l, "torsion-free cokernel"));
  REQUIRE(l.roots.size() == 1);
  REQUIRE(l.torsion_roots.size() == 1);
  const RootAdjunction& x = l.roots[0];
  Poly xv = l.cover.var(x.variable);
  CHECK(l.cover.equal(xv * xv, x.unit));
  CHECK_FALSE(l.cover_thin.equal(x.unit, l.cover_thin.ambient().one()));
}

TEST_CASE("lifts from different seeds are related by a unique γ") {
  for (const auto& inst : lift_instances::all()) {
    CAPTURE(inst.name);
    std::vector<HomotopyLift> lifts;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      lifts.push_back(homotopy_lift(inst.problem, {.seed = seed}));
      CHECK(check_lift(inst.problem, lifts.back()).all());
    }
    for (const auto& l1 : lifts)
      for (const auto& l2 : lifts) {
        LiftHomotopy g = verify_lift_uniqueness(inst.problem, l1, l2);
        REQUIRE(g.gamma.size() == l1.l.size());
        for (std::size_t i = 0; i < g.gamma.size(); ++i)
          CHECK(l1.cover.equal(g.gamma[i] * l2.l[i].u, l1.l[i].u));
      }
    LiftHomotopy self = verify_lift_uniqueness(inst.problem, lifts[0], lifts[0]);
    for (const auto& g : self.gamma) CHECK(is_one(lifts[0].cover, g));
  }
}

TEST_CASE("diagonal: a different splitting gives a nontrivial γ") {
  auto inst = lift_instances::diagonal();
  HomotopyLift l0 = homotopy_lift(inst.problem);
  bool nontrivial = false;
  for (std::uint64_t seed = 1; seed < 12 && !nontrivial; ++seed) {
    HomotopyLift l1 = homotopy_lift(inst.problem, {.seed = seed});
    LiftHomotopy g = verify_lift_uniqueness(inst.problem, l1, l0);
    for (std::size_t i = 0; i < g.gamma.size(); ++i) {
      if (!is_one(l0.cover, g.gamma[i])) nontrivial = true;
      CHECK(l0.cover.equal(g.gamma[i] * l0.l[i].u, l1.l[i].u));
    }
  }
  CHECK(nontrivial);
}

TEST_CASE("homotopy violations are rejected") {
  auto inst = lift_instances::diagonal();
  HomotopyProblem bad = inst.problem;
  bad.eta = {bad.ext.thick().parse("2")};
  CHECK_THROWS_AS(homotopy_lift(bad), Error);
  try {
    homotopy_lift(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HomotopyInvalid);
  }
  HomotopyProblem nonunit = inst.problem;
  nonunit.a = {at(nonunit.ext, {1, 1}, "e")};
  CHECK_THROWS_AS(homotopy_lift(nonunit), Error);
}

TEST_CASE("property: random maps ℕ → ℕ² over 𝔽₅ and ℚ") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coord(0, 3), unit(1, 4), eps(0, 4);
  for (int trial = 0; trial < 24; ++trial) {
    Field k = trial % 2 ? Field::prime(5) : Field::rationals();
    auto ext = dual_numbers(k);
    long h1 = coord(rng), h2 = coord(rng);
    if (h1 + h2 == 0) h1 = 1;
    FineMonoid n1 = FineMonoid::free_monoid(1), n2 = FineMonoid::free_monoid(2);
    MonoidHom h(n1, n2, {int_vec({h1, h2})});
    long b1 = unit(rng), b2 = unit(rng), c = eps(rng), a0 = unit(rng);
    const PolyRing& r = ext.thick().ambient();
    Poly bh = r.constant(b1).pow(static_cast<unsigned>(h1)) * r.constant(b2).pow(static_cast<unsigned>(h2));
    Poly a = r.constant(a0) + r.constant(c) * r.var(0);
    // η = ia / bh
    Poly eta = ext.thin().normal_form(r.constant(a0) * r.constant(k.inv(bh.terms().front().c)));
    HomotopyProblem pr{ext, n2, h, {{int_vec({h1, h2}), a}},
                       {{int_vec({1, 0}), r.constant(b1)}, {int_vec({0, 1}), r.constant(b2)}}, {eta}};
    CAPTURE(h1);
    CAPTURE(h2);
    HomotopyLift l = homotopy_lift(pr);
    CHECK(check_lift(pr, l).all());
    CHECK(cover_is_free(pr, l));
    HomotopyLift l2 = homotopy_lift(pr, {.seed = static_cast<std::uint64_t>(trial + 1)});
    CHECK_NOTHROW(verify_lift_uniqueness(pr, l, l2));
  }
}
