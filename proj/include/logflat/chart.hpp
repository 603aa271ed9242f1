#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logflat/graded.hpp"
#include "logflat/monoid.hpp"
#include "logflat/morphism.hpp"
#include "logflat/presentation.hpp"
#include "logflat/toric.hpp"

namespace logflat {

// Q → A and P → C over h : Q → P and f : A → C, with f(t(q)) = b(h(q)).
struct ChartData {
  MonoidHom h;
  RingPresentation a;
  RingPresentation c;
  std::vector<Poly> t;  // images of the generators of Q in A
  std::vector<Poly> b;  // images of the generators of P in C
  RingMap f;
  std::vector<std::string> p_names;  // names for the monoid variables of P, defaults z1, z2, …

  const FineMonoid& q() const { return h.source(); }
  const FineMonoid& p() const { return h.target(); }
};

// Throws ChartInvalid unless t and b kill the toric relations and the square commutes on generators.
void validate_chart(const ChartData& chart);

// t and b on arbitrary monoid elements.
Poly chart_t(const ChartData& chart, const IntVec& q);
Poly chart_b(const ChartData& chart, const IntVec& p);

// A(h,t) = A[Q^gp ⊕ P]/I(h,t) with its comparison map to C[P^gp].
struct AhtRing {
  RingPresentation ring;    // variables: A, Laurent pairs and roots of unity for Q^gp, monoid variables of P
  RingPresentation target;  // C[P^gp]: variables of C, then Laurent pairs and roots of unity for P^gp
  RingMap comparison;
  std::vector<Poly> generators;  // t(q)[q,0] − [0,h(q)] for the generators q of Q
};
AhtRing build_A_ht(const ChartData& chart);

// B = A ⊗_{ℤ[Q]} ℤ[P] graded by (P/Q)^gp, with the ring map to C.
struct ChartRing {
  GradedRing ring;
  RingMap to_c;
  std::size_t a_vars = 0;  // the variables of A come first, then one per generator of P
  ToricAlgebra toric;      // k[P] on the same names
};
ChartRing build_B(const ChartData& chart);

// Checks [p] = t(q)[s] in B for p = h(q) + s over the window, and k-linear independence of the [s] when A is a field.
struct FreenessCertificate {
  bool spans = true;
  std::optional<bool> independent;
  std::size_t checked = 0;
};
FreenessCertificate free_basis_certificate(const ChartData& chart, const ChartRing& b, const FreeBasis& basis,
                                           std::size_t window = 6);

// The recursion tree of B for the spawning set of non-unit generators; requires P ≅ ℕ^E ⊕ P*.
ChartShape chart_shape(const ChartData& chart, const ChartRing& b);

// M over C as a module over B along B → C; requires B → C surjective.
ModulePresentation restrict_to_B(const ChartRing& b, const ModulePresentation& m);

struct ChartVerdict {
  bool log_flat = false;
  std::string shape;
  Certificate certificate;
};
// Graded flatness of M over (G, B) for an injective chart.
ChartVerdict second_chart_criterion(const ChartData& chart, const ModulePresentation& m);

struct PrimeTor {
  MonoidIdeal prime;
  TorResult tor;
};
struct PointVerdict {
  bool log_flat = true;
  std::vector<PrimeTor> primes;
};
// Tor₁^{k[P]}(M, k[P]/k[I]) = 0 for every prime I of P; M over kp.ring.
PointVerdict log_flat_over_point(const ToricAlgebra& kp, const ModulePresentation& m);

// Q → Q′ and P → P′ compatible with h, h′, t, t′ and b, b′ over the same A and C.
struct ChartMorphism {
  MonoidHom on_q;
  MonoidHom on_p;
};
struct InvarianceReport {
  bool well_defined = false;
  bool bijective = false;
  bool inverse_checked = false;
  bool graded = false;
  std::size_t monomials_checked = 0;
  bool verdict = false;
  bool verdict_other = false;
  bool holds() const { return well_defined && bijective && inverse_checked && graded && verdict == verdict_other; }
};
InvarianceReport chart_change_invariance(const ChartData& chart, const ChartData& other, const ChartMorphism& map,
                                         const ModulePresentation& m, std::size_t degree_bound = 3);

// Nodal chart over k, unit-extension chart, and the family over k[t], as used in examples and tests.
ChartData nodal_chart(Field k = Field::rationals());
ChartData nodal_unit_extension_chart(Field k = Field::rationals());
ChartMorphism nodal_unit_extension_map();
ChartData smooth_divisor_chart(Field k = Field::rationals());
ChartData nodal_family_chart(Field k = Field::rationals());

// For M over k[t,x,y]/(xy − t): the graded verdict against flatness over k[t] with the fiber conditions at t = 0
// and at the sample point t = generic.
struct FamilyReport {
  bool graded = false;
  bool flat_over_base = false;
  bool special_fiber = false;  // Tor₁(M/tM, k[x,y]/(x,y)) = 0
  NodalPanel special_panel;
  bool generic_fiber = false;  // Tor₁ against the non-strict locus of the fiber, which is empty
  bool combination() const { return flat_over_base && special_fiber && generic_fiber; }
  bool implication_holds() const { return !graded || (special_fiber && generic_fiber); }
  bool discrepancy() const { return graded != combination(); }
};
FamilyReport nodal_family_check(const ModulePresentation& m, const mpq_class& generic = 1);

}  // namespace logflat
