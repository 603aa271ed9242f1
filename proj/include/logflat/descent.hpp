#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "logflat/presentation.hpp"

namespace logflat {

// p₁(ker p₂) = ker f₁ gives C₁ ⊗_C C₂ = C₁/ker f₁ = C₀; the rest pins down 0 → C → C₁ ⊕ C₂ → C₀ → 0.
struct CocartesianCertificate {
  bool commutes = false;                   // f₁p₁ = f₂p₂ on the generators of C
  bool projections_surjective = false;
  bool injective = false;                  // ker p₁ ∩ ker p₂ = 0
  bool tensor_is_c0 = false;               // p₁(ker p₂)·C₁ = ker f₁
  bool kernels_multiply_to_zero = false;   // ker p₁ · ker p₂ = 0
  bool holds() const {
    return commutes && projections_surjective && injective && tensor_is_c0 && kernels_multiply_to_zero;
  }
};

// C = C₁ ×_{C₀} C₂ for surjections f₁ : C₁ → C₀ and f₂ : C₂ → C₀.
struct GluingDatum {
  RingPresentation c1, c2, c0;
  RingMap f1, f2;
  RingPresentation c;
  RingMap p1, p2;
  std::vector<Poly> k1, k2;  // ker p₁ and ker p₂ in the ambient ring of C
  std::vector<Poly> k0;      // ker(C → C₀)
  std::vector<Poly> i1, i2;  // ker f₁ and ker f₂ in the ambient rings of C₁, C₂
  std::size_t recipe_generators = 0;  // generator pairs plus kernel generators, before pruning
  CocartesianCertificate certificate;
};

// Generators (xᵢ, pᵢ), (q_j, y_j), (z_k, 0) for xᵢ, y_j the variables and z_k generators of ker f₁;
// generators that are polynomials in the others are then eliminated.
GluingDatum fiber_product_ring(const RingPresentation& c1, const RingPresentation& c2, const RingPresentation& c0,
                               const RingMap& f1, const RingMap& f2);

// k[x] ×_k k[y].
GluingDatum nodal_gluing(Field k = Field::rationals());

// The homogeneous pieces of C ⊆ C₁ × C₂ up to a degree, for polynomial rings C₁, C₂ and graded maps where the
// recipe does not apply.
struct TruncatedFiberProduct {
  struct Piece {
    std::vector<std::pair<Poly, Poly>> basis;
    std::size_t kernel_dim = 0;          // dim of (ker p₂)_e
    std::size_t new_kernel_generators = 0;  // (ker p₂)_e modulo C₊·ker p₂
  };
  std::size_t degree = 0;
  std::vector<Piece> pieces;  // e = 0, …, degree

  // c ∈ p₁(C) in degrees ≤ `degree`; throws InvalidArgument beyond.
  bool first_projection_contains(const Poly& c) const;
};
TruncatedFiberProduct truncated_fiber_product(const RingMap& f1, const RingMap& f2, std::size_t degree);

// k[x,y] → k[x] by y ↦ 0 against k → k[x].
struct LineContraction {
  RingMap f1, f2;
};
LineContraction line_contraction(Field k = Field::rationals());

// (M₁, M₂, φ) with φ : M₁ ⊗ C₀ → M₂ ⊗ C₀ given by images of generators.
struct DescentDatum {
  GluingDatum gluing;
  ModulePresentation m1, m2;
  std::vector<PolyVec> phi;
  std::vector<PolyVec> phi_inverse;  // computed, certified two-sided

  ModulePresentation m1_0() const;
  ModulePresentation m2_0() const;
};
// Throws Validation unless φ is a well-defined isomorphism.
DescentDatum make_descent_datum(const GluingDatum& g, ModulePresentation m1, ModulePresentation m2,
                                std::vector<PolyVec> phi);

// M over Cᵢ as a C-module along pᵢ.
ModulePresentation restrict_to_C(const GluingDatum& g, int side, const ModulePresentation& m);

DescentDatum pullback_P(const GluingDatum& g, const ModulePresentation& m);
// ker(M₁ ⊕ M₂ → M₀); generators are recorded in C^{r₁+r₂}.
Subquotient descend_D(const DescentDatum& d);

// Tor₁^C(M, C₀) and Tor₁^{Cᵢ}(Mᵢ, C₀).
TorResult gate_tor(const GluingDatum& g, const ModulePresentation& m);
bool tor_gate(const GluingDatum& g, const ModulePresentation& m);
bool tor_gate_side(const GluingDatum& g, int side, const ModulePresentation& m);

// P(D(d)) → d by the projections of D ⊆ M₁ ⊕ M₂.
struct DatumRoundtrip {
  bool side1_iso = false;
  bool side2_iso = false;
  bool clutching = false;
  bool holds() const { return side1_iso && side2_iso && clutching; }
};
DatumRoundtrip roundtrip_check(const DescentDatum& d);

// The unit M → D(P(M)), m ↦ (m, m); it is always surjective.
struct ModuleRoundtrip {
  bool gate = false;
  bool unit_well_defined = false;
  bool unit_injective = false;
  bool unit_surjective = false;
  std::optional<std::size_t> dim_m, dim_dp;
  bool iso() const { return unit_well_defined && unit_injective && unit_surjective; }
  // Gated modules come back; ungated ones may or may not.
  bool consistent() const { return !gate || iso(); }
};
ModuleRoundtrip roundtrip_check(const GluingDatum& g, const ModulePresentation& m);

struct HomExtComparison {
  std::size_t hom_c = 0, hom_1 = 0, hom_2 = 0, hom_0 = 0, hom_fiber = 0;
  bool hom_bijective = false;  // Hom_C(M, N) → Hom₁ ×_{Hom₀} Hom₂ is injective with equal dimensions
  std::size_t ext_c = 0, ext_1 = 0, ext_2 = 0, ext_0 = 0, ext_fiber = 0;
  bool cocycles_restrict = false;  // C-cocycles restrict to Cᵢ-cocycles and Cᵢ-cocycles to C₀-cocycles
  bool holds() const { return hom_bijective && hom_c == hom_fiber && ext_c == ext_fiber && cocycles_restrict; }
};
// Requires both gates and N finite-dimensional (GateFailed, NotFiniteDimensional).
HomExtComparison hom_ext_fiber_product(const GluingDatum& g, const ModulePresentation& m,
                                       const ModulePresentation& n);

}  // namespace logflat
