#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logflat/abgrp.hpp"
#include "logflat/monmod.hpp"
#include "logflat/monoid.hpp"
#include "logflat/presentation.hpp"
#include "logflat/toric.hpp"

namespace logflat {

// B with a G-grading given on the variables; every relation must be homogeneous.
class GradedRing {
 public:
  GradedRing() = default;
  GradedRing(FgAbGroup group, RingPresentation ring, std::vector<IntVec> degrees);
  // k[P] graded by P^gp inside the ambient of P.
  static GradedRing of(const ToricAlgebra& kp);

  const FgAbGroup& group() const { return group_; }
  const RingPresentation& ring() const { return ring_; }
  const std::vector<IntVec>& degrees() const { return degrees_; }

  IntVec degree_of(const Exps& e) const;
  std::map<IntVec, Poly> homogeneous_components(const Poly& f) const;
  bool is_homogeneous(const Poly& f) const;
  // Every component of every generator lies in the ideal generated together with the ring relations.
  bool is_homogeneous_ideal(const std::vector<Poly>& gens) const;
  // Degrees pushed along γ : G → G′; throws InvalidArgument unless γ is injective.
  GradedRing regrade(const GroupHom& gamma) const;
  GradedRing quotient(const std::vector<Poly>& extra) const;

 private:
  FgAbGroup group_;
  RingPresentation ring_;
  std::vector<IntVec> degrees_;
};

// Generator i sits in degree shifts[i]; each relation column is homogeneous for these shifts.
class GradedModule {
 public:
  GradedModule(GradedRing ring, std::vector<IntVec> shifts, std::vector<PolyVec> relations);

  const GradedRing& ring() const { return ring_; }
  const std::vector<IntVec>& shifts() const { return shifts_; }
  const ModulePresentation& module() const { return module_; }
  // M{h}: every generator moves by −h, so that M{h}_g = M_{g+h}.
  GradedModule shift(const IntVec& h) const;

 private:
  GradedRing ring_;
  std::vector<IntVec> shifts_;
  ModulePresentation module_;
};

struct HomogeneousIdeal {
  GradedRing owner;
  std::vector<Poly> generators;
};

std::vector<Poly> to_ring_ideal(const ToricAlgebra& kp, const MonoidIdeal& i);
// J ∩ P; throws NotHomogeneous when J is not homogeneous for the P^gp grading.
MonoidIdeal to_monoid_ideal(const ToricAlgebra& kp, const std::vector<Poly>& j);
// Throws UnsupportedIdealClass unless J = k[I].
bool is_semiprime(const ToricAlgebra& kp, const std::vector<Poly>& j);

struct PrimeVerdict {
  bool prime = false;
  // Nonzero a, b in k[P]/J with ab = 0, when J = k[I] is semiprime but not prime.
  std::optional<std::pair<Poly, Poly>> zero_divisors;
};
// k[P]/k[I] is a domain iff I is prime and the group of its complement face is torsion-free.
PrimeVerdict is_prime_ideal(const ToricAlgebra& kp, const std::vector<Poly>& j);

struct Certificate {
  std::string criterion;
  bool holds = true;
  std::string detail;
  std::vector<Certificate> children;
};

struct GradedVerdict {
  bool flat = false;
  Certificate certificate;
};

// k[t]-flatness of M over B ⊇ k[t], t the given ambient variable, as torsion-freeness.
struct LineFlatness {
  bool flat = true;
  Poly obstruction;  // product of leading coefficients in k[t]; M is flat iff it is M-regular
};
LineFlatness flat_over_line(const ModulePresentation& m, std::size_t variable);

// Shape (a): k[P] with its P^gp grading, or a regrading along an injective map.
GradedVerdict graded_flat_monoid(const ToricAlgebra& kp, const GradedRing& grading, const ModulePresentation& m);
GradedVerdict graded_flat_monoid(const ToricAlgebra& kp, const ModulePresentation& m);

// Shape (b): B = A ⊗_{ℤ[Q]} ℤ[P] for a free h with spawning set E; each [e] carries the shape of B/[e].
struct ChartShape {
  GradedRing ring;
  std::optional<std::size_t> base_variable;  // A = k[t] for this ambient variable, A = k when empty
  struct Spawn {
    std::string label;
    Poly element;
    std::shared_ptr<const ChartShape> quotient;
  };
  std::vector<Spawn> spawning;
};
GradedVerdict graded_flat_chart(const ChartShape& shape, const ModulePresentation& m);
// k[x,y]/(xy) graded by ℤ with |x| = 1, |y| = −1, E = {x, y}.
ChartShape nodal_shape(const RingPresentation& b);
ChartShape regrade(const ChartShape& shape, const GroupHom& gamma);

// Shape (c): A[G] for G = ℤ^r, A = k or k[t].
struct GroupAlgebra {
  RingPresentation base;
  GradedRing ring;  // ambient: base variables, then u₁, v₁, …, u_r, v_r with uᵢvᵢ = 1
  std::size_t rank = 0;
  std::optional<std::size_t> base_variable;

  Poly unit_monomial(const IntVec& g) const;  // the monomial of degree g
};
GroupAlgebra group_algebra(const RingPresentation& base, std::size_t rank,
                           std::optional<std::size_t> base_variable = std::nullopt);
GroupAlgebra regrade(const GroupAlgebra& ga, const GroupHom& gamma);
ModulePresentation degree_zero_part(const GroupAlgebra& ga, const GradedModule& m);
GradedModule extend_scalars_AG(const GroupAlgebra& ga, const ModulePresentation& n);
// M₀ ⊗ A[G] → M, eᵢ ↦ u^{−hᵢ}eᵢ, checked well defined and bijective.
bool verify_group_algebra_roundtrip(const GroupAlgebra& ga, const GradedModule& m);
GradedVerdict graded_flat_group_algebra(const GroupAlgebra& ga, const GradedModule& m);

// Shape (d): trivial grading, plain flatness over a field or over k[t] itself.
GradedVerdict graded_flat_trivial(const RingPresentation& b, const ModulePresentation& m);

enum class ShapeKind { MonoidAlgebra, Chart, GroupAlgebra, TrivialGrading };
std::string shape_name(ShapeKind k);

struct GradedStructure {
  ShapeKind kind = ShapeKind::TrivialGrading;
  std::optional<ToricAlgebra> monoid_algebra;
  std::optional<GradedRing> grading;
  std::optional<ChartShape> chart;
  std::optional<GroupAlgebra> group_algebra;
  RingPresentation trivial;
};
// Dispatch on the declared shape; group-algebra modules carry degree shifts, so pass them in `graded`.
GradedVerdict graded_flat(const GradedStructure& s, const ModulePresentation& m,
                          const std::optional<GradedModule>& graded = std::nullopt);

// Tor₁(M, B/I) = 0 for every listed homogeneous ideal I.
GradedVerdict fallback_ideal_test(const GradedRing& b, const ModulePresentation& m,
                                  const std::vector<std::vector<Poly>>& ideals);

struct NodalPanel {
  std::array<bool, 10> entries{};
  std::array<std::string, 10> labels;
  // Each of conditions 2–9 after localizing at 𝔪.
  std::array<bool, 8> localized{};
  bool all_agree() const;
};
// M over k[x,y]/(xy) with x, y the first two ambient variables.
NodalPanel nodal_criteria_panel(const ModulePresentation& m);

// 0 = M₀ ⊂ … ⊂ Mₙ = k[P]/k[J] with Mᵢ/Mᵢ₋₁ ≅ (k[P]/k[Iᵢ]){−gᵢ}, Iᵢ prime; P must be free.
struct FiltrationStep {
  IntVec generator;
  MonoidIdeal prime;
};
std::vector<FiltrationStep> monomial_filtration(const FineMonoid& p, const MonoidIdeal& j);

// Tor₁^{k[P]}(k[M], k[P]/k[I]) for each prime I of the owner of M.
GradedVerdict shadow_flat(const PModule& m, Field field = Field::rationals());

}  // namespace logflat
