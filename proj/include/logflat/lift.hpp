#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "logflat/abgrp.hpp"
#include "logflat/monoid.hpp"
#include "logflat/presentation.hpp"

namespace logflat {

// A′ → A = A′/I with I² = 0; A shares the ambient of A′.
class SquareZeroExtension {
 public:
  SquareZeroExtension(RingPresentation thick, std::vector<Poly> ideal);

  const RingPresentation& thick() const { return thick_; }
  const std::vector<Poly>& ideal() const { return ideal_; }
  const RingPresentation& thin() const { return thin_; }

 private:
  RingPresentation thick_;
  std::vector<Poly> ideal_;
  RingPresentation thin_;
};

// (r, u) in R ⊕ units: r in the ambient of the chart R, u a unit of the ring at hand.
struct LogElem {
  IntVec r;
  Poly u;
};

// M′ = R ⊕ (A′)* → M = R ⊕ A*, with a on generators of Q (in M′), b on generators of P (in M) and
// η on generators of Q (units of A) subject to η·bh = ia.
struct HomotopyProblem {
  SquareZeroExtension ext;
  FineMonoid chart;  // R: sharp with torsion-free groupification
  MonoidHom h;
  std::vector<LogElem> a;
  std::vector<LogElem> b;
  std::vector<Poly> eta;
};

struct LiftOptions {
  // Nonzero seeds perturb the choices that leave the cover unchanged: preimages under h, complements, lifts.
  std::uint64_t seed = 0;
  // Skip the root when n is invertible and the unit already reduces to 1.
  bool shortcut = false;
};

struct RootAdjunction {
  std::string variable;
  unsigned degree = 0;
  Poly unit;  // x^degree = unit
};

struct HomotopyLift {
  RingPresentation cover;       // B′, the ambient of A′ extended by the roots
  RingPresentation cover_thin;  // B′ ⊗ A
  std::vector<RootAdjunction> roots;
  std::vector<LogElem> l;     // on generators of P, units in B′
  std::vector<Poly> alpha;    // on generators of P, in B′ ⊗ A
  std::vector<Poly> beta;     // on generators of Q, in B′
  std::vector<std::string> steps;
  // Lifts of the torsion generators of (P/Q)^gp with their images under α.
  std::vector<std::pair<IntVec, Poly>> torsion_roots;
};

HomotopyLift homotopy_lift(const HomotopyProblem& problem, const LiftOptions& options = {});

struct LiftCheck {
  bool homomorphisms = true;  // l, α, β respect the relations among generators
  bool alpha_b = true;        // α·b = il
  bool beta_l = true;         // β·lh = a
  bool eta = true;            // η = iβ·αh
  bool all() const { return homomorphisms && alpha_b && beta_l && eta; }
};
LiftCheck check_lift(const HomotopyProblem& problem, const HomotopyLift& lift);

// B′ is free over A′ on the monomials x^e with e below the root degrees: the leading monomials of B′ are
// those of A′ together with the pure powers of the roots.
bool cover_is_free(const HomotopyProblem& problem, const HomotopyLift& lift);

// γ : P^gp → (B′)* on generators of P, with γ·l′ = l, iγ·α′ = α and β′ = β·γh.
struct LiftHomotopy {
  std::vector<Poly> gamma;
};
LiftHomotopy verify_lift_uniqueness(const HomotopyProblem& problem, const HomotopyLift& lift,
                                    const HomotopyLift& other);

}  // namespace logflat
