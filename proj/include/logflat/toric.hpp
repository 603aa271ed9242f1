#pragma once

#include <string>
#include <vector>

#include "logflat/monmod.hpp"
#include "logflat/monoid.hpp"
#include "logflat/presentation.hpp"

namespace logflat {

// k[P] = k[z₁,…,zₙ]/I_L with zᵢ ↦ [gᵢ], L the lattice of relations among the generators.
struct ToricAlgebra {
  FineMonoid monoid;
  RingPresentation ring;
  std::vector<IntVec> degrees;  // degree of zᵢ in the ambient of P

  IntVec degree_of(const Exps& e) const;
  Exps exponent_of(const IntVec& p) const;  // some monomial of degree p ∈ P
  Poly monomial(const IntVec& p) const;
  std::vector<Poly> ideal(const MonoidIdeal& i) const;
};

// Throws NotPointed when P has units unless allow_units is set.
ToricAlgebra toric_ideal(const FineMonoid& p, std::vector<std::string> names = {}, bool allow_units = false,
                         Field field = Field::rationals());
// Binomials z^{u⁺} − z^{u⁻} for a basis u of the relation lattice, before saturation.
std::vector<Poly> lattice_basis_binomials(const FineMonoid& p, const PolyRing& ring);

// k[M] for an embedded P-module M, presented over k[L] with L the scalar monoid of M; k[L] is flat over k[P].
struct ModuleAlgebra {
  ToricAlgebra scalars;
  ModulePresentation module;
  std::vector<std::vector<std::size_t>> classes;  // generator indices per summand
};

ModuleAlgebra module_algebra(const PModule& m, Field field = Field::rationals());

}  // namespace logflat
