#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logflat/monmod.hpp"
#include "logflat/monoid.hpp"

namespace logflat {

enum class Tri { Yes, No, Undecided };

std::string tri_name(Tri t);

// A basis S for a free morphism h : Q → P, given by the decomposition p = h(q) + s.
struct FreeBasis {
  std::string description;
  // (q in the ambient of Q, s in the ambient of P).
  std::function<std::optional<std::pair<IntVec, IntVec>>(const IntVec&)> decompose;
  std::optional<std::vector<IntVec>> finite_elements;

  bool contains(const FineMonoid& q, const IntVec& x) const;
};

struct Classification {
  bool injective = false;
  bool strict = false;
  bool vertical = false;
  Tri flat = Tri::Undecided;
  Tri free = Tri::Undecided;
  std::optional<FreeBasis> basis;
  std::string witness;  // incomparable pair or failed condition when not flat
  std::string rule;     // which decision procedure produced the verdict
  FgAbGroup cokernel_gp;
};

Classification classify_morphism(const MonoidHom& h);

bool is_strict(const MonoidHom& h);
bool is_vertical(const MonoidHom& h);

// An x in the ambient of Q with h(x) = y, for y in h(Q^gp).
std::optional<IntVec> gp_preimage(const MonoidHom& h, const IntVec& y);

enum class Integrality { Integral, NotIntegral, Unknown };

std::string integrality_name(Integrality i);

struct Pushout {
  FineMonoid monoid;
  MonoidHom left;   // P1 → pushout
  MonoidHom right;  // P2 → pushout
  Quotient presentation;
  Integrality set_level = Integrality::Unknown;
};

// Integral pushout P1 ⊕_Q P2 inside (A1 ⊕ A2) / ⟨(h1(q), −h2(q))⟩.
Pushout pushout(const MonoidHom& h1, const MonoidHom& h2);

struct PartitionMorphism {
  MonoidHom map;
  bool with_boundary = false;
  FreeBasis basis;
};

namespace partition {

PartitionMorphism diagonal(std::size_t m);
PartitionMorphism boundary();  // 0 → ℕ
PartitionMorphism identity(const FineMonoid& p);
PartitionMorphism product(const std::vector<PartitionMorphism>& hs);
// g ∘ h
PartitionMorphism compose(const PartitionMorphism& h, const PartitionMorphism& g);
// h pushed out along f : Q → Q′, giving Q′ → P ⊕_Q Q′.
PartitionMorphism pushout_of(const PartitionMorphism& h, const MonoidHom& f);

}  // namespace partition

Classification classify_morphism(const PartitionMorphism& h);

// p = Δ(q) + s with s having a zero coordinate.
std::pair<mpz_class, IntVec> decompose_diagonal(std::size_t m, const IntVec& p);

struct StructureMapReport {
  bool decomposition_ok = true;
  bool injective_ok = true;
  bool alpha_commutative = true;
  bool beta_commutative = true;
  bool alpha_unit = true;
  bool beta_unit = true;
  bool alpha_associative = true;
  bool beta_cocycle = true;
  std::size_t basis_elements = 0;
  std::size_t checked = 0;
  bool all() const {
    return decomposition_ok && injective_ok && alpha_commutative && beta_commutative && alpha_unit && beta_unit &&
           alpha_associative && beta_cocycle;
  }
};

// Checks the basis certificate and the structure-map identities on all elements of degree ≤ window.
StructureMapReport check_free_basis(const MonoidHom& h, const FreeBasis& basis, std::size_t window = 8,
                                    std::size_t max_triples = 20);

}  // namespace logflat
