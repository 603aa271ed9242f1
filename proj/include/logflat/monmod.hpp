#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logflat/monoid.hpp"

namespace logflat {

struct ModElem {
  IntVec g;
  std::size_t comp = 0;
  bool operator==(const ModElem& other) const = default;
};

enum class ModuleKind { Embedded, Free, IdealSubmodule };

std::string module_kind_name(ModuleKind k);

// M = ∪ (L + g_k, f_k) inside ambient × {0..components-1}, where L ⊇ P is the scalar monoid.
// L = P for finitely generated modules; L = S⁻¹P for localizations.
class PModule {
 public:
  PModule(FineMonoid owner, std::size_t components, std::vector<ModElem> generators,
          ModuleKind kind = ModuleKind::Embedded);
  PModule(FineMonoid owner, FineMonoid scalars, std::size_t components, std::vector<ModElem> generators,
          ModuleKind kind = ModuleKind::Embedded);

  static PModule free(const FineMonoid& p, std::size_t rank);
  static PModule ideal(const MonoidIdeal& i);
  static PModule localization(const Localization& l);

  const FineMonoid& owner() const { return owner_; }
  const FineMonoid& scalars() const { return scalars_; }
  std::size_t components() const { return components_; }
  const std::vector<ModElem>& generators() const { return generators_; }
  ModuleKind kind() const { return kind_; }
  // Scalars add no new elements beyond the owner.
  bool generated_over_owner() const { return scalars_is_owner_; }

  bool member(const ModElem& x) const;
  // Index of a generator g_k with x − g_k ∈ L.
  std::optional<std::size_t> member_generator(const ModElem& x) const;
  bool same_class(const ModElem& a, const ModElem& b) const;
  bool leq(const ModElem& lower, const ModElem& upper) const;  // upper − lower ∈ P

  std::vector<ModElem> elements_up_to(std::size_t degree) const;
  std::string to_string() const;

 private:
  FineMonoid owner_;
  FineMonoid scalars_;
  std::size_t components_;
  std::vector<ModElem> generators_;
  ModuleKind kind_;
  bool scalars_is_owner_ = true;
};

struct FlatVerdict {
  bool flat = false;
  // Generator indices with no common lower bound.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

FlatVerdict is_flat(const PModule& m);

struct BasisResult {
  std::optional<std::vector<ModElem>> basis;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  std::size_t window_checked = 0;
};

// Throws NotFinitelyGenerated when the scalars add elements beyond the owner.
BasisResult extract_basis(const PModule& m, std::size_t window = 8);

// The basis element s and the scalar p with x = p + s, assuming s is a basis.
std::optional<std::pair<IntVec, std::size_t>> decompose_in_basis(const PModule& m, const std::vector<ModElem>& basis,
                                                                 const ModElem& x);

bool is_finitely_generated(const PModule& m, const std::vector<ModElem>& candidate);

PModule tensor(const PModule& m, const PModule& n);

// Extension of scalars; valid when M is flat, h is flat (certified by the caller), or h divides by units.
PModule base_change(const PModule& m, const MonoidHom& h, bool h_flat = false);

// h surjective with kernel of h^gp inside Q*.
bool is_unit_quotient(const MonoidHom& h);

// Same components and mutual containment of generators.
bool same_module(const PModule& a, const PModule& b);

}  // namespace logflat
