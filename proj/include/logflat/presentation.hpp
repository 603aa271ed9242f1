#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logflat/groebner.hpp"
#include "logflat/poly.hpp"

namespace logflat {

// R = k[x]/I.
class RingPresentation {
 public:
  RingPresentation();
  explicit RingPresentation(PolyRing ambient, std::vector<Poly> relations = {});

  const PolyRing& ambient() const;
  const Field& field() const { return ambient().field(); }
  const std::vector<Poly>& relations() const;
  const SubmoduleGB& gb() const;
  std::vector<Poly> reduced_relations() const;

  Poly parse(const std::string& s) const { return ambient().parse(s); }
  Poly var(std::size_t i) const { return ambient().var(i); }
  Poly var(const std::string& name) const { return ambient().var(name); }
  Poly normal_form(const Poly& f) const;
  bool is_zero(const Poly& f) const { return normal_form(f).is_zero(); }
  bool equal(const Poly& a, const Poly& b) const { return is_zero(a - b); }
  bool is_zero_ring() const { return is_zero(ambient().one()); }

  RingPresentation quotient(const std::vector<Poly>& extra) const;
  // Dimension over the field, if finite.
  std::optional<std::size_t> vector_space_dim() const;
  bool same_ideal(const RingPresentation& o) const;
  std::string to_string() const;

 private:
  struct Data;
  std::shared_ptr<Data> d_;
};

// M = R^rank / ⟨relations⟩ over R = k[x]/I; relations are columns.
class ModulePresentation {
 public:
  ModulePresentation() = default;
  ModulePresentation(RingPresentation ring, std::size_t rank, std::vector<PolyVec> relations = {});
  static ModulePresentation free(const RingPresentation& ring, std::size_t rank);
  static ModulePresentation cyclic(const RingPresentation& ring, const std::vector<Poly>& ideal);

  const RingPresentation& ring() const { return ring_; }
  std::size_t rank() const { return rank_; }
  const std::vector<PolyVec>& relations() const { return relations_; }
  // Relations together with I·R^rank, as vectors over the ambient polynomial ring.
  std::vector<PolyVec> full_relations() const;
  const SubmoduleGB& gb() const;

  PolyVec normal_form(const PolyVec& v) const;
  bool is_zero(const PolyVec& v) const { return is_zero_vec(normal_form(v)); }
  bool is_zero_module() const;
  std::optional<std::size_t> vector_space_dim() const;
  // Standard monomials (component, exponent) spanning M over the field; requires finite dimension.
  std::vector<std::pair<std::size_t, Exps>> standard_basis() const;

  ModulePresentation direct_sum(const ModulePresentation& o) const;
  ModulePresentation quotient(const std::vector<PolyVec>& extra) const;
  // M ⊗_R R/J for R/J = `target`, a quotient of the same ambient ring.
  ModulePresentation tensor_quotient(const RingPresentation& target) const;
  std::string to_string() const;

 private:
  RingPresentation ring_;
  std::size_t rank_ = 0;
  std::vector<PolyVec> relations_;
  std::shared_ptr<std::optional<SubmoduleGB>> gb_ = std::make_shared<std::optional<SubmoduleGB>>();
};

// Images of the source generators, in target coordinates.
struct ModuleMap {
  ModulePresentation source;
  ModulePresentation target;
  std::vector<PolyVec> images;

  PolyVec apply(const PolyVec& v) const;
  bool well_defined() const;
};

// A submodule of a presented module with its presentation on the chosen generators.
struct Subquotient {
  ModulePresentation module;
  std::vector<PolyVec> generators;  // in the ambient coordinates
};

// (K + N)/N presented on the generators K, inside R^rank.
Subquotient subquotient(const RingPresentation& ring, std::size_t rank, const std::vector<PolyVec>& k,
                        const std::vector<PolyVec>& n);
Subquotient kernel(const ModuleMap& f);
ModulePresentation cokernel(const ModuleMap& f);
bool is_injective(const ModuleMap& f);
bool is_surjective(const ModuleMap& f);
// Kernel of multiplication by f on M.
Subquotient multiplication_kernel(const Poly& f, const ModulePresentation& m);
bool regular_element_test(const Poly& f, const ModulePresentation& m);

// F₂ → F₁ → F₀ → M over R: d1 = relations of M, d2 = generators of their syzygies over R.
struct Resolution2 {
  std::size_t f0, f1;
  std::vector<PolyVec> d1, d2;
};
Resolution2 resolve2(const ModulePresentation& m);

struct TorResult {
  ModulePresentation module;
  bool is_zero = false;
  std::optional<std::size_t> dim;
};
// Tor₁^R(M, R/J): resolve M and tensor with R/J.
TorResult tor1(const ModulePresentation& m, const std::vector<Poly>& j);
// Same group computed by resolving R/J and tensoring with M.
TorResult tor1_via_quotient(const ModulePresentation& m, const std::vector<Poly>& j);

std::vector<Poly> ideal_intersection(const PolyRing& ring, const std::vector<Poly>& a, const std::vector<Poly>& b);
// Annihilator of M as an ideal of the ambient ring (contains the ring relations).
std::vector<Poly> annihilator(const ModulePresentation& m);
// M_𝔮 = 0 for the prime 𝔮 generated by `prime`, decided for maximal 𝔮 by ann(M) + 𝔮 = (1).
bool localization_vanishes_at_maximal(const ModulePresentation& m, const std::vector<Poly>& maximal);

// φ : S = k[y]/J → R = k[x]/I given by images of the y's.
class RingMap {
 public:
  RingMap(RingPresentation source, RingPresentation target, std::vector<Poly> images);

  const RingPresentation& source() const { return source_; }
  const RingPresentation& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  Poly apply(const Poly& f) const;
  bool well_defined() const;
  // Generators of ker φ in the source ambient ring (including J).
  std::vector<Poly> kernel() const;
  // Some g with φ(g) = f in R, if f lies in the image.
  std::optional<Poly> preimage(const Poly& f) const;
  bool is_surjective() const;
  RingMap then(const RingMap& g) const;

 private:
  struct Elim;
  const Elim& elim() const;

  RingPresentation source_;
  RingPresentation target_;
  std::vector<Poly> images_;
  std::shared_ptr<std::shared_ptr<Elim>> elim_ = std::make_shared<std::shared_ptr<Elim>>();
};

// M ⊗_S R along f.
ModulePresentation base_change(const ModulePresentation& m, const RingMap& f);

}  // namespace logflat
