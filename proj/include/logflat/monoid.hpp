#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logflat/abgrp.hpp"
#include "logflat/lp.hpp"

namespace logflat {

struct Face {
  std::vector<bool> mask;  // generators lying in the face
  std::size_t dimension = 0;
  QVec functional;  // vanishes on the face, ≥ 1 on the other generators
};

class FineMonoid {
 public:
  FineMonoid();  // the trivial monoid
  FineMonoid(FgAbGroup ambient, std::vector<IntVec> generators);

  static FineMonoid free_monoid(std::size_t n);  // ℕ^n ⊂ ℤ^n
  static FineMonoid group(const FgAbGroup& g);   // all of g

  const FgAbGroup& ambient() const;
  const std::vector<IntVec>& generators() const;
  std::size_t num_generators() const { return generators().size(); }

  // P^gp as a subgroup of the ambient group.
  const Subgroup& groupification() const;
  const Subgroup& unit_group() const;
  const std::vector<bool>& unit_generators() const;
  bool is_sharp() const;
  bool is_group() const;
  // Rank of P^gp.
  std::size_t dimension() const;
  // Vanishes on units, ≥ 1 on the remaining generators.
  const QVec& grading() const;
  QVec free_part(const IntVec& x) const;

  bool in_groupification(const IntVec& g) const;
  bool member(const IntVec& g) const;
  // ℕ-coefficients on the generators summing to g.
  std::optional<std::vector<mpz_class>> member_witness(const IntVec& g) const;
  bool is_unit(const IntVec& g) const;
  // ℕ-coefficients expressing −g_i for a unit generator g_i.
  const std::vector<mpz_class>& negation_witness(std::size_t i) const;

  IntVec combine(const std::vector<mpz_class>& coefficients) const;
  // Integer combination of generators equal to g, for g in P^gp.
  std::optional<IntVec> group_coordinates(const IntVec& g) const;

  // Faces ordered by dimension (descending), then generator mask (lexicographic).
  const std::vector<Face>& faces() const;
  std::optional<Face> face_of(const std::vector<bool>& mask) const;

  // Elements Σ n_i g_i with Σ n_i ≤ degree, deduplicated, in enumeration order.
  std::vector<IntVec> elements_up_to(std::size_t degree) const;

  bool operator==(const FineMonoid& other) const;
  std::string to_string() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

class MonoidHom {
 public:
  MonoidHom() = default;
  MonoidHom(FineMonoid source, FineMonoid target, std::vector<IntVec> images);

  static MonoidHom identity(const FineMonoid& p);

  const FineMonoid& source() const { return source_; }
  const FineMonoid& target() const { return target_; }
  const std::vector<IntVec>& images() const { return images_; }

  // Evaluation on the groupification of the source (x must lie in Q^gp).
  IntVec apply(const IntVec& x) const;
  // h^gp on the canonical generators of Q^gp, landing in the target ambient.
  const GroupHom& gp() const { return gp_; }
  MonoidHom then(const MonoidHom& outer) const;

 private:
  FineMonoid source_;
  FineMonoid target_;
  std::vector<IntVec> images_;
  GroupHom gp_;
};

class MonoidIdeal {
 public:
  MonoidIdeal(FineMonoid owner, std::vector<IntVec> generators);

  const FineMonoid& owner() const { return owner_; }
  const std::vector<IntVec>& generators() const { return generators_; }
  bool contains(const IntVec& x) const;
  bool is_empty() const { return generators_.empty(); }
  bool same_as(const MonoidIdeal& other) const;
  // Complement is a face.
  bool is_prime() const;
  std::optional<Face> complement_face() const;

 private:
  FineMonoid owner_;
  std::vector<IntVec> generators_;
};

struct PrimeIdeal {
  MonoidIdeal ideal;
  Face face;
};

std::vector<PrimeIdeal> prime_ideals(const FineMonoid& p);

struct Sharpening {
  Subgroup units;
  FineMonoid sharp;
  MonoidHom projection;
};

Sharpening units_sharpen(const FineMonoid& p);

struct Localization {
  FineMonoid monoid;
  MonoidHom map;
};

// S given by elements of P.
Localization localize(const FineMonoid& p, const std::vector<IntVec>& s);
Localization localize_face(const FineMonoid& p, const Face& face);

}  // namespace logflat
