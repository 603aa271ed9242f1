#pragma once

#include <string>
#include <vector>

#include "logflat/lift.hpp"

namespace lift_instances {

using namespace logflat;

// k[ε]/(ε²) → k.
inline SquareZeroExtension dual_numbers(Field k) {
  PolyRing r(k, {"e"});
  return SquareZeroExtension(RingPresentation(r, {r.var(0).pow(2)}), {r.var(0)});
}

inline LogElem at(const SquareZeroExtension& ext, std::initializer_list<long> r, const std::string& u) {
  return {int_vec(r), ext.thick().parse(u)};
}

struct Instance {
  std::string name;
  HomotopyProblem problem;
  std::size_t roots;  // root adjunctions in the canonical lift
};

// Diagonal ℕ → ℕ²: torsion-free cokernel.
inline Instance diagonal() {
  auto ext = dual_numbers(Field::rationals());
  FineMonoid n1 = FineMonoid::free_monoid(1), n2 = FineMonoid::free_monoid(2);
  MonoidHom h(n1, n2, {int_vec({1, 1})});
  return {"diagonal over Q[e]/(e^2)",
          {ext, n2, h, {at(ext, {1, 1}, "1+e")}, {at(ext, {1, 0}, "1"), at(ext, {0, 1}, "1")},
           {ext.thick().parse("1")}},
          0};
}

// ·2 : ℕ → ℕ over 𝔽₅: the cokernel ℤ/2 forces x² = 1+ε.
inline Instance doubling() {
  auto ext = dual_numbers(Field::prime(5));
  FineMonoid n1 = FineMonoid::free_monoid(1);
  MonoidHom h(n1, n1, {int_vec({2})});
  return {"doubling over F5[e]/(e^2)",
          {ext, n1, h, {at(ext, {2}, "1+e")}, {at(ext, {1}, "1")}, {ext.thick().parse("1")}},
          1};
}

// ℕ² → ℕ, both generators to 1: surjective with a kernel.
inline Instance fold() {
  auto ext = dual_numbers(Field::rationals());
  FineMonoid n1 = FineMonoid::free_monoid(1), n2 = FineMonoid::free_monoid(2);
  MonoidHom h(n2, n1, {int_vec({1}), int_vec({1})});
  return {"fold over Q[e]/(e^2)",
          {ext, n1, h, {at(ext, {1}, "1"), at(ext, {1}, "1+e")}, {at(ext, {1}, "1")},
           {ext.thick().parse("1"), ext.thick().parse("1")}},
          0};
}

// ℤ → ℤ/2 with b(1) = −1.
inline Instance sign() {
  auto ext = dual_numbers(Field::rationals());
  FineMonoid z = FineMonoid::group(FgAbGroup::free(1));
  FineMonoid z2 = FineMonoid::group(FgAbGroup::cyclic(2));
  FineMonoid n1 = FineMonoid::free_monoid(1);
  MonoidHom h(z, z2, {int_vec({1}), int_vec({1})});
  return {"sign over Q[e]/(e^2)",
          {ext, n1, h, {at(ext, {0}, "-1+e"), at(ext, {0}, "-1-e")}, {at(ext, {0}, "-1")},
           {ext.thick().parse("1"), ext.thick().parse("1")}},
          0};
}

// ℕ → ℕ², 1 ↦ (2,2) over 𝔽₅: cokernel ℤ ⊕ ℤ/2 with a nontrivial homotopy.
inline Instance mixed() {
  auto ext = dual_numbers(Field::prime(5));
  FineMonoid n1 = FineMonoid::free_monoid(1), n2 = FineMonoid::free_monoid(2);
  MonoidHom h(n1, n2, {int_vec({2, 2})});
  return {"mixed over F5[e]/(e^2)",
          {ext, n2, h, {at(ext, {2, 2}, "1+2*e")}, {at(ext, {1, 0}, "1"), at(ext, {0, 1}, "2")},
           {ext.thick().parse("4")}},
          1};
}

inline std::vector<Instance> all() { return {diagonal(), doubling(), fold(), sign(), mixed()}; }

}  // namespace lift_instances
