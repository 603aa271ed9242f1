#include "logflat/toric.hpp"

#include <numeric>

#include "logflat/error.hpp"

namespace logflat {

namespace {

Exps to_exps(const IntVec& v) {
  Exps e;
  for (const auto& x : v) {
    if (x < 0 || !x.fits_sint_p()) fail(ErrorCode::InvalidArgument, "exponent out of range");
    e.push_back(static_cast<int>(x.get_si()));
  }
  return e;
}

std::vector<IntVec> relation_lattice(const FineMonoid& p) {
  const std::size_t n = p.num_generators();
  GroupHom eval = GroupHom::from_images(FgAbGroup::free(n), p.ambient(), p.generators());
  Subgroup k = kernel(eval);
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < k.group.dim(); ++i) out.push_back(k.inclusion.apply(k.group.basis(i)));
  return out;
}

}  // namespace

std::vector<Poly> lattice_basis_binomials(const FineMonoid& p, const PolyRing& ring) {
  std::vector<Poly> out;
  for (const auto& u : relation_lattice(p)) {
    Exps plus(u.size()), minus(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!u[i].fits_sint_p()) fail(ErrorCode::InvalidArgument, "relation exponent out of range");
      long c = u[i].get_si();
      (c > 0 ? plus : minus)[i] = static_cast<int>(c > 0 ? c : -c);
    }
    Poly b = ring.monomial(plus) - ring.monomial(minus);
    if (!b.is_zero()) out.push_back(b);
  }
  return out;
}

ToricAlgebra toric_ideal(const FineMonoid& p, std::vector<std::string> names, bool allow_units, Field field) {
  if (!allow_units && !p.is_sharp()) fail(ErrorCode::NotPointed, "monoid has nontrivial units: " + p.to_string());
  const std::size_t n = p.num_generators();
  if (names.empty())
    for (std::size_t i = 0; i < n; ++i) names.push_back("z" + std::to_string(i + 1));
  if (names.size() != n) fail(ErrorCode::InvalidArgument, "one variable name per generator required");
  PolyRing ring(field, names);
  std::vector<Poly> ideal = lattice_basis_binomials(p, ring);
  // I_L = (lattice binomials) : (z₁⋯zₙ)^∞, one variable at a time.
  if (!ideal.empty())
    for (std::size_t i = 0; i < n; ++i) ideal = saturate(ring, ideal, ring.var(i));
  return {p, RingPresentation(ring, ideal), p.generators()};
}

IntVec ToricAlgebra::degree_of(const Exps& e) const {
  IntVec c;
  for (int x : e) c.push_back(mpz_class(x));
  return monoid.combine(c);
}

Exps ToricAlgebra::exponent_of(const IntVec& p) const {
  auto w = monoid.member_witness(p);
  if (!w) fail(ErrorCode::Validation, "element " + to_string(p) + " is not in the monoid");
  return to_exps(*w);
}

Poly ToricAlgebra::monomial(const IntVec& p) const { return ring.ambient().monomial(exponent_of(p)); }

std::vector<Poly> ToricAlgebra::ideal(const MonoidIdeal& i) const {
  std::vector<Poly> out;
  for (const auto& g : i.generators()) out.push_back(monomial(g));
  return out;
}

ModuleAlgebra module_algebra(const PModule& m, Field field) {
  const FineMonoid& l = m.scalars();
  ModuleAlgebra out{toric_ideal(l, {}, true, field), ModulePresentation(), {}};
  const auto& gens = m.generators();
  std::vector<std::size_t> cls(gens.size());
  std::iota(cls.begin(), cls.end(), 0);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (cls[i] == i && m.same_class(gens[i], gens[j])) cls[i] = cls[j];
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (cls[i] != i) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (cls[j] == i) members.push_back(j);
    out.classes.push_back(members);
  }
  const PolyRing& ring = out.scalars.ring.ambient();
  const FgAbGroup& a = l.ambient();
  ModulePresentation total(out.scalars.ring, 0);
  for (const auto& members : out.classes) {
    // dᵢ = gᵢ − g₀ = aᵢ − bᵢ with aᵢ, bᵢ ∈ L; the class is isomorphic to the monomial ideal on c + dᵢ, c = Σ bᵢ.
    std::vector<IntVec> coeffs;
    for (std::size_t k : members) {
      auto c = solve_combination(a, l.generators(), a.sub(gens[k].g, gens[members[0]].g));
      if (!c) fail(ErrorCode::Validation, "generators of one class differ outside the scalar group");
      coeffs.push_back(*c);
    }
    const std::size_t n = l.num_generators();
    IntVec neg_sum(n, 0);
    for (const auto& c : coeffs)
      for (std::size_t t = 0; t < n; ++t)
        if (c[t] < 0) neg_sum[t] -= c[t];
    std::vector<PolyVec> monos;
    for (const auto& c : coeffs) {
      IntVec e = neg_sum;
      for (std::size_t t = 0; t < n; ++t) e[t] += c[t];  // aᵢ + Σ_{j≠i} bⱼ
      monos.push_back({ring.monomial(to_exps(e))});
    }
    std::vector<PolyVec> gensyz = monos;
    for (const auto& r : out.scalars.ring.relations()) gensyz.push_back({r});
    std::vector<PolyVec> rel;
    for (const auto& s : syzygies(ring, 1, gensyz)) {
      PolyVec v(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(monos.size()));
      if (!is_zero_vec(v)) rel.push_back(std::move(v));
    }
    total = total.direct_sum(ModulePresentation(out.scalars.ring, monos.size(), rel));
  }
  out.module = total;
  return out;
}

}  // namespace logflat
