#include "logflat/monmod.hpp"

#include <functional>
#include <set>

#include "logflat/error.hpp"

namespace logflat {

std::string module_kind_name(ModuleKind k) {
  switch (k) {
    case ModuleKind::Embedded: return "embedded";
    case ModuleKind::Free: return "free";
    case ModuleKind::IdealSubmodule: return "ideal";
  }
  return "embedded";
}

PModule::PModule(FineMonoid owner, std::size_t components, std::vector<ModElem> generators, ModuleKind kind)
    : PModule(owner, owner, components, std::move(generators), kind) {}

PModule::PModule(FineMonoid owner, FineMonoid scalars, std::size_t components, std::vector<ModElem> generators,
                 ModuleKind kind)
    : owner_(std::move(owner)), scalars_(std::move(scalars)), components_(components), kind_(kind) {
  if (!(owner_.ambient() == scalars_.ambient()))
    fail(ErrorCode::AmbientMismatch, "scalar monoid lives in a different group");
  for (const auto& g : owner_.generators())
    if (!scalars_.member(g)) fail(ErrorCode::NotSubmonoid, "scalar monoid does not contain the owner");
  for (const auto& g : scalars_.generators())
    if (!owner_.member(g)) scalars_is_owner_ = false;
  for (auto& x : generators) {
    x.g = owner_.ambient().reduce(std::move(x.g));
    if (x.comp >= components_) fail(ErrorCode::InvalidArgument, "generator component out of range");
  }
  generators_ = std::move(generators);
}

PModule PModule::free(const FineMonoid& p, std::size_t rank) {
  std::vector<ModElem> gens;
  for (std::size_t i = 0; i < rank; ++i) gens.push_back({p.ambient().zero(), i});
  return PModule(p, rank, gens, ModuleKind::Free);
}

PModule PModule::ideal(const MonoidIdeal& i) {
  std::vector<ModElem> gens;
  for (const auto& g : i.generators()) gens.push_back({g, 0});
  return PModule(i.owner(), 1, gens, ModuleKind::IdealSubmodule);
}

PModule PModule::localization(const Localization& l) {
  const FineMonoid& p = l.map.source();
  return PModule(p, l.monoid, 1, {{p.ambient().zero(), 0}});
}

std::optional<std::size_t> PModule::member_generator(const ModElem& x) const {
  owner_.ambient().check_element(x.g);
  for (std::size_t k = 0; k < generators_.size(); ++k) {
    const ModElem& t = generators_[k];
    if (t.comp == x.comp && scalars_.member(owner_.ambient().sub(x.g, t.g))) return k;
  }
  return std::nullopt;
}

bool PModule::member(const ModElem& x) const { return member_generator(x).has_value(); }

bool PModule::same_class(const ModElem& a, const ModElem& b) const {
  return a.comp == b.comp && owner_.in_groupification(owner_.ambient().sub(a.g, b.g));
}

bool PModule::leq(const ModElem& lower, const ModElem& upper) const {
  return lower.comp == upper.comp && owner_.member(owner_.ambient().sub(upper.g, lower.g));
}

std::vector<ModElem> PModule::elements_up_to(std::size_t degree) const {
  std::vector<ModElem> out;
  std::set<std::pair<std::size_t, IntVec>> seen;
  auto scal = scalars_.elements_up_to(degree);
  for (const auto& t : generators_)
    for (const auto& p : scal) {
      IntVec y = owner_.ambient().add(p, t.g);
      if (seen.insert({t.comp, y}).second) out.push_back({y, t.comp});
    }
  return out;
}

std::string PModule::to_string() const {
  std::string s = module_kind_name(kind_) + " module over " + owner_.to_string() + ", " +
                  std::to_string(components_) + " components, generators {";
  for (std::size_t k = 0; k < generators_.size(); ++k) {
    if (k) s += ", ";
    s += logflat::to_string(generators_[k].g) + "@" + std::to_string(generators_[k].comp);
  }
  return s + "}";
}

namespace {

mpq_class weight(const FineMonoid& l, const IntVec& x) {
  QVec f = l.free_part(x);
  mpq_class s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += l.grading()[i] * f[i];
  return s;
}

// Calls visit on each sum of non-unit generators of l with weight ≤ bound until it returns true.
bool for_each_below(const FineMonoid& l, const mpq_class& bound, const std::function<bool(const IntVec&)>& visit) {
  std::vector<std::size_t> pos;
  std::vector<mpq_class> wt;
  for (std::size_t i = 0; i < l.num_generators(); ++i)
    if (!l.unit_generators()[i]) {
      pos.push_back(i);
      wt.push_back(weight(l, l.generators()[i]));
    }
  const FgAbGroup& a = l.ambient();
  std::set<IntVec> seen;
  std::function<bool(std::size_t, const IntVec&, const mpq_class&)> rec =
      [&](std::size_t k, const IntVec& cur, const mpq_class& left) -> bool {
    if (k == pos.size()) return seen.insert(cur).second && visit(cur);
    IntVec x = cur;
    for (mpq_class rest = left; rest >= 0; rest -= wt[k]) {
      if (rec(k + 1, x, rest)) return true;
      x = a.add(x, l.generators()[pos[k]]);
    }
    return false;
  };
  return rec(0, a.zero(), bound);
}

bool has_common_lower_bound(const PModule& m, std::size_t i, std::size_t j) {
  const FineMonoid& l = m.scalars();
  const FgAbGroup& a = m.owner().ambient();
  const ModElem& t1 = m.generators()[i];
  const ModElem& t2 = m.generators()[j];
  for (const auto& tk : m.generators()) {
    if (!m.same_class(tk, t1)) continue;
    IntVec a1 = a.sub(t1.g, tk.g), a2 = a.sub(t2.g, tk.g);
    mpq_class w1 = weight(l, a1), w2 = weight(l, a2);
    if (w1 < 0 || w2 < 0) continue;
    bool found = for_each_below(l, std::min(w1, w2), [&](const IntVec& x) {
      return l.member(a.sub(a1, x)) && l.member(a.sub(a2, x));
    });
    if (found) return true;
  }
  return false;
}

// Class index of every generator; classes are (component, coset of P^gp).
std::vector<std::size_t> generator_classes(const PModule& m, std::size_t& count,
                                           std::vector<std::size_t>* representatives = nullptr) {
  std::vector<std::size_t> cls(m.generators().size());
  std::vector<std::size_t> reps;
  for (std::size_t k = 0; k < m.generators().size(); ++k) {
    std::size_t c = 0;
    while (c < reps.size() && !m.same_class(m.generators()[reps[c]], m.generators()[k])) ++c;
    if (c == reps.size()) reps.push_back(k);
    cls[k] = c;
  }
  count = reps.size();
  if (representatives) *representatives = reps;
  return cls;
}

}  // namespace

FlatVerdict is_flat(const PModule& m) {
  FlatVerdict v;
  for (std::size_t i = 0; i < m.generators().size(); ++i)
    for (std::size_t j = i + 1; j < m.generators().size(); ++j) {
      if (!m.same_class(m.generators()[i], m.generators()[j])) continue;
      if (!has_common_lower_bound(m, i, j)) {
        v.witness = std::make_pair(i, j);
        return v;
      }
    }
  v.flat = true;
  return v;
}

std::optional<std::pair<IntVec, std::size_t>> decompose_in_basis(const PModule& m, const std::vector<ModElem>& basis,
                                                                 const ModElem& x) {
  std::optional<std::pair<IntVec, std::size_t>> out;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    if (basis[s].comp != x.comp) continue;
    IntVec p = m.owner().ambient().sub(x.g, basis[s].g);
    if (!m.owner().member(p)) continue;
    if (out) return std::nullopt;
    out = std::make_pair(p, s);
  }
  return out;
}

BasisResult extract_basis(const PModule& m, std::size_t window) {
  if (!m.generated_over_owner())
    fail(ErrorCode::NotFinitelyGenerated, "module is a localization and not finitely generated over its owner");
  BasisResult r;
  FlatVerdict v = is_flat(m);
  if (!v.flat) {
    r.witness = v.witness;
    return r;
  }
  std::size_t count = 0;
  auto cls = generator_classes(m, count);
  std::vector<ModElem> basis;
  for (std::size_t c = 0; c < count; ++c) {
    std::optional<std::size_t> minimal;
    for (std::size_t k = 0; k < cls.size() && !minimal; ++k) {
      if (cls[k] != c) continue;
      bool below_all = true;
      for (std::size_t j = 0; j < cls.size() && below_all; ++j)
        if (cls[j] == c && !m.leq(m.generators()[k], m.generators()[j])) below_all = false;
      if (below_all) minimal = k;
    }
    if (!minimal) fail(ErrorCode::Validation, "flat module class without a minimal generator");
    basis.push_back(m.generators()[*minimal]);
  }
  // Certificate: every window element decomposes uniquely.
  for (const auto& x : m.elements_up_to(window)) {
    if (!decompose_in_basis(m, basis, x)) fail(ErrorCode::Validation, "basis certificate failed");
    ++r.window_checked;
  }
  r.basis = std::move(basis);
  return r;
}

bool is_finitely_generated(const PModule& m, const std::vector<ModElem>& candidate) {
  for (const auto& s : candidate)
    if (!m.member(s)) return false;
  auto covered = [&](const ModElem& x) {
    for (const auto& s : candidate)
      if (m.leq(s, x)) return true;
    return false;
  };
  for (const auto& t : m.generators())
    if (!covered(t)) return false;
  if (!m.generated_over_owner())
    for (const auto& s : candidate)
      for (const auto& l : m.scalars().generators())
        if (!m.owner().member(l) && !covered({m.owner().ambient().add(s.g, l), s.comp})) return false;
  return true;
}

PModule tensor(const PModule& m, const PModule& n) {
  if (!(m.owner() == n.owner())) fail(ErrorCode::OwnerMismatch, "tensor factors over different monoids");
  if (!is_flat(m).flat && !is_flat(n).flat)
    fail(ErrorCode::UnsupportedModuleClass, "tensor product needs a flat factor");
  const FgAbGroup& a = m.owner().ambient();
  std::size_t cm = 0, cn = 0;
  auto clm = generator_classes(m, cm);
  auto cln = generator_classes(n, cn);
  std::vector<IntVec> sgens = m.scalars().generators();
  for (const auto& g : n.scalars().generators()) sgens.push_back(g);
  FineMonoid scalars(a, sgens);
  std::vector<ModElem> gens;
  for (std::size_t i = 0; i < m.generators().size(); ++i)
    for (std::size_t j = 0; j < n.generators().size(); ++j)
      gens.push_back({a.add(m.generators()[i].g, n.generators()[j].g), clm[i] * cn + cln[j]});
  ModuleKind kind =
      m.kind() == ModuleKind::Free && n.kind() == ModuleKind::Free ? ModuleKind::Free : ModuleKind::Embedded;
  return PModule(m.owner(), scalars, cm * cn, gens, kind);
}

bool is_unit_quotient(const MonoidHom& h) {
  const FineMonoid& p = h.target();
  FineMonoid img(p.ambient(), h.images());
  for (const auto& g : p.generators())
    if (!img.member(g)) return false;
  const Subgroup& gp = h.source().groupification();
  Subgroup k = kernel(h.gp());
  for (std::size_t i = 0; i < k.group.dim(); ++i) {
    IntVec x = gp.inclusion.apply(k.inclusion.apply(k.group.basis(i)));
    if (!h.source().is_unit(x)) return false;
  }
  return true;
}

PModule base_change(const PModule& m, const MonoidHom& h, bool h_flat) {
  if (!(m.owner() == h.source())) fail(ErrorCode::OwnerMismatch, "module is not over the source of the map");
  if (!h_flat && !is_unit_quotient(h) && !is_flat(m).flat)
    fail(ErrorCode::UnsupportedModuleClass, "base change needs a flat module, a flat map or a unit quotient");
  const FgAbGroup& qa = m.owner().ambient();
  std::size_t count = 0;
  std::vector<std::size_t> reps;
  auto cls = generator_classes(m, count, &reps);
  std::vector<ModElem> gens;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    // Classes inside Q^gp keep their position; other cosets are translated to their representative.
    const IntVec& rep = m.generators()[reps[cls[k]]].g;
    IntVec d = m.owner().in_groupification(rep) ? m.generators()[k].g : qa.sub(m.generators()[k].g, rep);
    gens.push_back({h.apply(d), cls[k]});
  }
  const FineMonoid& p = h.target();
  std::vector<IntVec> sgens = p.generators();
  if (!m.generated_over_owner())
    for (const auto& l : m.scalars().generators()) sgens.push_back(h.apply(l));
  FineMonoid scalars = m.generated_over_owner() ? p : FineMonoid(p.ambient(), sgens);
  ModuleKind kind = m.kind() == ModuleKind::Free ? ModuleKind::Free : ModuleKind::Embedded;
  return PModule(p, scalars, count, gens, kind);
}

bool same_module(const PModule& a, const PModule& b) {
  if (!(a.owner() == b.owner()) || !(a.scalars() == b.scalars()) || a.components() != b.components()) return false;
  for (const auto& g : a.generators())
    if (!b.member(g)) return false;
  for (const auto& g : b.generators())
    if (!a.member(g)) return false;
  return true;
}

}  // namespace logflat
