#include "logflat/morphism.hpp"

#include <set>

#include "logflat/error.hpp"
#include "logflat/lp.hpp"

namespace logflat {

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Undecided: return "undecided";
  }
  return "undecided";
}

std::string integrality_name(Integrality i) {
  switch (i) {
    case Integrality::Integral: return "integral";
    case Integrality::NotIntegral: return "not_integral";
    case Integrality::Unknown: return "unknown";
  }
  return "unknown";
}

bool FreeBasis::contains(const FineMonoid& q, const IntVec& x) const {
  auto d = decompose(x);
  return d && q.ambient().is_zero(d->first);
}

std::optional<IntVec> gp_preimage(const MonoidHom& h, const IntVec& y) {
  auto x = h.gp().preimage(y);
  if (!x) return std::nullopt;
  return h.source().groupification().inclusion.apply(*x);
}

bool is_strict(const MonoidHom& h) {
  const FineMonoid& p = h.target();
  const FgAbGroup& pa = p.ambient();
  std::vector<IntVec> gens = h.images();
  for (std::size_t i = 0; i < p.num_generators(); ++i)
    if (p.unit_generators()[i]) {
      gens.push_back(p.generators()[i]);
      gens.push_back(pa.neg(p.generators()[i]));
    }
  FineMonoid reach(pa, gens);
  for (const auto& g : p.generators())
    if (!reach.member(g)) return false;
  Quotient mod_units = cokernel(p.unit_group().inclusion);
  Subgroup k = kernel(mod_units.projection.after(h.gp()));
  for (std::size_t i = 0; i < k.group.dim(); ++i) {
    IntVec x = h.source().groupification().inclusion.apply(k.inclusion.apply(k.group.basis(i)));
    if (!h.source().is_unit(x)) return false;
  }
  return true;
}

bool is_vertical(const MonoidHom& h) {
  const FineMonoid& p = h.target();
  std::vector<IntVec> gens = p.generators();
  for (const auto& y : h.images()) gens.push_back(p.ambient().neg(y));
  return FineMonoid(p.ambient(), gens).is_group();
}

namespace {

FgAbGroup relative_cokernel(const MonoidHom& h) {
  const Subgroup& pg = h.target().groupification();
  const Subgroup& qg = h.source().groupification();
  std::vector<IntVec> imgs;
  for (std::size_t i = 0; i < qg.group.dim(); ++i) {
    auto x = pg.inclusion.preimage(h.gp().apply(qg.group.basis(i)));
    if (!x) fail(ErrorCode::Validation, "image of Q^gp outside P^gp");
    imgs.push_back(*x);
  }
  return cokernel(GroupHom::from_images(qg.group, pg.group, imgs)).group;
}

Classification flags(const MonoidHom& h) {
  Classification c;
  c.injective = h.gp().is_injective();
  c.strict = is_strict(h);
  c.vertical = is_vertical(h);
  c.cokernel_gp = relative_cokernel(h);
  return c;
}

mpq_class weight(const FineMonoid& p, const IntVec& x) {
  QVec f = p.free_part(x);
  mpq_class s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += p.grading()[i] * f[i];
  return s;
}

// Smallest k ≥ 1 with k·g ∈ h(Q), if the cone test allows one.
std::optional<std::size_t> multiple_in_image(const FineMonoid& image, const IntVec& g, std::size_t limit) {
  std::vector<QVec> rays;
  for (const auto& y : image.generators()) rays.push_back(image.free_part(y));
  if (!cone_combination(rays, image.free_part(g), image.ambient().rank())) return std::nullopt;
  for (std::size_t k = 1; k <= limit; ++k)
    if (image.member(image.ambient().scale(k, g))) return k;
  return std::nullopt;
}

void decide_finite(const MonoidHom& h, const std::vector<std::size_t>& mult, Classification& c) {
  const FineMonoid& p = h.target();
  const FgAbGroup& pa = p.ambient();
  FineMonoid image(pa, h.images());
  std::vector<IntVec> elems{pa.zero()};
  for (std::size_t i = 0; i < p.num_generators(); ++i) {
    std::vector<IntVec> next;
    for (const auto& e : elems)
      for (std::size_t k = 0; k < mult[i]; ++k) next.push_back(pa.add(e, pa.scale(k, p.generators()[i])));
    elems = std::move(next);
    std::set<IntVec> uniq(elems.begin(), elems.end());
    elems.assign(uniq.begin(), uniq.end());
  }
  // Drop generators lying above another one.
  std::vector<ModElem> gens;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < elems.size() && !redundant; ++j)
      if (i != j && image.member(pa.sub(elems[i], elems[j])) &&
          (j < i || !image.member(pa.sub(elems[j], elems[i]))))
        redundant = true;
    if (!redundant) gens.push_back({elems[i], 0});
  }
  PModule m(image, 1, gens);
  BasisResult b = extract_basis(m, 4);
  c.rule = "finite module over the image";
  if (!b.basis) {
    c.flat = Tri::No;
    c.free = Tri::No;
    c.witness = "incomparable " + to_string(gens[b.witness->first].g) + " and " + to_string(gens[b.witness->second].g);
    return;
  }
  c.flat = Tri::Yes;
  c.free = Tri::Yes;
  std::vector<IntVec> s;
  for (const auto& e : *b.basis) s.push_back(e.g);
  FreeBasis fb;
  fb.description = "finite basis of " + std::to_string(s.size()) + " elements";
  fb.finite_elements = s;
  fb.decompose = [h, image, s](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    const FgAbGroup& a = image.ambient();
    for (const auto& e : s) {
      IntVec y = a.sub(x, e);
      if (image.member(y)) return std::make_pair(*gp_preimage(h, y), e);
    }
    return std::nullopt;
  };
  c.basis = fb;
}

FreeBasis strict_basis(const MonoidHom& h) {
  const FineMonoid& q = h.source();
  const FineMonoid& p = h.target();
  const Subgroup pu = p.unit_group();
  const Subgroup qu = q.unit_group();
  std::vector<IntVec> imgs;
  for (std::size_t i = 0; i < qu.group.dim(); ++i) {
    auto x = pu.inclusion.preimage(h.apply(qu.inclusion.apply(qu.group.basis(i))));
    if (!x) fail(ErrorCode::Validation, "unit of Q maps outside P*");
    imgs.push_back(*x);
  }
  GroupHom hu = GroupHom::from_images(qu.group, pu.group, imgs);
  Quotient g = cokernel(hu);
  FreeBasis fb;
  fb.description = "lifts of P*/h(Q*)";
  fb.decompose = [h, pu, qu, hu, g](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    const FineMonoid& pm = h.target();
    const FgAbGroup& a = pm.ambient();
    if (!pm.member(x)) return std::nullopt;
    const Subgroup& qg = h.source().groupification();
    std::vector<IntVec> gens;
    for (std::size_t i = 0; i < qg.group.dim(); ++i) gens.push_back(h.gp().apply(qg.group.basis(i)));
    for (std::size_t i = 0; i < pu.group.dim(); ++i) gens.push_back(pu.inclusion.apply(pu.group.basis(i)));
    auto sol = solve_combination(a, gens, x);
    if (!sol) return std::nullopt;
    IntVec xq(sol->begin(), sol->begin() + static_cast<long>(qg.group.dim()));
    IntVec y(sol->begin() + static_cast<long>(qg.group.dim()), sol->end());
    xq = qg.group.reduce(xq);
    y = pu.group.reduce(y);
    IntVec cls = g.projection.apply(y);
    IntVec lift = pu.group.reduce(g.section.apply(cls));
    auto z = hu.preimage(pu.group.sub(y, lift));
    if (!z) return std::nullopt;
    const FgAbGroup& qa = h.source().ambient();
    IntVec qv = qa.add(qg.inclusion.apply(xq), qu.inclusion.apply(*z));
    IntVec s = pu.inclusion.apply(lift);
    return std::make_pair(qv, s);
  };
  return fb;
}

FreeBasis group_basis(const MonoidHom& h) {
  const FgAbGroup& pa = h.target().ambient();
  Subgroup img = subgroup_generated(pa, h.images());
  Quotient c = cokernel(img.inclusion);
  FreeBasis fb;
  fb.description = "one element per orbit of h(Q)";
  fb.decompose = [h, c](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    const FgAbGroup& a = h.target().ambient();
    if (!h.target().member(x)) return std::nullopt;
    IntVec lift = a.reduce(c.section.apply(c.projection.apply(x)));
    auto q = gp_preimage(h, a.sub(x, lift));
    if (!q) return std::nullopt;
    return std::make_pair(*q, lift);
  };
  return fb;
}

// The generator q0 when Q ≅ ℕ.
std::optional<IntVec> natural_generator(const FineMonoid& q) {
  if (!q.is_sharp() || !(q.groupification().group == FgAbGroup::free(1))) return std::nullopt;
  IntVec e = q.groupification().inclusion.apply(q.groupification().group.basis(0));
  for (const auto& cand : {e, q.ambient().neg(e)})
    if (q.member(cand)) return cand;
  return std::nullopt;
}

FreeBasis primitive_basis(const MonoidHom& h, const IntVec& q0) {
  FreeBasis fb;
  fb.description = "primitive elements";
  IntVec hq0 = h.apply(q0);
  fb.decompose = [h, q0, hq0](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    const FineMonoid& p = h.target();
    const FgAbGroup& a = p.ambient();
    if (!p.member(x)) return std::nullopt;
    mpq_class bound = weight(p, x) / weight(p, hq0);
    mpz_class k = bound.get_num() / bound.get_den();
    for (; k >= 0; --k) {
      IntVec s = a.sub(x, a.scale(k, hq0));
      if (p.member(s)) return std::make_pair(h.source().ambient().scale(k, q0), s);
    }
    return std::nullopt;
  };
  return fb;
}

// ℕ^a → ℕ^b sending each basis vector to a 0/1 vector, with pairwise disjoint supports.
bool standard_free(const FineMonoid& p) {
  const FgAbGroup& a = p.ambient();
  if (!a.torsion().empty() || p.num_generators() != a.rank()) return false;
  for (std::size_t i = 0; i < p.num_generators(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j)
      if (p.generators()[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

std::optional<FreeBasis> coordinate_partition_basis(const MonoidHom& h) {
  if (!standard_free(h.source()) || !standard_free(h.target())) return std::nullopt;
  const std::size_t b = h.target().ambient().rank();
  std::vector<int> owner(b, -1);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < h.images().size(); ++i) {
    std::vector<std::size_t> block;
    for (std::size_t j = 0; j < b; ++j) {
      const mpz_class& v = h.images()[i][j];
      if (v == 0) continue;
      if (v != 1 || owner[j] >= 0) return std::nullopt;
      owner[j] = static_cast<int>(i);
      block.push_back(j);
    }
    if (block.empty()) return std::nullopt;
    blocks.push_back(block);
  }
  FreeBasis fb;
  fb.description = "points of N^" + std::to_string(b) + " with a zero coordinate on each diagonal block";
  fb.decompose = [blocks, b](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    for (const auto& v : x)
      if (v < 0) return std::nullopt;
    IntVec q(blocks.size()), s = x;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      IntVec part;
      for (auto j : blocks[i]) part.push_back(x[j]);
      q[i] = decompose_diagonal(part.size(), part).first;
      for (auto j : blocks[i]) s[j] -= q[i];
    }
    return std::make_pair(q, s);
  };
  return fb;
}

}  // namespace

Classification classify_morphism(const MonoidHom& h) {
  Classification c = flags(h);
  if (!c.injective) {
    c.flat = Tri::No;
    c.free = Tri::No;
    c.rule = "not injective";
    Subgroup k = kernel(h.gp());
    c.witness = "kernel element " + to_string(h.source().groupification().inclusion.apply(k.inclusion.apply(k.group.basis(0))));
    return c;
  }
  const FineMonoid& p = h.target();
  FineMonoid image(p.ambient(), h.images());
  std::vector<std::size_t> mult;
  std::size_t product = 1;
  for (const auto& g : p.generators()) {
    auto k = multiple_in_image(image, g, 64);
    if (!k) break;
    mult.push_back(*k);
    product *= *k;
  }
  if (mult.size() == p.num_generators() && product <= 4096) {
    decide_finite(h, mult, c);
    return c;
  }
  if (c.strict) {
    c.flat = c.free = Tri::Yes;
    c.rule = "strict and injective";
    c.basis = strict_basis(h);
    return c;
  }
  if (h.source().is_group()) {
    c.flat = c.free = Tri::Yes;
    c.rule = "injective from a group";
    c.basis = group_basis(h);
    return c;
  }
  if (auto q0 = natural_generator(h.source())) {
    c.flat = Tri::Yes;
    IntVec hq0 = h.apply(*q0);
    if (p.is_unit(hq0)) {
      c.free = Tri::No;
      c.rule = "source N acting by a unit";
      c.witness = "h(1) = " + to_string(hq0) + " is a unit, so no element is minimal";
    } else {
      c.free = Tri::Yes;
      c.rule = "injective from N";
      c.basis = primitive_basis(h, *q0);
    }
    return c;
  }
  if (auto fb = coordinate_partition_basis(h)) {
    c.flat = c.free = Tri::Yes;
    c.rule = "coordinate partition morphism";
    c.basis = std::move(fb);
    return c;
  }
  c.rule = "no applicable rule";
  return c;
}

Classification classify_morphism(const PartitionMorphism& h) {
  Classification c = flags(h.map);
  c.flat = c.free = Tri::Yes;
  c.rule = h.with_boundary ? "partition morphism with boundary" : "partition morphism";
  c.basis = h.basis;
  return c;
}

Pushout pushout(const MonoidHom& h1, const MonoidHom& h2) {
  if (!(h1.source() == h2.source())) fail(ErrorCode::InvalidArgument, "pushout legs have different sources");
  const FgAbGroup& a1 = h1.target().ambient();
  const FgAbGroup& a2 = h2.target().ambient();
  const std::size_t d = a1.dim() + a2.dim();
  std::vector<IntVec> rels;
  for (std::size_t i = 0; i < a1.torsion().size(); ++i) {
    IntVec v(d);
    v[a1.rank() + i] = a1.torsion()[i];
    rels.push_back(v);
  }
  for (std::size_t i = 0; i < a2.torsion().size(); ++i) {
    IntVec v(d);
    v[a1.dim() + a2.rank() + i] = a2.torsion()[i];
    rels.push_back(v);
  }
  for (std::size_t j = 0; j < h1.images().size(); ++j) {
    IntVec v(d);
    for (std::size_t i = 0; i < a1.dim(); ++i) v[i] = h1.images()[j][i];
    for (std::size_t i = 0; i < a2.dim(); ++i) v[a1.dim() + i] = -h2.images()[j][i];
    rels.push_back(v);
  }
  Quotient q = presented_group(IntMatrix::from_columns(d, rels));
  auto embed = [&](const IntVec& x, bool second) {
    IntVec v(d);
    for (std::size_t i = 0; i < x.size(); ++i) v[(second ? a1.dim() : 0) + i] = x[i];
    return q.projection.apply(v);
  };
  std::vector<IntVec> gens, left, right;
  for (const auto& g : h1.target().generators()) left.push_back(embed(g, false));
  for (const auto& g : h2.target().generators()) right.push_back(embed(g, true));
  gens = left;
  gens.insert(gens.end(), right.begin(), right.end());
  FineMonoid po(q.group, gens);
  Pushout out{po, MonoidHom(h1.target(), po, left), MonoidHom(h2.target(), po, right), q, Integrality::Unknown};
  if (classify_morphism(h1).flat == Tri::Yes || classify_morphism(h2).flat == Tri::Yes)
    out.set_level = Integrality::Integral;
  return out;
}

std::pair<mpz_class, IntVec> decompose_diagonal(std::size_t m, const IntVec& p) {
  if (p.size() != m || m == 0) fail(ErrorCode::InvalidArgument, "diagonal decomposition needs a point of N^m");
  mpz_class q = p[0];
  for (const auto& x : p) {
    if (x < 0) fail(ErrorCode::InvalidArgument, "diagonal decomposition needs nonnegative coordinates");
    if (x < q) q = x;
  }
  IntVec s(m);
  for (std::size_t i = 0; i < m; ++i) s[i] = p[i] - q;
  return {q, s};
}

namespace partition {

PartitionMorphism diagonal(std::size_t m) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "diagonal needs m ≥ 1");
  FineMonoid n = FineMonoid::free_monoid(1), nm = FineMonoid::free_monoid(m);
  IntVec ones(m, 1);
  PartitionMorphism out{MonoidHom(n, nm, {ones}), false, {}};
  out.basis.description = "{s in N^" + std::to_string(m) + " : some s_i = 0}";
  out.basis.decompose = [m](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    for (const auto& v : x)
      if (v < 0) return std::nullopt;
    auto [q, s] = decompose_diagonal(m, x);
    return std::make_pair(IntVec{q}, s);
  };
  return out;
}

PartitionMorphism boundary() {
  FineMonoid zero, n = FineMonoid::free_monoid(1);
  PartitionMorphism out{MonoidHom(zero, n, {}), true, {}};
  out.basis.description = "all of N";
  out.basis.decompose = [n](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    if (!n.member(x)) return std::nullopt;
    return std::make_pair(IntVec{}, x);
  };
  return out;
}

PartitionMorphism identity(const FineMonoid& p) {
  PartitionMorphism out{MonoidHom::identity(p), false, {}};
  out.basis.description = "{0}";
  out.basis.decompose = [p](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    if (!p.member(x)) return std::nullopt;
    return std::make_pair(x, p.ambient().zero());
  };
  return out;
}

namespace {

// Coordinates of a direct sum of groups: raw blocks projected to canonical form.
struct SumLayout {
  std::vector<FgAbGroup> parts;
  std::vector<std::size_t> offsets;
  std::size_t raw = 0;
  Quotient q;

  explicit SumLayout(std::vector<FgAbGroup> ps) : parts(std::move(ps)) {
    std::vector<IntVec> rels;
    for (const auto& a : parts) offsets.push_back(raw), raw += a.dim();
    for (std::size_t k = 0; k < parts.size(); ++k)
      for (std::size_t i = 0; i < parts[k].torsion().size(); ++i) {
        IntVec v(raw);
        v[offsets[k] + parts[k].rank() + i] = parts[k].torsion()[i];
        rels.push_back(v);
      }
    q = presented_group(IntMatrix::from_columns(raw, rels));
  }
  IntVec embed(std::size_t k, const IntVec& x) const {
    IntVec v(raw);
    for (std::size_t i = 0; i < x.size(); ++i) v[offsets[k] + i] = x[i];
    return q.projection.apply(v);
  }
  IntVec part(std::size_t k, const IntVec& y) const {
    IntVec lift = q.section.apply(y);
    IntVec x(lift.begin() + static_cast<long>(offsets[k]),
             lift.begin() + static_cast<long>(offsets[k] + parts[k].dim()));
    return parts[k].reduce(x);
  }
};

}  // namespace

PartitionMorphism product(const std::vector<PartitionMorphism>& hs) {
  std::vector<FgAbGroup> qa, pa;
  for (const auto& h : hs) {
    qa.push_back(h.map.source().ambient());
    pa.push_back(h.map.target().ambient());
  }
  auto ql = std::make_shared<SumLayout>(qa);
  auto pl = std::make_shared<SumLayout>(pa);
  std::vector<IntVec> qgens, pgens, imgs;
  bool boundary = false;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    for (const auto& g : hs[k].map.source().generators()) qgens.push_back(ql->embed(k, g));
    for (const auto& y : hs[k].map.images()) imgs.push_back(pl->embed(k, y));
    for (const auto& g : hs[k].map.target().generators()) pgens.push_back(pl->embed(k, g));
    boundary = boundary || hs[k].with_boundary;
  }
  FineMonoid q(ql->q.group, qgens), p(pl->q.group, pgens);
  PartitionMorphism out{MonoidHom(q, p, imgs), boundary, {}};
  out.basis.description = "product of factor bases";
  out.basis.decompose = [hs, ql, pl](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    IntVec qv = ql->q.group.zero(), sv = pl->q.group.zero();
    for (std::size_t k = 0; k < hs.size(); ++k) {
      auto d = hs[k].basis.decompose(pl->part(k, x));
      if (!d) return std::nullopt;
      qv = ql->q.group.add(qv, ql->embed(k, d->first));
      sv = pl->q.group.add(sv, pl->embed(k, d->second));
    }
    return std::make_pair(qv, sv);
  };
  return out;
}

PartitionMorphism compose(const PartitionMorphism& h, const PartitionMorphism& g) {
  PartitionMorphism out{h.map.then(g.map), h.with_boundary || g.with_boundary, {}};
  out.basis.description = "g(S) + T";
  out.basis.decompose = [h, g](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    auto outer = g.basis.decompose(x);
    if (!outer) return std::nullopt;
    auto inner = h.basis.decompose(outer->first);
    if (!inner) return std::nullopt;
    const FgAbGroup& ra = g.map.target().ambient();
    return std::make_pair(inner->first, ra.add(g.map.apply(inner->second), outer->second));
  };
  return out;
}

PartitionMorphism pushout_of(const PartitionMorphism& h, const MonoidHom& f) {
  Pushout po = pushout(h.map, f);
  PartitionMorphism out{po.right, h.with_boundary, {}};
  out.basis.description = "image of the basis in the pushout";
  const std::size_t np = h.map.target().num_generators();
  out.basis.decompose = [h, f, po, np](const IntVec& x) -> std::optional<std::pair<IntVec, IntVec>> {
    auto w = po.monoid.member_witness(x);
    if (!w) return std::nullopt;
    const FineMonoid& p = h.map.target();
    const FineMonoid& q2 = f.target();
    IntVec pv = p.ambient().zero(), qv = q2.ambient().zero();
    for (std::size_t i = 0; i < np; ++i) pv = p.ambient().add(pv, p.ambient().scale((*w)[i], p.generators()[i]));
    for (std::size_t j = 0; j < q2.num_generators(); ++j)
      qv = q2.ambient().add(qv, q2.ambient().scale((*w)[np + j], q2.generators()[j]));
    auto d = h.basis.decompose(pv);
    if (!d) return std::nullopt;
    qv = q2.ambient().add(qv, f.apply(d->first));
    return std::make_pair(qv, po.left.apply(d->second));
  };
  return out;
}

}  // namespace partition

StructureMapReport check_free_basis(const MonoidHom& h, const FreeBasis& basis, std::size_t window,
                                    std::size_t max_triples) {
  StructureMapReport r;
  const FineMonoid& q = h.source();
  const FineMonoid& p = h.target();
  const FgAbGroup& qa = q.ambient();
  const FgAbGroup& pa = p.ambient();
  std::vector<IntVec> s_elems{pa.zero()};
  std::set<IntVec> seen{pa.zero()};
  for (const auto& x : p.elements_up_to(window)) {
    ++r.checked;
    auto d = basis.decompose(x);
    if (!d || !q.member(d->first) || !pa.equal(pa.add(h.apply(d->first), d->second), x) ||
        !basis.contains(q, d->second)) {
      r.decomposition_ok = false;
      continue;
    }
    if (seen.insert(d->second).second) s_elems.push_back(d->second);
  }
  if (!basis.contains(q, pa.zero())) r.beta_unit = r.alpha_unit = false;
  r.basis_elements = s_elems.size();
  if (s_elems.size() > max_triples) s_elems.resize(max_triples);
  for (const auto& qe : q.elements_up_to(window / 2))
    for (const auto& s : s_elems) {
      auto d = basis.decompose(pa.add(h.apply(qe), s));
      if (!d || !qa.equal(d->first, qe) || !pa.equal(d->second, s)) r.injective_ok = false;
    }
  auto alpha_beta = [&](const IntVec& a, const IntVec& b) {
    auto d = basis.decompose(pa.add(a, b));
    if (!d) fail(ErrorCode::Validation, "structure map undefined");
    return std::make_pair(d->second, d->first);
  };
  for (const auto& s : s_elems) {
    auto [a0, b0] = alpha_beta(s, pa.zero());
    if (!pa.equal(a0, s)) r.alpha_unit = false;
    if (!qa.is_zero(b0)) r.beta_unit = false;
    for (const auto& t : s_elems) {
      auto st = alpha_beta(s, t), ts = alpha_beta(t, s);
      if (!pa.equal(st.first, ts.first)) r.alpha_commutative = false;
      if (!qa.equal(st.second, ts.second)) r.beta_commutative = false;
      for (const auto& u : s_elems) {
        auto left = alpha_beta(st.first, u);
        auto tu = alpha_beta(t, u);
        auto right = alpha_beta(s, tu.first);
        if (!pa.equal(left.first, right.first)) r.alpha_associative = false;
        // β(s,t) + β(α(s,t),u) = β(s,α(t,u)) + β(t,u)
        if (!qa.equal(qa.add(st.second, left.second), qa.add(right.second, tu.second))) r.beta_cocycle = false;
      }
    }
  }
  return r;
}

}  // namespace logflat
