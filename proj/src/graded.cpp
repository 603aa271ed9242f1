#include "logflat/graded.hpp"

#include <algorithm>
#include <set>

#include "logflat/error.hpp"

namespace logflat {

namespace {

std::string ideal_string(const std::vector<Poly>& gens) {
  std::string s = "(";
  for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? ", " : "") + gens[i].to_string();
  return s + ")";
}

Certificate leaf(std::string criterion, bool holds, std::string detail = {}) {
  return Certificate{std::move(criterion), holds, std::move(detail), {}};
}

std::string tor_detail(const TorResult& t) {
  if (t.is_zero) return "Tor1 = 0";
  return t.dim ? "Tor1 has dimension " + std::to_string(*t.dim) : "Tor1 is nonzero of infinite dimension";
}

bool injective_from_free(const FgAbGroup& g, const std::vector<IntVec>& images) {
  return kernel(GroupHom::from_images(FgAbGroup::free(images.size()), g, images)).group.is_trivial();
}

// Each variable is congruent to a constant and 1 ≠ 0.
bool is_field_presentation(const RingPresentation& r) {
  if (r.is_zero_ring()) return false;
  for (std::size_t i = 0; i < r.ambient().nvars(); ++i)
    if (!r.normal_form(r.var(i)).is_constant()) return false;
  return true;
}

bool is_free_line(const RingPresentation& r) {
  return r.ambient().nvars() == 1 && r.reduced_relations().empty();
}

void require_same_ambient(const RingPresentation& a, const RingPresentation& b, const char* what) {
  if (a.ambient() != b.ambient()) fail(ErrorCode::InvalidArgument, std::string(what) + ": module over another ring");
}

}  // namespace

GradedRing::GradedRing(FgAbGroup group, RingPresentation ring, std::vector<IntVec> degrees)
    : group_(std::move(group)), ring_(std::move(ring)), degrees_(std::move(degrees)) {
  if (degrees_.size() != ring_.ambient().nvars())
    fail(ErrorCode::InvalidArgument, "one degree per variable is required");
  for (auto& d : degrees_) {
    group_.check_element(d);
    d = group_.reduce(d);
  }
  for (const auto& r : ring_.relations())
    if (!is_homogeneous(r)) fail(ErrorCode::NotHomogeneous, "relation " + r.to_string() + " is not homogeneous");
}

GradedRing GradedRing::of(const ToricAlgebra& kp) {
  return GradedRing(kp.monoid.ambient(), kp.ring, kp.degrees);
}

IntVec GradedRing::degree_of(const Exps& e) const {
  IntVec d = group_.zero();
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) d = group_.add(d, group_.scale(e[i], degrees_[i]));
  return group_.reduce(d);
}

std::map<IntVec, Poly> GradedRing::homogeneous_components(const Poly& f) const {
  std::map<IntVec, std::vector<Term>> parts;
  for (const auto& t : f.terms()) parts[degree_of(t.e)].push_back(t);
  std::map<IntVec, Poly> out;
  for (auto& [d, terms] : parts) out.emplace(d, Poly::from_terms(ring_.ambient(), std::move(terms)));
  return out;
}

bool GradedRing::is_homogeneous(const Poly& f) const { return homogeneous_components(f).size() <= 1; }

bool GradedRing::is_homogeneous_ideal(const std::vector<Poly>& gens) const {
  RingPresentation q = ring_.quotient(gens);
  for (const auto& g : gens)
    for (const auto& [d, c] : homogeneous_components(g))
      if (!q.is_zero(c)) return false;
  return true;
}

GradedRing GradedRing::regrade(const GroupHom& gamma) const {
  if (!(gamma.source() == group_)) fail(ErrorCode::InvalidArgument, "regrading map has the wrong source");
  if (!kernel(gamma).group.is_trivial()) fail(ErrorCode::InvalidArgument, "regrading map is not injective");
  std::vector<IntVec> d;
  for (const auto& x : degrees_) d.push_back(gamma.apply(x));
  return GradedRing(gamma.target(), ring_, std::move(d));
}

GradedRing GradedRing::quotient(const std::vector<Poly>& extra) const {
  return GradedRing(group_, ring_.quotient(extra), degrees_);
}

GradedModule::GradedModule(GradedRing ring, std::vector<IntVec> shifts, std::vector<PolyVec> relations)
    : ring_(std::move(ring)), shifts_(std::move(shifts)) {
  const FgAbGroup& g = ring_.group();
  for (auto& h : shifts_) {
    g.check_element(h);
    h = g.reduce(h);
  }
  for (const auto& col : relations) {
    if (col.size() != shifts_.size()) fail(ErrorCode::InvalidArgument, "relation has the wrong length");
    std::optional<IntVec> deg;
    for (std::size_t i = 0; i < col.size(); ++i)
      for (const auto& t : col[i].terms()) {
        IntVec d = g.add(ring_.degree_of(t.e), shifts_[i]);
        if (deg && !g.equal(*deg, d))
          fail(ErrorCode::NotHomogeneous, "relation " + vec_to_string(col) + " is not homogeneous");
        deg = d;
      }
  }
  module_ = ModulePresentation(ring_.ring(), shifts_.size(), std::move(relations));
}

GradedModule GradedModule::shift(const IntVec& h) const {
  std::vector<IntVec> s;
  for (const auto& x : shifts_) s.push_back(ring_.group().sub(x, h));
  return GradedModule(ring_, std::move(s), module_.relations());
}

std::vector<Poly> to_ring_ideal(const ToricAlgebra& kp, const MonoidIdeal& i) { return kp.ideal(i); }

MonoidIdeal to_monoid_ideal(const ToricAlgebra& kp, const std::vector<Poly>& j) {
  GradedRing gr = GradedRing::of(kp);
  if (!gr.is_homogeneous_ideal(j)) fail(ErrorCode::NotHomogeneous, ideal_string(j) + " is not homogeneous");
  std::vector<IntVec> gens;
  for (const auto& f : j)
    for (const auto& [d, c] : gr.homogeneous_components(f)) {
      Poly nf = kp.ring.normal_form(c);
      if (nf.is_zero()) continue;
      gens.push_back(kp.degree_of(nf.leading().e));
    }
  MonoidIdeal out(kp.monoid, gens);
  if (!kp.ring.quotient(j).same_ideal(kp.ring.quotient(kp.ideal(out))))
    fail(ErrorCode::Validation, "monomial ideal does not reproduce " + ideal_string(j));
  return out;
}

bool is_semiprime(const ToricAlgebra& kp, const std::vector<Poly>& j) {
  if (!GradedRing::of(kp).is_homogeneous_ideal(j))
    fail(ErrorCode::UnsupportedIdealClass, ideal_string(j) + " is not of the form k[I]");
  return to_monoid_ideal(kp, j).is_prime();
}

PrimeVerdict is_prime_ideal(const ToricAlgebra& kp, const std::vector<Poly>& j) {
  if (!GradedRing::of(kp).is_homogeneous_ideal(j))
    fail(ErrorCode::UnsupportedIdealClass, ideal_string(j) + " is not of the form k[I]");
  MonoidIdeal i = to_monoid_ideal(kp, j);
  PrimeVerdict v;
  auto face = i.complement_face();
  if (!i.is_prime() || !face) return v;
  const FineMonoid& p = kp.monoid;
  std::vector<IntVec> fg;
  for (std::size_t k = 0; k < p.num_generators(); ++k)
    if (face->mask[k]) fg.push_back(p.generators()[k]);
  Subgroup fgp = subgroup_generated(p.ambient(), fg);
  if (fgp.group.torsion().empty()) {
    v.prime = true;
    return v;
  }
  // τ = a − b of order n gives (z^a − z^b)·Σ z^{(n−1−j)a + jb} = z^{na} − z^{nb} = 0.
  IntVec tau = fgp.inclusion.apply(fgp.group.basis(fgp.group.rank()));
  auto c = solve_combination(p.ambient(), fg, tau);
  if (!c) fail(ErrorCode::Validation, "torsion element outside the face group");
  IntVec a = p.ambient().zero(), b = p.ambient().zero();
  for (std::size_t k = 0; k < fg.size(); ++k) {
    if ((*c)[k] > 0) a = p.ambient().add(a, p.ambient().scale((*c)[k], fg[k]));
    if ((*c)[k] < 0) b = p.ambient().add(b, p.ambient().scale(-(*c)[k], fg[k]));
  }
  const long n = p.ambient().element_order(tau)->get_si();
  RingPresentation q = kp.ring.quotient(j);
  Poly f1 = kp.monomial(a) - kp.monomial(b);
  Poly f2 = kp.ring.ambient().zero();
  for (long s = 0; s < n; ++s)
    f2 += kp.monomial(p.ambient().add(p.ambient().scale(n - 1 - s, a), p.ambient().scale(s, b)));
  if (q.is_zero(f1) || q.is_zero(f2) || !q.is_zero(f1 * f2))
    fail(ErrorCode::Validation, "zero-divisor witness failed to verify");
  v.zero_divisors = std::make_pair(f1, f2);
  return v;
}

LineFlatness flat_over_line(const ModulePresentation& m, std::size_t variable) {
  const PolyRing& amb = m.ring().ambient();
  if (variable >= amb.nvars()) fail(ErrorCode::InvalidArgument, "base variable out of range");
  std::vector<std::string> names;
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < amb.nvars(); ++i)
    if (i != variable) {
      names.push_back(amb.vars()[i]);
      perm.push_back(i);
    }
  names.push_back(amb.vars()[variable]);
  perm.push_back(variable);
  PolyRing moved(amb.field(), names);
  std::vector<Poly> to(amb.nvars()), back(amb.nvars());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    to[perm[k]] = moved.var(k);
    back[k] = amb.var(perm[k]);
  }
  std::vector<PolyVec> rels;
  for (const auto& col : m.full_relations()) {
    PolyVec v;
    for (const auto& f : col) v.push_back(f.map(moved, to));
    rels.push_back(std::move(v));
  }
  // Over k(t) the same basis is a Gröbner basis; denominators come only from leading coefficients.
  SubmoduleGB gb(moved, m.rank(), rels, 0, 1);
  Poly h = moved.one();
  for (const auto& c : gb.leading_tail_coefficients()) h *= c.monic();
  LineFlatness out;
  out.obstruction = h.map(amb, back);
  out.flat = out.obstruction.is_constant() || regular_element_test(out.obstruction, m);
  return out;
}

GradedVerdict graded_flat_monoid(const ToricAlgebra& kp, const GradedRing& grading, const ModulePresentation& m) {
  require_same_ambient(m.ring(), kp.ring, "graded_flat_monoid");
  const FineMonoid& p = kp.monoid;
  const std::size_t n = p.num_generators();
  GroupHom to_p = GroupHom::from_images(FgAbGroup::free(n), p.ambient(), p.generators());
  GroupHom to_g = GroupHom::from_images(FgAbGroup::free(n), grading.group(), grading.degrees());
  auto contained = [&](const GroupHom& a, const GroupHom& b) {
    Subgroup k = kernel(a);
    for (std::size_t i = 0; i < k.group.dim(); ++i)
      if (!b.target().is_zero(b.apply(k.inclusion.apply(k.group.basis(i))))) return false;
    return true;
  };
  if (!contained(to_p, to_g) || !contained(to_g, to_p))
    fail(ErrorCode::UnsupportedShape, "grading of k[P] is not an injective image of P^gp");
  GradedVerdict v{true, {"Tor1(M, k[P]/k[I]) = 0 for every prime I of P", true, p.to_string(), {}}};
  for (const auto& pr : prime_ideals(p)) {
    std::vector<Poly> j = kp.ideal(pr.ideal);
    TorResult t = tor1(m, j);
    v.certificate.children.push_back(leaf("prime " + ideal_string(j), t.is_zero, tor_detail(t)));
    v.flat = v.flat && t.is_zero;
  }
  v.certificate.holds = v.flat;
  return v;
}

GradedVerdict graded_flat_monoid(const ToricAlgebra& kp, const ModulePresentation& m) {
  return graded_flat_monoid(kp, GradedRing::of(kp), m);
}

GradedVerdict graded_flat_chart(const ChartShape& shape, const ModulePresentation& m) {
  require_same_ambient(m.ring(), shape.ring.ring(), "graded_flat_chart");
  GradedVerdict v{true, {"graded flat over B", true, shape.ring.ring().to_string(), {}}};
  if (shape.base_variable) {
    LineFlatness lf = flat_over_line(m, *shape.base_variable);
    const std::string t = m.ring().ambient().vars()[*shape.base_variable];
    v.certificate.children.push_back(
        leaf("flat over k[" + t + "]", lf.flat, "torsion-freeness, test element " + lf.obstruction.to_string()));
    v.flat = lf.flat;
  } else {
    v.certificate.children.push_back(leaf("flat over k", true, "A is a field"));
  }
  for (const auto& s : shape.spawning) {
    if (!s.quotient) fail(ErrorCode::UnsupportedShape, "spawning element " + s.label + " has no quotient shape");
    TorResult t = tor1(m, {s.element});
    v.certificate.children.push_back(leaf("Tor1(M, B/[" + s.label + "]) = 0", t.is_zero, tor_detail(t)));
    GradedVerdict sub = graded_flat_chart(*s.quotient, m.tensor_quotient(s.quotient->ring.ring()));
    sub.certificate.criterion = "M/[" + s.label + "]M " + sub.certificate.criterion + "/[" + s.label + "]";
    v.certificate.children.push_back(std::move(sub.certificate));
    v.flat = v.flat && t.is_zero && sub.flat;
  }
  v.certificate.holds = v.flat;
  return v;
}

ChartShape nodal_shape(const RingPresentation& b) {
  const PolyRing& amb = b.ambient();
  if (amb.nvars() != 2 || !b.same_ideal(RingPresentation(amb, {amb.var(0) * amb.var(1)})))
    fail(ErrorCode::UnsupportedShape, "expected k[x,y]/(xy)");
  const Poly x = amb.var(0), y = amb.var(1);
  const std::vector<IntVec> deg{int_vec({1}), int_vec({-1})};
  auto graded = [&](const RingPresentation& r) { return GradedRing(FgAbGroup::free(1), r, deg); };
  auto branch = [&](const Poly& kill, const Poly& keep, const std::string& keep_name) {
    RingPresentation r = b.quotient({kill});
    auto point = std::make_shared<ChartShape>(ChartShape{graded(r.quotient({keep})), std::nullopt, {}});
    return std::make_shared<ChartShape>(ChartShape{graded(r), std::nullopt, {{keep_name, keep, point}}});
  };
  return ChartShape{graded(b), std::nullopt,
                    {{amb.vars()[0], x, branch(x, y, amb.vars()[1])}, {amb.vars()[1], y, branch(y, x, amb.vars()[0])}}};
}

ChartShape regrade(const ChartShape& shape, const GroupHom& gamma) {
  ChartShape out{shape.ring.regrade(gamma), shape.base_variable, {}};
  for (const auto& s : shape.spawning)
    out.spawning.push_back({s.label, s.element, std::make_shared<ChartShape>(regrade(*s.quotient, gamma))});
  return out;
}

Poly GroupAlgebra::unit_monomial(const IntVec& g) const {
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < rank; ++i) gens.push_back(ring.degrees()[base.ambient().nvars() + 2 * i]);
  auto c = solve_combination(ring.group(), gens, g);
  if (!c) fail(ErrorCode::InvalidArgument, "degree " + to_string(g) + " is not in the support");
  const std::size_t off = base.ambient().nvars();
  Exps e(ring.ring().ambient().nvars());
  for (std::size_t i = 0; i < rank; ++i) {
    const long k = (*c)[i].get_si();
    e[off + 2 * i + (k < 0 ? 1 : 0)] = static_cast<int>(k < 0 ? -k : k);
  }
  return ring.ring().ambient().monomial(e);
}

GroupAlgebra group_algebra(const RingPresentation& base, std::size_t rank, std::optional<std::size_t> base_variable) {
  const PolyRing& a = base.ambient();
  std::vector<std::string> names = a.vars();
  auto fresh = [&](std::string n) {
    while (std::find(names.begin(), names.end(), n) != names.end()) n += "_";
    return n;
  };
  for (std::size_t i = 0; i < rank; ++i) {
    names.push_back(fresh("u" + std::to_string(i + 1)));
    names.push_back(fresh("v" + std::to_string(i + 1)));
  }
  PolyRing big(a.field(), names);
  std::vector<Poly> images;
  for (std::size_t i = 0; i < a.nvars(); ++i) images.push_back(big.var(i));
  std::vector<Poly> rels;
  for (const auto& r : base.relations()) rels.push_back(r.map(big, images));
  FgAbGroup g = FgAbGroup::free(rank);
  std::vector<IntVec> deg(a.nvars(), g.zero());
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t u = a.nvars() + 2 * i;
    rels.push_back(big.var(u) * big.var(u + 1) - big.one());
    deg.push_back(g.basis(i));
    deg.push_back(g.neg(g.basis(i)));
  }
  if (base_variable && (!is_free_line(base) || *base_variable != 0))
    fail(ErrorCode::UnsupportedShape, "base with a variable must be k[t]");
  if (!base_variable && !is_field_presentation(base)) fail(ErrorCode::UnsupportedShape, "base must be k or k[t]");
  return GroupAlgebra{base, GradedRing(g, RingPresentation(big, rels), deg), rank, base_variable};
}

GroupAlgebra regrade(const GroupAlgebra& ga, const GroupHom& gamma) {
  GroupAlgebra out = ga;
  out.ring = ga.ring.regrade(gamma);
  return out;
}

ModulePresentation degree_zero_part(const GroupAlgebra& ga, const GradedModule& m) {
  require_same_ambient(m.module().ring(), ga.ring.ring(), "degree_zero_part");
  const PolyRing& a = ga.base.ambient();
  std::vector<Poly> ev;
  for (std::size_t i = 0; i < a.nvars(); ++i) ev.push_back(a.var(i));
  for (std::size_t i = 0; i < 2 * ga.rank; ++i) ev.push_back(a.one());
  // A homogeneous entry of degree g is a·u^g, and u ↦ 1 reads off a.
  std::vector<PolyVec> rels;
  for (const auto& col : m.module().relations()) {
    PolyVec v;
    for (const auto& f : col) v.push_back(f.map(a, ev));
    rels.push_back(std::move(v));
  }
  return ModulePresentation(ga.base, m.module().rank(), std::move(rels));
}

GradedModule extend_scalars_AG(const GroupAlgebra& ga, const ModulePresentation& n) {
  require_same_ambient(n.ring(), ga.base, "extend_scalars_AG");
  const PolyRing& big = ga.ring.ring().ambient();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < ga.base.ambient().nvars(); ++i) images.push_back(big.var(i));
  std::vector<PolyVec> rels;
  for (const auto& col : n.relations()) {
    PolyVec v;
    for (const auto& f : col) v.push_back(f.map(big, images));
    rels.push_back(std::move(v));
  }
  return GradedModule(ga.ring, std::vector<IntVec>(n.rank(), ga.ring.group().zero()), std::move(rels));
}

bool verify_group_algebra_roundtrip(const GroupAlgebra& ga, const GradedModule& m) {
  GradedModule e = extend_scalars_AG(ga, degree_zero_part(ga, m));
  const PolyRing& big = ga.ring.ring().ambient();
  ModuleMap f{e.module(), m.module(), {}};
  for (std::size_t i = 0; i < m.shifts().size(); ++i)
    f.images.push_back(
        vec_scale(ga.unit_monomial(ga.ring.group().neg(m.shifts()[i])), unit_vec(big, m.shifts().size(), i)));
  return f.well_defined() && is_injective(f) && is_surjective(f);
}

GradedVerdict graded_flat_group_algebra(const GroupAlgebra& ga, const GradedModule& m) {
  std::vector<IntVec> unit_degrees;
  for (std::size_t i = 0; i < ga.rank; ++i) unit_degrees.push_back(ga.ring.degrees()[ga.base.ambient().nvars() + 2 * i]);
  if (!injective_from_free(ga.ring.group(), unit_degrees))
    fail(ErrorCode::UnsupportedShape, "the group of A[G] does not inject into the grading group");
  GradedVerdict v{true, {"graded flat over A[G] iff M0 flat over A", true, ga.ring.ring().to_string(), {}}};
  v.certificate.children.push_back(leaf("grading group injective", true, ga.ring.group().to_string()));
  ModulePresentation m0 = degree_zero_part(ga, m);
  const bool round = verify_group_algebra_roundtrip(ga, m);
  v.certificate.children.push_back(leaf("M = M0 (x) A[G]", round, m0.to_string()));
  if (!round) fail(ErrorCode::Validation, "group-algebra roundtrip failed");
  if (ga.base_variable) {
    LineFlatness lf = flat_over_line(m0, *ga.base_variable);
    v.certificate.children.push_back(leaf("M0 flat over k[t]", lf.flat, "test element " + lf.obstruction.to_string()));
    v.flat = lf.flat;
  } else {
    v.certificate.children.push_back(leaf("M0 flat over k", true, "A is a field"));
  }
  v.certificate.holds = v.flat;
  return v;
}

GradedVerdict graded_flat_trivial(const RingPresentation& b, const ModulePresentation& m) {
  require_same_ambient(m.ring(), b, "graded_flat_trivial");
  if (is_field_presentation(b)) return {true, {"flat over a field", true, b.to_string(), {}}};
  if (is_free_line(b)) {
    LineFlatness lf = flat_over_line(m, 0);
    return {lf.flat, {"flat over k[t]", lf.flat, "test element " + lf.obstruction.to_string(), {}}};
  }
  fail(ErrorCode::UnsupportedShape, "plain flatness is decided only over a field or k[t]");
}

std::string shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::MonoidAlgebra: return "monoid_algebra";
    case ShapeKind::Chart: return "chart";
    case ShapeKind::GroupAlgebra: return "group_algebra";
    case ShapeKind::TrivialGrading: return "trivial_grading";
  }
  return "?";
}

GradedVerdict graded_flat(const GradedStructure& s, const ModulePresentation& m,
                          const std::optional<GradedModule>& graded) {
  switch (s.kind) {
    case ShapeKind::MonoidAlgebra:
      if (!s.monoid_algebra) break;
      return s.grading ? graded_flat_monoid(*s.monoid_algebra, *s.grading, m) : graded_flat_monoid(*s.monoid_algebra, m);
    case ShapeKind::Chart:
      if (!s.chart) break;
      return graded_flat_chart(*s.chart, m);
    case ShapeKind::GroupAlgebra:
      if (!s.group_algebra) break;
      if (!graded) fail(ErrorCode::NotHomogeneous, "group-algebra shape needs a graded module");
      return graded_flat_group_algebra(*s.group_algebra, *graded);
    case ShapeKind::TrivialGrading:
      return graded_flat_trivial(s.trivial, m);
  }
  fail(ErrorCode::UnsupportedShape, "shape " + shape_name(s.kind) + " is missing its data");
}

GradedVerdict fallback_ideal_test(const GradedRing& b, const ModulePresentation& m,
                                  const std::vector<std::vector<Poly>>& ideals) {
  require_same_ambient(m.ring(), b.ring(), "fallback_ideal_test");
  GradedVerdict v{true, {"Tor1(M, B/I) = 0 for listed homogeneous I", true, std::to_string(ideals.size()) + " ideals", {}}};
  for (const auto& j : ideals) {
    if (!b.is_homogeneous_ideal(j)) fail(ErrorCode::NotHomogeneous, ideal_string(j) + " is not homogeneous");
    TorResult t = tor1(m, j);
    v.flat = v.flat && t.is_zero;
    if (!t.is_zero) v.certificate.children.push_back(leaf("ideal " + ideal_string(j), false, tor_detail(t)));
  }
  v.certificate.holds = v.flat;
  return v;
}

bool NodalPanel::all_agree() const {
  for (bool e : entries)
    if (e != entries[0]) return false;
  for (bool e : localized)
    if (e != entries[0]) return false;
  return true;
}

NodalPanel nodal_criteria_panel(const ModulePresentation& m) {
  const RingPresentation& b = m.ring();
  ChartShape shape = nodal_shape(b);
  const PolyRing& amb = b.ambient();
  const Poly x = amb.var(0), y = amb.var(1);
  const std::vector<Poly> max{x, y};
  const std::size_t r = m.rank();

  auto kill = [&](const Poly& f) {
    std::vector<PolyVec> extra;
    for (std::size_t i = 0; i < r; ++i) extra.push_back(vec_scale(f, unit_vec(amb, r, i)));
    return m.quotient(extra);
  };
  auto local = [&](const ModulePresentation& n) { return localization_vanishes_at_maximal(n, max); };

  TorResult tor_m = tor1(m, max), tor_x = tor1(m, {x}), tor_y = tor1(m, {y});
  ModulePresentation mx = m.tensor_quotient(b.quotient({x})), my = m.tensor_quotient(b.quotient({y}));

  ModulePresentation src = kill(y).direct_sum(kill(x));
  ModuleMap sum{src, m, {}};
  for (std::size_t i = 0; i < r; ++i) sum.images.push_back(vec_scale(x, unit_vec(amb, r, i)));
  for (std::size_t i = 0; i < r; ++i) sum.images.push_back(vec_scale(y, unit_vec(amb, r, i)));
  ModulePresentation k3 = kernel(sum).module;

  ModulePresentation ky = multiplication_kernel(y, mx).module, kx = multiplication_kernel(x, my).module;
  // Graded flatness over k[y] = B/xB by the prime-ideal test for ℕ.
  TorResult gy = tor1(mx, {y}), gx = tor1(my, {x});

  NodalPanel p;
  p.labels = {"graded flat",
              "Tor1(M, B/m) = 0",
              "M/yM + M/xM -> M injective",
              "Tor1(M, B/x) = 0, y regular on M/xM, and swapped",
              "Tor1(M, B/x) = 0, M/xM graded flat over k[y], and swapped",
              "Tor1(M, B/x) = 0 and y regular on M/xM",
              "Tor1(M, B/x) = 0 and M/xM graded flat over k[y]",
              "Tor1(M, B/y) = 0 and x regular on M/yM",
              "Tor1(M, B/y) = 0 and M/yM graded flat over k[x]",
              "conditions 2-9 after localizing at m"};
  const bool ky0 = ky.is_zero_module(), kx0 = kx.is_zero_module();
  p.entries[0] = graded_flat_chart(shape, m).flat;
  p.entries[1] = tor_m.is_zero;
  p.entries[2] = k3.is_zero_module();
  p.entries[3] = tor_x.is_zero && ky0 && tor_y.is_zero && kx0;
  p.entries[4] = tor_x.is_zero && gy.is_zero && tor_y.is_zero && gx.is_zero;
  p.entries[5] = tor_x.is_zero && ky0;
  p.entries[6] = tor_x.is_zero && gy.is_zero;
  p.entries[7] = tor_y.is_zero && kx0;
  p.entries[8] = tor_y.is_zero && gx.is_zero;

  const bool lx = local(tor_x.module), ly = local(tor_y.module), lky = local(ky), lkx = local(kx);
  const bool lgy = local(gy.module), lgx = local(gx.module);
  p.localized = {local(tor_m.module), local(k3), lx && lky && ly && lkx, lx && lgy && ly && lgx,
                 lx && lky,           lx && lgy, ly && lkx,            ly && lgx};
  p.entries[9] = std::all_of(p.localized.begin(), p.localized.end(), [](bool e) { return e; });
  return p;
}

std::vector<FiltrationStep> monomial_filtration(const FineMonoid& p, const MonoidIdeal& j) {
  const std::size_t n = p.num_generators();
  if (!(p == FineMonoid::free_monoid(n))) fail(ErrorCode::UnsupportedShape, "filtration engine needs P = N^n");
  using V = std::vector<long>;
  auto minimize = [](std::vector<V> gens) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::vector<V> out;
    for (const auto& g : gens) {
      bool redundant = false;
      for (const auto& h : gens)
        if (h != g && std::equal(h.begin(), h.end(), g.begin(), [](long a, long b) { return a <= b; }))
          redundant = true;
      if (!redundant) out.push_back(g);
    }
    return out;
  };
  auto to_int = [](const V& v) {
    IntVec out;
    for (long x : v) out.push_back(x);
    return out;
  };
  std::vector<V> ideal;
  for (const auto& g : j.generators()) {
    V v;
    for (const auto& x : g) v.push_back(x.get_si());
    ideal.push_back(v);
  }
  ideal = minimize(ideal);
  std::vector<FiltrationStep> steps;
  const V zero(n, 0);
  while (std::find(ideal.begin(), ideal.end(), zero) == ideal.end()) {
    V at = zero;
    std::vector<V> colon;
    for (;;) {
      colon.clear();
      for (const auto& g : ideal) {
        V c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = std::max(0L, g[i] - at[i]);
        colon.push_back(c);
      }
      colon = minimize(colon);
      // A monomial ideal of ℕ^n is prime iff it is generated by variables.
      auto composite = std::find_if(colon.begin(), colon.end(), [](const V& g) {
        long s = 0;
        for (long x : g) s += x;
        return s >= 2;
      });
      if (composite == colon.end()) break;
      for (std::size_t i = 0; i < n; ++i)
        if ((*composite)[i] > 0) {
          ++at[i];
          break;
        }
    }
    std::vector<IntVec> prime;
    for (const auto& c : colon) prime.push_back(to_int(c));
    steps.push_back({to_int(at), MonoidIdeal(p, prime)});
    ideal.push_back(at);
    ideal = minimize(ideal);
  }
  return steps;
}

GradedVerdict shadow_flat(const PModule& m, Field field) {
  ModuleAlgebra ma = module_algebra(m, field);
  GradedVerdict v{true, {"Tor1(k[M], k[P]/k[I]) = 0 for every prime I", true, m.to_string(), {}}};
  for (const auto& pr : prime_ideals(m.owner())) {
    std::vector<Poly> j;
    for (const auto& g : pr.ideal.generators()) j.push_back(ma.scalars.monomial(g));
    TorResult t = tor1(ma.module, j);
    v.certificate.children.push_back(leaf("prime " + ideal_string(j), t.is_zero, tor_detail(t)));
    v.flat = v.flat && t.is_zero;
  }
  v.certificate.holds = v.flat;
  return v;
}

}  // namespace logflat
