#include "logflat/chart.hpp"

#include <functional>
#include <map>
#include <set>

#include "logflat/error.hpp"
#include "logflat/linalg.hpp"

namespace logflat {

namespace {

[[noreturn]] void bad_chart(const std::string& what) { fail(ErrorCode::ChartInvalid, what); }

std::string fresh(std::string name, std::set<std::string>& used) {
  while (used.count(name)) name += "_";
  used.insert(name);
  return name;
}

// Sends the variables of `from` to consecutive variables of `to` starting at `offset`.
Poly embed(const Poly& f, const PolyRing& to, std::size_t offset) {
  std::vector<Poly> images;
  for (std::size_t i = 0; i < f.ring().nvars(); ++i) images.push_back(to.var(offset + i));
  return f.map(to, images);
}

bool is_field_presentation(const RingPresentation& r) {
  if (r.is_zero_ring()) return false;
  for (std::size_t i = 0; i < r.ambient().nvars(); ++i)
    if (!r.normal_form(r.var(i)).is_constant()) return false;
  return true;
}

// Laurent pairs v, v⁻¹ for the free coordinates and roots of unity for the torsion coordinates of g.
struct LaurentBlock {
  FgAbGroup group;
  std::size_t offset = 0;

  std::size_t nvars() const { return 2 * group.rank() + group.torsion().size(); }
  std::vector<std::string> names(const std::string& stem, const std::string& root, std::set<std::string>& used) const {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < group.rank(); ++j) {
      out.push_back(fresh(stem + std::to_string(j + 1), used));
      out.push_back(fresh(stem + std::to_string(j + 1) + "i", used));
    }
    for (std::size_t j = 0; j < group.torsion().size(); ++j) out.push_back(fresh(root + std::to_string(j + 1), used));
    return out;
  }
  std::vector<Poly> relations(const PolyRing& amb) const {
    std::vector<Poly> out;
    for (std::size_t j = 0; j < group.rank(); ++j)
      out.push_back(amb.var(offset + 2 * j) * amb.var(offset + 2 * j + 1) - amb.one());
    for (std::size_t j = 0; j < group.torsion().size(); ++j)
      out.push_back(amb.var(offset + 2 * group.rank() + j).pow(static_cast<unsigned>(group.torsion()[j].get_ui())) -
                    amb.one());
    return out;
  }
  Poly monomial(const PolyRing& amb, const IntVec& coords) const {
    IntVec c = group.reduce(coords);
    Exps e(amb.nvars(), 0);
    for (std::size_t j = 0; j < group.rank(); ++j) {
      long v = c[j].get_si();
      e[offset + 2 * j + (v < 0 ? 1 : 0)] = static_cast<int>(v < 0 ? -v : v);
    }
    for (std::size_t j = 0; j < group.torsion().size(); ++j)
      e[offset + 2 * group.rank() + j] = static_cast<int>(c[group.rank() + j].get_si());
    return amb.monomial(e);
  }
};

IntVec gp_coords(const FineMonoid& m, const IntVec& x) {
  auto c = m.groupification().inclusion.preimage(x);
  if (!c) bad_chart("element " + to_string(x) + " is outside the groupification");
  return *c;
}

std::vector<std::string> p_names(const ChartData& chart) {
  if (!chart.p_names.empty()) {
    if (chart.p_names.size() != chart.p().num_generators()) bad_chart("one name per generator of P is required");
    return chart.p_names;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < chart.p().num_generators(); ++i) out.push_back("z" + std::to_string(i + 1));
  return out;
}

Poly monomial_image(const FineMonoid& m, const std::vector<Poly>& values, const RingPresentation& ring, const IntVec& x) {
  auto w = m.member_witness(x);
  if (!w) bad_chart("element " + to_string(x) + " is not in the monoid");
  Poly out = ring.ambient().one();
  for (std::size_t i = 0; i < w->size(); ++i)
    if ((*w)[i] != 0) out = ring.normal_form(out * values[i].pow(static_cast<unsigned>((*w)[i].get_ui())));
  return out;
}

// Total-degree-bounded monomials of a polynomial ring.
std::vector<Exps> monomials(std::size_t nvars, int bound) {
  std::vector<Exps> out;
  Exps e(nvars, 0);
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int left) {
    if (i == nvars) {
      out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[i] = k;
      go(i + 1, left - k);
    }
    e[i] = 0;
  };
  go(0, bound);
  return out;
}

}  // namespace

void validate_chart(const ChartData& chart) {
  const FineMonoid& q = chart.q();
  const FineMonoid& p = chart.p();
  if (chart.t.size() != q.num_generators()) bad_chart("t needs one value per generator of Q");
  if (chart.b.size() != p.num_generators()) bad_chart("b needs one value per generator of P");
  for (const auto& x : chart.t)
    if (x.ring() != chart.a.ambient()) bad_chart("t takes a value outside A");
  for (const auto& x : chart.b)
    if (x.ring() != chart.c.ambient()) bad_chart("b takes a value outside C");
  if (chart.f.source().ambient() != chart.a.ambient() || !chart.f.source().same_ideal(chart.a))
    bad_chart("f does not start at A");
  if (chart.f.target().ambient() != chart.c.ambient() || !chart.f.target().same_ideal(chart.c))
    bad_chart("f does not end at C");
  if (!chart.f.well_defined()) bad_chart("f is not a ring map");
  auto respects = [](const FineMonoid& m, const std::vector<Poly>& values, const RingPresentation& ring) {
    ToricAlgebra km = toric_ideal(m, {}, true, ring.field());
    for (const auto& g : km.ring.relations())
      if (!ring.is_zero(g.map(ring.ambient(), values))) return false;
    return true;
  };
  if (!respects(q, chart.t, chart.a)) bad_chart("t does not respect the relations of Q");
  if (!respects(p, chart.b, chart.c)) bad_chart("b does not respect the relations of P");
  for (std::size_t i = 0; i < q.num_generators(); ++i)
    if (!chart.c.equal(chart.f.apply(chart.t[i]), chart_b(chart, chart.h.images()[i])))
      bad_chart("f(t(q)) ≠ b(h(q)) at generator " + std::to_string(i) + " of Q");
}

Poly chart_t(const ChartData& chart, const IntVec& q) { return monomial_image(chart.q(), chart.t, chart.a, q); }
Poly chart_b(const ChartData& chart, const IntVec& p) { return monomial_image(chart.p(), chart.b, chart.c, p); }

AhtRing build_A_ht(const ChartData& chart) {
  validate_chart(chart);
  const FineMonoid& q = chart.q();
  const FineMonoid& p = chart.p();
  const Field k = chart.a.field();
  const PolyRing& pa = chart.a.ambient();
  const std::size_t na = pa.nvars();

  std::set<std::string> used(pa.vars().begin(), pa.vars().end());
  std::vector<std::string> pn = p_names(chart);
  for (const auto& n : pn)
    if (used.count(n)) bad_chart("variable name " + n + " is used by A");
  LaurentBlock qb{q.groupification().group, na};
  std::vector<std::string> names = pa.vars();
  used.insert(pn.begin(), pn.end());
  for (const auto& n : qb.names("q", "w", used)) names.push_back(n);
  const std::size_t p_off = names.size();
  names.insert(names.end(), pn.begin(), pn.end());
  PolyRing amb(k, names);

  ToricAlgebra kp = toric_ideal(p, pn, true, k);
  std::vector<Poly> rel;
  for (const auto& g : chart.a.relations()) rel.push_back(embed(g, amb, 0));
  for (const auto& g : qb.relations(amb)) rel.push_back(g);
  for (const auto& g : kp.ring.relations()) rel.push_back(embed(g, amb, p_off));
  std::vector<Poly> gens;
  for (std::size_t i = 0; i < q.num_generators(); ++i) {
    Poly lhs = embed(chart.t[i], amb, 0) * qb.monomial(amb, gp_coords(q, q.generators()[i]));
    gens.push_back(lhs - embed(kp.monomial(chart.h.images()[i]), amb, p_off));
  }
  rel.insert(rel.end(), gens.begin(), gens.end());
  RingPresentation ring(amb, rel);

  // C[P^gp]
  const PolyRing& ca = chart.c.ambient();
  std::set<std::string> cused(ca.vars().begin(), ca.vars().end());
  LaurentBlock pb{p.groupification().group, ca.nvars()};
  std::vector<std::string> cnames = ca.vars();
  for (const auto& n : pb.names("p", "o", cused)) cnames.push_back(n);
  PolyRing tamb(k, cnames);
  std::vector<Poly> trel;
  for (const auto& g : chart.c.relations()) trel.push_back(embed(g, tamb, 0));
  for (const auto& g : pb.relations(tamb)) trel.push_back(g);
  RingPresentation target(tamb, trel);

  std::vector<Poly> images;
  for (std::size_t i = 0; i < na; ++i) images.push_back(embed(chart.f.images()[i], tamb, 0));
  const FgAbGroup& qg = qb.group;
  auto h_coords = [&](const IntVec& g) { return gp_coords(p, chart.h.apply(q.groupification().inclusion.apply(g))); };
  for (std::size_t j = 0; j < qg.rank(); ++j) {
    IntVec c = h_coords(qg.basis(j));
    images.push_back(pb.monomial(tamb, c));
    images.push_back(pb.monomial(tamb, pb.group.neg(c)));
  }
  for (std::size_t j = 0; j < qg.torsion().size(); ++j) images.push_back(pb.monomial(tamb, h_coords(qg.basis(qg.rank() + j))));
  for (std::size_t i = 0; i < p.num_generators(); ++i)
    images.push_back(embed(chart.b[i], tamb, 0) * pb.monomial(tamb, gp_coords(p, p.generators()[i])));
  RingMap comparison(ring, target, images);
  if (!comparison.well_defined()) bad_chart("the comparison map A(h,t) → C[P^gp] is not well defined");
  return {ring, target, comparison, gens};
}

ChartRing build_B(const ChartData& chart) {
  validate_chart(chart);
  const FineMonoid& q = chart.q();
  const FineMonoid& p = chart.p();
  const Field k = chart.a.field();
  const PolyRing& pa = chart.a.ambient();
  const std::size_t na = pa.nvars();
  std::vector<std::string> pn = p_names(chart);
  std::vector<std::string> names = pa.vars();
  for (const auto& n : pn) {
    if (std::find(names.begin(), names.end(), n) != names.end()) bad_chart("variable name " + n + " is used by A");
    names.push_back(n);
  }
  PolyRing amb(k, names);
  ToricAlgebra kp = toric_ideal(p, pn, true, k);
  std::vector<Poly> rel;
  for (const auto& g : chart.a.relations()) rel.push_back(embed(g, amb, 0));
  for (const auto& g : kp.ring.relations()) rel.push_back(embed(g, amb, na));
  for (std::size_t i = 0; i < q.num_generators(); ++i)
    rel.push_back(embed(chart.t[i], amb, 0) - embed(kp.monomial(chart.h.images()[i]), amb, na));
  RingPresentation ring(amb, rel);

  // G = (P/Q)^gp
  const Subgroup& pgp = p.groupification();
  std::vector<IntVec> hq;
  for (const auto& x : chart.h.images()) hq.push_back(gp_coords(p, x));
  Quotient g = cokernel(GroupHom::from_images(FgAbGroup::free(hq.size()), pgp.group, hq));
  std::vector<IntVec> deg(na, g.group.zero());
  for (const auto& x : p.generators()) deg.push_back(g.projection.apply(*pgp.inclusion.preimage(x)));
  for (std::size_t j = 0; j < g.group.rank(); ++j) {
    for (std::size_t v = na; v < deg.size(); ++v) {
      if (deg[v][j] == 0) continue;
      if (deg[v][j] < 0)
        for (auto& d : deg) d[j] = -d[j];
      break;
    }
  }

  std::vector<Poly> images;
  for (std::size_t i = 0; i < na; ++i) images.push_back(chart.f.images()[i]);
  for (const auto& x : chart.b) images.push_back(x);
  RingMap to_c(ring, chart.c, images);
  if (!to_c.well_defined()) bad_chart("B → C is not well defined");
  return {GradedRing(g.group, ring, deg), to_c, na, kp};
}

FreenessCertificate free_basis_certificate(const ChartData& chart, const ChartRing& b, const FreeBasis& basis,
                                           std::size_t window) {
  const RingPresentation& ring = b.ring.ring();
  const PolyRing& amb = ring.ambient();
  auto bracket = [&](const IntVec& x) {
    Exps e(amb.nvars(), 0);
    Exps w = b.toric.exponent_of(x);
    for (std::size_t i = 0; i < w.size(); ++i) e[b.a_vars + i] = w[i];
    return amb.monomial(e);
  };
  FreenessCertificate cert;
  std::map<IntVec, Poly> basis_forms;
  for (const auto& x : chart.p().elements_up_to(window)) {
    auto d = basis.decompose(x);
    ++cert.checked;
    if (!d) {
      cert.spans = false;
      continue;
    }
    const auto& [qq, s] = *d;
    if (!ring.equal(bracket(x), embed(chart_t(chart, qq), amb, 0) * bracket(s))) cert.spans = false;
    basis_forms.emplace(s, ring.normal_form(bracket(s)));
  }
  if (is_field_presentation(chart.a)) {
    std::map<Exps, std::size_t> cols;
    for (const auto& [s, f] : basis_forms)
      for (const auto& t : f.terms()) cols.emplace(t.e, cols.size());
    Matrix m(amb.field(), basis_forms.size(), cols.size());
    std::size_t row = 0;
    for (const auto& [s, f] : basis_forms) {
      for (const auto& t : f.terms()) m(row, cols.at(t.e)) = t.c;
      ++row;
    }
    cert.independent = m.rank() == basis_forms.size();
  }
  return cert;
}

ChartShape chart_shape(const ChartData& chart, const ChartRing& b) {
  const FineMonoid& p = chart.p();
  const auto& units = p.unit_generators();
  for (const auto& g : b.toric.ring.reduced_relations())
    for (const auto& t : g.terms())
      for (std::size_t i = 0; i < t.e.size(); ++i)
        if (t.e[i] != 0 && !units[i])
          fail(ErrorCode::UnsupportedShape, "P is not a free monoid times its units: " + g.to_string());
  std::optional<std::size_t> base;
  if (chart.a.ambient().nvars() == 0 || is_field_presentation(chart.a))
    base = std::nullopt;
  else if (chart.a.ambient().nvars() == 1 && chart.a.reduced_relations().empty())
    base = 0;
  else
    fail(ErrorCode::UnsupportedShape, "A must be a field or a polynomial ring in one variable");

  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < p.num_generators(); ++i)
    if (!units[i]) alive.push_back(b.a_vars + i);
  const PolyRing& amb = b.ring.ring().ambient();
  std::function<std::shared_ptr<ChartShape>(const GradedRing&, std::optional<std::size_t>, const std::vector<std::size_t>&)>
      build = [&](const GradedRing& ring, std::optional<std::size_t> base_var, const std::vector<std::size_t>& live) {
        auto s = std::make_shared<ChartShape>(ChartShape{ring, base_var, {}});
        if (ring.ring().is_zero_ring()) return s;
        for (std::size_t v : live) {
          std::vector<std::size_t> rest;
          for (std::size_t w : live)
            if (w != v) rest.push_back(w);
          GradedRing child = ring.quotient({amb.var(v)});
          std::optional<std::size_t> child_base = base_var;
          if (base_var && child.ring().normal_form(amb.var(*base_var)).is_constant()) child_base = std::nullopt;
          s->spawning.push_back({amb.vars()[v], amb.var(v), build(child, child_base, rest)});
        }
        return s;
      };
  return *build(b.ring, base, alive);
}

ModulePresentation restrict_to_B(const ChartRing& b, const ModulePresentation& m) {
  const RingMap& g = b.to_c;
  if (m.ring().ambient() != g.target().ambient()) fail(ErrorCode::InvalidArgument, "module is not over C");
  if (!g.is_surjective()) fail(ErrorCode::UnsupportedShape, "B → C is not surjective");
  const RingPresentation& ring = b.ring.ring();
  std::vector<PolyVec> rel;
  for (const auto& v : m.relations()) {
    PolyVec w;
    for (const auto& f : v) w.push_back(*g.preimage(f));
    rel.push_back(std::move(w));
  }
  for (const auto& k : g.kernel()) {
    if (ring.is_zero(k)) continue;
    for (std::size_t i = 0; i < m.rank(); ++i) {
      PolyVec w = zero_vec(ring.ambient(), m.rank());
      w[i] = k;
      rel.push_back(std::move(w));
    }
  }
  return ModulePresentation(ring, m.rank(), rel);
}

ChartVerdict second_chart_criterion(const ChartData& chart, const ModulePresentation& m) {
  validate_chart(chart);
  if (!chart.h.gp().is_injective()) fail(ErrorCode::NotInjectiveH, "h is not injective");
  ChartRing b = build_B(chart);
  ModulePresentation mb = restrict_to_B(b, m);
  GradedVerdict v;
  std::string shape;
  bool free_type = true;
  try {
    ChartShape s = chart_shape(chart, b);
    Classification cl = classify_morphism(chart.h);
    if (cl.free == Tri::No) fail(ErrorCode::UnsupportedShape, "h is not free: " + cl.witness);
    v = graded_flat_chart(s, mb);
    shape = shape_name(ShapeKind::Chart);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedShape) throw;
    free_type = false;
  }
  if (!free_type) {
    if (!chart.q().groupification().group.is_trivial() || chart.a.ambient().nvars() != 0 || !chart.p().is_sharp())
      fail(ErrorCode::UnsupportedShape, "B is neither a free chart ring nor a monoid algebra over k");
    ToricAlgebra kp{b.toric.monoid, b.ring.ring(), b.toric.degrees};
    v = graded_flat_monoid(kp, mb);
    shape = shape_name(ShapeKind::MonoidAlgebra);
  }
  v.certificate.criterion = "log flat over the chart base: " + v.certificate.criterion;
  return {v.flat, shape, v.certificate};
}

PointVerdict log_flat_over_point(const ToricAlgebra& kp, const ModulePresentation& m) {
  if (m.ring().ambient() != kp.ring.ambient()) fail(ErrorCode::InvalidArgument, "module is not over k[P]");
  if (!units_sharpen(kp.monoid).sharp.is_sharp()) fail(ErrorCode::UnsupportedShape, "sharpening is not pointed");
  PointVerdict out;
  for (const auto& pi : prime_ideals(kp.monoid)) {
    TorResult t = tor1(m, kp.ideal(pi.ideal));
    out.log_flat = out.log_flat && t.is_zero;
    out.primes.push_back({pi.ideal, t});
  }
  return out;
}

InvarianceReport chart_change_invariance(const ChartData& chart, const ChartData& other, const ChartMorphism& map,
                                         const ModulePresentation& m, std::size_t degree_bound) {
  auto unrelated = [](const std::string& what) { fail(ErrorCode::ChartsUnrelated, what); };
  if (chart.c.ambient() != other.c.ambient() || !chart.c.same_ideal(other.c)) unrelated("the charts live over different C");
  if (chart.a.ambient() != other.a.ambient() || !chart.a.same_ideal(other.a)) unrelated("the charts have different A");
  validate_chart(chart);
  validate_chart(other);
  if (!(map.on_q.source() == chart.q()) || !(map.on_q.target() == other.q()) || !(map.on_p.source() == chart.p()) ||
      !(map.on_p.target() == other.p()))
    unrelated("the morphism does not connect the two charts");
  const FgAbGroup& pa2 = other.p().ambient();
  for (std::size_t i = 0; i < chart.q().num_generators(); ++i) {
    const IntVec& qi = chart.q().generators()[i];
    if (!pa2.equal(other.h.apply(map.on_q.apply(qi)), map.on_p.apply(chart.h.apply(qi))))
      unrelated("h′ ∘ u ≠ v ∘ h");
    if (!chart.a.equal(chart_t(other, map.on_q.apply(qi)), chart.t[i])) unrelated("t′ ∘ u ≠ t");
  }
  for (std::size_t i = 0; i < chart.p().num_generators(); ++i)
    if (!chart.c.equal(chart_b(other, map.on_p.apply(chart.p().generators()[i])), chart.b[i])) unrelated("b′ ∘ v ≠ b");

  ChartRing b = build_B(chart);
  ChartRing b2 = build_B(other);
  const RingPresentation& r1 = b.ring.ring();
  const RingPresentation& r2 = b2.ring.ring();
  const PolyRing& a1 = r1.ambient();
  const PolyRing& a2 = r2.ambient();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < b.a_vars; ++i) images.push_back(a2.var(i));
  std::vector<IntVec> deg2;
  for (const auto& x : chart.p().generators()) {
    Exps w = b2.toric.exponent_of(map.on_p.apply(x));
    Exps e(a2.nvars(), 0);
    for (std::size_t j = 0; j < w.size(); ++j) e[b2.a_vars + j] = w[j];
    images.push_back(a2.monomial(e));
    deg2.push_back(b2.ring.degree_of(e));
  }
  RingMap phi(r1, r2, images);
  InvarianceReport rep;
  rep.well_defined = phi.well_defined();
  if (!rep.well_defined) return rep;
  rep.bijective = phi.is_surjective() && same_ideal(a1, phi.kernel(), r1.relations());

  if (phi.is_surjective()) {
    std::vector<Poly> back;
    for (std::size_t i = 0; i < a2.nvars(); ++i) back.push_back(*phi.preimage(a2.var(i)));
    RingMap psi(r2, r1, back);
    bool ok = psi.well_defined();
    for (const auto& e : monomials(a1.nvars(), static_cast<int>(degree_bound))) {
      Poly x = a1.monomial(e);
      ok = ok && r1.equal(psi.apply(phi.apply(x)), x);
      ++rep.monomials_checked;
    }
    for (const auto& e : monomials(a2.nvars(), static_cast<int>(degree_bound))) {
      Poly x = a2.monomial(e);
      ok = ok && r2.equal(phi.apply(psi.apply(x)), x);
      ++rep.monomials_checked;
    }
    rep.inverse_checked = ok;
  }

  // The induced map G → G′ on the degrees of the monoid variables.
  const FgAbGroup& g1 = b.ring.group();
  const FgAbGroup& g2 = b2.ring.group();
  std::vector<IntVec> deg1(b.ring.degrees().begin() + static_cast<long>(b.a_vars), b.ring.degrees().end());
  bool graded = true;
  std::vector<IntVec> gamma;
  for (std::size_t j = 0; j < g1.dim() && graded; ++j) {
    auto c = solve_combination(g1, deg1, g1.basis(j));
    if (!c) {
      graded = false;
      break;
    }
    IntVec y = g2.zero();
    for (std::size_t i = 0; i < c->size(); ++i) y = g2.add(y, g2.scale((*c)[i], deg2[i]));
    gamma.push_back(y);
  }
  if (graded) {
    Subgroup rel = kernel(GroupHom::from_images(FgAbGroup::free(deg1.size()), g1, deg1));
    for (std::size_t i = 0; i < rel.group.dim(); ++i) {
      IntVec c = rel.inclusion.apply(rel.group.basis(i));
      IntVec y = g2.zero();
      for (std::size_t k = 0; k < c.size(); ++k) y = g2.add(y, g2.scale(c[k], deg2[k]));
      if (!g2.is_zero(y)) graded = false;
    }
  }
  rep.graded = graded && GroupHom::from_images(g1, g2, gamma).is_isomorphism();

  rep.verdict = second_chart_criterion(chart, m).log_flat;
  rep.verdict_other = second_chart_criterion(other, m).log_flat;
  return rep;
}

ChartData nodal_chart(Field k) {
  PolyRing a0(k, {});
  RingPresentation a(a0);
  PolyRing r(k, {"x", "y"});
  RingPresentation c(r, {r.var(0) * r.var(1)});
  MonoidHom h(FineMonoid::free_monoid(1), FineMonoid::free_monoid(2), {int_vec({1, 1})});
  return {h, a, c, {a0.zero()}, {r.var(0), r.var(1)}, RingMap(a, c, {}), {"x", "y"}};
}

ChartData nodal_unit_extension_chart(Field k) {
  PolyRing a0(k, {});
  RingPresentation a(a0);
  PolyRing r(k, {"x", "y"});
  RingPresentation c(r, {r.var(0) * r.var(1)});
  FineMonoid q(FgAbGroup::free(2), {int_vec({1, 0}), int_vec({0, 1}), int_vec({0, -1})});
  FineMonoid p(FgAbGroup::free(3), {int_vec({1, 0, 0}), int_vec({0, 1, 0}), int_vec({0, 0, 1}), int_vec({0, 0, -1})});
  MonoidHom h(q, p, {int_vec({1, 1, 0}), int_vec({0, 0, 1}), int_vec({0, 0, -1})});
  mpq_class two = 2, half = k.inv(two);
  return {h,
          a,
          c,
          {a0.zero(), a0.constant(two), a0.constant(half)},
          {r.var(0), r.var(1), r.constant(two), r.constant(half)},
          RingMap(a, c, {}),
          {"x", "y", "w", "wi"}};
}

ChartMorphism nodal_unit_extension_map() {
  ChartData base = nodal_chart();
  ChartData ext = nodal_unit_extension_chart();
  return {MonoidHom(base.q(), ext.q(), {int_vec({1, 0})}),
          MonoidHom(base.p(), ext.p(), {int_vec({1, 0, 0}), int_vec({0, 1, 0})})};
}

ChartData smooth_divisor_chart(Field k) {
  PolyRing a0(k, {});
  RingPresentation a(a0);
  PolyRing r(k, {"x"});
  RingPresentation c(r);
  MonoidHom h(FineMonoid(), FineMonoid::free_monoid(1), {});
  return {h, a, c, {}, {r.var(0)}, RingMap(a, c, {}), {"x"}};
}

ChartData nodal_family_chart(Field k) {
  PolyRing a0(k, {"t"});
  RingPresentation a(a0);
  PolyRing r(k, {"t", "x", "y"});
  RingPresentation c(r, {r.var(1) * r.var(2) - r.var(0)});
  MonoidHom h(FineMonoid::free_monoid(1), FineMonoid::free_monoid(2), {int_vec({1, 1})});
  return {h, a, c, {a0.var(0)}, {r.var(1), r.var(2)}, RingMap(a, c, {r.var(0)}), {"x", "y"}};
}

FamilyReport nodal_family_check(const ModulePresentation& m, const mpq_class& generic) {
  const Field k = m.ring().field();
  ChartData chart = nodal_family_chart(k);
  if (m.ring().ambient() != chart.c.ambient() || !m.ring().same_ideal(chart.c))
    fail(ErrorCode::InvalidArgument, "module is not over k[t,x,y]/(xy - t)");
  FamilyReport rep;
  rep.graded = second_chart_criterion(chart, m).log_flat;
  rep.flat_over_base = flat_over_line(m, 0).flat;
  PolyRing r(k, {"x", "y"});
  const Poly x = r.var(0), y = r.var(1);
  RingPresentation special(r, {x * y});
  ModulePresentation m0 = base_change(m, RingMap(chart.c, special, {r.zero(), x, y}));
  rep.special_panel = nodal_criteria_panel(m0);
  rep.special_fiber = tor1(m0, {x, y}).is_zero;
  RingPresentation fiber(r, {x * y - r.constant(generic)});
  ModulePresentation m1 = base_change(m, RingMap(chart.c, fiber, {r.constant(generic), x, y}));
  rep.generic_fiber = tor1(m1, {x, y}).is_zero;
  return rep;
}

}  // namespace logflat
