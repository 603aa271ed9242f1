#include "logflat/lift.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "logflat/error.hpp"

namespace logflat {

namespace {

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::HomotopyInvalid, what); }

std::optional<Poly> unit_inverse(const RingPresentation& r, const Poly& f) {
  std::vector<PolyVec> gens{{f}};
  for (const auto& g : r.relations()) gens.push_back({g});
  auto c = lift(r.ambient(), 1, gens, {r.ambient().one()});
  if (!c) return std::nullopt;
  return r.normal_form((*c)[0]);
}

bool invertible_in(const Field& k, unsigned n) { return k.characteristic() == 0 || n % k.characteristic() != 0; }

// A′ with roots adjoined one at a time; each new variable heads the ambient in its own dominating block.
class Tower {
 public:
  explicit Tower(const SquareZeroExtension& ext) : thick_(ext.thick()), base_ideal_(ext.ideal()) { rebuild_thin(); }

  const RingPresentation& thick() const { return thick_; }
  const RingPresentation& thin() const { return thin_; }
  const RingPresentation& ring(bool thin) const { return thin ? thin_ : thick_; }
  const std::vector<RootAdjunction>& roots() const { return roots_; }
  std::vector<Poly> ideal() const {
    std::vector<Poly> out;
    for (const auto& g : base_ideal_) out.push_back(up(g));
    return out;
  }

  Poly up(const Poly& f) const {
    const PolyRing& amb = thick_.ambient();
    if (f.ring() == amb) return f;
    std::vector<Poly> images;
    for (const auto& name : f.ring().vars()) {
      auto i = amb.index_of(name);
      if (!i) fail(ErrorCode::InvalidArgument, "variable " + name + " is not in the cover");
      images.push_back(amb.var(*i));
    }
    return f.map(amb, images);
  }

  Poly inverse(const Poly& u, bool thin) const {
    auto inv = unit_inverse(ring(thin), up(u));
    if (!inv) invalid(up(u).to_string() + " is not a unit");
    return *inv;
  }

  Poly adjoin(unsigned n, const Poly& unit) {
    const PolyRing& old = thick_.ambient();
    std::string name = "x" + std::to_string(roots_.size() + 1);
    while (old.index_of(name)) name += "'";
    std::vector<std::string> vars{name};
    vars.insert(vars.end(), old.vars().begin(), old.vars().end());
    std::vector<std::size_t> blocks{1};
    if (old.order().block_sizes().empty())
      blocks.push_back(old.nvars());
    else
      blocks.insert(blocks.end(), old.order().block_sizes().begin(), old.order().block_sizes().end());
    if (old.nvars() == 0) blocks.pop_back();
    PolyRing amb(old.field(), vars, MonomialOrder::blocks(blocks));
    std::vector<Poly> rel;
    std::vector<Poly> images;
    for (std::size_t i = 0; i < old.nvars(); ++i) images.push_back(amb.var(i + 1));
    for (const auto& g : thick_.relations()) rel.push_back(g.map(amb, images));
    Poly u = unit.map(amb, images);
    Poly x = amb.var(0);
    rel.push_back(x.pow(n) - u);
    thick_ = RingPresentation(amb, rel);
    roots_.push_back({name, n, thick_.normal_form(u)});
    rebuild_thin();
    return x;
  }

 private:
  void rebuild_thin() { thin_ = thick_.quotient(ideal()); }

  RingPresentation thick_;
  std::vector<Poly> base_ideal_;
  RingPresentation thin_;
  std::vector<RootAdjunction> roots_;
};

// Arithmetic in R^gp ⊕ units over the thick or the thin ring of the tower.
struct Ops {
  const FgAbGroup& chart;
  const Tower& tower;
  bool thin;

  const RingPresentation& ring() const { return tower.ring(thin); }
  LogElem one() const { return {chart.zero(), ring().ambient().one()}; }
  LogElem unit(const Poly& u) const { return {chart.zero(), ring().normal_form(tower.up(u))}; }
  LogElem norm(const LogElem& a) const { return {chart.reduce(a.r), ring().normal_form(tower.up(a.u))}; }
  LogElem mul(const LogElem& a, const LogElem& b) const {
    return {chart.add(a.r, b.r), ring().normal_form(tower.up(a.u) * tower.up(b.u))};
  }
  LogElem inv(const LogElem& a) const { return {chart.neg(a.r), tower.inverse(a.u, thin)}; }
  LogElem div(const LogElem& a, const LogElem& b) const { return mul(a, inv(b)); }
  LogElem pow(const LogElem& a, mpz_class k) const {
    LogElem base = k < 0 ? inv(a) : norm(a);
    if (k < 0) k = -k;
    LogElem out = one();
    while (k > 0) {
      if (k % 2 == 1) out = mul(out, base);
      k /= 2;
      if (k > 0) base = mul(base, base);
    }
    return out;
  }
  LogElem product(const std::vector<LogElem>& values, const IntVec& c) const {
    LogElem out = one();
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) out = mul(out, pow(values[i], c[i]));
    return out;
  }
  bool equal(const LogElem& a, const LogElem& b) const {
    return chart.equal(a.r, b.r) && ring().equal(tower.up(a.u), tower.up(b.u));
  }
  bool is_one(const LogElem& a) const { return equal(a, one()); }
};

// A homomorphism out of a subgroup of `ambient`, given by values on generators.
struct GenMap {
  FgAbGroup ambient;
  std::vector<IntVec> gens;
  std::vector<LogElem> values;

  LogElem at(const Ops& ops, const IntVec& x) const {
    auto c = solve_combination(ambient, gens, x);
    if (!c) invalid("element " + to_string(x) + " lies outside the domain of a homomorphism");
    return ops.product(values, *c);
  }
  bool consistent(const Ops& ops) const {
    Subgroup rel = kernel(GroupHom::from_images(FgAbGroup::free(gens.size()), ambient, gens));
    for (std::size_t i = 0; i < rel.group.dim(); ++i)
      if (!ops.is_one(ops.product(values, rel.inclusion.apply(rel.group.basis(i))))) return false;
    return true;
  }
};

std::vector<LogElem> units_of(const std::vector<Poly>& us, const FgAbGroup& chart) {
  std::vector<LogElem> out;
  for (const auto& u : us) out.push_back({chart.zero(), u});
  return out;
}

IntVec combine(const FgAbGroup& g, const std::vector<IntVec>& gens, const IntVec& c) {
  IntVec out = g.zero();
  for (std::size_t i = 0; i < c.size(); ++i) out = g.add(out, g.scale(c[i], gens[i]));
  return out;
}

class Perturb {
 public:
  explicit Perturb(std::uint64_t seed) : on_(seed != 0), rng_(seed) {}
  bool on() const { return on_; }
  long small() { return std::uniform_int_distribution<long>(-2, 2)(rng_); }

 private:
  bool on_;
  std::mt19937_64 rng_;
};

void validate(const HomotopyProblem& pr, const Ops& thick, const Ops& thin) {
  const FineMonoid& q = pr.h.source();
  const FineMonoid& p = pr.h.target();
  if (!pr.chart.is_sharp()) invalid("the chart monoid must be sharp");
  if (!pr.chart.groupification().group.is_free()) invalid("the chart monoid must have torsion-free groupification");
  if (pr.a.size() != q.num_generators() || pr.eta.size() != q.num_generators())
    invalid("a and eta need one value per generator of Q");
  if (pr.b.size() != p.num_generators()) invalid("b needs one value per generator of P");
  for (const auto& x : pr.a)
    if (!pr.chart.member(x.r)) invalid("a takes a value outside the chart");
  for (const auto& x : pr.b)
    if (!pr.chart.member(x.r)) invalid("b takes a value outside the chart");
  for (const auto& x : pr.a)
    if (!unit_inverse(pr.ext.thick(), x.u)) invalid("a has a non-unit coefficient " + x.u.to_string());
  for (const auto& x : pr.b)
    if (!unit_inverse(pr.ext.thin(), x.u)) invalid("b has a non-unit coefficient " + x.u.to_string());
  for (const auto& x : pr.eta)
    if (!unit_inverse(pr.ext.thin(), x)) invalid("eta has a non-unit value " + x.to_string());

  GenMap a{q.ambient(), q.generators(), pr.a};
  GenMap b{p.ambient(), p.generators(), pr.b};
  GenMap eta{q.ambient(), q.generators(), units_of(pr.eta, pr.chart.ambient())};
  if (!a.consistent(thick)) invalid("a does not respect the relations of Q");
  if (!b.consistent(thin)) invalid("b does not respect the relations of P");
  if (!eta.consistent(thin)) invalid("eta does not respect the relations of Q");
  for (std::size_t i = 0; i < q.num_generators(); ++i) {
    LogElem lhs = thin.mul(eta.values[i], b.at(thin, pr.h.images()[i]));
    if (!thin.equal(lhs, pr.a[i])) invalid("eta·bh ≠ ia at generator " + std::to_string(i) + " of Q");
  }
}

}  // namespace

SquareZeroExtension::SquareZeroExtension(RingPresentation thick, std::vector<Poly> ideal)
    : thick_(std::move(thick)), ideal_(std::move(ideal)) {
  for (auto& g : ideal_) {
    if (g.ring() != thick_.ambient()) fail(ErrorCode::InvalidArgument, "ideal generator over another ring");
    g = thick_.normal_form(g);
  }
  for (std::size_t i = 0; i < ideal_.size(); ++i)
    for (std::size_t j = i; j < ideal_.size(); ++j)
      if (!thick_.is_zero(ideal_[i] * ideal_[j])) fail(ErrorCode::InvalidArgument, "the ideal does not square to zero");
  thin_ = thick_.quotient(ideal_);
}

HomotopyLift homotopy_lift(const HomotopyProblem& pr, const LiftOptions& options) {
  const FineMonoid& q = pr.h.source();
  const FineMonoid& p = pr.h.target();
  const FgAbGroup& pa = p.ambient();
  const FgAbGroup& ra = pr.chart.ambient();
  const std::vector<IntVec>& hq = pr.h.images();
  const std::size_t nq = q.num_generators();

  Tower tower(pr.ext);
  Ops thick{ra, tower, false};
  Ops thin{ra, tower, true};
  validate(pr, thick, thin);

  GenMap b{pa, p.generators(), pr.b};
  Perturb perturb(options.seed);
  HomotopyLift out;
  std::vector<LogElem> eta = units_of(pr.eta, ra);

  // Q^gp → G = h(Q^gp): β absorbs the kernel.
  GenMap l{pa, {}, {}};
  GenMap alpha{pa, {}, {}};
  std::vector<LogElem> beta(nq, thick.one());
  Subgroup kh = kernel(GroupHom::from_images(FgAbGroup::free(nq), pa, hq));
  bool injective = true;
  for (std::size_t i = 0; i < kh.group.dim(); ++i)
    if (!q.ambient().is_zero(combine(q.ambient(), q.generators(), kh.inclusion.apply(kh.group.basis(i)))))
      injective = false;
  if (injective) {
    l.gens = hq;
    l.values = pr.a;
    alpha.gens = hq;
    alpha.values = eta;
  } else {
    out.steps.push_back("surjection onto the image of h");
    Subgroup g = subgroup_generated(pa, hq);
    for (std::size_t j = 0; j < g.group.dim(); ++j) {
      IntVec e = g.inclusion.apply(g.group.basis(j));
      IntVec c = *solve_combination(pa, hq, e);
      l.gens.push_back(e);
      alpha.gens.push_back(e);
      if (j < g.group.rank()) {
        if (perturb.on())
          for (std::size_t k = 0; k < kh.group.dim(); ++k)
            c = FgAbGroup::free(nq).add(c, FgAbGroup::free(nq).scale(perturb.small(),
                                                                       kh.inclusion.apply(kh.group.basis(k))));
        l.values.push_back(thick.product(pr.a, c));
        alpha.values.push_back(thin.product(eta, c));
        continue;
      }
      unsigned n = static_cast<unsigned>(g.group.torsion()[j - g.group.rank()].get_ui());
      LogElem bv = b.at(thin, e);
      if (!ra.is_zero(bv.r)) invalid("b sends a torsion element outside the units");
      LogElem m = thick.unit(bv.u);
      Poly ij = thick.pow(m, n).u - tower.thick().ambient().one();
      Poly x;
      if (invertible_in(tower.thick().field(), n))
        x = tower.thick().normal_form(tower.thick().ambient().one() + ij.scale(mpq_class(1, n)));
      else if (tower.thick().is_zero(ij))
        x = tower.thick().ambient().one();
      else
        x = tower.adjoin(n, tower.thick().ambient().one() + ij);
      LogElem lv = thick.div(m, thick.unit(x));
      l.values.push_back(lv);
      alpha.values.push_back(thin.div(thin.norm(lv), bv));
    }
    for (std::size_t i = 0; i < nq; ++i) {
      LogElem ratio = thick.div(pr.a[i], l.at(thick, hq[i]));
      if (!ra.is_zero(ratio.r)) invalid("a/(lh) leaves the units at generator " + std::to_string(i));
      beta[i] = ratio;
    }
  }

  // G → H → P^gp through the quotient (P/G)^gp.
  const Subgroup& pgp = p.groupification();
  std::vector<IntVec> gcoords;
  for (const auto& x : l.gens) {
    auto y = pgp.inclusion.preimage(x);
    if (!y) invalid("h lands outside P^gp");
    gcoords.push_back(*y);
  }
  Quotient qt = cokernel(GroupHom::from_images(FgAbGroup::free(gcoords.size()), pgp.group, gcoords));
  const std::size_t free_rank = qt.group.rank();

  if (!qt.group.torsion().empty()) out.steps.push_back("torsion cokernel");
  std::vector<IntVec> g_gens = l.gens;
  for (std::size_t j = 0; j < qt.group.torsion().size(); ++j) {
    IntVec pj = pgp.inclusion.apply(qt.section.column(free_rank + j));
    const mpz_class& nz = qt.group.torsion()[j];
    unsigned n = static_cast<unsigned>(nz.get_ui());
    IntVec npj = pa.scale(nz, pj);
    LogElem target = l.at(thick, npj);
    LogElem eta_n = alpha.at(thin, npj);
    LogElem bv = b.at(thin, pj);
    LogElem m{bv.r, tower.thick().normal_form(tower.up(bv.u))};
    LogElem ratio = thick.div(target, thick.pow(m, nz));
    if (!ra.is_zero(ratio.r)) invalid("a(n p)/m^n is not a unit");
    Poly u = ratio.u;
    if (!thin.equal(thin.norm(ratio), eta_n)) invalid("i(u) differs from eta(n p)");
    Poly one = tower.thick().ambient().one();
    Poly x;
    if (options.shortcut && invertible_in(tower.thick().field(), n) && tower.thin().equal(tower.up(u), one))
      x = tower.thick().normal_form(one + (u - one).scale(mpq_class(1, n)));
    else
      x = tower.adjoin(n, u);
    LogElem lv{m.r, tower.thick().normal_form(tower.up(x) * tower.up(m.u))};
    LogElem av = thin.unit(x);
    l.gens.push_back(pj);
    l.values.push_back(lv);
    alpha.gens.push_back(pj);
    alpha.values.push_back(av);
    out.torsion_roots.emplace_back(pj, av.u);
  }

  if (free_rank > 0) out.steps.push_back("torsion-free cokernel");
  std::vector<IntVec> h_gens = l.gens;
  std::vector<Poly> ideal = tower.ideal();
  for (std::size_t j = 0; j < free_rank; ++j) {
    IntVec fj = pgp.inclusion.apply(qt.section.column(j));
    if (perturb.on())
      for (const auto& x : h_gens) fj = pa.add(fj, pa.scale(perturb.small(), x));
    LogElem bv = b.at(thin, fj);
    LogElem m{bv.r, tower.thick().normal_form(tower.up(bv.u))};
    if (perturb.on())
      for (const auto& i : ideal)
        m.u = tower.thick().normal_form(m.u * (tower.thick().ambient().one() + i.scale(perturb.small())));
    l.gens.push_back(fj);
    l.values.push_back(m);
    alpha.gens.push_back(fj);
    alpha.values.push_back(thin.one());
  }
  if (out.steps.empty()) out.steps.push_back("h^gp is an isomorphism");

  for (const auto& pg : p.generators()) {
    out.l.push_back(l.at(thick, pg));
    out.alpha.push_back(alpha.at(thin, pg).u);
  }
  for (const auto& x : beta) out.beta.push_back(thick.norm(x).u);
  for (auto& x : out.l) x = thick.norm(x);
  for (auto& [pj, x] : out.torsion_roots) x = thin.unit(x).u;
  out.cover = tower.thick();
  out.cover_thin = tower.thin();
  out.roots = tower.roots();

  if (!check_lift(pr, out).all()) invalid("constructed lift fails an identity");
  return out;
}

namespace {

// Rebuilds a tower whose rings are the given cover, for arithmetic on lift data.
struct CoverOps {
  Tower tower;
  Ops thick, thin;
  CoverOps(const SquareZeroExtension& ext, const HomotopyLift& lift, const FgAbGroup& chart)
      : tower(SquareZeroExtension(lift.cover, embed(ext, lift))),
        thick{chart, tower, false},
        thin{chart, tower, true} {}

  static std::vector<Poly> embed(const SquareZeroExtension& ext, const HomotopyLift& lift) {
    const PolyRing& amb = lift.cover.ambient();
    std::vector<Poly> out;
    for (const auto& g : ext.ideal()) {
      std::vector<Poly> images;
      for (const auto& name : g.ring().vars()) {
        auto i = amb.index_of(name);
        if (!i) fail(ErrorCode::LiftsIncompatible, "the cover does not contain " + name);
        images.push_back(amb.var(*i));
      }
      out.push_back(g.map(amb, images));
    }
    return out;
  }
};

}  // namespace

LiftCheck check_lift(const HomotopyProblem& pr, const HomotopyLift& lift) {
  const FineMonoid& q = pr.h.source();
  const FineMonoid& p = pr.h.target();
  const FgAbGroup& ra = pr.chart.ambient();
  CoverOps ops(pr.ext, lift, ra);
  LiftCheck r;
  GenMap l{p.ambient(), p.generators(), lift.l};
  GenMap alpha{p.ambient(), p.generators(), units_of(lift.alpha, ra)};
  GenMap beta{q.ambient(), q.generators(), units_of(lift.beta, ra)};
  r.homomorphisms = l.consistent(ops.thick) && alpha.consistent(ops.thin) && beta.consistent(ops.thick);
  for (std::size_t i = 0; i < p.num_generators(); ++i)
    if (!ops.thin.equal(ops.thin.mul(alpha.values[i], pr.b[i]), ops.thin.norm(lift.l[i]))) r.alpha_b = false;
  for (std::size_t i = 0; i < q.num_generators(); ++i) {
    const IntVec& hq = pr.h.images()[i];
    if (!ops.thick.equal(ops.thick.mul(beta.values[i], l.at(ops.thick, hq)), pr.a[i])) r.beta_l = false;
    LogElem rhs = ops.thin.mul(ops.thin.norm(beta.values[i]), alpha.at(ops.thin, hq));
    if (!ops.thin.equal(ops.thin.unit(pr.eta[i]), rhs)) r.eta = false;
  }
  return r;
}

bool cover_is_free(const HomotopyProblem& pr, const HomotopyLift& lift) {
  const PolyRing& amb = lift.cover.ambient();
  const PolyRing& base = pr.ext.thick().ambient();
  if (amb.nvars() != base.nvars() + lift.roots.size()) return false;
  std::set<Exps> expected;
  for (std::size_t j = 0; j < lift.roots.size(); ++j) {
    auto i = amb.index_of(lift.roots[j].variable);
    if (!i) return false;
    Exps e(amb.nvars(), 0);
    e[*i] = static_cast<int>(lift.roots[j].degree);
    expected.insert(e);
  }
  for (const auto& [comp, e] : pr.ext.thick().gb().leading_monomials()) {
    Exps up(amb.nvars(), 0);
    for (std::size_t v = 0; v < base.nvars(); ++v) up[*amb.index_of(base.vars()[v])] = e[v];
    expected.insert(up);
  }
  std::set<Exps> actual;
  for (const auto& [comp, e] : lift.cover.gb().leading_monomials()) actual.insert(e);
  return actual == expected;
}

LiftHomotopy verify_lift_uniqueness(const HomotopyProblem& pr, const HomotopyLift& lift,
                                    const HomotopyLift& other) {
  if (lift.cover.ambient() != other.cover.ambient() || !lift.cover.same_ideal(other.cover))
    fail(ErrorCode::LiftsIncompatible, "the lifts live over different covers");
  const FineMonoid& q = pr.h.source();
  const FineMonoid& p = pr.h.target();
  const FgAbGroup& ra = pr.chart.ambient();
  CoverOps ops(pr.ext, lift, ra);
  LiftHomotopy out;
  std::vector<LogElem> gamma;
  for (std::size_t i = 0; i < p.num_generators(); ++i) {
    if (!ra.equal(lift.l[i].r, other.l[i].r))
      fail(ErrorCode::LiftsIncompatible, "l and l′ differ off the units at generator " + std::to_string(i));
    gamma.push_back(ops.thick.div(lift.l[i], other.l[i]));
    out.gamma.push_back(gamma.back().u);
  }
  GenMap g{p.ambient(), p.generators(), gamma};
  if (!g.consistent(ops.thick)) fail(ErrorCode::LiftsIncompatible, "γ does not respect the relations of P");
  for (std::size_t i = 0; i < p.num_generators(); ++i) {
    LogElem lhs = ops.thin.mul(ops.thin.norm(gamma[i]), ops.thin.unit(other.alpha[i]));
    if (!ops.thin.equal(lhs, ops.thin.unit(lift.alpha[i])))
      fail(ErrorCode::LiftsIncompatible, "iγ·α′ ≠ α at generator " + std::to_string(i));
  }
  for (std::size_t i = 0; i < q.num_generators(); ++i) {
    LogElem rhs = ops.thick.mul(ops.thick.unit(lift.beta[i]), g.at(ops.thick, pr.h.images()[i]));
    if (!ops.thick.equal(ops.thick.unit(other.beta[i]), rhs))
      fail(ErrorCode::LiftsIncompatible, "β′ ≠ β·γh at generator " + std::to_string(i));
  }
  return out;
}

}  // namespace logflat
