#include "logflat/presentation.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

#include "logflat/error.hpp"

namespace logflat {

struct RingPresentation::Data {
  PolyRing ambient;
  std::vector<Poly> relations;
  std::once_flag once;
  std::optional<SubmoduleGB> gb;
};

RingPresentation::RingPresentation() : RingPresentation(PolyRing(Field::rationals(), {})) {}

RingPresentation::RingPresentation(PolyRing ambient, std::vector<Poly> relations) : d_(std::make_shared<Data>()) {
  for (const auto& r : relations)
    if (r.ring() != ambient) fail(ErrorCode::InvalidArgument, "ring relation from another polynomial ring");
  relations.erase(std::remove_if(relations.begin(), relations.end(), [](const Poly& p) { return p.is_zero(); }),
                  relations.end());
  d_->ambient = std::move(ambient);
  d_->relations = std::move(relations);
}

const PolyRing& RingPresentation::ambient() const { return d_->ambient; }
const std::vector<Poly>& RingPresentation::relations() const { return d_->relations; }

const SubmoduleGB& RingPresentation::gb() const {
  std::call_once(d_->once, [&] { d_->gb.emplace(ideal_gb(d_->ambient, d_->relations)); });
  return *d_->gb;
}

std::vector<Poly> RingPresentation::reduced_relations() const {
  std::vector<Poly> out;
  for (const auto& b : gb().basis()) out.push_back(b[0]);
  return out;
}

Poly RingPresentation::normal_form(const Poly& f) const {
  if (f.ring() != ambient()) fail(ErrorCode::InvalidArgument, "element from another ring");
  return gb().reduce({f})[0];
}

RingPresentation RingPresentation::quotient(const std::vector<Poly>& extra) const {
  std::vector<Poly> rel = relations();
  rel.insert(rel.end(), extra.begin(), extra.end());
  return RingPresentation(ambient(), rel);
}

namespace {

// Monomials of k[x]^rank outside the leading module; nullopt when infinitely many.
std::optional<std::vector<std::pair<std::size_t, Exps>>> standard_monomials(
    const std::vector<std::pair<std::size_t, Exps>>& leads, std::size_t rank, std::size_t n) {
  std::vector<std::pair<std::size_t, Exps>> out;
  for (std::size_t c = 0; c < rank; ++c) {
    std::vector<Exps> lc;
    for (const auto& [comp, e] : leads)
      if (comp == c) lc.push_back(e);
    std::vector<int> bound(n, -1);
    bool unit = false;
    for (const auto& e : lc) {
      int nz = 0;
      std::size_t at = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (e[i]) {
          ++nz;
          at = i;
        }
      if (nz == 0) unit = true;
      if (nz == 1 && (bound[at] < 0 || e[at] < bound[at])) bound[at] = e[at];
    }
    if (unit) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (bound[i] < 0) return std::nullopt;
    Exps e(n, 0);
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
      if (i == n) {
        for (const auto& l : lc)
          if (divides(l, e)) return;
        out.push_back({c, e});
        return;
      }
      for (int k = 0; k < bound[i]; ++k) {
        e[i] = k;
        walk(i + 1);
      }
      e[i] = 0;
    };
    walk(0);
  }
  return out;
}

}  // namespace

std::optional<std::size_t> RingPresentation::vector_space_dim() const {
  auto s = standard_monomials(gb().leading_monomials(), 1, ambient().nvars());
  if (!s) return std::nullopt;
  return s->size();
}

bool RingPresentation::same_ideal(const RingPresentation& o) const {
  return ambient() == o.ambient() && reduced_relations() == o.reduced_relations();
}

std::string RingPresentation::to_string() const {
  std::string s = ambient().field().name() + "[";
  for (std::size_t i = 0; i < ambient().nvars(); ++i) s += (i ? "," : "") + ambient().vars()[i];
  s += "]";
  if (!relations().empty()) {
    s += "/(";
    for (std::size_t i = 0; i < relations().size(); ++i) s += (i ? ", " : "") + relations()[i].to_string();
    s += ")";
  }
  return s;
}

ModulePresentation::ModulePresentation(RingPresentation ring, std::size_t rank, std::vector<PolyVec> relations)
    : ring_(std::move(ring)), rank_(rank) {
  for (auto& r : relations) {
    if (r.size() != rank_) fail(ErrorCode::InvalidArgument, "relation has the wrong length");
    for (const auto& p : r)
      if (p.ring() != ring_.ambient()) fail(ErrorCode::InvalidArgument, "relation from another ring");
    if (!is_zero_vec(r)) relations_.push_back(std::move(r));
  }
}

ModulePresentation ModulePresentation::free(const RingPresentation& ring, std::size_t rank) {
  return ModulePresentation(ring, rank);
}

ModulePresentation ModulePresentation::cyclic(const RingPresentation& ring, const std::vector<Poly>& ideal) {
  std::vector<PolyVec> rel;
  for (const auto& g : ideal) rel.push_back({g});
  return ModulePresentation(ring, 1, rel);
}

std::vector<PolyVec> ModulePresentation::full_relations() const {
  std::vector<PolyVec> out = relations_;
  for (const auto& g : ring_.relations())
    for (std::size_t c = 0; c < rank_; ++c) {
      PolyVec v = zero_vec(ring_.ambient(), rank_);
      v[c] = g;
      out.push_back(std::move(v));
    }
  return out;
}

const SubmoduleGB& ModulePresentation::gb() const {
  if (!*gb_) gb_->emplace(ring_.ambient(), rank_, full_relations());
  return **gb_;
}

PolyVec ModulePresentation::normal_form(const PolyVec& v) const { return gb().reduce(v); }

bool ModulePresentation::is_zero_module() const {
  for (std::size_t c = 0; c < rank_; ++c)
    if (!is_zero(unit_vec(ring_.ambient(), rank_, c))) return false;
  return true;
}

std::optional<std::size_t> ModulePresentation::vector_space_dim() const {
  auto s = standard_monomials(gb().leading_monomials(), rank_, ring_.ambient().nvars());
  if (!s) return std::nullopt;
  return s->size();
}

std::vector<std::pair<std::size_t, Exps>> ModulePresentation::standard_basis() const {
  auto s = standard_monomials(gb().leading_monomials(), rank_, ring_.ambient().nvars());
  if (!s) fail(ErrorCode::NotFiniteDimensional, "module is not finite-dimensional: " + to_string());
  return *s;
}

ModulePresentation ModulePresentation::direct_sum(const ModulePresentation& o) const {
  if (o.ring_.ambient() != ring_.ambient()) fail(ErrorCode::InvalidArgument, "direct sum over different rings");
  const PolyRing& r = ring_.ambient();
  std::vector<PolyVec> rel;
  for (const auto& v : relations_) {
    PolyVec w = v;
    for (std::size_t i = 0; i < o.rank_; ++i) w.push_back(r.zero());
    rel.push_back(std::move(w));
  }
  for (const auto& v : o.relations_) {
    PolyVec w = zero_vec(r, rank_);
    w.insert(w.end(), v.begin(), v.end());
    rel.push_back(std::move(w));
  }
  return ModulePresentation(ring_, rank_ + o.rank_, rel);
}

ModulePresentation ModulePresentation::quotient(const std::vector<PolyVec>& extra) const {
  std::vector<PolyVec> rel = relations_;
  rel.insert(rel.end(), extra.begin(), extra.end());
  return ModulePresentation(ring_, rank_, rel);
}

ModulePresentation ModulePresentation::tensor_quotient(const RingPresentation& target) const {
  if (target.ambient() != ring_.ambient()) fail(ErrorCode::InvalidArgument, "tensor with a ring on other variables");
  for (const auto& g : ring_.relations())
    if (!target.is_zero(g)) fail(ErrorCode::InvalidArgument, "target is not a quotient of the module's ring");
  return ModulePresentation(target, rank_, relations_);
}

std::string ModulePresentation::to_string() const {
  std::string s = "coker over " + ring_.to_string() + " of rank " + std::to_string(rank_);
  if (!relations_.empty()) {
    s += " by ";
    for (std::size_t i = 0; i < relations_.size(); ++i) s += (i ? ", " : "") + vec_to_string(relations_[i]);
  }
  return s;
}

PolyVec ModuleMap::apply(const PolyVec& v) const {
  if (v.size() != source.rank()) fail(ErrorCode::InvalidArgument, "vector rank mismatch in module map");
  PolyVec out = zero_vec(target.ring().ambient(), target.rank());
  for (std::size_t i = 0; i < v.size(); ++i) out = vec_add(out, vec_scale(v[i], images.at(i)));
  return target.normal_form(out);
}

bool ModuleMap::well_defined() const {
  if (images.size() != source.rank()) return false;
  for (const auto& r : source.full_relations())
    if (!is_zero_vec(apply(r))) return false;
  return true;
}

namespace {

std::vector<PolyVec> head(const std::vector<PolyVec>& syz, std::size_t k) {
  std::vector<PolyVec> out;
  for (const auto& s : syz) {
    PolyVec v(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
    if (!is_zero_vec(v)) out.push_back(std::move(v));
  }
  return out;
}

std::vector<PolyVec> with_ring(const RingPresentation& ring, std::size_t rank, std::vector<PolyVec> n) {
  for (const auto& g : ring.relations())
    for (std::size_t c = 0; c < rank; ++c) {
      PolyVec v = zero_vec(ring.ambient(), rank);
      v[c] = g;
      n.push_back(std::move(v));
    }
  return n;
}

void check_same_ring(const ModulePresentation& a, const ModulePresentation& b) {
  if (a.ring().ambient() != b.ring().ambient() || !a.ring().same_ideal(b.ring()))
    fail(ErrorCode::InvalidArgument, "modules over different rings");
}

}  // namespace

Subquotient subquotient(const RingPresentation& ring, std::size_t rank, const std::vector<PolyVec>& k,
                        const std::vector<PolyVec>& n) {
  std::vector<PolyVec> nf = with_ring(ring, rank, n);
  SubmoduleGB ngb(ring.ambient(), rank, nf);
  std::vector<PolyVec> kept;
  for (const auto& v : k) {
    PolyVec r = ngb.reduce(v);
    if (!is_zero_vec(r)) kept.push_back(std::move(r));
  }
  std::vector<PolyVec> gens = kept;
  gens.insert(gens.end(), nf.begin(), nf.end());
  std::vector<PolyVec> rel = kept.empty() ? std::vector<PolyVec>{} : head(syzygies(ring.ambient(), rank, gens), kept.size());
  return {ModulePresentation(ring, kept.size(), rel), kept};
}

Subquotient kernel(const ModuleMap& f) {
  check_same_ring(f.source, f.target);
  const std::size_t s = f.source.rank();
  if (f.images.size() != s) fail(ErrorCode::InvalidArgument, "module map needs one image per generator");
  if (s == 0) return {ModulePresentation(f.source.ring(), 0), {}};
  std::vector<PolyVec> gens = f.images;
  for (const auto& r : f.target.full_relations()) gens.push_back(r);
  std::vector<PolyVec> k = head(syzygies(f.source.ring().ambient(), f.target.rank(), gens), s);
  return subquotient(f.source.ring(), s, k, f.source.relations());
}

ModulePresentation cokernel(const ModuleMap& f) { return f.target.quotient(f.images); }

bool is_injective(const ModuleMap& f) { return kernel(f).generators.empty(); }

bool is_surjective(const ModuleMap& f) {
  std::vector<PolyVec> gens = f.images;
  for (const auto& r : f.target.full_relations()) gens.push_back(r);
  SubmoduleGB gb(f.target.ring().ambient(), f.target.rank(), gens);
  for (std::size_t c = 0; c < f.target.rank(); ++c)
    if (!gb.contains(unit_vec(f.target.ring().ambient(), f.target.rank(), c))) return false;
  return true;
}

Subquotient multiplication_kernel(const Poly& f, const ModulePresentation& m) {
  std::vector<PolyVec> images;
  for (std::size_t c = 0; c < m.rank(); ++c) images.push_back(vec_scale(f, unit_vec(m.ring().ambient(), m.rank(), c)));
  return kernel(ModuleMap{m, m, images});
}

bool regular_element_test(const Poly& f, const ModulePresentation& m) {
  return multiplication_kernel(f, m).generators.empty();
}

Resolution2 resolve2(const ModulePresentation& m) {
  Resolution2 r{m.rank(), m.relations().size(), m.relations(), {}};
  if (r.f1 == 0) return r;
  std::vector<PolyVec> gens = with_ring(m.ring(), m.rank(), m.relations());
  r.d2 = head(syzygies(m.ring().ambient(), m.rank(), gens), r.f1);
  return r;
}

TorResult tor1(const ModulePresentation& m, const std::vector<Poly>& j) {
  RingPresentation rj = m.ring().quotient(j);
  Resolution2 res = resolve2(m);
  if (res.f1 == 0) {
    ModulePresentation zero(rj, 0);
    return {zero, true, 0};
  }
  // ker(d1 ⊗ R/J), then divide by im(d2 ⊗ R/J).
  std::vector<PolyVec> gens = with_ring(rj, res.f0, res.d1);
  std::vector<PolyVec> k = head(syzygies(rj.ambient(), res.f0, gens), res.f1);
  Subquotient h = subquotient(rj, res.f1, k, res.d2);
  return {h.module, h.generators.empty(), h.module.vector_space_dim()};
}

TorResult tor1_via_quotient(const ModulePresentation& m, const std::vector<Poly>& j) {
  const RingPresentation& ring = m.ring();
  const PolyRing& a = ring.ambient();
  std::vector<Poly> jj;
  for (const auto& g : j)
    if (!ring.is_zero(g)) jj.push_back(g);
  const std::size_t r = m.rank(), n = jj.size();
  if (n == 0 || r == 0) return {ModulePresentation(ring, 0), true, 0};
  std::vector<PolyVec> jv;
  for (const auto& g : jj) jv.push_back({g});
  std::vector<PolyVec> g2 = head(syzygies(a, 1, with_ring(ring, 1, jv)), n);

  auto block = [&](std::size_t b, const PolyVec& v) {
    PolyVec out = zero_vec(a, r * n);
    for (std::size_t c = 0; c < r; ++c) out[b * r + c] = v[c];
    return out;
  };
  ModulePresentation mn = m;
  for (std::size_t b = 1; b < n; ++b) mn = mn.direct_sum(m);
  std::vector<PolyVec> images;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < r; ++c) images.push_back(vec_scale(jj[b], unit_vec(a, r, c)));
  Subquotient k = kernel(ModuleMap{mn, m, images});
  std::vector<PolyVec> n_rel = mn.relations();
  for (const auto& sigma : g2)
    for (std::size_t c = 0; c < r; ++c) {
      PolyVec v = zero_vec(a, r * n);
      for (std::size_t b = 0; b < n; ++b) v = vec_add(v, block(b, vec_scale(sigma[b], unit_vec(a, r, c))));
      n_rel.push_back(std::move(v));
    }
  Subquotient h = subquotient(ring, r * n, k.generators, n_rel);
  return {h.module, h.generators.empty(), h.module.vector_space_dim()};
}

std::vector<Poly> ideal_intersection(const PolyRing& ring, const std::vector<Poly>& a, const std::vector<Poly>& b) {
  std::vector<PolyVec> gens{{ring.one(), ring.one()}};
  for (const auto& f : a) gens.push_back({f, ring.zero()});
  for (const auto& g : b) gens.push_back({ring.zero(), g});
  std::vector<Poly> out;
  for (const auto& s : syzygies(ring, 2, gens)) out.push_back(s[0]);
  return groebner_basis(ring, out);
}

std::vector<Poly> annihilator(const ModulePresentation& m) {
  const PolyRing& a = m.ring().ambient();
  std::vector<Poly> ann{a.one()};
  std::vector<PolyVec> rel = m.full_relations();
  for (std::size_t c = 0; c < m.rank(); ++c) {
    std::vector<PolyVec> gens{unit_vec(a, m.rank(), c)};
    gens.insert(gens.end(), rel.begin(), rel.end());
    std::vector<Poly> col;
    for (const auto& s : syzygies(a, m.rank(), gens)) col.push_back(s[0]);
    ann = ideal_intersection(a, ann, col);
  }
  return groebner_basis(a, ann);
}

bool localization_vanishes_at_maximal(const ModulePresentation& m, const std::vector<Poly>& maximal) {
  std::vector<Poly> sum = annihilator(m);
  sum.insert(sum.end(), maximal.begin(), maximal.end());
  return ideal_gb(m.ring().ambient(), sum).contains({m.ring().ambient().one()});
}

struct RingMap::Elim {
  PolyRing big;  // target variables, then source variables
  std::vector<Poly> x_in_big, y_in_big;
  std::optional<SubmoduleGB> gb;
};

RingMap::RingMap(RingPresentation source, RingPresentation target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_.ambient().nvars()) fail(ErrorCode::InvalidArgument, "ring map needs one image per variable");
  for (const auto& p : images_)
    if (p.ring() != target_.ambient()) fail(ErrorCode::InvalidArgument, "ring map image from another ring");
  if (!(source_.field() == target_.field())) fail(ErrorCode::InvalidArgument, "ring map between different fields");
}

const RingMap::Elim& RingMap::elim() const {
  if (*elim_) return **elim_;
  auto e = std::make_shared<Elim>();
  const std::size_t n = target_.ambient().nvars(), m = source_.ambient().nvars();
  std::vector<std::string> names = target_.ambient().vars();
  for (std::string v : source_.ambient().vars()) {
    while (std::find(names.begin(), names.end(), v) != names.end()) v += "_s";
    names.push_back(v);
  }
  e->big = PolyRing(target_.field(), names, MonomialOrder::blocks({n, m}));
  for (std::size_t i = 0; i < n; ++i) e->x_in_big.push_back(e->big.var(i));
  for (std::size_t i = 0; i < m; ++i) e->y_in_big.push_back(e->big.var(n + i));
  std::vector<Poly> gens;
  for (const auto& g : target_.relations()) gens.push_back(g.map(e->big, e->x_in_big));
  for (const auto& g : source_.relations()) gens.push_back(g.map(e->big, e->y_in_big));
  for (std::size_t i = 0; i < m; ++i) gens.push_back(e->y_in_big[i] - images_[i].map(e->big, e->x_in_big));
  e->gb.emplace(ideal_gb(e->big, gens));
  *elim_ = e;
  return *e;
}

Poly RingMap::apply(const Poly& f) const { return target_.normal_form(f.map(target_.ambient(), images_)); }

bool RingMap::well_defined() const {
  for (const auto& g : source_.relations())
    if (!apply(g).is_zero()) return false;
  return true;
}

namespace {

// Polynomial of the big ring free of the first n variables, rewritten in `small` (the last variables).
std::optional<Poly> only_tail(const Poly& f, std::size_t n, const PolyRing& small) {
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    for (std::size_t i = 0; i < n; ++i)
      if (t.e[i]) return std::nullopt;
    terms.push_back({Exps(t.e.begin() + static_cast<std::ptrdiff_t>(n), t.e.end()), t.c});
  }
  return Poly::from_terms(small, std::move(terms));
}

}  // namespace

std::vector<Poly> RingMap::kernel() const {
  const Elim& e = elim();
  std::vector<Poly> out;
  for (const auto& b : e.gb->basis())
    if (auto p = only_tail(b[0], target_.ambient().nvars(), source_.ambient())) out.push_back(*p);
  return groebner_basis(source_.ambient(), out);
}

std::optional<Poly> RingMap::preimage(const Poly& f) const {
  const Elim& e = elim();
  Poly r = e.gb->reduce({f.map(e.big, e.x_in_big)})[0];
  auto p = only_tail(r, target_.ambient().nvars(), source_.ambient());
  if (p && !target_.equal(apply(*p), f)) fail(ErrorCode::Validation, "ring map preimage failed verification");
  return p;
}

bool RingMap::is_surjective() const {
  for (std::size_t i = 0; i < target_.ambient().nvars(); ++i)
    if (!preimage(target_.ambient().var(i))) return false;
  return true;
}

RingMap RingMap::then(const RingMap& g) const {
  if (!(g.source_.ambient() == target_.ambient())) fail(ErrorCode::InvalidArgument, "ring maps do not compose");
  std::vector<Poly> imgs;
  for (const auto& p : images_) imgs.push_back(g.apply(p));
  return RingMap(source_, g.target_, imgs);
}

ModulePresentation base_change(const ModulePresentation& m, const RingMap& f) {
  if (!(m.ring().ambient() == f.source().ambient())) fail(ErrorCode::InvalidArgument, "module is not over the map's source");
  std::vector<PolyVec> rel;
  for (const auto& v : m.relations()) {
    PolyVec w;
    for (const auto& p : v) w.push_back(f.apply(p));
    rel.push_back(std::move(w));
  }
  return ModulePresentation(f.target(), m.rank(), rel);
}

}  // namespace logflat
