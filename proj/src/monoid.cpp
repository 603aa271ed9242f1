#include "logflat/monoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>

#include "logflat/error.hpp"

namespace logflat {

struct FineMonoid::Data {
  FgAbGroup ambient;
  std::vector<IntVec> gens;
  Subgroup gp;
  std::vector<bool> unit_mask;
  std::vector<IntVec> unit_gens;
  std::vector<std::size_t> unit_index;
  Subgroup units;
  std::vector<std::vector<mpz_class>> neg_witness;
  QVec grading;
  std::vector<QVec> free_gens;

  mutable std::once_flag faces_once;
  mutable std::vector<Face> faces;
};

namespace {

QVec free_coords(const FgAbGroup& a, const IntVec& x) {
  QVec r(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) r[i] = x[i];
  return r;
}

mpq_class dot(const QVec& w, const QVec& v) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
  return s;
}

mpz_class lcm_denominators(const QVec& v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

std::optional<std::vector<mpz_class>> negation_lp(const FgAbGroup& a, const std::vector<IntVec>& gens,
                                                  const std::vector<QVec>& free_gens, std::size_t i) {
  const std::size_t n = gens.size();
  std::vector<QVec> rows(a.rank() + 1, QVec(n));
  QVec rhs(a.rank() + 1);
  for (std::size_t r = 0; r < a.rank(); ++r)
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = free_gens[j][r];
  rows[a.rank()][i] = 1;
  rhs[a.rank()] = 1;
  auto lambda = lp_feasible(rows, rhs);
  if (!lambda) return std::nullopt;
  mpz_class l = lcm_denominators(*lambda);
  IntVec v = a.zero();
  std::vector<mpz_class> scaled(n);
  for (std::size_t j = 0; j < n; ++j) {
    mpq_class c = (*lambda)[j] * l;
    scaled[j] = c.get_num();
    v = a.add(v, a.scale(scaled[j], gens[j]));
  }
  auto ord = a.element_order(v);
  if (!ord) fail(ErrorCode::Validation, "unit certificate has infinite order");
  std::vector<mpz_class> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = *ord * scaled[j];
  w[i] -= 1;
  return w;
}

}  // namespace

FineMonoid::FineMonoid() : FineMonoid(FgAbGroup::free(0), {}) {}

FineMonoid::FineMonoid(FgAbGroup ambient, std::vector<IntVec> generators) {
  auto d = std::make_shared<Data>();
  d->ambient = std::move(ambient);
  for (auto& g : generators) d->gens.push_back(d->ambient.reduce(std::move(g)));
  d->gp = subgroup_generated(d->ambient, d->gens);
  const std::size_t n = d->gens.size();
  for (const auto& g : d->gens) d->free_gens.push_back(free_coords(d->ambient, g));
  d->unit_mask.assign(n, false);
  d->neg_witness.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    auto w = negation_lp(d->ambient, d->gens, d->free_gens, i);
    if (!w) continue;
    d->unit_mask[i] = true;
    d->neg_witness[i] = std::move(*w);
    d->unit_gens.push_back(d->gens[i]);
    d->unit_index.push_back(i);
  }
  d->units = subgroup_generated(d->ambient, d->unit_gens);
  auto w = separating_functional(d->free_gens, d->unit_mask, d->ambient.rank());
  if (!w) fail(ErrorCode::Validation, "unit generators do not span a face");
  d->grading = std::move(*w);
  data_ = std::move(d);
}

FineMonoid FineMonoid::free_monoid(std::size_t n) {
  FgAbGroup a = FgAbGroup::free(n);
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(a.basis(i));
  return FineMonoid(a, gens);
}

FineMonoid FineMonoid::group(const FgAbGroup& g) {
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    gens.push_back(g.basis(i));
    if (i < g.rank()) gens.push_back(g.neg(g.basis(i)));
  }
  return FineMonoid(g, gens);
}

const FgAbGroup& FineMonoid::ambient() const { return data_->ambient; }
const std::vector<IntVec>& FineMonoid::generators() const { return data_->gens; }
const Subgroup& FineMonoid::groupification() const { return data_->gp; }
const Subgroup& FineMonoid::unit_group() const { return data_->units; }
const std::vector<bool>& FineMonoid::unit_generators() const { return data_->unit_mask; }
bool FineMonoid::is_sharp() const { return data_->units.group.is_trivial(); }
bool FineMonoid::is_group() const {
  return std::all_of(data_->unit_mask.begin(), data_->unit_mask.end(), [](bool b) { return b; });
}
std::size_t FineMonoid::dimension() const { return data_->gp.group.rank(); }
const QVec& FineMonoid::grading() const { return data_->grading; }
QVec FineMonoid::free_part(const IntVec& x) const { return free_coords(ambient(), x); }

bool FineMonoid::in_groupification(const IntVec& g) const {
  ambient().check_element(g);
  return solve_combination(ambient(), generators(), g).has_value();
}

std::optional<IntVec> FineMonoid::group_coordinates(const IntVec& g) const {
  ambient().check_element(g);
  return solve_combination(ambient(), generators(), g);
}

IntVec FineMonoid::combine(const std::vector<mpz_class>& coefficients) const {
  if (coefficients.size() != num_generators())
    fail(ErrorCode::InvalidArgument, "coefficient count differs from generator count");
  IntVec r = ambient().zero();
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (coefficients[i] != 0) r = ambient().add(r, ambient().scale(coefficients[i], generators()[i]));
  return r;
}

bool FineMonoid::is_unit(const IntVec& g) const {
  ambient().check_element(g);
  if (data_->unit_gens.empty()) return ambient().is_zero(g);
  return solve_combination(ambient(), data_->unit_gens, g).has_value();
}

const std::vector<mpz_class>& FineMonoid::negation_witness(std::size_t i) const {
  if (i >= num_generators() || !data_->unit_mask[i])
    fail(ErrorCode::InvalidArgument, "generator is not a unit");
  return data_->neg_witness[i];
}

std::optional<std::vector<mpz_class>> FineMonoid::member_witness(const IntVec& g) const {
  const Data& d = *data_;
  const FgAbGroup& a = d.ambient;
  IntVec target = a.reduce(g);
  if (!in_groupification(target)) return std::nullopt;
  std::vector<std::size_t> pos;
  std::vector<mpq_class> wt;
  for (std::size_t i = 0; i < d.gens.size(); ++i)
    if (!d.unit_mask[i]) {
      pos.push_back(i);
      wt.push_back(dot(d.grading, d.free_gens[i]));
    }
  const mpq_class total = dot(d.grading, free_coords(a, target));
  if (total < 0) return std::nullopt;

  std::vector<mpz_class> counts(d.gens.size());
  std::optional<IntVec> unit_coeffs;
  std::set<std::pair<std::size_t, IntVec>> dead;

  auto residual_in_units = [&](const IntVec& r) -> bool {
    if (d.unit_gens.empty()) {
      if (!a.is_zero(r)) return false;
      unit_coeffs = IntVec{};
      return true;
    }
    unit_coeffs = solve_combination(a, d.unit_gens, r);
    return unit_coeffs.has_value();
  };

  std::function<bool(std::size_t, const IntVec&, const mpq_class&)> dfs =
      [&](std::size_t k, const IntVec& r, const mpq_class& budget) -> bool {
    if (k == pos.size()) return budget == 0 && residual_in_units(r);
    auto key = std::make_pair(k, r);
    if (dead.count(key)) return false;
    const IntVec& gen = d.gens[pos[k]];
    if (k + 1 == pos.size()) {
      mpq_class q = budget / wt[k];
      if (q.get_den() == 1) {
        counts[pos[k]] = q.get_num();
        if (dfs(k + 1, a.sub(r, a.scale(q.get_num(), gen)), 0)) return true;
      }
    } else {
      mpz_class limit = budget.get_num() * wt[k].get_den();
      mpz_fdiv_q(limit.get_mpz_t(), limit.get_mpz_t(), mpz_class(budget.get_den() * wt[k].get_num()).get_mpz_t());
      IntVec cur = r;
      for (mpz_class n = 0; n <= limit; ++n) {
        counts[pos[k]] = n;
        if (dfs(k + 1, cur, budget - wt[k] * n)) return true;
        cur = a.sub(cur, gen);
      }
    }
    counts[pos[k]] = 0;
    dead.insert(std::move(key));
    return false;
  };
  if (!dfs(0, target, total)) return std::nullopt;

  for (std::size_t u = 0; u < d.unit_index.size(); ++u) {
    const mpz_class& c = (*unit_coeffs)[u];
    const std::size_t i = d.unit_index[u];
    if (c >= 0) {
      counts[i] += c;
    } else {
      mpz_class m = -c;
      for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += m * d.neg_witness[i][j];
    }
  }
  if (!a.equal(combine(counts), target)) fail(ErrorCode::Validation, "membership witness failed to verify");
  return counts;
}

bool FineMonoid::member(const IntVec& g) const { return member_witness(g).has_value(); }

std::optional<Face> FineMonoid::face_of(const std::vector<bool>& mask) const {
  const Data& d = *data_;
  if (mask.size() != d.gens.size()) fail(ErrorCode::InvalidArgument, "face mask has wrong length");
  auto w = separating_functional(d.free_gens, mask, d.ambient.rank());
  if (!w) return std::nullopt;
  std::vector<IntVec> in;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) in.push_back(d.gens[i]);
  Face f;
  f.mask = mask;
  f.dimension = subgroup_generated(d.ambient, in).group.rank();
  f.functional = std::move(*w);
  return f;
}

const std::vector<Face>& FineMonoid::faces() const {
  const Data& d = *data_;
  std::call_once(d.faces_once, [&] {
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < d.gens.size(); ++i)
      if (!d.unit_mask[i]) free_idx.push_back(i);
    if (free_idx.size() > 20) fail(ErrorCode::InvalidArgument, "too many generators for face enumeration");
    std::vector<Face> out;
    for (std::size_t s = 0; s < (std::size_t{1} << free_idx.size()); ++s) {
      std::vector<bool> mask = d.unit_mask;
      for (std::size_t b = 0; b < free_idx.size(); ++b)
        if (s >> b & 1) mask[free_idx[b]] = true;
      if (auto f = face_of(mask)) out.push_back(std::move(*f));
    }
    std::sort(out.begin(), out.end(), [](const Face& x, const Face& y) {
      if (x.dimension != y.dimension) return x.dimension > y.dimension;
      return x.mask < y.mask;
    });
    d.faces = std::move(out);
  });
  return d.faces;
}

std::vector<IntVec> FineMonoid::elements_up_to(std::size_t degree) const {
  const FgAbGroup& a = ambient();
  std::vector<IntVec> out;
  std::set<IntVec> seen;
  std::vector<IntVec> frontier{a.zero()};
  seen.insert(a.zero());
  out.push_back(a.zero());
  for (std::size_t k = 0; k < degree; ++k) {
    std::vector<IntVec> next;
    for (const auto& x : frontier)
      for (const auto& g : generators()) {
        IntVec y = a.add(x, g);
        if (seen.insert(y).second) {
          out.push_back(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return out;
}

bool FineMonoid::operator==(const FineMonoid& other) const {
  if (data_ == other.data_) return true;
  if (!(ambient() == other.ambient())) return false;
  for (const auto& g : generators())
    if (!other.member(g)) return false;
  for (const auto& g : other.generators())
    if (!member(g)) return false;
  return true;
}

std::string FineMonoid::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < num_generators(); ++i) {
    if (i) s += ", ";
    s += logflat::to_string(generators()[i]);
  }
  return s + "> in " + ambient().to_string();
}

MonoidHom::MonoidHom(FineMonoid source, FineMonoid target, std::vector<IntVec> images)
    : source_(std::move(source)), target_(std::move(target)) {
  if (images.size() != source_.num_generators())
    fail(ErrorCode::InvalidArgument, "image count differs from source generator count");
  const FgAbGroup& ta = target_.ambient();
  for (auto& y : images) {
    y = ta.reduce(std::move(y));
    if (!target_.member(y)) fail(ErrorCode::Validation, "image " + logflat::to_string(y) + " not in target monoid");
  }
  images_ = std::move(images);
  const FgAbGroup& sa = source_.ambient();
  // Relations among the source generators must map to zero.
  GroupHom gens_map = GroupHom::from_images(FgAbGroup::free(source_.num_generators()), sa, source_.generators());
  Subgroup rel = kernel(gens_map);
  for (std::size_t k = 0; k < rel.group.dim(); ++k) {
    IntVec c = rel.inclusion.apply(rel.group.basis(k));
    IntVec y = ta.zero();
    for (std::size_t i = 0; i < c.size(); ++i) y = ta.add(y, ta.scale(c[i], images_[i]));
    if (!ta.is_zero(y)) fail(ErrorCode::Validation, "generator images violate a relation of the source");
  }
  const Subgroup& gp = source_.groupification();
  std::vector<IntVec> gp_images;
  for (std::size_t k = 0; k < gp.group.dim(); ++k) gp_images.push_back(apply(gp.inclusion.apply(gp.group.basis(k))));
  gp_ = GroupHom::from_images(gp.group, ta, gp_images);
}

MonoidHom MonoidHom::identity(const FineMonoid& p) { return MonoidHom(p, p, p.generators()); }

IntVec MonoidHom::apply(const IntVec& x) const {
  auto c = source_.group_coordinates(x);
  if (!c) fail(ErrorCode::AmbientMismatch, "element " + logflat::to_string(x) + " not in source groupification");
  const FgAbGroup& ta = target_.ambient();
  IntVec y = ta.zero();
  for (std::size_t i = 0; i < c->size(); ++i) y = ta.add(y, ta.scale((*c)[i], images_[i]));
  return y;
}

MonoidHom MonoidHom::then(const MonoidHom& outer) const {
  if (!(outer.source().ambient() == target_.ambient()))
    fail(ErrorCode::AmbientMismatch, "composition of incompatible monoid maps");
  std::vector<IntVec> imgs;
  for (const auto& y : images_) imgs.push_back(outer.apply(y));
  return MonoidHom(source_, outer.target(), imgs);
}

MonoidIdeal::MonoidIdeal(FineMonoid owner, std::vector<IntVec> generators) : owner_(std::move(owner)) {
  for (auto& g : generators) {
    g = owner_.ambient().reduce(std::move(g));
    if (!owner_.member(g)) fail(ErrorCode::NotSubmonoid, "ideal generator " + logflat::to_string(g) + " not in monoid");
  }
  generators_ = std::move(generators);
}

bool MonoidIdeal::contains(const IntVec& x) const {
  const FgAbGroup& a = owner_.ambient();
  for (const auto& g : generators_)
    if (owner_.member(a.sub(x, g))) return true;
  return false;
}

bool MonoidIdeal::same_as(const MonoidIdeal& other) const {
  for (const auto& g : generators_)
    if (!other.contains(g)) return false;
  for (const auto& g : other.generators_)
    if (!contains(g)) return false;
  return true;
}

std::optional<Face> MonoidIdeal::complement_face() const {
  std::vector<bool> mask(owner_.num_generators());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !contains(owner_.generators()[i]);
  auto f = owner_.face_of(mask);
  if (!f) return std::nullopt;
  // Every ideal generator must lie off the face.
  for (const auto& g : generators_)
    if (dot(f->functional, owner_.free_part(g)) == 0) return std::nullopt;
  return f;
}

bool MonoidIdeal::is_prime() const { return complement_face().has_value(); }

std::vector<PrimeIdeal> prime_ideals(const FineMonoid& p) {
  std::vector<PrimeIdeal> out;
  for (const auto& f : p.faces()) {
    std::vector<IntVec> gens;
    for (std::size_t i = 0; i < f.mask.size(); ++i)
      if (!f.mask[i]) gens.push_back(p.generators()[i]);
    out.push_back({MonoidIdeal(p, gens), f});
  }
  return out;
}

Sharpening units_sharpen(const FineMonoid& p) {
  const Subgroup& u = p.unit_group();
  Quotient q = cokernel(u.inclusion);
  std::vector<IntVec> gens, images;
  for (std::size_t i = 0; i < p.num_generators(); ++i) {
    IntVec y = q.projection.apply(p.generators()[i]);
    images.push_back(y);
    if (!p.unit_generators()[i]) gens.push_back(y);
  }
  FineMonoid sharp(q.group, gens);
  MonoidHom proj(p, sharp, images);
  return {u, sharp, proj};
}

Localization localize(const FineMonoid& p, const std::vector<IntVec>& s) {
  std::vector<IntVec> gens = p.generators();
  for (const auto& x : s) {
    if (!p.member(x)) fail(ErrorCode::NotSubmonoid, "localizing element " + to_string(x) + " not in monoid");
    gens.push_back(p.ambient().neg(x));
  }
  FineMonoid loc(p.ambient(), gens);
  return {loc, MonoidHom(p, loc, p.generators())};
}

Localization localize_face(const FineMonoid& p, const Face& face) {
  std::vector<IntVec> s;
  for (std::size_t i = 0; i < face.mask.size(); ++i)
    if (face.mask[i]) s.push_back(p.generators()[i]);
  return localize(p, s);
}

}  // namespace logflat
