#include "logflat/groebner.hpp"

#include <algorithm>
#include <set>

#include "logflat/error.hpp"

namespace logflat {

SubmoduleGB::SubmoduleGB(PolyRing ring, std::size_t rank, const std::vector<PolyVec>& gens, std::size_t priority,
                         std::size_t tail_vars)
    : ring_(std::move(ring)), rank_(rank), priority_(priority), tail_(tail_vars) {
  if (tail_ > ring_.nvars()) fail(ErrorCode::InvalidArgument, "more tail variables than variables");
  std::vector<MVec> m;
  for (const auto& g : gens) {
    if (g.size() != rank_) fail(ErrorCode::InvalidArgument, "generator rank mismatch");
    for (const auto& p : g)
      if (p.ring() != ring_) fail(ErrorCode::InvalidArgument, "generator from another ring");
    MVec v = to_m(g);
    if (!v.empty()) m.push_back(std::move(v));
  }
  buchberger(std::move(m));
}

int SubmoduleGB::cmp(const MTerm& a, const MTerm& b) const {
  bool pa = a.comp < priority_, pb = b.comp < priority_;
  if (pa != pb) return pa ? 1 : -1;
  if (tail_ == 0) {
    if (int c = ring_.order().compare(a.e, b.e)) return c;
    if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
    return 0;
  }
  const auto cut = static_cast<std::ptrdiff_t>(a.e.size() - tail_);
  if (int c = ring_.order().compare(Exps(a.e.begin(), a.e.begin() + cut), Exps(b.e.begin(), b.e.begin() + cut)))
    return c;
  if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
  return MonomialOrder().compare(Exps(a.e.begin() + cut, a.e.end()), Exps(b.e.begin() + cut, b.e.end()));
}

SubmoduleGB::MVec SubmoduleGB::to_m(const PolyVec& v) const {
  MVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (const auto& t : v[i].terms()) out.push_back({t.e, i, t.c});
  std::sort(out.begin(), out.end(), [&](const MTerm& a, const MTerm& b) { return cmp(a, b) > 0; });
  return out;
}

PolyVec SubmoduleGB::from_m(const MVec& v) const {
  std::vector<std::vector<Term>> parts(rank_);
  for (const auto& t : v) parts[t.comp].push_back({t.e, t.c});
  PolyVec out;
  for (auto& p : parts) out.push_back(Poly::from_terms(ring_, std::move(p)));
  return out;
}

SubmoduleGB::MVec SubmoduleGB::sub_mul(const MVec& f, const Exps& e, const mpq_class& c, const MVec& g) const {
  const Field& fld = ring_.field();
  MVec out;
  out.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  while (i < f.size() || j < g.size()) {
    MTerm gj;
    if (j < g.size()) gj = {exps_add(g[j].e, e), g[j].comp, fld.neg(fld.mul(g[j].c, c))};
    int k = i == f.size() ? -1 : j == g.size() ? 1 : cmp(f[i], gj);
    if (k > 0) {
      out.push_back(f[i++]);
    } else if (k < 0) {
      out.push_back(std::move(gj));
      ++j;
    } else {
      mpq_class s = fld.add(f[i].c, gj.c);
      if (s != 0) out.push_back({f[i].e, f[i].comp, s});
      ++i;
      ++j;
    }
  }
  return out;
}

SubmoduleGB::MVec SubmoduleGB::reduce_m(MVec f, bool full) const {
  const Field& fld = ring_.field();
  MVec done;
  while (!f.empty()) {
    const MTerm& lt = f[0];
    const MVec* div = nullptr;
    for (const auto& g : basis_)
      if (g[0].comp == lt.comp && divides(g[0].e, lt.e)) {
        div = &g;
        break;
      }
    if (div) {
      f = sub_mul(f, exps_sub(lt.e, (*div)[0].e), fld.div(lt.c, (*div)[0].c), *div);
    } else if (!full) {
      break;
    } else {
      done.push_back(std::move(f[0]));
      f.erase(f.begin());
    }
  }
  done.insert(done.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
  return done;
}

SubmoduleGB::MVec SubmoduleGB::spoly(const MVec& f, const MVec& g) const {
  const Field& fld = ring_.field();
  Exps l = lcm(f[0].e, g[0].e);
  MVec lf;
  Exps ef = exps_sub(l, f[0].e);
  mpq_class cf = fld.inv(f[0].c);
  for (const auto& t : f) lf.push_back({exps_add(t.e, ef), t.comp, fld.mul(t.c, cf)});
  return sub_mul(lf, exps_sub(l, g[0].e), fld.inv(g[0].c), g);
}

namespace {

struct Pair {
  std::size_t i, j;
  Exps lcm;
  int deg;
};

}  // namespace

void SubmoduleGB::buchberger(std::vector<MVec> gens) {
  const Field& fld = ring_.field();
  auto monic = [&](MVec& v) {
    mpq_class inv = fld.inv(v[0].c);
    for (auto& t : v) t.c = fld.mul(t.c, inv);
  };
  basis_.clear();
  std::vector<Pair> pairs;
  std::set<std::pair<std::size_t, std::size_t>> pending;
  auto add = [&](MVec v) {
    monic(v);
    std::size_t n = basis_.size();
    for (std::size_t k = 0; k < n; ++k)
      if (basis_[k][0].comp == v[0].comp) {
        Exps l = lcm(basis_[k][0].e, v[0].e);
        int d = degree(l);
        pairs.push_back({k, n, std::move(l), d});
        pending.insert({k, n});
      }
    basis_.push_back(std::move(v));
  };
  for (auto& g : gens) {
    MVec r = reduce_m(std::move(g), false);
    if (!r.empty()) add(std::move(r));
  }
  auto is_pending = [&](std::size_t a, std::size_t b) { return pending.count({std::min(a, b), std::max(a, b)}) > 0; };
  while (!pairs.empty()) {
    auto it = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return std::tie(a.deg, a.j, a.i) < std::tie(b.deg, b.j, b.i);
    });
    Pair p = std::move(*it);
    pairs.erase(it);
    pending.erase({p.i, p.j});
    bool chain = false;
    for (std::size_t k = 0; k < basis_.size() && !chain; ++k)
      if (k != p.i && k != p.j && basis_[k][0].comp == basis_[p.i][0].comp && divides(basis_[k][0].e, p.lcm) &&
          !is_pending(p.i, k) && !is_pending(p.j, k))
        chain = true;
    if (chain) continue;
    MVec r = reduce_m(spoly(basis_[p.i], basis_[p.j]), false);
    if (!r.empty()) add(std::move(r));
  }
  // Minimalize, then tail-reduce.
  std::vector<MVec> minimal;
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < basis_.size() && !redundant; ++b) {
      if (a == b || basis_[a][0].comp != basis_[b][0].comp || !divides(basis_[b][0].e, basis_[a][0].e)) continue;
      redundant = basis_[a][0].e != basis_[b][0].e || b < a;
    }
    if (!redundant) minimal.push_back(basis_[a]);
  }
  basis_ = std::move(minimal);
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    MVec head{basis_[a][0]};
    MVec tail(basis_[a].begin() + 1, basis_[a].end());
    MVec reduced = reduce_m(std::move(tail), true);
    head.insert(head.end(), reduced.begin(), reduced.end());
    basis_[a] = std::move(head);
  }
  std::sort(basis_.begin(), basis_.end(), [&](const MVec& x, const MVec& y) { return cmp(x[0], y[0]) < 0; });
}

std::vector<PolyVec> SubmoduleGB::basis() const {
  std::vector<PolyVec> out;
  for (const auto& b : basis_) out.push_back(from_m(b));
  return out;
}

PolyVec SubmoduleGB::reduce(const PolyVec& v) const {
  if (v.size() != rank_) fail(ErrorCode::InvalidArgument, "vector rank mismatch in reduction");
  return from_m(reduce_m(to_m(v), true));
}

std::vector<std::pair<std::size_t, Exps>> SubmoduleGB::leading_monomials() const {
  std::vector<std::pair<std::size_t, Exps>> out;
  for (const auto& b : basis_) out.push_back({b[0].comp, b[0].e});
  return out;
}

std::vector<Poly> SubmoduleGB::leading_tail_coefficients() const {
  const std::size_t head = ring_.nvars() - tail_;
  std::vector<Poly> out;
  for (const auto& b : basis_) {
    std::vector<Term> terms;
    for (const auto& t : b) {
      if (t.comp != b[0].comp || !std::equal(t.e.begin(), t.e.begin() + static_cast<std::ptrdiff_t>(head), b[0].e.begin()))
        continue;
      Exps e = t.e;
      std::fill(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(head), 0);
      terms.push_back({e, t.c});
    }
    out.push_back(Poly::from_terms(ring_, terms));
  }
  return out;
}

bool SubmoduleGB::s_pairs_reduce_to_zero() const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = i + 1; j < basis_.size(); ++j)
      if (basis_[i][0].comp == basis_[j][0].comp && !reduce_m(spoly(basis_[i], basis_[j]), false).empty())
        return false;
  return true;
}

SubmoduleGB ideal_gb(const PolyRing& ring, const std::vector<Poly>& gens) {
  std::vector<PolyVec> v;
  for (const auto& g : gens) v.push_back({g});
  return SubmoduleGB(ring, 1, v);
}

std::vector<Poly> groebner_basis(const PolyRing& ring, const std::vector<Poly>& gens) {
  std::vector<Poly> out;
  for (const auto& b : ideal_gb(ring, gens).basis()) out.push_back(b[0]);
  return out;
}

namespace {

std::vector<PolyVec> tagged(const PolyRing& ring, std::size_t rank, const std::vector<PolyVec>& gens) {
  std::vector<PolyVec> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != rank) fail(ErrorCode::InvalidArgument, "generator rank mismatch");
    PolyVec v = gens[i];
    PolyVec tag = unit_vec(ring, gens.size(), i);
    v.insert(v.end(), tag.begin(), tag.end());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

CombinationGB::CombinationGB(PolyRing ring, std::size_t rank, std::vector<PolyVec> gens)
    : ring_(ring), rank_(rank), m_(gens.size()), gb_(ring, rank + gens.size(), tagged(ring, rank, gens), rank) {}

std::optional<PolyVec> CombinationGB::express(const PolyVec& v) const {
  if (v.size() != rank_) fail(ErrorCode::InvalidArgument, "vector rank mismatch");
  PolyVec x = v;
  for (std::size_t i = 0; i < m_; ++i) x.push_back(ring_.zero());
  PolyVec r = gb_.reduce(x);
  for (std::size_t i = 0; i < rank_; ++i)
    if (!r[i].is_zero()) return std::nullopt;
  PolyVec c;
  for (std::size_t i = 0; i < m_; ++i) c.push_back(-r[rank_ + i]);
  return c;
}

std::vector<PolyVec> CombinationGB::syzygies() const {
  std::vector<PolyVec> out;
  for (const auto& b : gb_.basis()) {
    bool top_zero = true;
    for (std::size_t i = 0; i < rank_; ++i) top_zero = top_zero && b[i].is_zero();
    if (top_zero) out.push_back(PolyVec(b.begin() + rank_, b.end()));
  }
  return out;
}

std::vector<PolyVec> syzygies(const PolyRing& ring, std::size_t rank, const std::vector<PolyVec>& gens) {
  return CombinationGB(ring, rank, gens).syzygies();
}

std::optional<PolyVec> lift(const PolyRing& ring, std::size_t rank, const std::vector<PolyVec>& gens,
                            const PolyVec& v) {
  return CombinationGB(ring, rank, gens).express(v);
}

std::vector<Poly> colon(const PolyRing& ring, const std::vector<Poly>& ideal, const Poly& f) {
  std::vector<PolyVec> gens{{f}};
  for (const auto& g : ideal) gens.push_back({g});
  std::vector<Poly> out;
  for (const auto& s : syzygies(ring, 1, gens)) out.push_back(s[0]);
  return groebner_basis(ring, out);
}

std::vector<Poly> saturate(const PolyRing& ring, const std::vector<Poly>& ideal, const Poly& f) {
  std::vector<Poly> cur = groebner_basis(ring, ideal);
  for (;;) {
    std::vector<Poly> next = colon(ring, cur, f);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

bool same_ideal(const PolyRing& ring, const std::vector<Poly>& a, const std::vector<Poly>& b) {
  return groebner_basis(ring, a) == groebner_basis(ring, b);
}

}  // namespace logflat
