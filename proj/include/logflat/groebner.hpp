#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "logflat/poly.hpp"

namespace logflat {

// Reduced Gröbner basis of a submodule of R^rank over a polynomial ring; rank 1 gives ideals.
// Term order: components below `priority` dominate all others, then the ring order on all but the last
// `tail_vars` variables, then lower component first, then degrevlex on the tail variables.
class SubmoduleGB {
 public:
  SubmoduleGB(PolyRing ring, std::size_t rank, const std::vector<PolyVec>& gens, std::size_t priority = 0,
              std::size_t tail_vars = 0);

  const PolyRing& ring() const { return ring_; }
  std::size_t rank() const { return rank_; }
  std::size_t priority() const { return priority_; }
  std::vector<PolyVec> basis() const;
  std::size_t size() const { return basis_.size(); }

  PolyVec reduce(const PolyVec& v) const;
  bool contains(const PolyVec& v) const { return is_zero_vec(reduce(v)); }
  // (component, exponent) of each basis element's leading term.
  std::vector<std::pair<std::size_t, Exps>> leading_monomials() const;
  // Buchberger's criterion, recomputed from scratch.
  bool s_pairs_reduce_to_zero() const;
  // With tail variables: for each basis element, the sum of its terms sharing the leading head monomial and
  // component, as a polynomial in the tail variables only (head exponents zeroed).
  std::vector<Poly> leading_tail_coefficients() const;

  struct MTerm {
    Exps e;
    std::size_t comp;
    mpq_class c;
  };
  using MVec = std::vector<MTerm>;

 private:
  int cmp(const MTerm& a, const MTerm& b) const;
  MVec to_m(const PolyVec& v) const;
  PolyVec from_m(const MVec& v) const;
  MVec sub_mul(const MVec& f, const Exps& e, const mpq_class& c, const MVec& g) const;
  MVec reduce_m(MVec f, bool full) const;
  MVec spoly(const MVec& f, const MVec& g) const;
  void buchberger(std::vector<MVec> gens);

  PolyRing ring_;
  std::size_t rank_;
  std::size_t priority_;
  std::size_t tail_;
  std::vector<MVec> basis_;
};

SubmoduleGB ideal_gb(const PolyRing& ring, const std::vector<Poly>& gens);
// Reduced, monic, sorted by leading monomial.
std::vector<Poly> groebner_basis(const PolyRing& ring, const std::vector<Poly>& gens);

// Expresses vectors as R-combinations of fixed generators of a submodule of R^rank.
class CombinationGB {
 public:
  CombinationGB(PolyRing ring, std::size_t rank, std::vector<PolyVec> gens);
  std::optional<PolyVec> express(const PolyVec& v) const;
  // Generators of the module of relations among the generators.
  std::vector<PolyVec> syzygies() const;

 private:
  PolyRing ring_;
  std::size_t rank_;
  std::size_t m_;
  SubmoduleGB gb_;
};

std::vector<PolyVec> syzygies(const PolyRing& ring, std::size_t rank, const std::vector<PolyVec>& gens);
std::optional<PolyVec> lift(const PolyRing& ring, std::size_t rank, const std::vector<PolyVec>& gens,
                            const PolyVec& v);

// I : f and I : f^∞ for ideals given by generators.
std::vector<Poly> colon(const PolyRing& ring, const std::vector<Poly>& ideal, const Poly& f);
std::vector<Poly> saturate(const PolyRing& ring, const std::vector<Poly>& ideal, const Poly& f);
bool same_ideal(const PolyRing& ring, const std::vector<Poly>& a, const std::vector<Poly>& b);

}  // namespace logflat
