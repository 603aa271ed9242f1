#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logflat/field.hpp"

namespace logflat {

using Exps = std::vector<int>;

// Product of degree-reverse-lexicographic orders on consecutive variable blocks; earlier blocks dominate.
// A single block is plain degrevlex.
class MonomialOrder {
 public:
  MonomialOrder() = default;
  static MonomialOrder blocks(std::vector<std::size_t> sizes);

  int compare(const Exps& a, const Exps& b) const;
  const std::vector<std::size_t>& block_sizes() const { return blocks_; }
  std::string name() const;
  bool operator==(const MonomialOrder& o) const { return blocks_ == o.blocks_; }

 private:
  std::vector<std::size_t> blocks_;  // empty means one block
};

struct Term {
  Exps e;
  mpq_class c;
};

bool divides(const Exps& a, const Exps& b);
Exps lcm(const Exps& a, const Exps& b);
Exps exps_sub(const Exps& a, const Exps& b);
Exps exps_add(const Exps& a, const Exps& b);
int degree(const Exps& e);

class Poly;

class PolyRing {
 public:
  PolyRing();
  PolyRing(Field field, std::vector<std::string> vars, MonomialOrder order = {});

  const Field& field() const { return d_->field; }
  const std::vector<std::string>& vars() const { return d_->vars; }
  std::size_t nvars() const { return d_->vars.size(); }
  const MonomialOrder& order() const { return d_->order; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  Poly zero() const;
  Poly one() const;
  Poly constant(const mpq_class& c) const;
  Poly var(std::size_t i) const;
  Poly var(const std::string& name) const;
  Poly monomial(const Exps& e, const mpq_class& c = 1) const;
  Poly parse(const std::string& text) const;

  PolyRing with_order(MonomialOrder order) const;
  PolyRing with_field(Field field) const;
  bool operator==(const PolyRing& o) const;
  bool operator!=(const PolyRing& o) const { return !(*this == o); }

 private:
  struct Data {
    Field field;
    std::vector<std::string> vars;
    MonomialOrder order;
  };
  std::shared_ptr<const Data> d_;
};

// Terms are kept sorted in strictly decreasing monomial order with nonzero reduced coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(PolyRing ring) : ring_(std::move(ring)) {}
  static Poly from_terms(const PolyRing& ring, std::vector<Term> terms);

  const PolyRing& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const Term& leading() const;
  int total_degree() const;
  mpq_class coefficient(const Exps& e) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scale(const mpq_class& c) const;
  Poly mul_term(const Exps& e, const mpq_class& c) const;
  Poly pow(unsigned n) const;
  Poly monic() const;

  // Ring homomorphism sending variable i to images[i].
  Poly map(const PolyRing& target, const std::vector<Poly>& images) const;
  // Same polynomial in a ring with the same variables (possibly another order or field).
  Poly in(const PolyRing& other) const;

  std::string to_string() const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

 private:
  PolyRing ring_;
  std::vector<Term> terms_;
};

Poly operator*(const mpq_class& c, const Poly& p);

using PolyVec = std::vector<Poly>;  // an element of a free module R^r

PolyVec zero_vec(const PolyRing& ring, std::size_t rank);
PolyVec unit_vec(const PolyRing& ring, std::size_t rank, std::size_t i);
bool is_zero_vec(const PolyVec& v);
PolyVec vec_add(const PolyVec& a, const PolyVec& b);
PolyVec vec_sub(const PolyVec& a, const PolyVec& b);
PolyVec vec_scale(const Poly& f, const PolyVec& v);
std::string vec_to_string(const PolyVec& v);

}  // namespace logflat
