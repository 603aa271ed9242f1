#pragma once

#include <gmpxx.h>

#include <string>

namespace logflat {

// ℚ (characteristic 0) or 𝔽ₚ. Elements are mpq values; over 𝔽ₚ they are kept in [0, p).
class Field {
 public:
  Field() = default;
  static Field rationals() { return Field(); }
  static Field prime(unsigned long p);

  unsigned long characteristic() const { return p_; }
  bool is_rational() const { return p_ == 0; }
  std::string name() const;

  mpq_class reduce(const mpq_class& a) const;
  mpq_class add(const mpq_class& a, const mpq_class& b) const;
  mpq_class sub(const mpq_class& a, const mpq_class& b) const;
  mpq_class mul(const mpq_class& a, const mpq_class& b) const;
  mpq_class neg(const mpq_class& a) const;
  mpq_class inv(const mpq_class& a) const;
  mpq_class div(const mpq_class& a, const mpq_class& b) const { return mul(a, inv(b)); }

  bool operator==(const Field& o) const { return p_ == o.p_; }

 private:
  explicit Field(unsigned long p) : p_(p) {}
  unsigned long p_ = 0;
};

}  // namespace logflat
