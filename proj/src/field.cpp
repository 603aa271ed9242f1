#include "logflat/field.hpp"

#include "logflat/error.hpp"

namespace logflat {

Field Field::prime(unsigned long p) {
  if (p < 2 || mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30) == 0)
    fail(ErrorCode::InvalidArgument, "field characteristic " + std::to_string(p) + " is not prime");
  return Field(p);
}

std::string Field::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

mpq_class Field::reduce(const mpq_class& a) const {
  if (p_ == 0) return a;
  mpz_class p(p_), num = a.get_num() % p, den = a.get_den() % p, inv_den;
  if (mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
    fail(ErrorCode::InvalidArgument, "denominator vanishes in " + name());
  mpz_class r = num * inv_den % p;
  if (r < 0) r += p;
  return mpq_class(r);
}

mpq_class Field::add(const mpq_class& a, const mpq_class& b) const {
  if (p_ == 0) return a + b;
  mpz_class r = a.get_num() + b.get_num();
  if (r >= p_) r -= p_;
  return mpq_class(r);
}

mpq_class Field::sub(const mpq_class& a, const mpq_class& b) const {
  if (p_ == 0) return a - b;
  mpz_class r = a.get_num() - b.get_num();
  if (r < 0) r += p_;
  return mpq_class(r);
}

mpq_class Field::mul(const mpq_class& a, const mpq_class& b) const {
  if (p_ == 0) return a * b;
  return mpq_class(mpz_class(a.get_num() * b.get_num() % p_));
}

mpq_class Field::neg(const mpq_class& a) const {
  if (p_ == 0) return -a;
  return a == 0 ? a : mpq_class(mpz_class(p_ - a.get_num()));
}

mpq_class Field::inv(const mpq_class& a) const {
  if (a == 0) fail(ErrorCode::InvalidArgument, "division by zero in " + name());
  if (p_ == 0) return 1 / a;
  mpz_class r, p(p_);
  mpz_invert(r.get_mpz_t(), a.get_num().get_mpz_t(), p.get_mpz_t());
  return mpq_class(r);
}

}  // namespace logflat
