#include "logflat/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "logflat/error.hpp"

namespace logflat {

MonomialOrder MonomialOrder::blocks(std::vector<std::size_t> sizes) {
  MonomialOrder o;
  if (sizes.size() > 1) o.blocks_ = std::move(sizes);
  return o;
}

namespace {

int degrevlex(const Exps& a, const Exps& b, std::size_t lo, std::size_t hi) {
  long da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db ? 1 : -1;
  for (std::size_t i = hi; i-- > lo;)
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  return 0;
}

}  // namespace

int MonomialOrder::compare(const Exps& a, const Exps& b) const {
  if (blocks_.empty()) return degrevlex(a, b, 0, a.size());
  std::size_t lo = 0;
  for (std::size_t s : blocks_) {
    if (int c = degrevlex(a, b, lo, lo + s)) return c;
    lo += s;
  }
  return lo < a.size() ? degrevlex(a, b, lo, a.size()) : 0;
}

std::string MonomialOrder::name() const {
  if (blocks_.empty()) return "degrevlex";
  std::string s = "blocks(";
  for (std::size_t i = 0; i < blocks_.size(); ++i) s += (i ? "," : "") + std::to_string(blocks_[i]);
  return s + ")";
}

bool divides(const Exps& a, const Exps& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exps lcm(const Exps& a, const Exps& b) {
  Exps r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Exps exps_sub(const Exps& a, const Exps& b) {
  Exps r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Exps exps_add(const Exps& a, const Exps& b) {
  Exps r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

int degree(const Exps& e) { return std::accumulate(e.begin(), e.end(), 0); }

PolyRing::PolyRing() : d_(std::make_shared<const Data>()) {}

PolyRing::PolyRing(Field field, std::vector<std::string> vars, MonomialOrder order) {
  std::size_t total = 0;
  for (std::size_t s : order.block_sizes()) total += s;
  if (total > vars.size()) fail(ErrorCode::InvalidArgument, "monomial order blocks exceed the variable count");
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (vars[i] == vars[j]) fail(ErrorCode::InvalidArgument, "duplicate variable " + vars[i]);
  d_ = std::make_shared<const Data>(Data{field, std::move(vars), std::move(order)});
}

std::optional<std::size_t> PolyRing::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < nvars(); ++i)
    if (vars()[i] == name) return i;
  return std::nullopt;
}

Poly PolyRing::zero() const { return Poly(*this); }
Poly PolyRing::one() const { return constant(1); }
Poly PolyRing::constant(const mpq_class& c) const { return monomial(Exps(nvars(), 0), c); }

Poly PolyRing::var(std::size_t i) const {
  Exps e(nvars(), 0);
  e.at(i) = 1;
  return monomial(e);
}

Poly PolyRing::var(const std::string& name) const {
  auto i = index_of(name);
  if (!i) fail(ErrorCode::InvalidArgument, "unknown variable " + name);
  return var(*i);
}

Poly PolyRing::monomial(const Exps& e, const mpq_class& c) const { return Poly::from_terms(*this, {{e, c}}); }

PolyRing PolyRing::with_order(MonomialOrder order) const { return PolyRing(field(), vars(), std::move(order)); }
PolyRing PolyRing::with_field(Field f) const { return PolyRing(f, vars(), order()); }

bool PolyRing::operator==(const PolyRing& o) const {
  return d_ == o.d_ || (field() == o.field() && vars() == o.vars() && order() == o.order());
}

Poly Poly::from_terms(const PolyRing& ring, std::vector<Term> terms) {
  const Field& f = ring.field();
  const MonomialOrder& ord = ring.order();
  for (auto& t : terms) {
    if (t.e.size() != ring.nvars()) fail(ErrorCode::InvalidArgument, "exponent length mismatch");
    t.c = f.reduce(t.c);
  }
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) { return ord.compare(a.e, b.e) > 0; });
  Poly p(ring);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().e == t.e)
      p.terms_.back().c = f.add(p.terms_.back().c, t.c);
    else
      p.terms_.push_back(std::move(t));
    if (p.terms_.back().c == 0) p.terms_.pop_back();
  }
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && degree(terms_[0].e) == 0); }

const Term& Poly::leading() const {
  if (terms_.empty()) fail(ErrorCode::InvalidArgument, "leading term of zero");
  return terms_[0];
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, degree(t.e));
  return d;
}

mpq_class Poly::coefficient(const Exps& e) const {
  for (const auto& t : terms_)
    if (t.e == e) return t.c;
  return 0;
}

namespace {

void check_same(const Poly& a, const Poly& b) {
  if (a.ring() != b.ring()) fail(ErrorCode::InvalidArgument, "polynomials from different rings");
}

}  // namespace

Poly Poly::operator+(const Poly& o) const {
  check_same(*this, o);
  const Field& f = ring_.field();
  const MonomialOrder& ord = ring_.order();
  Poly r(ring_);
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    int c = i == terms_.size() ? -1 : j == o.terms_.size() ? 1 : ord.compare(terms_[i].e, o.terms_[j].e);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      mpq_class s = f.add(terms_[i].c, o.terms_[j].c);
      if (s != 0) r.terms_.push_back({terms_[i].e, s});
      ++i;
      ++j;
    }
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& t : r.terms_) t.c = ring_.field().neg(t.c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  check_same(*this, o);
  Poly r(ring_);
  for (const auto& t : o.terms_) r += mul_term(t.e, t.c);
  return r;
}

Poly Poly::scale(const mpq_class& c) const {
  mpq_class cc = ring_.field().reduce(c);
  if (cc == 0) return Poly(ring_);
  Poly r(*this);
  for (auto& t : r.terms_) t.c = ring_.field().mul(t.c, cc);
  return r;
}

Poly Poly::mul_term(const Exps& e, const mpq_class& c) const {
  if (c == 0) return Poly(ring_);
  Poly r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({exps_add(t.e, e), ring_.field().mul(t.c, c)});
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly r = ring_.one(), b = *this;
  for (; n; n >>= 1) {
    if (n & 1) r *= b;
    if (n > 1) b *= b;
  }
  return r;
}

Poly Poly::monic() const {
  if (terms_.empty()) return *this;
  return scale(ring_.field().inv(terms_[0].c));
}

Poly Poly::map(const PolyRing& target, const std::vector<Poly>& images) const {
  if (images.size() != ring_.nvars()) fail(ErrorCode::InvalidArgument, "ring map needs one image per variable");
  Poly r(target);
  for (const auto& t : terms_) {
    Poly m = target.constant(t.c);
    for (std::size_t i = 0; i < t.e.size(); ++i)
      if (t.e[i]) m *= images[i].pow(static_cast<unsigned>(t.e[i]));
    r += m;
  }
  return r;
}

Poly Poly::in(const PolyRing& other) const {
  if (other.vars() != ring_.vars()) fail(ErrorCode::InvalidArgument, "rings have different variables");
  return from_terms(other, terms_);
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term& t = terms_[k];
    mpq_class c = t.c;
    // Over 𝔽ₚ print the symmetric representative.
    if (!ring_.field().is_rational() && c > ring_.field().characteristic() / 2) c -= ring_.field().characteristic();
    bool neg = c < 0;
    if (neg) c = -c;
    s += k == 0 ? (neg ? "-" : "") : (neg ? " - " : " + ");
    std::string mon;
    for (std::size_t i = 0; i < t.e.size(); ++i) {
      if (t.e[i] == 0) continue;
      if (!mon.empty()) mon += "*";
      mon += ring_.vars()[i];
      if (t.e[i] > 1) mon += "^" + std::to_string(t.e[i]);
    }
    if (mon.empty())
      s += c.get_str();
    else if (c == 1)
      s += mon;
    else
      s += c.get_str() + "*" + mon;
  }
  return s;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].e != o.terms_[i].e || terms_[i].c != o.terms_[i].c) return false;
  return true;
}

Poly operator*(const mpq_class& c, const Poly& p) { return p.scale(c); }

namespace {

class Parser {
 public:
  Parser(const PolyRing& ring, const std::string& text) : ring_(ring), s_(text) {}

  Poly run() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse, what + " at column " + std::to_string(pos_ + 1) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Poly expr() {
    Poly p = term();
    for (;;) {
      if (eat('+'))
        p += term();
      else if (eat('-'))
        p -= term();
      else
        return p;
    }
  }
  Poly term() {
    Poly p = factor();
    for (;;) {
      if (eat('*')) {
        p *= factor();
      } else if (eat('/')) {
        Poly d = factor();
        if (!d.is_constant() || d.is_zero()) error("division by a non-constant");
        p = p.scale(ring_.field().inv(d.terms()[0].c));
      } else {
        return p;
      }
    }
  }
  Poly factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    Poly b = primary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected exponent");
      b = b.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return b;
  }
  Poly primary() {
    skip();
    if (eat('(')) {
      Poly p = expr();
      if (!eat(')')) error("expected ')'");
      return p;
    }
    if (pos_ >= s_.size()) error("unexpected end of input");
    std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return ring_.constant(mpq_class(mpz_class(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto i = ring_.index_of(name);
      if (!i) {
        pos_ = start;
        error("unknown variable '" + name + "'");
      }
      return ring_.var(*i);
    }
    error("unexpected character");
  }

  const PolyRing& ring_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly PolyRing::parse(const std::string& text) const { return Parser(*this, text).run(); }

PolyVec zero_vec(const PolyRing& ring, std::size_t rank) { return PolyVec(rank, ring.zero()); }

PolyVec unit_vec(const PolyRing& ring, std::size_t rank, std::size_t i) {
  PolyVec v = zero_vec(ring, rank);
  v.at(i) = ring.one();
  return v;
}

bool is_zero_vec(const PolyVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

PolyVec vec_add(const PolyVec& a, const PolyVec& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "vector rank mismatch");
  PolyVec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

PolyVec vec_sub(const PolyVec& a, const PolyVec& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "vector rank mismatch");
  PolyVec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

PolyVec vec_scale(const Poly& f, const PolyVec& v) {
  PolyVec r(v);
  for (auto& p : r) p = f * p;
  return r;
}

std::string vec_to_string(const PolyVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

}  // namespace logflat
