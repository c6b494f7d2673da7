#include "circfactor/scalars.hh"

#include <map>
#include <memory>
#include <mutex>

namespace circfactor {

std::string to_string(const Scalar& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Scalar make_scalar(const Integer& num, const Integer& den) {
  if (den == 0) throw ZeroInverse("zero denominator");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

Scalar parse_scalar(std::string_view text) {
  auto parse_int = [&](std::string_view s, bool allow_sign) {
    if (s.empty()) throw ParseError("empty number in '" + std::string(text) + "'");
    size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) throw ParseError("bad number '" + std::string(text) + "'");
    for (size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') throw ParseError("bad number '" + std::string(text) + "'");
    std::string body(s[0] == '+' ? s.substr(1) : s);
    return Integer(body, 10);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Scalar(parse_int(text, true));
  Integer num = parse_int(text.substr(0, slash), true);
  Integer den = parse_int(text.substr(slash + 1), false);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return make_scalar(num, den);
}

namespace qpoly {

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

QPoly scale(const QPoly& a, const Scalar& c) {
  if (c == 0) return {};
  QPoly r(a);
  for (auto& x : r) x *= c;
  return r;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) throw ZeroInverse("polynomial division by zero");
  QPoly r(a);
  trim(r);
  int db = degree(b);
  if (degree(r) < db) return {{}, r};
  QPoly q(r.size() - b.size() + 1);
  Scalar inv = 1 / b.back();
  for (int i = degree(r); i >= db; --i) {
    if (r[i] == 0) continue;
    Scalar c = r[i] * inv;
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= c * b[j];
  }
  trim(q);
  trim(r);
  return {q, r};
}

QPoly rem(const QPoly& a, const QPoly& b) { return divmod(a, b).second; }

QPoly monic(const QPoly& a) {
  if (a.empty()) return a;
  return scale(a, 1 / a.back());
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x(a), y(b);
  trim(x);
  trim(y);
  while (!y.empty()) {
    QPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

QPoly derivative(const QPoly& a) {
  if (a.size() <= 1) return {};
  QPoly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<long>(i);
  trim(r);
  return r;
}

Scalar eval(const QPoly& a, const Scalar& x) {
  Scalar acc = 0;
  for (size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
  return acc;
}

QPoly pow(const QPoly& a, int e) {
  QPoly r{Scalar(1)};
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

std::string to_string(const QPoly& p, const std::string& var) {
  if (p.empty()) return "0";
  std::string out;
  for (int i = degree(p); i >= 0; --i) {
    if (p[i] == 0) continue;
    Scalar c = p[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (i == 0) {
      out += circfactor::to_string(c);
    } else {
      if (c != 1) out += circfactor::to_string(c) + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

bool lex_less(const QPoly& a, const QPoly& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace qpoly

const NumberField* number_field(const QPoly& modulus) {
  QPoly m(modulus);
  qpoly::trim(m);
  if (m.size() < 2) throw DegenerateInput("number field modulus must have degree >= 1");
  if (m.back() != 1) throw NotMonic("number field modulus must be monic");
  static std::mutex mu;
  static std::map<QPoly, std::unique_ptr<NumberField>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(m);
  if (it != registry.end()) return it->second.get();
  auto field = std::make_unique<NumberField>();
  field->modulus = m;
  const NumberField* out = field.get();
  registry.emplace(m, std::move(field));
  return out;
}

const NumberField* NumberFieldElement::join(const NumberField* a, const NumberField* b) {
  if (a == nullptr) return b;
  if (b == nullptr || a == b) return a;
  throw FieldMismatch("operands live in different number fields");
}

NumberFieldElement NumberFieldElement::in(const NumberField* K, QPoly residue) {
  NumberFieldElement e;
  e.K_ = K;
  qpoly::trim(residue);
  if (K != nullptr && qpoly::degree(residue) >= K->degree()) residue = qpoly::rem(residue, K->modulus);
  if (K == nullptr && residue.size() > 1) throw FieldMismatch("non-constant residue without a field");
  if (!residue.empty()) {
    e.c0_ = residue[0];
    e.hi_.assign(residue.begin() + 1, residue.end());
  }
  return e;
}

NumberFieldElement NumberFieldElement::generator(const NumberField* K) {
  return in(K, QPoly{Scalar(0), Scalar(1)});
}

QPoly NumberFieldElement::residue() const {
  int d = K_ ? K_->degree() : 1;
  QPoly r(d);
  r[0] = c0_;
  for (size_t i = 0; i < hi_.size(); ++i) r[i + 1] = hi_[i];
  return r;
}

Scalar NumberFieldElement::coefficient(int r) const {
  if (r == 0) return c0_;
  if (r - 1 < static_cast<int>(hi_.size())) return hi_[r - 1];
  return 0;
}

void NumberFieldElement::normalize() { qpoly::trim(hi_); }

NumberFieldElement NumberFieldElement::operator-() const {
  NumberFieldElement r(*this);
  r.c0_ = -r.c0_;
  for (auto& c : r.hi_) c = -c;
  return r;
}

NumberFieldElement& NumberFieldElement::operator+=(const NumberFieldElement& b) {
  K_ = join(K_, b.K_);
  c0_ += b.c0_;
  if (!b.hi_.empty()) {
    if (hi_.size() < b.hi_.size()) hi_.resize(b.hi_.size());
    for (size_t i = 0; i < b.hi_.size(); ++i) hi_[i] += b.hi_[i];
    normalize();
  }
  return *this;
}

NumberFieldElement& NumberFieldElement::operator-=(const NumberFieldElement& b) {
  K_ = join(K_, b.K_);
  c0_ -= b.c0_;
  if (!b.hi_.empty()) {
    if (hi_.size() < b.hi_.size()) hi_.resize(b.hi_.size());
    for (size_t i = 0; i < b.hi_.size(); ++i) hi_[i] -= b.hi_[i];
    normalize();
  }
  return *this;
}

NumberFieldElement& NumberFieldElement::operator*=(const NumberFieldElement& b) {
  const NumberField* K = join(K_, b.K_);
  K_ = K;
  if (b.hi_.empty()) {
    if (b.c0_ == 0) {
      c0_ = 0;
      hi_.clear();
      return *this;
    }
    c0_ *= b.c0_;
    for (auto& c : hi_) c *= b.c0_;
    return *this;
  }
  if (hi_.empty()) {
    Scalar s = c0_;
    hi_ = b.hi_;
    c0_ = b.c0_ * s;
    for (auto& c : hi_) c *= s;
    normalize();
    return *this;
  }
  QPoly prod = qpoly::mul(residue(), b.residue());
  *this = in(K, std::move(prod));
  return *this;
}

NumberFieldElement NumberFieldElement::inverse() const {
  if (is_zero()) throw ZeroInverse("inverse of zero");
  if (hi_.empty()) {
    NumberFieldElement r(1 / c0_);
    r.K_ = K_;
    return r;
  }
  // Extended Euclid: s*a + t*H = g with g a nonzero constant since H is
  // irreducible and a is nonzero mod H.
  QPoly r0 = K_->modulus, r1 = residue();
  qpoly::trim(r1);
  QPoly s0, s1{Scalar(1)};
  while (qpoly::degree(r1) > 0) {
    auto [q, r] = qpoly::divmod(r0, r1);
    QPoly s = qpoly::sub(s0, qpoly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r1.empty()) throw ZeroInverse("element shares a factor with the modulus");
  return in(K_, qpoly::scale(s1, 1 / r1[0]));
}

std::string NumberFieldElement::to_string() const {
  if (K_ == nullptr) return circfactor::to_string(c0_);
  std::string out;
  QPoly r = residue();
  for (size_t i = 0; i < r.size(); ++i) {
    if (i) out += ",";
    out += circfactor::to_string(r[i]);
  }
  return out;
}

NumberFieldElement NumberFieldElement::with_field(const NumberField* K) const {
  NumberFieldElement r(*this);
  if (K == nullptr) {
    if (!hi_.empty()) throw FieldMismatch("cannot view a field element as rational");
    r.K_ = nullptr;
    return r;
  }
  r.K_ = join(K_, K);
  return r;
}

NumberFieldElement nf_reduce(const QPoly& p, const NumberField* K) {
  return NumberFieldElement::in(K, p);
}

NumberFieldElement nf_inverse(const NumberFieldElement& a) { return a.inverse(); }

}  // namespace circfactor
