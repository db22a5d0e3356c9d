#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rbundles/errors.hpp"

namespace rbundles {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

// Exact rational scalar. Wraps boost::multiprecision::cpp_rational so the
// whole library sees one interface shared with the prime-field scalar.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) {
    if (d == 0) throw DomainError(ErrorCode::DivisionByZero, "rational with zero denominator");
    v_ = bigrat(bigint(n), bigint(d));
  }
  explicit Rational(bigrat v) : v_(std::move(v)) {}

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == 1; }

  Rational operator-() const { return Rational(bigrat(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError(ErrorCode::DivisionByZero, "rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

  Rational inv() const {
    if (is_zero()) throw DomainError(ErrorCode::DivisionByZero, "inverse of zero");
    return Rational(bigrat(1) / v_);
  }

  bigint num() const { return numerator(v_); }
  bigint den() const { return denominator(v_); }
  const bigrat& value() const { return v_; }

  // Canonical text form: "n" for integers, "n/d" otherwise.
  std::string str() const { return v_.str(); }

  // Accepts "n" and "n/d" with optional leading minus sign.
  static std::optional<Rational> try_parse(std::string_view s) {
    auto digits = [](std::string_view t) {
      if (t.empty()) return false;
      if (t[0] == '-') t.remove_prefix(1);
      if (t.empty()) return false;
      for (char c : t)
        if (c < '0' || c > '9') return false;
      return true;
    };
    auto slash = s.find('/');
    std::string_view n = s.substr(0, slash);
    std::string_view d = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!digits(n) || !digits(d)) return std::nullopt;
    bigint dv{std::string(d)};
    if (dv == 0) return std::nullopt;
    return Rational(bigrat(bigint(std::string(n)), dv));
  }

 private:
  bigrat v_;
};

// Prime-field scalar carrying its modulus. A default-constructed value or a
// small integer literal has p == 0 and behaves as a plain integer until it
// meets a value with a real modulus; templated code can then use K(0), K(1)
// without threading a field context through every call.
class Fp {
 public:
  Fp() = default;
  Fp(long long v) : v_(v) {}  // NOLINT: integer literal, reduced on contact
  Fp(long long v, long long p) : v_(v), p_(p) {
    if (p_ < 2) throw DomainError(ErrorCode::Precondition, "modulus must be at least 2");
    reduce();
  }

  long long value() const { return v_; }
  long long modulus() const { return p_; }

  bool is_zero() const { return p_ == 0 ? v_ == 0 : v_ % p_ == 0; }
  bool is_one() const { return p_ == 0 ? v_ == 1 : v_ % p_ == 1; }

  Fp operator-() const { return p_ == 0 ? Fp(-v_) : Fp(p_ - v_, p_); }

  friend Fp operator+(const Fp& a, const Fp& b) {
    long long p = merged(a.p_, b.p_);
    return p == 0 ? Fp(a.v_ + b.v_) : Fp(a.v_ + b.v_, p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    long long p = merged(a.p_, b.p_);
    return p == 0 ? Fp(a.v_ - b.v_) : Fp(a.v_ - b.v_, p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    long long p = merged(a.p_, b.p_);
    if (p == 0) return Fp(a.v_ * b.v_);
    return Fp((a.v_ % p) * (b.v_ % p), p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }

  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    long long p = merged(a.p_, b.p_);
    if (p == 0) return a.v_ == b.v_;
    return ((a.v_ % p) + p) % p == ((b.v_ % p) + p) % p;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  Fp inv() const {
    if (is_zero()) throw DomainError(ErrorCode::DivisionByZero, "inverse of zero");
    if (p_ == 0) {
      if (v_ == 1 || v_ == -1) return *this;
      throw DomainError(ErrorCode::Precondition, "inverse of integer literal without modulus");
    }
    // Extended Euclid; p_ prime, v_ already reduced and nonzero.
    long long t = 0, nt = 1, r = p_, nr = v_;
    while (nr != 0) {
      long long q = r / nr;
      t -= q * nt; std::swap(t, nt);
      r -= q * nr; std::swap(r, nr);
    }
    if (r != 1) throw DomainError(ErrorCode::Precondition, "modulus is not prime");
    return Fp(t, p_);
  }

  std::string str() const { return std::to_string(p_ == 0 ? v_ : v_ % p_); }

 private:
  void reduce() { v_ = ((v_ % p_) + p_) % p_; }

  static long long merged(long long p, long long q) {
    if (p == 0) return q;
    if (q == 0) return p;
    if (p != q) throw DomainError(ErrorCode::ModulusMismatch, "mixing moduli " + std::to_string(p) + " and " + std::to_string(q));
    return p;
  }

  long long v_ = 0;
  long long p_ = 0;
};

template <class K>
inline constexpr bool is_prime_field_v = false;
template <>
inline constexpr bool is_prime_field_v<Fp> = true;

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Embeds a machine integer into K; prime fields get the modulus attached so
// the result supports inversion on its own.
template <class K>
inline K embed_int(long long v, long long p) {
  if constexpr (is_prime_field_v<K>) {
    return p > 0 ? K(v, p) : K(v);
  } else {
    (void)p;
    return K(v);
  }
}

template <class K>
inline std::string scalar_str(const K& k) {
  return k.str();
}

}  // namespace rbundles
