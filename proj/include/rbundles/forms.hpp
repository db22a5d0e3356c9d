#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rbundles/errors.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

// Exponent triples of total degree d, graded-lex with var0 > var1 > var2.
// Degree 1: x0, x1, x2. Degree 2: x0^2, x0*x1, x0*x2, x1^2, x1*x2, x2^2.
// Built once up to a fixed bound (thread-safe magic static), so returned
// references stay valid for the lifetime of the program.
inline const std::vector<std::array<int, 3>>& monomials_deg(int d) {
  constexpr int kMaxDegree = 32;
  static const std::vector<std::vector<std::array<int, 3>>> cache = [] {
    std::vector<std::vector<std::array<int, 3>>> all;
    all.reserve(kMaxDegree + 1);
    for (int n = 0; n <= kMaxDegree; ++n) {
      std::vector<std::array<int, 3>> monos;
      for (int i0 = n; i0 >= 0; --i0)
        for (int i1 = n - i0; i1 >= 0; --i1) monos.push_back({i0, i1, n - i0 - i1});
      all.push_back(std::move(monos));
    }
    return all;
  }();
  if (d < 0 || d > kMaxDegree)
    throw DomainError(ErrorCode::OutOfRange, "degree outside the supported range");
  return cache[d];
}

inline int monomial_index(int d, const std::array<int, 3>& e) {
  const auto& monos = monomials_deg(d);
  for (std::size_t i = 0; i < monos.size(); ++i)
    if (monos[i] == e) return static_cast<int>(i);
  throw DomainError(ErrorCode::OutOfRange, "exponents do not have the requested degree");
}

inline int ternary_dim(int d) { return d < 0 ? 0 : (d + 1) * (d + 2) / 2; }

// Homogeneous form in three variables. `Var` only affects printing;
// 'x' forms live on the plane, 'u' forms on the second factor.
template <class K, char Var>
class TernaryForm {
 public:
  TernaryForm() : TernaryForm(0) {}
  explicit TernaryForm(int degree) : deg_(degree), c_(ternary_dim(degree)) {
    if (degree < 0) throw DomainError(ErrorCode::OutOfRange, "negative degree");
  }
  TernaryForm(int degree, std::vector<K> coeffs) : deg_(degree), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != ternary_dim(degree))
      throw DomainError(ErrorCode::Precondition, "coefficient count does not match degree");
  }

  static TernaryForm variable(int i) {
    TernaryForm f(1);
    f.c_[i] = K(1);
    return f;
  }
  static TernaryForm monomial(int degree, const std::array<int, 3>& e, K coeff) {
    TernaryForm f(degree);
    f.c_[monomial_index(degree, e)] = std::move(coeff);
    return f;
  }

  int degree() const { return deg_; }
  const std::vector<K>& coefficients() const { return c_; }
  const K& operator[](int i) const { return c_[i]; }
  K& operator[](int i) { return c_[i]; }
  const K& coeff(const std::array<int, 3>& e) const { return c_[monomial_index(deg_, e)]; }
  K& coeff(const std::array<int, 3>& e) { return c_[monomial_index(deg_, e)]; }

  bool is_zero() const {
    for (const K& c : c_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const TernaryForm& a, const TernaryForm& b) {
    return a.deg_ == b.deg_ && a.c_ == b.c_;
  }
  friend bool operator!=(const TernaryForm& a, const TernaryForm& b) { return !(a == b); }

  TernaryForm operator-() const {
    TernaryForm r(deg_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
  }
  friend TernaryForm operator+(const TernaryForm& a, const TernaryForm& b) {
    if (a.deg_ != b.deg_) throw DomainError(ErrorCode::Precondition, "adding forms of different degrees");
    TernaryForm r(a.deg_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend TernaryForm operator-(const TernaryForm& a, const TernaryForm& b) { return a + (-b); }
  friend TernaryForm operator*(const K& s, const TernaryForm& f) {
    TernaryForm r(f.deg_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = s * f.c_[i];
    return r;
  }
  friend TernaryForm operator*(const TernaryForm& a, const TernaryForm& b) {
    TernaryForm r(a.deg_ + b.deg_);
    const auto& ma = monomials_deg(a.deg_);
    const auto& mb = monomials_deg(b.deg_);
    for (std::size_t i = 0; i < ma.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < mb.size(); ++j) {
        if (b.c_[j].is_zero()) continue;
        std::array<int, 3> e{ma[i][0] + mb[j][0], ma[i][1] + mb[j][1], ma[i][2] + mb[j][2]};
        r.coeff(e) += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  K evaluate(const std::array<K, 3>& pt) const {
    const auto& monos = monomials_deg(deg_);
    K total(0);
    for (std::size_t i = 0; i < monos.size(); ++i) {
      if (c_[i].is_zero()) continue;
      K term = c_[i];
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < monos[i][v]; ++k) term *= pt[v];
      total += term;
    }
    return total;
  }

  // Substitute variables by degree-1 forms (linear coordinate change).
  TernaryForm composed_with(const std::array<TernaryForm, 3>& images) const {
    for (const auto& img : images)
      if (img.degree() != 1) throw DomainError(ErrorCode::Precondition, "composition images must be linear");
    TernaryForm r(deg_);
    const auto& monos = monomials_deg(deg_);
    for (std::size_t i = 0; i < monos.size(); ++i) {
      if (c_[i].is_zero()) continue;
      TernaryForm term(0, {c_[i]});
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < monos[i][v]; ++k) term = term * images[v];
      r = r + term;
    }
    return r;
  }

  // First nonzero coefficient in monomial order, if any.
  const K* leading_coeff() const {
    for (const K& c : c_)
      if (!c.is_zero()) return &c;
    return nullptr;
  }

  std::string str() const {
    const auto& monos = monomials_deg(deg_);
    std::string out;
    for (std::size_t i = 0; i < monos.size(); ++i) {
      if (c_[i].is_zero()) continue;
      std::string cs = scalar_str(c_[i]);
      std::string ms;
      for (int v = 0; v < 3; ++v) {
        if (monos[i][v] == 0) continue;
        if (!ms.empty()) ms += "*";
        ms += Var;
        ms += std::to_string(v);
        if (monos[i][v] > 1) ms += "^" + std::to_string(monos[i][v]);
      }
      std::string term;
      if (ms.empty()) {
        term = cs;
      } else if (cs == "1") {
        term = ms;
      } else if (cs == "-1") {
        term = "-" + ms;
      } else {
        term = cs + "*" + ms;
      }
      if (!out.empty() && term.front() != '-') out += " + ";
      else if (!out.empty()) { out += " - "; term.erase(term.begin()); }
      out += term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  int deg_;
  std::vector<K> c_;
};

template <class K>
using FormX = TernaryForm<K, 'x'>;
template <class K>
using FormU = TernaryForm<K, 'u'>;

// Binary form in u1, u2 (sections of a line bundle on the line L).
// Basis u1^d, u1^(d-1)*u2, ..., u2^d.
template <class K>
class BinaryForm {
 public:
  BinaryForm() : BinaryForm(0) {}
  explicit BinaryForm(int degree) : deg_(degree), c_(degree + 1) {
    if (degree < 0) throw DomainError(ErrorCode::OutOfRange, "negative degree");
  }
  BinaryForm(int degree, std::vector<K> coeffs) : deg_(degree), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != degree + 1)
      throw DomainError(ErrorCode::Precondition, "coefficient count does not match degree");
  }

  int degree() const { return deg_; }
  const std::vector<K>& coefficients() const { return c_; }
  const K& operator[](int i) const { return c_[i]; }
  K& operator[](int i) { return c_[i]; }

  bool is_zero() const {
    for (const K& c : c_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
    return a.deg_ == b.deg_ && a.c_ == b.c_;
  }
  friend bool operator!=(const BinaryForm& a, const BinaryForm& b) { return !(a == b); }

  friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) {
    if (a.deg_ != b.deg_) throw DomainError(ErrorCode::Precondition, "subtracting forms of different degrees");
    BinaryForm r(a.deg_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }

  // Discriminant of a binary quadric r*u1^2 + s*u1*u2 + t*u2^2.
  K discriminant() const {
    if (deg_ != 2) throw DomainError(ErrorCode::Precondition, "discriminant requires degree 2");
    return c_[1] * c_[1] - K(4) * c_[0] * c_[2];
  }

  std::string str() const {
    std::string out;
    for (int i = 0; i <= deg_; ++i) {
      if (c_[i].is_zero()) continue;
      std::string cs = scalar_str(c_[i]);
      std::string ms;
      if (deg_ - i > 0) ms += "u1" + std::string(deg_ - i > 1 ? "^" + std::to_string(deg_ - i) : "");
      if (i > 0) {
        if (!ms.empty()) ms += "*";
        ms += "u2" + std::string(i > 1 ? "^" + std::to_string(i) : "");
      }
      std::string term;
      if (ms.empty()) term = cs;
      else if (cs == "1") term = ms;
      else if (cs == "-1") term = "-" + ms;
      else term = cs + "*" + ms;
      if (!out.empty() && term.front() != '-') out += " + ";
      else if (!out.empty()) { out += " - "; term.erase(term.begin()); }
      out += term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  int deg_;
  std::vector<K> c_;
};

}  // namespace rbundles
