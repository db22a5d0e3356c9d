#pragma once

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rbundles/errors.hpp"
#include "rbundles/forms.hpp"
#include "rbundles/matrix.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

// Divisor class a*H + b*F on the degenerate surface.
struct DivisorClass {
  int a = 0;
  int b = 0;
};

// Monomial x0^i0 x1^i1 x2^i2 u0^j0 u1^j1 u2^j2 on P2 x P2.
struct BiMono {
  int i0 = 0, i1 = 0, i2 = 0;
  int j0 = 0, j1 = 0, j2 = 0;

  friend bool operator==(const BiMono& a, const BiMono& b) {
    return a.key() == b.key();
  }
  friend bool operator<(const BiMono& a, const BiMono& b) { return a.key() < b.key(); }

  std::array<int, 6> key() const { return {i0, i1, i2, j0, j1, j2}; }

  std::string str() const {
    std::string out;
    auto var = [&out](char v, int idx, int e) {
      if (e == 0) return;
      if (!out.empty()) out += "*";
      out += v;
      out += std::to_string(idx);
      if (e > 1) out += "^" + std::to_string(e);
    };
    var('x', 0, i0); var('x', 1, i1); var('x', 2, i2);
    var('u', 0, j0); var('u', 1, j1); var('u', 2, j2);
    return out.empty() ? "1" : out;
  }
};

// A monomial is normal when (j0 > 0 implies i1 = i2 = 0) and
// (i2 > 0 implies j1 = 0).
inline bool bimono_is_normal(const BiMono& m) {
  if (m.j0 > 0 && (m.i1 > 0 || m.i2 > 0)) return false;
  if (m.i2 > 0 && m.j1 > 0) return false;
  return true;
}

// Rewrite x1*u0 -> 0, x2*u0 -> 0, x2*u1 -> x1*u2. Returns nullopt when the
// monomial lies in the defining ideal.
inline std::optional<BiMono> bimono_normal_form(BiMono m) {
  if (m.j0 > 0 && (m.i1 > 0 || m.i2 > 0)) return std::nullopt;
  int t = std::min(m.i2, m.j1);
  m.i1 += t;
  m.i2 -= t;
  m.j1 -= t;
  m.j2 += t;
  return m;
}

// Normal monomials of bidegree (a, b), x-part then u-part in graded-lex order.
// Map nodes are stable, so returned references survive later insertions; the
// mutex makes lazy growth safe under the multi-threaded sweeps.
inline const std::vector<BiMono>& bigraded_basis(int a, int b) {
  static std::map<std::pair<int, int>, std::vector<BiMono>> cache;
  static std::mutex cache_mu;
  if (a < 0 || b < 0) throw DomainError(ErrorCode::OutOfRange, "negative bidegree");
  std::lock_guard<std::mutex> lock(cache_mu);
  auto it = cache.find({a, b});
  if (it != cache.end()) return it->second;
  std::vector<BiMono> basis;
  for (const auto& xe : monomials_deg(a))
    for (const auto& ue : monomials_deg(b)) {
      BiMono m{xe[0], xe[1], xe[2], ue[0], ue[1], ue[2]};
      if (bimono_is_normal(m)) basis.push_back(m);
    }
  return cache.emplace(std::pair<int, int>{a, b}, std::move(basis)).first->second;
}

inline long long dim_bigraded(int a, int b) {
  if (a < 0 || b < 0) return 0;
  return static_cast<long long>(bigraded_basis(a, b).size());
}

// Monomial x^i v^j on the blown-up plane, subject to x2*v1 -> x1*v2.
struct D0Mono {
  int i0 = 0, i1 = 0, i2 = 0;
  int j1 = 0, j2 = 0;

  friend bool operator==(const D0Mono& a, const D0Mono& b) { return a.key() == b.key(); }
  friend bool operator<(const D0Mono& a, const D0Mono& b) { return a.key() < b.key(); }

  std::array<int, 5> key() const { return {i0, i1, i2, j1, j2}; }

  std::string str() const {
    std::string out;
    auto var = [&out](char v, int idx, int e) {
      if (e == 0) return;
      if (!out.empty()) out += "*";
      out += v;
      out += std::to_string(idx);
      if (e > 1) out += "^" + std::to_string(e);
    };
    var('x', 0, i0); var('x', 1, i1); var('x', 2, i2);
    var('v', 1, j1); var('v', 2, j2);
    return out.empty() ? "1" : out;
  }
};

inline D0Mono d0mono_normal_form(D0Mono m) {
  int t = std::min(m.i2, m.j1);
  m.i1 += t;
  m.i2 -= t;
  m.j1 -= t;
  m.j2 += t;
  return m;
}

inline const std::vector<D0Mono>& d0_basis(int a, int b) {
  static std::map<std::pair<int, int>, std::vector<D0Mono>> cache;
  static std::mutex cache_mu;
  if (a < 0 || b < 0) throw DomainError(ErrorCode::OutOfRange, "negative bidegree");
  std::lock_guard<std::mutex> lock(cache_mu);
  auto it = cache.find({a, b});
  if (it != cache.end()) return it->second;
  std::vector<D0Mono> basis;
  for (const auto& xe : monomials_deg(a))
    for (int j1 = b; j1 >= 0; --j1) {
      D0Mono m{xe[0], xe[1], xe[2], j1, b - j1};
      if (m.i2 > 0 && m.j1 > 0) continue;
      basis.push_back(m);
    }
  return cache.emplace(std::pair<int, int>{a, b}, std::move(basis)).first->second;
}

inline long long dim_d0(int a, int b) {
  if (a < 0 || b < 0) return 0;
  return static_cast<long long>(d0_basis(a, b).size());
}

// Form of bidegree (a, b) on the blown-up plane sitting inside P2 x P1.
template <class K>
class D0Form {
 public:
  D0Form() : D0Form(0, 0) {}
  D0Form(int a, int b) : a_(a), b_(b) {}

  int deg_x() const { return a_; }
  int deg_v() const { return b_; }
  const std::map<D0Mono, K>& terms() const { return c_; }

  bool is_zero() const { return c_.empty(); }

  void add_term(const D0Mono& mono, const K& coeff) {
    if (coeff.is_zero()) return;
    D0Mono n = d0mono_normal_form(mono);
    auto it = c_.find(n);
    if (it == c_.end()) {
      c_.emplace(n, coeff);
    } else {
      it->second += coeff;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  K coeff(const D0Mono& mono) const {
    auto it = c_.find(d0mono_normal_form(mono));
    return it == c_.end() ? K(0) : it->second;
  }

  friend bool operator==(const D0Form& a, const D0Form& b) {
    return a.a_ == b.a_ && a.b_ == b.b_ && a.c_ == b.c_;
  }

  friend D0Form operator+(const D0Form& a, const D0Form& b) {
    if (a.a_ != b.a_ || a.b_ != b.b_)
      throw DomainError(ErrorCode::Precondition, "adding forms of different bidegrees");
    D0Form r = a;
    for (const auto& [m, c] : b.c_) r.add_term(m, c);
    return r;
  }
  friend D0Form operator-(const D0Form& a, const D0Form& b) {
    if (a.a_ != b.a_ || a.b_ != b.b_)
      throw DomainError(ErrorCode::Precondition, "subtracting forms of different bidegrees");
    D0Form r = a;
    for (const auto& [m, c] : b.c_) r.add_term(m, -c);
    return r;
  }
  friend D0Form operator*(const D0Form& a, const D0Form& b) {
    D0Form r(a.a_ + b.a_, a.b_ + b.b_);
    for (const auto& [ma, ca] : a.c_)
      for (const auto& [mb, cb] : b.c_) {
        D0Mono m{ma.i0 + mb.i0, ma.i1 + mb.i1, ma.i2 + mb.i2, ma.j1 + mb.j1, ma.j2 + mb.j2};
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend D0Form operator*(const K& s, const D0Form& f) {
    D0Form r(f.a_, f.b_);
    for (const auto& [m, c] : f.c_) r.add_term(m, s * c);
    return r;
  }

  // Restriction to the exceptional line: x -> (1, 0, 0), v -> u.
  BinaryForm<K> restrict_L() const {
    BinaryForm<K> r(b_);
    for (const auto& [m, c] : c_)
      if (m.i1 == 0 && m.i2 == 0) r[m.j2] += c;
    return r;
  }

  std::string str() const {
    std::string out;
    for (const auto& [m, c] : c_) {
      std::string cs = scalar_str(c);
      std::string ms = m.str();
      std::string term;
      if (ms == "1") term = cs;
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
  int a_, b_;
  std::map<D0Mono, K> c_;
};

// Element of the bigraded coordinate ring of the degenerate surface,
// stored in normal form with a fixed bidegree.
template <class K>
class BigradedForm {
 public:
  BigradedForm() : BigradedForm(0, 0) {}
  BigradedForm(int a, int b) : a_(a), b_(b) {}

  static BigradedForm from_x(const FormX<K>& f) {
    BigradedForm r(f.degree(), 0);
    const auto& monos = monomials_deg(f.degree());
    for (std::size_t i = 0; i < monos.size(); ++i)
      r.add_term(BiMono{monos[i][0], monos[i][1], monos[i][2], 0, 0, 0}, f[static_cast<int>(i)]);
    return r;
  }
  static BigradedForm from_u(const FormU<K>& f) {
    BigradedForm r(0, f.degree());
    const auto& monos = monomials_deg(f.degree());
    for (std::size_t i = 0; i < monos.size(); ++i)
      r.add_term(BiMono{0, 0, 0, monos[i][0], monos[i][1], monos[i][2]}, f[static_cast<int>(i)]);
    return r;
  }

  int deg_x() const { return a_; }
  int deg_u() const { return b_; }
  const std::map<BiMono, K>& terms() const { return c_; }

  bool is_zero() const { return c_.empty(); }

  void add_term(const BiMono& mono, const K& coeff) {
    if (coeff.is_zero()) return;
    auto n = bimono_normal_form(mono);
    if (!n) return;
    auto it = c_.find(*n);
    if (it == c_.end()) {
      c_.emplace(*n, coeff);
    } else {
      it->second += coeff;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  K coeff(const BiMono& mono) const {
    auto n = bimono_normal_form(mono);
    if (!n) return K(0);
    auto it = c_.find(*n);
    return it == c_.end() ? K(0) : it->second;
  }

  friend bool operator==(const BigradedForm& a, const BigradedForm& b) {
    return a.a_ == b.a_ && a.b_ == b.b_ && a.c_ == b.c_;
  }
  friend bool operator!=(const BigradedForm& a, const BigradedForm& b) { return !(a == b); }

  friend BigradedForm operator+(const BigradedForm& a, const BigradedForm& b) {
    if (a.a_ != b.a_ || a.b_ != b.b_)
      throw DomainError(ErrorCode::Precondition, "adding forms of different bidegrees");
    BigradedForm r = a;
    for (const auto& [m, c] : b.c_) r.add_term(m, c);
    return r;
  }
  friend BigradedForm operator-(const BigradedForm& a, const BigradedForm& b) {
    if (a.a_ != b.a_ || a.b_ != b.b_)
      throw DomainError(ErrorCode::Precondition, "subtracting forms of different bidegrees");
    BigradedForm r = a;
    for (const auto& [m, c] : b.c_) r.add_term(m, -c);
    return r;
  }
  friend BigradedForm operator*(const BigradedForm& a, const BigradedForm& b) {
    BigradedForm r(a.a_ + b.a_, a.b_ + b.b_);
    for (const auto& [ma, ca] : a.c_)
      for (const auto& [mb, cb] : b.c_) {
        BiMono m{ma.i0 + mb.i0, ma.i1 + mb.i1, ma.i2 + mb.i2,
                 ma.j0 + mb.j0, ma.j1 + mb.j1, ma.j2 + mb.j2};
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend BigradedForm operator*(const K& s, const BigradedForm& f) {
    BigradedForm r(f.a_, f.b_);
    for (const auto& [m, c] : f.c_) r.add_term(m, s * c);
    return r;
  }

  // Coefficient vector over the normal monomial basis of the bidegree.
  std::vector<K> coefficient_vector() const {
    const auto& basis = bigraded_basis(a_, b_);
    std::vector<K> v(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto it = c_.find(basis[i]);
      if (it != c_.end()) v[i] = it->second;
    }
    return v;
  }

  // Restriction to the blown-up plane: u0 -> 0, u_i -> v_i.
  D0Form<K> restrict_d0() const {
    D0Form<K> r(a_, b_);
    for (const auto& [m, c] : c_)
      if (m.j0 == 0) r.add_term(D0Mono{m.i0, m.i1, m.i2, m.j1, m.j2}, c);
    return r;
  }

  // Restriction to the embedded plane: x1, x2 -> 0, x0 -> 1.
  FormU<K> restrict_d1() const {
    FormU<K> r(b_);
    for (const auto& [m, c] : c_)
      if (m.i1 == 0 && m.i2 == 0) r.coeff({m.j0, m.j1, m.j2}) += c;
    return r;
  }

  // Restriction to the exceptional line: x -> (1, 0, 0), u0 -> 0.
  BinaryForm<K> restrict_L() const {
    BinaryForm<K> r(b_);
    for (const auto& [m, c] : c_)
      if (m.i1 == 0 && m.i2 == 0 && m.j0 == 0) r[m.j2] += c;
    return r;
  }

  // Substitution u0 -> alpha*u0, u1 -> u1 + beta*u0, u2 -> u2 + gamma*u0.
  BigradedForm substitute_u(const K& alpha, const K& beta, const K& gamma) const {
    BigradedForm r(a_, b_);
    for (const auto& [m, c] : c_) {
      // Expand (u1 + beta*u0)^j1 (u2 + gamma*u0)^j2 by binomials.
      for (int k1 = 0; k1 <= m.j1; ++k1)
        for (int k2 = 0; k2 <= m.j2; ++k2) {
          K term = c;
          long long binom1 = binom(m.j1, k1);
          long long binom2 = binom(m.j2, k2);
          term *= K(binom1 * binom2);
          for (int t = 0; t < k1; ++t) term *= beta;
          for (int t = 0; t < k2; ++t) term *= gamma;
          for (int t = 0; t < m.j0; ++t) term *= alpha;
          BiMono n{m.i0, m.i1, m.i2, m.j0 + k1 + k2, m.j1 - k1, m.j2 - k2};
          r.add_term(n, term);
        }
    }
    return r;
  }

  std::string str() const {
    std::string out;
    for (const auto& [m, c] : c_) {
      std::string cs = scalar_str(c);
      std::string ms = m.str();
      std::string term;
      if (ms == "1") term = cs;
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
  static long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }

  int a_, b_;
  std::map<BiMono, K> c_;
};

}  // namespace rbundles
