#pragma once

#include <array>
#include <string>
#include <vector>

#include "rbundles/dspace.hpp"
#include "rbundles/errors.hpp"
#include "rbundles/matrix.hpp"
#include "rbundles/moduli.hpp"
#include "rbundles/rbundle.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

// Euler characteristic of the twist (a, b) on the degenerate surface:
// (s+1)(s+2)/2 with s = a+b. Depends only on a+b.
inline long long chi_line_bundle(long long a, long long b) {
  long long s = a + b;
  return (s + 1) * (s + 2) / 2;
}

// Polynomial of degree at most 2 in the formal twist variable m, with
// rational coefficients but integer values at every integer.
class HilbertPoly {
 public:
  HilbertPoly() : c_{Rational(0), Rational(0), Rational(0)} {}
  HilbertPoly(Rational c0, Rational c1, Rational c2) : c_{std::move(c0), std::move(c1), std::move(c2)} {
    for (long long m : {0LL, 1LL, 2LL})
      if (evaluate(m).den() != 1)
        throw DomainError(ErrorCode::Precondition, "polynomial is not integer-valued");
  }

  const Rational& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  Rational evaluate(long long m) const {
    Rational mm(m);
    return c_[0] + c_[1] * mm + c_[2] * mm * mm;
  }

  friend bool operator==(const HilbertPoly& a, const HilbertPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const HilbertPoly& a, const HilbertPoly& b) { return !(a == b); }

  friend HilbertPoly operator+(const HilbertPoly& a, const HilbertPoly& b) {
    return HilbertPoly(a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2]);
  }
  friend HilbertPoly operator-(const HilbertPoly& a, const HilbertPoly& b) {
    return HilbertPoly(a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2]);
  }
  friend HilbertPoly operator*(const Rational& s, const HilbertPoly& p) {
    return HilbertPoly(s * p.c_[0], s * p.c_[1], s * p.c_[2]);
  }

  // Degree-at-most-1 polynomial through the values at m = 1..4; all four
  // samples must lie on one line.
  static HilbertPoly fit_linear(const std::array<long long, 4>& dims) {
    Rational c1 = Rational(dims[1]) - Rational(dims[0]);
    Rational c0 = Rational(dims[0]) - c1;
    HilbertPoly p(c0, c1, Rational(0));
    for (int m = 1; m <= 4; ++m)
      if (p.evaluate(m) != Rational(dims[static_cast<std::size_t>(m - 1)]))
        throw DomainError(ErrorCode::FitFailure, "sampled dimensions are not collinear");
    return p;
  }

  std::string str() const {
    std::string out;
    auto term = [&out](const Rational& c, const std::string& mono) {
      if (c.is_zero()) return;
      std::string cs = c.str();
      bool neg = cs.front() == '-';
      if (neg) cs.erase(cs.begin());
      out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
      if (mono.empty()) out += cs;
      else if (cs == "1") out += mono;
      else out += cs + "*" + mono;
    };
    term(c_[2], "m^2");
    term(c_[1], "m");
    term(c_[0], "");
    return out.empty() ? "0" : out;
  }

 private:
  std::array<Rational, 3> c_;
};

// Hilbert polynomial of the twist (a, b) with respect to H+F:
// 2m^2 + (2(a+b)+3)m + chi(a, b).
inline HilbertPoly hilbert_poly_line_bundle(long long a, long long b) {
  return HilbertPoly(Rational(chi_line_bundle(a, b)), Rational(2 * (a + b) + 3), Rational(2));
}

// chi at twist sum m + c, as a polynomial in m: (m+c+1)(m+c+2)/2.
inline HilbertPoly chi_shift_poly(long long c) {
  return HilbertPoly(Rational((c + 1) * (c + 2), 2), Rational(2 * c + 3, 2), Rational(1, 2));
}

// Dimension of the space of global sections of the twist (a, b), via the
// gluing sequence over the exceptional line: sections on each component,
// kernel of the difference of the two restriction maps.
inline long long h0_line_bundle(int a, int b) {
  if (a >= 0 && b >= 0) return dim_bigraded(a, b);

  // Sections on the blown-up plane and their restrictions to the line.
  // For b < 0 they are plane forms of degree a+b pulled back through the
  // blow-down; those vanish along the line.
  std::vector<std::vector<Rational>> rows;  // restriction in the u1^j basis of degree max(b,0)
  int lb = b >= 0 ? b : 0;
  if (b >= 0) {
    if (a >= 0)
      for (const auto& m : d0_basis(a, b)) {
        std::vector<Rational> r(static_cast<std::size_t>(lb) + 1, Rational(0));
        if (m.i1 == 0 && m.i2 == 0) r[static_cast<std::size_t>(m.j2)] = Rational(1);
        rows.push_back(std::move(r));
      }
  } else {
    long long planar = a + b >= 0 ? chi_line_bundle(a + b, 0) : 0;  // C(a+b+2, 2)
    for (long long i = 0; i < planar; ++i)
      rows.emplace_back(static_cast<std::size_t>(lb) + 1, Rational(0));
  }
  std::size_t d0_count = rows.size();

  // Sections on the embedded plane: degree-b forms in u, when b >= 0.
  if (b >= 0)
    for (const auto& e : monomials_deg(b)) {
      std::vector<Rational> r(static_cast<std::size_t>(lb) + 1, Rational(0));
      if (e[0] == 0) r[static_cast<std::size_t>(e[2])] = Rational(-1);
      rows.push_back(std::move(r));
    }

  if (rows.empty()) return 0;
  std::size_t total = rows.size();
  Matrix<Rational> m(total, static_cast<std::size_t>(lb) + 1);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j <= static_cast<std::size_t>(lb); ++j) m.at(i, j) = rows[i][j];
  (void)d0_count;
  return static_cast<long long>(total - m.rank());
}

namespace detail {

template <class K>
BigradedForm<K> bigraded_monomial(int a, int b, const BiMono& mono) {
  BigradedForm<K> f(a, b);
  f.add_term(mono, K(1));
  return f;
}

}  // namespace detail

// Hilbert function of the cokernel of Phi at the twist (c, d):
// dim S_(c-1,d) + dim S_(c,d) minus the rank of (f, g) -> (f, g) * Phi.
template <class K>
long long hilbert_function_coker(const PhiMatrix<K>& phi, int c, int d) {
  if (c < 0 || d < 0 || c > 6 || d > 6)
    throw DomainError(ErrorCode::OutOfRange, "twist outside the supported 0..6 range");
  long long t1 = dim_bigraded(c - 1, d);
  long long t2 = dim_bigraded(c, d);
  long long src = c >= 1 && d >= 1 ? dim_bigraded(c - 1, d - 1) : 0;
  if (src == 0) return t1 + t2;

  const auto& sb = bigraded_basis(c - 1, d - 1);
  const auto& tb1 = bigraded_basis(c - 1, d);
  const auto& tb2 = bigraded_basis(c, d);
  Matrix<K> m(2 * static_cast<std::size_t>(src), static_cast<std::size_t>(t1 + t2));
  for (std::size_t i = 0; i < sb.size(); ++i) {
    BigradedForm<K> f = detail::bigraded_monomial<K>(c - 1, d - 1, sb[i]);
    BigradedForm<K> r11 = f * phi.e11, r12 = f * phi.e12;
    BigradedForm<K> r21 = f * phi.e21, r22 = f * phi.e22;
    for (std::size_t j = 0; j < tb1.size(); ++j) {
      m.at(i, j) = r11.coeff(tb1[j]);
      m.at(sb.size() + i, j) = r21.coeff(tb1[j]);
    }
    for (std::size_t j = 0; j < tb2.size(); ++j) {
      m.at(i, tb1.size() + j) = r12.coeff(tb2[j]);
      m.at(sb.size() + i, tb1.size() + j) = r22.coeff(tb2[j]);
    }
  }
  return t1 + t2 - static_cast<long long>(m.rank());
}

namespace detail {

// Cokernel dimension of the restriction to the blown-up plane at (m-1,m), (m,m).
template <class K>
long long d0_coker_dim(const PhiMatrix<K>& phi, int mm) {
  D0Form<K> e11 = phi.e11.restrict_d0(), e21 = phi.e21.restrict_d0();
  D0Form<K> e12 = phi.e12.restrict_d0(), e22 = phi.e22.restrict_d0();
  long long t1 = dim_d0(mm - 1, mm);
  long long t2 = dim_d0(mm, mm);
  long long src = mm >= 1 ? dim_d0(mm - 1, mm - 1) : 0;
  if (src == 0) return t1 + t2;

  const auto& sb = d0_basis(mm - 1, mm - 1);
  const auto& tb1 = d0_basis(mm - 1, mm);
  const auto& tb2 = d0_basis(mm, mm);
  Matrix<K> m(2 * sb.size(), static_cast<std::size_t>(t1 + t2));
  for (std::size_t i = 0; i < sb.size(); ++i) {
    D0Form<K> f(mm - 1, mm - 1);
    f.add_term(sb[i], K(1));
    D0Form<K> r11 = f * e11, r12 = f * e12, r21 = f * e21, r22 = f * e22;
    for (std::size_t j = 0; j < tb1.size(); ++j) {
      m.at(i, j) = r11.coeff(tb1[j]);
      m.at(sb.size() + i, j) = r21.coeff(tb1[j]);
    }
    for (std::size_t j = 0; j < tb2.size(); ++j) {
      m.at(i, tb1.size() + j) = r12.coeff(tb2[j]);
      m.at(sb.size() + i, tb1.size() + j) = r22.coeff(tb2[j]);
    }
  }
  return t1 + t2 - static_cast<long long>(m.rank());
}

// Cokernel dimension of the restriction to the embedded plane at twist m:
// there both columns are matrices of linear u-forms.
template <class K>
long long d1_coker_dim(const PhiMatrix<K>& phi, int mm) {
  FormU<K> e11 = phi.e11.restrict_d1(), e21 = phi.e21.restrict_d1();
  FormU<K> e12 = phi.e12.restrict_d1(), e22 = phi.e22.restrict_d1();
  const auto& tb = monomials_deg(mm);
  long long t = 2 * static_cast<long long>(tb.size());
  if (mm == 0) return t;

  const auto& sb = monomials_deg(mm - 1);
  Matrix<K> m(2 * sb.size(), static_cast<std::size_t>(t));
  for (std::size_t i = 0; i < sb.size(); ++i) {
    FormU<K> f = FormU<K>::monomial(mm - 1, sb[i], K(1));
    FormU<K> r11 = f * e11, r12 = f * e12, r21 = f * e21, r22 = f * e22;
    for (std::size_t j = 0; j < tb.size(); ++j) {
      m.at(i, j) = r11.coeff(tb[j]);
      m.at(sb.size() + i, j) = r21.coeff(tb[j]);
      m.at(i, tb.size() + j) = r12.coeff(tb[j]);
      m.at(sb.size() + i, tb.size() + j) = r22.coeff(tb[j]);
    }
  }
  return t - static_cast<long long>(m.rank());
}

}  // namespace detail

// Hilbert polynomials of the cokernel restricted to the two components,
// from exact dimension counts at m = 1..4.
template <class K>
std::pair<HilbertPoly, HilbertPoly> restriction_hilbert_polys(const PhiMatrix<K>& phi) {
  std::array<long long, 4> d0{}, d1{};
  for (int m = 1; m <= 4; ++m) {
    d0[static_cast<std::size_t>(m - 1)] = detail::d0_coker_dim(phi, m);
    d1[static_cast<std::size_t>(m - 1)] = detail::d1_coker_dim(phi, m);
  }
  return {HilbertPoly::fit_linear(d0), HilbertPoly::fit_linear(d1)};
}

// One member of the pencil A + tB, with the plane cokernel dimensions of the
// perturbed matrix at twists m = 1..4.
template <class K>
struct FamilyProbe {
  K t;
  SheafMatrix<K> at;
  std::array<long long, 4> coker_dims{};
};

namespace detail {

template <class K>
SheafMatrix<K> pencil_member(const SheafMatrix<K>& a, const Direction<K>& b, const K& t) {
  SheafMatrix<K> r = a;
  r.z1 = r.z1 + t * b.beta1;
  r.z2 = r.z2 + t * b.beta2;
  r.q1 = r.q1 + t * b.c1;
  r.q2 = r.q2 + t * b.c2;
  return r;
}

// Cokernel dimension on the plane of the full matrix at twist m: target
// S_(m-1) + S_m, source two copies of S_(m-2) acting by (f,g) -> (f,g)*A.
template <class K>
long long plane_coker_dim(const SheafMatrix<K>& a, int mm) {
  const auto& tb1 = monomials_deg(mm - 1);
  const auto& tb2 = monomials_deg(mm);
  long long t = static_cast<long long>(tb1.size() + tb2.size());
  if (mm < 2) return t;

  const auto& sb = monomials_deg(mm - 2);
  Matrix<K> m(2 * sb.size(), static_cast<std::size_t>(t));
  for (std::size_t i = 0; i < sb.size(); ++i) {
    FormX<K> f = FormX<K>::monomial(mm - 2, sb[i], K(1));
    FormX<K> r11 = f * a.z1, r12 = f * a.q1, r21 = f * a.z2, r22 = f * a.q2;
    for (std::size_t j = 0; j < tb1.size(); ++j) {
      m.at(i, j) = r11.coeff(tb1[j]);
      m.at(sb.size() + i, j) = r21.coeff(tb1[j]);
    }
    for (std::size_t j = 0; j < tb2.size(); ++j) {
      m.at(i, tb1.size() + j) = r12.coeff(tb2[j]);
      m.at(sb.size() + i, tb1.size() + j) = r22.coeff(tb2[j]);
    }
  }
  return t - static_cast<long long>(m.rank());
}

}  // namespace detail

// Hilbert function of the plane cokernel of A at twist m >= 1. A sheaf in
// the moduli space has values 3m+1.
template <class K>
long long plane_hilbert_function(const SheafMatrix<K>& a, int m) {
  if (m < 1) throw DomainError(ErrorCode::OutOfRange, "twist must be at least 1");
  return detail::plane_coker_dim(a, m);
}

template <class K>
std::vector<FamilyProbe<K>> flat_family_probes(const SheafMatrix<K>& special,
                                               const Direction<K>& b,
                                               const std::vector<K>& t_samples) {
  NormalCoords<K> n = tangent_and_normal(special, b);
  if (n.is_tangent())
    throw DomainError(ErrorCode::TangentDirection, "direction is tangent to the singular locus");
  std::vector<FamilyProbe<K>> out;
  for (const K& t : t_samples) {
    if (t.is_zero()) continue;
    FamilyProbe<K> probe;
    probe.t = t;
    probe.at = detail::pencil_member(special, b, t);
    if (!is_in_X(probe.at))
      throw DomainError(ErrorCode::SampleInX8, "pencil member leaves the parameter space");
    if (is_in_X8(probe.at))
      throw DomainError(ErrorCode::SampleInX8, "pencil member stays in the singular stratum");
    for (int m = 1; m <= 4; ++m)
      probe.coker_dims[static_cast<std::size_t>(m - 1)] = detail::plane_coker_dim(probe.at, m);
    out.push_back(std::move(probe));
  }
  return out;
}

// Flatness probe: every nonzero pencil member must have plane cokernel
// dimensions 3m+1 at m = 1..4, and the central fiber must satisfy the same
// polynomial through the Euler characteristic additivity along the gluing.
template <class K>
bool flat_family_check(const SheafMatrix<K>& special, const Direction<K>& b,
                       const std::vector<K>& t_samples) {
  HilbertPoly expected(Rational(1), Rational(3), Rational(0));
  for (const auto& probe : flat_family_probes(special, b, t_samples)) {
    std::array<long long, 4> want{};
    for (int m = 1; m <= 4; ++m)
      want[static_cast<std::size_t>(m - 1)] = 3 * m + 1;
    if (probe.coker_dims != want) return false;
  }
  // Central fiber: chi(m-1,0) + chi(m,0) - 2*chi(m-1,-1) as a polynomial in m.
  HilbertPoly central =
      chi_shift_poly(-1) + chi_shift_poly(0) - Rational(2) * chi_shift_poly(-2);
  return central == expected;
}

}  // namespace rbundles
