#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rbundles/dspace.hpp"
#include "rbundles/errors.hpp"
#include "rbundles/forms.hpp"
#include "rbundles/matrix.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

// Parameter matrix (z1 q1 / z2 q2): first column linear, second quadratic.
template <class K>
struct SheafMatrix {
  FormX<K> z1{1}, z2{1};
  FormX<K> q1{2}, q2{2};

  FormX<K> det() const { return z1 * q2 - z2 * q1; }

  // Coordinates in k^18: z1, z2 over (x0, x1, x2), then q1, q2 over the
  // quadratic monomial basis.
  std::array<K, 18> coords() const {
    std::array<K, 18> c;
    for (int i = 0; i < 3; ++i) c[i] = z1[i];
    for (int i = 0; i < 3; ++i) c[3 + i] = z2[i];
    for (int i = 0; i < 6; ++i) c[6 + i] = q1[i];
    for (int i = 0; i < 6; ++i) c[12 + i] = q2[i];
    return c;
  }

  static SheafMatrix from_coords(const std::array<K, 18>& c) {
    SheafMatrix m;
    for (int i = 0; i < 3; ++i) m.z1[i] = c[i];
    for (int i = 0; i < 3; ++i) m.z2[i] = c[3 + i];
    for (int i = 0; i < 6; ++i) m.q1[i] = c[6 + i];
    for (int i = 0; i < 6; ++i) m.q2[i] = c[12 + i];
    return m;
  }

  friend bool operator==(const SheafMatrix& a, const SheafMatrix& b) {
    return a.z1 == b.z1 && a.z2 == b.z2 && a.q1 == b.q1 && a.q2 == b.q2;
  }
};

// Tangent vector at a parameter matrix: same shape as the matrix itself.
template <class K>
struct Direction {
  FormX<K> beta1{1}, beta2{1};
  FormX<K> c1{2}, c2{2};

  std::array<K, 18> coords() const {
    std::array<K, 18> c;
    for (int i = 0; i < 3; ++i) c[i] = beta1[i];
    for (int i = 0; i < 3; ++i) c[3 + i] = beta2[i];
    for (int i = 0; i < 6; ++i) c[6 + i] = c1[i];
    for (int i = 0; i < 6; ++i) c[12 + i] = c2[i];
    return c;
  }

  static Direction from_coords(const std::array<K, 18>& c) {
    Direction d;
    for (int i = 0; i < 3; ++i) d.beta1[i] = c[i];
    for (int i = 0; i < 3; ++i) d.beta2[i] = c[3 + i];
    for (int i = 0; i < 6; ++i) d.c1[i] = c[6 + i];
    for (int i = 0; i < 6; ++i) d.c2[i] = c[12 + i];
    return d;
  }

  friend Direction operator+(const Direction& a, const Direction& b) {
    Direction r;
    r.beta1 = a.beta1 + b.beta1;
    r.beta2 = a.beta2 + b.beta2;
    r.c1 = a.c1 + b.c1;
    r.c2 = a.c2 + b.c2;
    return r;
  }
  friend Direction operator*(const K& s, const Direction& d) {
    Direction r;
    r.beta1 = s * d.beta1;
    r.beta2 = s * d.beta2;
    r.c1 = s * d.c1;
    r.c2 = s * d.c2;
    return r;
  }
  friend bool operator==(const Direction& a, const Direction& b) {
    return a.beta1 == b.beta1 && a.beta2 == b.beta2 && a.c1 == b.c1 && a.c2 == b.c2;
  }
};

// Element of GL2 x H acting by (g, h) . A = g A h^{-1}, where h is the
// upper-triangular (lambda, z / 0, mu) with z linear.
template <class K>
struct GroupElement {
  K g11{1}, g12{0}, g21{0}, g22{1};
  K lambda{1}, mu{1};
  FormX<K> z{1};

  K det_g() const { return g11 * g22 - g12 * g21; }

  static GroupElement identity() { return GroupElement{}; }

  bool is_identity() const {
    return g11.is_one() && g12.is_zero() && g21.is_zero() && g22.is_one() &&
           lambda.is_one() && mu.is_one() && z.is_zero();
  }
};

// Point of the projective plane, first nonzero coordinate normalized to 1.
template <class K>
class PointP2 {
 public:
  PointP2() = default;
  explicit PointP2(std::array<K, 3> c) : c_(std::move(c)) {
    int lead = -1;
    for (int i = 0; i < 3; ++i)
      if (!c_[i].is_zero()) { lead = i; break; }
    if (lead < 0) throw DomainError(ErrorCode::Precondition, "zero vector is not a projective point");
    K inv = c_[lead].inv();
    for (int i = 0; i < 3; ++i) c_[i] = inv * c_[i];
  }

  const std::array<K, 3>& coords() const { return c_; }
  const K& operator[](int i) const { return c_[i]; }

  friend bool operator==(const PointP2& a, const PointP2& b) { return a.c_ == b.c_; }
  friend bool operator!=(const PointP2& a, const PointP2& b) { return !(a == b); }

  std::string str() const {
    return "[" + scalar_str(c_[0]) + ":" + scalar_str(c_[1]) + ":" + scalar_str(c_[2]) + "]";
  }

 private:
  std::array<K, 3> c_{K(1), K(0), K(0)};
};

// Splitting coefficients of a matrix in special position (z-column x1, x2 and
// both quadrics vanishing at [1:0:0]):
//   q1 = x1*y1 + x2*y2,  y1 = a01*x0 + a11*x1 + a12*x2,  y2 = a02*x0 + a22*x2
//   q2 = x1*z1 + x2*z2,  z1 = b01*x0 + b11*x1 + b12*x2,  z2 = b02*x0 + b22*x2
// The mixed monomial x1*x2 is assigned to the first splitting form.
template <class K>
struct SpecialCoefficients {
  K a01, a02, a11, a12, a22;
  K b01, b02, b11, b12, b22;

  static SpecialCoefficients extract(const SheafMatrix<K>& m) {
    if (m.z1 != FormX<K>::variable(1) || m.z2 != FormX<K>::variable(2))
      throw DomainError(ErrorCode::NotSpecialForm, "z-column is not (x1, x2)");
    if (!m.q1.coeff({2, 0, 0}).is_zero() || !m.q2.coeff({2, 0, 0}).is_zero())
      throw DomainError(ErrorCode::NotSpecialForm, "quadrics do not vanish at [1:0:0]");
    SpecialCoefficients s;
    s.a01 = m.q1.coeff({1, 1, 0});
    s.a02 = m.q1.coeff({1, 0, 1});
    s.a11 = m.q1.coeff({0, 2, 0});
    s.a12 = m.q1.coeff({0, 1, 1});
    s.a22 = m.q1.coeff({0, 0, 2});
    s.b01 = m.q2.coeff({1, 1, 0});
    s.b02 = m.q2.coeff({1, 0, 1});
    s.b11 = m.q2.coeff({0, 2, 0});
    s.b12 = m.q2.coeff({0, 1, 1});
    s.b22 = m.q2.coeff({0, 0, 2});
    return s;
  }

  FormX<K> y1() const {
    FormX<K> f(1);
    f[0] = a01; f[1] = a11; f[2] = a12;
    return f;
  }
  FormX<K> y2() const {
    FormX<K> f(1);
    f[0] = a02; f[2] = a22;
    return f;
  }
  FormX<K> z1() const {
    FormX<K> f(1);
    f[0] = b01; f[1] = b11; f[2] = b12;
    return f;
  }
  FormX<K> z2() const {
    FormX<K> f(1);
    f[0] = b02; f[2] = b22;
    return f;
  }

  SheafMatrix<K> matrix() const {
    SheafMatrix<K> m;
    m.z1 = FormX<K>::variable(1);
    m.z2 = FormX<K>::variable(2);
    m.q1 = FormX<K>::variable(1) * y1() + FormX<K>::variable(2) * y2();
    m.q2 = FormX<K>::variable(1) * z1() + FormX<K>::variable(2) * z2();
    return m;
  }
};

// Normal coordinates of a direction at a special matrix.
template <class K>
struct NormalCoords {
  K n1, n2;

  bool is_tangent() const { return n1.is_zero() && n2.is_zero(); }
};

template <class K>
bool is_in_X(const SheafMatrix<K>& m) {
  // Independent linear entries and nonzero determinant.
  std::array<K, 3> a{m.z1[0], m.z1[1], m.z1[2]};
  std::array<K, 3> b{m.z2[0], m.z2[1], m.z2[2]};
  std::array<K, 3> cross{a[1] * b[2] - a[2] * b[1],
                         a[2] * b[0] - a[0] * b[2],
                         a[0] * b[1] - a[1] * b[0]};
  bool independent = !(cross[0].is_zero() && cross[1].is_zero() && cross[2].is_zero());
  return independent && !m.det().is_zero();
}

// Common zero of the two linear entries, as the cross product of their
// coefficient vectors.
template <class K>
PointP2<K> common_zero(const SheafMatrix<K>& m) {
  std::array<K, 3> a{m.z1[0], m.z1[1], m.z1[2]};
  std::array<K, 3> b{m.z2[0], m.z2[1], m.z2[2]};
  std::array<K, 3> cross{a[1] * b[2] - a[2] * b[1],
                         a[2] * b[0] - a[0] * b[2],
                         a[0] * b[1] - a[1] * b[0]};
  if (cross[0].is_zero() && cross[1].is_zero() && cross[2].is_zero())
    throw DomainError(ErrorCode::DependentForms, "linear entries are proportional");
  return PointP2<K>(cross);
}

template <class K>
bool is_in_X8(const SheafMatrix<K>& m) {
  if (!is_in_X(m)) throw DomainError(ErrorCode::NotInX, "matrix is not in the parameter space");
  PointP2<K> p = common_zero(m);
  return m.q1.evaluate(p.coords()).is_zero() && m.q2.evaluate(p.coords()).is_zero();
}

template <class K>
void validate_group_element(const GroupElement<K>& g) {
  if (g.det_g().is_zero())
    throw DomainError(ErrorCode::Precondition, "group element has singular GL2 part");
  if (g.lambda.is_zero() || g.mu.is_zero())
    throw DomainError(ErrorCode::Precondition, "group element has singular H part");
}

// (g, h) . A = g A h^{-1}. Right multiplication by h^{-1} rescales the first
// column by 1/lambda and replaces the second by (q - z*column1/lambda)/mu.
template <class K>
SheafMatrix<K> group_act(const GroupElement<K>& g, const SheafMatrix<K>& m) {
  validate_group_element(g);
  K il = g.lambda.inv();
  K im = g.mu.inv();
  FormX<K> c1r1 = il * m.z1;
  FormX<K> c1r2 = il * m.z2;
  FormX<K> c2r1 = im * (m.q1 - g.z * c1r1);
  FormX<K> c2r2 = im * (m.q2 - g.z * c1r2);
  SheafMatrix<K> r;
  r.z1 = g.g11 * c1r1 + g.g12 * c1r2;
  r.z2 = g.g21 * c1r1 + g.g22 * c1r2;
  r.q1 = g.g11 * c2r1 + g.g12 * c2r2;
  r.q2 = g.g21 * c2r1 + g.g22 * c2r2;
  return r;
}

// Directions transform the same way as matrices (the action is linear).
template <class K>
Direction<K> group_act(const GroupElement<K>& g, const Direction<K>& d) {
  SheafMatrix<K> m;
  m.z1 = d.beta1; m.z2 = d.beta2; m.q1 = d.c1; m.q2 = d.c2;
  SheafMatrix<K> r = group_act(g, m);
  Direction<K> out;
  out.beta1 = r.z1; out.beta2 = r.z2; out.c1 = r.q1; out.c2 = r.q2;
  return out;
}

// Result of moving a matrix into special position: the normalized matrix, the
// linear change of plane coordinates (x -> x_change . x applied inside every
// entry) and the group element applied afterwards.
template <class K>
struct SpecialForm {
  SheafMatrix<K> matrix;
  Matrix<K> x_change;
  GroupElement<K> group;

  // Replays the certificate on any matrix (or direction, by linearity).
  SheafMatrix<K> apply(const SheafMatrix<K>& m) const {
    std::array<FormX<K>, 3> images;
    for (int v = 0; v < 3; ++v) {
      FormX<K> img(1);
      for (int i = 0; i < 3; ++i) img[i] = x_change.at(v, i);
      images[v] = img;
    }
    SheafMatrix<K> moved;
    moved.z1 = m.z1.composed_with(images);
    moved.z2 = m.z2.composed_with(images);
    moved.q1 = m.q1.composed_with(images);
    moved.q2 = m.q2.composed_with(images);
    return group_act(group, moved);
  }

  Direction<K> apply(const Direction<K>& d) const {
    SheafMatrix<K> m;
    m.z1 = d.beta1; m.z2 = d.beta2; m.q1 = d.c1; m.q2 = d.c2;
    SheafMatrix<K> r = apply(m);
    Direction<K> out;
    out.beta1 = r.z1; out.beta2 = r.z2; out.c1 = r.q1; out.c2 = r.q2;
    return out;
  }
};

// Moves a singular-locus matrix into special position: common zero at
// [1:0:0], z-column (x1, x2), and the first splitting form y1 eliminated
// (a01 = a11 = a12 = 0).
template <class K>
SpecialForm<K> to_special_form(const SheafMatrix<K>& m) {
  if (!is_in_X8(m)) throw DomainError(ErrorCode::NotInX8, "quadrics do not vanish at the common zero");
  PointP2<K> p = common_zero(m);

  // Coordinate change sending [1:0:0] to p: substitution matrix with first
  // column p, completed by unit vectors away from p's leading coordinate.
  int lead = 0;
  while (p[lead].is_zero()) ++lead;
  Matrix<K> T(3, 3);
  for (int i = 0; i < 3; ++i) T.at(i, 0) = p[i];
  int next = 1;
  for (int j = 0; j < 3 && next < 3; ++j) {
    if (j == lead) continue;
    T.at(j, next) = K(1);
    ++next;
  }

  std::array<FormX<K>, 3> images;
  for (int v = 0; v < 3; ++v) {
    FormX<K> img(1);
    for (int i = 0; i < 3; ++i) img[i] = T.at(v, i);
    images[v] = img;
  }
  SheafMatrix<K> moved;
  moved.z1 = m.z1.composed_with(images);
  moved.z2 = m.z2.composed_with(images);
  moved.q1 = m.q1.composed_with(images);
  moved.q2 = m.q2.composed_with(images);

  // Row operation turning the z-column into (x1, x2). The moved linear
  // entries vanish at [1:0:0], so they lie in the span of x1, x2.
  Matrix<K> Z(2, 2);
  Z.at(0, 0) = moved.z1[1]; Z.at(0, 1) = moved.z1[2];
  Z.at(1, 0) = moved.z2[1]; Z.at(1, 1) = moved.z2[2];
  auto Zinv = Z.inverse();
  if (!Zinv) throw DomainError(ErrorCode::Internal, "z-column lost independence during normalization");

  GroupElement<K> g;
  g.g11 = Zinv->at(0, 0); g.g12 = Zinv->at(0, 1);
  g.g21 = Zinv->at(1, 0); g.g22 = Zinv->at(1, 1);
  SheafMatrix<K> rowed = group_act(g, moved);

  // Column operation subtracting y1 * (first column) from the quadrics.
  GroupElement<K> h;
  h.z = SpecialCoefficients<K>::extract(rowed).y1();
  SheafMatrix<K> done = group_act(h, rowed);

  GroupElement<K> combined;
  combined.g11 = g.g11; combined.g12 = g.g12; combined.g21 = g.g21; combined.g22 = g.g22;
  combined.z = h.z;
  SpecialForm<K> result;
  result.matrix = done;
  result.x_change = T;
  result.group = combined;
  return result;
}

// Matrix of the two linearized singular-locus equations in the 18 direction
// coordinates at a special matrix. Row 1 handles the first quadric, row 2 the
// second. A direction is tangent exactly when both rows annihilate it.
template <class K>
Matrix<K> tangent_system(const SpecialCoefficients<K>& s) {
  Matrix<K> t(2, 18);
  t.at(0, 0) = -s.a01;  // xi0, the x0 coefficient of beta1
  t.at(0, 3) = -s.a02;  // eta0, the x0 coefficient of beta2
  t.at(0, 6) = K(1);    // xi00, the x0^2 coefficient of c1
  t.at(1, 0) = -s.b01;
  t.at(1, 3) = -s.b02;
  t.at(1, 12) = K(1);   // eta00, the x0^2 coefficient of c2
  return t;
}

template <class K>
NormalCoords<K> tangent_and_normal(const SheafMatrix<K>& special, const Direction<K>& d) {
  SpecialCoefficients<K> s = SpecialCoefficients<K>::extract(special);
  K xi0 = d.beta1[0];
  K eta0 = d.beta2[0];
  K xi00 = d.c1[0];
  K eta00 = d.c2[0];
  NormalCoords<K> n;
  n.n1 = xi00 - s.a01 * xi0 - s.a02 * eta0;
  n.n2 = eta00 - s.b01 * xi0 - s.b02 * eta0;
  return n;
}

// Sparse polynomial in N variables; only used to differentiate the
// singular-locus equations symbolically, independently of the linearization
// hand-derived in tangent_system.
template <class K, int N>
class MultiPoly {
 public:
  using Expo = std::array<int, N>;

  static MultiPoly variable(int i) {
    MultiPoly p;
    Expo e{};
    e[i] = 1;
    p.c_[e] = K(1);
    return p;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    for (const auto& [e, c] : b.c_) r.add(e, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    for (const auto& [e, c] : b.c_) r.add(e, -c);
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r;
    for (const auto& [ea, ca] : a.c_)
      for (const auto& [eb, cb] : b.c_) {
        Expo e;
        for (int i = 0; i < N; ++i) e[i] = ea[i] + eb[i];
        r.add(e, ca * cb);
      }
    return r;
  }

  MultiPoly derivative(int v) const {
    MultiPoly r;
    for (const auto& [e, c] : c_) {
      if (e[v] == 0) continue;
      Expo d = e;
      d[v] -= 1;
      r.add(d, K(e[v]) * c);
    }
    return r;
  }

  K evaluate(const std::array<K, N>& pt) const {
    K total(0);
    for (const auto& [e, c] : c_) {
      K term = c;
      for (int v = 0; v < N; ++v)
        for (int k = 0; k < e[v]; ++k) term *= pt[v];
      total += term;
    }
    return total;
  }

 private:
  void add(const Expo& e, const K& c) {
    if (c.is_zero()) return;
    auto it = c_.find(e);
    if (it == c_.end()) {
      c_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  std::map<Expo, K> c_;
};

// Exact 2 x 18 Jacobian of the singular-locus equations f_i(A) = q_i(common
// zero of the linear column), computed by generic symbolic differentiation
// and evaluated at the given special matrix.
template <class K>
Matrix<K> x8_jacobian_oracle(const SheafMatrix<K>& special) {
  SpecialCoefficients<K>::extract(special);  // validates the position
  using P = MultiPoly<K, 18>;
  auto var = [](int i) { return P::variable(i); };
  // Cross product of the two linear coefficient vectors.
  std::array<P, 3> p{var(1) * var(5) - var(2) * var(4),
                     var(2) * var(3) - var(0) * var(5),
                     var(0) * var(4) - var(1) * var(3)};
  const auto& quad = monomials_deg(2);
  P f1, f2;
  for (int mi = 0; mi < 6; ++mi) {
    P prod = var(6 + mi);
    P prod2 = var(12 + mi);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < quad[mi][v]; ++k) {
        prod = prod * p[v];
        prod2 = prod2 * p[v];
      }
    f1 = f1 + prod;
    f2 = f2 + prod2;
  }
  std::array<K, 18> at = special.coords();
  Matrix<K> j(2, 18);
  for (int v = 0; v < 18; ++v) {
    j.at(0, v) = f1.derivative(v).evaluate(at);
    j.at(1, v) = f2.derivative(v).evaluate(at);
  }
  return j;
}

// Class of a matrix modulo the group action: normalized determinant (leading
// coefficient one in graded-lex order) plus the common zero.
template <class K>
struct QuotientInvariants {
  FormX<K> det_normalized{3};
  PointP2<K> p;
};

template <class K>
QuotientInvariants<K> quotient_invariants(const SheafMatrix<K>& m) {
  if (!is_in_X(m)) throw DomainError(ErrorCode::NotInX, "matrix is not in the parameter space");
  QuotientInvariants<K> q;
  FormX<K> d = m.det();
  const K* lead = d.leading_coeff();
  q.det_normalized = lead->inv() * d;
  q.p = common_zero(m);
  return q;
}

}  // namespace rbundles
