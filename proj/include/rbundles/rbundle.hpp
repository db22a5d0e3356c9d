#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbundles/dspace.hpp"
#include "rbundles/errors.hpp"
#include "rbundles/forms.hpp"
#include "rbundles/matrix.hpp"
#include "rbundles/moduli.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

// Resolution matrix of the sheaf attached to a direction at a special
// matrix. First column of bidegree (0,1), second of bidegree (1,1).
template <class K>
struct PhiMatrix {
  BigradedForm<K> e11{0, 1}, e21{0, 1};
  BigradedForm<K> e12{1, 1}, e22{1, 1};

  K xi0() const { return e11.coeff(BiMono{0, 0, 0, 1, 0, 0}); }
  K eta0() const { return e21.coeff(BiMono{0, 0, 0, 1, 0, 0}); }
};

namespace detail {

template <class K>
PhiMatrix<K> build_phi_impl(const SpecialCoefficients<K>& s, const Direction<K>& d) {
  K xi0 = d.beta1[0];
  K eta0 = d.beta2[0];
  K xi00 = d.c1[0];
  K eta00 = d.c2[0];

  auto u = [](int i) { return BigradedForm<K>::from_u(FormU<K>::variable(i)); };
  BigradedForm<K> x0u0(1, 1);
  x0u0.add_term(BiMono{1, 0, 0, 1, 0, 0}, K(1));

  PhiMatrix<K> phi;
  phi.e11 = u(1) + xi0 * u(0);
  phi.e21 = u(2) + eta0 * u(0);
  phi.e12 = u(1) * BigradedForm<K>::from_x(s.y1()) + u(2) * BigradedForm<K>::from_x(s.y2()) + xi00 * x0u0;
  phi.e22 = u(1) * BigradedForm<K>::from_x(s.z1()) + u(2) * BigradedForm<K>::from_x(s.z2()) + eta00 * x0u0;
  return phi;
}

}  // namespace detail

// Resolution matrix without the normality check; the finite-field sweeps use
// it to probe degenerate directions as well.
template <class K>
PhiMatrix<K> build_phi_unchecked(const SheafMatrix<K>& special, const Direction<K>& d) {
  return detail::build_phi_impl(SpecialCoefficients<K>::extract(special), d);
}

template <class K>
PhiMatrix<K> build_phi(const SheafMatrix<K>& special, const Direction<K>& d) {
  SpecialCoefficients<K> s = SpecialCoefficients<K>::extract(special);
  NormalCoords<K> n = tangent_and_normal(special, d);
  if (n.is_tangent())
    throw DomainError(ErrorCode::TangentDirection, "direction is tangent to the singular locus");
  return detail::build_phi_impl(s, d);
}

enum class BoundaryClass { TwoPoints, OnePoint, WholeLine };
enum class ConicClass { Smooth, TwoLines, DoubleLine };

inline const char* boundary_class_name(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::TwoPoints: return "TwoPoints";
    case BoundaryClass::OnePoint: return "OnePoint";
    case BoundaryClass::WholeLine: return "WholeLine";
  }
  return "?";
}

inline const char* conic_class_name(ConicClass c) {
  switch (c) {
    case ConicClass::Smooth: return "Smooth";
    case ConicClass::TwoLines: return "TwoLines";
    case ConicClass::DoubleLine: return "DoubleLine";
  }
  return "?";
}

// Support data of the sheaf: determinant on the blown-up plane (c0), on the
// embedded plane (c1), their common restriction to the exceptional line, and
// the classification of both.
template <class K>
struct SupportReport {
  D0Form<K> c0{1, 2};
  FormU<K> c1{2};
  BinaryForm<K> boundary{2};
  BoundaryClass boundary_class = BoundaryClass::TwoPoints;
  ConicClass conic_class = ConicClass::Smooth;
  bool contains_L = false;
  PointP2<K> q;
};

// Doubled Gram matrix of a quadric (diagonal 2*c_ii, off-diagonal c_ij).
// Away from characteristic 2 it has the same rank and kernel as the Gram
// matrix proper, without needing a division by 2.
template <class K, char Var>
Matrix<K> gram_matrix(const TernaryForm<K, Var>& quad) {
  if (quad.degree() != 2) throw DomainError(ErrorCode::Precondition, "gram matrix requires a quadric");
  Matrix<K> m(3, 3);
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> e{0, 0, 0};
    e[i] = 2;
    m.at(i, i) = K(2) * quad.coeff(e);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      std::array<int, 3> e{0, 0, 0};
      e[i] = 1;
      e[j] = 1;
      m.at(i, j) = quad.coeff(e);
      m.at(j, i) = quad.coeff(e);
    }
  return m;
}

template <class K>
SupportReport<K> support_report(const PhiMatrix<K>& phi) {
  SupportReport<K> rep;
  rep.c0 = phi.e11.restrict_d0() * phi.e22.restrict_d0() -
           phi.e21.restrict_d0() * phi.e12.restrict_d0();
  rep.c1 = phi.e11.restrict_d1() * phi.e22.restrict_d1() -
           phi.e21.restrict_d1() * phi.e12.restrict_d1();
  if (rep.c1.is_zero())
    throw DomainError(ErrorCode::DegenerateConic, "determinant on the embedded plane vanishes");

  rep.boundary = rep.c0.restrict_L();
  // The two determinants agree along the exceptional line.
  BinaryForm<K> from_c1(2);
  from_c1[0] = rep.c1.coeff({0, 2, 0});
  from_c1[1] = rep.c1.coeff({0, 1, 1});
  from_c1[2] = rep.c1.coeff({0, 0, 2});
  if (!(rep.boundary == from_c1))
    throw DomainError(ErrorCode::Internal, "boundary restrictions disagree");

  if (rep.boundary.is_zero()) {
    rep.boundary_class = BoundaryClass::WholeLine;
  } else if (rep.boundary.discriminant().is_zero()) {
    rep.boundary_class = BoundaryClass::OnePoint;
  } else {
    rep.boundary_class = BoundaryClass::TwoPoints;
  }

  std::size_t rank = gram_matrix(rep.c1).rank();
  rep.conic_class = rank == 3   ? ConicClass::Smooth
                    : rank == 2 ? ConicClass::TwoLines
                                : ConicClass::DoubleLine;

  rep.contains_L = rep.boundary.is_zero();
  rep.q = PointP2<K>({K(1), -phi.xi0(), -phi.eta0()});
  return rep;
}

// Points of the embedded plane where the whole resolution matrix vanishes.
// The first column cuts out a single point there; the matrix vanishes at it
// exactly when the second column does, i.e. when the direction was tangent.
template <class K>
std::vector<PointP2<K>> singular_locus_D1(const PhiMatrix<K>& phi) {
  FormU<K> f11 = phi.e11.restrict_d1();
  FormU<K> f21 = phi.e21.restrict_d1();
  Matrix<K> sys(2, 3);
  for (int i = 0; i < 3; ++i) {
    sys.at(0, i) = f11[i];
    sys.at(1, i) = f21[i];
  }
  auto kern = sys.kernel_basis();
  if (kern.size() != 1)
    throw DomainError(ErrorCode::DependentForms, "first column does not cut out a single point");
  std::array<K, 3> q{kern[0][0], kern[0][1], kern[0][2]};
  if (!phi.e12.restrict_d1().evaluate(q).is_zero() ||
      !phi.e22.restrict_d1().evaluate(q).is_zero())
    return {};
  return {PointP2<K>(q)};
}

// Automorphism of the surface fixing the blown-up plane pointwise:
// u0 -> alpha*u0, u1 -> u1 + beta*u0, u2 -> u2 + gamma*u0.
template <class K>
struct AutomorphismL {
  K alpha{1}, beta{0}, gamma{0};

  FormU<K> pull_back(const FormU<K>& f) const {
    std::array<FormU<K>, 3> images{
        alpha * FormU<K>::variable(0),
        FormU<K>::variable(1) + beta * FormU<K>::variable(0),
        FormU<K>::variable(2) + gamma * FormU<K>::variable(0)};
    return f.composed_with(images);
  }

  BigradedForm<K> pull_back(const BigradedForm<K>& f) const {
    return f.substitute_u(alpha, beta, gamma);
  }

  bool is_identity() const { return alpha.is_one() && beta.is_zero() && gamma.is_zero(); }

  std::string str() const {
    return "(alpha=" + scalar_str(alpha) + ", beta=" + scalar_str(beta) +
           ", gamma=" + scalar_str(gamma) + ")";
  }
};

template <class K>
struct EquivalenceWitness {
  K alpha;
  AutomorphismL<K> phi_aut;
};

// Decides whether two directions at the same special matrix give equivalent
// sheaves: exactly when their normal coordinates are proportional. On
// success the witness automorphism is verified symbolically against the two
// resolution matrices (after eliminating the first splitting form, which
// changes neither the normal coordinates nor the witness).
template <class K>
std::optional<EquivalenceWitness<K>> equivalent(const SheafMatrix<K>& special,
                                                const Direction<K>& b1,
                                                const Direction<K>& b2) {
  NormalCoords<K> n1 = tangent_and_normal(special, b1);
  NormalCoords<K> n2 = tangent_and_normal(special, b2);
  if (n1.is_tangent() || n2.is_tangent())
    throw DomainError(ErrorCode::TangentDirection, "direction is tangent to the singular locus");

  if (!(n1.n1 * n2.n2 - n1.n2 * n2.n1).is_zero()) return std::nullopt;
  K alpha = n1.n1.is_zero() ? n2.n2 / n1.n2 : n2.n1 / n1.n1;

  // Internal normalization: clear the first splitting form by a column
  // operation, transporting both directions the same way.
  GroupElement<K> h;
  h.z = SpecialCoefficients<K>::extract(special).y1();
  SheafMatrix<K> a = group_act(h, special);
  Direction<K> d1 = group_act(h, b1);
  Direction<K> d2 = group_act(h, b2);

  K beta = d2.beta1[0] - alpha * d1.beta1[0];
  K gamma = d2.beta2[0] - alpha * d1.beta2[0];
  AutomorphismL<K> aut{alpha, beta, gamma};

  PhiMatrix<K> phi1 = build_phi(a, d1);
  PhiMatrix<K> phi2 = build_phi(a, d2);
  bool match = aut.pull_back(phi1.e11) == phi2.e11 && aut.pull_back(phi1.e21) == phi2.e21 &&
               aut.pull_back(phi1.e12) == phi2.e12 && aut.pull_back(phi1.e22) == phi2.e22;
  if (!match)
    throw DomainError(ErrorCode::Internal, "witness automorphism failed the symbolic check");
  return EquivalenceWitness<K>{alpha, aut};
}

enum class StabilizerClass { Trivial, OrderTwo, MultiplicativeGroup, ContainsLTransitive };

inline const char* stabilizer_class_name(StabilizerClass c) {
  switch (c) {
    case StabilizerClass::Trivial: return "Trivial";
    case StabilizerClass::OrderTwo: return "OrderTwo";
    case StabilizerClass::MultiplicativeGroup: return "MultiplicativeGroup";
    case StabilizerClass::ContainsLTransitive: return "ContainsLTransitive";
  }
  return "?";
}

// Stabilizer of the conic inside the automorphism group of the surface, plus
// orbit data over a prime field. fp_* fields are -1 unless computed; the
// element list and orbit counts are only enumerated for small primes.
template <class K>
struct OrbitReport {
  StabilizerClass stabilizer_class = StabilizerClass::Trivial;
  std::vector<AutomorphismL<K>> generators;       // finite generating sets only
  std::vector<AutomorphismL<K>> representatives;  // sample nonidentity elements
  std::string orbit_description;
  std::optional<PointP2<K>> p_B;  // meeting point with the line component when the conic contains L
  long long fp_stabilizer_size = -1;
  long long fp_smooth_points_off_L = -1;
  long long fp_orbit_count = -1;
  std::vector<AutomorphismL<K>> fp_elements;
};

namespace detail {

template <class K>
bool proportional(const FormU<K>& f, const FormU<K>& g) {
  const K* lead = f.leading_coeff();
  if (!lead) return g.is_zero();
  int idx = 0;
  while (f[idx].is_zero()) ++idx;
  if (g[idx].is_zero()) return false;
  return f[idx] * g == g[idx] * f;
}

inline long long primitive_root(long long p) {
  std::vector<long long> prime_factors;
  long long m = p - 1;
  for (long long q = 2; q * q <= m; ++q)
    while (m % q == 0) {
      if (prime_factors.empty() || prime_factors.back() != q) prime_factors.push_back(q);
      m /= q;
    }
  if (m > 1) prime_factors.push_back(m);
  auto pow_mod = [p](long long b, long long e) {
    long long r = 1 % p;
    b %= p;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (long long g = 2; g < p; ++g) {
    bool ok = true;
    for (long long q : prime_factors)
      if (pow_mod(g, (p - 1) / q) == 1) { ok = false; break; }
    if (ok) return g;
  }
  return 1;  // p == 2
}

// Orbits of the enumerated stabilizer on the smooth points of the conic off
// the exceptional line, by direct sweep over F_p.
inline void fp_orbit_data(OrbitReport<Fp>& rep, const FormU<Fp>& c1, long long p) {
  Matrix<Fp> gram = gram_matrix(c1);
  std::vector<std::pair<long long, long long>> pts;
  for (long long y = 0; y < p; ++y)
    for (long long z = 0; z < p; ++z) {
      std::array<Fp, 3> u{Fp(1, p), Fp(y, p), Fp(z, p)};
      if (!c1.evaluate(u).is_zero()) continue;
      bool smooth = false;
      for (int i = 0; i < 3 && !smooth; ++i) {
        Fp g(0);
        for (int j = 0; j < 3; ++j) g += gram.at(i, j) * u[j];
        smooth = !g.is_zero();
      }
      if (smooth) pts.emplace_back(y, z);
    }
  rep.fp_smooth_points_off_L = static_cast<long long>(pts.size());

  auto index_of = [&pts](long long y, long long z) -> long long {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].first == y && pts[i].second == z) return static_cast<long long>(i);
    return -1;
  };
  std::vector<bool> seen(pts.size(), false);
  long long orbits = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (seen[i]) continue;
    ++orbits;
    std::vector<std::size_t> stack{i};
    seen[i] = true;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      Fp y(pts[cur].first, p), z(pts[cur].second, p);
      for (const auto& g : rep.fp_elements) {
        // Point image (1, y, z) -> (alpha, y + beta, z + gamma), rescaled.
        Fp ia = (Fp(0, p) + g.alpha).inv();
        Fp ny = ia * (y + g.beta);
        Fp nz = ia * (z + g.gamma);
        long long idx = index_of(ny.value(), nz.value());
        if (idx >= 0 && !seen[idx]) {
          seen[idx] = true;
          stack.push_back(static_cast<std::size_t>(idx));
        }
      }
    }
  }
  rep.fp_orbit_count = orbits;
}

}  // namespace detail

// Classifies the solutions (alpha, beta, gamma), alpha != 0, of
// pull_back(c1) = lambda * c1 by direct elimination on the coefficient
// equations. Input comes from a support report of a well-formed resolution
// matrix. Over a prime field the modulus is read off the conic; p_hint
// covers conics whose stored coefficients are all plain literals.
template <class K>
OrbitReport<K> stabilizer_orbits(const SupportReport<K>& rep, long long p_hint = 0) {
  const FormU<K>& c1 = rep.c1;
  if (c1.is_zero()) throw DomainError(ErrorCode::DegenerateConic, "conic vanishes identically");

  K P = c1.coeff({2, 0, 0});
  K Q = c1.coeff({1, 1, 0});
  K R = c1.coeff({1, 0, 1});
  K D = c1.coeff({0, 2, 0});
  K E = c1.coeff({0, 1, 1});
  K F = c1.coeff({0, 0, 2});

  OrbitReport<K> out;
  long long p = 0;
  if constexpr (is_prime_field_v<K>) {
    for (const K& c : {P, Q, R, D, E, F})
      if (c.modulus() != 0) { p = c.modulus(); break; }
    if (p == 0) p = p_hint;
    if (p > 0) {
      // Adopt the modulus into plain-literal coefficients so the
      // eliminations below can divide by them.
      K zero = embed_int<K>(0, p);
      P = P + zero; Q = Q + zero; R = R + zero;
      D = D + zero; E = E + zero; F = F + zero;
    }
  } else {
    (void)p_hint;
  }
  // Full element lists stay tractable only for small primes.
  const bool enumerate = p > 0 && p <= 101;
  auto fp = [&p](long long v) { return embed_int<K>(v, p); };

  bool pure_part = !(D.is_zero() && E.is_zero() && F.is_zero());

  if (!pure_part) {
    // c1 = u0 * (P u0 + Q u1 + R u2): the conic contains the exceptional
    // line; the multiplier lambda equals alpha and one linear condition
    // remains on (alpha, beta, gamma).
    out.stabilizer_class = StabilizerClass::ContainsLTransitive;
    if (Q.is_zero() && R.is_zero()) {
      out.orbit_description =
          "conic is the doubled exceptional line; the full automorphism group stabilizes it";
      out.representatives.push_back(AutomorphismL<K>{K(1), K(1), K(0)});
      if (p > 0) out.fp_stabilizer_size = (p - 1) * p * p;
      if (enumerate)
        for (long long a = 1; a < p; ++a)
          for (long long b = 0; b < p; ++b)
            for (long long g = 0; g < p; ++g)
              out.fp_elements.push_back(AutomorphismL<K>{fp(a), fp(b), fp(g)});
    } else {
      out.p_B = PointP2<K>({K(0), -R, Q});
      out.orbit_description =
          "conic splits as the exceptional line plus a second line; the stabilizer "
          "P(alpha-1) + Q beta + R gamma = 0 is two-dimensional and acts transitively "
          "off the exceptional line";
      out.representatives.push_back(AutomorphismL<K>{K(1), -R, Q});
      if (p > 0) out.fp_stabilizer_size = (p - 1) * p;
      if (enumerate)
        for (long long a = 1; a < p; ++a)
          for (long long t = 0; t < p; ++t) {
            K alpha = fp(a);
            K need = P * (K(1) - alpha);  // Q beta + R gamma = need
            if (!R.is_zero()) {
              K beta = fp(t);
              out.fp_elements.push_back(AutomorphismL<K>{alpha, beta, (need - Q * beta) / R});
            } else {
              K gamma = fp(t);
              out.fp_elements.push_back(AutomorphismL<K>{alpha, (need - R * gamma) / Q, gamma});
            }
          }
    }
  } else {
    // The pure quadratic part is preserved, so lambda = 1 and the remaining
    // equations are linear in (beta, gamma) plus one scalar equation:
    //   E1: Q alpha + 2 D beta + E gamma = Q
    //   E2: R alpha + E beta + 2 F gamma = R
    //   E3: P alpha^2 + Q alpha beta + R alpha gamma
    //       + D beta^2 + E beta gamma + F gamma^2 = P
    K disc = E * E - K(4) * D * F;
    if (!disc.is_zero()) {
      // Boundary has two points; (beta, gamma) is determined by alpha.
      Matrix<K> m(2, 2);
      m.at(0, 0) = K(2) * D; m.at(0, 1) = E;
      m.at(1, 0) = E;        m.at(1, 1) = K(2) * F;
      auto minv = m.inverse();
      K bs = minv->at(0, 0) * Q + minv->at(0, 1) * R;
      K gs = minv->at(1, 0) * Q + minv->at(1, 1) * R;
      K S = Q * bs + R * gs;
      K T = D * bs * bs + E * bs * gs + F * gs * gs;
      K denom = S - T - P;
      // E3 factors as (1 - alpha) * (alpha * denom + (T - P)) = 0.
      if (!denom.is_zero()) {
        K alpha2 = (P - T) / denom;
        if (alpha2.is_zero() || alpha2.is_one()) {
          out.stabilizer_class = StabilizerClass::Trivial;
          out.orbit_description = "only the identity stabilizes the conic";
        } else {
          out.stabilizer_class = StabilizerClass::OrderTwo;
          AutomorphismL<K> g{alpha2, (K(1) - alpha2) * bs, (K(1) - alpha2) * gs};
          out.generators.push_back(g);
          out.representatives.push_back(g);
          out.orbit_description =
              "stabilizer of order two; the involution pairs up points off the exceptional line";
        }
      } else if ((T - P).is_zero()) {
        out.stabilizer_class = StabilizerClass::MultiplicativeGroup;
        out.orbit_description =
            "one-parameter stabilizer isomorphic to the multiplicative group: "
            "(alpha, (1-alpha)*beta*, (1-alpha)*gamma*)";
        if (p > 0) {
          K a = fp(detail::primitive_root(p));
          out.generators.push_back(AutomorphismL<K>{a, (K(1) - a) * bs, (K(1) - a) * gs});
        }
        out.representatives.push_back(AutomorphismL<K>{K(2), -bs, -gs});
      } else {
        out.stabilizer_class = StabilizerClass::Trivial;
        out.orbit_description = "only the identity stabilizes the conic";
      }
      if (p > 0) {
        out.fp_stabilizer_size = out.stabilizer_class == StabilizerClass::Trivial ? 1
                                 : out.stabilizer_class == StabilizerClass::OrderTwo ? 2
                                                                                     : p - 1;
        if (enumerate) {
          if (out.stabilizer_class == StabilizerClass::MultiplicativeGroup) {
            for (long long a = 1; a < p; ++a) {
              K alpha = fp(a);
              out.fp_elements.push_back(
                  AutomorphismL<K>{alpha, (K(1) - alpha) * bs, (K(1) - alpha) * gs});
            }
          } else {
            out.fp_elements.push_back(AutomorphismL<K>{K(1), K(0), K(0)});
            for (const auto& g : out.generators) out.fp_elements.push_back(g);
          }
        }
      }
    } else {
      // Boundary is a double point. Rotate coordinates so the double root
      // becomes u1, solve there, and map the solutions back.
      bool swapped = D.is_zero();
      K r(0);
      if (!swapped) r = -E / (K(2) * D);
      std::array<FormU<K>, 3> images;
      if (swapped) {
        images = {FormU<K>::variable(0), FormU<K>::variable(2), FormU<K>::variable(1)};
      } else {
        images = {FormU<K>::variable(0), FormU<K>::variable(1) + r * FormU<K>::variable(2),
                  FormU<K>::variable(2)};
      }
      FormU<K> cr = c1.composed_with(images);
      K Pr = cr.coeff({2, 0, 0});
      K Qr = cr.coeff({1, 1, 0});
      K Rr = cr.coeff({1, 0, 1});
      K Dr = cr.coeff({0, 2, 0});
      if (!cr.coeff({0, 1, 1}).is_zero() || !cr.coeff({0, 0, 2}).is_zero() || Dr.is_zero())
        throw DomainError(ErrorCode::Internal, "double-root rotation failed");

      // Translation parts map back from the rotated frame by the inverse
      // rotation: (beta, gamma) = (beta' + r gamma', gamma'), or the swap.
      auto back = [&](const K& bp, const K& gp) {
        return swapped ? std::pair<K, K>(gp, bp) : std::pair<K, K>(bp + r * gp, gp);
      };

      if (!Rr.is_zero()) {
        out.stabilizer_class = StabilizerClass::Trivial;
        out.orbit_description =
            "conic meets the exceptional line at one point with no symmetry to spare; "
            "only the identity stabilizes it";
        if (p > 0) out.fp_stabilizer_size = 1;
        if (enumerate) out.fp_elements.push_back(AutomorphismL<K>{K(1), K(0), K(0)});
      } else {
        K disc2 = Qr * Qr - K(4) * Pr * Dr;
        K qs = Qr / (K(2) * Dr);
        if (!disc2.is_zero()) {
          // Two lines meeting on the exceptional line: two translation
          // components, alpha = 1 and alpha = -1.
          out.stabilizer_class = StabilizerClass::ContainsLTransitive;
          out.orbit_description =
              "two lines meeting on the exceptional line; the stabilizer has two "
              "one-parameter components and acts transitively on each line off the "
              "exceptional line";
          auto [b1, g1] = back(K(0), K(1));
          auto [b2, g2] = back(K(2) * qs, K(0));
          out.representatives.push_back(AutomorphismL<K>{K(1), b1, g1});
          out.representatives.push_back(AutomorphismL<K>{K(-1), b2, g2});
          if (p > 0) out.fp_stabilizer_size = 2 * p;
          if (enumerate)
            for (long long t = 0; t < p; ++t) {
              auto [ba, ga] = back(K(0), fp(t));
              out.fp_elements.push_back(AutomorphismL<K>{fp(1), ba, ga});
              auto [bb, gb] = back(K(2) * qs, fp(t));
              out.fp_elements.push_back(AutomorphismL<K>{fp(p - 1), bb, gb});
            }
        } else {
          // Double line through a point of the exceptional line.
          out.stabilizer_class = StabilizerClass::ContainsLTransitive;
          out.orbit_description =
              "double line meeting the exceptional line; the stabilizer is "
              "two-dimensional and acts transitively off the exceptional line";
          auto [b1, g1] = back(K(0), K(1));
          out.representatives.push_back(AutomorphismL<K>{K(1), b1, g1});
          if (p > 0) out.fp_stabilizer_size = (p - 1) * p;
          if (enumerate)
            for (long long a = 1; a < p; ++a)
              for (long long t = 0; t < p; ++t) {
                K alpha = fp(a);
                auto [ba, ga] = back((K(1) - alpha) * qs, fp(t));
                out.fp_elements.push_back(AutomorphismL<K>{alpha, ba, ga});
              }
        }
      }
    }
  }

  // Every reported element must fix the conic up to a scalar.
  for (const auto& g : out.generators)
    if (!detail::proportional(c1, g.pull_back(c1)))
      throw DomainError(ErrorCode::Internal, "generator does not stabilize the conic");
  for (const auto& g : out.representatives)
    if (!detail::proportional(c1, g.pull_back(c1)))
      throw DomainError(ErrorCode::Internal, "representative does not stabilize the conic");

  if constexpr (is_prime_field_v<K>) {
    if (enumerate) {
      if (out.fp_stabilizer_size != static_cast<long long>(out.fp_elements.size()))
        throw DomainError(ErrorCode::Internal, "stabilizer size does not match its enumeration");
      detail::fp_orbit_data(out, c1, p);
    }
  }
  return out;
}

}  // namespace rbundles
