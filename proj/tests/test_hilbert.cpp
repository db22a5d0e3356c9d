#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <optional>
#include <string>

#include "rbundles/corpus.hpp"
#include "rbundles/hilbert.hpp"
#include "rbundles/rbundle.hpp"
#include "rbundles/scalar.hpp"

using namespace rbundles;
using Q = Rational;

namespace {

FormX<Q> xq(int i) { return FormX<Q>::variable(i); }

template <class F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.code();
  }
  return std::nullopt;
}

template <class F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("euler characteristic depends only on the twist sum") {
  CHECK(chi_line_bundle(0, 0) == 1);
  CHECK(chi_line_bundle(1, 0) == 3);
  CHECK(chi_line_bundle(0, 1) == 3);
  CHECK(chi_line_bundle(1, 1) == 6);
  CHECK(chi_line_bundle(1, 2) == 10);
  CHECK(chi_line_bundle(-1, 0) == 0);
  CHECK(chi_line_bundle(0, -2) == 0);
  CHECK(chi_line_bundle(-1, -1) == 0);
  for (int a = -2; a <= 3; ++a)
    for (int b = -2; b <= 3; ++b) CHECK(chi_line_bundle(a, b) == chi_line_bundle(b, a));
}

TEST_CASE("quadratic twist polynomials") {
  HilbertPoly p = hilbert_poly_line_bundle(0, 0);
  CHECK(p.str() == "2*m^2 + 3*m + 1");
  CHECK(p[0] == Q(1));
  CHECK(p[1] == Q(3));
  CHECK(p[2] == Q(2));
  // Twisting by m in both slots shifts the chi value accordingly.
  for (int a = -1; a <= 2; ++a)
    for (int b = -1; b <= 2; ++b)
      for (long long m = 0; m <= 5; ++m)
        CHECK(hilbert_poly_line_bundle(a, b).evaluate(m) ==
              Q(chi_line_bundle(a + m, b + m)));

  for (long long c = -2; c <= 2; ++c)
    for (long long m = 0; m <= 5; ++m)
      CHECK(chi_shift_poly(c).evaluate(m) == Q(chi_line_bundle(m + c, 0)));
}

TEST_CASE("integer-valued polynomials only") {
  CHECK_THROWS_AS(HilbertPoly(Q(1, 2), Q(0), Q(0)), DomainError);
  // m(m+1)/2 has fractional coefficients but integer values.
  CHECK_NOTHROW(HilbertPoly(Q(0), Q(1, 2), Q(1, 2)));
}

TEST_CASE("linear fit through four samples") {
  HilbertPoly p = HilbertPoly::fit_linear({4, 7, 10, 13});
  CHECK(p == HilbertPoly(Q(1), Q(3), Q(0)));
  CHECK(p.str() == "3*m + 1");
  CHECK(p.evaluate(10) == Q(31));
  CHECK(thrown_code([] { HilbertPoly::fit_linear({4, 7, 10, 14}); }) ==
        ErrorCode::FitFailure);
}

TEST_CASE("polynomial arithmetic and printing") {
  HilbertPoly a(Q(1), Q(3), Q(0));
  HilbertPoly b(Q(2), Q(-3), Q(2));
  CHECK((a + b) == HilbertPoly(Q(3), Q(0), Q(2)));
  CHECK((a - b) == HilbertPoly(Q(-1), Q(6), Q(-2)));
  CHECK((Q(2) * a) == HilbertPoly(Q(2), Q(6), Q(0)));
  CHECK(HilbertPoly().str() == "0");
  CHECK(HilbertPoly(Q(0), Q(-1), Q(1)).str() == "m^2 - m");
}

TEST_CASE("global sections match the euler characteristic on the listed twists") {
  const std::array<std::array<int, 2>, 11> twists{{{0, -2},
                                                   {-1, 0},
                                                   {0, -1},
                                                   {0, 0},
                                                   {1, -1},
                                                   {-1, 1},
                                                   {1, 0},
                                                   {0, 1},
                                                   {-1, -1},
                                                   {1, 1},
                                                   {1, 2}}};
  const std::array<long long, 11> expected{0, 0, 0, 1, 1, 1, 3, 3, 0, 6, 10};
  for (std::size_t i = 0; i < twists.size(); ++i) {
    int a = twists[i][0], b = twists[i][1];
    INFO("twist (" << a << ", " << b << ")");
    CHECK(h0_line_bundle(a, b) == expected[i]);
    CHECK(h0_line_bundle(a, b) == chi_line_bundle(a, b));
  }
}

TEST_CASE("cokernel hilbert function on the surface") {
  auto nodal = corpus_examples<Q>()[0].matrix;
  PhiMatrix<Q> phi = build_phi(nodal, canonical_direction_1<Q>());

  CHECK(hilbert_function_coker(phi, 0, 0) == 1);
  for (int m = 1; m <= 3; ++m) CHECK(hilbert_function_coker(phi, m, m) == 6 * m + 1);

  CHECK(thrown_code([&] { hilbert_function_coker(phi, -1, 0); }) == ErrorCode::OutOfRange);
  CHECK(thrown_code([&] { hilbert_function_coker(phi, 7, 0); }) == ErrorCode::OutOfRange);
}

TEST_CASE("restriction polynomials and additivity along the gluing") {
  auto entries = corpus_examples<Q>();
  for (const auto& e : entries) {
    for (int which = 1; which <= 2; ++which) {
      INFO(e.name << ", direction " << which);
      Direction<Q> d =
          which == 1 ? canonical_direction_1<Q>() : canonical_direction_2<Q>();
      PhiMatrix<Q> phi = build_phi(e.matrix, d);
      auto [on_blowup, on_plane] = restriction_hilbert_polys(phi);
      CHECK(on_blowup == HilbertPoly(Q(1), Q(4), Q(0)));
      CHECK(on_plane == HilbertPoly(Q(2), Q(2), Q(0)));
      CHECK(on_blowup.str() == "4*m + 1");
      CHECK(on_plane.str() == "2*m + 2");
    }
  }

  // Euler characteristic additivity: component counts overlap in a fixed
  // two-dimensional space on the exceptional line, so the surface values
  // are (4m+1) + (2m+2) - 2 = 6m+1.
  auto nodal = entries[0].matrix;
  PhiMatrix<Q> phi = build_phi(nodal, canonical_direction_1<Q>());
  auto [d0p, d1p] = restriction_hilbert_polys(phi);
  HilbertPoly glued = d0p + d1p - HilbertPoly(Q(2), Q(0), Q(0));
  for (int m = 1; m <= 3; ++m)
    CHECK(glued.evaluate(m) == Q(hilbert_function_coker(phi, m, m)));
}

TEST_CASE("plane hilbert function is 3m+1 across the corpus") {
  for (const auto& e : corpus_examples<Q>()) {
    INFO(e.name);
    for (int m = 1; m <= 3; ++m) CHECK(plane_hilbert_function(e.matrix, m) == 3 * m + 1);
  }
  auto nodal = corpus_examples<Q>()[0].matrix;
  std::array<long long, 4> dims{};
  for (int m = 1; m <= 4; ++m)
    dims[static_cast<std::size_t>(m - 1)] = plane_hilbert_function(nodal, m);
  CHECK(dims == std::array<long long, 4>{4, 7, 10, 13});
  CHECK(HilbertPoly::fit_linear(dims) == HilbertPoly(Q(1), Q(3), Q(0)));

  CHECK(thrown_code([&] { plane_hilbert_function(nodal, 0); }) == ErrorCode::OutOfRange);

  // Members of the parameter space off the singular stratum do as well.
  SheafMatrix<Q> generic;
  generic.z1 = xq(1);
  generic.z2 = xq(2);
  generic.q1 = xq(0) * xq(0);
  generic.q2 = xq(1) * xq(1);
  REQUIRE_FALSE(is_in_X8(generic));
  for (int m = 1; m <= 4; ++m) CHECK(plane_hilbert_function(generic, m) == 3 * m + 1);
}

TEST_CASE("plane hilbert function over a prime field") {
  const long long p = 7;
  auto nodal = corpus_examples<Fp>(p)[0].matrix;
  for (int m = 1; m <= 4; ++m) CHECK(plane_hilbert_function(nodal, m) == 3 * m + 1);
}

TEST_CASE("pencil members away from the origin stay flat") {
  auto entries = corpus_examples<Q>();
  auto nodal = entries[0].matrix;
  Direction<Q> d1 = canonical_direction_1<Q>();

  auto probes = flat_family_probes(nodal, d1, {Q(0), Q(1), Q(2), Q(-1)});
  REQUIRE(probes.size() == 3);  // t = 0 is skipped
  for (const auto& probe : probes) {
    INFO("t = " << probe.t.str());
    CHECK(probe.coker_dims == std::array<long long, 4>{4, 7, 10, 13});
    CHECK(is_in_X(probe.at));
    CHECK_FALSE(is_in_X8(probe.at));
  }
  // Spot-check the member itself at t = 2.
  SheafMatrix<Q> want = nodal;
  want.q1 = want.q1 + Q(2) * (xq(0) * xq(0));
  CHECK(probes[1].at == want);

  CHECK(flat_family_check(nodal, d1, {Q(1), Q(2), Q(-1)}));
  CHECK(flat_family_check(entries[1].matrix, canonical_direction_2<Q>(), {Q(1), Q(3)}));
}

TEST_CASE("degenerate pencils are reported by cause") {
  auto nodal = corpus_examples<Q>()[0].matrix;

  SECTION("tangent directions make no transverse pencil") {
    Direction<Q> t;
    t.beta2 = xq(0);
    t.c1 = xq(0) * xq(0);
    CHECK(thrown_code([&] { flat_family_probes(nodal, t, {Q(1)}); }) ==
          ErrorCode::TangentDirection);
  }

  SECTION("a member can leave the parameter space") {
    // B = (first normal direction) - (the matrix itself, read as a direction):
    // at t = 1 the linear entries cancel and the member degenerates.
    Direction<Q> b = canonical_direction_1<Q>();
    b.beta1 = b.beta1 - nodal.z1;
    b.beta2 = b.beta2 - nodal.z2;
    b.c1 = b.c1 - nodal.q1;
    b.c2 = b.c2 - nodal.q2;
    CHECK(thrown_code([&] { flat_family_probes(nodal, b, {Q(1)}); }) ==
          ErrorCode::SampleInX8);
    CHECK(thrown_message([&] { flat_family_probes(nodal, b, {Q(1)}); }).find("leaves") !=
          std::string::npos);
  }

  SECTION("a member can run into the singular stratum") {
    // Target: the cuspidal example with x0 and x1 swapped; it sits in the
    // singular stratum but not in special position, so the difference
    // direction is transverse at the nodal matrix.
    auto cusp = corpus_examples<Q>()[1].matrix;
    std::array<FormX<Q>, 3> swap01 = {xq(1), xq(0), xq(2)};
    SheafMatrix<Q> target;
    target.z1 = cusp.z1.composed_with(swap01);
    target.z2 = cusp.z2.composed_with(swap01);
    target.q1 = cusp.q1.composed_with(swap01);
    target.q2 = cusp.q2.composed_with(swap01);
    REQUIRE(is_in_X8(target));

    Direction<Q> b;
    b.beta1 = target.z1 - nodal.z1;
    b.beta2 = target.z2 - nodal.z2;
    b.c1 = target.q1 - nodal.q1;
    b.c2 = target.q2 - nodal.q2;
    REQUIRE_FALSE(tangent_and_normal(nodal, b).is_tangent());
    CHECK(thrown_code([&] { flat_family_probes(nodal, b, {Q(1)}); }) ==
          ErrorCode::SampleInX8);
    CHECK(thrown_message([&] { flat_family_probes(nodal, b, {Q(1)}); }).find("stays") !=
          std::string::npos);
  }
}

TEST_CASE("central fiber bookkeeping") {
  HilbertPoly central = chi_shift_poly(-1) + chi_shift_poly(0) - Q(2) * chi_shift_poly(-2);
  CHECK(central == HilbertPoly(Q(1), Q(3), Q(0)));
}
