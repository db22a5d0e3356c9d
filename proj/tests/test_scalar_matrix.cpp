#include <catch2/catch_amalgamated.hpp>

#include "rbundles/matrix.hpp"
#include "rbundles/scalar.hpp"

using namespace rbundles;

TEST_CASE("rational arithmetic is exact") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK((-a).str() == "-1/3");
  CHECK(Rational(2, 4) == Rational(1, 2));  // canonical form
  CHECK(Rational(7).inv() == Rational(1, 7));
  CHECK_THROWS_AS(Rational(0).inv(), DomainError);
}

TEST_CASE("rational text round trip") {
  for (const char* s : {"0", "1", "-1", "5/3", "-22/7", "12345678901234567890"}) {
    auto r = Rational::try_parse(s);
    REQUIRE(r.has_value());
    CHECK(r->str() == s);
  }
  CHECK(Rational::try_parse("4/2")->str() == "2");
  CHECK_FALSE(Rational::try_parse("").has_value());
  CHECK_FALSE(Rational::try_parse("1/0").has_value());
  CHECK_FALSE(Rational::try_parse("a/2").has_value());
  CHECK_FALSE(Rational::try_parse("1.5").has_value());
}

TEST_CASE("prime field values adopt a modulus on contact") {
  Fp lit(5);  // plain integer until it meets a modulus
  CHECK(lit.modulus() == 0);
  Fp x(3, 7);
  CHECK((lit + x).modulus() == 7);
  CHECK((lit + x).value() == 1);
  CHECK((lit * x).value() == 1);
  CHECK((x - lit).value() == 5);
  CHECK((Fp(1) / x).value() == 5);  // 3 * 5 = 15 = 1 mod 7
  CHECK(Fp(-1, 7).value() == 6);
  CHECK(Fp(13, 7) == Fp(6, 7));
  CHECK(Fp(6, 7) == Fp(-1));  // literal comparison merges too
}

TEST_CASE("prime field guards") {
  CHECK_THROWS_AS(Fp(1, 1), DomainError);
  CHECK_THROWS_AS(Fp(0, 7).inv(), DomainError);
  CHECK(Fp(1).inv() == Fp(1));
  CHECK(Fp(-1).inv() == Fp(-1));
  CHECK_THROWS_AS(Fp(2).inv(), DomainError);  // literal with no modulus
  CHECK_THROWS_AS(Fp(1, 5) + Fp(1, 7), DomainError);
  CHECK(embed_int<Fp>(10, 7).value() == 3);
  CHECK(embed_int<Rational>(10, 7) == Rational(10));
}

TEST_CASE("primality test") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));  // 7 * 13
}

TEST_CASE("rank and kernel over the rationals") {
  Matrix<Rational> m(3, 4);
  // Rows: r0, r1 independent, r2 = r0 + 2*r1.
  Rational r0[4] = {Rational(1), Rational(0), Rational(2), Rational(-1)};
  Rational r1[4] = {Rational(0), Rational(1), Rational(1, 2), Rational(3)};
  for (int j = 0; j < 4; ++j) {
    m.at(0, j) = r0[j];
    m.at(1, j) = r1[j];
    m.at(2, j) = r0[j] + Rational(2) * r1[j];
  }
  CHECK(m.rank() == 2);
  auto kern = m.kernel_basis();
  REQUIRE(kern.size() == 2);
  for (const auto& v : kern)
    for (int i = 0; i < 3; ++i) {
      Rational dot(0);
      for (int j = 0; j < 4; ++j) dot += m.at(i, j) * v[static_cast<std::size_t>(j)];
      CHECK(dot == Rational(0));
    }
}

TEST_CASE("rank over a prime field differs from the integer rank") {
  // [[2, 1], [1, 4]] has determinant 7.
  Matrix<Fp> m(2, 2);
  m.at(0, 0) = Fp(2, 7); m.at(0, 1) = Fp(1, 7);
  m.at(1, 0) = Fp(1, 7); m.at(1, 1) = Fp(4, 7);
  CHECK(m.rank() == 1);
  Matrix<Rational> q(2, 2);
  q.at(0, 0) = Rational(2); q.at(0, 1) = Rational(1);
  q.at(1, 0) = Rational(1); q.at(1, 1) = Rational(4);
  CHECK(q.rank() == 2);
}

TEST_CASE("kernel of the zero and identity matrices") {
  Matrix<Rational> z(2, 3);
  CHECK(z.rank() == 0);
  CHECK(z.kernel_basis().size() == 3);
  Matrix<Rational> id(3, 3);
  for (int i = 0; i < 3; ++i) id.at(i, i) = Rational(1);
  CHECK(id.rank() == 3);
  CHECK(id.kernel_basis().empty());
}
