#pragma once

#include <string>
#include <vector>

#include "rbundles/forms.hpp"
#include "rbundles/moduli.hpp"

namespace rbundles {

// Built-in example matrix, one per singular-cubic type. All are in special
// form with distinguished point [1:0:0].
template <class K>
struct CorpusEntry {
  std::string name;
  std::string cubic;  // determinant, factored by hand for the docs
  SheafMatrix<K> matrix;
};

// The two directions with normal coordinates (1,0) and (0,1) at every
// special matrix: a unit x0^2 coefficient in one quadratic entry. Over a
// prime field pass the modulus so every coefficient carries it.
template <class K>
Direction<K> canonical_direction_1(long long modulus = 0) {
  Direction<K> d;
  d.c1 = FormX<K>::monomial(2, {2, 0, 0}, embed_int<K>(1, modulus));
  return d;
}

template <class K>
Direction<K> canonical_direction_2(long long modulus = 0) {
  Direction<K> d;
  d.c2 = FormX<K>::monomial(2, {2, 0, 0}, embed_int<K>(1, modulus));
  return d;
}

template <class K>
std::vector<CorpusEntry<K>> corpus_examples(long long modulus = 0) {
  K one = embed_int<K>(1, modulus);
  auto x = [&one](int i) { return one * FormX<K>::variable(i); };
  auto entry = [&x](std::string name, std::string cubic, FormX<K> q1, FormX<K> q2) {
    CorpusEntry<K> e{std::move(name), std::move(cubic), {}};
    e.matrix.z1 = x(1);
    e.matrix.z2 = x(2);
    e.matrix.q1 = std::move(q1);
    e.matrix.q2 = std::move(q2);
    return e;
  };
  FormX<K> zero2(2);
  std::vector<CorpusEntry<K>> out;
  out.push_back(entry("nodal", "x0*x1^2 - x2^2*(x0+x2)", x(2) * (x(0) + x(2)), x(0) * x(1)));
  out.push_back(entry("cuspidal", "x0*x1^2 - x2^3", x(2) * x(2), x(0) * x(1)));
  out.push_back(entry("simple-three-lines", "x0*x1*x2", zero2, x(0) * x(2)));
  out.push_back(entry("three-lines-through-point", "x1*x2*(x1+x2)", zero2, x(2) * (x(1) + x(2))));
  out.push_back(entry("line-plus-conic", "x1*(x1^2 - x0*x2)", x(0) * x(1), x(1) * x(1)));
  out.push_back(entry("tangent-line-conic", "x2*(x1^2 - x0*x2)", x(0) * x(2), x(1) * x(2)));
  out.push_back(entry("double-line", "x0*x1^2", zero2, x(0) * x(1)));
  return out;
}

}  // namespace rbundles
