#pragma once

// JSON input/output layer. Depends on nlohmann/json (vendored as json.hpp);
// keep this header out of builds that do not link the CLI or the IO tests.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbundles/errors.hpp"
#include "rbundles/forms.hpp"
#include "rbundles/hilbert.hpp"
#include "rbundles/moduli.hpp"
#include "rbundles/rbundle.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

using nlohmann::json;

// Scalars serialize per field: rationals as canonical "n"/"n/d" strings,
// prime-field residues as plain integers.
template <class K>
json scalar_json(const K& s) {
  if constexpr (is_prime_field_v<K>) {
    return s.value();
  } else {
    return s.str();
  }
}

// Scalar field of an input document: "Q" or {"Fp": p}.
struct FieldTag {
  bool rational = true;
  long long p = 0;

  friend bool operator==(const FieldTag& a, const FieldTag& b) {
    return a.rational == b.rational && a.p == b.p;
  }
};

template <class K>
struct InputDocument {
  FieldTag tag;
  SheafMatrix<K> matrix;
  std::optional<Direction<K>> b;
  std::optional<Direction<K>> b2;

  friend bool operator==(const InputDocument& x, const InputDocument& y) {
    return x.tag == y.tag && x.matrix == y.matrix && x.b == y.b && x.b2 == y.b2;
  }
};

namespace io_detail {

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) { known = true; break; }
    if (!known) throw InputError(path + "." + key, "unknown field");
  }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "." + key, "missing field");
  return *it;
}

template <class K>
K parse_scalar(const json& v, const std::string& path, const FieldTag& tag) {
  if constexpr (is_prime_field_v<K>) {
    if (!v.is_number_integer())
      throw InputError(path, "expected an integer residue");
    return K(v.get<long long>(), tag.p);
  } else {
    if (v.is_number_integer()) return K(v.get<long long>());
    if (v.is_string()) {
      auto r = K::try_parse(v.get<std::string>());
      if (r) return *r;
      throw InputError(path, "expected \"n\" or \"n/d\", got \"" + v.get<std::string>() + "\"");
    }
    throw InputError(path, "expected a rational written as a string");
  }
}

template <class K, std::size_t N>
void parse_coeff_array(const json& v, const std::string& path, const FieldTag& tag,
                       std::array<K, 18>& out, std::size_t offset) {
  if (!v.is_array() || v.size() != N)
    throw InputError(path, "expected an array of " + std::to_string(N) + " coefficients");
  for (std::size_t i = 0; i < N; ++i)
    out[offset + i] = parse_scalar<K>(v[i], path + "[" + std::to_string(i) + "]", tag);
}

// Shared layout of a matrix / direction: two linear rows then two quadrics,
// 18 coefficients in the documented monomial orders.
template <class K>
std::array<K, 18> parse_entry_block(const json& obj, const std::string& path,
                                    const FieldTag& tag, const char* k1, const char* k2,
                                    const char* k3, const char* k4) {
  if (!obj.is_object()) throw InputError(path, "expected an object");
  reject_unknown_keys(obj, path, {k1, k2, k3, k4});
  std::array<K, 18> c{};
  parse_coeff_array<K, 3>(require(obj, path, k1), path + "." + k1, tag, c, 0);
  parse_coeff_array<K, 3>(require(obj, path, k2), path + "." + k2, tag, c, 3);
  parse_coeff_array<K, 6>(require(obj, path, k3), path + "." + k3, tag, c, 6);
  parse_coeff_array<K, 6>(require(obj, path, k4), path + "." + k4, tag, c, 12);
  return c;
}

template <class K, class Form>
json coeff_array_json(const Form& f) {
  json out = json::array();
  for (int i = 0; i < ternary_dim(f.degree()); ++i) out.push_back(rbundles::scalar_json<K>(f[i]));
  return out;
}

inline std::string power_name(const char* base, int var, int exp) {
  std::string s = std::string(base) + std::to_string(var);
  if (exp > 1) s += "^" + std::to_string(exp);
  return s;
}

inline std::string monomial_name(const std::array<int, 3>& e, const char* base) {
  std::string s;
  for (int v = 0; v < 3; ++v) {
    if (e[static_cast<std::size_t>(v)] == 0) continue;
    if (!s.empty()) s += "*";
    s += power_name(base, v, e[static_cast<std::size_t>(v)]);
  }
  return s.empty() ? "1" : s;
}

}  // namespace io_detail

inline FieldTag parse_field_tag(const json& doc) {
  if (!doc.is_object()) throw InputError("$", "expected a JSON object");
  const json& f = io_detail::require(doc, "$", "field");
  if (f.is_string()) {
    if (f.get<std::string>() == "Q") return FieldTag{true, 0};
    throw InputError("$.field", "expected \"Q\" or {\"Fp\": p}");
  }
  if (f.is_object()) {
    io_detail::reject_unknown_keys(f, "$.field", {"Fp"});
    const json& p = io_detail::require(f, "$.field", "Fp");
    if (!p.is_number_integer() || !is_prime(p.get<long long>()))
      throw InputError("$.field.Fp", "expected a prime modulus");
    return FieldTag{false, p.get<long long>()};
  }
  throw InputError("$.field", "expected \"Q\" or {\"Fp\": p}");
}

// Parses a full input document; the scalar type must match the field tag
// (callers dispatch on parse_field_tag first).
template <class K>
InputDocument<K> parse_input(const json& doc) {
  InputDocument<K> out;
  out.tag = parse_field_tag(doc);
  if (out.tag.rational == is_prime_field_v<K>)
    throw InputError("$.field", "field tag does not match the requested scalar type");
  io_detail::reject_unknown_keys(doc, "$", {"field", "A", "B", "B2"});
  out.matrix = SheafMatrix<K>::from_coords(io_detail::parse_entry_block<K>(
      io_detail::require(doc, "$", "A"), "$.A", out.tag, "z1", "z2", "q1", "q2"));
  if (auto it = doc.find("B"); it != doc.end())
    out.b = Direction<K>::from_coords(
        io_detail::parse_entry_block<K>(*it, "$.B", out.tag, "l1", "l2", "c1", "c2"));
  if (auto it = doc.find("B2"); it != doc.end())
    out.b2 = Direction<K>::from_coords(
        io_detail::parse_entry_block<K>(*it, "$.B2", out.tag, "l1", "l2", "c1", "c2"));
  return out;
}

inline json field_tag_json(const FieldTag& tag) {
  if (tag.rational) return "Q";
  return json{{"Fp", tag.p}};
}

template <class K>
json input_json(const InputDocument<K>& doc) {
  using io_detail::coeff_array_json;
  json a{{"z1", coeff_array_json<K>(doc.matrix.z1)},
         {"z2", coeff_array_json<K>(doc.matrix.z2)},
         {"q1", coeff_array_json<K>(doc.matrix.q1)},
         {"q2", coeff_array_json<K>(doc.matrix.q2)}};
  json out{{"field", field_tag_json(doc.tag)}, {"A", a}};
  auto direction_json = [](const Direction<K>& d) {
    return json{{"l1", coeff_array_json<K>(d.beta1)},
                {"l2", coeff_array_json<K>(d.beta2)},
                {"c1", coeff_array_json<K>(d.c1)},
                {"c2", coeff_array_json<K>(d.c2)}};
  };
  if (doc.b) out["B"] = direction_json(*doc.b);
  if (doc.b2) out["B2"] = direction_json(*doc.b2);
  return out;
}

// ---- report serialization -------------------------------------------------
// Reported polynomials are lists of [monomial, coefficient] pairs in the
// documented monomial order, zero terms omitted.

template <class K, char Var>
json form_json(const TernaryForm<K, Var>& f, const char* base) {
  json out = json::array();
  const auto& monos = monomials_deg(f.degree());
  for (std::size_t i = 0; i < monos.size(); ++i) {
    if (f[static_cast<int>(i)].is_zero()) continue;
    out.push_back(json::array(
        {io_detail::monomial_name(monos[i], base), scalar_json(f[static_cast<int>(i)])}));
  }
  return out;
}

template <class K>
json binary_form_json(const BinaryForm<K>& f) {
  json out = json::array();
  int d = f.degree();
  for (int k = 0; k <= d; ++k) {
    if (f[k].is_zero()) continue;
    std::string name;
    if (d - k > 0) name = io_detail::power_name("u", 1, d - k);
    if (k > 0) {
      if (!name.empty()) name += "*";
      name += io_detail::power_name("u", 2, k);
    }
    if (name.empty()) name = "1";
    out.push_back(json::array({name, scalar_json(f[k])}));
  }
  return out;
}

template <class K>
json d0_form_json(const D0Form<K>& f) {
  json out = json::array();
  for (const auto& [m, c] : f.terms()) {
    std::string name;
    auto append = [&name](const char* base, int var, int exp) {
      if (exp == 0) return;
      if (!name.empty()) name += "*";
      name += io_detail::power_name(base, var, exp);
    };
    append("x", 0, m.i0);
    append("x", 1, m.i1);
    append("x", 2, m.i2);
    append("v", 1, m.j1);
    append("v", 2, m.j2);
    if (name.empty()) name = "1";
    out.push_back(json::array({name, scalar_json(c)}));
  }
  return out;
}

template <class K>
json bigraded_form_json(const BigradedForm<K>& f) {
  json out = json::array();
  for (const auto& [m, c] : f.terms()) {
    std::string name;
    auto append = [&name](const char* base, int var, int exp) {
      if (exp == 0) return;
      if (!name.empty()) name += "*";
      name += io_detail::power_name(base, var, exp);
    };
    append("x", 0, m.i0);
    append("x", 1, m.i1);
    append("x", 2, m.i2);
    append("u", 0, m.j0);
    append("u", 1, m.j1);
    append("u", 2, m.j2);
    if (name.empty()) name = "1";
    out.push_back(json::array({name, scalar_json(c)}));
  }
  return out;
}

template <class K>
json point_json(const PointP2<K>& p) {
  return json::array({scalar_json(p[0]), scalar_json(p[1]), scalar_json(p[2])});
}

template <class K>
json matrix_entries_json(const SheafMatrix<K>& m) {
  return json{{"z1", form_json(m.z1, "x")},
              {"z2", form_json(m.z2, "x")},
              {"q1", form_json(m.q1, "x")},
              {"q2", form_json(m.q2, "x")}};
}

template <class K>
json group_element_json(const GroupElement<K>& g) {
  return json{{"g11", scalar_json(g.g11)}, {"g12", scalar_json(g.g12)},
              {"g21", scalar_json(g.g21)}, {"g22", scalar_json(g.g22)},
              {"lambda", scalar_json(g.lambda)}, {"mu", scalar_json(g.mu)},
              {"z", form_json(g.z, "x")}};
}

template <class K>
json special_form_json(const SpecialForm<K>& s) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(scalar_json(s.x_change.at(i, j)));
    rows.push_back(row);
  }
  return json{{"matrix", matrix_entries_json(s.matrix)},
              {"x_change", rows},
              {"group", group_element_json(s.group)}};
}

template <class K>
json normal_coords_json(const NormalCoords<K>& n) {
  return json{{"n1", scalar_json(n.n1)}, {"n2", scalar_json(n.n2)}, {"is_tangent", n.is_tangent()}};
}

template <class K>
json phi_json(const PhiMatrix<K>& phi) {
  return json{{"e11", bigraded_form_json(phi.e11)},
              {"e21", bigraded_form_json(phi.e21)},
              {"e12", bigraded_form_json(phi.e12)},
              {"e22", bigraded_form_json(phi.e22)}};
}

template <class K>
json support_report_json(const SupportReport<K>& rep) {
  return json{{"c0", d0_form_json(rep.c0)},
              {"c1", form_json(rep.c1, "u")},
              {"boundary", binary_form_json(rep.boundary)},
              {"boundary_class", boundary_class_name(rep.boundary_class)},
              {"conic_class", conic_class_name(rep.conic_class)},
              {"contains_L", rep.contains_L},
              {"q", point_json(rep.q)}};
}

template <class K>
json automorphism_json(const AutomorphismL<K>& a) {
  return json{{"alpha", scalar_json(a.alpha)},
              {"beta", scalar_json(a.beta)},
              {"gamma", scalar_json(a.gamma)}};
}

template <class K>
json orbit_report_json(const OrbitReport<K>& rep) {
  json gens = json::array();
  for (const auto& g : rep.generators) gens.push_back(automorphism_json(g));
  json reps = json::array();
  for (const auto& g : rep.representatives) reps.push_back(automorphism_json(g));
  json out{{"stabilizer_class", stabilizer_class_name(rep.stabilizer_class)},
           {"generators", gens},
           {"representatives", reps},
           {"orbit_description", rep.orbit_description}};
  if (rep.p_B) out["p_B"] = point_json(*rep.p_B);
  if (rep.fp_stabilizer_size >= 0) out["fp_stabilizer_size"] = rep.fp_stabilizer_size;
  if (rep.fp_smooth_points_off_L >= 0) out["fp_smooth_points_off_L"] = rep.fp_smooth_points_off_L;
  if (rep.fp_orbit_count >= 0) out["fp_orbit_count"] = rep.fp_orbit_count;
  return out;
}

template <class K>
json witness_json(const EquivalenceWitness<K>& w) {
  return json{{"alpha", scalar_json(w.alpha)}, {"automorphism", automorphism_json(w.phi_aut)}};
}

inline json hilbert_poly_json(const HilbertPoly& p) {
  return json{{"coefficients", json::array({p[0].str(), p[1].str(), p[2].str()})},
              {"display", p.str()}};
}

}  // namespace rbundles
