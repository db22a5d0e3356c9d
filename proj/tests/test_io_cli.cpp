#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rbundles/corpus.hpp"
#include "rbundles/io.hpp"

using namespace rbundles;
using Q = Rational;

namespace {

template <class F>
std::string input_error_field(F&& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.field();
  }
  return "";
}

json nodal_doc() {
  return json::parse(R"({
    "field": "Q",
    "A": {"z1": [0,1,0], "z2": [0,0,1], "q1": [0,0,1,0,0,1], "q2": [0,1,0,0,0,0]},
    "B": {"l1": [0,0,0], "l2": [0,0,0], "c1": [1,0,0,0,0,0], "c2": [0,0,0,0,0,0]}
  })");
}

bool has_pair(const json& arr, const char* name, const json& coeff) {
  for (const auto& item : arr)
    if (item.is_array() && item.size() == 2 && item[0] == name && item[1] == coeff) return true;
  return false;
}

}  // namespace

TEST_CASE("field tags parse and reject bad moduli") {
  CHECK(parse_field_tag(json::parse(R"({"field": "Q", "A": {}})")) == FieldTag{true, 0});
  CHECK(parse_field_tag(json::parse(R"({"field": {"Fp": 7}})")) == FieldTag{false, 7});
  CHECK(input_error_field([] { parse_field_tag(json::parse(R"({"field": {"Fp": 6}})")); }) ==
        "$.field.Fp");
  CHECK(input_error_field([] { parse_field_tag(json::parse(R"({"field": "R"})")); }) ==
        "$.field");
  CHECK(input_error_field([] { parse_field_tag(json::parse(R"({"A": {}})")); }) == "$.field");
  CHECK(input_error_field([] { parse_field_tag(json::parse("[1,2]")); }) == "$");
}

TEST_CASE("documents parse into the frozen coordinate layout") {
  InputDocument<Q> doc = parse_input<Q>(nodal_doc());
  CHECK(doc.tag == FieldTag{true, 0});
  CHECK(doc.matrix == corpus_examples<Q>()[0].matrix);
  REQUIRE(doc.b.has_value());
  CHECK(*doc.b == canonical_direction_1<Q>());
  CHECK_FALSE(doc.b2.has_value());

  // Serialization round trip (coefficients come back as canonical strings).
  CHECK(parse_input<Q>(input_json(doc)) == doc);

  // Rationals accept both integer literals and "n/d" strings.
  json frac = nodal_doc();
  frac["A"]["q1"][2] = "1/2";
  CHECK(parse_input<Q>(frac).matrix.q1.coeff({1, 0, 1}) == Q(1, 2));
}

TEST_CASE("prime-field documents carry the modulus everywhere") {
  json doc = nodal_doc();
  doc["field"] = json{{"Fp", 7}};
  InputDocument<Fp> parsed = parse_input<Fp>(doc);
  CHECK(parsed.tag == FieldTag{false, 7});
  CHECK(parsed.matrix.q1.coeff({1, 0, 1}).modulus() == 7);
  CHECK(parsed.matrix == corpus_examples<Fp>(7)[0].matrix);

  // Residues must be plain integers over a prime field.
  json bad = doc;
  bad["A"]["z1"][1] = "1/2";
  CHECK(input_error_field([&] { parse_input<Fp>(bad); }) == "$.A.z1[1]");
}

TEST_CASE("parser names the offending field") {
  json base = nodal_doc();

  json missing = base;
  missing["A"].erase("q2");
  CHECK(input_error_field([&] { parse_input<Q>(missing); }) == "$.A.q2");

  json short_row = base;
  short_row["A"]["z1"] = json::array({0, 1});
  CHECK(input_error_field([&] { parse_input<Q>(short_row); }) == "$.A.z1");

  json bad_coeff = base;
  bad_coeff["A"]["q1"][3] = "x";
  CHECK(input_error_field([&] { parse_input<Q>(bad_coeff); }) == "$.A.q1[3]");

  json unknown = base;
  unknown["extra"] = 1;
  CHECK(input_error_field([&] { parse_input<Q>(unknown); }) == "$.extra");

  json bad_b = base;
  bad_b["B"]["l3"] = json::array({0, 0, 0});
  CHECK(input_error_field([&] { parse_input<Q>(bad_b); }) == "$.B.l3");

  // Scalar type must match the tag.
  CHECK(input_error_field([&] { parse_input<Fp>(base); }) == "$.field");

  // Errors carry the path in what() too.
  try {
    parse_input<Q>(unknown);
    FAIL("expected an input error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("$.extra") != std::string::npos);
  }
}

TEST_CASE("scalars serialize per field") {
  CHECK(scalar_json(Q(-1, 2)) == json("-1/2"));
  CHECK(scalar_json(Q(3)) == json("3"));
  CHECK(scalar_json(Fp(3, 7)) == json(3));
}

TEST_CASE("frozen report shapes") {
  auto nodal = corpus_examples<Q>()[0].matrix;
  PhiMatrix<Q> phi = build_phi(nodal, canonical_direction_1<Q>());
  SupportReport<Q> rep = support_report(phi);

  SECTION("plane forms as ordered monomial/coefficient pairs") {
    CHECK(form_json(nodal.q1, "x") ==
          json::parse(R"([["x0*x2","1"],["x2^2","1"]])"));
    CHECK(form_json(FormX<Q>(2), "x") == json::array());
  }

  SECTION("support report") {
    json s = support_report_json(rep);
    CHECK(s["c1"] == json::parse(R"([["u0*u2","-1"],["u1^2","1"],["u2^2","-1"]])"));
    CHECK(s["boundary"] == json::parse(R"([["u1^2","1"],["u2^2","-1"]])"));
    CHECK(s["boundary_class"] == "TwoPoints");
    CHECK(s["conic_class"] == "Smooth");
    CHECK(s["contains_L"] == false);
    CHECK(s["q"] == json::parse(R"(["1","0","0"])"));
  }

  SECTION("resolution matrix") {
    json p = phi_json(phi);
    CHECK(p["e11"] == json::parse(R"([["u1","1"]])"));
    CHECK(p["e21"] == json::parse(R"([["u2","1"]])"));
    CHECK(has_pair(p["e12"], "x0*u0", json("1")));
    CHECK(has_pair(p["e12"], "x0*u2", json("1")));
    CHECK(has_pair(p["e12"], "x2*u2", json("1")));
    CHECK(p["e12"].size() == 3);
    CHECK(p["e22"] == json::parse(R"([["x0*u1","1"]])"));
  }

  SECTION("stabilizer report") {
    json o = orbit_report_json(stabilizer_orbits(rep));
    CHECK(o["stabilizer_class"] == "OrderTwo");
    REQUIRE(o["generators"].size() == 1);
    CHECK(o["generators"][0] ==
          json::parse(R"({"alpha":"-1","beta":"0","gamma":"1"})"));
    CHECK_FALSE(o.contains("p_B"));
    CHECK_FALSE(o.contains("fp_stabilizer_size"));
  }

  SECTION("special form certificate") {
    json s = special_form_json(to_special_form(nodal));
    CHECK(s["matrix"]["z1"] == json::parse(R"([["x1","1"]])"));
    CHECK(s["matrix"]["z2"] == json::parse(R"([["x2","1"]])"));
    CHECK(s["x_change"] ==
          json::parse(R"([["1","0","0"],["0","1","0"],["0","0","1"]])"));
    CHECK(s["group"]["lambda"] == "1");
    CHECK(s["group"]["z"] == json::array());  // zero linear form
  }

  SECTION("normal coordinates and witnesses") {
    json n = normal_coords_json(tangent_and_normal(nodal, canonical_direction_1<Q>()));
    CHECK(n == json::parse(R"({"n1":"1","n2":"0","is_tangent":false})"));

    auto w = equivalent(nodal, canonical_direction_1<Q>(),
                        Q(2) * canonical_direction_1<Q>());
    REQUIRE(w.has_value());
    json wj = witness_json(*w);
    CHECK(wj["alpha"] == "2");
    CHECK(wj["automorphism"]["alpha"] == "2");
  }

  SECTION("hilbert polynomial") {
    json h = hilbert_poly_json(hilbert_poly_line_bundle(0, 0));
    CHECK(h["display"] == "2*m^2 + 3*m + 1");
    CHECK(h["coefficients"] == json::parse(R"(["1","3","2"])"));
  }
}

// ---- CLI subprocess tests ---------------------------------------------------

namespace {

struct CliResult {
  int code = -1;
  json out;
  std::string err;
};

std::string fixture(const std::string& name) {
  return std::string(RBUNDLES_FIXTURE_DIR) + "/" + name;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path();
  std::string tag = std::to_string(::getpid()) + "-" + std::to_string(counter++);
  std::string out_path = (dir / ("rbundles-test-out-" + tag)).string();
  std::string err_path = (dir / ("rbundles-test-err-" + tag)).string();
  std::string cmd = std::string("'") + RBUNDLES_CLI_PATH + "' " + args + " > '" + out_path +
                    "' 2> '" + err_path + "'";
  int rc = std::system(cmd.c_str());

  CliResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream out_file(out_path);
  std::stringstream out_ss;
  out_ss << out_file.rdbuf();
  if (!out_ss.str().empty()) {
    try {
      r.out = json::parse(out_ss.str());
    } catch (...) {
      r.out = nullptr;
    }
  }
  std::ifstream err_file(err_path);
  std::stringstream err_ss;
  err_ss << err_file.rdbuf();
  r.err = err_ss.str();
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

}  // namespace

TEST_CASE("cli analyze classifies the nodal fixture") {
  CliResult r = run_cli("analyze '" + fixture("nodal.json") + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out["in_X"] == true);
  CHECK(r.out["in_X8"] == true);
  CHECK(r.out["normal_coords"] ==
        json::parse(R"({"n1":"1","n2":"0","is_tangent":false})"));
  CHECK(r.out["support"]["boundary_class"] == "TwoPoints");
  CHECK(r.out["support"]["conic_class"] == "Smooth");
  CHECK(r.out["support"]["q"] == json::parse(R"(["1","0","0"])"));
  CHECK(r.out["stabilizer"]["stabilizer_class"] == "OrderTwo");
  CHECK(r.out["restriction_hilbert"]["blowup"]["display"] == "4*m + 1");
  CHECK(r.out["restriction_hilbert"]["line"]["display"] == "2*m + 2");
  CHECK(r.err.empty());
}

TEST_CASE("cli analyze over a prime field reports counting data") {
  CliResult r = run_cli("analyze '" + fixture("fp-nodal.json") + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out["support"]["q"] == json::array({1, 0, 0}));
  CHECK(r.out["stabilizer"]["fp_stabilizer_size"] == 2);
  CHECK(r.out["stabilizer"]["fp_smooth_points_off_L"] == 6);
  CHECK(r.out["stabilizer"]["fp_orbit_count"] == 3);
}

TEST_CASE("cli analyze stops cleanly off the singular stratum") {
  CliResult r = run_cli("analyze '" + fixture("not-in-x8.json") + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out["in_X"] == true);
  CHECK(r.out["in_X8"] == false);
  CHECK_FALSE(r.out.contains("special_form"));
}

TEST_CASE("cli equiv reports the witness") {
  CliResult r = run_cli("equiv '" + fixture("equiv-pair.json") + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out["equivalent"] == true);
  CHECK(r.out["normal_coords_B"]["n1"] == "1");
  CHECK(r.out["witness"]["alpha"] == "1");
  CHECK(r.out["witness"]["automorphism"] ==
        json::parse(R"({"alpha":"1","beta":"0","gamma":"1"})"));
}

TEST_CASE("cli hilbert tabulates the plane and surface functions") {
  CliResult r = run_cli("hilbert '" + fixture("nodal.json") + "'");
  REQUIRE(r.code == 0);
  const auto& rows = r.out["plane_hilbert_function"];
  REQUIRE(rows.size() == 4);
  for (int m = 1; m <= 4; ++m) {
    CHECK(rows[m - 1]["m"] == m);
    CHECK(rows[m - 1]["dimension"] == 3 * m + 1);
  }
  CHECK(r.out["hilbert_polynomial"]["display"] == "3*m + 1");
  CHECK(r.out["restriction_hilbert"]["blowup"]["display"] == "4*m + 1");
  const auto& surface = r.out["surface_hilbert_function"];
  REQUIRE(surface.size() == 5);
  CHECK(surface[0]["dimension"] == 1);
  for (int m = 1; m <= 3; ++m) CHECK(surface[m]["dimension"] == 6 * m + 1);
}

TEST_CASE("cli cohomology table matches chi") {
  CliResult r = run_cli("cohomology-table");
  REQUIRE(r.code == 0);
  const auto& rows = r.out["line_bundles"];
  REQUIRE(rows.size() == 11);
  for (const auto& row : rows) CHECK(row["h0"] == row["chi"]);
}

TEST_CASE("cli examples table is the frozen classification") {
  CliResult r = run_cli("examples");
  REQUIRE(r.code == 0);
  const auto& rows = r.out["examples"];
  REQUIRE(rows.size() == 7);
  CHECK(rows[0]["name"] == "nodal");
  CHECK(rows[0]["stabilizer_class"] == "OrderTwo");
  CHECK(rows[1]["name"] == "cuspidal");
  CHECK(rows[1]["stabilizer_class"] == "Trivial");
  CHECK(rows[2]["name"] == "simple-three-lines");
  CHECK(rows[2]["stabilizer_class"] == "MultiplicativeGroup");
  CHECK(rows[3]["name"] == "three-lines-through-point");
  CHECK(rows[3]["contains_L"] == true);
  CHECK(rows[3]["stabilizer_class"] == "ContainsLTransitive");
  for (const auto& row : rows) {
    CHECK(row["restriction_hilbert"]["blowup"]["display"] == "4*m + 1");
    CHECK(row["restriction_hilbert"]["line"]["display"] == "2*m + 2");
  }
}

TEST_CASE("cli verify runs the oracles clean") {
  CliResult r = run_cli("verify --prime 5 --samples 20 --seed 42");
  REQUIRE(r.code == 0);
  CHECK(r.out["failures"] == 0);
  CHECK(r.out["singular"]["passes"] == 20);
  CHECK(r.out["equiv"]["positive_passes"] == 20);
  CHECK(r.out["equiv"]["negative_passes"] == 20);
  CHECK(r.out["stabilizer"]["passes"] == 20);
}

TEST_CASE("cli exit codes distinguish input and domain errors") {
  SECTION("unknown field: input error") {
    CliResult r = run_cli("analyze '" + fixture("bad-input.json") + "'");
    CHECK(r.code == 1);
    CHECK(r.err.find("$.extra") != std::string::npos);
  }
  SECTION("tangent direction: domain error") {
    CliResult r = run_cli("analyze '" + fixture("tangent.json") + "'");
    CHECK(r.code == 2);
    CHECK(r.err.find("tangent") != std::string::npos);
  }
  SECTION("equiv without B2: input error") {
    CliResult r = run_cli("equiv '" + fixture("nodal.json") + "'");
    CHECK(r.code == 1);
    CHECK(r.err.find("$.B2") != std::string::npos);
  }
  SECTION("missing file: input error") {
    CliResult r = run_cli("analyze /nonexistent-rbundles-input.json");
    CHECK(r.code == 1);
  }
  SECTION("flag validation is handled by the parser") {
    CliResult r = run_cli("hilbert '" + fixture("nodal.json") + "' --max-m 0");
    CHECK(r.code != 0);
  }
}

TEST_CASE("cli verbose mode writes a summary to stderr") {
  CliResult r = run_cli("--verbose analyze '" + fixture("nodal.json") + "'");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("special form") != std::string::npos);
  CHECK(r.err.find("stabilizer") != std::string::npos);
}
