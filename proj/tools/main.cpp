// Command-line front end: reads matrices and deformation directions from
// JSON, runs the exact analyses, writes a JSON report to stdout and, with
// --verbose, a human summary to stderr.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rbundles/corpus.hpp"
#include "rbundles/io.hpp"
#include "rbundles/verify.hpp"

namespace {

using namespace rbundles;

constexpr int kExitInput = 1;
constexpr int kExitDomain = 2;
constexpr int kExitInternal = 70;

bool g_verbose = false;

void note(const std::string& line) {
  if (g_verbose) std::cerr << line << "\n";
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path, e.what());
  }
}

// Parses the file and dispatches on its field tag; fn gets InputDocument<K>.
template <class Fn>
int with_input(const std::string& path, Fn&& fn) {
  json doc = load_file(path);
  if (parse_field_tag(doc).rational) return fn(parse_input<Rational>(doc));
  return fn(parse_input<Fp>(doc));
}

template <class K>
int run_analyze(const InputDocument<K>& doc) {
  json out{{"input", input_json(doc)}};
  bool in_x = is_in_X(doc.matrix);
  out["in_X"] = in_x;
  out["in_X8"] = in_x && is_in_X8(doc.matrix);
  if (!out["in_X8"].get<bool>()) {
    note(std::string("matrix is ") + (in_x ? "in X but not in X8" : "not in X"));
    emit(out);
    return 0;
  }

  SpecialForm<K> sf = to_special_form(doc.matrix);
  out["special_form"] = special_form_json(sf);
  note("special form computed; distinguished point moved to [1:0:0]");

  if (doc.b) {
    Direction<K> b = sf.apply(*doc.b);
    NormalCoords<K> n = tangent_and_normal(sf.matrix, b);
    out["normal_coords"] = normal_coords_json(n);
    note("normal coordinates: n1 = " + scalar_str(n.n1) + ", n2 = " + scalar_str(n.n2));

    PhiMatrix<K> phi = build_phi(sf.matrix, b);
    out["phi"] = phi_json(phi);
    SupportReport<K> rep = support_report(phi);
    out["support"] = support_report_json(rep);
    note(std::string("support: boundary ") + boundary_class_name(rep.boundary_class) +
         ", conic " + conic_class_name(rep.conic_class) +
         (rep.contains_L ? ", contains the exceptional line" : ""));
    OrbitReport<K> orbits = stabilizer_orbits(rep, doc.tag.p);
    out["stabilizer"] = orbit_report_json(orbits);
    note(std::string("stabilizer: ") + stabilizer_class_name(orbits.stabilizer_class) + " — " +
         orbits.orbit_description);
    auto [d0, d1] = restriction_hilbert_polys(phi);
    out["restriction_hilbert"] =
        json{{"blowup", hilbert_poly_json(d0)}, {"line", hilbert_poly_json(d1)}};
    note("restriction Hilbert polynomials: " + d0.str() + " and " + d1.str());
  }
  emit(out);
  return 0;
}

template <class K>
int run_equiv(const InputDocument<K>& doc) {
  if (!doc.b) throw InputError("$.B", "equiv needs directions B and B2");
  if (!doc.b2) throw InputError("$.B2", "equiv needs directions B and B2");
  SpecialForm<K> sf = to_special_form(doc.matrix);
  Direction<K> b = sf.apply(*doc.b);
  Direction<K> b2 = sf.apply(*doc.b2);
  json out{{"input", input_json(doc)},
           {"normal_coords_B", normal_coords_json(tangent_and_normal(sf.matrix, b))},
           {"normal_coords_B2", normal_coords_json(tangent_and_normal(sf.matrix, b2))}};
  auto witness = equivalent(sf.matrix, b, b2);
  out["equivalent"] = witness.has_value();
  if (witness) {
    out["witness"] = witness_json(*witness);
    note("equivalent with alpha = " + scalar_str(witness->alpha) + ", automorphism " +
         witness->phi_aut.str());
  } else {
    note("not equivalent: normal coordinates are not proportional");
  }
  emit(out);
  return 0;
}

template <class K>
int run_hilbert(const InputDocument<K>& doc, int max_m) {
  json out{{"input", input_json(doc)}};
  json rows = json::array();
  std::array<long long, 4> first4{};
  for (int m = 1; m <= max_m; ++m) {
    long long dim = plane_hilbert_function(doc.matrix, m);
    if (m <= 4) first4[static_cast<std::size_t>(m - 1)] = dim;
    rows.push_back(json{{"m", m}, {"dimension", dim}});
  }
  out["plane_hilbert_function"] = rows;
  if (max_m >= 4) {
    try {
      out["hilbert_polynomial"] = hilbert_poly_json(HilbertPoly::fit_linear(first4));
    } catch (const DomainError&) {
      out["hilbert_polynomial"] = nullptr;  // values do not lie on a line
    }
  }

  if (doc.b && is_in_X(doc.matrix) && is_in_X8(doc.matrix)) {
    SpecialForm<K> sf = to_special_form(doc.matrix);
    PhiMatrix<K> phi = build_phi(sf.matrix, sf.apply(*doc.b));
    auto [d0, d1] = restriction_hilbert_polys(phi);
    out["restriction_hilbert"] =
        json{{"blowup", hilbert_poly_json(d0)}, {"line", hilbert_poly_json(d1)}};
    json surface = json::array();
    for (int m = 0; m <= std::min(max_m, 6); ++m)
      surface.push_back(json{{"m", m}, {"dimension", hilbert_function_coker(phi, m, m)}});
    out["surface_hilbert_function"] = surface;
  }
  note("plane Hilbert function computed up to m = " + std::to_string(max_m));
  emit(out);
  return 0;
}

int run_cohomology_table() {
  const int twists[11][2] = {{0, -2}, {-1, 0}, {0, -1}, {0, 0}, {1, -1}, {-1, 1},
                             {1, 0},  {0, 1},  {-1, -1}, {1, 1}, {1, 2}};
  json rows = json::array();
  for (const auto& t : twists) {
    long long chi = chi_line_bundle(t[0], t[1]);
    long long h0 = h0_line_bundle(t[0], t[1]);
    rows.push_back(json{{"a", t[0]}, {"b", t[1]}, {"chi", chi}, {"h0", h0}});
    note("O(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "): chi = " +
         std::to_string(chi) + ", h0 = " + std::to_string(h0));
  }
  emit(json{{"line_bundles", rows}});
  return 0;
}

int run_examples() {
  json rows = json::array();
  for (const auto& entry : corpus_examples<Rational>()) {
    PhiMatrix<Rational> phi = build_phi(entry.matrix, canonical_direction_1<Rational>());
    SupportReport<Rational> rep = support_report(phi);
    OrbitReport<Rational> orbits = stabilizer_orbits(rep);
    auto [d0, d1] = restriction_hilbert_polys(phi);
    rows.push_back(json{{"name", entry.name},
                        {"cubic", entry.cubic},
                        {"matrix", matrix_entries_json(entry.matrix)},
                        {"boundary", binary_form_json(rep.boundary)},
                        {"boundary_class", boundary_class_name(rep.boundary_class)},
                        {"conic_class", conic_class_name(rep.conic_class)},
                        {"contains_L", rep.contains_L},
                        {"stabilizer_class", stabilizer_class_name(orbits.stabilizer_class)},
                        {"restriction_hilbert",
                         json{{"blowup", hilbert_poly_json(d0)}, {"line", hilbert_poly_json(d1)}}}});
    note(entry.name + ": " + boundary_class_name(rep.boundary_class) + " / " +
         conic_class_name(rep.conic_class) + " / " +
         stabilizer_class_name(orbits.stabilizer_class));
  }
  emit(json{{"examples", rows}});
  return 0;
}

int run_verify(long long prime, long long samples, unsigned long long seed,
               const std::string& oracle, int jobs) {
  SweepConfig cfg;
  cfg.prime = prime;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.jobs = jobs;
  json out{{"prime", prime}, {"samples", samples}, {"seed", seed}};
  long long failures = 0;

  auto sweep_json = [](const SweepReport& r) {
    json j{{"samples", r.samples}, {"passes", r.passes}, {"failures", r.failures}};
    if (!r.first_counterexample.empty()) j["first_counterexample"] = r.first_counterexample;
    return j;
  };

  if (oracle == "all" || oracle == "singular") {
    SweepReport r = ff_singular_sweep(cfg);
    out["singular"] = sweep_json(r);
    failures += r.failures;
    note("singular sweep: " + std::to_string(r.passes) + "/" + std::to_string(r.samples));
  }
  if (oracle == "all" || oracle == "equiv") {
    EquivalenceSweepReport r = ff_equivalence_sweep(cfg);
    json j{{"positive_samples", r.positive_samples},
           {"positive_passes", r.positive_passes},
           {"negative_samples", r.negative_samples},
           {"negative_passes", r.negative_passes}};
    if (!r.first_counterexample.empty()) j["first_counterexample"] = r.first_counterexample;
    out["equiv"] = j;
    failures += (r.positive_samples - r.positive_passes) + (r.negative_samples - r.negative_passes);
    note("equivalence sweep: +" + std::to_string(r.positive_passes) + "/" +
         std::to_string(r.positive_samples) + ", -" + std::to_string(r.negative_passes) + "/" +
         std::to_string(r.negative_samples));
  }
  if (oracle == "all" || oracle == "stabilizer") {
    SweepReport r = ff_stabilizer_sweep(cfg);
    out["stabilizer"] = sweep_json(r);
    failures += r.failures;
    note("stabilizer sweep: " + std::to_string(r.passes) + "/" + std::to_string(r.samples));
  }
  out["failures"] = failures;
  emit(out);
  return failures == 0 ? 0 : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact invariants of rank-1 sheaves with cubic support, via resolutions on a blown-up plane"};
  app.require_subcommand(1);
  app.add_flag("--verbose", g_verbose, "print a human-readable summary to stderr");

  std::string file;
  auto* analyze = app.add_subcommand("analyze", "membership, special form, resolution, support, stabilizer");
  analyze->add_option("file", file, "input JSON document")->required();

  auto* equiv = app.add_subcommand("equiv", "decide whether directions B and B2 give equivalent sheaves");
  equiv->add_option("file", file, "input JSON document with B and B2")->required();

  int max_m = 4;
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert function and polynomial of the plane cokernel");
  hilbert->add_option("file", file, "input JSON document")->required();
  hilbert->add_option("--max-m", max_m, "largest twist to tabulate")->check(CLI::Range(1, 24));

  auto* cohom = app.add_subcommand("cohomology-table", "chi and h0 for the standard line-bundle twists");

  auto* examples = app.add_subcommand("examples", "classification table of the built-in example matrices");

  long long prime = 7, samples = 100;
  unsigned long long seed = 0;
  std::string oracle_kind = "all";
  int jobs = 0;
  auto* verify = app.add_subcommand("verify", "randomized finite-field oracles over F_p");
  verify->add_option("--prime", prime, "odd prime field size")->default_val(7);
  verify->add_option("--samples", samples, "samples per oracle")->default_val(100);
  verify->add_option("--seed", seed, "base seed")->default_val(0);
  verify->add_option("--oracle", oracle_kind, "which oracle to run")
      ->check(CLI::IsMember({"all", "singular", "equiv", "stabilizer"}))
      ->default_val("all");
  verify->add_option("--jobs", jobs, "worker threads (0: RBUNDLES_JOBS or hardware)")->default_val(0);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return with_input(file, [](const auto& doc) { return run_analyze(doc); });
    if (equiv->parsed()) return with_input(file, [](const auto& doc) { return run_equiv(doc); });
    if (hilbert->parsed())
      return with_input(file, [max_m](const auto& doc) { return run_hilbert(doc, max_m); });
    if (cohom->parsed()) return run_cohomology_table();
    if (examples->parsed()) return run_examples();
    if (verify->parsed()) return run_verify(prime, samples, seed, oracle_kind, jobs);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    if (e.code() == ErrorCode::Internal) {
      std::cerr << "internal error: " << e.what() << "\n";
      return kExitInternal;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;  // unreachable: require_subcommand(1)
}
