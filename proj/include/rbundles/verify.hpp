#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "rbundles/errors.hpp"
#include "rbundles/forms.hpp"
#include "rbundles/moduli.hpp"
#include "rbundles/rbundle.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

struct SweepConfig {
  long long prime = 7;
  long long samples = 100;
  unsigned long long seed = 0;
  int jobs = 0;  // 0: RBUNDLES_JOBS env var, else hardware concurrency
};

struct SweepReport {
  long long samples = 0;
  long long passes = 0;
  long long failures = 0;
  std::string first_counterexample;  // empty when clean
};

struct EquivalenceSweepReport {
  long long positive_samples = 0;
  long long positive_passes = 0;
  long long negative_samples = 0;
  long long negative_passes = 0;
  std::string first_counterexample;
};

namespace detail {

inline void validate(const SweepConfig& cfg) {
  if (!is_prime(cfg.prime) || cfg.prime < 3)
    throw DomainError(ErrorCode::Precondition, "sweep needs an odd prime");
  if (cfg.samples < 1) throw DomainError(ErrorCode::Precondition, "sweep needs at least one sample");
}

inline int worker_count(const SweepConfig& cfg) {
  if (cfg.jobs > 0) return cfg.jobs;
  if (const char* env = std::getenv("RBUNDLES_JOBS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One generator per sample index, so a report does not depend on how the
// samples were split across workers.
inline std::mt19937_64 sample_rng(const SweepConfig& cfg, long long index) {
  return std::mt19937_64(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(index)));
}

inline Fp draw(std::mt19937_64& rng, long long p) {
  return Fp(static_cast<long long>(rng() % static_cast<std::uint64_t>(p)), p);
}

inline SpecialCoefficients<Fp> random_special(std::mt19937_64& rng, long long p) {
  while (true) {
    SpecialCoefficients<Fp> s;
    s.a01 = draw(rng, p); s.a02 = draw(rng, p); s.a11 = draw(rng, p);
    s.a12 = draw(rng, p); s.a22 = draw(rng, p);
    s.b01 = draw(rng, p); s.b02 = draw(rng, p); s.b11 = draw(rng, p);
    s.b12 = draw(rng, p); s.b22 = draw(rng, p);
    if (!s.matrix().det().is_zero()) return s;
  }
}

inline Direction<Fp> random_direction(std::mt19937_64& rng, long long p) {
  std::array<Fp, 18> c;
  for (auto& v : c) v = draw(rng, p);
  return Direction<Fp>::from_coords(c);
}

// Project a direction onto the tangent space by overwriting the two x0^2
// coefficients with the values the tangent system forces.
inline Direction<Fp> make_tangent(const SpecialCoefficients<Fp>& s, Direction<Fp> d) {
  d.c1[0] = s.a01 * d.beta1[0] + s.a02 * d.beta2[0];
  d.c2[0] = s.b01 * d.beta1[0] + s.b02 * d.beta2[0];
  return d;
}

inline Direction<Fp> random_normal_direction(const SpecialCoefficients<Fp>& s,
                                             std::mt19937_64& rng, long long p) {
  while (true) {
    Direction<Fp> d = random_direction(rng, p);
    if (!tangent_and_normal(s.matrix(), d).is_tangent()) return d;
  }
}

// Representatives of the projective plane over F_p: (1,y,z), (0,1,z), (0,0,1).
inline std::vector<std::array<Fp, 3>> projective_points(long long p) {
  std::vector<std::array<Fp, 3>> pts;
  pts.reserve(static_cast<std::size_t>(p * p + p + 1));
  for (long long y = 0; y < p; ++y)
    for (long long z = 0; z < p; ++z) pts.push_back({Fp(1, p), Fp(y, p), Fp(z, p)});
  for (long long z = 0; z < p; ++z) pts.push_back({Fp(0, p), Fp(1, p), Fp(z, p)});
  pts.push_back({Fp(0, p), Fp(0, p), Fp(1, p)});
  return pts;
}

// Runs fn(sample_index) over [0, samples) on the configured worker count.
template <class Fn>
void parallel_samples(const SweepConfig& cfg, Fn&& fn) {
  int jobs = worker_count(cfg);
  if (jobs <= 1 || cfg.samples < 2 * jobs) {
    for (long long i = 0; i < cfg.samples; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&fn, w, jobs, total = cfg.samples] {
      for (long long i = w; i < total; i += jobs) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct SampleOutcome {
  bool pass = true;
  std::string note;
};

// Order-insensitive aggregation: counts plus the counterexample with the
// smallest sample index.
inline void aggregate(SweepReport& rep, std::vector<SampleOutcome>& outcomes) {
  rep.samples = static_cast<long long>(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.pass) {
      ++rep.passes;
    } else {
      ++rep.failures;
      if (rep.first_counterexample.empty()) rep.first_counterexample = o.note;
    }
  }
}

}  // namespace detail

// Exhaustive check of the local-freeness criterion: over the embedded
// plane the four matrix entries have a common zero exactly when the
// direction is tangent, and then only at the distinguished point q.
inline SweepReport ff_singular_sweep(const SweepConfig& cfg) {
  detail::validate(cfg);
  const long long p = cfg.prime;
  auto points = detail::projective_points(p);
  std::vector<detail::SampleOutcome> outcomes(static_cast<std::size_t>(cfg.samples));

  detail::parallel_samples(cfg, [&](long long i) {
    try {
      auto rng = detail::sample_rng(cfg, i);
      auto s = detail::random_special(rng, p);
      SheafMatrix<Fp> a = s.matrix();
      // Half the samples probe an exactly-tangent direction.
      Direction<Fp> d = detail::random_direction(rng, p);
      if (i % 2 == 1) d = detail::make_tangent(s, d);
      NormalCoords<Fp> n = tangent_and_normal(a, d);

      PhiMatrix<Fp> phi = build_phi_unchecked(a, d);
      FormU<Fp> f11 = phi.e11.restrict_d1(), f21 = phi.e21.restrict_d1();
      FormU<Fp> f12 = phi.e12.restrict_d1(), f22 = phi.e22.restrict_d1();
      std::vector<std::array<Fp, 3>> zeros;
      for (const auto& pt : points)
        if (f11.evaluate(pt).is_zero() && f21.evaluate(pt).is_zero() &&
            f12.evaluate(pt).is_zero() && f22.evaluate(pt).is_zero())
          zeros.push_back(pt);

      bool ok;
      if (n.is_tangent()) {
        std::array<Fp, 3> q{Fp(1, p), -phi.xi0(), -phi.eta0()};
        ok = zeros.size() == 1 && PointP2<Fp>(zeros[0]) == PointP2<Fp>(q);
      } else {
        ok = zeros.empty();
      }
      if (!ok)
        outcomes[static_cast<std::size_t>(i)] = {
            false, "sample " + std::to_string(i) + ": " + std::to_string(zeros.size()) +
                       " vanishing points with n = (" + n.n1.str() + ", " + n.n2.str() + ")"};
    } catch (const DomainError& e) {
      outcomes[static_cast<std::size_t>(i)] = {false,
                                               "sample " + std::to_string(i) + ": " + e.what()};
    }
  });

  SweepReport rep;
  detail::aggregate(rep, outcomes);
  return rep;
}

// Randomized check of the normal-space bijection: directions differing by a
// scaled tangent vector give equivalent sheaves with the predicted witness;
// directions with non-proportional normal coordinates do not.
inline EquivalenceSweepReport ff_equivalence_sweep(const SweepConfig& cfg) {
  detail::validate(cfg);
  const long long p = cfg.prime;
  struct Outcome {
    bool pos_pass = true, neg_pass = true;
    std::string note;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.samples));

  detail::parallel_samples(cfg, [&](long long i) {
    auto& out = outcomes[static_cast<std::size_t>(i)];
    try {
      auto rng = detail::sample_rng(cfg, i);
      auto s = detail::random_special(rng, p);
      SheafMatrix<Fp> a = s.matrix();

      Direction<Fp> b1 = detail::random_normal_direction(s, rng, p);
      Fp alpha = Fp(1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(p - 1)), p);
      Direction<Fp> t = detail::make_tangent(s, detail::random_direction(rng, p));
      Direction<Fp> b2 = alpha * b1 + t;
      auto witness = equivalent(a, b1, b2);
      if (!witness.has_value() || !(witness->alpha == alpha)) {
        out.pos_pass = false;
        out.note = "sample " + std::to_string(i) + ": constructed pair not recognized";
      }

      // Non-proportional partner: normal coordinates with a nonzero cross determinant.
      NormalCoords<Fp> n1 = tangent_and_normal(a, b1);
      Direction<Fp> b3;
      while (true) {
        b3 = detail::random_normal_direction(s, rng, p);
        NormalCoords<Fp> n3 = tangent_and_normal(a, b3);
        if (!(n1.n1 * n3.n2 - n1.n2 * n3.n1).is_zero()) break;
      }
      if (equivalent(a, b1, b3).has_value()) {
        out.neg_pass = false;
        if (out.note.empty())
          out.note = "sample " + std::to_string(i) + ": non-proportional pair accepted";
      }
    } catch (const DomainError& e) {
      out.pos_pass = false;
      out.neg_pass = false;
      out.note = "sample " + std::to_string(i) + ": " + e.what();
    }
  });

  EquivalenceSweepReport rep;
  rep.positive_samples = rep.negative_samples = cfg.samples;
  for (const auto& o : outcomes) {
    if (o.pos_pass) ++rep.positive_passes;
    if (o.neg_pass) ++rep.negative_passes;
    if (!o.note.empty() && rep.first_counterexample.empty()) rep.first_counterexample = o.note;
  }
  return rep;
}

// Brute-force stabilizer of a conic: every (alpha, beta, gamma) with alpha
// nonzero whose substitution maps c1 to a scalar multiple of itself.
inline std::vector<AutomorphismL<Fp>> ff_stabilizer_count(const FormU<Fp>& c1, long long p) {
  if (!is_prime(p) || p < 3)
    throw DomainError(ErrorCode::Precondition, "stabilizer enumeration needs an odd prime");
  if (c1.is_zero()) throw DomainError(ErrorCode::DegenerateConic, "conic vanishes identically");
  std::vector<AutomorphismL<Fp>> found;
  for (long long a = 1; a < p; ++a)
    for (long long b = 0; b < p; ++b)
      for (long long g = 0; g < p; ++g) {
        AutomorphismL<Fp> el{Fp(a, p), Fp(b, p), Fp(g, p)};
        if (detail::proportional(c1, el.pull_back(c1))) found.push_back(el);
      }
  return found;
}

// Randomized check of the stabilizer classification: the analytic size
// reported for a random support conic must match the brute-force count over
// all (p-1)*p^2 substitutions.
inline SweepReport ff_stabilizer_sweep(const SweepConfig& cfg) {
  detail::validate(cfg);
  const long long p = cfg.prime;
  std::vector<detail::SampleOutcome> outcomes(static_cast<std::size_t>(cfg.samples));

  detail::parallel_samples(cfg, [&](long long i) {
    try {
      auto rng = detail::sample_rng(cfg, i);
      auto s = detail::random_special(rng, p);
      SheafMatrix<Fp> a = s.matrix();
      Direction<Fp> b = detail::random_normal_direction(s, rng, p);
      SupportReport<Fp> rep = support_report(build_phi(a, b));
      OrbitReport<Fp> orbits = stabilizer_orbits(rep);
      long long brute = static_cast<long long>(ff_stabilizer_count(rep.c1, p).size());
      if (orbits.fp_stabilizer_size != brute)
        outcomes[static_cast<std::size_t>(i)] = {
            false, "sample " + std::to_string(i) + ": classified as " +
                       stabilizer_class_name(orbits.stabilizer_class) + " with size " +
                       std::to_string(orbits.fp_stabilizer_size) + ", enumeration found " +
                       std::to_string(brute)};
    } catch (const DomainError& e) {
      outcomes[static_cast<std::size_t>(i)] = {false,
                                               "sample " + std::to_string(i) + ": " + e.what()};
    }
  });

  SweepReport rep;
  detail::aggregate(rep, outcomes);
  return rep;
}

}  // namespace rbundles
