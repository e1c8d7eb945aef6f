#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>

#include "qasep/ctmc.hpp"
#include "qasep/rainbow.hpp"
#include "qasep/simulate.hpp"

using namespace qasep;

TEST_CASE("master equation: t = 0 and mass conservation") {
  ModelParams p{1.5, 0.3, Window{0, 2}, {}};
  RateMatrix Q = build_dynamic_generator(p);
  Distribution p0 = Distribution::point_mass(Q.dim(), 0b011);
  Distribution at0 = master_equation_solve(Q, p0, 0.0);
  REQUIRE(at0.p == p0.p);

  for (double t : {0.1, 1.0, 7.0}) {
    Distribution pt = master_equation_solve(Q, p0, t);
    double mass = 0.0;
    for (double v : pt.p) {
      REQUIRE(v >= 0.0);
      mass += v;
    }
    REQUIRE(std::fabs(mass - 1.0) <= 1e-10);
  }
}

TEST_CASE("master equation matches the two-state closed form") {
  const double a = 0.7, b = 0.3;
  RateMatrix Q(2);
  Q.add(0, 1, a);
  Q.add(1, 0, b);
  for (double t : {0.05, 0.5, 2.0, 10.0}) {
    Distribution pt = master_equation_solve(Q, Distribution::point_mass(2, 0), t);
    double stat = b / (a + b);
    double want0 = stat + (1.0 - stat) * std::exp(-(a + b) * t);
    REQUIRE(std::fabs(pt.p[0] - want0) <= 1e-12);
    REQUIRE(std::fabs(pt.p[1] - (1.0 - want0)) <= 1e-12);
  }
}

TEST_CASE("master equation long-horizon splitting stays accurate") {
  const double a = 1.9, b = 0.6;
  RateMatrix Q(2);
  Q.add(0, 1, a);
  Q.add(1, 0, b);
  Distribution pt = master_equation_solve(Q, Distribution::point_mass(2, 0), 400.0);
  REQUIRE(std::fabs(pt.p[0] - b / (a + b)) <= 1e-11);
}

TEST_CASE("master equation rejects dimension mismatch") {
  RateMatrix Q(3);
  Distribution bad = Distribution::point_mass(2, 0);
  REQUIRE_THROWS_AS(master_equation_solve(Q, bad, 1.0), DimensionMismatch);
}

TEST_CASE("gillespie: frozen chain and determinism") {
  RateMatrix Q(4);  // all rates zero
  Trajectory t = gillespie_run(Q, 2, 5.0, 42);
  REQUIRE(t.states.size() == 1);
  REQUIRE(t.final_state() == 2);

  ModelParams p{1.5, 0.0, Window{0, 2}, {}};
  RateMatrix dyn = build_dynamic_generator(p);
  Trajectory t1 = gillespie_run(dyn, 0b001, 3.0, 7);
  Trajectory t2 = gillespie_run(dyn, 0b001, 3.0, 7);
  REQUIRE(t1.times == t2.times);
  REQUIRE(t1.states == t2.states);
  Trajectory t3 = gillespie_run(dyn, 0b001, 3.0, 8);
  REQUIRE(t1.states != t3.states);
}

TEST_CASE("gillespie trajectories make legal moves at increasing times") {
  ModelParams p{1.7, 0.4, Window{-1, 1}, {}};
  RateMatrix Q = build_dynamic_generator(p);
  auto dense = Q.dense();
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    Trajectory t = gillespie_run(Q, 0b011, 4.0, seed);
    for (size_t i = 1; i < t.states.size(); ++i) {
      REQUIRE(t.times[i] > t.times[i - 1]);
      REQUIRE(dense[t.states[i - 1]][t.states[i]] > 0.0);
      REQUIRE(std::popcount((unsigned)t.states[i]) ==
              std::popcount((unsigned)t.states[0]));
    }
  }
}

namespace {

Distribution empirical_distribution(const RateMatrix& Q, int initial, double t,
                                    long runs, uint64_t base) {
  GillespieSampler sampler(Q);
  std::vector<double> counts(Q.dim(), 0.0);
  for (long i = 0; i < runs; ++i)
    counts[sampler.run(initial, t, SplitMix64::stream_seed(base, i)).final_state()] +=
        1.0;
  for (double& c : counts) c /= (double)runs;
  return Distribution{counts};
}

}  // namespace

TEST_CASE("gillespie agrees with the oracle in total variation") {
  const long runs = 100000;
  const double t = 1.0;

  ModelParams p{1.5, 0.4, Window{0, 2}, {}};
  RateMatrix dyn = build_dynamic_generator(p);
  int init = 0b011;
  Distribution oracle = master_equation_solve(dyn, Distribution::point_mass(dyn.dim(), init), t);
  REQUIRE(total_variation(empirical_distribution(dyn, init, t, runs, 11), oracle) <=
          0.02);

  RateMatrix asep = build_asep_generator(Window{0, 2}, 1.0, 1.5);
  oracle = master_equation_solve(asep, Distribution::point_mass(asep.dim(), init), t);
  REQUIRE(total_variation(empirical_distribution(asep, init, t, runs, 12), oracle) <=
          0.02);

  RainbowSpace space(Window{0, 2}, 2);
  RateMatrix rb = build_rainbow_generator(space, 1.5, RainbowSign::plus);
  int rinit = space.index(RainbowState{{1, 0}, {1, 2}});
  oracle = master_equation_solve(rb, Distribution::point_mass(rb.dim(), rinit), t);
  REQUIRE(total_variation(empirical_distribution(rb, rinit, t, runs, 13), oracle) <=
          0.02);
}

TEST_CASE("ensemble height stats: degenerate and single-sample cases") {
  EnsembleRequest req;
  req.q = 1.3;
  req.rho = 0.0;
  req.t = 0.0;
  req.site = 0;
  req.samples = 50;
  req.base_seed = 5;
  EnsembleStats s = ensemble_height_stats(req);
  REQUIRE(s.sample_count == 50);
  for (double v : s.values) REQUIRE(v == 0.0);  // h_0^+ = rho at step IC
  REQUIRE(s.variance == 0.0);
  REQUIRE(s.bins.size() == 1);

  req.t = 0.7;
  req.samples = 1;
  EnsembleStats one = ensemble_height_stats(req);
  REQUIRE(one.mean == one.values[0]);
}

TEST_CASE("ensemble height stats are deterministic in the base seed") {
  EnsembleRequest req;
  req.q = 1.4;
  req.t = 2.0;
  req.samples = 64;
  req.base_seed = 99;
  req.threads = 2;
  EnsembleStats s1 = ensemble_height_stats(req);
  req.threads = 1;
  EnsembleStats s2 = ensemble_height_stats(req);
  REQUIRE(s1.values == s2.values);
}

TEST_CASE("ensemble mean matches the master-equation mean") {
  // Small window, small t: the light cone stays far from both boundaries, so
  // the engine on its padded window and the oracle on [-6,6] agree.
  const double q = 1.5, rho = 0.0, t = 0.4;
  ModelParams p{q, rho, Window{-6, 6}, {}};
  RateMatrix Q = build_dynamic_generator(p);
  auto step = OccupationConfig::step(p.window);
  Distribution p0 = Distribution::point_mass(Q.dim(), (int)step.to_bits());
  Distribution pt = master_equation_solve(Q, p0, t);
  double oracle_mean = 0.0;
  for (uint32_t s = 0; s < (uint32_t)Q.dim(); ++s)
    oracle_mean +=
        pt.p[s] * height_plus(OccupationConfig::from_bits(p.window, s), rho, 0);

  EnsembleRequest req;
  req.q = q;
  req.rho = rho;
  req.t = t;
  req.samples = 4000;
  req.base_seed = 1234;
  EnsembleStats s = ensemble_height_stats(req);
  REQUIRE(s.aborted == 0);
  double se = std::sqrt(s.variance / (double)s.sample_count);
  REQUIRE(std::fabs(s.mean - oracle_mean) <= 3.0 * se + 1e-6);
}
