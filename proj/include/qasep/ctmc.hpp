#pragma once

// Exact finite-state master-equation oracle (uniformization) and exact-event
// Gillespie simulation over explicit rate matrices. These back every
// oracle-derived expected value in the test suites.

#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace qasep {

struct Distribution {
  std::vector<double> p;

  static Distribution point_mass(int dim, int state) {
    Distribution d;
    d.p.assign(dim, 0.0);
    d.p[state] = 1.0;
    return d;
  }

  int dim() const { return (int)p.size(); }

  // Clamp tiny negatives and renormalize; rejects real mass defects.
  void normalize() {
    double sum = 0.0;
    for (double& v : p) {
      if (v < 0.0) {
        if (v < -1e-12) throw InvalidParams("Distribution: negative mass");
        v = 0.0;
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-10)
      throw InvalidParams("Distribution: mass not conserved");
    for (double& v : p) v /= sum;
  }
};

inline double total_variation(const Distribution& a, const Distribution& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("total_variation");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::fabs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

// p0 exp(tQ) by uniformization: Poisson-weighted powers of P = I + Q/Lambda,
// truncated when the accumulated weight is within 1e-14 of one. Long
// horizons are split so the Poisson weights stay representable.
inline Distribution master_equation_solve(const RateMatrix& Q,
                                          const Distribution& p0, double t) {
  if (p0.dim() != Q.dim()) throw DimensionMismatch("master_equation_solve");
  if (t < 0.0) throw InvalidParams("master_equation_solve: t < 0");
  double lambda = Q.max_exit_rate();
  if (t == 0.0 || lambda == 0.0) return p0;
  if (lambda * t > 600.0) {
    Distribution half = master_equation_solve(Q, p0, t / 2.0);
    return master_equation_solve(Q, half, t / 2.0);
  }
  lambda *= 1.0 + 1e-12;
  const double lt = lambda * t;

  std::vector<double> v = p0.p;
  std::vector<double> out(Q.dim(), 0.0);
  double w = std::exp(-lt);
  double cumulative = 0.0;
  for (long k = 0;; ++k) {
    cumulative += w;
    for (int i = 0; i < Q.dim(); ++i) out[i] += w * v[i];
    if (1.0 - cumulative <= 1e-14 && (double)k >= lt) break;
    if (k > 100000) throw NoConvergence("uniformization truncation");
    std::vector<double> qv = Q.apply_left(v);
    for (int i = 0; i < Q.dim(); ++i) v[i] += qv[i] / lambda;
    w *= lt / (double)(k + 1);
  }
  Distribution d{out};
  d.normalize();
  return d;
}

// Counter-based splittable PRNG (splitmix64). Stream i of a base seed is the
// splitmix sequence started at mix(base + (i+1) * golden), so distinct sample
// indices draw from disjoint, reproducible streams.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static uint64_t stream_seed(uint64_t base, uint64_t index) {
    return mix(base + (index + 1) * 0x9E3779B97F4A7C15ull);
  }

  uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ull); }

  // Uniform in (0, 1]; never zero, safe under log.
  double uniform() { return (double)((next() >> 11) + 1) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  uint64_t state_;
};

struct Trajectory {
  std::vector<double> times;   // strictly increasing event times
  std::vector<int> states;     // states[0] at time 0, states[k] after event k
  uint64_t seed = 0;

  int final_state() const { return states.back(); }
};

// Statistically exact event-driven simulation of the chain Q from a state
// index; deterministic given the seed.
class GillespieSampler {
 public:
  explicit GillespieSampler(const RateMatrix& Q)
      : rows_(Q.rows()), exit_(Q.dim()) {
    for (int i = 0; i < Q.dim(); ++i) exit_[i] = -Q.diagonal()[i];
  }

  Trajectory run(int initial, double t_end, uint64_t seed) const {
    SplitMix64 rng(seed);
    Trajectory traj;
    traj.seed = seed;
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    double t = 0.0;
    int s = initial;
    while (true) {
      double exit = exit_[s];
      if (exit <= 0.0) break;  // absorbing: frozen until t_end
      t += rng.exponential(exit);
      if (t >= t_end) break;
      double u = rng.uniform() * exit;
      int chosen = -1;
      for (int e = rows_.offsets[s]; e < rows_.offsets[s + 1]; ++e) {
        u -= rows_.rates[e];
        if (u <= 0.0) {
          chosen = rows_.cols[e];
          break;
        }
      }
      if (chosen < 0) chosen = rows_.cols[rows_.offsets[s + 1] - 1];
      s = chosen;
      traj.times.push_back(t);
      traj.states.push_back(s);
    }
    return traj;
  }

 private:
  RateMatrix::Rows rows_;
  std::vector<double> exit_;
};

inline Trajectory gillespie_run(const RateMatrix& Q, int initial, double t_end,
                                uint64_t seed) {
  return GillespieSampler(Q).run(initial, t_end, seed);
}

}  // namespace qasep
