#pragma once

// Event-driven simulation of (dynamic) ASEP on large windows, with O(1) rate
// maintenance per jump, plus ensemble statistics of the height function.
// Samples are independent streams and run concurrently; results are merged
// by sample index so output is deterministic for a fixed base seed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "ctmc.hpp"
#include "lattice.hpp"

namespace qasep {

namespace detail {

// Fenwick tree over per-bond rates: point assign, total, and inverse-CDF
// descent for event selection.
class RateTree {
 public:
  explicit RateTree(int n) : n_(n), tree_(n + 1, 0.0), value_(n, 0.0) {}

  void assign(int i, double v) {
    double delta = v - value_[i];
    if (delta == 0.0) return;
    value_[i] = v;
    for (int j = i + 1; j <= n_; j += j & -j) tree_[j] += delta;
  }
  double value(int i) const { return value_[i]; }
  double total() const {
    double s = 0.0;
    for (int j = n_; j > 0; j -= j & -j) s += tree_[j];
    return s;
  }
  // Smallest i with prefix_sum(0..i) >= u; assumes 0 < u <= total().
  int find(double u) const {
    int pos = 0;
    int mask = 1;
    while ((mask << 1) <= n_) mask <<= 1;
    for (; mask > 0; mask >>= 1) {
      int next = pos + mask;
      if (next <= n_ && tree_[next] < u) {
        u -= tree_[next];
        pos = next;
      }
    }
    return pos;  // 0-based bond index
  }
  void rebuild() {
    std::fill(tree_.begin(), tree_.end(), 0.0);
    std::vector<double> vals = value_;
    std::fill(value_.begin(), value_.end(), 0.0);
    for (int i = 0; i < n_; ++i) assign(i, vals[i]);
  }

 private:
  int n_;
  std::vector<double> tree_;
  std::vector<double> value_;
};

}  // namespace detail

enum class InitialKind { step, empty };

// Light-cone window: the disturbance never reaches the boundary for the
// simulated horizons; a touch aborts the sample.
inline Window light_cone_window(double q, double t, int site) {
  double speed = (1.0 + q) * t + 10.0 * std::sqrt(std::max(t, 0.0));
  int half = (int)std::ceil(speed);
  half = std::max({half, std::abs(site) + 2, 10});
  return Window{-half, half};
}

struct SimResult {
  double height = 0.0;     // h_s^+ at t_end
  bool aborted = false;    // boundary touched
  long events = 0;
};

// Dynamic ASEP on a window with a Fenwick tree over bond rates. rho = +-inf
// runs the constant-rate ASEP limit of the jump rates, with the height
// observable anchored at rho = 0. Explicit constant rates can be supplied
// instead for plain ASEP runs.
class DynamicAsepEngine {
 public:
  DynamicAsepEngine(double q, double rho, Window w, InitialKind init)
      : DynamicAsepEngine(q, rho, w, init, std::isfinite(rho),
                          std::isfinite(rho) ? 0.0
                                             : detail::dyn_rate_right(q, rho),
                          std::isfinite(rho) ? 0.0
                                             : detail::dyn_rate_left(q, rho)) {}

  static DynamicAsepEngine plain(double right_rate, double left_rate, Window w,
                                 InitialKind init) {
    return DynamicAsepEngine(1.0, 0.0, w, init, false, right_rate, left_rate);
  }

  // Height h^+_s of the current configuration.
  double height_at(int site) const { return h_[w_.index(site)]; }

  SimResult run(double t_end, uint64_t seed, int observe_site) {
    SplitMix64 rng(seed);
    SimResult res;
    double t = 0.0;
    long since_rebuild = 0;
    while (true) {
      double total = tree_.total();
      if (total <= 0.0) break;
      t += rng.exponential(total);
      if (t >= t_end) break;
      int bond = tree_.find(rng.uniform() * total);
      apply_event(bond);
      ++res.events;
      if (bond == 0 || bond == w_.size() - 2) {
        res.aborted = true;
        break;
      }
      if (++since_rebuild == (1 << 20)) {
        tree_.rebuild();
        since_rebuild = 0;
      }
    }
    res.height = height_at(observe_site);
    return res;
  }

 private:
  DynamicAsepEngine(double q, double rho, Window w, InitialKind init,
                    bool dynamic, double const_right, double const_left)
      : q_(q), dynamic_(dynamic), rho_(std::isfinite(rho) ? rho : 0.0),
        const_right_(const_right), const_left_(const_left), w_(w),
        occ_(w.size(), 0), h_(w.size(), 0.0), tree_(w.size() - 1) {
    if (init == InitialKind::step)
      for (int k = w_.a; k <= w_.b && k < 0; ++k) occ_[w_.index(k)] = 1;
    reset_heights();
    for (int i = 0; i + 1 < w_.size(); ++i) tree_.assign(i, bond_rate(i));
  }

  void reset_heights() {
    int suffix = 0;
    for (int i = w_.size() - 1; i >= 0; --i) {
      suffix += occ_[i];
      h_[i] = rho_ + (w_.a + i) + 2.0 * suffix;
    }
  }

  // Rate of the unique move on bond i (sites a+i, a+i+1); both directions
  // read h at the bond's right end.
  double bond_rate(int i) const {
    if (occ_[i] == 1 && occ_[i + 1] == 0)
      return dynamic_ ? detail::dyn_rate_right(q_, h_[i + 1]) : const_right_;
    if (occ_[i] == 0 && occ_[i + 1] == 1)
      return dynamic_ ? detail::dyn_rate_left(q_, h_[i + 1]) : const_left_;
    return 0.0;
  }

  void apply_event(int bond) {
    if (occ_[bond] == 1) {  // right jump
      occ_[bond] = 0;
      occ_[bond + 1] = 1;
      h_[bond + 1] += 2.0;
    } else {  // left jump
      occ_[bond] = 1;
      occ_[bond + 1] = 0;
      h_[bond + 1] -= 2.0;
    }
    for (int i = std::max(0, bond - 1); i <= std::min(w_.size() - 2, bond + 1);
         ++i)
      tree_.assign(i, bond_rate(i));
  }

  double q_;
  bool dynamic_;
  double rho_;
  double const_right_;
  double const_left_;
  Window w_;
  std::vector<uint8_t> occ_;
  std::vector<double> h_;
  detail::RateTree tree_;
};

struct HistogramBin {
  double left = 0.0;
  long count = 0;
};

struct EnsembleStats {
  long sample_count = 0;
  std::vector<double> values;  // h_s^+ samples, indexed by sample
  double mean = 0.0;
  double variance = 0.0;  // population variance of the samples
  double bin_width = 1.0;
  std::vector<HistogramBin> bins;
  long aborted = 0;
  long total_events = 0;

  void finalize(double width) {
    bin_width = width;
    sample_count = (long)values.size();
    double s = 0.0;
    long n = 0;
    for (double v : values)
      if (std::isfinite(v)) {
        s += v;
        ++n;
      }
    mean = n ? s / (double)n : 0.0;
    double var = 0.0;
    for (double v : values)
      if (std::isfinite(v)) var += (v - mean) * (v - mean);
    variance = n ? var / (double)n : 0.0;
    bins.clear();
    if (n == 0) return;
    double lo = INFINITY, hi = -INFINITY;
    for (double v : values)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    long first = (long)std::floor(lo / width);
    long last = (long)std::floor(hi / width);
    bins.assign((size_t)(last - first + 1), {});
    for (size_t i = 0; i < bins.size(); ++i)
      bins[i].left = (double)(first + (long)i) * width;
    for (double v : values)
      if (std::isfinite(v)) bins[(size_t)((long)std::floor(v / width) - first)].count++;
  }
};

struct EnsembleRequest {
  double q = 1.1;
  double rho = 0.0;
  bool plain = false;        // constant-rate ASEP instead of dynamic rates
  double plain_right = 0.0;  // used when plain is set
  double plain_left = 0.0;
  InitialKind initial = InitialKind::step;
  double t = 0.0;
  int site = 0;
  long samples = 1;
  uint64_t base_seed = 1;
  double bin_width = 1.0;
  int threads = 0;  // 0 = hardware concurrency
};

// i.i.d. samples of h_s^+(xi(t)) from seeds base, base+1, ... merged in
// index order.
inline EnsembleStats ensemble_height_stats(const EnsembleRequest& req) {
  if (req.samples < 1) throw InvalidParams("ensemble: samples >= 1 required");
  double speed_q = req.plain ? req.plain_right + req.plain_left : req.q;
  Window w = light_cone_window(speed_q, req.t, req.site);
  EnsembleStats stats;
  stats.values.assign((size_t)req.samples, 0.0);
  std::vector<long> events((size_t)req.samples, 0);
  std::vector<uint8_t> aborted((size_t)req.samples, 0);

  int nthreads = req.threads > 0
                     ? req.threads
                     : (int)std::max(1u, std::thread::hardware_concurrency());
  nthreads = (int)std::min<long>(nthreads, req.samples);
  std::vector<std::thread> pool;
  std::atomic<long> cursor{0};
  auto worker = [&]() {
    while (true) {
      long i = cursor.fetch_add(1);
      if (i >= req.samples) break;
      DynamicAsepEngine engine =
          req.plain
              ? DynamicAsepEngine::plain(req.plain_right, req.plain_left, w,
                                         req.initial)
              : DynamicAsepEngine(req.q, req.rho, w, req.initial);
      SimResult r = engine.run(req.t, SplitMix64::stream_seed(req.base_seed, i),
                               req.site);
      stats.values[i] = r.aborted ? NAN : r.height;
      events[i] = r.events;
      aborted[i] = r.aborted ? 1 : 0;
    }
  };
  for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (long e : events) stats.total_events += e;
  for (uint8_t a : aborted) stats.aborted += a;
  stats.finalize(req.bin_width);
  return stats;
}

}  // namespace qasep
