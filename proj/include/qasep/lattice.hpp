#pragma once

// Finite-window state representations, height functions, jump rates, and
// explicit sparse generators for dynamic ASEP and standard ASEP. A closed
// (reflecting) window stands in for Z; the right-vacuum convention keeps
// h^+ finite.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qasep {

struct Window {
  int a = 0;
  int b = -1;
  int size() const { return b - a + 1; }
  bool contains(int k) const { return k >= a && k <= b; }
  int index(int k) const { return k - a; }
  bool operator==(const Window&) const = default;
};

struct ModelParams {
  double q = 1.5;
  double rho = 0.0;  // +-infinity allowed
  Window window;
  std::vector<int> species_counts;  // per-site capacity; empty means all 1

  int capacity(int k) const {
    if (species_counts.empty()) return 1;
    return species_counts[window.index(k)];
  }
  int total_capacity() const {
    if (species_counts.empty()) return window.size();
    int s = 0;
    for (int c : species_counts) s += c;
    return s;
  }
  // The auxiliary dynamic parameter lambda = e^rho is always derived.
  double lambda() const { return std::exp(rho); }

  void validate() const {
    if (!(q > 0.0)) throw InvalidParams("ModelParams: q must be positive");
    if (window.size() <= 0) throw InvalidParams("ModelParams: empty window");
    for (int c : species_counts)
      if (c < 1) throw InvalidParams("ModelParams: capacities must be >= 1");
  }
};

struct OccupationConfig {
  Window window;
  std::vector<uint8_t> occ;  // indexed by window.index(k)
  bool right_vacuum = true;  // all sites right of the window are empty

  static OccupationConfig empty(Window w) {
    return {w, std::vector<uint8_t>(w.size(), 0), true};
  }
  static OccupationConfig from_bits(Window w, uint32_t bits) {
    OccupationConfig c = empty(w);
    for (int i = 0; i < w.size(); ++i) c.occ[i] = (bits >> i) & 1u;
    return c;
  }
  // Step initial condition: particles exactly at sites < 0.
  static OccupationConfig step(Window w) {
    OccupationConfig c = empty(w);
    for (int k = w.a; k <= w.b && k < 0; ++k) c.occ[w.index(k)] = 1;
    return c;
  }

  uint32_t to_bits() const {
    uint32_t bits = 0;
    for (int i = 0; i < window.size(); ++i)
      if (occ[i]) bits |= (1u << i);
    return bits;
  }
  int at(int k) const { return window.contains(k) ? occ[window.index(k)] : 0; }
  int particles() const {
    int n = 0;
    for (auto v : occ) n += v;
    return n;
  }
  int count_geq(int k) const {
    int n = 0;
    for (int j = std::max(k, window.a); j <= window.b; ++j)
      n += occ[window.index(j)];
    return n;
  }
  int count_leq(int k) const {
    int n = 0;
    for (int j = window.a; j <= std::min(k, window.b); ++j)
      n += occ[window.index(j)];
    return n;
  }
  bool operator==(const OccupationConfig&) const = default;
};

// h_k^+ = rho + k + 2 #{occupied j >= k}; +-infinity propagates from rho.
inline double height_plus(const OccupationConfig& config, double rho, int k) {
  if (std::isinf(rho)) return rho;
  return rho + k + 2.0 * config.count_geq(k);
}

namespace detail {

// C^{R,+} as a function of h^+_{k+1}, stable over the whole height range.
inline double dyn_rate_right(double q, double h) {
  if (q == 1.0) return 1.0;
  double e = -2.0 * h * std::log(q);
  if (e > 500.0) return q;        // w = q^{-2h} -> infinity
  if (e < -500.0) return 1.0 / q; // w -> 0
  double w = std::exp(e);
  return (1.0 + w) / (q * (1.0 + w / (q * q)));
}

// C^{R,-} as a function of h^+_k.
inline double dyn_rate_left(double q, double h) {
  if (q == 1.0) return 1.0;
  double e = -2.0 * h * std::log(q);
  if (e > 500.0) return 1.0 / q;
  if (e < -500.0) return q;
  double w = std::exp(e);
  return q * (1.0 + w) / (1.0 + w * q * q);
}

}  // namespace detail

// (right_rate, left_rate) for the particle at site k; zero when the move is
// blocked by exclusion or leaves the window.
struct JumpRates {
  double right = 0.0;
  double left = 0.0;
};

inline JumpRates dynamic_jump_rates(const OccupationConfig& config,
                                    const ModelParams& params, int k) {
  JumpRates r;
  if (config.at(k) != 1) return r;
  if (k + 1 <= config.window.b && config.at(k + 1) == 0)
    r.right = detail::dyn_rate_right(params.q,
                                     height_plus(config, params.rho, k + 1));
  if (k - 1 >= config.window.a && config.at(k - 1) == 0)
    r.left = detail::dyn_rate_left(params.q,
                                   height_plus(config, params.rho, k));
  return r;
}

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Sparse CTMC generator; diagonal entries balance each row to zero.
class RateMatrix {
 public:
  explicit RateMatrix(int dim) : dim_(dim), diag_(dim, 0.0) {}

  int dim() const { return dim_; }
  void add(int row, int col, double rate) {
    if (rate == 0.0) return;
    off_diag_.push_back({row, col, rate});
    diag_[row] -= rate;
  }
  const std::vector<Triplet>& off_diagonal() const { return off_diag_; }
  const std::vector<double>& diagonal() const { return diag_; }

  // y = x Q (left action on a row vector).
  std::vector<double> apply_left(const std::vector<double>& x) const {
    if ((int)x.size() != dim_) throw DimensionMismatch("apply_left: size");
    std::vector<double> y(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) y[i] = x[i] * diag_[i];
    for (const auto& t : off_diag_) y[t.col] += x[t.row] * t.value;
    return y;
  }

  std::vector<std::vector<double>> dense() const {
    std::vector<std::vector<double>> m(dim_, std::vector<double>(dim_, 0.0));
    for (int i = 0; i < dim_; ++i) m[i][i] = diag_[i];
    for (const auto& t : off_diag_) m[t.row][t.col] += t.value;
    return m;
  }

  double max_exit_rate() const {
    double r = 0.0;
    for (double d : diag_) r = std::max(r, -d);
    return r;
  }

  // Row-compressed off-diagonal entries, for event-driven simulation.
  struct Rows {
    std::vector<int> offsets;
    std::vector<int> cols;
    std::vector<double> rates;
  };
  Rows rows() const {
    Rows r;
    r.offsets.assign(dim_ + 1, 0);
    for (const auto& t : off_diag_) r.offsets[t.row + 1]++;
    for (int i = 0; i < dim_; ++i) r.offsets[i + 1] += r.offsets[i];
    r.cols.resize(off_diag_.size());
    r.rates.resize(off_diag_.size());
    std::vector<int> fill = r.offsets;
    for (const auto& t : off_diag_) {
      r.cols[fill[t.row]] = t.col;
      r.rates[fill[t.row]] = t.value;
      ++fill[t.row];
    }
    return r;
  }

 private:
  int dim_;
  std::vector<double> diag_;
  std::vector<Triplet> off_diag_;
};

inline constexpr int kMaxOccupationWindow = 14;

inline void check_occupation_guard(const Window& w) {
  if (w.size() > kMaxOccupationWindow)
    throw WindowTooLarge("occupation window exceeds enumeration guard");
  if (w.size() <= 0) throw InvalidParams("empty window");
}

// Generator of dynamic ASEP on the window, closed boundary, with states
// enumerated little-endian on occupancy.
inline RateMatrix build_dynamic_generator(const ModelParams& params) {
  params.validate();
  check_occupation_guard(params.window);
  const Window w = params.window;
  const int L = w.size();
  RateMatrix Q(1 << L);
  for (uint32_t bits = 0; bits < (1u << L); ++bits) {
    OccupationConfig c = OccupationConfig::from_bits(w, bits);
    for (int k = w.a; k < w.b; ++k) {
      int i = w.index(k);
      if (c.occ[i] == 1 && c.occ[i + 1] == 0) {
        double rate =
            detail::dyn_rate_right(params.q, height_plus(c, params.rho, k + 1));
        Q.add(bits, bits ^ (3u << i), rate);
      } else if (c.occ[i] == 0 && c.occ[i + 1] == 1) {
        double rate =
            detail::dyn_rate_left(params.q, height_plus(c, params.rho, k + 1));
        Q.add(bits, bits ^ (3u << i), rate);
      }
    }
  }
  return Q;
}

// Standard nearest-neighbour exclusion generator with constant rates.
inline RateMatrix build_asep_generator(const Window& w, double right_rate,
                                       double left_rate) {
  check_occupation_guard(w);
  const int L = w.size();
  RateMatrix Q(1 << L);
  for (uint32_t bits = 0; bits < (1u << L); ++bits) {
    for (int i = 0; i + 1 < L; ++i) {
      bool lo = (bits >> i) & 1u, hi = (bits >> (i + 1)) & 1u;
      if (lo && !hi) Q.add(bits, bits ^ (3u << i), right_rate);
      if (!lo && hi) Q.add(bits, bits ^ (3u << i), left_rate);
    }
  }
  return Q;
}

}  // namespace qasep
