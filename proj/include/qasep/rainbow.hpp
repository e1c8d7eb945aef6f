#pragma once

// Rainbow multi-species ASEP: particle positions plus a species permutation.
// Right jump rates are 1 and left jump rates are q; lattice-adjacent particles
// swap species at rate 1 or q depending on the sign convention and whether the
// swap raises or lowers the inversion count.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace qasep {

inline int inversions(const std::vector<int>& sigma) {
  int c = 0;
  for (size_t i = 0; i < sigma.size(); ++i)
    for (size_t j = i + 1; j < sigma.size(); ++j)
      if (sigma[i] > sigma[j]) ++c;
  return c;
}

struct RainbowState {
  // pos[0] > pos[1] > ... (the paper's W_N^+); sigma[k] is the species of the
  // particle at pos[k], a permutation of {1..N}.
  std::vector<int> pos;
  std::vector<int> sigma;

  int particles() const { return (int)pos.size(); }
  bool operator==(const RainbowState&) const = default;
  auto operator<=>(const RainbowState&) const = default;

  void validate() const {
    for (size_t i = 0; i + 1 < pos.size(); ++i)
      if (pos[i] <= pos[i + 1])
        throw InvalidParams("RainbowState: positions must strictly decrease");
    std::vector<int> s = sigma;
    std::sort(s.begin(), s.end());
    for (size_t i = 0; i < s.size(); ++i)
      if (s[i] != (int)i + 1)
        throw InvalidParams("RainbowState: sigma must permute 1..N");
  }

  // Species at lattice site x, 0 when empty.
  int species_at(int x) const {
    for (size_t k = 0; k < pos.size(); ++k)
      if (pos[k] == x) return sigma[k];
    return 0;
  }
};

inline OccupationConfig colorblind_project(const RainbowState& s, Window w) {
  OccupationConfig c = OccupationConfig::empty(w);
  for (int x : s.pos) c.occ[w.index(x)] = 1;
  return c;
}

inline constexpr int kMaxRainbowSpecies = 5;
inline constexpr int kMaxRainbowWindow = 8;

// Enumerated state space for N distinguishable species on a window, ordered
// lexicographically by (positions, sigma).
class RainbowSpace {
 public:
  RainbowSpace(Window w, int N) : window_(w), n_(N) {
    if (N > kMaxRainbowSpecies || w.size() > kMaxRainbowWindow)
      throw WindowTooLarge("rainbow state space exceeds enumeration guard");
    if (N > w.size() || N < 0)
      throw InvalidParams("RainbowSpace: need 0 <= N <= |window|");
    std::vector<int> sites;
    for (int k = w.a; k <= w.b; ++k) sites.push_back(k);
    std::vector<int> pick(N);
    std::vector<int> base_sigma(N);
    for (int i = 0; i < N; ++i) base_sigma[i] = i + 1;
    // All N-subsets as decreasing position vectors.
    std::vector<std::vector<int>> positions;
    enumerate_subsets(sites, N, 0, pick, positions);
    for (auto& p : positions) {
      std::vector<int> sig = base_sigma;
      do {
        states_.push_back({p, sig});
      } while (std::next_permutation(sig.begin(), sig.end()));
    }
    std::sort(states_.begin(), states_.end());
    for (size_t i = 0; i < states_.size(); ++i)
      index_[{states_[i].pos, states_[i].sigma}] = (int)i;
  }

  Window window() const { return window_; }
  int species() const { return n_; }
  int dim() const { return (int)states_.size(); }
  const RainbowState& state(int i) const { return states_[i]; }
  int index(const RainbowState& s) const {
    auto it = index_.find({s.pos, s.sigma});
    if (it == index_.end()) throw InvalidParams("RainbowSpace: unknown state");
    return it->second;
  }

 private:
  static void enumerate_subsets(const std::vector<int>& sites, int N, int start,
                                std::vector<int>& pick,
                                std::vector<std::vector<int>>& out) {
    subsets_rec(sites, N, start, 0, pick, out);
  }
  static void subsets_rec(const std::vector<int>& sites, int N, int start,
                          int depth, std::vector<int>& pick,
                          std::vector<std::vector<int>>& out) {
    if (depth == N) {
      std::vector<int> dec(pick.begin(), pick.begin() + N);
      std::sort(dec.begin(), dec.end(), std::greater<int>());
      out.push_back(dec);
      return;
    }
    for (int i = start; i < (int)sites.size(); ++i) {
      pick[depth] = sites[i];
      subsets_rec(sites, N, i + 1, depth + 1, pick, out);
    }
  }

  Window window_;
  int n_;
  std::vector<RainbowState> states_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> index_;
};

enum class RainbowSign { plus, minus };

// L^{+-}_rainbow on the enumerated space: rate 1 right jumps, rate q left
// jumps; adjacent-pair species swaps at rate 1 when the inversion count moves
// by +1 (sign plus) and rate q when it moves by -1, mirrored for sign minus.
inline RateMatrix build_rainbow_generator(const RainbowSpace& space, double q,
                                          RainbowSign sign) {
  const Window w = space.window();
  RateMatrix Q(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const RainbowState& s = space.state(i);
    const int N = s.particles();
    for (int r = 0; r < N; ++r) {
      // Position moves; exclusion is encoded by strict ordering.
      if (s.pos[r] + 1 <= w.b && (r == 0 || s.pos[r - 1] > s.pos[r] + 1)) {
        RainbowState t = s;
        t.pos[r] += 1;
        Q.add(i, space.index(t), 1.0);
      }
      if (s.pos[r] - 1 >= w.a && (r == N - 1 || s.pos[r + 1] < s.pos[r] - 1)) {
        RainbowState t = s;
        t.pos[r] -= 1;
        Q.add(i, space.index(t), q);
      }
      // Species swap with the lattice-adjacent particle to the left.
      if (r + 1 < N && s.pos[r] == s.pos[r + 1] + 1) {
        RainbowState t = s;
        std::swap(t.sigma[r], t.sigma[r + 1]);
        bool inv_up = s.sigma[r] < s.sigma[r + 1];
        double rate;
        if (sign == RainbowSign::plus)
          rate = inv_up ? 1.0 : q;
        else
          rate = inv_up ? q : 1.0;
        Q.add(i, space.index(t), rate);
      }
    }
  }
  return Q;
}

}  // namespace qasep
