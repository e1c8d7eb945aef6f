#pragma once

// Duality functions between dynamic ASEP and plain ASEP: the q-Hahn one-site
// function p and its L-site product P_R^v, the quantum q-Krawtchouk
// degeneration K_qtm^v, the blocking-measure weights, scaling constants, and
// residual checks for generator duality and biorthogonality.
//
// The window [a,b] is handled in window-relative coordinates i = 1..M with
// the height anchor translated accordingly; all identities are verified in
// that frame (see HeightSlots).

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "log_real.hpp"
#include "qspecial.hpp"

namespace qasep {

struct DualityParams {
  ModelParams model;
  double v = -0.5;  // free parameter; nonzero, pole-free

  void validate() const {
    model.validate();
    if (v == 0.0) throw InvalidParams("DualityParams: v must be nonzero");
    if (std::isinf(model.rho))
      throw InvalidParams("DualityParams: rho must be finite");
  }
};

namespace detail {

// Height-slot conventions on a window of M sites (window-relative
// coordinates i = 1..M, right vacuum). These are the unique small-integer
// choice for which the generator duality, the Prop 4.4 biorthogonality, and
// the c^v/C^v product-vs-collapsed identities all hold to machine precision
// (see test_duality.cpp):
//
//   h^+ slot at site i:  rho + (i+1) + 2 #{occupied j >= i+1}
//   h^- slot at site i:  2 #{dual-occupied j <= i-1} - (i-1)
//   weights:             anchored at rho_w = rho + M + 1, the height of the
//                        empty lattice just right of the window
struct HeightSlots {
  double rho_shift = 0.0;
  double lam_count = 2.0;
  double lam_slope = -1.0;
  double lam_shift = 0.0;
};

inline double rel_height_plus(const OccupationConfig& c, double rho, int i,
                              int M) {
  // i in 1..M+1; counts occupied relative sites >= i.
  int cnt = 0;
  for (int j = i; j <= M; ++j) cnt += c.occ[j - 1];
  return rho + i + 2.0 * cnt;
}

inline double rho_slot(const OccupationConfig& orig, double rho, int i, int M,
                       const HeightSlots& s) {
  return rel_height_plus(orig, rho, i + 1, M) + s.rho_shift;
}

inline double lambda_slot(const OccupationConfig& dual, int i,
                          const HeightSlots& s) {
  int cnt = 0;
  for (int j = 1; j <= i - 1; ++j) cnt += dual.occ[j - 1];
  return s.lam_count * cnt + s.lam_slope * (i - 1) + s.lam_shift;
}

inline LogReal q_power(double q, double exponent) {
  return LogReal::from_log(+1, (long double)exponent * std::log((long double)q));
}

}  // namespace detail

// c_p(n, x; lambda, rho, v, N; q), the one-site coefficient.
inline LogReal duality_coefficient_cp(int n, int x, double lambda, double rho,
                                      double v, int N, double q) {
  using detail::q_power;
  const double q2 = q * q;
  LogReal lv = LogReal::from_value(v);
  LogReal out = lv.pow_int(n);
  out *= q_pochhammer(-lv * q_power(q, rho + lambda - N + 1),
                      LogReal::from_value(q2), x);
  out *= q_pochhammer(lv * q_power(q, 2 * n - rho + lambda - N + 1),
                      LogReal::from_value(q2), N);
  out /= q_power(q, n * (n + rho + lambda - N));
  LogReal den = q_pochhammer(lv * q_power(q, -2 * x - rho + lambda + N + 1),
                             LogReal::from_value(q2), x + n);
  if (den.is_zero())
    throw DenominatorPole("duality_coefficient_cp: denominator vanished");
  out /= den;
  return out;
}

// One-site duality function p(n, x; lambda, rho, v, N; q) =
// c_p * P_x(q^{-2n}; alpha, beta, N | q^2) with the displayed (alpha, beta).
inline LogReal one_site_p(int n, int x, double lambda, double rho, double v,
                          int N, double q) {
  const double alpha = -v * std::pow(q, rho + lambda - N - 1);
  const double beta = std::pow(q, rho - lambda - N - 1) / v;
  LogReal poly = q_hahn(/*degree*/ x, /*variable*/ n, alpha, beta, N, q * q);
  return duality_coefficient_cp(n, x, lambda, rho, v, N, q) * poly;
}

// One-site quantum q-Krawtchouk duality function k^qtm(n, x; ...) =
// K_x^qtm(q^{-2n}; p-hat, N; q^2), p-hat = v^{-1} q^{rho - lambda - N - 1}.
inline LogReal one_site_k_qtm(int n, int x, double lambda, double rho, double v,
                              int N, double q) {
  const double p_hat = std::pow(q, rho - lambda - N - 1) / v;
  return quantum_q_krawtchouk(/*degree*/ x, /*variable*/ n, p_hat, N, q * q);
}

// P_R^v(eta, xi): product over window sites of one_site_p with the height
// slots h^-_{k-1,0}(eta) and h^+_{k+1}(xi).
inline LogReal duality_P_R(const OccupationConfig& dual,
                           const OccupationConfig& orig,
                           const DualityParams& params,
                           const detail::HeightSlots& slots = {}) {
  if (dual.window != orig.window)
    throw InvalidParams("duality_P_R: configurations on different windows");
  const int M = dual.window.size();
  const double rho_rel = params.model.rho + params.model.window.a - 1;
  LogReal out = LogReal::one();
  for (int i = 1; i <= M; ++i) {
    out *= one_site_p(dual.occ[i - 1], orig.occ[i - 1],
                      detail::lambda_slot(dual, i, slots),
                      detail::rho_slot(orig, rho_rel, i, M, slots), params.v, 1,
                      params.model.q);
  }
  return out;
}

// Particle-variable form of P_R^v over occupied dual sites only; for a dual
// state with particles at s_1 < s_2 < ... the lambda slot at s_j is j-1.
inline LogReal duality_P_R_particle_form(const OccupationConfig& dual,
                                         const OccupationConfig& orig,
                                         const DualityParams& params,
                                         const detail::HeightSlots& slots = {}) {
  if (dual.window != orig.window)
    throw InvalidParams("duality_P_R_particle_form: window mismatch");
  const int M = dual.window.size();
  const double rho_rel = params.model.rho + params.model.window.a - 1;
  LogReal out = LogReal::one();
  int j = 0;
  for (int i = 1; i <= M; ++i) {
    if (!dual.occ[i - 1]) continue;
    out *= one_site_p(1, orig.occ[i - 1], (double)j,
                      detail::rho_slot(orig, rho_rel, i, M, slots), params.v, 1,
                      params.model.q);
    ++j;
  }
  return out;
}

// K_qtm^v(eta, xi): rho-independent product of one-site quantum q-Krawtchouk
// functions, with both height slots taken at parameter 0.
inline LogReal duality_K_qtm(const OccupationConfig& dual,
                             const OccupationConfig& orig,
                             const DualityParams& params,
                             const detail::HeightSlots& slots = {}) {
  if (dual.window != orig.window)
    throw InvalidParams("duality_K_qtm: configurations on different windows");
  const int M = dual.window.size();
  LogReal out = LogReal::one();
  for (int i = 1; i <= M; ++i) {
    out *= one_site_k_qtm(dual.occ[i - 1], orig.occ[i - 1],
                          detail::lambda_slot(dual, i, slots),
                          detail::rho_slot(orig, 0.0, i, M, slots), params.v, 1,
                          params.model.q);
  }
  return out;
}

// Collapsed closed forms of the scaling constants c^v and C^v; they depend
// on the configurations only through |zeta| and |xi|.
struct ScalingConstants {
  LogReal c_v;
  LogReal C_v;
};

inline ScalingConstants scaling_constants(int dual_size, int orig_size,
                                          const DualityParams& params,
                                          double lambda_h, double rho_h) {
  using detail::q_power;
  const double q = params.model.q;
  const double q2 = q * q;
  LogReal lv = LogReal::from_value(params.v);
  const int M = params.model.window.size();

  LogReal c_num =
      q_pochhammer(lv * q_power(q, lambda_h - rho_h + 2 * dual_size - M + 1),
                   LogReal::from_value(q2), M - dual_size);
  LogReal c_den =
      q_pochhammer(lv * q_power(q, lambda_h - rho_h - 2 * orig_size + M + 1),
                   LogReal::from_value(q2), orig_size);
  if (c_den.is_zero()) throw DenominatorPole("scaling_constants: c^v pole");

  LogReal base = -lv * q_power(q, lambda_h + rho_h - M + 1);
  LogReal C_num = q_pochhammer(base, LogReal::from_value(q2), orig_size);
  LogReal C_den = q_pochhammer(base, LogReal::from_value(q2), dual_size);
  if (C_den.is_zero()) throw DenominatorPole("scaling_constants: C^v pole");

  return {c_num / c_den, C_num / C_den};
}

// Product-over-sites route for the same constants, evaluated from explicit
// configurations; equals the collapsed form. The per-site heights here are
// anchored in the weight frame: h^+ at the empty right edge equals rho_h and
// h^- at the empty left edge equals lambda_h.
inline ScalingConstants scaling_constants_product(
    const OccupationConfig& dual, const OccupationConfig& orig,
    const DualityParams& params, double lambda_h, double rho_h,
    const detail::HeightSlots& slots = {}) {
  using detail::q_power;
  const double q = params.model.q;
  const double q2 = q * q;
  LogReal lv = LogReal::from_value(params.v);
  const int M = dual.window.size();

  LogReal c = LogReal::one(), C = LogReal::one();
  for (int i = 1; i <= M; ++i) {
    const int zk = dual.occ[i - 1], xk = orig.occ[i - 1];
    const double hp =
        detail::rel_height_plus(orig, rho_h - (M + 1), i + 1, M) +
        slots.rho_shift;
    double hm = lambda_h;
    for (int j = 1; j <= i - 1; ++j) hm += slots.lam_count * dual.occ[j - 1];
    hm += slots.lam_slope * (i - 1) + slots.lam_shift;

    c *= q_pochhammer(lv * q_power(q, 2 * zk - hp + hm - 1 + 1),
                      LogReal::from_value(q2), 1);
    LogReal cd = q_pochhammer(lv * q_power(q, -2 * xk - hp + hm + 1 + 1),
                              LogReal::from_value(q2), xk + zk);
    if (cd.is_zero()) throw DenominatorPole("scaling_constants_product: pole");
    c /= cd;

    LogReal cb = -lv * q_power(q, hp + hm - 1 + 1);
    C *= q_pochhammer(cb, LogReal::from_value(q2), xk);
    LogReal Cd = q_pochhammer(cb, LogReal::from_value(q2), zk);
    if (Cd.is_zero()) throw DenominatorPole("scaling_constants_product: pole");
    C /= Cd;
  }
  return {c, C};
}

namespace detail {
// The rho parameter entering the weights: the height of the configuration
// just right of the window, rho + b + 1.
inline double weight_rho(const DualityParams& params) {
  return params.model.rho + params.model.window.b + 1;
}
}  // namespace detail

// omega^p(x): dual-side size weight.
inline LogReal weight_omega_p(int x, const DualityParams& params) {
  using detail::q_power;
  const double q = params.model.q;
  const double q2 = q * q;
  const int M = params.model.window.size();
  const double rho = detail::weight_rho(params);
  LogReal lv = LogReal::from_value(params.v);
  LogReal out = lv.pow_int(-2 * x);
  out *= q_power(q, (double)x * (2.0 * x - 1.0));
  out *= q_pochhammer(-lv * q_power(q, rho - M + 1), LogReal::from_value(q2), x);
  LogReal den = q_pochhammer(lv * q_power(q, -rho + 2 * x - M + 1),
                             LogReal::from_value(q2), M - x);
  if (den.is_zero()) throw DenominatorPole("weight_omega_p: pole");
  return out / den;
}

// omega_R^p(x): original-side size weight.
inline LogReal weight_omega_R_p(int x, const DualityParams& params) {
  using detail::q_power;
  const double q = params.model.q;
  const double q2 = q * q;
  const int M = params.model.window.size();
  const double rho = detail::weight_rho(params);
  LogReal lv = LogReal::from_value(params.v);
  LogReal num = q_pochhammer(lv * q_power(q, -rho - 2 * x + M + 1),
                             LogReal::from_value(q2), x);
  LogReal den = q_pochhammer(-lv * q_power(q, rho - M + 1),
                             LogReal::from_value(q2), x);
  if (den.is_zero()) throw DenominatorPole("weight_omega_R_p: pole");
  return num / den;
}

// One-site blocking weight W(x; q, 1, rho_site) for capacity 1, as displayed.
inline LogReal weight_W_site(int x, double q, double rho_site) {
  using detail::q_power;
  const double q2 = q * q;
  LogReal num = LogReal::one() + q_power(q, 4.0 * x + 2.0 * rho_site - 2.0);
  LogReal den = LogReal::one() + q_power(q, 2.0 * rho_site - 2.0);
  LogReal out = num / den;
  out *= q_pochhammer(-q_power(q, 2.0 * rho_site - 2.0),
                      LogReal::from_value(q2), x);
  LogReal pden = q_pochhammer(-q_power(q, 2.0 * rho_site + 2.0),
                              LogReal::from_value(q2), x);
  if (pden.is_zero()) throw DenominatorPole("weight_W_site: pole");
  out /= pden;
  out *= q_power(q, -(double)x * (2.0 * rho_site + 1.0 + x - 2.0));
  out /= q_pochhammer(-q_power(q, -2.0 * rho_site), LogReal::from_value(q2), 1);
  return out;
}

// w(eta; N; q) for unit capacities: q^{|eta| - 2 sum of occupied 1-based
// relative sites}.
inline LogReal weight_w(const OccupationConfig& dual, double q) {
  long long expo = 0;
  const int M = dual.window.size();
  for (int i = 1; i <= M; ++i)
    if (dual.occ[i - 1]) expo += 1 - 2 * (long long)i;
  return detail::q_power(q, (double)expo);
}

// Full dual-side weight omega^p(|eta|) w(eta).
inline LogReal dual_side_weight(const OccupationConfig& dual,
                                const DualityParams& params) {
  return weight_omega_p(dual.particles(), params) *
         weight_w(dual, params.model.q);
}

// Full original-side weight omega_R^p(|xi|) prod_k W(xi_k; q, 1, h^+_{k+1}).
// `rescaled` divides by the all-empty value so the weight of the empty
// configuration is one (the large-window normalization).
inline LogReal original_side_weight(const OccupationConfig& orig,
                                    const DualityParams& params,
                                    bool rescaled = false) {
  const int M = orig.window.size();
  const double rho_rel = params.model.rho + params.model.window.a - 1;
  LogReal out = weight_omega_R_p(orig.particles(), params);
  for (int i = 1; i <= M; ++i) {
    double h = detail::rho_slot(orig, rho_rel, i, M, {});
    out *= weight_W_site(orig.occ[i - 1], params.model.q, h);
  }
  if (rescaled) {
    OccupationConfig empty = OccupationConfig::empty(orig.window);
    out /= original_side_weight(empty, params, false);
  }
  return out;
}

}  // namespace qasep
