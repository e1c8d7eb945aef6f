#pragma once

// q-Pochhammer symbols, q-binomials, terminating basic hypergeometric series,
// q-Hahn and quantum q-Krawtchouk polynomials, and their orthogonality
// residuals. Everything is a pure function; products are carried in LogReal.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "errors.hpp"
#include "log_real.hpp"

namespace qasep {

// Neumaier-compensated accumulation in long double.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if (std::fabs((double)sum_) >= std::fabs((double)x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

// (a;q)_n = prod_{j=0}^{n-1} (1 - a q^j), with exact zero sign when a factor
// vanishes. LogReal arguments let callers pass magnitudes beyond double range.
inline LogReal q_pochhammer(LogReal a, LogReal q, long long n) {
  LogReal out = LogReal::one();
  LogReal aqj = a;
  for (long long j = 0; j < n; ++j) {
    out *= one_minus(aqj);
    if (out.is_zero()) return out;
    aqj *= q;
  }
  return out;
}

inline LogReal q_pochhammer(double a, double q, long long n) {
  return q_pochhammer(LogReal::from_value(a), LogReal::from_value(q), n);
}

// [n k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k}); zero outside 0 <= k <= n.
inline LogReal q_binomial(long long n, long long k, double q) {
  if (k < 0 || k > n) return LogReal::zero();
  LogReal qq = LogReal::from_value(q);
  return q_pochhammer(qq, qq, n) /
         (q_pochhammer(qq, qq, k) * q_pochhammer(qq, qq, n - k));
}

// Second closed form of the q-binomial, (q^{-n};q)_k / (q;q)_k (-q^n)^k
// q^{-k(k-1)/2}; kept separate so the two routes can be compared.
inline LogReal q_binomial_alt(long long n, long long k, double q) {
  if (k < 0 || k > n) return LogReal::zero();
  LogReal qq = LogReal::from_value(q);
  LogReal qinv_n = qq.pow_int(-n);
  LogReal r = q_pochhammer(qinv_n, qq, k) / q_pochhammer(qq, qq, k);
  r *= (-qq.pow_int(n)).pow_int(k);
  r *= qq.pow_int(-(k * (k - 1)) / 2);
  return r;
}

// [n]_q^! = prod_{m=1}^{n} (1 + q + ... + q^{m-1}).
inline LogReal q_factorial(int n, double q) {
  LogReal out = LogReal::one();
  for (int m = 1; m <= n; ++m) {
    CompensatedSum bracket;
    long double p = 1.0L;
    for (int j = 0; j < m; ++j) {
      bracket.add(p);
      p *= q;
    }
    out *= LogReal::from_value(bracket.value());
  }
  return out;
}

struct QHypergeometricSpec {
  std::vector<double> numerator_params;
  std::vector<double> denominator_params;
  double base = 0.0;  // q > 0, q != 1
  double argument = 0.0;
  // Exact termination index when the caller knows it (a_k = q^{-l} by
  // construction); -1 means detect from the parameters.
  int termination_hint = -1;
};

namespace detail {

// Smallest l >= 0 with some numerator parameter equal to q^{-l} within
// relative tolerance 1e-12; -1 if none is found below the cap.
inline int detect_termination(const QHypergeometricSpec& s, int cap = 4096) {
  int best = -1;
  for (double a : s.numerator_params) {
    if (a <= 0.0) continue;
    double l_est = -std::log(a) / std::log(s.base);
    long long l = std::llround(l_est);
    if (l < 0 || l > cap) continue;
    double target = std::pow(s.base, (double)-l);
    if (std::fabs(a - target) <= 1e-12 * std::fabs(target)) {
      if (best < 0 || l < best) best = (int)l;
    }
  }
  return best;
}

}  // namespace detail

// Terminating series sum_{n=0}^{l} prod_i (a_i;q)_n / prod_j (b_j;q)_n *
// z^n / (q;q)_n, summed with compensation in long double.
inline LogReal q_hypergeometric(const QHypergeometricSpec& spec) {
  if (spec.base <= 0.0 || spec.base == 1.0)
    throw InvalidParams("q_hypergeometric: base must be positive and != 1");
  int l = spec.termination_hint;
  if (l < 0) l = detail::detect_termination(spec);
  if (l < 0)
    throw InvalidParams("q_hypergeometric: no terminating numerator parameter");

  const long double q = spec.base;
  const long double z = spec.argument;
  CompensatedSum sum;
  long double term = 1.0L;
  sum.add(term);
  long double qk = 1.0L;  // q^k
  for (int k = 0; k < l; ++k) {
    for (double a : spec.numerator_params) term *= (1.0L - (long double)a * qk);
    for (double b : spec.denominator_params) {
      long double f = 1.0L - (long double)b * qk;
      if (std::fabs((double)f) <= 1e-12 * (1.0 + std::fabs((double)(b * qk))))
        throw DenominatorPole("q_hypergeometric: denominator Pochhammer vanished");
      term /= f;
    }
    qk *= q;
    long double f = 1.0L - qk;  // (q;q)_n factor
    if (f == 0.0L) throw DenominatorPole("q_hypergeometric: (q;q)_n vanished");
    term *= z / f;
    if (term == 0.0L) break;
    sum.add(term);
  }
  return LogReal::from_value(sum.value());
}

// q-Hahn polynomial P_n(q^{-x}; alpha, beta, N | q), 0 <= n,x <= N.
inline LogReal q_hahn(int n, int x, double alpha, double beta, int N, double q) {
  if (n < 0 || x < 0 || n > N || x > N)
    throw InvalidParams("q_hahn: need 0 <= n,x <= N");
  QHypergeometricSpec s;
  double qn = std::pow(q, -n);
  double qx = std::pow(q, -x);
  s.numerator_params = {qn, alpha * beta * std::pow(q, n + 1), qx};
  s.denominator_params = {alpha * q, std::pow(q, -N)};
  s.base = q;
  s.argument = q;
  s.termination_hint = std::min(n, x);
  return q_hypergeometric(s);
}

// Quantum q-Krawtchouk K_n^qtm(q^{-x}; p, c; q), 0 <= n,x <= c.
inline LogReal quantum_q_krawtchouk(int n, int x, double p, int c, double q) {
  if (n < 0 || x < 0 || n > c || x > c)
    throw InvalidParams("quantum_q_krawtchouk: need 0 <= n,x <= c");
  QHypergeometricSpec s;
  s.numerator_params = {std::pow(q, -x), std::pow(q, -n)};
  s.denominator_params = {std::pow(q, -c)};
  s.base = q;
  s.argument = p * std::pow(q, n + 1);
  s.termination_hint = std::min(n, x);
  return q_hypergeometric(s);
}

enum class OrthogonalFamily { qhahn, qtm_krawtchouk };

struct QHahnParams {
  double alpha = 0.0;
  double beta = 0.0;
  int N = 0;
  double q = 0.0;
};

struct QtmKrawtchoukParams {
  double p = 0.0;
  int N = 0;
  double q = 0.0;
};

namespace detail {
inline long long binom2(long long m) { return m * (m - 1) / 2; }
}  // namespace detail

// max_{0<=m,n<=N} |sum_x weight(x) P_m P_n - RHS(n) delta_{mn}|.
inline double q_hahn_orthogonality_residual(const QHahnParams& p) {
  const double a = p.alpha, b = p.beta, q = p.q;
  const int N = p.N;
  std::vector<std::vector<long double>> P(N + 1, std::vector<long double>(N + 1));
  for (int n = 0; n <= N; ++n)
    for (int x = 0; x <= N; ++x) P[n][x] = q_hahn(n, x, a, b, N, q).value_ld();

  std::vector<long double> w(N + 1);
  for (int x = 0; x <= N; ++x) {
    LogReal num = q_pochhammer(a * q, q, x) * q_pochhammer(std::pow(q, -N), q, x);
    LogReal den = q_pochhammer(q, q, x) *
                  q_pochhammer(std::pow(q, -N) / b, q, x);
    LogReal v = num / den * LogReal::from_value(a * b * q).pow_int(-x);
    w[x] = v.value_ld();
  }

  double worst = 0.0;
  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      CompensatedSum lhs;
      for (int x = 0; x <= N; ++x) lhs.add(w[x] * P[m][x] * P[n][x]);
      long double rhs = 0.0L;
      if (m == n) {
        LogReal r = q_pochhammer(a * b * q * q, q, N) /
                    (q_pochhammer(b * q, q, N) *
                     LogReal::from_value(a * q).pow_int(N));
        r *= q_pochhammer(q, q, n) *
             q_pochhammer(a * b * std::pow(q, N + 2), q, n) *
             q_pochhammer(b * q, q, n);
        r /= q_pochhammer(a * q, q, n) * q_pochhammer(a * b * q, q, n) *
             q_pochhammer(std::pow(q, -N), q, n);
        r *= LogReal::from_value(1.0 - a * b * q) *
             (-LogReal::from_value(a * q)).pow_int(n);
        r /= LogReal::from_value(1.0 - a * b * std::pow(q, 2 * n + 1));
        r *= LogReal::from_value(q).pow_int(detail::binom2(n) - (long long)N * n);
        rhs = r.value_ld();
      }
      double dev = std::fabs((double)(lhs.value() - rhs));
      if (dev > worst) worst = dev;
    }
  }
  return worst;
}

inline double qtm_krawtchouk_orthogonality_residual(const QtmKrawtchoukParams& p) {
  const double q = p.q;
  const int N = p.N;
  if (!(p.p > std::pow(q, -N)))
    throw InvalidParams("qtm orthogonality requires p > q^{-N}");
  std::vector<std::vector<long double>> K(N + 1, std::vector<long double>(N + 1));
  for (int n = 0; n <= N; ++n)
    for (int x = 0; x <= N; ++x)
      K[n][x] = quantum_q_krawtchouk(n, x, p.p, N, q).value_ld();

  std::vector<long double> w(N + 1);
  for (int x = 0; x <= N; ++x) {
    LogReal v = q_pochhammer(p.p * q, q, N - x) /
                (q_pochhammer(q, q, x) * q_pochhammer(q, q, N - x));
    v *= LogReal::from_value(-1.0).pow_int(N - x);
    v *= LogReal::from_value(q).pow_int(detail::binom2(x));
    w[x] = v.value_ld();
  }

  double worst = 0.0;
  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      CompensatedSum lhs;
      for (int x = 0; x <= N; ++x) lhs.add(w[x] * K[m][x] * K[n][x]);
      long double rhs = 0.0L;
      if (m == n) {
        LogReal r = LogReal::from_value(-1.0).pow_int(n) *
                    LogReal::from_value(p.p).pow_int(N);
        r *= q_pochhammer(q, q, N - n) * q_pochhammer(q, q, n) *
             q_pochhammer(p.p * q, q, n);
        r /= q_pochhammer(q, q, N).pow_int(2);
        r *= LogReal::from_value(q).pow_int(
            detail::binom2(N + 1) - detail::binom2(n + 1) + (long long)N * n);
        rhs = r.value_ld();
      }
      double dev = std::fabs((double)(lhs.value() - rhs));
      if (dev > worst) worst = dev;
    }
  }
  return worst;
}

}  // namespace qasep
