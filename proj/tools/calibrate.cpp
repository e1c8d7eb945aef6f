// Development-time calibration of the height-slot conventions in the duality
// module. Sweeps small-integer convention candidates and reports which make
// the generator duality, Prop 4.4 biorthogonality, and c^v/C^v collapse hold
// to machine precision.

#include <cmath>
#include <cstdio>
#include <vector>

#include "qasep/ctmc.hpp"
#include "qasep/duality.hpp"
#include "qasep/lattice.hpp"

using namespace qasep;

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix duality_matrix(const DualityParams& params, const detail::HeightSlots& s,
                      bool qtm) {
  const int M = params.model.window.size();
  const int dim = 1 << M;
  Matrix D(dim, std::vector<double>(dim, 0.0));
  for (int e = 0; e < dim; ++e) {
    auto dual = OccupationConfig::from_bits(params.model.window, e);
    for (int x = 0; x < dim; ++x) {
      auto orig = OccupationConfig::from_bits(params.model.window, x);
      LogReal val = qtm ? duality_K_qtm(dual, orig, params, s)
                        : duality_P_R(dual, orig, params, s);
      D[e][x] = val.value();
    }
  }
  return D;
}

double gen_duality_residual(const DualityParams& params,
                            const detail::HeightSlots& s, bool qtm,
                            double dual_left, double dual_right,
                            bool orig_dynamic, double orig_left = 0,
                            double orig_right = 0) {
  const int dim = 1 << params.model.window.size();
  Matrix D = duality_matrix(params, s, qtm);
  Matrix Ldyn = orig_dynamic
                    ? build_dynamic_generator(params.model).dense()
                    : build_asep_generator(params.model.window, orig_right,
                                           orig_left)
                          .dense();
  Matrix Ldual =
      build_asep_generator(params.model.window, dual_right, dual_left).dense();
  double worst = 0.0;
  for (int e = 0; e < dim; ++e) {
    for (int x = 0; x < dim; ++x) {
      double lhs = 0.0, rhs = 0.0;
      for (int k = 0; k < dim; ++k) {
        lhs += Ldual[e][k] * D[k][x];
        rhs += D[e][k] * Ldyn[x][k];
      }
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  // Normalize by matrix scale so the residual is comparable across params.
  double scale = 0.0;
  for (auto& row : D)
    for (double vv : row) scale = std::max(scale, std::fabs(vv));
  return worst / std::max(1.0, scale);
}

double orthogonality_residual(const DualityParams& params,
                              const detail::HeightSlots& s) {
  const int dim = 1 << params.model.window.size();
  Matrix D = duality_matrix(params, s, false);
  std::vector<double> wdual(dim), worig(dim);
  for (int e = 0; e < dim; ++e) {
    auto cfg = OccupationConfig::from_bits(params.model.window, e);
    wdual[e] = dual_side_weight(cfg, params).value();
    worig[e] = original_side_weight(cfg, params, false).value();
  }
  double worst = 0.0;
  for (int x1 = 0; x1 < dim; ++x1) {
    for (int x2 = 0; x2 < dim; ++x2) {
      long double sum = 0.0L;
      for (int e = 0; e < dim; ++e)
        sum += (long double)D[e][x1] * D[e][x2] * wdual[e];
      long double rhs = (x1 == x2) ? 1.0L / ((long double)worig[x1]) : 0.0L;
      worst = std::max(worst, (double)std::fabs((double)(sum - rhs)));
    }
  }
  for (int e1 = 0; e1 < dim; ++e1) {
    for (int e2 = 0; e2 < dim; ++e2) {
      long double sum = 0.0L;
      for (int x = 0; x < dim; ++x)
        sum += (long double)D[e1][x] * D[e2][x] * worig[x];
      long double rhs = (e1 == e2) ? 1.0L / ((long double)wdual[e1]) : 0.0L;
      worst = std::max(worst, (double)std::fabs((double)(sum - rhs)));
    }
  }
  return worst;
}

double collapse_residual(const DualityParams& params,
                         const detail::HeightSlots& s) {
  const int dim = 1 << params.model.window.size();
  double worst = 0.0;
  for (int e = 0; e < dim; ++e) {
    auto dual = OccupationConfig::from_bits(params.model.window, e);
    for (int x = 0; x < dim; ++x) {
      auto orig = OccupationConfig::from_bits(params.model.window, x);
      for (double lam : {0.0, 0.6}) {
        for (double rho : {0.0, 1.1}) {
          auto closed = scaling_constants(dual.particles(), orig.particles(),
                                          params, lam, rho);
          auto prod =
              scaling_constants_product(dual, orig, params, lam, rho, s);
          worst = std::max(
              worst, std::fabs(closed.c_v.value() - prod.c_v.value()) /
                         std::max(1.0, std::fabs(closed.c_v.value())));
          worst = std::max(
              worst, std::fabs(closed.C_v.value() - prod.C_v.value()) /
                         std::max(1.0, std::fabs(closed.C_v.value())));
        }
      }
    }
  }
  return worst;
}

}  // namespace

int main() {
  DualityParams base;
  base.model = ModelParams{1.4, 0.7, Window{1, 2}, {}};
  base.v = -0.3;

  std::printf("== frozen conventions: generator duality ==\n");
  std::vector<std::array<double, 3>> pts = {
      {1.4, 0.7, -0.3}, {1.7, -0.9, -0.45}, {2.2, 0.3, -1.2}, {1.2, 1.4, 0.35}};
  for (auto [q, rho, v] : pts) {
    for (int M : {2, 3}) {
      DualityParams p;
      p.model = ModelParams{q, rho, Window{1, M}, {}};
      p.v = v;
      double r = gen_duality_residual(p, {}, false, q, 1.0 / q, true);
      std::printf("  P_R  M=%d q=%g rho=%g v=%g: %.2e\n", M, q, rho, v, r);
    }
  }

  std::printf("== frozen conventions: Prop 4.4 orthogonality ==\n");
  for (auto [q, rho, v] : pts) {
    DualityParams p;
    p.model = ModelParams{q, rho, Window{1, 3}, {}};
    p.v = v;
    std::printf("  M=3 q=%g rho=%g v=%g: %.2e\n", q, rho, v,
                orthogonality_residual(p, {}));
  }

  std::printf("== frozen conventions: c/C collapse ==\n");
  for (int M : {2, 3}) {
    DualityParams b3 = base;
    b3.model.window = Window{1, M};
    std::printf("  M=%d: %.2e\n", M, collapse_residual(b3, {}));
  }

  std::printf("== qtm self-duality of ASEP(left q, right 1/q) ==\n");
  for (int M : {2, 3}) {
    DualityParams p = base;
    p.model.window = Window{1, M};
    double r = gen_duality_residual(p, {}, true, p.model.q, 1.0 / p.model.q,
                                    false, p.model.q, 1.0 / p.model.q);
    std::printf("  M=%d: %.2e\n", M, r);
  }

  std::printf("== K_qtm limit prefactor variants (M=2, rho=10/20/40) ==\n");
  for (int variant = 0; variant < 4; ++variant) {
    std::printf("  variant %d (c uses %s, C uses %s):\n", variant,
                (variant & 1) ? "v q^rho" : "v", (variant & 2) ? "v q^rho" : "v");
    for (double rho : {10.0, 20.0, 40.0}) {
      DualityParams big = base;
      big.model.rho = rho;
      big.v = base.v * std::pow(base.model.q, rho);
      DualityParams plain = base;  // rho irrelevant for K_qtm
      double worst = 0.0;
      const int dim = 1 << base.model.window.size();
      for (int e = 0; e < dim; ++e) {
        auto dual = OccupationConfig::from_bits(base.model.window, e);
        for (int x = 0; x < dim; ++x) {
          auto orig = OccupationConfig::from_bits(base.model.window, x);
          LogReal P = duality_P_R(dual, orig, big, {});
          DualityParams pc = (variant & 1) ? big : plain;
          DualityParams pC = (variant & 2) ? big : plain;
          LogReal cv =
              scaling_constants(dual.particles(), orig.particles(), pc, 0, 0).c_v;
          LogReal Cv = scaling_constants(dual.particles(), orig.particles(), pC,
                                         0, 2 * rho)
                           .C_v;
          LogReal pref = LogReal::from_value(base.v)
                             .pow_int(-2 * dual.particles()) *
                         detail::q_power(base.model.q,
                                         -2.0 * rho * dual.particles());
          double got = (pref / (cv * Cv) * P).value();
          double want = duality_K_qtm(dual, orig, plain, {}).value();
          worst = std::max(worst, std::fabs(got - want));
        }
      }
      std::printf("    rho=%4.0f: max err %.3e\n", rho, worst);
    }
  }
  return 0;
}
