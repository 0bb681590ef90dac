#pragma once
/**
 * @brief Closed-form outage probabilities of U_F, U_N and the backscatter
 * device, their high-SNR forms, floors, and the diversity order estimate.
 *
 * Products of the form A e^A Ei(-A) are evaluated as -A e1_scaled(A), so no
 * e^A is ever formed. Branch ties (a_F/a_N equal to a threshold) resolve to
 * outage.
 */
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ambsec/model.hpp"
#include "ambsec/specfun.hpp"

namespace ambsec::outage {

struct OutageTriple {
  double p_F = 1.0;
  double p_N = 1.0;
  double p_C = 1.0;
};

/// Parameters of the OP closed forms. B2/C2 depend on the Chebyshev node and
/// are filled only when requested with a node count.
struct TableOneParams {
  bool f_degenerate = false;  ///< a_F/a_N <= g_F_sF, OP_F = 1
  bool n_degenerate = false;  ///< a_F/a_N <= g_N_sF, OP_N = OP_C = 1
  bool c_degenerate = false;  ///< also true when g_N_sC >= theta/(eta(1-theta))
  double A0 = 0.0, B0 = 0.0;
  double A1 = 0.0, B1 = 0.0;
  double Gamma_cap = 0.0;
  double A2 = 0.0;
  double A2_asy = 0.0;
  std::vector<double> t, B2, C2;
};

namespace detail {
inline double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }
}  // namespace detail

inline TableOneParams table1(const Scenario& s, int chebyshev_order = 0) {
  const auto& p = s.params;
  const auto& g = s.geometry;
  const auto& th = s.thresholds;
  const double lSN = lambda_of(g, Link::SN);
  const double lSF = lambda_of(g, Link::SF);
  const double lSB = lambda_of(g, Link::SB);
  const double lBN = lambda_of(g, Link::BN);
  const double lBF = lambda_of(g, Link::BF);
  const double b2 = p.beta * p.beta;
  const double resid = p.theta + p.eta * (1.0 - p.theta);

  TableOneParams t;
  t.f_degenerate = reaches_ceiling(th.g_F_sF, p.a_F / p.a_N);
  t.n_degenerate = reaches_ceiling(th.g_N_sF, p.a_F / p.a_N);
  const double k7_core = p.theta - p.eta * (1.0 - p.theta) * th.g_N_sC;
  t.c_degenerate = t.n_degenerate || k7_core <= 0.0 ||
                   (p.eta > 0.0 && reaches_ceiling(th.g_N_sC, p.theta / (p.eta * (1.0 - p.theta))));

  if (!t.f_degenerate) {
    const double margin = p.a_F - p.a_N * th.g_F_sF;
    t.A0 = p.theta * margin * lSF / (b2 * th.g_F_sF * resid * lSB * lBF);
    t.B0 = th.g_F_sF / (p.theta * p.gamma * margin * lSF);
  }
  if (!t.n_degenerate) {
    t.Gamma_cap = std::max(th.g_N_sF / (p.a_F - p.a_N * th.g_N_sF),
                           th.g_N_sN / p.a_N);
    t.A1 = p.theta * lSN / (b2 * t.Gamma_cap * resid * lSB * lBN);
    t.B1 = t.Gamma_cap / (p.theta * p.gamma * lSN);
  }
  if (!t.c_degenerate) {
    const int n = chebyshev_order > 0 ? chebyshev_order : s.quadrature.chebyshev_order;
    t.A2_asy = std::numbers::pi * th.g_N_sC / (n * b2 * k7_core * lSB * lBN);
    t.A2 = t.A2_asy * std::exp(-t.B1) / p.gamma;
    if (chebyshev_order > 0) {
      t.t = specfun::chebyshev_nodes(n);
      t.B2.reserve(t.t.size());
      t.C2.reserve(t.t.size());
      for (double ti : t.t) {
        t.B2.push_back(t.Gamma_cap * resid * th.g_N_sC * (ti + 1.0) /
                       (2.0 * p.gamma * k7_core * p.theta * lSN));
        t.C2.push_back(2.0 * std::sqrt(th.g_N_sC * (ti + 1.0) /
                                       (2.0 * lSB * lBN * b2 * p.gamma * k7_core)));
      }
    }
  }
  return t;
}

/// 1 + A e^{A-B} Ei(-A)
inline double ei_form(double A, double B) {
  return detail::clamp01(1.0 - A * specfun::e1_scaled(A) * std::exp(-B));
}

inline double op_f(const Scenario& s) {
  const auto t = table1(s);
  if (t.f_degenerate) return 1.0;
  return ei_form(t.A0, t.B0);
}

inline double op_n(const Scenario& s) {
  const auto t = table1(s);
  if (t.n_degenerate) return 1.0;
  return ei_form(t.A1, t.B1);
}

namespace detail {
/// Unclamped OP_C at Chebyshev order n; assumes the branch is not degenerate.
inline double op_c_sum(const TableOneParams& t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t.t.size(); ++i) {
    // t_i = -1 only in the limit; C2_i > 0 for every finite n
    sum += std::sqrt(1.0 - t.t[i] * t.t[i]) * std::exp(-t.B2[i]) *
           specfun::bessel_k0(t.C2[i]);
  }
  return ei_form(t.A1, t.B1) + t.A2 * sum;
}

inline constexpr double op_c_doubling_tol = 1e-8;
inline constexpr int op_c_max_doublings = 8;
}  // namespace detail

/// OP_C with an explicit Chebyshev order n.
inline double op_c_with_order(const Scenario& s, int n) {
  const auto t = table1(s, n);
  if (t.c_degenerate) return 1.0;
  return detail::clamp01(detail::op_c_sum(t));
}

/// OP_C starting from the configured order and doubling until successive
/// sums agree to 1e-8. K0 puts a logarithmic singularity at t = -1, so the
/// rule converges only like 1/n^2 and n = 100 is short at low SNR.
inline double op_c(const Scenario& s) {
  int n = s.quadrature.chebyshev_order;
  const auto t = table1(s, n);
  if (t.c_degenerate) return 1.0;
  double v = detail::op_c_sum(t);
  for (int k = 0; k < detail::op_c_max_doublings; ++k) {
    n *= 2;
    const double w = detail::op_c_sum(table1(s, n));
    if (std::fabs(w - v) < detail::op_c_doubling_tol) return detail::clamp01(w);
    v = w;
  }
  return detail::clamp01(v);
}

inline OutageTriple outage(const Scenario& s) {
  return {op_f(s), op_n(s), op_c(s)};
}

using specfun::QuadratureCheck;

inline QuadratureCheck op_c_checked(const Scenario& s, double tol = 1e-5) {
  const int n = s.quadrature.chebyshev_order;
  QuadratureCheck c;
  c.value = op_c_with_order(s, n);
  c.refined = op_c_with_order(s, 2 * n);
  c.converged = std::fabs(c.value - c.refined) <= tol;
  return c;
}

// High-SNR forms, using exp(-x) ~ 1 - x and K0(x) ~ -ln(x/2).

inline double op_f_asy(const Scenario& s) {
  const auto t = table1(s);
  if (t.f_degenerate) return 1.0;
  return detail::clamp01(1.0 - t.A0 * specfun::e1_scaled(t.A0) * (1.0 - t.B0));
}

inline double op_n_asy(const Scenario& s) {
  const auto t = table1(s);
  if (t.n_degenerate) return 1.0;
  return detail::clamp01(1.0 - t.A1 * specfun::e1_scaled(t.A1) * (1.0 - t.B1));
}

inline double op_c_asy(const Scenario& s) {
  const auto t = table1(s, s.quadrature.chebyshev_order);
  if (t.c_degenerate) return 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < t.t.size(); ++i) {
    sum += std::sqrt(1.0 - t.t[i] * t.t[i]) * (1.0 - t.B2[i]) * std::log(0.5 * t.C2[i]);
  }
  const double base = 1.0 - t.A1 * specfun::e1_scaled(t.A1) * (1.0 - t.B1);
  return detail::clamp01(base - t.A2_asy * (1.0 - t.B1) / s.params.gamma * sum);
}

/// gamma -> infinity limits; both are independent of gamma.
inline double op_floor_f(const Scenario& s) {
  const auto t = table1(s);
  if (t.f_degenerate) return 1.0;
  return ei_form(t.A0, 0.0);
}

/// Shared floor of U_N and the BD.
inline double op_floor_nc(const Scenario& s) {
  const auto t = table1(s);
  if (t.n_degenerate) return 1.0;
  return ei_form(t.A1, 0.0);
}

/// Finite-difference estimate -(log p_hi - log p_lo)/(log g_hi - log g_lo).
inline double diversity_order(const std::function<double(const Scenario&)>& op,
                              Scenario s, double gamma_lo_db, double gamma_hi_db) {
  if (!(gamma_hi_db > gamma_lo_db)) {
    throw std::invalid_argument("diversity_order: gamma_hi must exceed gamma_lo");
  }
  s.params.gamma = db_to_linear(gamma_lo_db);
  const double p_lo = op(s);
  s.params.gamma = db_to_linear(gamma_hi_db);
  const double p_hi = op(s);
  if (!(p_lo > 0.0 && p_lo < 1.0 && p_hi > 0.0 && p_hi < 1.0)) {
    throw std::domain_error("diversity_order: probability is 0 or 1 at an endpoint");
  }
  return -(std::log(p_hi) - std::log(p_lo)) /
         (std::log(db_to_linear(gamma_hi_db)) - std::log(db_to_linear(gamma_lo_db)));
}

}  // namespace ambsec::outage
