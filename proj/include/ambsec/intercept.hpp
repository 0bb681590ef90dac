#pragma once
/**
 * @brief Closed-form intercept probabilities against the most detrimental
 * Eve of a homogeneous Poisson field outside the exclusion disc.
 *
 * Each IP has the form 1 - exp(E) where E is the PGFL exponent, a negative
 * quantity proportional to lambda_e. Eve-side distances use the collapsed
 * approximation d_BV = d_SV.
 */
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "ambsec/model.hpp"
#include "ambsec/specfun.hpp"

namespace ambsec::intercept {

struct InterceptTriple {
  double p_F = 0.0;
  double p_N = 0.0;
  double p_C = 0.0;
};

/// int_{r_p}^inf exp(-M r^alpha) r dr = Gamma(2/alpha, M r_p^alpha) / (alpha M^{2/alpha})
inline double annulus_integral(double M, double r_p, double alpha) {
  if (!(M > 0.0)) throw std::domain_error("annulus_integral: M must be > 0");
  const double s = 2.0 / alpha;
  return specfun::upper_gamma(s, M * std::pow(r_p, alpha)) / (alpha * std::pow(M, s));
}

/// Node-independent parts of the IP closed forms. A *_degenerate flag means
/// the Eve SINR ceiling does not exceed the threshold and the IP is zero.
struct TableTwoParams {
  bool f_degenerate = false;
  bool n_degenerate = false;
  bool c_degenerate = false;
  double Ae0 = 0.0, Ge0 = 0.0, Me0 = 0.0;
  double Ae1 = 0.0, Ge1 = 0.0, Me1 = 0.0;
  double Ae2 = 0.0, Ge2 = 0.0;
  double delta = 0.0;
  /// c(r) = kappa_c r^alpha is the scaled threshold of the BS->BD->Eve
  /// product gain at Eve radius r.
  double kappa_c = 0.0;
};

namespace detail {
// A e^A Ei(-A), in (-1, 0) for A > 0
inline double g_of(double A) { return -A * specfun::e1_scaled(A); }

inline double checked_ip(double exponent, const char* what) {
  if (!(exponent <= 0.0)) {
    throw std::logic_error(std::string(what) + ": positive PGFL exponent " +
                           std::to_string(exponent));
  }
  return -std::expm1(exponent);
}
}  // namespace detail

inline TableTwoParams table2(const Scenario& s) {
  const auto& p = s.params;
  const auto& th = s.thresholds;
  const double lSB = lambda_of(s.geometry, Link::SB);
  const double b2 = p.beta * p.beta;
  TableTwoParams t;

  const double xf = th.g_E_sF;
  const double margin_f = p.theta * p.a_F - p.theta * p.a_N * xf - (1.0 - p.theta) * xf;
  t.f_degenerate = reaches_ceiling(xf, p.theta * p.a_F / (p.theta * p.a_N + 1.0 - p.theta));
  if (!t.f_degenerate) {
    t.Ae0 = margin_f / (lSB * xf * b2);
    t.Ge0 = detail::g_of(t.Ae0);
    t.Me0 = xf / (margin_f * p.gamma);
  }

  const double xn = th.g_E_sN;
  const double margin_n = p.theta * p.a_N - (1.0 - p.theta) * xn;
  t.n_degenerate = reaches_ceiling(xn, p.theta * p.a_N / (1.0 - p.theta));
  if (!t.n_degenerate) {
    t.Ae1 = margin_n / (lSB * xn * b2);
    t.Ge1 = detail::g_of(t.Ae1);
    t.Me1 = xn / (p.gamma * margin_n);
  }

  const double xc = th.g_E_sC;
  t.c_degenerate = reaches_ceiling(xc, p.theta / (1.0 - p.theta));
  if (!t.c_degenerate) {
    t.delta = b2 * (p.theta - (1.0 - p.theta) * xc);
    t.Ae2 = xc * (1.0 - p.theta) / (lSB * t.delta);
    t.Ge2 = detail::g_of(t.Ae2);
    t.kappa_c = xc / (p.gamma * t.delta * lSB);
  }
  return t;
}

/// PGFL exponent of IP_F; zero in the degenerate branch or when lambda_e = 0.
inline double ip_f_exponent(const Scenario& s) {
  const auto t = table2(s);
  if (t.f_degenerate || s.eves.lambda_e == 0.0) return 0.0;
  return s.eves.lambda_e * t.Ge0 * 2.0 * std::numbers::pi *
         annulus_integral(t.Me0, s.geometry.r_p, s.geometry.alpha);
}

inline double ip_n_exponent(const Scenario& s) {
  const auto t = table2(s);
  if (t.n_degenerate || s.eves.lambda_e == 0.0) return 0.0;
  return s.eves.lambda_e * t.Ge1 * 2.0 * std::numbers::pi *
         annulus_integral(t.Me1, s.geometry.r_p, s.geometry.alpha);
}

inline double ip_f(const Scenario& s) {
  return detail::checked_ip(ip_f_exponent(s), "ip_f");
}

inline double ip_n(const Scenario& s) {
  return detail::checked_ip(ip_n_exponent(s), "ip_n");
}

namespace detail {
inline double delta_of(const Scenario& s, double x) {
  const auto& p = s.params;
  return p.beta * p.beta * (p.theta - (1.0 - p.theta) * x);
}

inline void require_branch(const Scenario& s, double x, double delta) {
  if (!(delta > 0.0) || reaches_ceiling(x, s.params.theta / (1.0 - s.params.theta))) {
    throw std::domain_error("q_v: threshold at or above the s_C SINR ceiling");
  }
}
}  // namespace detail

/**
 * Pr(gamma_V^{s_C} > x) for a single Eve at radius r.
 *
 * With t = |g_SB|^2 the probability conditioned on the BS->BD gain is
 * exp(-c/t) t/(A + t), so
 *
 *   Q_V(r) = int_0^inf e^{-t} e^{-c/t} t / (A + t) dt,
 *   A = x (1-theta) / (lambda_SB delta),   c = x r^alpha / (gamma delta lambda_SB).
 *
 * This is the same quantity as the I_VF - I_VL split but every integrand
 * term is non-negative, so nothing cancels when r^alpha / ((1-theta) gamma)
 * is large.
 */
inline double q_v(const Scenario& s, double x, double r) {
  const double delta = detail::delta_of(s, x);
  detail::require_branch(s, x, delta);
  const double lSB = lambda_of(s.geometry, Link::SB);
  const double A = x * (1.0 - s.params.theta) / (lSB * delta);
  const double c = x * std::pow(r, s.geometry.alpha) / (s.params.gamma * delta * lSB);
  if (c > 1e5) return 0.0;  // bounded by 2 sqrt(c) K1(2 sqrt(c)) < 1e-270

  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [A, c](double t) -> double {
    if (!(t > 0.0)) return 0.0;
    const double e = t + c / t;
    if (e > 745.0) return 0.0;
    return std::exp(-e) * t / (A + t);
  };
  const double q = integrator.integrate(f, 1e-13);
  if (!(q > -1e-9 && q < 1.0 + 1e-9)) {
    throw std::logic_error("q_v: probability out of range: " + std::to_string(q));
  }
  return std::clamp(q, 0.0, 1.0);
}

/**
 * The I_VF - I_VL form with a Gauss-Chebyshev rule of order n for I_VL.
 *
 * I_VL carries the prefactor pi x / (n gamma delta lambda_SB lambda_BV). The
 * result loses about B_e2 / ln(10) digits, B_e2 = r^alpha / ((1-theta) gamma),
 * so it is only usable while B_e2 stays small; q_v is the production path.
 */
inline double q_v_split(const Scenario& s, double x, double r, int n) {
  const double delta = detail::delta_of(s, x);
  detail::require_branch(s, x, delta);
  const auto& p = s.params;
  const double lSB = lambda_of(s.geometry, Link::SB);
  const double ra = std::pow(r, s.geometry.alpha);
  const double Ae2 = x * (1.0 - p.theta) / (lSB * delta);
  const double Be2 = ra / ((1.0 - p.theta) * p.gamma);
  const double ivf = 1.0 + detail::g_of(Ae2) * std::exp(Be2);
  const double Ae3 = x * std::numbers::pi * ra / (n * p.gamma * delta * lSB);
  double sum = 0.0;
  for (double t : specfun::chebyshev_nodes(n)) {
    const double Be3 = (t + 1.0) * ra / (2.0 * p.gamma * (1.0 - p.theta)) - Be2;
    const double Ce3 = 2.0 * std::sqrt(x * (t + 1.0) * ra / (2.0 * p.gamma * delta * lSB));
    sum += std::sqrt(1.0 - t * t) * (-std::expm1(-Be3)) * specfun::bessel_k0(Ce3);
  }
  return ivf - Ae3 * sum;
}

/// Length scale of the decay of Q_V(r) r, used to stretch the Laguerre
/// abscissas: the exponent 2 sqrt(c(r)) has unit slope at r_eff.
inline double ip_c_length_scale(const Scenario& s) {
  const auto t = table2(s);
  if (t.c_degenerate) return 1.0;
  const double alpha = s.geometry.alpha;
  const double r_eff = std::max(s.geometry.r_p, std::pow(t.kappa_c, -1.0 / alpha));
  return 1.0 / (alpha * std::sqrt(t.kappa_c) * std::pow(r_eff, 0.5 * alpha - 1.0));
}

/// PGFL exponent of IP_C with an N-point Gauss-Laguerre rule over
/// r = r_p + L l.
inline double ip_c_exponent_with_order(const Scenario& s, int laguerre_order) {
  const auto t = table2(s);
  if (t.c_degenerate || s.eves.lambda_e == 0.0) return 0.0;
  const auto rule = specfun::gauss_laguerre(laguerre_order);
  const double L = ip_c_length_scale(s);
  const double r_p = s.geometry.r_p;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = r_p + L * rule.roots[i];
    const double q = q_v(s, s.thresholds.g_E_sC, r);
    if (q == 0.0) continue;
    sum += rule.scaled_weights[i] * q * r;
  }
  return -2.0 * std::numbers::pi * s.eves.lambda_e * L * sum;
}

inline double ip_c_with_order(const Scenario& s, int laguerre_order) {
  return detail::checked_ip(ip_c_exponent_with_order(s, laguerre_order), "ip_c");
}

inline double ip_c(const Scenario& s) {
  return ip_c_with_order(s, s.quadrature.laguerre_order);
}

inline InterceptTriple intercept(const Scenario& s) {
  return {ip_f(s), ip_n(s), ip_c(s)};
}

using specfun::QuadratureCheck;

inline QuadratureCheck ip_c_checked(const Scenario& s, double tol = 1e-5) {
  const int N = s.quadrature.laguerre_order;
  QuadratureCheck c;
  c.value = ip_c_with_order(s, N);
  c.refined = ip_c_with_order(s, 2 * N);
  c.converged = std::fabs(c.value - c.refined) <= tol;
  return c;
}

// High-SNR forms.

/// Gamma(s) - sum_{n>=0} (-1)^n z^{s+n} / (n! (s+n)), truncated once a term
/// drops below 1e-12. The alternating sum cancels for large z; domain_error
/// when fewer than about six significant digits survive.
inline double upper_gamma_small_z(double s, double z) {
  double sum = 0.0;
  double largest = 0.0;
  double zpow_over_fact = std::pow(z, s);  // z^{s+n} / n!
  for (int n = 0; n < 1000; ++n) {
    if (n > 0) zpow_over_fact *= z / n;
    const double term = (n % 2 == 0 ? 1.0 : -1.0) * zpow_over_fact / (s + n);
    largest = std::max(largest, std::fabs(term));
    sum += term;
    if (std::fabs(term) < 1e-12) break;
  }
  const double value = std::tgamma(s) - sum;
  if (largest * 1e-16 > 1e-6 * std::fabs(value)) {
    throw std::domain_error("upper_gamma_small_z: series cancellation at z = " +
                            std::to_string(z) + ", outside the high-SNR regime");
  }
  return value;
}

inline double ip_f_asy(const Scenario& s) {
  const auto t = table2(s);
  if (t.f_degenerate || s.eves.lambda_e == 0.0) return 0.0;
  const double a = s.geometry.alpha;
  const double ug = upper_gamma_small_z(2.0 / a, t.Me0 * std::pow(s.geometry.r_p, a));
  const double e = s.eves.lambda_e * t.Ge0 * 2.0 * std::numbers::pi * ug /
                   (a * std::pow(t.Me0, 2.0 / a));
  return detail::checked_ip(e, "ip_f_asy");
}

inline double ip_n_asy(const Scenario& s) {
  const auto t = table2(s);
  if (t.n_degenerate || s.eves.lambda_e == 0.0) return 0.0;
  const double a = s.geometry.alpha;
  const double ug = upper_gamma_small_z(2.0 / a, t.Me1 * std::pow(s.geometry.r_p, a));
  const double e = s.eves.lambda_e * t.Ge1 * 2.0 * std::numbers::pi * ug /
                   (a * std::pow(t.Me1, 2.0 / a));
  return detail::checked_ip(e, "ip_n_asy");
}

/**
 * High-SNR IP_C: e^{B_e2} ~ 1 + B_e2, 1 - e^{-B_e3} ~ B_e3, K0(x) ~ -ln(x/2)
 * inside the split form, with the unit-scale Laguerre rule over r = r_p + l.
 * Each node's bracket approximates a probability and is clamped to [0, 1];
 * away from high SNR the linearization drives it out of range.
 */
inline double ip_c_asy(const Scenario& s) {
  const auto t = table2(s);
  if (t.c_degenerate || s.eves.lambda_e == 0.0) return 0.0;
  const auto& p = s.params;
  const double x = s.thresholds.g_E_sC;
  const double lSB = lambda_of(s.geometry, Link::SB);
  const int n = s.quadrature.chebyshev_order;
  const auto nodes = specfun::chebyshev_nodes(n);
  const auto rule = specfun::gauss_laguerre(s.quadrature.laguerre_order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.roots[i] + s.geometry.r_p;
    const double ra = std::pow(r, s.geometry.alpha);
    const double Be2 = ra / ((1.0 - p.theta) * p.gamma);
    const double Ae3 = x * std::numbers::pi * ra / (n * p.gamma * t.delta * lSB);
    double inner = 0.0;
    for (double tj : nodes) {
      const double Be3 = (tj + 1.0) * ra / (2.0 * p.gamma * (1.0 - p.theta)) - Be2;
      const double Ce3 = 2.0 * std::sqrt(x * (tj + 1.0) * ra / (2.0 * p.gamma * t.delta * lSB));
      inner += std::sqrt(1.0 - tj * tj) * std::log(0.5 * Ce3) * Be3;
    }
    const double bracket = std::clamp(1.0 + t.Ge2 * (1.0 + Be2) + Ae3 * inner, 0.0, 1.0);
    sum += rule.scaled_weights[i] * bracket * r;
  }
  return detail::checked_ip(-2.0 * std::numbers::pi * s.eves.lambda_e * sum, "ip_c_asy");
}

}  // namespace ambsec::intercept
