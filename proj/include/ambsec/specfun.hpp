#pragma once
/**
 * @brief Special functions and fixed-order quadrature rules.
 *
 * Everything here is a pure function of its arguments. Domain violations
 * throw std::domain_error; root-finding failures throw std::runtime_error.
 */
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambsec::specfun {

inline constexpr double euler_gamma = 0.57721566490153286061;

/// Orders of the two fixed quadrature rules used by the closed forms.
struct QuadratureSpec {
  int chebyshev_order = 100;  ///< n, number of Chebyshev nodes t_i
  int laguerre_order = 30;    ///< N, number of Laguerre pairs (l_i, w_i)
};

namespace detail {

inline void require_positive(double x, const char* fn) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(fn) + ": argument must be > 0, got " +
                            std::to_string(x));
  }
}

// E1(x) for 0 < x < 1 by its power series.
inline double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::fabs(add) < 1e-17 * std::fabs(sum)) break;
  }
  return -euler_gamma - std::log(x) + sum;
}

// e^x E1(x) for x >= 1 by the modified Lentz evaluation of
// 1/(x+1- 1/(x+3- 4/(x+5- ...))).
inline double e1_scaled_cf(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) return h;
  }
  throw std::runtime_error("e1_scaled: continued fraction did not converge");
}

}  // namespace detail

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
inline double e1(double x) {
  detail::require_positive(x, "e1");
  if (x < 1.0) return detail::e1_series(x);
  if (x > 745.0) return 0.0;
  return std::exp(-x) * detail::e1_scaled_cf(x);
}

/// e^x E1(x) without forming e^x for large x. Ei(-x) = -E1(x), so the
/// frequent product A e^A Ei(-A) equals -A * e1_scaled(A).
inline double e1_scaled(double x) {
  detail::require_positive(x, "e1_scaled");
  if (x < 1.0) return std::exp(x) * detail::e1_series(x);
  return detail::e1_scaled_cf(x);
}

/// Modified Bessel function of the second kind, order zero.
///
/// Power series for x <= 2. Above that, trapezoidal evaluation of
/// K0(x) = int_0^inf exp(-x cosh t) dt. The discretisation error behaves like
/// exp(-2 pi^2 / (h^2 x)), so the step shrinks as 1/sqrt(x).
inline double bessel_k0(double x) {
  detail::require_positive(x, "bessel_k0");
  if (x <= 2.0) {
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x) + euler_gamma;
    double term = 1.0;  // q^k / (k!)^2
    double harmonic = 0.0;
    double i0 = 1.0;
    double tail = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * k);
      harmonic += 1.0 / k;
      i0 += term;
      tail += term * harmonic;
      if (term < 1e-18 * i0) break;
    }
    return -lg * i0 + tail;
  }
  if (x > 745.0) return 0.0;
  const double h = std::min(0.125, 0.5 / std::sqrt(x));
  double sum = 0.5;  // t = 0 carries half weight
  for (int k = 1; k < 2000; ++k) {
    const double t = k * h;
    const double arg = x * (std::cosh(t) - 1.0);
    if (arg > 60.0) break;
    sum += std::exp(-arg);
  }
  return std::exp(-x) * h * sum;
}

/// Upper incomplete gamma function Gamma(s, x), s > 0, x >= 0.
inline double upper_gamma(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("upper_gamma: s must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("upper_gamma: x must be >= 0");
  if (x == 0.0) return std::tgamma(s);
  const double log_prefactor = s * std::log(x) - x;
  if (x < s + 1.0) {
    // lower gamma by series, then subtract from the complete gamma
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
    }
    return std::tgamma(s) - sum * std::exp(log_prefactor);
  }
  // continued fraction, modified Lentz
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  if (log_prefactor < -745.0) return 0.0;
  return std::exp(log_prefactor) * h;
}

/// Chebyshev nodes t_i = cos((2i-1) pi / (2n)), i = 1..n.
inline std::vector<double> chebyshev_nodes(int n) {
  if (n < 1) throw std::domain_error("chebyshev_nodes: n must be >= 1");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    t[static_cast<std::size_t>(i - 1)] =
        std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n));
  }
  // cos(pi/2) is 6e-17 in floating point; the middle node is exactly zero.
  if (n % 2 == 1) t[static_cast<std::size_t>(n / 2)] = 0.0;
  return t;
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
inline double laguerre_polynomial(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// A quadrature-backed value at its configured order and at twice that
/// order; `converged` when the two differ by at most the requested tolerance.
struct QuadratureCheck {
  double value = 0.0;
  double refined = 0.0;
  bool converged = true;
};

/// Gauss-Laguerre rule for int_0^inf e^{-x} f(x) dx.
struct LaguerreRule {
  std::vector<double> roots;
  std::vector<double> weights;
  /// w_i * e^{l_i}, the weights of the rule for int_0^inf f(x) dx.
  std::vector<double> scaled_weights;
  std::size_t size() const { return roots.size(); }
};

/// Roots of L_N by Newton iteration from the classical initial guesses;
/// weights w_i = l_i / ((N+1)^2 L_{N+1}(l_i)^2).
inline LaguerreRule gauss_laguerre(int order) {
  if (order < 1) throw std::domain_error("gauss_laguerre: N must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  LaguerreRule rule;
  rule.roots.resize(n);
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * order);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * order);
    } else {
      const double ai = static_cast<double>(i - 1);
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.roots[i - 2]);
    }
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      // p1 = L_N(z), p2 = L_{N-1}(z); L_N'(z) = N (p1 - p2) / z
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      const double dp = order * (p1 - p2) / z;
      const double step = p1 / dp;
      z -= step;
      if (std::fabs(step) <= 1e-14 * std::fabs(z)) {
        converged = true;
        break;
      }
    }
    if (!converged || !(z > 0.0) || (i > 0 && !(z > rule.roots[i - 1]))) {
      throw std::runtime_error("gauss_laguerre: root " + std::to_string(i + 1) +
                               " of L_" + std::to_string(order) +
                               " did not converge");
    }
    rule.roots[i] = z;
    const double lnext = laguerre_polynomial(order + 1, z);
    const double np1 = order + 1.0;
    rule.weights[i] = z / (np1 * np1 * lnext * lnext);
    rule.scaled_weights[i] =
        std::exp(std::log(z) - 2.0 * std::log(np1 * std::fabs(lnext)) + z);
  }
  return rule;
}

}  // namespace ambsec::specfun
