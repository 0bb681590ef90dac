#pragma once
// Domain types for the AmBC-NOMA downlink with artificial noise and an
// HPPP eavesdropper field, plus parameter validation.
//
// Noise power is normalized to one, so the transmit power equals gamma.
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ambsec/specfun.hpp"

namespace ambsec {

struct SystemParams {
  double gamma = 1000.0;  ///< transmit SNR P / sigma^2, linear
  double a_N = 0.2;       ///< near-user NOMA power coefficient
  double a_F = 0.8;       ///< far-user NOMA power coefficient
  double theta = 0.9;     ///< power fraction for the desired signal
  double eta = 0.5;       ///< residual backscattered-AN fraction
  double beta = 0.5;      ///< BD reflection efficiency
};

struct Geometry {
  double d_SN = 1.0;
  double d_SF = 2.0;
  double d_SB = 2.0;
  double d_BN = 1.1;
  double d_BF = 1.5;
  double alpha = 2.0;    ///< path-loss exponent
  double r_p = 10.0;     ///< Eve-exclusion radius
  double R_out = 1000.0; ///< outer radius of the simulated Eve annulus
};

struct Thresholds {
  double g_F_sF = 0.1;
  double g_N_sF = 0.1;
  double g_N_sN = 0.1;
  double g_N_sC = 0.05;
  double g_E_sF = 0.1;
  double g_E_sN = 0.1;
  double g_E_sC = 0.1;
};

/// collapsed: d_BV := d_SV. exact: the BD sits at distance d_SB from the BS.
enum class PlacementMode { collapsed, exact };

struct EveField {
  double lambda_e = 1e-4;  ///< Eves per square meter
  PlacementMode placement_mode = PlacementMode::collapsed;
};

struct Scenario {
  SystemParams params;
  Geometry geometry;
  Thresholds thresholds;
  EveField eves;
  specfun::QuadratureSpec quadrature;
};

/// The reference configuration at a transmit SNR of 30 dB.
inline Scenario baseline() { return Scenario{}; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline std::string_view to_string(PlacementMode m) {
  return m == PlacementMode::collapsed ? "collapsed" : "exact";
}

inline PlacementMode placement_from_string(std::string_view s) {
  if (s == "collapsed") return PlacementMode::collapsed;
  if (s == "exact") return PlacementMode::exact;
  throw std::invalid_argument("unknown placement mode '" + std::string(s) + "'");
}

struct Violation {
  std::string field;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(format(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string format(const std::vector<Violation>& v) {
    std::string out = "invalid scenario:";
    for (const auto& e : v) out += " [" + e.field + ": " + e.message + "]";
    return out;
  }
  std::vector<Violation> violations_;
};

/// Every violated invariant; empty when the scenario is valid.
inline std::vector<Violation> violations(const Scenario& s) {
  std::vector<Violation> out;
  auto fail = [&out](std::string field, std::string msg) {
    out.push_back({std::move(field), std::move(msg)});
  };
  const auto& p = s.params;
  if (!(p.gamma > 0.0)) fail("gamma", "gamma > 0 required");
  if (!(p.a_N > 0.0)) fail("a_N", "a_N > 0 required");
  if (!(p.a_F > p.a_N)) fail("a_F", "a_F > a_N required");
  if (!(std::fabs(p.a_N + p.a_F - 1.0) <= 1e-9)) fail("a_N", "a_N + a_F = 1 required");
  if (!(p.theta >= 0.5 && p.theta < 1.0)) fail("theta", "0.5 <= theta < 1 required");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) fail("eta", "0 <= eta <= 1 required");
  if (!(p.beta > 0.0 && p.beta <= 1.0)) fail("beta", "0 < beta <= 1 required");

  const auto& g = s.geometry;
  const std::pair<const char*, double> dists[] = {
      {"d_SN", g.d_SN}, {"d_SF", g.d_SF}, {"d_SB", g.d_SB},
      {"d_BN", g.d_BN}, {"d_BF", g.d_BF}};
  for (const auto& [name, d] : dists) {
    if (!(d > 0.0)) fail(name, "distance > 0 required");
  }
  if (!(g.alpha >= 2.0)) fail("alpha", "alpha >= 2 required");
  if (!(g.r_p > 0.0)) fail("r_p", "r_p > 0 required");
  if (!(g.R_out > g.r_p)) fail("R_out", "R_out > r_p required");

  const auto& t = s.thresholds;
  const std::pair<const char*, double> ths[] = {
      {"g_F_sF", t.g_F_sF}, {"g_N_sF", t.g_N_sF}, {"g_N_sN", t.g_N_sN},
      {"g_N_sC", t.g_N_sC}, {"g_E_sF", t.g_E_sF}, {"g_E_sN", t.g_E_sN},
      {"g_E_sC", t.g_E_sC}};
  for (const auto& [name, v] : ths) {
    if (!(v > 0.0)) fail(name, "threshold > 0 required");
  }

  if (!(s.eves.lambda_e >= 0.0)) fail("lambda_e", "lambda_e >= 0 required");
  if (s.quadrature.chebyshev_order < 2) fail("chebyshev_order", "n >= 2 required");
  if (s.quadrature.laguerre_order < 2) fail("laguerre_order", "N >= 2 required");
  return out;
}

/// Model assumptions whose breach is tolerated but worth reporting.
inline std::vector<std::string> warnings(const Scenario& s) {
  std::vector<std::string> out;
  const auto& g = s.geometry;
  if (!(g.d_SB < g.r_p)) out.emplace_back("d_SB is not small relative to r_p");
  if (!(g.d_SN < g.r_p)) out.emplace_back("U_N lies outside the Eve-exclusion disc");
  if (!(g.d_SF < g.r_p)) out.emplace_back("U_F lies outside the Eve-exclusion disc");
  return out;
}

/// Returns the scenario unchanged, or throws ValidationError listing every
/// violated invariant.
inline const Scenario& validate(const Scenario& s) {
  auto v = violations(s);
  if (!v.empty()) throw ValidationError(std::move(v));
  return s;
}

enum class Link { SN, SF, SB, BN, BF };

inline Link link_from_string(std::string_view name) {
  if (name == "SN") return Link::SN;
  if (name == "SF") return Link::SF;
  if (name == "SB") return Link::SB;
  if (name == "BN") return Link::BN;
  if (name == "BF") return Link::BF;
  throw std::invalid_argument("unknown link '" + std::string(name) + "'");
}

/// True when threshold x reaches a SINR ceiling. Ties are judged to within
/// 1e-12 relative so that decimal inputs such as theta = 0.9, x = 9 land on the
/// ceiling even though theta / (1 - theta) rounds slightly above 9.
inline bool reaches_ceiling(double x, double ceiling) {
  return x >= ceiling * (1.0 - 1e-12);
}

inline double path_loss(double distance, double alpha) {
  return std::pow(distance, -alpha);
}

/// Large-scale fading lambda = d^{-alpha} of a legitimate link.
inline double lambda_of(const Geometry& g, Link link) {
  switch (link) {
    case Link::SN: return path_loss(g.d_SN, g.alpha);
    case Link::SF: return path_loss(g.d_SF, g.alpha);
    case Link::SB: return path_loss(g.d_SB, g.alpha);
    case Link::BN: return path_loss(g.d_BN, g.alpha);
    case Link::BF: return path_loss(g.d_BF, g.alpha);
  }
  throw std::invalid_argument("unknown link");
}

}  // namespace ambsec
