#pragma once
// Instantaneous SINRs for one fading realization. Inputs are squared
// small-scale gains |g|^2; path loss is applied here.
#include "ambsec/model.hpp"

namespace ambsec::sinr {

struct LegitGains {
  double gSN2 = 0.0;
  double gSF2 = 0.0;
  double gSB2 = 0.0;
  double gBN2 = 0.0;
  double gBF2 = 0.0;
};

struct EveGains {
  double d_SV = 0.0;
  double d_BV = 0.0;
  double gSV2 = 0.0;
  double gBV2 = 0.0;
};

namespace detail {
inline double residual_factor(const SystemParams& p) {
  return p.theta + p.eta * (1.0 - p.theta);
}
}  // namespace detail

/// s_F decoded at U_N, first SIC stage.
inline double un_sf(const SystemParams& p, const Geometry& g, const LegitGains& h) {
  const double sn = lambda_of(g, Link::SN) * h.gSN2;
  const double bs = lambda_of(g, Link::SB) * h.gSB2 * lambda_of(g, Link::BN) * h.gBN2;
  return sn * p.theta * p.gamma * p.a_F /
         (sn * p.theta * p.gamma * p.a_N +
          bs * p.beta * p.beta * detail::residual_factor(p) * p.gamma + 1.0);
}

/// s_N decoded at U_N after removing s_F.
inline double un_sn(const SystemParams& p, const Geometry& g, const LegitGains& h) {
  const double sn = lambda_of(g, Link::SN) * h.gSN2;
  const double bs = lambda_of(g, Link::SB) * h.gSB2 * lambda_of(g, Link::BN) * h.gBN2;
  return sn * p.theta * p.gamma * p.a_N /
         (bs * p.beta * p.beta * detail::residual_factor(p) * p.gamma + 1.0);
}

/// s_C decoded at U_N after removing s_F and s_N.
inline double un_sc(const SystemParams& p, const Geometry& g, const LegitGains& h) {
  const double bs = lambda_of(g, Link::SB) * h.gSB2 * lambda_of(g, Link::BN) * h.gBN2;
  const double b2 = p.beta * p.beta;
  return bs * b2 * p.theta * p.gamma /
         (bs * b2 * p.eta * (1.0 - p.theta) * p.gamma + 1.0);
}

/// s_F at U_F, everything else treated as noise.
inline double uf_sf(const SystemParams& p, const Geometry& g, const LegitGains& h) {
  const double sf = lambda_of(g, Link::SF) * h.gSF2;
  const double bs = lambda_of(g, Link::SB) * h.gSB2 * lambda_of(g, Link::BF) * h.gBF2;
  return sf * p.theta * p.gamma * p.a_F /
         (sf * p.theta * p.gamma * p.a_N +
          bs * p.beta * p.beta * detail::residual_factor(p) * p.gamma + 1.0);
}

namespace detail {
struct EvePowers {
  double direct;      // |h_SV|^2
  double backscatter; // |h_SB|^2 |h_BV|^2
};

inline EvePowers eve_powers(const Geometry& g, double gSB2, const EveGains& e,
                            PlacementMode mode) {
  const double d_bv = mode == PlacementMode::collapsed ? e.d_SV : e.d_BV;
  return {path_loss(e.d_SV, g.alpha) * e.gSV2,
          lambda_of(g, Link::SB) * gSB2 * path_loss(d_bv, g.alpha) * e.gBV2};
}
}  // namespace detail

// Eavesdropper SINRs. Eves cannot cancel AN, and gSB2 is the BS->BD gain of
// the backscatter path seen by this Eve.

inline double eve_sf(const SystemParams& p, const Geometry& g, double gSB2,
                     const EveGains& e, PlacementMode mode = PlacementMode::exact) {
  const auto [sv, bv] = detail::eve_powers(g, gSB2, e, mode);
  return sv * p.theta * p.gamma * p.a_F /
         (sv * p.theta * p.gamma * p.a_N + sv * (1.0 - p.theta) * p.gamma +
          bv * p.beta * p.beta * p.gamma + 1.0);
}

inline double eve_sn(const SystemParams& p, const Geometry& g, double gSB2,
                     const EveGains& e, PlacementMode mode = PlacementMode::exact) {
  const auto [sv, bv] = detail::eve_powers(g, gSB2, e, mode);
  return sv * p.theta * p.gamma * p.a_N /
         (sv * (1.0 - p.theta) * p.gamma + bv * p.beta * p.beta * p.gamma + 1.0);
}

inline double eve_sc(const SystemParams& p, const Geometry& g, double gSB2,
                     const EveGains& e, PlacementMode mode = PlacementMode::exact) {
  const auto [sv, bv] = detail::eve_powers(g, gSB2, e, mode);
  const double b2 = p.beta * p.beta;
  return bv * b2 * p.theta * p.gamma /
         ((1.0 - p.theta) * p.gamma * (sv + bv * b2) + 1.0);
}

}  // namespace ambsec::sinr
