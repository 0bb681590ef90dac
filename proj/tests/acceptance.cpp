// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Seeds are fixed up front; a failing line is reported, never retried.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ambsec/intercept.hpp"
#include "ambsec/montecarlo.hpp"
#include "ambsec/outage.hpp"
#include "ambsec/specfun.hpp"
#include "oracles.hpp"

using namespace ambsec;

namespace {

constexpr std::uint64_t op_seed = 1;
constexpr std::uint64_t ip_seed = 1;

Scenario at_db(double db) {
  auto s = baseline();
  s.params.gamma = db_to_linear(db);
  return s;
}

/// Collects failed checks; the first few are echoed under the verdict line.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  void note(std::string line) { notes_.push_back(std::move(line)); }
  bool pass() const { return failures_.empty(); }
  std::size_t count() const { return count_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// 1. Analytic OP against MC at 1e6 trials, within 3 Wilson SE.
void outage_equivalence(Checks& c) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double db : {0.0, 10.0, 20.0, 30.0, 40.0}) {
    const auto s = at_db(db);
    const auto a = outage::outage(s);
    const auto m = mc::estimate_op(s, mc::sim_for(1'000'000, op_seed));
    const std::pair<const char*, std::pair<double, const mc::EstimateWithCI*>> rows[] = {
        {"op_f", {a.p_F, &m.p_F}}, {"op_n", {a.p_N, &m.p_N}}, {"op_c", {a.p_C, &m.p_C}}};
    for (const auto& [name, v] : rows) {
      const double z = (v.second->p_hat - v.first) / v.second->standard_error();
      worst = std::max(worst, std::fabs(z));
      c.expect(std::fabs(z) <= 3.0,
               fmt("%s at %.0f dB: analytic %.6f, mc %.6f, z %+.2f", name, db, v.first, v.second->p_hat, z));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs <= 120.0, fmt("runtime %.1f s exceeds 120 s", secs));
  c.note(fmt("worst |z| %.2f over 15 comparisons, %.1f s", worst, secs));
}

// 2. Analytic IP against MC (collapsed placement) at 1e5 field draws.
void intercept_equivalence(Checks& c) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double db : {10.0, 20.0, 30.0}) {
    auto s = at_db(db);
    s.eves.placement_mode = PlacementMode::collapsed;
    const auto a = intercept::intercept(s);
    const auto m = mc::estimate_ip(s, mc::sim_for(100'000, ip_seed));
    const std::pair<const char*, std::pair<double, const mc::EstimateWithCI*>> rows[] = {
        {"ip_f", {a.p_F, &m.p_F}}, {"ip_n", {a.p_N, &m.p_N}}, {"ip_c", {a.p_C, &m.p_C}}};
    for (const auto& [name, v] : rows) {
      const auto& e = *v.second;
      const double tol = std::max(3.0 * e.standard_error(), 0.02 * e.p_hat + 1e-4);
      const double dev = std::fabs(e.p_hat - v.first);
      worst = std::max(worst, dev / tol);
      c.expect(dev <= tol, fmt("%s at %.0f dB: analytic %.6f, mc %.6f, tol %.2e", name, db, v.first,
                               e.p_hat, tol));
    }
    if (db == 30.0) {
      c.expect(m.p_F.p_hat > m.p_N.p_hat && m.p_N.p_hat > m.p_C.p_hat,
               "simulated ordering at 30 dB is not ip_f > ip_n > ip_c");
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs <= 300.0, fmt("runtime %.1f s exceeds 300 s", secs));
  c.note(fmt("worst deviation %.2f of tolerance, %.1f s", worst, secs));
}

// 3. Outage floors.
void outage_floors(Checks& c) {
  const auto s = baseline();
  const double ff = outage::op_floor_f(s);
  const double fnc = outage::op_floor_nc(s);
  c.expect(std::fabs(ff - 0.0146) <= 0.0005, fmt("op_floor_f %.6f", ff));
  c.expect(std::fabs(fnc - 0.0259) <= 0.0010, fmt("op_floor_nc %.6f", fnc));
  // independent evaluation through the asymptotic series of x e^x E1(x)
  const double series_f = 1.0 - oracle::x_exp_e1_series(66.51);
  const double series_nc = 1.0 - oracle::x_exp_e1_series(36.68);
  c.expect(std::fabs(ff - series_f) <= 0.0005, fmt("op_floor_f %.6f vs series %.6f", ff, series_f));
  c.expect(std::fabs(fnc - series_nc) <= 0.0010, fmt("op_floor_nc %.6f vs series %.6f", fnc, series_nc));
  const auto hi = at_db(70.0);
  c.expect(rel(outage::op_f(hi), ff) <= 0.02, fmt("op_f(70 dB) %.6f vs floor %.6f", outage::op_f(hi), ff));
  c.expect(rel(outage::op_c(hi), fnc) <= 0.02, fmt("op_c(70 dB) %.6f vs floor %.6f", outage::op_c(hi), fnc));
  // the near-user and device outages share one limit
  const auto top = at_db(300.0);
  const double gap = std::fabs(outage::op_n(top) - outage::op_c(top));
  c.expect(gap <= 4.0 * std::numeric_limits<double>::epsilon(), fmt("op_n - op_c at 300 dB is %.3e", gap));
  c.note(fmt("floors %.7f and %.7f", ff, fnc));
}

// 4. Zero diversity order.
void diversity(Checks& c) {
  const auto s = baseline();
  const std::pair<const char*, double (*)(const Scenario&)> fns[] = {
      {"op_f", outage::op_f}, {"op_n", outage::op_n}, {"op_c", outage::op_c}};
  double worst = 0.0;
  for (const auto& [name, fn] : fns) {
    const double d = outage::diversity_order(fn, s, 50.0, 60.0);
    worst = std::max(worst, std::fabs(d));
    c.expect(std::fabs(d) < 0.05, fmt("%s slope %.4f", name, d));
  }
  c.note(fmt("largest |slope| %.2e", worst));
}

// 5. Asymptotic forms against the exact ones at 50 dB.
void asymptotics(Checks& c) {
  const auto s = at_db(50.0);
  const struct {
    const char* name;
    double exact, approx, tol;
  } rows[] = {
      {"op_f", outage::op_f(s), outage::op_f_asy(s), 0.05},
      {"op_n", outage::op_n(s), outage::op_n_asy(s), 0.05},
      {"op_c", outage::op_c(s), outage::op_c_asy(s), 0.05},
      {"ip_f", intercept::ip_f(s), intercept::ip_f_asy(s), 0.10},
      {"ip_n", intercept::ip_n(s), intercept::ip_n_asy(s), 0.10},
      {"ip_c", intercept::ip_c(s), intercept::ip_c_asy(s), 0.10},
  };
  double worst = 0.0;
  for (const auto& r : rows) {
    const double e = rel(r.approx, r.exact);
    worst = std::max(worst, e);
    c.expect(e <= r.tol, fmt("%s exact %.7f, asymptotic %.7f", r.name, r.exact, r.approx));
  }
  c.note(fmt("largest relative gap %.2e", worst));
}

// 6. Exact invariances of the intercept probabilities.
void invariances(Checks& c) {
  auto s = baseline();
  const auto ref = intercept::intercept(s);
  for (double eta : {0.0, 0.5, 1.0}) {
    s = baseline();
    s.params.eta = eta;
    const auto ip = intercept::intercept(s);
    c.expect(ip.p_F == ref.p_F && ip.p_N == ref.p_N && ip.p_C == ref.p_C,
             fmt("intercept changes with eta = %.1f", eta));
  }
  for (double a_n : {0.1, 0.2, 0.4}) {
    s = baseline();
    s.params.a_N = a_n;
    s.params.a_F = 1.0 - a_n;
    c.expect(intercept::ip_c(s) == ref.p_C, fmt("ip_c changes with a_N = %.1f", a_n));
  }
}

// 7. Monotone trends over sampled grids.
void trends(Checks& c) {
  constexpr double slack = 1e-12;
  auto monotone = [&](const char* what, const std::vector<double>& xs, auto set, auto eval, int sign) {
    double prev = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto s = baseline();
      set(s, xs[i]);
      const double v = eval(s);
      if (i > 0) {
        const bool ok = sign > 0 ? v >= prev - slack : v <= prev + slack;
        c.expect(ok, fmt("%s breaks at %g: %.9g after %.9g", what, xs[i], v, prev));
      }
      prev = v;
    }
  };
  const auto set_gamma = [](Scenario& s, double db) { s.params.gamma = db_to_linear(db); };
  const auto set_beta = [](Scenario& s, double b) { s.params.beta = b; };
  const auto set_theta = [](Scenario& s, double t) { s.params.theta = t; };
  const auto set_lambda = [](Scenario& s, double l) { s.eves.lambda_e = l; };
  const auto set_rp = [](Scenario& s, double r) { s.geometry.r_p = r; };

  std::vector<double> snr, beta, theta;
  for (double db = 0.0; db <= 60.0; db += 2.5) snr.push_back(db);
  for (double b = 0.05; b <= 0.95 + 1e-9; b += 0.05) beta.push_back(b);
  for (double t = 0.5; t <= 0.975 + 1e-9; t += 0.025) theta.push_back(t);
  const std::vector<double> lambda{1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
  const std::vector<double> radius{2.0, 5.0, 10.0, 20.0, 40.0, 80.0};

  using Fn = double (*)(const Scenario&);
  const std::pair<const char*, Fn> ops[] = {
      {"op_f", outage::op_f}, {"op_n", outage::op_n}, {"op_c", outage::op_c}};
  const std::pair<const char*, Fn> ips[] = {
      {"ip_f", intercept::ip_f}, {"ip_n", intercept::ip_n}, {"ip_c", intercept::ip_c}};

  for (const auto& [name, fn] : ops) {
    monotone(fmt("%s vs gamma", name).c_str(), snr, set_gamma, fn, -1);
    monotone(fmt("%s vs theta", name).c_str(), theta, set_theta, fn, -1);
  }
  for (const auto& [name, fn] : ips) {
    monotone(fmt("%s vs gamma", name).c_str(), snr, set_gamma, fn, +1);
    monotone(fmt("%s vs lambda_e", name).c_str(), lambda, set_lambda, fn, +1);
    monotone(fmt("%s vs r_p", name).c_str(), radius, set_rp, fn, -1);
    monotone(fmt("%s vs theta", name).c_str(), theta, set_theta, fn, +1);
  }
  monotone("op_f vs beta", beta, set_beta, outage::op_f, +1);
  monotone("op_n vs beta", beta, set_beta, outage::op_n, +1);
  monotone("ip_f vs beta", beta, set_beta, intercept::ip_f, -1);
  monotone("ip_n vs beta", beta, set_beta, intercept::ip_n, -1);
  monotone("ip_c vs beta", beta, set_beta, intercept::ip_c, +1);

  // op_c has an interior minimum in beta at 30 dB
  std::size_t best = 0;
  std::vector<double> vals;
  for (double b : beta) {
    auto s = baseline();
    s.params.beta = b;
    vals.push_back(outage::op_c(s));
    if (vals.back() < vals[best]) best = vals.size() - 1;
  }
  c.expect(best > 0 && best + 1 < beta.size() && vals[best] < vals.front() && vals[best] < vals.back(),
           fmt("op_c minimum over beta sits at the edge, beta = %.2f", beta[best]));
  c.note(fmt("op_c minimum %.6f at beta = %.2f", vals[best], beta[best]));
}

// 8. Degenerate branches, closed form and simulation.
void degenerate(Checks& c) {
  const auto base = baseline();
  const auto& p = base.params;
  const auto op_sim = mc::sim_for(20'000, 3);
  const auto ip_sim = mc::sim_for(2'000, 3);

  const double split = p.a_F / p.a_N;
  for (double k : {1.0, 2.0}) {
    auto s = base;
    s.thresholds.g_F_sF = k * split;
    const auto m = mc::estimate_op(s, op_sim);
    c.expect(outage::op_f(s) == 1.0 && outage::op_f_asy(s) == 1.0 && outage::op_floor_f(s) == 1.0 &&
                 m.p_F.p_hat == 1.0,
             fmt("op_f not certain at g_F_sF = %g a_F/a_N", k));

    s = base;
    s.thresholds.g_N_sF = k * split;
    const auto n = mc::estimate_op(s, op_sim);
    c.expect(outage::op_n(s) == 1.0 && outage::op_c(s) == 1.0 && outage::op_n_asy(s) == 1.0 &&
                 outage::op_c_asy(s) == 1.0 && outage::op_floor_nc(s) == 1.0 && n.p_N.p_hat == 1.0 &&
                 n.p_C.p_hat == 1.0,
             fmt("op_n/op_c not certain at g_N_sF = %g a_F/a_N", k));

    s = base;
    s.thresholds.g_N_sC = k * p.theta / (p.eta * (1.0 - p.theta));
    const auto d = mc::estimate_op(s, op_sim);
    c.expect(outage::op_c(s) == 1.0 && outage::op_c_asy(s) == 1.0 && d.p_C.p_hat == 1.0 &&
                 outage::op_n(s) < 1.0,
             fmt("op_c not certain at g_N_sC = %g times its ceiling", k));
  }
  // one boundary at a time; combined, the success probability drops below rounding
  {
    auto s = base;
    s.thresholds.g_F_sF = 0.99 * split;
    c.expect(outage::op_f(s) < 1.0, "op_f certain just inside its boundary");
    s = base;
    s.thresholds.g_N_sF = 0.99 * split;
    c.expect(outage::op_n(s) < 1.0 && outage::op_c(s) < 1.0, "op_n/op_c certain just inside g_N_sF boundary");
    s = base;
    s.thresholds.g_N_sC = 0.99 * p.theta / (p.eta * (1.0 - p.theta));
    c.expect(outage::op_c(s) < 1.0, "op_c certain just inside its ceiling");
  }

  const double ceil_f = p.theta * p.a_F / (p.theta * p.a_N + 1.0 - p.theta);
  const double ceil_n = p.theta * p.a_N / (1.0 - p.theta);
  const double ceil_c = p.theta / (1.0 - p.theta);
  for (double k : {1.0, 2.0}) {
    auto s = base;
    s.thresholds.g_E_sF = k * ceil_f;
    s.thresholds.g_E_sN = k * ceil_n;
    s.thresholds.g_E_sC = k * ceil_c;
    const auto a = intercept::intercept(s);
    const auto m = mc::estimate_ip(s, ip_sim);
    c.expect(a.p_F == 0.0 && intercept::ip_f_asy(s) == 0.0 && m.p_F.successes == 0,
             fmt("ip_f nonzero at %g times the ceiling", k));
    c.expect(a.p_N == 0.0 && intercept::ip_n_asy(s) == 0.0 && m.p_N.successes == 0,
             fmt("ip_n nonzero at %g times the ceiling", k));
    c.expect(a.p_C == 0.0 && intercept::ip_c_asy(s) == 0.0 && m.p_C.successes == 0,
             fmt("ip_c nonzero at %g times the ceiling", k));
  }
  {
    auto s = base;
    s.thresholds.g_E_sF = 0.99 * ceil_f;
    s.thresholds.g_E_sN = 0.99 * ceil_n;
    s.thresholds.g_E_sC = 0.99 * ceil_c;
    const auto a = intercept::intercept(s);
    c.expect(a.p_F > 0.0 && a.p_N > 0.0 && a.p_C > 0.0, "intercept zero just inside the ceilings");
  }
  {
    auto s = base;
    s.eves.lambda_e = 0.0;
    const auto a = intercept::intercept(s);
    const auto m = mc::estimate_ip(s, ip_sim);
    c.expect(a.p_F == 0.0 && a.p_N == 0.0 && a.p_C == 0.0 && intercept::ip_f_asy(s) == 0.0 &&
                 intercept::ip_n_asy(s) == 0.0 && intercept::ip_c_asy(s) == 0.0,
             "closed forms nonzero with no eavesdroppers");
    c.expect(m.p_F.successes == 0 && m.p_N.successes == 0 && m.p_C.successes == 0 && m.mean_eves == 0.0,
             "simulation intercepts with no eavesdroppers");
  }
}

// 9. Special functions and quadrature.
void special_functions(Checks& c) {
  const double e1 = specfun::e1(1.0), e1_ref = oracle::e1_at_one();
  const double k0 = specfun::bessel_k0(1.0), k0_ref = oracle::k0_at_one();
  const double ug = specfun::upper_gamma(0.5, 1.0), ug_ref = oracle::upper_gamma_half_at_one();
  c.expect(std::fabs(e1 - e1_ref) <= 1e-8, fmt("E1(1) %.12f vs %.12f", e1, e1_ref));
  c.expect(std::fabs(k0 - k0_ref) <= 1e-8, fmt("K0(1) %.12f vs %.12f", k0, k0_ref));
  c.expect(std::fabs(ug - ug_ref) <= 1e-8, fmt("Gamma(0.5, 1) %.12f vs %.12f", ug, ug_ref));

  for (int n : {2, 5, 10, 20, 30}) {
    const auto rule = specfun::gauss_laguerre(n);
    double worst = 0.0;
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * std::pow(rule.roots[i], k);
      worst = std::max(worst, rel(sum, std::tgamma(k + 1.0)));
    }
    c.expect(worst <= 1e-10, fmt("Gauss-Laguerre N = %d misses degree <= 2N-1 by %.2e", n, worst));
  }

  const auto s = baseline();
  const auto oc = outage::op_c_checked(s, 1e-6);
  const auto ic = intercept::ip_c_checked(s, 1e-6);
  const double d_oc = std::fabs(oc.value - oc.refined);
  const double d_ic = std::fabs(ic.value - ic.refined);
  c.expect(d_oc < 1e-6, fmt("op_c doubling changes the value by %.2e", d_oc));
  c.expect(d_ic < 1e-6, fmt("ip_c doubling changes the value by %.2e", d_ic));
  c.note(fmt("doubling shifts op_c %.1e, ip_c %.1e", d_oc, d_ic));
}

// 10. Single-Eve backscatter interception against nested integration.
void single_eve(Checks& c) {
  const auto s = baseline();
  double worst = 0.0;
  for (double r : {15.0, 30.0, 100.0}) {
    const double q = intercept::q_v(s, 0.1, r);
    const double ref = oracle::single_eve_sc(s, 0.1, r);
    worst = std::max(worst, std::fabs(q - ref));
    c.expect(std::fabs(q - ref) <= 1e-4, fmt("q_v(r = %g) %.9f vs %.9f", r, q, ref));
    c.note(fmt("r = %5.1f: q_v %.9f, nested %.9f", r, q, ref));
  }
  c.note(fmt("largest gap %.2e", worst));
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Checks&)>> criteria[] = {
      {"analytic-vs-MC outage equivalence", outage_equivalence},
      {"analytic-vs-MC intercept equivalence", intercept_equivalence},
      {"outage floors", outage_floors},
      {"zero diversity order", diversity},
      {"asymptotic consistency", asymptotics},
      {"exact intercept invariances", invariances},
      {"trend suite", trends},
      {"degenerate branches", degenerate},
      {"special-function oracles and quadrature stability", special_functions},
      {"single-Eve interception vs nested integration", single_eve},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s (%zu checks, %.1f s)\n", c.pass() ? "PASS" : "FAIL", index, name, c.count(), secs);
    for (const auto& n : c.notes()) std::printf("        %s\n", n.c_str());
    const std::size_t shown = std::min<std::size_t>(c.failures().size(), 8);
    for (std::size_t i = 0; i < shown; ++i) std::printf("        failed: %s\n", c.failures()[i].c_str());
    if (c.failures().size() > shown) std::printf("        ... %zu more\n", c.failures().size() - shown);
    std::fflush(stdout);
    if (!c.pass()) ++failed;
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
