#pragma once
/**
 * @brief Parameter sweeps, tabular output and the analytic-vs-simulation
 * comparison harness.
 *
 * Row order is axis value, then secondary value, then metric in the fixed
 * order op_f, op_n, op_c, ip_f, ip_n, ip_c, op_floor_f, op_floor_nc.
 */
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ambsec/intercept.hpp"
#include "ambsec/model.hpp"
#include "ambsec/montecarlo.hpp"
#include "ambsec/outage.hpp"

namespace ambsec::sweep {

inline const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names = {"gamma_db", "beta", "a_N", "theta",
                                                 "r_p",      "lambda_e", "eta"};
  return names;
}

inline const std::vector<std::string>& probability_metrics() {
  static const std::vector<std::string> names = {"op_f", "op_n", "op_c",
                                                 "ip_f", "ip_n", "ip_c"};
  return names;
}

/// Accepted entries of SweepSpec::metrics.
inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"op_f", "op_n", "op_c", "ip_f",
                                                 "ip_n", "ip_c", "asymptotics",
                                                 "floors", "mc", "all"};
  return names;
}

struct SweepSpec {
  std::string axis = "gamma_db";
  std::vector<double> values;
  std::optional<std::string> secondary_axis;
  std::vector<double> secondary_values;
  /// "all" selects the six probabilities with their asymptotic forms.
  std::vector<std::string> metrics = {"all"};
};

/// Default transmit-SNR grid: 0 to 40 dB in 5 dB steps.
inline std::vector<double> default_gamma_grid() {
  std::vector<double> v;
  for (int db = 0; db <= 40; db += 5) v.push_back(db);
  return v;
}

struct ResultRow {
  std::size_t scenario_id = 0;
  std::string axis;
  double axis_value = 0.0;
  std::string axis2;
  std::optional<double> axis2_value;
  std::string metric;
  std::optional<double> analytic;
  std::optional<double> asymptotic;
  std::optional<double> mc;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::optional<std::uint64_t> trials;
  Scenario scenario;   ///< the scenario after substitution
  std::string error;   ///< non-empty when this point failed
};

/// Sets `axis` to `value`; a_N also sets a_F = 1 - a_N.
inline void apply_axis(Scenario& s, const std::string& axis, double value) {
  if (axis == "gamma_db") s.params.gamma = db_to_linear(value);
  else if (axis == "beta") s.params.beta = value;
  else if (axis == "a_N") { s.params.a_N = value; s.params.a_F = 1.0 - value; }
  else if (axis == "theta") s.params.theta = value;
  else if (axis == "r_p") s.geometry.r_p = value;
  else if (axis == "lambda_e") s.eves.lambda_e = value;
  else if (axis == "eta") s.params.eta = value;
  else throw std::invalid_argument("unknown sweep axis '" + axis + "'");
}

namespace detail {

struct Selection {
  std::vector<std::string> metrics;  // row metrics in emission order
  bool asymptotics = false;
  bool mc = false;
};

inline Selection select(const SweepSpec& spec) {
  std::set<std::string> want;
  Selection sel;
  for (const auto& m : spec.metrics) {
    const auto& known = metric_names();
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw std::invalid_argument("unknown metric '" + m + "'");
    }
    if (m == "all") {
      want.insert(probability_metrics().begin(), probability_metrics().end());
      sel.asymptotics = true;
    } else if (m == "asymptotics") {
      sel.asymptotics = true;
    } else if (m == "mc") {
      sel.mc = true;
    } else if (m == "floors") {
      want.insert("op_floor_f");
      want.insert("op_floor_nc");
    } else {
      want.insert(m);
    }
  }
  if (want.empty()) {
    // modifiers alone apply to every probability
    want.insert(probability_metrics().begin(), probability_metrics().end());
  }
  for (const auto& m : probability_metrics()) {
    if (want.count(m)) sel.metrics.push_back(m);
  }
  for (const char* m : {"op_floor_f", "op_floor_nc"}) {
    if (want.count(m)) sel.metrics.push_back(m);
  }
  return sel;
}

inline double analytic_value(const Scenario& s, const std::string& m) {
  if (m == "op_f") return outage::op_f(s);
  if (m == "op_n") return outage::op_n(s);
  if (m == "op_c") return outage::op_c(s);
  if (m == "ip_f") return intercept::ip_f(s);
  if (m == "ip_n") return intercept::ip_n(s);
  if (m == "ip_c") return intercept::ip_c(s);
  if (m == "op_floor_f") return outage::op_floor_f(s);
  if (m == "op_floor_nc") return outage::op_floor_nc(s);
  throw std::invalid_argument("unknown metric '" + m + "'");
}

inline std::optional<double> asymptotic_value(const Scenario& s, const std::string& m) {
  if (m == "op_f") return outage::op_f_asy(s);
  if (m == "op_n") return outage::op_n_asy(s);
  if (m == "op_c") return outage::op_c_asy(s);
  if (m == "ip_f") return intercept::ip_f_asy(s);
  if (m == "ip_n") return intercept::ip_n_asy(s);
  if (m == "ip_c") return intercept::ip_c_asy(s);
  return std::nullopt;
}

inline void check_values(const std::string& name, const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("sweep axis '" + name + "' has no values");
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("sweep axis '" + name + "' has a non-finite value");
  }
}

}  // namespace detail

/// Rows of one scenario. `proto` carries the id and axis columns.
/// With `analytic` false only simulated columns are filled.
inline std::vector<ResultRow> evaluate_point(const Scenario& s, const ResultRow& proto,
                                             const detail::Selection& sel,
                                             const std::optional<mc::SimConfig>& sim,
                                             bool analytic = true) {
  std::string point_error;
  if (auto bad = violations(s); !bad.empty()) point_error = ValidationError(bad).what();

  auto wants = [&sel](const char* prefix) {
    return std::any_of(sel.metrics.begin(), sel.metrics.end(),
                       [prefix](const auto& m) { return m.rfind(prefix, 0) == 0; });
  };
  std::optional<mc::OutageEstimate> op_mc;
  std::optional<mc::InterceptEstimate> ip_mc;
  if (point_error.empty() && sel.mc) {
    if (!sim) throw std::invalid_argument("metric 'mc' requires a SimConfig");
    try {
      if (wants("op_")) op_mc = mc::estimate_op(s, *sim);
      if (wants("ip_")) ip_mc = mc::estimate_ip(s, *sim);
    } catch (const std::exception& e) {
      point_error = e.what();
    }
  }

  std::vector<ResultRow> rows;
  for (const auto& m : sel.metrics) {
    ResultRow row = proto;
    row.scenario = s;
    row.metric = m;
    row.error = point_error;
    if (row.error.empty() && analytic) {
      try {
        row.analytic = detail::analytic_value(s, m);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      if (row.error.empty() && sel.asymptotics) {
        try {
          row.asymptotic = detail::asymptotic_value(s, m);
        } catch (const std::domain_error&) {
          // high-SNR form undefined at this point; the cell stays empty
        }
      }
    }
    const mc::EstimateWithCI* est = nullptr;
    if (op_mc) {
      if (m == "op_f") est = &op_mc->p_F;
      if (m == "op_n") est = &op_mc->p_N;
      if (m == "op_c") est = &op_mc->p_C;
    }
    if (ip_mc) {
      if (m == "ip_f") est = &ip_mc->p_F;
      if (m == "ip_n") est = &ip_mc->p_N;
      if (m == "ip_c") est = &ip_mc->p_C;
    }
    if (est) {
      row.mc = est->p_hat;
      row.ci_lo = est->ci_lo;
      row.ci_hi = est->ci_hi;
      row.trials = est->trials;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Rows of a single scenario labelled by its transmit SNR in dB.
inline std::vector<ResultRow> run_point(const Scenario& s, const std::vector<std::string>& metrics,
                                        const std::optional<mc::SimConfig>& sim = std::nullopt,
                                        bool analytic = true) {
  SweepSpec spec;
  spec.metrics = metrics;
  ResultRow proto;
  proto.axis = "gamma_db";
  proto.axis_value = linear_to_db(s.params.gamma);
  return evaluate_point(s, proto, detail::select(spec), sim, analytic);
}

/// One row per (axis value, secondary value, metric). A point whose scenario
/// is invalid or whose evaluation throws yields rows carrying the error.
inline std::vector<ResultRow> run_sweep(const Scenario& base, const SweepSpec& spec,
                                        const std::optional<mc::SimConfig>& sim = std::nullopt) {
  detail::check_values(spec.axis, spec.values);
  Scenario probe = base;
  apply_axis(probe, spec.axis, 0.0);  // rejects unknown axes up front
  std::vector<double> second = {0.0};
  if (spec.secondary_axis) {
    detail::check_values(*spec.secondary_axis, spec.secondary_values);
    apply_axis(probe, *spec.secondary_axis, 0.0);
    second = spec.secondary_values;
  }
  const auto sel = detail::select(spec);
  if (sel.mc && !sim) throw std::invalid_argument("metric 'mc' requires a SimConfig");

  std::vector<ResultRow> rows;
  std::size_t id = 0;
  for (double v : spec.values) {
    for (double v2 : second) {
      Scenario s = base;
      apply_axis(s, spec.axis, v);
      if (spec.secondary_axis) apply_axis(s, *spec.secondary_axis, v2);
      ResultRow proto;
      proto.scenario_id = id++;
      proto.axis = spec.axis;
      proto.axis_value = v;
      if (spec.secondary_axis) {
        proto.axis2 = *spec.secondary_axis;
        proto.axis2_value = v2;
      }
      auto point = evaluate_point(s, proto, sel, sim);
      rows.insert(rows.end(), std::make_move_iterator(point.begin()),
                  std::make_move_iterator(point.end()));
    }
  }
  return rows;
}

enum class Format { csv, json };

inline Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + s + "'");
}

inline constexpr const char* csv_header =
    "scenario_id,axis,axis_value,axis2,axis2_value,metric,analytic,asymptotic,mc,ci_lo,ci_hi,trials";

/// 10 significant digits.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace detail {

inline std::string csv_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

inline nlohmann::json json_cell(const std::optional<double>& v) {
  if (!v) return nullptr;
  return std::strtod(format_number(*v).c_str(), nullptr);
}

inline std::string render(const std::vector<ResultRow>& rows, Format f) {
  if (rows.empty()) throw std::invalid_argument("emit: no rows");
  if (f == Format::csv) {
    std::string out = std::string(csv_header) + "\n";
    for (const auto& r : rows) {
      out += std::to_string(r.scenario_id) + "," + r.axis + "," + format_number(r.axis_value) +
             "," + r.axis2 + "," + csv_cell(r.axis2_value) + "," + r.metric + "," +
             csv_cell(r.analytic) + "," + csv_cell(r.asymptotic) + "," + csv_cell(r.mc) + "," +
             csv_cell(r.ci_lo) + "," + csv_cell(r.ci_hi) + "," +
             (r.trials ? std::to_string(*r.trials) : std::string()) + "\n";
    }
    return out;
  }
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({
        {"scenario_id", r.scenario_id},
        {"axis", r.axis},
        {"axis_value", json_cell(r.axis_value)},
        {"axis2", r.axis2},
        {"axis2_value", json_cell(r.axis2_value)},
        {"metric", r.metric},
        {"analytic", json_cell(r.analytic)},
        {"asymptotic", json_cell(r.asymptotic)},
        {"mc", json_cell(r.mc)},
        {"ci_lo", json_cell(r.ci_lo)},
        {"ci_hi", json_cell(r.ci_hi)},
        {"trials", r.trials ? nlohmann::json(*r.trials) : nlohmann::json(nullptr)},
    });
  }
  return arr.dump(2) + "\n";
}

}  // namespace detail

/// Writes rows to `out`; returns the byte count. Throws on empty rows
/// before writing anything.
inline std::size_t emit(const std::vector<ResultRow>& rows, Format f, std::ostream& out) {
  const std::string text = detail::render(rows, f);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("emit: write failed");
  return text.size();
}

inline std::size_t emit(const std::vector<ResultRow>& rows, Format f, const std::string& path) {
  const std::string text = detail::render(rows, f);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("emit: cannot open '" + path + "'");
  file << text;
  file.flush();
  if (!file) throw std::runtime_error("emit: write to '" + path + "' failed");
  return text.size();
}

/// Inverse of the JSON form of emit for the tabular fields.
inline std::vector<ResultRow> parse_rows_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("expected a JSON array of rows");
  auto opt = [](const nlohmann::json& v) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  std::vector<ResultRow> rows;
  for (const auto& o : arr) {
    ResultRow r;
    r.scenario_id = o.at("scenario_id").get<std::size_t>();
    r.axis = o.at("axis").get<std::string>();
    r.axis_value = o.at("axis_value").get<double>();
    r.axis2 = o.at("axis2").get<std::string>();
    r.axis2_value = opt(o.at("axis2_value"));
    r.metric = o.at("metric").get<std::string>();
    r.analytic = opt(o.at("analytic"));
    r.asymptotic = opt(o.at("asymptotic"));
    r.mc = opt(o.at("mc"));
    r.ci_lo = opt(o.at("ci_lo"));
    r.ci_hi = opt(o.at("ci_hi"));
    if (!o.at("trials").is_null()) r.trials = o.at("trials").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

// Analytic-vs-simulation comparison.

struct Tolerance {
  double se_multiple = 3.0;
  double op_abs = 1e-4;
  double ip_rel = 0.02;
  double ip_abs = 1e-4;
};

using MetricFn = std::function<double(const Scenario&)>;

/// The analytic side of a comparison; replaceable for harness tests.
struct AnalyticSet {
  MetricFn op_f = outage::op_f;
  MetricFn op_n = outage::op_n;
  MetricFn op_c = outage::op_c;
  MetricFn ip_f = intercept::ip_f;
  MetricFn ip_n = intercept::ip_n;
  MetricFn ip_c = intercept::ip_c;
};

struct MetricVerdict {
  std::string metric;
  double analytic = 0.0;
  mc::EstimateWithCI estimate;
  double tolerance = 0.0;
  double deviation = 0.0;             ///< |analytic - mc|
  double normalized_deviation = 0.0;  ///< deviation / tolerance
  bool exact_match = false;           ///< both sides identically zero
  bool pass = false;
};

struct ValidationReport {
  std::vector<MetricVerdict> metrics;
  double worst_normalized_deviation = 0.0;
  std::string worst_metric;
  bool pass = true;
};

/// OP tolerance: max(k SE, op_abs). IP tolerance: max(k SE, ip_rel p_hat + ip_abs).
inline ValidationReport validate_run(const Scenario& s, const mc::SimConfig& sim,
                                     const Tolerance& tol = {},
                                     const AnalyticSet& analytic = {}) {
  validate(s);
  const auto op = mc::estimate_op(s, sim);
  const auto ip = mc::estimate_ip(s, sim);
  const std::pair<std::string, std::pair<const MetricFn*, const mc::EstimateWithCI*>> items[] = {
      {"op_f", {&analytic.op_f, &op.p_F}}, {"op_n", {&analytic.op_n, &op.p_N}},
      {"op_c", {&analytic.op_c, &op.p_C}}, {"ip_f", {&analytic.ip_f, &ip.p_F}},
      {"ip_n", {&analytic.ip_n, &ip.p_N}}, {"ip_c", {&analytic.ip_c, &ip.p_C}}};

  ValidationReport report;
  for (const auto& [name, pair] : items) {
    const auto& [fn, est] = pair;
    MetricVerdict v;
    v.metric = name;
    v.analytic = (*fn)(s);
    v.estimate = *est;
    const double k_se = tol.se_multiple * est->standard_error();
    const bool is_ip = name.rfind("ip_", 0) == 0;
    v.tolerance = is_ip ? std::max(k_se, tol.ip_rel * est->p_hat + tol.ip_abs)
                        : std::max(k_se, tol.op_abs);
    v.deviation = std::fabs(v.analytic - est->p_hat);
    v.exact_match = v.analytic == 0.0 && est->successes == 0;
    v.normalized_deviation = v.deviation / v.tolerance;
    v.pass = v.exact_match || v.deviation <= v.tolerance;
    if (v.normalized_deviation >= report.worst_normalized_deviation) {
      report.worst_normalized_deviation = v.normalized_deviation;
      report.worst_metric = name;
    }
    report.pass = report.pass && v.pass;
    report.metrics.push_back(std::move(v));
  }
  return report;
}

}  // namespace ambsec::sweep
