// Command-line front end: analytic, simulate, sweep and validate.
//
// Exit codes: 0 success, 1 usage or parse error, 2 invalid scenario,
// 3 validate verdict failure.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ambsec/scenario_io.hpp"
#include "ambsec/sweep.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kVerdict = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string format = "csv";
  std::string out;
  std::optional<std::string> mode;
  std::optional<std::string> backscatter_gain;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON scenario file (baseline when omitted)");
  cmd->add_option("--seed", c.seed, "Monte Carlo seed");
  cmd->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
  cmd->add_option("--mode", c.mode, "Eve placement")->check(CLI::IsMember({"collapsed", "exact"}));
  cmd->add_option("--backscatter-gain", c.backscatter_gain, "BS->BD gain seen by Eves")
      ->check(CLI::IsMember({"per_eve", "shared"}));
  cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)");
}

ambsec::io::Config resolve(const Common& c) {
  ambsec::io::Config cfg = c.config.empty() ? ambsec::io::parse_config("{}")
                                            : ambsec::io::load_config(c.config);
  if (c.seed) cfg.sim.seed = *c.seed;
  if (c.trials) {
    cfg.sim.trials = *c.trials;
    cfg.sim.batch_size = std::min(cfg.sim.batch_size, cfg.sim.trials);
    if (cfg.sim.batch_size == 0) cfg.sim.batch_size = 1;
  }
  if (c.mode) cfg.sim.placement_mode = ambsec::placement_from_string(*c.mode);
  if (c.backscatter_gain) cfg.sim.backscatter_gain = ambsec::mc::backscatter_from_string(*c.backscatter_gain);
  if (c.threads) cfg.sim.threads = *c.threads;
  return cfg;
}

/// "a,b,c" or "start:step:stop" (inclusive of stop up to rounding).
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start = 0, step = 0, stop = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || !(step > 0.0) ||
        stop < start || !(in >> std::ws).eof()) {
      throw CLI::ValidationError("--values", "expected start:step:stop with step > 0");
    }
    const auto n = static_cast<long>((stop - start) / step + 1e-9);
    for (long i = 0; i <= n; ++i) out.push_back(start + i * step);
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw CLI::ValidationError("--values", "not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--values", "no values given");
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write(const std::vector<ambsec::sweep::ResultRow>& rows, const Common& c) {
  const auto f = ambsec::sweep::format_from_string(c.format);
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::cerr << "scenario " << r.scenario_id << " " << r.metric << ": " << r.error << "\n";
    }
  }
  if (c.out.empty()) {
    ambsec::sweep::emit(rows, f, std::cout);
  } else {
    ambsec::sweep::emit(rows, f, c.out);
  }
}

int run_validate(const Common& c) {
  const auto cfg = resolve(c);
  const auto report = ambsec::sweep::validate_run(cfg.scenario, cfg.sim);
  std::ostringstream text;
  if (c.format == "json") {
    auto arr = nlohmann::json::array();
    for (const auto& m : report.metrics) {
      arr.push_back({{"metric", m.metric},
                     {"analytic", m.analytic},
                     {"mc", m.estimate.p_hat},
                     {"ci_lo", m.estimate.ci_lo},
                     {"ci_hi", m.estimate.ci_hi},
                     {"tolerance", m.tolerance},
                     {"normalized_deviation", m.normalized_deviation},
                     {"pass", m.pass}});
    }
    nlohmann::json doc = {{"metrics", arr},
                          {"worst_metric", report.worst_metric},
                          {"worst_normalized_deviation", report.worst_normalized_deviation},
                          {"pass", report.pass}};
    text << doc.dump(2) << "\n";
  } else {
    text << "metric,analytic,mc,ci_lo,ci_hi,tolerance,normalized_deviation,verdict\n";
    for (const auto& m : report.metrics) {
      using ambsec::sweep::format_number;
      text << m.metric << "," << format_number(m.analytic) << "," << format_number(m.estimate.p_hat)
           << "," << format_number(m.estimate.ci_lo) << "," << format_number(m.estimate.ci_hi)
           << "," << format_number(m.tolerance) << "," << format_number(m.normalized_deviation)
           << "," << (m.pass ? "PASS" : "FAIL") << "\n";
    }
  }
  if (c.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream file(c.out, std::ios::binary);
    file << text.str();
    if (!file) throw std::runtime_error("cannot write '" + c.out + "'");
  }
  std::cerr << "worst: " << report.worst_metric << " at "
            << ambsec::sweep::format_number(report.worst_normalized_deviation)
            << " of tolerance; " << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? 0 : kVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage and intercept probabilities of an AmBC-NOMA downlink with artificial noise"};
  app.require_subcommand(1);

  Common analytic_opts, simulate_opts, sweep_opts, validate_opts;
  auto* analytic = app.add_subcommand("analytic", "All closed-form metrics at one scenario");
  add_common(analytic, analytic_opts);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates at one scenario");
  add_common(simulate, simulate_opts);
  auto* sweep = app.add_subcommand("sweep", "Metrics along one or two parameter axes");
  add_common(sweep, sweep_opts);
  auto* validate = app.add_subcommand("validate", "Compare closed forms against Monte Carlo");
  add_common(validate, validate_opts);

  std::string axis = "gamma_db", values, axis2, values2, metrics = "all";
  const auto& axes = ambsec::sweep::axis_names();
  sweep->add_option("--axis", axis, "Swept parameter")->check(CLI::IsMember(axes));
  sweep->add_option("--values", values, "a,b,c or start:step:stop (default 0:5:40 for gamma_db)");
  sweep->add_option("--axis2", axis2, "Secondary parameter")->check(CLI::IsMember(axes));
  sweep->add_option("--values2", values2, "Values of the secondary parameter");
  sweep->add_option("--metrics", metrics, "Comma list of op_f,op_n,op_c,ip_f,ip_n,ip_c,asymptotics,floors,mc,all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*analytic) {
      const auto cfg = resolve(analytic_opts);
      write(ambsec::sweep::run_point(cfg.scenario, {"all", "floors"}), analytic_opts);
    } else if (*simulate) {
      const auto cfg = resolve(simulate_opts);
      write(ambsec::sweep::run_point(cfg.scenario, {"mc"}, cfg.sim, false), simulate_opts);
    } else if (*sweep) {
      const auto cfg = resolve(sweep_opts);
      ambsec::sweep::SweepSpec spec;
      spec.axis = axis;
      if (values.empty()) {
        if (axis != "gamma_db") throw CLI::ValidationError("--values", "required for axis " + axis);
        spec.values = ambsec::sweep::default_gamma_grid();
      } else {
        spec.values = parse_values(values);
      }
      if (!axis2.empty()) {
        if (values2.empty()) throw CLI::ValidationError("--values2", "required with --axis2");
        spec.secondary_axis = axis2;
        spec.secondary_values = parse_values(values2);
      }
      spec.metrics = split(metrics);
      write(ambsec::sweep::run_sweep(cfg.scenario, spec, cfg.sim), sweep_opts);
    } else if (*validate) {
      return run_validate(validate_opts);
    }
  } catch (const ambsec::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ambsec::io::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return 0;
}
