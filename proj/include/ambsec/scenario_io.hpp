#pragma once
// Flat JSON configuration documents. Keys are the field names of the model
// and simulation types; gamma may be given in dB as gamma_db. Missing keys
// keep their baseline values and unknown keys are rejected.
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ambsec/model.hpp"
#include "ambsec/montecarlo.hpp"

namespace ambsec::io {

/// Malformed document: bad JSON, unknown key or wrongly typed value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  Scenario scenario;
  mc::SimConfig sim;
};

namespace detail {

using Json = nlohmann::json;

inline double as_number(const Json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("key '" + key + "': expected a number");
  return v.get<double>();
}

inline std::uint64_t as_count(const Json& v, const std::string& key) {
  if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) {
    throw ConfigError("key '" + key + "': expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline std::string as_string(const Json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("key '" + key + "': expected a string");
  return v.get<std::string>();
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

using Setter = std::function<void(Config&, const Json&, const std::string&)>;

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const char* key, auto member) {
      t[key] = [member](Config& c, const Json& v, const std::string& k) {
        member(c) = as_number(v, k);
      };
    };
    num("gamma", [](Config& c) -> double& { return c.scenario.params.gamma; });
    num("a_N", [](Config& c) -> double& { return c.scenario.params.a_N; });
    num("a_F", [](Config& c) -> double& { return c.scenario.params.a_F; });
    num("theta", [](Config& c) -> double& { return c.scenario.params.theta; });
    num("eta", [](Config& c) -> double& { return c.scenario.params.eta; });
    num("beta", [](Config& c) -> double& { return c.scenario.params.beta; });
    num("d_SN", [](Config& c) -> double& { return c.scenario.geometry.d_SN; });
    num("d_SF", [](Config& c) -> double& { return c.scenario.geometry.d_SF; });
    num("d_SB", [](Config& c) -> double& { return c.scenario.geometry.d_SB; });
    num("d_BN", [](Config& c) -> double& { return c.scenario.geometry.d_BN; });
    num("d_BF", [](Config& c) -> double& { return c.scenario.geometry.d_BF; });
    num("alpha", [](Config& c) -> double& { return c.scenario.geometry.alpha; });
    num("r_p", [](Config& c) -> double& { return c.scenario.geometry.r_p; });
    num("R_out", [](Config& c) -> double& { return c.scenario.geometry.R_out; });
    num("g_F_sF", [](Config& c) -> double& { return c.scenario.thresholds.g_F_sF; });
    num("g_N_sF", [](Config& c) -> double& { return c.scenario.thresholds.g_N_sF; });
    num("g_N_sN", [](Config& c) -> double& { return c.scenario.thresholds.g_N_sN; });
    num("g_N_sC", [](Config& c) -> double& { return c.scenario.thresholds.g_N_sC; });
    num("g_E_sF", [](Config& c) -> double& { return c.scenario.thresholds.g_E_sF; });
    num("g_E_sN", [](Config& c) -> double& { return c.scenario.thresholds.g_E_sN; });
    num("g_E_sC", [](Config& c) -> double& { return c.scenario.thresholds.g_E_sC; });
    num("lambda_e", [](Config& c) -> double& { return c.scenario.eves.lambda_e; });

    t["gamma_db"] = [](Config& c, const Json& v, const std::string& k) {
      c.scenario.params.gamma = db_to_linear(as_number(v, k));
    };
    t["placement_mode"] = [](Config& c, const Json& v, const std::string& k) {
      try {
        const auto m = placement_from_string(as_string(v, k));
        c.scenario.eves.placement_mode = m;
        c.sim.placement_mode = m;
      } catch (const std::invalid_argument& e) {
        throw ConfigError("key '" + k + "': " + e.what());
      }
    };
    t["chebyshev_order"] = [](Config& c, const Json& v, const std::string& k) {
      c.scenario.quadrature.chebyshev_order = static_cast<int>(as_count(v, k));
    };
    t["laguerre_order"] = [](Config& c, const Json& v, const std::string& k) {
      c.scenario.quadrature.laguerre_order = static_cast<int>(as_count(v, k));
    };
    t["trials"] = [](Config& c, const Json& v, const std::string& k) {
      c.sim.trials = as_count(v, k);
    };
    t["seed"] = [](Config& c, const Json& v, const std::string& k) {
      c.sim.seed = as_count(v, k);
    };
    t["batch_size"] = [](Config& c, const Json& v, const std::string& k) {
      c.sim.batch_size = as_count(v, k);
    };
    t["threads"] = [](Config& c, const Json& v, const std::string& k) {
      c.sim.threads = static_cast<unsigned>(as_count(v, k));
    };
    t["backscatter_gain"] = [](Config& c, const Json& v, const std::string& k) {
      try {
        c.sim.backscatter_gain = mc::backscatter_from_string(as_string(v, k));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("key '" + k + "': " + e.what());
      }
    };
    return t;
  }();
  return table;
}

}  // namespace detail

/// Parses a configuration document. Throws ConfigError on malformed input
/// and ValidationError when the resulting scenario violates the model.
/// If only one of a_N, a_F is given the other becomes its complement.
inline Config parse_config(const std::string& text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(text.find_first_not_of(" \t\r\n") == std::string::npos
                                  ? std::string("{}")
                                  : text);
  } catch (const detail::Json::parse_error& e) {
    throw ConfigError("parse error at line " + std::to_string(detail::line_of(text, e.byte)) +
                      ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

  Config c;
  c.sim.batch_size = 0;  // derived from trials unless set
  const auto& table = detail::setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(c, value, key);
  }
  if (doc.contains("gamma") && doc.contains("gamma_db")) {
    throw ConfigError("keys 'gamma' and 'gamma_db' are mutually exclusive");
  }
  const bool has_n = doc.contains("a_N");
  const bool has_f = doc.contains("a_F");
  if (has_n && !has_f) c.scenario.params.a_F = 1.0 - c.scenario.params.a_N;
  if (has_f && !has_n) c.scenario.params.a_N = 1.0 - c.scenario.params.a_F;
  if (c.sim.batch_size == 0) c.sim.batch_size = mc::sim_for(c.sim.trials).batch_size;
  if (c.sim.trials < 1) throw ConfigError("key 'trials': must be >= 1");
  if (c.sim.batch_size > c.sim.trials) {
    throw ConfigError("key 'batch_size': must not exceed trials");
  }
  validate(c.scenario);
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Config load_config(const std::string& path) { return parse_config(read_file(path)); }

/// The validated scenario described by the file at `path`.
inline Scenario load_scenario(const std::string& path) { return load_config(path).scenario; }

}  // namespace ambsec::io
