// SPDX-License-Identifier: MIT
//
// Experiment configuration: a single strict JSON document describing one
// integrator run (or the base point of a sweep).  Unknown fields are
// rejected so that typos in sweep scripts fail loudly instead of silently
// running defaults.

#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjint/error.hpp"
#include "hjint/splitting.hpp"
#include "hjint/stepper.hpp"

namespace hjint {

enum class Method { kHj, kSplit };

struct OutputSpec {
  std::string trajectory_csv;  // empty: not requested
  std::string summary_csv;     // empty: not requested
};

struct ExperimentConfig {
  std::string system;
  std::string chart;  // empty: use the system's default chart
  Method method = Method::kHj;
  IntegratorConfig integrator;  // order_k, step_h, newton_*, p_degree
  double t_final = 0.0;
  std::vector<double> initial_state;  // empty: use the system's default
  std::map<std::string, double> params;
  SplitVariant split_variant = SplitVariant::kLieTrotter;
  SplitOrdering split_ordering = SplitOrdering::kAxis2First;
  OutputSpec outputs;
};

namespace detail {

inline std::string config_string(const nlohmann::json& v,
                                 const std::string& key) {
  if (!v.is_string())
    throw ConfigError("config field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline double config_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number())
    throw ConfigError("config field '" + key + "' must be a number");
  return v.get<double>();
}

inline int config_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw ConfigError("config field '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object())
    throw ConfigError("config root must be a JSON object");
  ExperimentConfig cfg;
  bool saw_system = false, saw_step_h = false, saw_t_final = false;
  bool saw_splitting = false;

  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    if (key == "system") {
      cfg.system = detail::config_string(v, key);
      saw_system = true;
    } else if (key == "chart") {
      cfg.chart = detail::config_string(v, key);
    } else if (key == "method") {
      const std::string m = detail::config_string(v, key);
      if (m == "hj")
        cfg.method = Method::kHj;
      else if (m == "split")
        cfg.method = Method::kSplit;
      else
        throw ConfigError("config field 'method' must be 'hj' or 'split'");
    } else if (key == "order_k") {
      cfg.integrator.order_k = detail::config_int(v, key);
    } else if (key == "step_h") {
      cfg.integrator.step_h = detail::config_number(v, key);
      saw_step_h = true;
    } else if (key == "t_final") {
      cfg.t_final = detail::config_number(v, key);
      saw_t_final = true;
    } else if (key == "newton_tol") {
      cfg.integrator.newton_tol = detail::config_number(v, key);
    } else if (key == "newton_max_iter") {
      cfg.integrator.newton_max_iter = detail::config_int(v, key);
    } else if (key == "p_degree") {
      cfg.integrator.p_degree = detail::config_int(v, key);
    } else if (key == "initial_state") {
      if (!v.is_array())
        throw ConfigError("config field 'initial_state' must be an array");
      for (const auto& x : v)
        cfg.initial_state.push_back(
            detail::config_number(x, "initial_state entry"));
    } else if (key == "params") {
      if (!v.is_object())
        throw ConfigError("config field 'params' must be an object");
      for (auto pit = v.begin(); pit != v.end(); ++pit)
        cfg.params[pit.key()] =
            detail::config_number(pit.value(), "params." + pit.key());
    } else if (key == "splitting") {
      if (!v.is_object())
        throw ConfigError("config field 'splitting' must be an object");
      saw_splitting = true;
      for (auto sit = v.begin(); sit != v.end(); ++sit) {
        if (sit.key() == "variant")
          cfg.split_variant = split_variant_from_name(
              detail::config_string(sit.value(), "splitting.variant"));
        else if (sit.key() == "ordering")
          cfg.split_ordering = split_ordering_from_name(
              detail::config_string(sit.value(), "splitting.ordering"));
        else
          throw ConfigError("unknown config field 'splitting." + sit.key() +
                            "'");
      }
    } else if (key == "outputs") {
      if (!v.is_object())
        throw ConfigError("config field 'outputs' must be an object");
      for (auto oit = v.begin(); oit != v.end(); ++oit) {
        if (oit.key() == "trajectory_csv")
          cfg.outputs.trajectory_csv =
              detail::config_string(oit.value(), "outputs.trajectory_csv");
        else if (oit.key() == "summary_csv")
          cfg.outputs.summary_csv =
              detail::config_string(oit.value(), "outputs.summary_csv");
        else
          throw ConfigError("unknown config field 'outputs." + oit.key() +
                            "'");
      }
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }

  if (!saw_system) throw ConfigError("config is missing required 'system'");
  if (!saw_step_h) throw ConfigError("config is missing required 'step_h'");
  if (!saw_t_final)
    throw ConfigError("config is missing required 't_final'");
  if (saw_splitting && cfg.method != Method::kSplit)
    throw ConfigError("config field 'splitting' requires method 'split'");
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    return parse_config(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
}

}  // namespace hjint
