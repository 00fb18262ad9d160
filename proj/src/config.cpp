#include "slsim/config.hpp"

#include <fstream>

namespace slsim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key " + path + "." + key);
    }
  }
}

const json& require(const json& obj, const std::string& parent,
                    const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing required field " +
                      (parent.empty() ? std::string(key)
                                      : parent + "." + key));
  }
  return *it;
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) {
    throw ConfigError(path + " must be a number");
  }
  return node.get<double>();
}

std::uint64_t as_uint(const json& node, const std::string& path) {
  if (node.is_number_unsigned()) {
    return node.get<std::uint64_t>();
  }
  if (node.is_number_integer()) {
    const auto value = node.get<std::int64_t>();
    if (value >= 0) {
      return static_cast<std::uint64_t>(value);
    }
  }
  throw ConfigError(path + " must be a non-negative integer");
}

const json& as_object(const json& node, const std::string& path) {
  if (!node.is_object()) {
    throw ConfigError(path + " must be an object");
  }
  return node;
}

}  // namespace

ProcessSpec process_from_json(const json& node, const std::string& path) {
  as_object(node, path);
  const std::string kind =
      require(node, path, "kind").is_string()
          ? node.at("kind").get<std::string>()
          : throw ConfigError(path + ".kind must be a string");
  try {
    if (kind == "exponential") {
      check_keys(node, path, {"kind", "rate"});
      return ProcessSpec::exponential(
          as_number(require(node, path, "rate"), path + ".rate"));
    }
    if (kind == "deterministic") {
      check_keys(node, path, {"kind", "value"});
      return ProcessSpec::deterministic(
          as_number(require(node, path, "value"), path + ".value"));
    }
    if (kind == "gaussian") {
      check_keys(node, path, {"kind", "mean", "std"});
      return ProcessSpec::gaussian(
          as_number(require(node, path, "mean"), path + ".mean"),
          as_number(require(node, path, "std"), path + ".std"));
    }
    if (kind == "empirical") {
      check_keys(node, path, {"kind", "samples"});
      const json& samples = require(node, path, "samples");
      if (!samples.is_array()) {
        throw ConfigError(path + ".samples must be an array");
      }
      std::vector<double> values;
      values.reserve(samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i) {
        values.push_back(as_number(samples[i], path + ".samples[" +
                                                   std::to_string(i) + "]"));
      }
      return ProcessSpec::empirical(std::move(values));
    }
  } catch (const ConfigError& e) {
    // Prefix value-range errors from the factories with the field path.
    const std::string what = e.what();
    if (what.find(path) == std::string::npos) {
      throw ConfigError(path + ": " + what);
    }
    throw;
  }
  throw ConfigError(path + ".kind must be one of exponential, deterministic, "
                    "gaussian, empirical; got '" +
                    kind + "'");
}

json process_to_json(const ProcessSpec& spec) {
  json node;
  node["kind"] = spec.kind();
  if (const auto* e = spec.as_exponential()) {
    node["rate"] = e->rate;
  } else if (const auto* d = spec.as_deterministic()) {
    node["value"] = d->value;
  } else if (const auto* g = spec.as_gaussian()) {
    node["mean"] = g->mean;
    node["std"] = g->std;
  } else if (const auto* emp = spec.as_empirical()) {
    node["samples"] = emp->samples;
  }
  return node;
}

namespace {

InitialState initial_state_from_json(const json& node) {
  const std::string path = "initial_state";
  as_object(node, path);
  check_keys(node, path, {"instances"});
  const json& list = require(node, path, "instances");
  if (!list.is_array()) {
    throw ConfigError(path + ".instances must be an array");
  }
  InitialState init;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string entry_path =
        path + ".instances[" + std::to_string(i) + "]";
    const json& entry = as_object(list[i], entry_path);
    check_keys(entry, entry_path,
               {"state", "creation_time_offset", "time_in_state",
                "remaining_busy"});
    InstanceSnapshot snap;
    const json& state = require(entry, entry_path, "state");
    if (!state.is_string()) {
      throw ConfigError(entry_path + ".state must be a string");
    }
    const std::string state_name = state.get<std::string>();
    if (state_name == "idle") {
      snap.state = InstanceSnapshot::State::Idle;
    } else if (state_name == "busy") {
      snap.state = InstanceSnapshot::State::Busy;
    } else {
      throw ConfigError(entry_path + ".state must be 'idle' or 'busy', got '" +
                        state_name + "'");
    }
    if (entry.contains("creation_time_offset")) {
      snap.creation_time_offset = as_number(
          entry.at("creation_time_offset"), entry_path + ".creation_time_offset");
    }
    snap.time_in_state = as_number(require(entry, entry_path, "time_in_state"),
                                   entry_path + ".time_in_state");
    if (!entry.contains("creation_time_offset")) {
      // Default: the instance was created when it entered its state.
      snap.creation_time_offset = -snap.time_in_state;
    }
    if (entry.contains("remaining_busy")) {
      snap.remaining_busy = as_number(entry.at("remaining_busy"),
                                      entry_path + ".remaining_busy");
    }
    init.instances.push_back(snap);
  }
  return init;
}

CostSpec cost_from_json(const json& node) {
  const std::string path = "cost";
  as_object(node, path);
  check_keys(node, path,
             {"price_per_request", "price_per_memory_second", "memory",
              "billed_cold_fraction", "provider_unit_cost"});
  CostSpec cost;
  if (node.contains("price_per_request")) {
    cost.price_per_request =
        as_number(node.at("price_per_request"), path + ".price_per_request");
  }
  if (node.contains("price_per_memory_second")) {
    cost.price_per_memory_second = as_number(
        node.at("price_per_memory_second"), path + ".price_per_memory_second");
  }
  if (node.contains("memory")) {
    cost.memory = as_number(node.at("memory"), path + ".memory");
  }
  if (node.contains("billed_cold_fraction")) {
    cost.billed_cold_fraction = as_number(node.at("billed_cold_fraction"),
                                          path + ".billed_cold_fraction");
  }
  if (node.contains("provider_unit_cost")) {
    cost.provider_unit_cost =
        as_number(node.at("provider_unit_cost"), path + ".provider_unit_cost");
  }
  validate(cost);
  return cost;
}

SweepFileSpec sweep_from_json(const json& node) {
  const std::string path = "sweep";
  as_object(node, path);
  check_keys(node, path, {"axes", "replications", "max_runs"});
  SweepFileSpec spec;
  const json& axes = require(node, path, "axes");
  if (!axes.is_array() || axes.empty()) {
    throw ConfigError(path + ".axes must be a non-empty array");
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string axis_path = path + ".axes[" + std::to_string(i) + "]";
    const json& axis = as_object(axes[i], axis_path);
    check_keys(axis, axis_path, {"path", "values"});
    SweepAxis out;
    const json& p = require(axis, axis_path, "path");
    if (!p.is_string()) {
      throw ConfigError(axis_path + ".path must be a string");
    }
    out.path = p.get<std::string>();
    const json& values = require(axis, axis_path, "values");
    if (!values.is_array() || values.empty()) {
      throw ConfigError(axis_path + ".values must be a non-empty array");
    }
    for (std::size_t v = 0; v < values.size(); ++v) {
      out.values.push_back(as_number(
          values[v], axis_path + ".values[" + std::to_string(v) + "]"));
    }
    spec.axes.push_back(std::move(out));
  }
  if (node.contains("replications")) {
    spec.replications = as_uint(node.at("replications"), path + ".replications");
    if (spec.replications < 1) {
      throw ConfigError(path + ".replications must be >= 1");
    }
  }
  if (node.contains("max_runs")) {
    spec.max_runs = as_uint(node.at("max_runs"), path + ".max_runs");
  }
  return spec;
}

}  // namespace

ConfigFile parse_config(const json& doc) {
  as_object(doc, "config");
  check_keys(doc, "config",
             {"workload", "platform", "simulation", "cost", "initial_state",
              "sweep"});
  // check_keys reports paths relative to the document root.
  const json& workload = as_object(require(doc, "", "workload"), "workload");
  check_keys(workload, "workload", {"arrival", "warm_service", "cold_service"});
  const json& platform = as_object(require(doc, "", "platform"), "platform");
  check_keys(platform, "platform",
             {"expiration_threshold", "max_concurrency", "concurrency_value"});
  const json& simulation =
      as_object(require(doc, "", "simulation"), "simulation");
  check_keys(simulation, "simulation",
             {"horizon", "skip_initial", "seed", "replications", "grid_step"});

  SimConfig sim{
      process_from_json(require(workload, "workload", "arrival"),
                        "workload.arrival"),
      process_from_json(require(workload, "workload", "warm_service"),
                        "workload.warm_service"),
      process_from_json(require(workload, "workload", "cold_service"),
                        "workload.cold_service"),
  };
  sim.expiration_threshold =
      as_number(require(platform, "platform", "expiration_threshold"),
                "platform.expiration_threshold");
  if (platform.contains("max_concurrency") &&
      !platform.at("max_concurrency").is_null()) {
    sim.max_concurrency = as_uint(platform.at("max_concurrency"),
                                  "platform.max_concurrency");
  }
  sim.horizon =
      as_number(require(simulation, "simulation", "horizon"), "simulation.horizon");
  if (simulation.contains("skip_initial")) {
    sim.skip_initial =
        as_number(simulation.at("skip_initial"), "simulation.skip_initial");
  }
  if (simulation.contains("seed")) {
    sim.seed = as_uint(simulation.at("seed"), "simulation.seed");
  }

  ConfigFile config{ParConfig{std::move(sim), 1}};
  if (platform.contains("concurrency_value")) {
    config.sim.concurrency_value =
        as_uint(platform.at("concurrency_value"), "platform.concurrency_value");
  }
  if (simulation.contains("replications")) {
    config.replications =
        as_uint(simulation.at("replications"), "simulation.replications");
    if (config.replications < 1) {
      throw ConfigError("simulation.replications must be >= 1");
    }
  }
  if (simulation.contains("grid_step")) {
    config.grid_step =
        as_number(simulation.at("grid_step"), "simulation.grid_step");
    if (!(config.grid_step > 0.0)) {
      throw ConfigError("simulation.grid_step must be > 0");
    }
  }
  validate(config.sim);

  if (doc.contains("cost")) {
    config.cost = cost_from_json(doc.at("cost"));
  }
  if (doc.contains("initial_state")) {
    config.initial_state = initial_state_from_json(doc.at("initial_state"));
    validate(*config.initial_state, config.sim.base.expiration_threshold);
  }
  if (doc.contains("sweep")) {
    config.sweep = sweep_from_json(doc.at("sweep"));
  }
  return config;
}

ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " +
                      e.what());
  }
  return parse_config(doc);
}

json report_to_json(const SimReport& report) {
  json histogram = json::object();
  for (const auto& [count, fraction] : report.instance_count_histogram) {
    histogram[std::to_string(count)] = fraction;
  }
  return json{
      {"cold_start_probability", report.cold_start_probability},
      {"rejection_probability", report.rejection_probability},
      {"avg_server_count", report.avg_server_count},
      {"avg_running_count", report.avg_running_count},
      {"avg_idle_count", report.avg_idle_count},
      {"avg_lifespan", report.avg_lifespan},
      {"instance_count_histogram", histogram},
      {"requests_total", report.requests_total},
      {"requests_cold", report.requests_cold},
      {"requests_rejected", report.requests_rejected},
      {"avg_utilization", report.avg_utilization},
      {"avg_wasted_capacity", report.avg_wasted_capacity},
  };
}

}  // namespace slsim
