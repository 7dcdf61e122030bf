#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace corridor {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ParseError(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

std::vector<double> number_array(const json& j, const char* name) {
  if (!j.is_array()) throw ParseError(std::string(name) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(std::string(name) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

InstanceConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown(root,
                 {"capacities", "free_flow_times", "betas", "demands", "schedule", "oracle",
                  "output_dir"},
                 "config");
  for (const char* key : {"capacities", "free_flow_times", "betas", "demands", "schedule"})
    if (!root.contains(key)) throw ParseError(std::string("missing key '") + key + "'");

  InstanceConfig cfg;
  cfg.corridor.capacities = number_array(root["capacities"], "capacities");
  cfg.corridor.free_flow_times = number_array(root["free_flow_times"], "free_flow_times");
  cfg.corridor.betas = number_array(root["betas"], "betas");
  if (!root["demands"].is_array()) throw ParseError("demands must be an array of rows");
  for (const auto& row : root["demands"])
    cfg.corridor.demands.push_back(number_array(row, "demands row"));

  const json& sched = root["schedule"];
  if (!sched.is_object()) throw ParseError("schedule must be an object");
  if (!sched.contains("family")) throw ParseError("schedule.family missing");
  std::string family = sched["family"].get<std::string>();
  try {
    if (family == "piecewise_linear") {
      reject_unknown(sched, {"family", "early_slope", "late_slope"}, "schedule");
      if (!sched.contains("early_slope") || !sched.contains("late_slope"))
        throw ParseError("piecewise_linear needs early_slope and late_slope");
      cfg.schedule = ScheduleDelay::piecewise_linear(sched["early_slope"].get<double>(),
                                                     sched["late_slope"].get<double>());
    } else if (family == "convex_polynomial") {
      reject_unknown(sched, {"family", "coefficients"}, "schedule");
      if (!sched.contains("coefficients")) throw ParseError("convex_polynomial needs coefficients");
      cfg.schedule =
          ScheduleDelay::convex_polynomial(number_array(sched["coefficients"], "coefficients"));
    } else {
      throw ParseError("unknown schedule family '" + family + "'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const SolverError& e) {
    throw ParseError(std::string("schedule: ") + e.what());
  }

  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    if (!o.is_object()) throw ParseError("oracle must be an object");
    reject_unknown(o, {"dt", "padding"}, "oracle");
    if (o.contains("dt")) cfg.dt = o["dt"].get<double>();
    if (o.contains("padding")) cfg.padding = o["padding"].get<double>();
    if (!(cfg.dt > 0.0)) throw ParseError("oracle.dt must be positive");
    if (cfg.padding < 0.0) throw ParseError("oracle.padding must be nonnegative");
  }
  if (root.contains("output_dir")) cfg.output_dir = root["output_dir"].get<std::string>();
  return cfg;
}

InstanceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace corridor
