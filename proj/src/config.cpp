#include "cusum/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cusum/errors.hpp"

namespace cusum {

namespace {

using nlohmann::json;

Regime parse_regime(const std::string& s) {
  if (s == "F0" || s == "f0") return Regime::F0;
  if (s == "F1" || s == "f1") return Regime::F1;
  throw ConfigError("config: regime must be F0 or F1, got '" + s + "'");
}

DistributionPair parse_model(const json& m) {
  std::string type = m.at("type").get<std::string>();
  if (type == "gaussian") {
    return DistributionPair::gaussian(m.at("mu0").get<double>(),
                                      m.at("mu1").get<double>(),
                                      m.value("sigma", 1.0));
  }
  if (type == "discrete") {
    return DistributionPair::discrete(
        m.at("support").get<std::vector<double>>(),
        m.at("p0").get<std::vector<double>>(),
        m.at("p1").get<std::vector<double>>());
  }
  throw ConfigError("config: model.type must be gaussian or discrete");
}

RegimeSchedule parse_schedule(const json& s) {
  std::int64_t horizon = s.at("horizon").get<std::int64_t>();
  std::vector<RegimePeriod> periods;
  if (s.contains("periods")) {
    for (const auto& p : s.at("periods")) {
      periods.push_back({p.at("start").get<std::int64_t>(),
                         p.at("end").get<std::int64_t>(),
                         parse_regime(p.value("state", "F1"))});
    }
  }
  return RegimeSchedule(horizon, std::move(periods));
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (doc.contains("model")) cfg.model = parse_model(doc.at("model"));
    if (doc.contains("thresholds")) {
      const auto& t = doc.at("thresholds");
      cfg.kL = t.value("kL", cfg.kL);
      cfg.kU = t.value("kU", cfg.kU);
      if (t.contains("h")) {
        cfg.h_list.clear();
        if (t.at("h").is_array())
          cfg.h_list = t.at("h").get<std::vector<double>>();
        else
          cfg.h_list.push_back(t.at("h").get<double>());
      }
    }
    if (doc.contains("schedule"))
      cfg.schedule = parse_schedule(doc.at("schedule"));
    if (doc.contains("run")) {
      const auto& r = doc.at("run");
      cfg.reps = r.value("reps", cfg.reps);
      cfg.master_seed = r.value("master_seed", cfg.master_seed);
      cfg.t_max = r.value("t_max", cfg.t_max);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

}  // namespace cusum
