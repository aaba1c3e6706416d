#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cusum/distributions.hpp"
#include "cusum/schedule.hpp"

namespace cusum {

// Parsed experiment configuration (JSON file). Flags may override any of
// the run-block values after parsing.
struct ExperimentConfig {
  DistributionPair model = DistributionPair::gaussian(-0.5, 0.5, 1.0);
  double kL = 5.0;
  double kU = 5.0;
  std::vector<double> h_list = {10.0};
  RegimeSchedule schedule{75,
                          {{16, 35, Regime::F1}, {51, 60, Regime::F1}}};
  std::int64_t reps = 10000;
  std::uint64_t master_seed = 1;
  std::int64_t t_max = 1000000;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

}  // namespace cusum
