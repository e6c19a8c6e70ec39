#pragma once

#include <string>
#include <vector>

#include "gatsac/harness/run.hpp"

namespace gatsac::harness {

struct SweepSpec {
  std::vector<double> penetrations{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> densities{600.0, 1200.0, 1800.0};
  int runs = 20;
  std::uint64_t seed = 1;
};

struct SweepCell {
  double penetration = 0.0;
  double density = 0.0;
  double reward_mean = 0.0, reward_std = 0.0;
  double delay_mean = 0.0, delay_std = 0.0;
  double violations_mean = 0.0, violations_std = 0.0;
  double throughput_mean = 0.0, throughput_std = 0.0;
};

struct SweepResult {
  std::string raw_csv;
  std::string summary_csv;
  std::vector<std::string> svg_paths;
  std::vector<SweepCell> cells;
  int total_rows = 0;
};

// checkpoint empty -> fixed-timing baseline sweep.
SweepResult run_sweep(const sim::SimConfig& base, const SweepSpec& spec,
                      const std::string& checkpoint, const std::string& out_dir,
                      std::ostream* progress = nullptr);

}  // namespace gatsac::harness
