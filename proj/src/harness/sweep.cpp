#include "gatsac/harness/sweep.hpp"

#include <ostream>

#include "gatsac/core/csv.hpp"
#include "gatsac/core/stats.hpp"
#include "gatsac/core/svg.hpp"

namespace gatsac::harness {

SweepResult run_sweep(const sim::SimConfig& base, const SweepSpec& spec,
                      const std::string& checkpoint, const std::string& out_dir,
                      std::ostream* progress) {
  ensure_dir(out_dir);
  SweepResult res;
  res.raw_csv = out_dir + "/sweep_raw.csv";
  res.summary_csv = out_dir + "/sweep_summary.csv";
  write_manifest(out_dir + "/manifest.txt", base,
                 {"command=sweep", "runs_per_cell=" + std::to_string(spec.runs),
                  "controller=" + std::string(checkpoint.empty() ? "fixed" : checkpoint)});

  CsvWriter raw(res.raw_csv, {"penetration", "density", "run", "seed", "reward", "avg_delay",
                              "violations", "violations_per_100", "throughput_vpm"});
  CsvWriter summary(res.summary_csv,
                    {"penetration", "density", "reward_mean", "reward_std", "delay_mean",
                     "delay_std", "violations_mean", "violations_std", "throughput_mean",
                     "throughput_std"});

  std::uint64_t cell_key = 0;
  for (double density : spec.densities) {
    for (double pen : spec.penetrations) {
      sim::SimConfig cfg = base;
      cfg.demand = density;
      cfg.cav_penetration = pen;
      EvalOptions opts;
      opts.runs = spec.runs;
      opts.seed = Rng(spec.seed).fork(++cell_key).seed();
      const EvalResult er = checkpoint.empty()
                                ? run_eval_baseline(cfg, opts, "")
                                : run_eval_agent(cfg, checkpoint, opts, "");
      std::vector<double> rewards, delays, violations, throughputs;
      for (const auto& r : er.rows) {
        raw.row({format_double(pen), format_double(density), std::to_string(r.run),
                 std::to_string(r.seed), format_double(r.reward), format_double(r.avg_delay),
                 std::to_string(r.violations), format_double(r.violations_per_100),
                 format_double(r.throughput_vpm)});
        rewards.push_back(r.reward);
        delays.push_back(r.avg_delay);
        violations.push_back(static_cast<double>(r.violations));
        throughputs.push_back(r.throughput_vpm);
        ++res.total_rows;
      }
      SweepCell cell;
      cell.penetration = pen;
      cell.density = density;
      cell.reward_mean = mean(rewards);
      cell.reward_std = sample_stddev(rewards);
      cell.delay_mean = mean(delays);
      cell.delay_std = sample_stddev(delays);
      cell.violations_mean = mean(violations);
      cell.violations_std = sample_stddev(violations);
      cell.throughput_mean = mean(throughputs);
      cell.throughput_std = sample_stddev(throughputs);
      res.cells.push_back(cell);
      summary.row({format_double(pen), format_double(density), format_double(cell.reward_mean),
                   format_double(cell.reward_std), format_double(cell.delay_mean),
                   format_double(cell.delay_std), format_double(cell.violations_mean),
                   format_double(cell.violations_std), format_double(cell.throughput_mean),
                   format_double(cell.throughput_std)});
      if (progress)
        *progress << "sweep cell density=" << density << " penetration=" << pen << " done\n";
    }
  }

  // mean +/- std vs penetration, one series per density
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
  struct MetricDef {
    const char* name;
    double SweepCell::* m;
    double SweepCell::* s;
  };
  const MetricDef metrics[] = {
      {"reward", &SweepCell::reward_mean, &SweepCell::reward_std},
      {"delay", &SweepCell::delay_mean, &SweepCell::delay_std},
      {"violations", &SweepCell::violations_mean, &SweepCell::violations_std},
      {"throughput", &SweepCell::throughput_mean, &SweepCell::throughput_std},
  };
  for (const auto& md : metrics) {
    SvgChart chart;
    chart.title = std::string(md.name) + " vs CAV penetration";
    chart.x_label = "CAV penetration";
    chart.y_label = md.name;
    int ci = 0;
    for (double density : spec.densities) {
      SvgSeries series;
      series.label = format_double(density) + " veh/h";
      series.color = colors[ci++ % 5];
      for (const auto& cell : res.cells) {
        if (cell.density != density) continue;
        series.x.push_back(cell.penetration);
        series.y.push_back(cell.*(md.m));
        series.yerr.push_back(cell.*(md.s));
      }
      chart.series.push_back(std::move(series));
    }
    const std::string path = out_dir + "/sweep_" + md.name + ".svg";
    chart.write(path);
    res.svg_paths.push_back(path);
  }
  return res;
}

}  // namespace gatsac::harness
