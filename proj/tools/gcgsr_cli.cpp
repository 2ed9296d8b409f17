// Command-line front end: run, calibrate, bench, fetch-data.
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcgsr/errors.hpp"
#include "gcgsr/experiment.hpp"
#include "gcgsr/sensor_data.hpp"

namespace {

using namespace gcgsr;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> workers;
  std::string out;
  std::string profile;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Override base_seed");
  cmd->add_option("--runs", o.runs, "Override monte_carlo_runs");
  cmd->add_option("--workers", o.workers, "Worker threads (0: all cores)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--profile", o.profile, "Named profile: desk (20 runs) or full (100 runs)")
      ->check(CLI::IsMember({"desk", "full"}));
}

ExperimentSpec load_with_overrides(const std::string& path, const Overrides& o) {
  ExperimentSpec spec = load_spec(path);
  if (o.profile == "full") spec.monte_carlo_runs = 100;
  if (o.profile == "desk") spec.monte_carlo_runs = 20;
  if (o.seed) spec.base_seed = *o.seed;
  if (o.runs) spec.monte_carlo_runs = *o.runs;
  if (o.workers) spec.workers = *o.workers;
  if (!o.out.empty()) spec.output_dir = o.out;
  spec.validate();
  return spec;
}

int cmd_run(const std::string& path, const Overrides& o) {
  const ExperimentSpec spec = load_with_overrides(path, o);
  const ExperimentResult res = run_experiment(spec);
  emit_results(res, spec.output_dir);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "solver,mean_final_nmsd_db,std\n";
  for (std::size_t s = 0; s < res.solver_names.size(); ++s) {
    std::cout << res.solver_names[s] << ',' << format_number(res.mean_final_db[s]) << ','
              << format_number(res.std_final_db[s]) << '\n';
  }
  return 0;
}

int cmd_calibrate(const std::string& path, const Overrides& o, std::optional<double> target) {
  const ExperimentSpec spec = load_with_overrides(path, o);
  if (!target) target = spec.calibration.target_drop_db;
  if (!target) throw ValidationError("calibrate needs --target or calibration.target_drop_db");
  const CalibrationResult cal = calibrate_step_sizes(spec, *target);
  std::cout << "solver,step_size,initial_drop_db,within_tolerance\n";
  for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
    std::cout << spec.solvers[s].name << ',' << format_number(cal.step_sizes[s]) << ','
              << format_number(cal.achieved_drop_db[s]) << ','
              << (cal.within_tolerance[s] ? "true" : "false") << '\n';
  }
  return 0;
}

int cmd_bench(const std::vector<std::size_t>& sizes, int steps, std::uint64_t seed,
              const std::string& out) {
  const auto rows = bench_iteration_cost(sizes, steps, seed);
  if (!out.empty()) write_bench_csv(out, rows);
  std::cout << "n_nodes,algorithm,median_step_seconds,steps\n";
  for (const auto& r : rows) {
    std::cout << r.n_nodes << ',' << r.algorithm << ',' << format_number(r.median_step_seconds)
              << ',' << r.steps << '\n';
  }
  return 0;
}

// Converts the public lab archive (data.txt: date time epoch moteid
// temperature humidity light voltage; mote_locs.txt: moteid x y) into the
// sensor CSV format. The epoch number becomes the timestamp column, since
// readings of one sampling round share it.
int cmd_fetch_data(const std::string& data_path, const std::string& locs_path,
                   const std::string& out_path, std::optional<long> epoch) {
  std::ifstream locs(locs_path);
  if (!locs) throw std::runtime_error("cannot open " + locs_path);
  std::map<int, std::pair<double, double>> where;
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  while (locs >> id >> x >> y) where[id] = {x, y};
  if (where.empty()) throw ValidationError("no sensor locations in " + locs_path);

  std::ifstream data(data_path);
  if (!data) throw std::runtime_error("cannot open " + data_path);
  std::vector<SensorRecord> records;
  std::size_t skipped = 0;
  std::string line;
  while (std::getline(data, line)) {
    std::istringstream ls(line);
    std::string date;
    std::string time;
    long ep = 0;
    int mote = 0;
    double temp = 0.0;
    if (!(ls >> date >> time >> ep >> mote >> temp)) {
      ++skipped;
      continue;
    }
    const auto loc = where.find(mote);
    if (loc == where.end()) {
      ++skipped;
      continue;
    }
    if (epoch && ep != *epoch) continue;
    SensorRecord r;
    r.sensor_id = mote;
    r.x = loc->second.first;
    r.y = loc->second.second;
    // The archive marks failing motes with readings far outside room range.
    if (temp > -20.0 && temp < 60.0) r.temperature = temp;
    r.timestamp = std::to_string(ep);
    records.push_back(std::move(r));
  }
  // Sensors without any reading still need a row so the graph has every node.
  std::map<int, bool> seen;
  for (const auto& r : records) seen[r.sensor_id] = true;
  const std::string stamp = records.empty() ? std::string() : records.front().timestamp;
  for (const auto& [mid, xy] : where) {
    if (seen.count(mid)) continue;
    SensorRecord r;
    r.sensor_id = mid;
    r.x = xy.first;
    r.y = xy.second;
    r.timestamp = stamp;
    records.push_back(std::move(r));
  }
  write_sensor_csv(out_path, records);
  std::cout << "records," << records.size() << "\nskipped," << skipped << '\n';
  return 0;
}

std::string error_kind(const std::exception& ex) {
  if (dynamic_cast<const ValidationError*>(&ex)) return "validation";
  if (dynamic_cast<const DimensionError*>(&ex)) return "dimension";
  if (dynamic_cast<const ConvergenceError*>(&ex)) return "convergence";
  if (dynamic_cast<const DivergenceError*>(&ex)) return "divergence";
  if (dynamic_cast<const RunError*>(&ex)) return "run";
  return "runtime";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correntropy-based graph signal recovery experiments"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_spec;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte-Carlo experiment from a JSON spec");
  run_cmd->add_option("spec", run_spec, "Spec file")->required();
  add_overrides(run_cmd, run_o);

  Overrides cal_o;
  std::string cal_spec;
  std::optional<double> cal_target;
  auto* cal_cmd = app.add_subcommand("calibrate", "Calibrate solver step sizes");
  cal_cmd->add_option("spec", cal_spec, "Spec file")->required();
  cal_cmd->add_option("--target", cal_target, "Target NMSD drop over the first iterations (dB)");
  add_overrides(cal_cmd, cal_o);

  std::vector<std::size_t> sizes{81, 162, 324, 648};
  int steps = 1000;
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Per-iteration cost benchmark");
  bench_cmd->add_option("--sizes", sizes, "Graph sizes (3^k 2^j)")->delimiter(',');
  bench_cmd->add_option("--steps", steps, "Timed steps per size and solver");
  bench_cmd->add_option("--seed", bench_seed, "Graph seed");
  bench_cmd->add_option("--out", bench_out, "CSV output path");

  std::string data_path;
  std::string locs_path;
  std::string fetch_out = "data/intel_lab.csv";
  std::optional<long> epoch;
  auto* fetch_cmd = app.add_subcommand(
      "fetch-data", "Convert the downloaded lab archive into the sensor CSV format");
  fetch_cmd->add_option("--data", data_path, "data.txt from the archive")->required();
  fetch_cmd->add_option("--locs", locs_path, "mote_locs.txt from the archive")->required();
  fetch_cmd->add_option("--out", fetch_out, "Output CSV");
  fetch_cmd->add_option("--epoch", epoch, "Keep only this sampling epoch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) {
      std::cerr << "error,usage," << nlohmann::json(e.what()).dump() << '\n';
    }
    return app.exit(e);
  }

  try {
    if (*run_cmd) return cmd_run(run_spec, run_o);
    if (*cal_cmd) return cmd_calibrate(cal_spec, cal_o, cal_target);
    if (*bench_cmd) return cmd_bench(sizes, steps, bench_seed, bench_out);
    if (*fetch_cmd) return cmd_fetch_data(data_path, locs_path, fetch_out, epoch);
  } catch (const std::exception& ex) {
    // One line: error,<kind>,<JSON-quoted message>
    std::cerr << "error," << error_kind(ex) << ',' << nlohmann::json(ex.what()).dump() << '\n';
    return 1;
  }
  return 0;
}
