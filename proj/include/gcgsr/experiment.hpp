#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcgsr/graph.hpp"
#include "gcgsr/metrics.hpp"
#include "gcgsr/noise.hpp"
#include "gcgsr/solvers.hpp"

namespace gcgsr {

enum class GraphSource { kronecker, csv, sensor };
enum class SignalSource { bandlimited, snapshot };
// streaming: fresh noise (and optionally a fresh mask) every iteration.
// fixed: one noisy observation per run, reused by every iteration.
enum class ObservationMode { streaming, fixed };
enum class Aggregation { linear, db };

struct GraphSpec {
  GraphSource source = GraphSource::kronecker;
  Matrix seed_matrix;  // kronecker; empty selects the default seed
  int order = 4;
  std::string path;  // csv adjacency or sensor CSV
  std::size_t k_neighbors = 5;
  double width = 0.0;  // <= 0: mean k-NN distance
  std::optional<std::string> timestamp;
};

struct SignalSpec {
  SignalSource source = SignalSource::bandlimited;
  std::size_t bandwidth = 25;
};

struct NoiseSpec {
  NoiseModel model;
  std::optional<double> snr_db;  // absent: raw model scale
};

struct SolverSpec {
  std::string name;
  SolverConfig config;
  bool calibrate_step = false;  // step size chosen by calibrate_step_sizes
};

struct CalibrationSpec {
  std::optional<double> target_drop_db;
  int iterations = 10;
  int runs = 5;
  double tolerance = 0.10;  // relative
};

struct ExperimentSpec {
  GraphSpec graph;
  SignalSpec signal;
  NoiseSpec noise;
  ObservationMode observation = ObservationMode::streaming;
  bool resample_mask = false;
  std::size_t mask_size = 0;  // 0: all nodes
  int iterations = 1000;
  std::vector<SolverSpec> solvers;
  int monte_carlo_runs = 20;
  std::uint64_t base_seed = 1;
  int workers = 1;
  Aggregation aggregation = Aggregation::linear;
  // Final NMSD of a run: linear mean over the last `final_window` iterations.
  int final_window = 1;
  std::string output_dir = "results";
  CalibrationSpec calibration;

  void validate() const;
};

// The ground truth and graph shared by every run of an experiment.
struct ExperimentSetup {
  GraphModel graph;
  double lambda_max = 0.0;
  EigenPairs basis;               // bandlimited signals only
  std::optional<Vector> snapshot; // sensor snapshot signal
};

ExperimentSetup prepare_setup(const ExperimentSpec& spec);

// Inputs of one Monte-Carlo run, derived from base_seed + run.
struct RunInputs {
  Vector x_true;
  SamplingMask mask;
  std::uint64_t noise_seed = 0;
  std::uint64_t mask_seed = 0;
};

RunInputs make_run_inputs(const ExperimentSpec& spec, const ExperimentSetup& setup,
                          int run);

// Runs one solver on one run's inputs; noise draws are identical for every
// solver of the same run.
RunResult run_solver(const ExperimentSpec& spec, const ExperimentSetup& setup,
                     const RunInputs& inputs, const SolverConfig& cfg);

struct ExperimentResult {
  ExperimentSpec spec;  // resolved (calibrated step sizes filled in)
  std::size_t n_nodes = 0;
  double lambda_max = 0.0;
  std::vector<std::string> solver_names;
  std::vector<std::vector<NmsdTrace>> traces;  // [solver][run]
  std::vector<std::vector<double>> final_db;   // [solver][run]
  std::vector<NmsdTrace> mean_trace;           // [solver], dB
  std::vector<double> mean_final_db;
  std::vector<double> std_final_db;
  std::vector<std::string> warnings;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Aggregate of per-run values given in dB under the chosen aggregation.
double aggregate_db(const std::vector<double>& values_db, Aggregation how);

struct CalibrationResult {
  std::vector<double> step_sizes;
  std::vector<double> achieved_drop_db;
  std::vector<bool> within_tolerance;
  double target_drop_db = 0.0;
};

// NMSD drop (dB, positive = improvement) over the first `iterations`
// iterations, averaged over the first `runs` runs.
double initial_drop_db(const ExperimentSpec& spec, const ExperimentSetup& setup,
                       const SolverConfig& cfg, int iterations, int runs);

// Per solver, searches xi over the grid stability_bound * k / 65536,
// k = 1..65535, for the smallest grid point whose initial drop reaches the
// target (geometric scan, then bisection inside the first bracket that
// reaches it). When no scanned point reaches the target, the scanned point
// with the largest drop is used. Diverging points count as no drop.
CalibrationResult calibrate_step_sizes(const ExperimentSpec& spec,
                                       double target_drop_db);
CalibrationResult calibrate_step_sizes(const ExperimentSpec& spec,
                                       const ExperimentSetup& setup,
                                       double target_drop_db);

struct BenchRow {
  std::size_t n_nodes = 0;
  std::string algorithm;
  double median_step_seconds = 0.0;
  int steps = 0;
};

// Benchmark graph with N = 3^k 2^j nodes: Kronecker power of the default
// seed, times j factors of a uniform 2x2 seed.
GraphModel bench_graph(std::size_t n_nodes, std::uint64_t seed);

// Median wall time of one solver step for each size and solver.
std::vector<BenchRow> bench_iteration_cost(const std::vector<std::size_t>& sizes,
                                           int steps = 1000,
                                           std::uint64_t seed = 1);

void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows);

// trace.csv, summary.csv, mean_trace.csv and spec.echo under `dir`.
void emit_results(const ExperimentResult& result, const std::filesystem::path& dir);

// Shortest round-trip decimal form, used for every number written to disk.
std::string format_number(double v);

// JSON spec documents.
ExperimentSpec parse_spec(const std::string& json_text,
                          const std::filesystem::path& base_dir = {});
ExperimentSpec load_spec(const std::filesystem::path& path);
std::string spec_to_json(const ExperimentSpec& spec);

}  // namespace gcgsr
