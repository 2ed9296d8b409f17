#include "gcgsr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "gcgsr/errors.hpp"
#include "gcgsr/sensor_data.hpp"
#include "gcgsr/synthetic.hpp"

namespace gcgsr {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kGraphStream = 11;
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kMaskStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kMaskResampleStream = 4;

std::uint64_t run_seed(const ExperimentSpec& spec, int run) {
  return spec.base_seed + static_cast<std::uint64_t>(run);
}

}  // namespace

void ExperimentSpec::validate() const {
  if (monte_carlo_runs < 1) throw ValidationError("monte_carlo_runs must be >= 1");
  if (solvers.empty()) throw ValidationError("solver list is empty");
  if (iterations < 1) throw ValidationError("iterations must be >= 1");
  if (final_window < 1) throw ValidationError("final_window must be >= 1");
  if (workers < 0) throw ValidationError("workers must be >= 0");
  if (graph.source == GraphSource::kronecker && graph.order < 1) {
    throw ValidationError("kronecker order must be >= 1");
  }
  if ((graph.source != GraphSource::kronecker) && graph.path.empty()) {
    throw ValidationError("graph source needs a path");
  }
  if (signal.source == SignalSource::snapshot && graph.source != GraphSource::sensor) {
    throw ValidationError("snapshot signals require a sensor graph source");
  }
  if (calibration.iterations < 1 || calibration.runs < 1) {
    throw ValidationError("calibration iterations and runs must be >= 1");
  }
  std::vector<std::string> names;
  for (const auto& s : solvers) {
    if (s.name.empty()) throw ValidationError("solver name is empty");
    if (std::find(names.begin(), names.end(), s.name) != names.end()) {
      throw ValidationError("duplicate solver name '" + s.name + "'");
    }
    names.push_back(s.name);
    SolverConfig c = s.config;
    if (s.calibrate_step) c.step_size = 1.0;
    c.max_iters = iterations;
    c.validate();
  }
  if (std::any_of(solvers.begin(), solvers.end(),
                  [](const SolverSpec& s) { return s.calibrate_step; }) &&
      !calibration.target_drop_db) {
    throw ValidationError("calibrated step sizes need calibration.target_drop_db");
  }
  std::visit(
      [](const auto& m) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          gcgsr::validate(m);
        }
      },
      noise.model);
}

ExperimentSetup prepare_setup(const ExperimentSpec& spec) {
  std::optional<GraphModel> graph;
  std::optional<Vector> snapshot;
  switch (spec.graph.source) {
    case GraphSource::kronecker: {
      KroneckerConfig kc;
      if (spec.graph.seed_matrix.size() > 0) kc.seed_matrix = spec.graph.seed_matrix;
      kc.order = spec.graph.order;
      kc.rng_seed = derive_seed(spec.base_seed, kGraphStream);
      graph = sample_adjacency(kronecker_probability(kc), kc.rng_seed);
      break;
    }
    case GraphSource::csv:
      graph = build_graph(load_matrix_csv(spec.graph.path));
      break;
    case GraphSource::sensor: {
      const SensorDataset ds = load_sensor_csv(spec.graph.path, spec.graph.timestamp,
                                               spec.graph.k_neighbors);
      graph = build_sensor_graph(ds, spec.graph.k_neighbors, spec.graph.width);
      snapshot = ds.snapshot;
      break;
    }
  }
  ExperimentSetup setup{*std::move(graph), 0.0, {}, std::move(snapshot)};
  setup.lambda_max = setup.graph.has_edges() ? spectral_radius(setup.graph) : 0.0;
  if (spec.signal.source == SignalSource::bandlimited) {
    setup.basis = smallest_eigenvectors(setup.graph, setup.graph.n_nodes());
  }
  return setup;
}

RunInputs make_run_inputs(const ExperimentSpec& spec, const ExperimentSetup& setup,
                          int run) {
  const std::uint64_t seed = run_seed(spec, run);
  const std::size_t n = setup.graph.n_nodes();
  Vector x;
  if (spec.signal.source == SignalSource::bandlimited) {
    x = bandlimited_signal(setup.basis,
                           {spec.signal.bandwidth, derive_seed(seed, kSignalStream)})
            .x;
  } else {
    x = *setup.snapshot;
  }
  const std::size_t m = spec.mask_size == 0 ? n : spec.mask_size;
  return RunInputs{std::move(x), choose_mask(n, m, derive_seed(seed, kMaskStream)),
                   derive_seed(seed, kNoiseStream),
                   derive_seed(seed, kMaskResampleStream)};
}

RunResult run_solver(const ExperimentSpec& spec, const ExperimentSetup& setup,
                     const RunInputs& inputs, const SolverConfig& cfg) {
  const std::size_t n = setup.graph.n_nodes();
  const auto ni = static_cast<Eigen::Index>(n);
  NoiseSampler sampler(spec.noise.model, inputs.noise_seed);
  Vector noise(ni);
  sampler.fill(noise);
  double scale = 1.0;
  if (spec.noise.snr_db && !std::holds_alternative<std::monostate>(spec.noise.model)) {
    scale = snr_scale_factor(inputs.x_true, noise, *spec.noise.snr_db);
  }

  RunOptions opts;
  opts.x_true = inputs.x_true;
  opts.lambda_max = setup.lambda_max;

  // Noise enters only at sampled nodes: y = Phi (x + v).
  if (spec.observation == ObservationMode::fixed) {
    const Vector y = inputs.mask.diagonal().cwiseProduct(inputs.x_true + scale * noise);
    return run(setup.graph, cfg, inputs.mask, y, opts);
  }

  Vector y(ni);
  std::optional<SamplingMask> current_mask;
  std::mt19937_64 mask_engine(inputs.mask_seed);
  bool first = true;
  const ObservationStream stream = [&](long) -> Observation {
    if (!first) sampler.fill(noise);
    first = false;
    const SamplingMask* mask = &inputs.mask;
    if (spec.resample_mask) {
      current_mask.emplace(choose_mask(n, inputs.mask.m(), mask_engine()));
      mask = &*current_mask;
    }
    y.noalias() = mask->diagonal().cwiseProduct(inputs.x_true + scale * noise);
    return Observation{*mask, y};
  };
  return run_streaming(setup.graph, cfg, stream, opts);
}

double aggregate_db(const std::vector<double>& values_db, Aggregation how) {
  if (values_db.empty()) return kNmsdFloorDb;
  double acc = 0.0;
  if (how == Aggregation::db) {
    for (double v : values_db) acc += v;
    return acc / static_cast<double>(values_db.size());
  }
  for (double v : values_db) acc += std::pow(10.0, v / 10.0);
  return to_db(acc / static_cast<double>(values_db.size()));
}

namespace {

double final_of(const NmsdTrace& t, int window) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), t.size());
  if (w == 0) return kNmsdFloorDb;
  double acc = 0.0;
  for (std::size_t i = t.size() - w; i < t.size(); ++i) acc += std::pow(10.0, t[i] / 10.0);
  return to_db(acc / static_cast<double>(w));
}

// Runs `body(run)` for every run index on up to `workers` threads; the first
// failure (lowest run index) is rethrown as RunError after all threads stop.
template <class Body>
void for_each_run(int runs, int workers, Body&& body) {
  int threads = workers == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                             : workers;
  threads = std::clamp(threads, 1, runs);
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  int failed_run = std::numeric_limits<int>::max();
  std::string failure;

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const int r = next.fetch_add(1);
      if (r >= runs) return;
      try {
        body(r);
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(mu);
        if (r < failed_run) {
          failed_run = r;
          failure = ex.what();
        }
        stop.store(true);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failed_run != std::numeric_limits<int>::max()) {
    throw RunError("run " + std::to_string(failed_run) + ": " + failure, failed_run);
  }
}

SolverConfig resolved_config(const ExperimentSpec& spec, const SolverSpec& s) {
  SolverConfig c = s.config;
  c.max_iters = spec.iterations;
  return c;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& input) {
  input.validate();
  ExperimentSpec spec = input;
  const ExperimentSetup setup = prepare_setup(spec);

  ExperimentResult out;
  if (const std::size_t iso = setup.graph.isolated_count(); iso > 0) {
    out.warnings.push_back("graph has " + std::to_string(iso) + " isolated nodes");
  }
  if (std::any_of(spec.solvers.begin(), spec.solvers.end(),
                  [](const SolverSpec& s) { return s.calibrate_step; })) {
    const CalibrationResult cal =
        calibrate_step_sizes(spec, setup, *spec.calibration.target_drop_db);
    for (std::size_t i = 0; i < spec.solvers.size(); ++i) {
      if (!spec.solvers[i].calibrate_step) continue;
      spec.solvers[i].config.step_size = cal.step_sizes[i];
      spec.solvers[i].calibrate_step = false;
      if (!cal.within_tolerance[i]) {
        out.warnings.push_back("calibration: " + spec.solvers[i].name + " reached " +
                               format_number(cal.achieved_drop_db[i]) +
                               " dB, target " + format_number(cal.target_drop_db));
      }
    }
  }

  const std::size_t n_solvers = spec.solvers.size();
  const auto runs = static_cast<std::size_t>(spec.monte_carlo_runs);
  out.n_nodes = setup.graph.n_nodes();
  out.lambda_max = setup.lambda_max;
  out.traces.assign(n_solvers, std::vector<NmsdTrace>(runs));
  out.final_db.assign(n_solvers, std::vector<double>(runs));
  std::vector<std::vector<std::string>> run_warnings(runs);

  for_each_run(spec.monte_carlo_runs, spec.workers, [&](int r) {
    const RunInputs inputs = make_run_inputs(spec, setup, r);
    for (std::size_t s = 0; s < n_solvers; ++s) {
      RunResult res = run_solver(spec, setup, inputs, resolved_config(spec, spec.solvers[s]));
      out.final_db[s][static_cast<std::size_t>(r)] = final_of(res.nmsd_db, spec.final_window);
      out.traces[s][static_cast<std::size_t>(r)] = std::move(res.nmsd_db);
      if (r == 0) {
        for (auto& w : res.warnings) {
          run_warnings[0].push_back(spec.solvers[s].name + ": " + w);
        }
      }
    }
  });
  for (auto& w : run_warnings[0]) out.warnings.push_back(std::move(w));

  for (std::size_t s = 0; s < n_solvers; ++s) {
    out.solver_names.push_back(spec.solvers[s].name);
    std::size_t len = 0;
    for (const auto& t : out.traces[s]) len = std::max(len, t.size());
    NmsdTrace mean(len);
    std::vector<double> column(runs);
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t r = 0; r < runs; ++r) {
        const auto& t = out.traces[s][r];
        column[r] = t.empty() ? 0.0 : t[std::min(i, t.size() - 1)];
      }
      mean[i] = aggregate_db(column, spec.aggregation);
    }
    out.mean_trace.push_back(std::move(mean));
    out.mean_final_db.push_back(aggregate_db(out.final_db[s], spec.aggregation));
    const auto& f = out.final_db[s];
    const double m = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(runs);
    double var = 0.0;
    for (double v : f) var += (v - m) * (v - m);
    out.std_final_db.push_back(runs > 1 ? std::sqrt(var / static_cast<double>(runs - 1)) : 0.0);
  }
  out.spec = std::move(spec);
  return out;
}

double initial_drop_db(const ExperimentSpec& spec, const ExperimentSetup& setup,
                       const SolverConfig& cfg, int iterations, int runs) {
  SolverConfig c = cfg;
  c.max_iters = iterations;
  c.stop_tol = 0.0;
  std::vector<double> finals;
  const int n_runs = std::min(runs, spec.monte_carlo_runs);
  for (int r = 0; r < n_runs; ++r) {
    const RunInputs inputs = make_run_inputs(spec, setup, r);
    try {
      const RunResult res = run_solver(spec, setup, inputs, c);
      finals.push_back(res.nmsd_db.back());
    } catch (const DivergenceError&) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  return -aggregate_db(finals, Aggregation::linear);
}

CalibrationResult calibrate_step_sizes(const ExperimentSpec& spec,
                                       const ExperimentSetup& setup,
                                       double target_drop_db) {
  if (!(setup.lambda_max > 0.0)) {
    throw ValidationError("calibration needs a graph with edges");
  }
  constexpr int kGrid = 1 << 16;
  const double bound = 2.0 / setup.lambda_max;
  const int iters = spec.calibration.iterations;
  const int runs = spec.calibration.runs;

  CalibrationResult out;
  out.target_drop_db = target_drop_db;
  for (const auto& s : spec.solvers) {
    SolverConfig c = s.config;
    auto drop_at = [&](int k) {
      c.step_size = bound * static_cast<double>(k) / kGrid;
      return initial_drop_db(spec, setup, c, iters, runs);
    };
    // Geometric scan k = 1, 2, 4, ..., 2^15, 2^16 - 1. The drop is not monotone
    // at large steps (oscillation), so bisect only inside the first bracket
    // whose upper end reaches the target.
    std::vector<int> scan;
    for (int k = 1; k < kGrid; k *= 2) scan.push_back(k);
    scan.push_back(kGrid - 1);
    int hi = -1;
    double best = -std::numeric_limits<double>::infinity();
    int best_k = 1;
    int lo = 0;
    for (int k : scan) {
      const double d = drop_at(k);
      if (d >= target_drop_db) {
        hi = k;
        best = d;
        break;
      }
      if (d > best) {
        best = d;
        best_k = k;
      }
      lo = k;
    }
    if (hi < 0) {
      // Target out of reach: the largest drop seen.
      hi = best_k;
    } else {
      // Invariant: drop(lo) < target (or lo == 0), drop(hi) >= target.
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        const double d = drop_at(mid);
        if (d >= target_drop_db) {
          hi = mid;
          best = d;
        } else {
          lo = mid;
        }
      }
    }
    out.step_sizes.push_back(bound * static_cast<double>(hi) / kGrid);
    out.achieved_drop_db.push_back(best);
    const double tol = spec.calibration.tolerance * std::abs(target_drop_db);
    out.within_tolerance.push_back(std::abs(best - target_drop_db) <= tol);
  }
  return out;
}

CalibrationResult calibrate_step_sizes(const ExperimentSpec& spec,
                                       double target_drop_db) {
  spec.validate();
  return calibrate_step_sizes(spec, prepare_setup(spec), target_drop_db);
}

GraphModel bench_graph(std::size_t n_nodes, std::uint64_t seed) {
  std::size_t rest = n_nodes;
  int threes = 0;
  int twos = 0;
  while (rest > 1 && rest % 3 == 0) {
    rest /= 3;
    ++threes;
  }
  while (rest > 1 && rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  if (rest != 1 || threes == 0) {
    throw ValidationError("bench sizes must have the form 3^k 2^j with k >= 1, got " +
                          std::to_string(n_nodes));
  }
  Matrix p = kronecker_probability({default_seed_matrix(), threes, seed});
  const Matrix half = Matrix::Constant(2, 2, 0.5);
  for (int j = 0; j < twos; ++j) p = kronecker_product(p, half);
  return sample_adjacency(p, seed);
}

std::vector<BenchRow> bench_iteration_cost(const std::vector<std::size_t>& sizes,
                                           int steps, std::uint64_t seed) {
  if (sizes.empty()) throw ValidationError("bench: empty size list");
  if (steps < 1) throw ValidationError("bench: steps must be >= 1");
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    const GraphModel g = bench_graph(n, seed);
    const double lambda = spectral_radius(g);
    const EigenPairs basis = smallest_eigenvectors(g, std::min<std::size_t>(n, 25));
    const Vector x_true =
        bandlimited_signal(basis, {static_cast<std::size_t>(basis.values.size()), seed}).x;
    const SamplingMask mask = SamplingMask::full(n);
    const Vector y = x_true + sample_ggd({1.3, 0.01}, n, seed);
    for (Algorithm algo : {Algorithm::gc_gsr, Algorithm::lms, Algorithm::lmp}) {
      SolverConfig cfg;
      cfg.algorithm = algo;
      cfg.step_size = 0.5 / lambda;
      cfg.gamma = 1.0;
      cfg.alpha = 2.0;
      cfg.beta = 1.0;
      Recursion rec(g, cfg);
      RecoveryState s = initial_state(n, cfg);
      for (int w = 0; w < 50; ++w) rec.advance(mask, y, s);
      std::vector<double> times(static_cast<std::size_t>(steps));
      for (int i = 0; i < steps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        rec.advance(mask, y, s);
        const auto t1 = std::chrono::steady_clock::now();
        times[static_cast<std::size_t>(i)] = std::chrono::duration<double>(t1 - t0).count();
      }
      std::nth_element(times.begin(), times.begin() + steps / 2, times.end());
      rows.push_back({n, to_string(algo), times[static_cast<std::size_t>(steps / 2)], steps});
    }
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "n_nodes,algorithm,median_step_seconds,steps\n";
  for (const auto& r : rows) {
    out << r.n_nodes << ',' << r.algorithm << ',' << format_number(r.median_step_seconds)
        << ',' << r.steps << '\n';
  }
}

void emit_results(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };

  {
    auto f = open("trace.csv");
    f << "solver,run,iteration,nmsd_db\n";
    for (std::size_t s = 0; s < result.solver_names.size(); ++s) {
      for (std::size_t r = 0; r < result.traces[s].size(); ++r) {
        const auto& t = result.traces[s][r];
        for (std::size_t i = 0; i < t.size(); ++i) {
          f << result.solver_names[s] << ',' << r << ',' << i + 1 << ','
            << format_number(t[i]) << '\n';
        }
      }
    }
  }
  {
    auto f = open("summary.csv");
    f << "solver,mean_final_nmsd_db,std\n";
    for (std::size_t s = 0; s < result.solver_names.size(); ++s) {
      f << result.solver_names[s] << ',' << format_number(result.mean_final_db[s]) << ','
        << format_number(result.std_final_db[s]) << '\n';
    }
  }
  {
    auto f = open("mean_trace.csv");
    f << "solver,iteration,mean_nmsd_db\n";
    for (std::size_t s = 0; s < result.solver_names.size(); ++s) {
      for (std::size_t i = 0; i < result.mean_trace[s].size(); ++i) {
        f << result.solver_names[s] << ',' << i + 1 << ','
          << format_number(result.mean_trace[s][i]) << '\n';
      }
    }
  }
  {
    auto f = open("spec.echo");
    f << spec_to_json(result.spec) << '\n';
  }
}

}  // namespace gcgsr
