#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcgsr/errors.hpp"
#include "gcgsr/experiment.hpp"
#include "gcgsr/metrics.hpp"

using namespace gcgsr;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.graph.order = 3;
  s.signal.bandwidth = 5;
  s.noise.model = AlphaStableNoise{1.3, 0.0, 0.005};
  s.noise.snr_db = 20.0;
  s.mask_size = 20;
  s.iterations = 40;
  s.monte_carlo_runs = 3;
  s.base_seed = 5;
  SolverSpec gc;
  gc.name = "gc";
  gc.config.algorithm = Algorithm::gc_gsr;
  gc.config.step_size = 0.05;
  gc.config.gamma = 20.0;
  gc.config.beta = 0.5;
  SolverSpec lms;
  lms.name = "lms";
  lms.config.algorithm = Algorithm::lms;
  lms.config.step_size = 0.05;
  lms.config.gamma = 1.0;
  s.solvers = {gc, lms};
  return s;
}

}  // namespace

TEST_CASE("nmsd examples") {
  Vector x(3);
  x << 1.0, -2.0, 0.5;
  CHECK(nmsd(x, x) == kNmsdFloorDb);
  CHECK(nmsd(x, Vector::Zero(3)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nmsd(x, 2.0 * x) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nmsd_linear(x, 1.1 * x) == doctest::Approx(0.01));
  CHECK(nmsd(x, 1.1 * x) == doctest::Approx(-20.0));
  CHECK_THROWS_AS(nmsd(Vector::Zero(3), x), ValidationError);
  CHECK_THROWS_AS(nmsd(x, Vector::Zero(2)), DimensionError);
}

TEST_CASE("property: nmsd depends only on the stated ratio") {
  Vector x(4);
  x << 0.3, -1.0, 2.0, 0.1;
  Vector d(4);
  d << 0.01, 0.02, -0.05, 0.0;
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    CHECK(nmsd(c * x, c * x + c * d) == doctest::Approx(nmsd(x, x + d)).epsilon(1e-12));
  }
}

TEST_CASE("aggregation domains") {
  CHECK(aggregate_db({-10.0, -30.0}, Aggregation::db) == doctest::Approx(-20.0));
  CHECK(aggregate_db({-10.0, -30.0}, Aggregation::linear) ==
        doctest::Approx(10.0 * std::log10((0.1 + 0.001) / 2.0)));
}

TEST_CASE("spec validation") {
  ExperimentSpec s = small_spec();
  CHECK_NOTHROW(s.validate());
  s.monte_carlo_runs = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec();
  s.solvers.clear();
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec();
  s.solvers[0].calibrate_step = true;
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("spec json round trip") {
  ExperimentSpec s = small_spec();
  s.solvers[0].config.learned = LearnedWidth{0.5, 0.25, 2.0};
  s.solvers[1].calibrate_step = true;
  s.calibration.target_drop_db = 3.0;
  s.graph.timestamp = "t1";
  const std::string text = spec_to_json(s);
  const ExperimentSpec back = parse_spec(text);
  CHECK(spec_to_json(back) == text);
  CHECK(back.solvers[0].config.learned->a0 == 0.25);
  CHECK(back.solvers[1].calibrate_step);
  CHECK(std::get<AlphaStableNoise>(back.noise.model).p == 1.3);
  CHECK_THROWS_AS(parse_spec("{not json"), ValidationError);
  CHECK_THROWS_AS(parse_spec(R"({"graph": {"source": "ring"}})"), ValidationError);
  CHECK_THROWS_AS(parse_spec(R"({"iterations": "many"})"), ValidationError);
}

TEST_CASE("relative paths resolve against the spec file") {
  const ExperimentSpec s =
      parse_spec(R"({"graph": {"source": "sensor", "path": "data/x.csv"}})", "/base/dir");
  CHECK(s.graph.path == "/base/dir/data/x.csv");
}

TEST_CASE("experiments are deterministic and independent of worker count") {
  const fs::path a = fs::temp_directory_path() / "gcgsr_det_a";
  const fs::path b = fs::temp_directory_path() / "gcgsr_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  ExperimentSpec s = small_spec();
  const ExperimentResult r1 = run_experiment(s);
  emit_results(r1, a);
  s.workers = 3;
  const ExperimentResult r2 = run_experiment(s);
  emit_results(r2, b);
  for (const char* f : {"trace.csv", "summary.csv", "mean_trace.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  emit_results(r1, b);
  CHECK(slurp(a / "spec.echo") == slurp(b / "spec.echo"));
  CHECK(parse_spec(slurp(a / "spec.echo")).iterations == s.iterations);
  const std::string trace = slurp(a / "trace.csv");
  CHECK(trace.rfind("solver,run,iteration,nmsd_db\n", 0) == 0);
  CHECK(r1.traces.size() == 2);
  CHECK(r1.traces[0].size() == 3);
  CHECK(r1.traces[0][0].size() == 40);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("solvers in one run see the same noise") {
  ExperimentSpec s = small_spec();
  s.solvers[1] = s.solvers[0];
  s.solvers[1].name = "gc-copy";
  const ExperimentResult r = run_experiment(s);
  CHECK(r.traces[0] == r.traces[1]);
}

TEST_CASE("different seeds give different traces") {
  ExperimentSpec s = small_spec();
  const ExperimentResult a = run_experiment(s);
  s.base_seed = 6;
  const ExperimentResult b = run_experiment(s);
  CHECK(a.traces[0][0] != b.traces[0][0]);
}

TEST_CASE("fixed observation mode and mask resampling run") {
  ExperimentSpec s = small_spec();
  s.observation = ObservationMode::fixed;
  CHECK(run_experiment(s).mean_final_db[0] < 0.0);
  s.observation = ObservationMode::streaming;
  s.resample_mask = true;
  CHECK(run_experiment(s).mean_final_db[0] < 0.0);
}

TEST_CASE("a failing run aborts with its index") {
  ExperimentSpec s = small_spec();
  s.solvers[1].config.step_size = 50.0;
  try {
    run_experiment(s);
    FAIL("expected RunError");
  } catch (const RunError& ex) {
    CHECK(ex.run() == 0);
  }
}

TEST_CASE("emit_results errors on an unwritable directory") {
  const ExperimentResult r = run_experiment(small_spec());
  const fs::path file = fs::temp_directory_path() / "gcgsr_not_a_dir";
  std::ofstream(file) << "x";
  CHECK_THROWS(emit_results(r, file / "sub"));
  fs::remove(file);
}

TEST_CASE("sensor and csv graph sources") {
  ExperimentSpec s = small_spec();
  s.graph.source = GraphSource::sensor;
  s.graph.path = (fs::path(GCGSR_SOURCE_DIR) / "data" / "intel_lab_fixture.csv").string();
  s.signal.source = SignalSource::snapshot;
  s.mask_size = 40;
  const ExperimentResult r = run_experiment(s);
  CHECK(r.n_nodes == 54);

  const fs::path w = fs::temp_directory_path() / "gcgsr_w.csv";
  Matrix adj = Matrix::Ones(5, 5);
  adj.diagonal().setZero();
  save_matrix_csv(w, adj);
  ExperimentSpec c = small_spec();
  c.graph.source = GraphSource::csv;
  c.graph.path = w.string();
  c.signal.bandwidth = 2;
  c.mask_size = 4;
  CHECK(run_experiment(c).n_nodes == 5);
  fs::remove(w);
}

TEST_CASE("calibration properties") {
  ExperimentSpec s = small_spec();
  s.solvers[1] = s.solvers[0];
  s.solvers[1].name = "gc-copy";
  const ExperimentSetup setup = prepare_setup(s);
  const CalibrationResult same = calibrate_step_sizes(s, setup, 5.0);
  CHECK(same.step_sizes[0] == same.step_sizes[1]);

  const double bound = 2.0 / setup.lambda_max;
  const CalibrationResult zero = calibrate_step_sizes(s, setup, 0.0);
  CHECK(zero.step_sizes[0] == doctest::Approx(bound / 65536.0).epsilon(1e-12));

  double previous = 0.0;
  for (double target : {1.0, 2.0, 4.0, 8.0}) {
    const CalibrationResult c = calibrate_step_sizes(s, setup, target);
    CHECK(c.step_sizes[0] >= previous);
    CHECK(c.step_sizes[0] < bound);
    previous = c.step_sizes[0];
  }
  // Achieved drop at the chosen grid point reaches the target.
  const CalibrationResult c = calibrate_step_sizes(s, setup, 4.0);
  CHECK(c.achieved_drop_db[0] >= 4.0);
  CHECK(initial_drop_db(s, setup, [&] {
          SolverConfig cfg = s.solvers[0].config;
          cfg.step_size = c.step_sizes[0];
          return cfg;
        }(), s.calibration.iterations, s.calibration.runs) == c.achieved_drop_db[0]);
}

TEST_CASE("calibrated step sizes feed the experiment") {
  ExperimentSpec s = small_spec();
  s.solvers[0].calibrate_step = true;
  s.solvers[1].calibrate_step = true;
  s.calibration.target_drop_db = 3.0;
  const ExperimentResult r = run_experiment(s);
  CHECK_FALSE(r.spec.solvers[0].calibrate_step);
  CHECK(r.spec.solvers[0].config.step_size > 0.0);
}

TEST_CASE("bench table") {
  const auto rows = bench_iteration_cost({81}, 20, 1);
  CHECK(rows.size() == 3);
  CHECK(rows[0].n_nodes == 81);
  CHECK(rows[0].median_step_seconds > 0.0);
  CHECK_THROWS_AS(bench_iteration_cost({}, 20, 1), ValidationError);
  CHECK_THROWS_AS(bench_graph(100, 1), ValidationError);
  CHECK(bench_graph(162, 1).n_nodes() == 162);
  const fs::path p = fs::temp_directory_path() / "gcgsr_bench.csv";
  write_bench_csv(p, rows);
  CHECK(slurp(p).rfind("n_nodes,algorithm,median_step_seconds,steps\n", 0) == 0);
  fs::remove(p);
}

TEST_CASE("format_number round trips") {
  for (double v : {0.1, -46.1243, 1e-300, 123456789.123, -0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}
