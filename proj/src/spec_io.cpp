// JSON reading and writing of ExperimentSpec.
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gcgsr/errors.hpp"
#include "gcgsr/experiment.hpp"

namespace gcgsr {

using nlohmann::json;

namespace {

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty()) return p;
  const std::filesystem::path path(p);
  if (path.is_absolute()) return p;
  return (base / path).lexically_normal().string();
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return {};
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) {
      throw ValidationError("seed_matrix rows differ in length", r);
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

SolverSpec solver_from_json(const json& j) {
  SolverSpec s;
  s.config.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  s.name = get_or<std::string>(j, "name", to_string(s.config.algorithm));
  const json& step = j.contains("step_size") ? j.at("step_size") : json("calibrate");
  if (step.is_string()) {
    if (step.get<std::string>() != "calibrate") {
      throw ValidationError("step_size must be a number or \"calibrate\"");
    }
    s.calibrate_step = true;
  } else {
    s.config.step_size = step.get<double>();
  }
  s.config.gamma = get_or(j, "gamma", s.config.gamma);
  s.config.alpha = get_or(j, "alpha", s.config.alpha);
  s.config.beta = get_or(j, "beta", s.config.beta);
  s.config.stop_tol = get_or(j, "stop_tol", s.config.stop_tol);
  s.config.lmp_p = get_or(j, "lmp_p", s.config.lmp_p);
  s.config.divergence_limit = get_or(j, "divergence_limit", s.config.divergence_limit);
  if (j.contains("learned") && !j.at("learned").is_null()) {
    const json& l = j.at("learned");
    LearnedWidth lw;
    if (l.is_object()) {
      lw.d0 = get_or(l, "d0", lw.d0);
      lw.a0 = get_or(l, "a0", lw.a0);
      lw.initial_beta = get_or(l, "initial_beta", lw.initial_beta);
      s.config.learned = lw;
    } else if (l.get<bool>()) {
      s.config.learned = lw;
    }
  }
  return s;
}

json solver_to_json(const SolverSpec& s) {
  json j;
  j["name"] = s.name;
  j["algorithm"] = to_string(s.config.algorithm);
  if (s.calibrate_step) {
    j["step_size"] = "calibrate";
  } else {
    j["step_size"] = s.config.step_size;
  }
  j["gamma"] = s.config.gamma;
  j["alpha"] = s.config.alpha;
  j["beta"] = s.config.beta;
  j["stop_tol"] = s.config.stop_tol;
  j["lmp_p"] = s.config.lmp_p;
  j["divergence_limit"] = s.config.divergence_limit;
  if (s.config.learned) {
    j["learned"] = {{"d0", s.config.learned->d0},
                    {"a0", s.config.learned->a0},
                    {"initial_beta", s.config.learned->initial_beta}};
  } else {
    j["learned"] = nullptr;
  }
  return j;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& json_text,
                          const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ValidationError(std::string("spec is not valid JSON: ") + ex.what());
  }
  try {
    ExperimentSpec spec;
    if (j.contains("graph")) {
      const json& g = j.at("graph");
      const auto source = get_or<std::string>(g, "source", "kronecker");
      if (source == "kronecker") {
        spec.graph.source = GraphSource::kronecker;
      } else if (source == "csv") {
        spec.graph.source = GraphSource::csv;
      } else if (source == "sensor") {
        spec.graph.source = GraphSource::sensor;
      } else {
        throw ValidationError("unknown graph source '" + source + "'");
      }
      if (g.contains("seed_matrix")) spec.graph.seed_matrix = matrix_from_json(g.at("seed_matrix"));
      spec.graph.order = get_or(g, "order", spec.graph.order);
      spec.graph.path = resolve_path(get_or<std::string>(g, "path", ""), base_dir);
      spec.graph.k_neighbors = get_or(g, "k_neighbors", spec.graph.k_neighbors);
      spec.graph.width = get_or(g, "width", spec.graph.width);
      if (g.contains("timestamp") && !g.at("timestamp").is_null()) {
        spec.graph.timestamp = g.at("timestamp").get<std::string>();
      }
    }
    if (j.contains("signal")) {
      const json& s = j.at("signal");
      const auto source = get_or<std::string>(s, "source", "bandlimited");
      if (source == "bandlimited") {
        spec.signal.source = SignalSource::bandlimited;
      } else if (source == "snapshot") {
        spec.signal.source = SignalSource::snapshot;
      } else {
        throw ValidationError("unknown signal source '" + source + "'");
      }
      spec.signal.bandwidth = get_or(s, "bandwidth", spec.signal.bandwidth);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      const auto model = get_or<std::string>(n, "model", "none");
      if (model == "ggd") {
        spec.noise.model = GgdNoise{get_or(n, "nu", 2.0), get_or(n, "eta", 1.0)};
      } else if (model == "alpha_stable" || model == "alpha-stable") {
        spec.noise.model = AlphaStableNoise{get_or(n, "p", 2.0), get_or(n, "mu", 0.0),
                                            get_or(n, "tau", 1.0)};
      } else if (model == "none") {
        spec.noise.model = std::monostate{};
      } else {
        throw ValidationError("unknown noise model '" + model + "'");
      }
      if (n.contains("snr_db") && !n.at("snr_db").is_null()) {
        spec.noise.snr_db = n.at("snr_db").get<double>();
      }
    }
    const auto obs = get_or<std::string>(j, "observation", "streaming");
    if (obs == "streaming") {
      spec.observation = ObservationMode::streaming;
    } else if (obs == "fixed") {
      spec.observation = ObservationMode::fixed;
    } else {
      throw ValidationError("observation must be \"streaming\" or \"fixed\"");
    }
    spec.resample_mask = get_or(j, "resample_mask", spec.resample_mask);
    spec.mask_size = get_or(j, "mask_size", spec.mask_size);
    spec.iterations = get_or(j, "iterations", spec.iterations);
    spec.monte_carlo_runs = get_or(j, "monte_carlo_runs", spec.monte_carlo_runs);
    spec.base_seed = get_or(j, "base_seed", spec.base_seed);
    spec.workers = get_or(j, "workers", spec.workers);
    const auto agg = get_or<std::string>(j, "aggregation", "linear");
    if (agg == "linear") {
      spec.aggregation = Aggregation::linear;
    } else if (agg == "db") {
      spec.aggregation = Aggregation::db;
    } else {
      throw ValidationError("aggregation must be \"linear\" or \"db\"");
    }
    spec.final_window = get_or(j, "final_window", spec.final_window);
    spec.output_dir = resolve_path(get_or<std::string>(j, "output", spec.output_dir), {});
    if (j.contains("calibration")) {
      const json& c = j.at("calibration");
      if (c.contains("target_drop_db") && !c.at("target_drop_db").is_null()) {
        spec.calibration.target_drop_db = c.at("target_drop_db").get<double>();
      }
      spec.calibration.iterations = get_or(c, "iterations", spec.calibration.iterations);
      spec.calibration.runs = get_or(c, "runs", spec.calibration.runs);
      spec.calibration.tolerance = get_or(c, "tolerance", spec.calibration.tolerance);
    }
    if (j.contains("solvers")) {
      for (const json& s : j.at("solvers")) spec.solvers.push_back(solver_from_json(s));
    }
    return spec;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("spec field has the wrong type: ") + ex.what());
  }
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path());
}

std::string spec_to_json(const ExperimentSpec& spec) {
  json j;
  json g;
  switch (spec.graph.source) {
    case GraphSource::kronecker:
      g["source"] = "kronecker";
      break;
    case GraphSource::csv:
      g["source"] = "csv";
      break;
    case GraphSource::sensor:
      g["source"] = "sensor";
      break;
  }
  if (spec.graph.seed_matrix.size() > 0) g["seed_matrix"] = matrix_to_json(spec.graph.seed_matrix);
  g["order"] = spec.graph.order;
  g["path"] = spec.graph.path;
  g["k_neighbors"] = spec.graph.k_neighbors;
  g["width"] = spec.graph.width;
  g["timestamp"] = spec.graph.timestamp ? json(*spec.graph.timestamp) : json(nullptr);
  j["graph"] = g;

  j["signal"] = {{"source", spec.signal.source == SignalSource::bandlimited ? "bandlimited"
                                                                           : "snapshot"},
                 {"bandwidth", spec.signal.bandwidth}};

  json n;
  if (const auto* m = std::get_if<GgdNoise>(&spec.noise.model)) {
    n = {{"model", "ggd"}, {"nu", m->nu}, {"eta", m->eta}};
  } else if (const auto* m = std::get_if<AlphaStableNoise>(&spec.noise.model)) {
    n = {{"model", "alpha_stable"}, {"p", m->p}, {"mu", m->mu}, {"tau", m->tau}};
  } else {
    n = {{"model", "none"}};
  }
  n["snr_db"] = spec.noise.snr_db ? json(*spec.noise.snr_db) : json(nullptr);
  j["noise"] = n;

  j["observation"] = spec.observation == ObservationMode::streaming ? "streaming" : "fixed";
  j["resample_mask"] = spec.resample_mask;
  j["mask_size"] = spec.mask_size;
  j["iterations"] = spec.iterations;
  j["monte_carlo_runs"] = spec.monte_carlo_runs;
  j["base_seed"] = spec.base_seed;
  j["workers"] = spec.workers;
  j["aggregation"] = spec.aggregation == Aggregation::linear ? "linear" : "db";
  j["final_window"] = spec.final_window;
  j["output"] = spec.output_dir;
  j["calibration"] = {
      {"target_drop_db", spec.calibration.target_drop_db
                             ? json(*spec.calibration.target_drop_db)
                             : json(nullptr)},
      {"iterations", spec.calibration.iterations},
      {"runs", spec.calibration.runs},
      {"tolerance", spec.calibration.tolerance}};
  json solvers = json::array();
  for (const auto& s : spec.solvers) solvers.push_back(solver_to_json(s));
  j["solvers"] = solvers;
  return j.dump(2);
}

}  // namespace gcgsr
