#include "gcgsr/sensor_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "gcgsr/errors.hpp"

namespace gcgsr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<int> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool is_missing_token(const std::string& s) {
  if (s.empty()) return true;
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "nan" || lower == "na";
}

std::optional<SensorRecord> parse_row(const std::vector<std::string>& f) {
  if (f.size() != 4 && f.size() != 5) return std::nullopt;
  SensorRecord r;
  const auto id = parse_int(f[0]);
  const auto x = parse_double(f[1]);
  const auto y = parse_double(f[2]);
  if (!id || !x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
    return std::nullopt;
  }
  r.sensor_id = *id;
  r.x = *x;
  r.y = *y;
  if (!is_missing_token(f[3])) {
    const auto t = parse_double(f[3]);
    if (!t) return std::nullopt;
    if (std::isfinite(*t)) r.temperature = *t;
  }
  if (f.size() == 5) r.timestamp = f[4];
  return r;
}

// Indices of the k nearest other rows of `coords` to row i (ties by index).
std::vector<Eigen::Index> nearest(const Matrix& coords, Eigen::Index i,
                                  std::size_t k,
                                  const std::vector<bool>* eligible = nullptr) {
  std::vector<std::pair<double, Eigen::Index>> d;
  d.reserve(static_cast<std::size_t>(coords.rows()));
  for (Eigen::Index j = 0; j < coords.rows(); ++j) {
    if (j == i) continue;
    if (eligible && !(*eligible)[static_cast<std::size_t>(j)]) continue;
    d.emplace_back((coords.row(i) - coords.row(j)).norm(), j);
  }
  const std::size_t take = std::min(k, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(take),
                    d.end());
  std::vector<Eigen::Index> out;
  for (std::size_t t = 0; t < take; ++t) out.push_back(d[t].second);
  return out;
}

}  // namespace

SensorDataset load_sensor_csv(const std::filesystem::path& path,
                              const std::optional<std::string>& timestamp,
                              std::size_t impute_neighbors) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  SensorDataset ds;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (first) {
      first = false;
      if (!fields.empty() && !parse_int(fields[0])) continue;  // header
    }
    if (auto r = parse_row(fields)) {
      ds.records.push_back(std::move(*r));
    } else {
      ++ds.skipped_rows;
    }
  }
  if (ds.records.empty()) {
    throw ValidationError(path.string() + ": no valid sensor rows");
  }

  ds.snapshot_timestamp = timestamp.value_or(ds.records.front().timestamp);

  std::map<int, Eigen::Index> slot;
  for (const auto& r : ds.records) slot.emplace(r.sensor_id, 0);
  Eigen::Index next = 0;
  for (auto& [id, s] : slot) {
    s = next++;
    ds.sensor_ids.push_back(id);
  }
  const Eigen::Index n = next;
  ds.coordinates = Matrix::Zero(n, 2);
  ds.snapshot = Vector::Zero(n);
  std::vector<bool> have_coords(static_cast<std::size_t>(n), false);
  std::vector<bool> have_reading(static_cast<std::size_t>(n), false);
  for (const auto& r : ds.records) {
    const Eigen::Index s = slot.at(r.sensor_id);
    const auto su = static_cast<std::size_t>(s);
    if (!have_coords[su]) {
      ds.coordinates(s, 0) = r.x;
      ds.coordinates(s, 1) = r.y;
      have_coords[su] = true;
    }
    if (!have_reading[su] && r.temperature && r.timestamp == ds.snapshot_timestamp) {
      ds.snapshot[s] = *r.temperature;
      have_reading[su] = true;
    }
  }
  if (std::none_of(have_reading.begin(), have_reading.end(),
                   [](bool b) { return b; })) {
    throw ValidationError(path.string() + ": no temperature readings at snapshot '" +
                          ds.snapshot_timestamp + "'");
  }

  ds.imputed.assign(static_cast<std::size_t>(n), false);
  for (Eigen::Index s = 0; s < n; ++s) {
    if (have_reading[static_cast<std::size_t>(s)]) continue;
    const auto nb = nearest(ds.coordinates, s, std::max<std::size_t>(1, impute_neighbors),
                            &have_reading);
    double acc = 0.0;
    for (Eigen::Index j : nb) acc += ds.snapshot[j];
    ds.snapshot[s] = acc / static_cast<double>(nb.size());
    ds.imputed[static_cast<std::size_t>(s)] = true;
  }
  return ds;
}

double mean_knn_distance(const Matrix& coordinates, std::size_t k) {
  double acc = 0.0;
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < coordinates.rows(); ++i) {
    for (Eigen::Index j : nearest(coordinates, i, k)) {
      acc += (coordinates.row(i) - coordinates.row(j)).norm();
      ++count;
    }
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

GraphModel build_knn_graph(const Matrix& coordinates, std::size_t k_neighbors,
                           double width) {
  const auto n = static_cast<std::size_t>(coordinates.rows());
  if (k_neighbors < 1 || k_neighbors >= n) {
    throw ValidationError("k_neighbors must lie in [1, " + std::to_string(n - 1) +
                          "], got " + std::to_string(k_neighbors));
  }
  if (width <= 0.0) width = mean_knn_distance(coordinates, k_neighbors);
  if (!(width > 0.0)) {
    throw ValidationError("kernel width is zero (all sensors coincide?)");
  }
  Matrix w = Matrix::Zero(coordinates.rows(), coordinates.rows());
  for (Eigen::Index i = 0; i < coordinates.rows(); ++i) {
    for (Eigen::Index j : nearest(coordinates, i, k_neighbors)) {
      const double d2 = (coordinates.row(i) - coordinates.row(j)).squaredNorm();
      const double v = std::exp(-d2 / (width * width));
      w(i, j) = std::max(w(i, j), v);
      w(j, i) = std::max(w(j, i), v);
    }
  }
  return build_graph(w);
}

GraphModel build_sensor_graph(const SensorDataset& ds, std::size_t k_neighbors,
                              double width) {
  return build_knn_graph(ds.coordinates, k_neighbors, width);
}

void write_sensor_csv(const std::filesystem::path& path,
                      const std::vector<SensorRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const bool with_ts = std::any_of(records.begin(), records.end(),
                                   [](const SensorRecord& r) { return !r.timestamp.empty(); });
  out << "sensor_id,x,y,temperature" << (with_ts ? ",timestamp" : "") << '\n';
  out << std::setprecision(10);
  for (const auto& r : records) {
    out << r.sensor_id << ',' << r.x << ',' << r.y << ',';
    if (r.temperature) out << *r.temperature;
    if (with_ts) out << ',' << r.timestamp;
    out << '\n';
  }
}

}  // namespace gcgsr
