#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcgsr/graph.hpp"

namespace gcgsr {

struct SensorRecord {
  int sensor_id = 0;
  double x = 0.0;  // metres
  double y = 0.0;
  std::optional<double> temperature;  // degrees Celsius; empty when missing
  std::string timestamp;              // empty when the column is absent
};

// Parsed sensor CSV plus one temperature snapshot, one entry per distinct
// sensor id in ascending id order.
struct SensorDataset {
  std::vector<SensorRecord> records;
  std::vector<int> sensor_ids;
  Matrix coordinates;  // n_sensors x 2
  Vector snapshot;
  std::vector<bool> imputed;  // snapshot entry filled from neighbours
  std::string snapshot_timestamp;
  std::size_t skipped_rows = 0;

  std::size_t n_sensors() const { return sensor_ids.size(); }
};

// Reads `sensor_id,x,y,temperature[,timestamp]` with a header row. Rows that
// fail to parse are skipped and counted; an empty or NaN temperature marks a
// missing reading. The snapshot uses `timestamp` (first one in the file when
// absent); sensors without a reading there get the mean of their
// `impute_neighbors` nearest sensors that have one.
SensorDataset load_sensor_csv(const std::filesystem::path& path,
                              const std::optional<std::string>& timestamp = std::nullopt,
                              std::size_t impute_neighbors = 5);

// Mean distance from each sensor to its k nearest neighbours.
double mean_knn_distance(const Matrix& coordinates, std::size_t k);

// W_ij = exp(-d_ij^2 / width^2) when j is among i's k nearest neighbours or
// vice versa. width <= 0 selects mean_knn_distance.
GraphModel build_sensor_graph(const SensorDataset& ds, std::size_t k_neighbors,
                              double width = 0.0);
GraphModel build_knn_graph(const Matrix& coordinates, std::size_t k_neighbors,
                           double width = 0.0);

void write_sensor_csv(const std::filesystem::path& path,
                      const std::vector<SensorRecord>& records);

}  // namespace gcgsr
