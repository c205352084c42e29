#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "facepath/oracle.hpp"
#include "facepath/scenes.hpp"
#include "facepath/solver.hpp"

namespace facepath {

inline constexpr int kReportSchemaVersion = 1;

/// `deterministic` zeroes wall-clock fields so identical runs print identical bytes.
std::string solve_report_json(const SolveResult& r, bool deterministic = false);
std::string oracle_report_json(std::string_view oracle, const OracleEstimate& e, double elapsed_ms,
                               bool deterministic = false);

/// Polyline as a Wavefront OBJ: one `v` per waypoint and a single `l` record.
std::string polyline_obj(const std::vector<Point3>& waypoints);

struct BenchRow {
  std::string scene;
  Algorithm algorithm = Algorithm::Cone;
  double epsilon = 0.0;
  double length = 0.0;  // infinity when unreachable
  double oracle_length = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double elapsed_ms = 0.0;
  bool feasible = false;

  double ratio() const { return length / oracle_length; }
};

struct BenchOptions {
  std::vector<Algorithm> algorithms{Algorithm::GridVG, Algorithm::WVD, Algorithm::Cone};
  std::vector<double> epsilons{0.5, 0.25};
  double epsilon_oracle = 0.02;
  double budget_split = 1.0;
  bool deterministic = false;
};

std::vector<BenchRow> run_bench(const std::vector<Fixture>& fixtures, const BenchOptions& opt);
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Every *.json scene carrying a query block, in file-name order. Throws
/// ValidationError when the directory holds none.
std::vector<Fixture> load_fixture_dir(const std::string& dir);

}  // namespace facepath
