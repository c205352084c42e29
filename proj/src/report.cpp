#include "facepath/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace facepath {

namespace {

using nlohmann::ordered_json;

ordered_json point_json(const Point3& p) { return ordered_json::array({p.x, p.y, p.z}); }

ordered_json waypoints_json(const std::vector<Point3>& pts) {
  ordered_json a = ordered_json::array();
  for (const Point3& p : pts) a.push_back(point_json(p));
  return a;
}

std::string num(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string solve_report_json(const SolveResult& r, bool deterministic) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["algorithm"] = std::string(algorithm_name(r.algorithm));
  j["epsilon"] = r.epsilon;
  j["length"] = r.path.length;
  j["waypoints"] = waypoints_json(r.path.waypoints);
  j["bounds"] = {{"B", r.bounds.lower}, {"D", r.bounds.upper}, {"h", point_json(r.bounds.anchor)}};
  j["stats"] = {{"nodes", r.stats.nodes},
                {"edges", r.stats.edges},
                {"visibility_tests", r.stats.visibility_tests},
                {"elapsed_ms", deterministic ? 0.0 : r.stats.elapsed_ms},
                {"edge_nodes", r.stats.edge_nodes},
                {"face_nodes", r.stats.face_nodes},
                {"cone_axes", r.stats.cone_axes}};
  j["direct"] = r.direct;
  j["feasible"] = r.feasible;
  return j.dump(2) + "\n";
}

std::string oracle_report_json(std::string_view oracle, const OracleEstimate& e, double elapsed_ms,
                               bool deterministic) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["oracle"] = std::string(oracle);
  j["kind"] = e.kind == OracleKind::Exact ? "exact" : "upper_bound";
  if (e.kind == OracleKind::UpperBound) j["epsilon_oracle"] = e.epsilon_o;
  j["length"] = e.length;
  j["waypoints"] = waypoints_json(e.witness);
  j["stats"] = {{"elapsed_ms", deterministic ? 0.0 : elapsed_ms}};
  return j.dump(2) + "\n";
}

std::string polyline_obj(const std::vector<Point3>& waypoints) {
  std::ostringstream out;
  out << "# facepath polyline\n";
  for (const Point3& p : waypoints) out << "v " << num(p.x) << ' ' << num(p.y) << ' ' << num(p.z) << '\n';
  if (waypoints.size() >= 2) {
    out << 'l';
    for (std::size_t i = 1; i <= waypoints.size(); ++i) out << ' ' << i;
    out << '\n';
  }
  return out.str();
}

std::vector<BenchRow> run_bench(const std::vector<Fixture>& fixtures, const BenchOptions& opt) {
  std::vector<BenchRow> rows;
  for (const Fixture& fx : fixtures) {
    const FaceTarget face = resolve_face(fx.scene, fx.face);
    double oracle_len = std::numeric_limits<double>::infinity();
    try {
      oracle_len = oracle_fine(fx.source, face, fx.scene, opt.epsilon_oracle).length;
    } catch (const OracleUnreachable&) {
    }
    for (double eps : opt.epsilons) {
      for (Algorithm alg : opt.algorithms) {
        SolveConfig cfg;
        cfg.epsilon = eps;
        cfg.algorithm = alg;
        cfg.budget_split = opt.budget_split;
        BenchRow row;
        row.scene = fx.name;
        row.algorithm = alg;
        row.epsilon = eps;
        row.oracle_length = oracle_len;
        try {
          const SolveResult r = solve(fx.source, face, fx.scene, cfg);
          row.length = r.path.length;
          row.nodes = r.stats.nodes;
          row.edges = r.stats.edges;
          row.elapsed_ms = opt.deterministic ? 0.0 : r.stats.elapsed_ms;
          row.feasible = r.feasible;
        } catch (const Unreachable&) {
          row.length = std::numeric_limits<double>::infinity();
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "scene,algorithm,epsilon,length,oracle_length,ratio,nodes,edges,elapsed_ms\n";
  for (const BenchRow& r : rows) {
    out << r.scene << ',' << algorithm_name(r.algorithm) << ',' << num(r.epsilon) << ',' << num(r.length) << ','
        << num(r.oracle_length) << ',' << num(r.ratio()) << ',' << r.nodes << ',' << r.edges << ','
        << num(r.elapsed_ms) << '\n';
  }
  return out.str();
}

std::vector<Fixture> load_fixture_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ValidationError("scenes: not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Fixture> out;
  for (const fs::path& p : files) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto query = load_query(text);
    if (!query) continue;
    out.push_back({p.stem().string(), load_scene(text), query->source, query->face, std::nullopt});
  }
  if (out.empty()) throw ValidationError("scenes: no scene file with a query block in " + dir);
  return out;
}

}  // namespace facepath
