// facepath: approximate shortest paths from a point to an obstacle face.
//
//   facepath solve  --scene S --source x,y,z --face O:T [--epsilon E] [--algorithm grid|wvd|cone]
//   facepath oracle --scene S --source x,y,z --face O:T --oracle fine|unfold|exhaustive|unobstructed
//   facepath bench  (--scenes DIR | --random N --seed K)
//   facepath generate --seed K

#include <cmath>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "facepath/report.hpp"

using namespace facepath;

namespace {

// No answer exists for the query (as opposed to a malformed query).
struct NoAnswer : Error {
  using Error::Error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_number(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw ValidationError(field + ": not a finite number: '" + text + "'");
  return v;
}

Point3 parse_point(const std::string& text, const std::string& field) {
  const auto parts = split_list(text);
  if (parts.size() != 3) throw ValidationError(field + ": expected x,y,z");
  return {parse_number(parts[0], field), parse_number(parts[1], field), parse_number(parts[2], field)};
}

double parse_split(const std::string& text) {
  if (text == "n") return kSplitPerEdge;
  const double v = parse_number(text, "split");
  if (!(v > 0.0)) throw ValidationError("split: must be positive or 'n'");
  return v;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("out: cannot write " + path);
  out << text;
}

struct Query {
  Scene scene;
  Point3 source;
  FaceTarget face;
};

Query load(const std::string& scene_path, const std::string& source, const std::string& face) {
  Scene scene = load_scene_file(scene_path);
  const Point3 s = parse_point(source, "source");
  const FaceTarget f = resolve_face(scene, FaceRef::parse(face));
  for (int o : validate_source(scene, s)) {
    std::cerr << "facepath: warning: obstacle " << o << " is not closed; source containment not checked\n";
  }
  return {std::move(scene), s, f};
}

struct Common {
  std::string scene;
  std::string source;
  std::string face;
  std::string out;
  std::string obj;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scene", c.scene, "Scene JSON file")->required();
  cmd->add_option("--source", c.source, "Source point x,y,z")->required();
  cmd->add_option("--face", c.face, "Target face OBSTACLE:TRIANGLE")->required();
  cmd->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  cmd->add_option("--export-obj", c.obj, "Also write the path as an OBJ polyline");
  cmd->add_flag("--deterministic", c.deterministic, "Zero timing fields");
}

int run(int argc, char** argv) {
  CLI::App app{"Approximate shortest paths from a point to a face among polyhedral obstacles"};
  app.require_subcommand(1);

  Common sc;
  double epsilon = 0.25;
  std::string algorithm = "cone";
  std::string split = "1";
  auto* solve_cmd = app.add_subcommand("solve", "Run one of the approximation algorithms");
  add_common(solve_cmd, sc);
  solve_cmd->add_option("--epsilon", epsilon, "Approximation parameter in (0,1]");
  solve_cmd->add_option("--algorithm", algorithm, "grid, wvd or cone");
  solve_cmd->add_option("--split", split, "Error budget shares, or 'n' for one per edge");

  Common oc;
  std::string oracle = "fine";
  double eps_o = 0.02;
  std::string target;
  std::string edges;
  int max_contacts = 2;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run a reference solver");
  add_common(oracle_cmd, oc);
  oracle_cmd->add_option("--oracle", oracle, "fine, unfold, exhaustive or unobstructed");
  oracle_cmd->add_option("--epsilon-oracle", eps_o, "Precision of the fine oracle");
  oracle_cmd->add_option("--target", target, "Terminal point x,y,z (unfold)");
  oracle_cmd->add_option("--edges", edges, "Edge id sequence i,j,... (unfold)");
  oracle_cmd->add_option("--max-contacts", max_contacts, "Longest edge sequence (exhaustive)");

  std::string scenes_dir;
  int random_count = 0;
  std::uint64_t seed = 1;
  std::string eps_list = "0.5,0.25";
  std::string alg_list = "grid,wvd,cone";
  double bench_eps_o = 0.02;
  std::string bench_split = "1";
  std::string bench_out;
  bool bench_det = false;
  auto* bench_cmd = app.add_subcommand("bench", "Compare algorithms against the fine oracle, CSV output");
  auto* dir_opt = bench_cmd->add_option("--scenes", scenes_dir, "Directory of scene files with query blocks");
  auto* rnd_opt = bench_cmd->add_option("--random", random_count, "Number of generated scenes");
  dir_opt->excludes(rnd_opt);
  bench_cmd->add_option("--seed", seed, "First seed for generated scenes");
  bench_cmd->add_option("--epsilons", eps_list, "Comma-separated epsilon values");
  bench_cmd->add_option("--algorithms", alg_list, "Comma-separated algorithm names");
  bench_cmd->add_option("--epsilon-oracle", bench_eps_o, "Fine oracle precision");
  bench_cmd->add_option("--split", bench_split, "Error budget shares, or 'n'");
  bench_cmd->add_option("--out", bench_out, "Write CSV here instead of stdout");
  bench_cmd->add_flag("--deterministic", bench_det, "Zero the elapsed_ms column");

  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a seeded random scene with its query block");
  gen_cmd->add_option("--seed", gen_seed, "Scene seed");
  gen_cmd->add_option("--out", gen_out, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (solve_cmd->parsed()) {
    const Query q = load(sc.scene, sc.source, sc.face);
    SolveConfig cfg;
    cfg.epsilon = epsilon;
    cfg.algorithm = parse_algorithm(algorithm);
    cfg.budget_split = parse_split(split);
    cfg.validate();
    SolveResult r;
    try {
      r = solve(q.source, q.face, q.scene, cfg);
    } catch (const Unreachable& e) {
      throw NoAnswer(e.what());
    }
    emit(solve_report_json(r, sc.deterministic), sc.out);
    if (!sc.obj.empty()) emit(polyline_obj(r.path.waypoints), sc.obj);
    return 0;
  }

  if (oracle_cmd->parsed()) {
    const Query q = load(oc.scene, oc.source, oc.face);
    const auto t0 = std::chrono::steady_clock::now();
    OracleEstimate est;
    try {
      if (oracle == "fine") {
        if (!(eps_o > 0.0)) throw ValidationError("epsilon-oracle: must be positive");
        est = oracle_fine(q.source, q.face, q.scene, eps_o);
      } else if (oracle == "unobstructed") {
        est = oracle_unobstructed(q.source, q.face, q.scene);
      } else if (oracle == "exhaustive") {
        est = oracle_exhaustive_sequences(q.source, q.face, q.scene, max_contacts);
      } else if (oracle == "unfold") {
        if (target.empty()) throw ValidationError("target: required by the unfold oracle");
        std::vector<int> seq;
        for (const auto& item : split_list(edges)) {
          const double v = parse_number(item, "edges");
          if (v != std::floor(v) || v < 0 || v >= q.scene.edge_count()) {
            throw ValidationError("edges: no edge '" + item + "'");
          }
          seq.push_back(static_cast<int>(v));
        }
        est = oracle_unfold(q.source, parse_point(target, "target"), seq, q.scene);
      } else {
        throw ValidationError("oracle: expected fine, unfold, exhaustive or unobstructed");
      }
    } catch (const Blocked& e) {
      throw NoAnswer(e.what());
    } catch (const Infeasible& e) {
      throw NoAnswer(e.what());
    } catch (const NoFeasibleSequence& e) {
      throw NoAnswer(e.what());
    } catch (const OracleUnreachable& e) {
      throw NoAnswer(e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(oracle_report_json(oracle, est, ms, oc.deterministic), oc.out);
    if (!oc.obj.empty()) emit(polyline_obj(est.witness), oc.obj);
    return 0;
  }

  if (bench_cmd->parsed()) {
    std::vector<Fixture> fixtures;
    if (!scenes_dir.empty()) {
      fixtures = load_fixture_dir(scenes_dir);
    } else if (random_count > 0) {
      for (int i = 0; i < random_count; ++i) fixtures.push_back(random_fixture(seed + static_cast<std::uint64_t>(i)));
    } else {
      throw ValidationError("bench: give --scenes DIR or --random N");
    }
    BenchOptions opt;
    opt.epsilons.clear();
    for (const auto& e : split_list(eps_list)) {
      const double v = parse_number(e, "epsilons");
      if (!(v > 0.0 && v <= 1.0)) throw ValidationError("epsilons: values must lie in (0,1]");
      opt.epsilons.push_back(v);
    }
    opt.algorithms.clear();
    for (const auto& a : split_list(alg_list)) opt.algorithms.push_back(parse_algorithm(a));
    opt.epsilon_oracle = bench_eps_o;
    opt.budget_split = parse_split(bench_split);
    opt.deterministic = bench_det;
    emit(bench_csv(run_bench(fixtures, opt)), bench_out);
    return 0;
  }

  if (gen_cmd->parsed()) {
    const Fixture fx = random_fixture(gen_seed);
    emit(serialize_scene(fx.scene, SceneQuery{fx.source, fx.face}) + "\n", gen_out);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NoAnswer& e) {
    std::cerr << "facepath: unreachable: " << e.what() << '\n';
    return 2;
  } catch (const SourceInsideObstacle& e) {
    std::cerr << "facepath: SourceInsideObstacle: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "facepath: " << e.what() << '\n';
    return 1;
  }
}
