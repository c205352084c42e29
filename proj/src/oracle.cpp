#include "facepath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace facepath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double face_distance(const Point3& p, const FaceTarget& face) {
  return distance(p, closest_point_on_triangle(p, face.triangle));
}

// argmin over [lo, hi] of a unimodal function.
double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  const double m = 0.5 * (a + b);
  // Endpoints win when the minimum sits on the boundary.
  double best = m, fbest = f(m);
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx < fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

struct EdgeLine {
  Point3 origin;  // the beta = 0 end
  Vec3 dir;       // unit, towards the beta = 1 end
  double length;

  Point3 at(double alpha) const { return origin + dir * alpha; }
};

EdgeLine edge_line(const Scene& scene, int e) {
  const Segment3 seg = scene.edge_segment(e);
  const Vec3 d = seg.a - seg.b;
  const double len = d.norm();
  return {seg.b, d / len, len};
}

// Point on the edge's line minimizing |p x| + |x q|: rotate q about the line
// into the half-plane opposite p, where the minimizer is a straight chord.
double unfold_step(const EdgeLine& line, const Point3& p, const Point3& q) {
  const double ap = (p - line.origin).dot(line.dir);
  const double aq = (q - line.origin).dot(line.dir);
  const double rp = (p - line.at(ap)).norm();
  const double rq = (q - line.at(aq)).norm();
  if (rp + rq <= 0.0) return 0.5 * (ap + aq);
  return ap + (aq - ap) * rp / (rp + rq);
}

bool links_free(const std::vector<Point3>& pts, const Scene& scene) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!scene.segment_free(pts[i - 1], pts[i])) return false;
  }
  return true;
}

double polyline_length(const std::vector<Point3>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

}  // namespace

OracleEstimate oracle_unobstructed(const Point3& s, const FaceTarget& face, const Scene& scene) {
  const Point3 h = closest_point_on_triangle(s, face.triangle);
  if (!scene.segment_free(s, h)) throw Blocked("the source does not see its closest face point");
  return {distance(s, h), OracleKind::Exact, 0.0, {s, h}};
}

OracleEstimate oracle_unfold(const Point3& s, const Point3& t, std::span<const int> edges, const Scene& scene) {
  if (edges.size() > 3) throw Error("unfold oracle takes at most three edges");
  const double tol = scene.tolerance().abs;
  std::vector<EdgeLine> lines;
  for (int e : edges) {
    if (e < 0 || e >= scene.edge_count()) throw Error("edge id out of range");
    lines.push_back(edge_line(scene, e));
  }
  std::vector<double> alpha(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) alpha[i] = 0.5 * lines[i].length;

  auto point = [&](std::size_t k) {  // k = 0 is s, k = n+1 is t
    if (k == 0) return s;
    if (k == lines.size() + 1) return t;
    return lines[k - 1].at(alpha[k - 1]);
  };
  if (lines.size() == 1) {
    alpha[0] = unfold_step(lines[0], s, t);
  } else if (!lines.empty()) {
    // Each step unfolds one edge exactly given its neighbours; the total is
    // convex, so sweeping to a fixed point reaches the joint optimum.
    for (int sweep = 0; sweep < 200000; ++sweep) {
      double moved = 0.0;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const double next = unfold_step(lines[i], point(i), point(i + 2));
        moved = std::max(moved, std::abs(next - alpha[i]));
        alpha[i] = next;
      }
      if (moved <= 1e-14 * scene.diameter()) break;
    }
  }

  std::vector<Point3> pts{s};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (alpha[i] < -tol || alpha[i] > lines[i].length + tol) throw Infeasible("contact point falls off its edge");
    pts.push_back(lines[i].at(std::clamp(alpha[i], 0.0, lines[i].length)));
  }
  pts.push_back(t);
  if (!links_free(pts, scene)) throw Infeasible("an unfolded link is blocked");
  return {polyline_length(pts), OracleKind::Exact, 0.0, pts};
}

OracleEstimate oracle_fine(const Point3& s, const FaceTarget& face, const Scene& scene, double eps_o,
                           const FineOptions& opt) {
  if (!(eps_o > 0.0)) throw Error("oracle precision must be positive");
  const double tol = scene.tolerance().abs;
  const Point3 h = closest_point_on_triangle(s, face.triangle);
  const double lower = distance(s, h);
  if (lower <= tol) return {0.0, OracleKind::UpperBound, eps_o, {s, h}};

  // Nodes: s, every vertex, uniform interior points on every edge. The
  // per-edge division count is a power of two so that a smaller eps_o always
  // refines the node set of a larger one.
  auto divisions = [](double len, double pitch) {
    long k = 1;
    while (static_cast<double>(k) * pitch < len) k *= 2;
    return k;
  };
  auto interior_count = [&](double pitch) {
    std::size_t c = 0;
    for (int e = 0; e < scene.edge_count(); ++e) {
      // Flat interior edges (quad diagonals) are not bends of any shortest path.
      if (!scene.edge_flat(e)) c += static_cast<std::size_t>(divisions(scene.edge_segment(e).length(), pitch) - 1);
    }
    return c;
  };
  double pitch = eps_o * lower / (4.0 * opt.split);
  while (interior_count(pitch) > opt.max_nodes) pitch *= 2.0;
  std::vector<Point3> nodes{s};
  nodes.insert(nodes.end(), scene.vertices().begin(), scene.vertices().end());
  for (int e = 0; e < scene.edge_count(); ++e) {
    if (scene.edge_flat(e)) continue;
    const Segment3 seg = scene.edge_segment(e);
    const long k = divisions(seg.length(), pitch);
    for (long i = 1; i < k; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(k);
      nodes.push_back(seg.a + (seg.b - seg.a) * u);
    }
  }

  // Terminal cost of a node: straight to its nearest face point when that
  // drop is free, else to the nearest visible face sample.
  std::vector<Point3> face_samples;
  auto samples = [&]() -> const std::vector<Point3>& {
    if (!face_samples.empty()) return face_samples;
    const Triangle3& tri = face.triangle;
    double fp = eps_o * lower;
    const double area = tri.area();
    if (area / (fp * fp) > static_cast<double>(opt.max_face_points)) {
      fp = std::sqrt(area / static_cast<double>(opt.max_face_points));
    }
    const Vec3 e1 = tri.v1 - tri.v0;
    const Vec3 e2 = tri.v2 - tri.v0;
    long m = 1;
    while (static_cast<double>(m) * fp < std::max(e1.norm(), e2.norm())) m *= 2;
    for (long i = 0; i <= m; ++i) {
      for (long j = 0; i + j <= m; ++j) {
        const double a = static_cast<double>(i) / static_cast<double>(m);
        const double b = static_cast<double>(j) / static_cast<double>(m);
        face_samples.push_back(tri.v0 + e1 * a + e2 * b);
      }
    }
    return face_samples;
  };
  auto terminal = [&](const Point3& p, Point3& end) {
    const Point3 cp = closest_point_on_triangle(p, face.triangle);
    end = cp;
    if (distance(p, cp) <= tol || scene.segment_free(p, cp)) return distance(p, cp);
    const auto& fs = samples();
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) order.emplace_back(distance(p, fs[i]), i);
    std::sort(order.begin(), order.end());
    for (const auto& [d, i] : order) {
      if (scene.segment_free(p, fs[i])) {
        end = fs[i];
        return d;
      }
    }
    return kInf;
  };

  const std::size_t n = nodes.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1);
  std::vector<std::uint8_t> done(n, 0);
  dist[0] = 0.0;
  double sink = kInf;
  int sink_from = -1;
  Point3 sink_end;
  while (true) {
    int u = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && (u < 0 || dist[v] < dist[u])) u = static_cast<int>(v);
    }
    if (u < 0 || !(dist[u] < sink)) break;
    done[u] = 1;
    Point3 end;
    const double c = terminal(nodes[u], end);
    if (dist[u] + c < sink) {
      sink = dist[u] + c;
      sink_from = u;
      sink_end = end;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double nd = dist[u] + distance(nodes[u], nodes[v]);
      if (!(nd < dist[v]) || !(nd < sink)) continue;
      if (!scene.segment_free(nodes[u], nodes[v])) continue;
      dist[v] = nd;
      pred[v] = u;
    }
  }
  if (sink_from < 0) throw OracleUnreachable("the face is not reachable from the source");
  std::vector<Point3> witness{sink_end};
  for (int v = sink_from; v >= 0; v = pred[v]) witness.push_back(nodes[v]);
  std::reverse(witness.begin(), witness.end());
  return {sink, OracleKind::UpperBound, eps_o, witness};
}

OracleEstimate oracle_exhaustive_sequences(const Point3& s, const FaceTarget& face, const Scene& scene,
                                           int max_seq_len) {
  double best = kInf;
  std::vector<Point3> witness;
  auto consider = [&](std::vector<Point3> pts) {
    const double len = polyline_length(pts);
    if (len < best && links_free(pts, scene)) {
      best = len;
      witness = std::move(pts);
    }
  };

  consider({s, closest_point_on_triangle(s, face.triangle)});

  std::vector<EdgeLine> lines;
  for (int e = 0; e < scene.edge_count(); ++e) {
    if (!scene.edge_flat(e)) lines.push_back(edge_line(scene, e));
  }
  constexpr double kRelTol = 1e-10;

  if (max_seq_len >= 1) {
    for (const EdgeLine& l : lines) {
      auto g = [&](double a) {
        const Point3 x = l.at(a);
        return distance(s, x) + face_distance(x, face);
      };
      const Point3 x = l.at(golden_section(g, 0.0, l.length, kRelTol * l.length));
      consider({s, x, closest_point_on_triangle(x, face.triangle)});
    }
  }

  if (max_seq_len >= 2) {
    constexpr int kSeed = 64;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = 0; j < lines.size(); ++j) {
        if (i == j) continue;
        const EdgeLine& l1 = lines[i];
        const EdgeLine& l2 = lines[j];
        auto g = [&](double a1, double a2) {
          const Point3 x1 = l1.at(a1);
          const Point3 x2 = l2.at(a2);
          return distance(s, x1) + distance(x1, x2) + face_distance(x2, face);
        };
        double a1 = 0.0, a2 = 0.0, gbest = kInf;
        for (int p = 0; p < kSeed; ++p) {
          for (int q = 0; q < kSeed; ++q) {
            const double c1 = l1.length * p / (kSeed - 1);
            const double c2 = l2.length * q / (kSeed - 1);
            const double v = g(c1, c2);
            if (v < gbest) {
              gbest = v;
              a1 = c1;
              a2 = c2;
            }
          }
        }
        // g is 2-Lipschitz in each arc length, so the seed bounds the pair's minimum.
        const double slack = (l1.length + l2.length) / (kSeed - 1);
        if (gbest - slack > best) continue;
        for (int sweep = 0; sweep < 200; ++sweep) {
          const double before = gbest;
          a1 = golden_section([&](double a) { return g(a, a2); }, 0.0, l1.length, kRelTol * l1.length);
          a2 = golden_section([&](double a) { return g(a1, a); }, 0.0, l2.length, kRelTol * l2.length);
          gbest = g(a1, a2);
          if (before - gbest <= 1e-15 * before) break;
        }
        const Point3 x1 = l1.at(a1);
        const Point3 x2 = l2.at(a2);
        consider({s, x1, x2, closest_point_on_triangle(x2, face.triangle)});
      }
    }
  }

  if (witness.empty()) throw NoFeasibleSequence("no feasible path with the allowed contact count");
  return {best, OracleKind::Exact, 0.0, witness};
}

}  // namespace facepath
