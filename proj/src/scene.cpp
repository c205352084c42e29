#include "facepath/scene.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace facepath {

using json = nlohmann::json;

namespace {

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

Box3 empty_box() {
  const double inf = std::numeric_limits<double>::infinity();
  return {{inf, inf, inf}, {-inf, -inf, -inf}};
}

void grow(Box3& box, const Point3& p) {
  box.lo = {std::min(box.lo.x, p.x), std::min(box.lo.y, p.y), std::min(box.lo.z, p.z)};
  box.hi = {std::max(box.hi.x, p.x), std::max(box.hi.y, p.y), std::max(box.hi.z, p.z)};
}

Box3 segment_box(const Point3& p, const Point3& q) {
  Box3 b = empty_box();
  grow(b, p);
  grow(b, q);
  return b;
}

// Fixed, mutually non-aligned ray directions for parity tests.
const std::array<Vec3, 5>& parity_directions() {
  static const std::array<Vec3, 5> dirs = {
      Vec3{0.5773502691896258, 0.6210534101387239, 0.5300805473164714}.normalized(),
      Vec3{-0.3174603174603175, 0.8571428571428571, 0.4054054054054054}.normalized(),
      Vec3{0.7142857142857143, -0.2437346437346437, 0.6554054054054054}.normalized(),
      Vec3{-0.6346153846153846, -0.5294117647058824, -0.5625000000000000}.normalized(),
      Vec3{0.1234567890123457, 0.1830985915492958, -0.9750000000000000}.normalized(),
  };
  return dirs;
}

}  // namespace

bool Box3::overlaps(const Box3& o, double pad) const {
  return !(hi.x < o.lo.x - pad || lo.x > o.hi.x + pad || hi.y < o.lo.y - pad || lo.y > o.hi.y + pad ||
           hi.z < o.lo.z - pad || lo.z > o.hi.z + pad);
}

FaceRef FaceRef::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw BadFaceRef("face: expected OBSTACLE:TRIANGLE, got '" + std::string(text) + "'");
  FaceRef ref;
  auto parse_int = [&](std::string_view part, int& out) {
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, out);
    if (ec != std::errc() || ptr != end || part.empty() || out < 0) {
      throw BadFaceRef("face: invalid index '" + std::string(part) + "' in '" + std::string(text) + "'");
    }
  };
  parse_int(text.substr(0, colon), ref.obstacle);
  parse_int(text.substr(colon + 1), ref.triangle);
  return ref;
}

std::string FaceRef::str() const { return std::to_string(obstacle) + ":" + std::to_string(triangle); }

Scene Scene::from_obstacles(std::vector<Obstacle> obstacles, double tol_rel) {
  if (obstacles.empty()) throw ValidationError("scene has no obstacles");
  Scene s;
  s.obstacles_ = std::move(obstacles);

  s.bounds_ = empty_box();
  for (std::size_t o = 0; o < s.obstacles_.size(); ++o) {
    const Obstacle& ob = s.obstacles_[o];
    if (ob.vertices.empty() || ob.triangles.empty()) {
      throw ValidationError("obstacle " + std::to_string(o) + " is empty");
    }
    for (const Point3& v : ob.vertices) {
      if (!v.finite()) throw ValidationError("obstacle " + std::to_string(o) + " has a non-finite vertex");
      grow(s.bounds_, v);
    }
  }
  s.diameter_ = (s.bounds_.hi - s.bounds_.lo).norm();
  s.tol_ = TolerancePolicy::for_diameter(s.diameter_, tol_rel);

  std::map<std::pair<int, int>, int> edge_index;
  std::map<std::pair<int, int>, int> edge_use;
  for (std::size_t o = 0; o < s.obstacles_.size(); ++o) {
    const Obstacle& ob = s.obstacles_[o];
    const int offset = static_cast<int>(s.vertices_.size());
    s.vertex_offset_.push_back(offset);
    s.vertices_.insert(s.vertices_.end(), ob.vertices.begin(), ob.vertices.end());

    Box3 ob_box = empty_box();
    for (const Point3& v : ob.vertices) grow(ob_box, v);
    s.obstacle_bounds_.push_back(ob_box);

    const int tri_begin = static_cast<int>(s.triangles_.size());
    const int nv = static_cast<int>(ob.vertices.size());
    edge_use.clear();
    for (std::size_t t = 0; t < ob.triangles.size(); ++t) {
      const auto& idx = ob.triangles[t];
      for (int k : idx) {
        if (k < 0 || k >= nv) {
          throw ValidationError("obstacle " + std::to_string(o) + " triangle " + std::to_string(t) +
                                " has an out-of-range vertex index");
        }
      }
      const Triangle3 tri{ob.vertices[idx[0]], ob.vertices[idx[1]], ob.vertices[idx[2]]};
      if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] || is_degenerate(tri, s.tol_)) {
        throw ValidationError("obstacle " + std::to_string(o) + " triangle " + std::to_string(t) + " is degenerate");
      }
      s.triangles_.push_back(tri);
      s.triangle_owner_.push_back(static_cast<int>(o));
      s.triangle_vertices_.push_back({idx[0] + offset, idx[1] + offset, idx[2] + offset});
      s.packed_.push(tri);
      for (int k = 0; k < 3; ++k) {
        const auto key = ordered(idx[k] + offset, idx[(k + 1) % 3] + offset);
        ++edge_use[key];
        auto [it, fresh] = edge_index.emplace(key, static_cast<int>(s.edges_.size()));
        if (fresh) {
          s.edges_.push_back({static_cast<int>(o), key.first, key.second});
          s.edge_triangles_.push_back({-1, -1});
        }
        auto& inc = s.edge_triangles_[it->second];
        const int tid = static_cast<int>(s.triangles_.size()) - 1;
        if (edge_use[key] == 1) inc[0] = tid;
        else if (edge_use[key] == 2) inc[1] = tid;
        else inc = {-1, -1};
      }
    }
    const int tri_end = static_cast<int>(s.triangles_.size());
    s.obstacle_tri_range_.emplace_back(tri_begin, tri_end);

    const bool closed = std::all_of(edge_use.begin(), edge_use.end(), [](const auto& kv) { return kv.second == 2; });
    s.closed_.push_back(closed);

    bool convex = closed;
    Point3 centroid;
    for (const Point3& v : ob.vertices) centroid += v;
    centroid = centroid / static_cast<double>(ob.vertices.size());
    for (int t = tri_begin; t < tri_end; ++t) {
      Plane3 pl = Plane3::from_triangle(s.triangles_[t]);
      if (convex) {
        const double c = pl.signed_distance(centroid);
        if (std::abs(c) <= s.tol_.abs) {
          convex = false;
        } else {
          if (c > 0.0) pl = {-pl.n, -pl.d};
          for (const Point3& v : ob.vertices) {
            if (pl.signed_distance(v) > s.tol_.abs) {
              convex = false;
              break;
            }
          }
        }
      }
      s.outward_planes_.push_back(pl);
    }
    s.convex_.push_back(convex);
    s.seams_.emplace_back();
  }

  for (std::size_t e = 0; e < s.edges_.size(); ++e) {
    const auto& inc = s.edge_triangles_[e];
    bool flat = false;
    if (inc[1] >= 0) {
      const Vec3 n0 = s.triangles_[inc[0]].area_vector().normalized();
      const Vec3 n1 = s.triangles_[inc[1]].area_vector().normalized();
      flat = n0.cross(n1).norm() <= 1e-12;
      const int o = s.edges_[e].obstacle;
      if (!s.closed_[o]) s.seams_[o].push_back(static_cast<int>(e));
    }
    s.edge_flat_.push_back(flat);
  }
  return s;
}

std::optional<int> Scene::find_edge(int a, int b) const {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (ordered(a, b) == ordered(edges_[e].a, edges_[e].b)) return static_cast<int>(e);
  }
  return std::nullopt;
}

int Scene::global_triangle(const FaceRef& ref) const {
  if (ref.obstacle < 0 || ref.obstacle >= obstacle_count()) {
    throw BadFaceRef("face: obstacle index " + std::to_string(ref.obstacle) + " out of range");
  }
  const auto [begin, end] = obstacle_tri_range_[ref.obstacle];
  if (ref.triangle < 0 || ref.triangle >= end - begin) {
    throw BadFaceRef("face: triangle index " + std::to_string(ref.triangle) + " out of range for obstacle " +
                     std::to_string(ref.obstacle));
  }
  return begin + ref.triangle;
}

double Scene::distance_to_obstacle_surface(int obstacle, const Point3& p) const {
  const auto [begin, end] = obstacle_tri_range_[obstacle];
  double best = std::numeric_limits<double>::infinity();
  for (int t = begin; t < end; ++t) best = std::min(best, distance(p, closest_point_on_triangle(p, triangles_[t])));
  return best;
}

bool Scene::point_inside(int obstacle, const Point3& p) const {
  if (!closed_[obstacle]) return false;
  const double tol = tol_.abs;
  const Box3& box = obstacle_bounds_[obstacle];
  if (!box.overlaps(Box3{p, p}, tol)) return false;
  if (distance_to_obstacle_surface(obstacle, p) <= tol) return false;

  if (convex_[obstacle]) {
    const auto [begin, end] = obstacle_tri_range_[obstacle];
    for (int t = begin; t < end; ++t) {
      if (outward_planes_[t].signed_distance(p) >= -tol) return false;
    }
    return true;
  }

  const auto [begin, end] = obstacle_tri_range_[obstacle];
  int parity = 0;
  for (const Vec3& dir : parity_directions()) {
    int hits = 0;
    bool ambiguous = false;
    for (int t = begin; t < end && !ambiguous; ++t) {
      const Plane3 pl = Plane3::from_triangle(triangles_[t]);
      const double denom = pl.n.dot(dir);
      const double dist = pl.signed_distance(p);
      if (std::abs(denom) < 1e-12) {
        if (std::abs(dist) <= tol) ambiguous = true;
        continue;
      }
      const double s = -dist / denom;
      if (s <= 0.0) continue;
      const Point3 x = p + dir * s;
      const auto e = edge_distances(x, triangles_[t]);
      const double lo = std::min({e[0], e[1], e[2]});
      if (lo > tol) {
        ++hits;
      } else if (lo >= -tol) {
        ambiguous = true;
      }
    }
    parity = hits & 1;
    if (!ambiguous) break;
  }
  return parity == 1;
}

bool Scene::interior_hit(int obstacle, const Point3& p, const Point3& q) const {
  const double tol = tol_.abs;
  const auto [begin, end] = obstacle_tri_range_[obstacle];
  if (convex_[obstacle]) {
    // Clip against the inward-shrunk half-spaces; a non-empty remainder means
    // the segment reaches deeper than tol into the solid.
    double lo = 0.0;
    double hi = 1.0;
    for (int t = begin; t < end; ++t) {
      const Plane3& pl = outward_planes_[t];
      const double f0 = pl.signed_distance(p) + tol;
      const double f1 = pl.signed_distance(q) + tol;
      if (f0 > 0.0 && f1 > 0.0) return false;
      if (f0 > 0.0) {
        lo = std::max(lo, f0 / (f0 - f1));
      } else if (f1 > 0.0) {
        hi = std::min(hi, f0 / (f0 - f1));
      }
      if (hi - lo <= 1e-12) return false;
    }
    return hi - lo > 1e-12;
  }

  // Non-convex: split the segment at every surface contact and test the
  // midpoint of each piece.
  std::vector<double> cuts = {0.0, 1.0};
  for (int t = begin; t < end; ++t) {
    const Plane3 pl = Plane3::from_triangle(triangles_[t]);
    const double da = pl.signed_distance(p);
    const double db = pl.signed_distance(q);
    if (std::max(std::abs(da), std::abs(db)) <= tol) continue;
    if (std::min(da, db) > tol || std::max(da, db) < -tol) continue;
    double s;
    if (std::abs(da) <= tol) {
      s = 0.0;
    } else if (std::abs(db) <= tol) {
      s = 1.0;
    } else {
      s = da / (da - db);
    }
    const Point3 x = p + (q - p) * s;
    const auto e = edge_distances(x, triangles_[t]);
    if (std::min({e[0], e[1], e[2]}) >= -tol) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 1e-12) continue;
    const Point3 mid = p + (q - p) * (0.5 * (cuts[i] + cuts[i + 1]));
    if (point_inside(obstacle, mid)) return true;
  }
  return false;
}

// The open segment passes through the relative interior of a shared edge of an
// open surface and its two ends lie in different sectors of the dihedral wedge.
bool Scene::seam_crossing(int obstacle, const Point3& p, const Point3& q) const {
  const double tol = tol_.abs;
  const Vec3 d = q - p;
  for (int e : seams_[obstacle]) {
    const Point3& a = vertices_[edges_[e].a];
    const Point3& b = vertices_[edges_[e].b];
    const Vec3 u = b - a;
    const Vec3 w = a - p;
    // closest points of the two lines
    const double uu = u.dot(u), ud = u.dot(d), dd = d.dot(d);
    const double denom = uu * dd - ud * ud;
    if (denom <= 1e-24 * uu * dd) continue;  // parallel
    const double uw = u.dot(w), dw = d.dot(w);
    const double t = (ud * dw - dd * uw) / denom;   // along the edge, from a
    const double sp = (uu * dw - ud * uw) / denom;  // along pq, from p
    const double len_u = std::sqrt(uu), len_d = std::sqrt(dd);
    if (t * len_u <= tol || (1.0 - t) * len_u <= tol) continue;
    if (sp * len_d <= tol || (1.0 - sp) * len_d <= tol) continue;
    const Point3 xe = a + u * t;
    const Point3 xs = p + d * sp;
    if (distance(xe, xs) > tol) continue;

    // Wedge test in the plane normal to the edge.
    const Vec3 un = u / len_u;
    auto perp = [&](const Vec3& v) { return v - un * v.dot(un); };
    const auto& inc = edge_triangles_[e];
    Vec3 r[2];
    for (int k = 0; k < 2; ++k) {
      const auto& tv = triangle_vertices_[inc[k]];
      int third = tv[0];
      for (int id : tv) {
        if (id != edges_[e].a && id != edges_[e].b) third = id;
      }
      r[k] = perp(vertices_[third] - a);
    }
    const Vec3 dp = perp(d).normalized();
    const double s0 = un.dot(dp.cross(r[0].normalized()));
    const double s1 = un.dot(dp.cross(r[1].normalized()));
    if (std::abs(s0) <= 1e-12 || std::abs(s1) <= 1e-12) continue;  // along a triangle: grazing
    if ((s0 > 0) != (s1 > 0)) return true;
  }
  return false;
}

bool Scene::segment_free(const Point3& p, const Point3& q) const {
  const double tol = tol_.abs;
  const Box3 seg = segment_box(p, q);
  for (int o = 0; o < obstacle_count(); ++o) {
    if (!obstacle_bounds_[o].overlaps(seg, tol)) continue;
    const auto [begin, end] = obstacle_tri_range_[o];
    if (kernels::any_crossing(packed_, begin, end, p, q, tol)) return false;
    if (closed_[o] ? interior_hit(o, p, q) : seam_crossing(o, p, q)) return false;
  }
  return true;
}

// --- file format ---------------------------------------------------------

namespace {

Point3 parse_point(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ParseError(what + ": expected [x,y,z]");
  Point3 p;
  double* out[3] = {&p.x, &p.y, &p.z};
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw ParseError(what + ": coordinates must be numbers");
    *out[k] = j[k].get<double>();
  }
  return p;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene: malformed JSON: ") + e.what());
  }
}

}  // namespace

Scene load_scene(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("obstacles") || !doc["obstacles"].is_array()) {
    throw ParseError("scene: missing \"obstacles\" array");
  }
  std::vector<Obstacle> obstacles;
  for (std::size_t o = 0; o < doc["obstacles"].size(); ++o) {
    const json& jo = doc["obstacles"][o];
    const std::string where = "scene: obstacle " + std::to_string(o);
    if (!jo.is_object() || !jo.contains("vertices") || !jo.contains("triangles") || !jo["vertices"].is_array() ||
        !jo["triangles"].is_array()) {
      throw ParseError(where + ": expected \"vertices\" and \"triangles\" arrays");
    }
    Obstacle ob;
    for (const json& v : jo["vertices"]) ob.vertices.push_back(parse_point(v, where + " vertex"));
    for (const json& t : jo["triangles"]) {
      if (!t.is_array() || t.size() != 3) throw ParseError(where + ": triangle must be [i,j,k]");
      std::array<int, 3> idx{};
      for (int k = 0; k < 3; ++k) {
        if (!t[k].is_number_integer()) throw ParseError(where + ": triangle indices must be integers");
        idx[k] = t[k].get<int>();
      }
      ob.triangles.push_back(idx);
    }
    obstacles.push_back(std::move(ob));
  }
  return Scene::from_obstacles(std::move(obstacles));
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("scene: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scene(buf.str());
}

std::optional<SceneQuery> load_query(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("query")) return std::nullopt;
  const json& q = doc["query"];
  if (!q.is_object() || !q.contains("source") || !q.contains("face") || !q["face"].is_string()) {
    throw ParseError("scene: \"query\" needs \"source\" and \"face\"");
  }
  return SceneQuery{parse_point(q["source"], "query source"), FaceRef::parse(q["face"].get<std::string>())};
}

std::string serialize_scene(const Scene& scene, const std::optional<SceneQuery>& query) {
  json doc;
  doc["obstacles"] = json::array();
  for (const Obstacle& ob : scene.obstacles()) {
    json jo;
    jo["vertices"] = json::array();
    for (const Point3& v : ob.vertices) jo["vertices"].push_back({v.x, v.y, v.z});
    jo["triangles"] = json::array();
    for (const auto& t : ob.triangles) jo["triangles"].push_back({t[0], t[1], t[2]});
    doc["obstacles"].push_back(std::move(jo));
  }
  if (query) {
    doc["query"] = {{"source", {query->source.x, query->source.y, query->source.z}}, {"face", query->face.str()}};
  }
  return doc.dump(1);
}

FaceTarget resolve_face(const Scene& scene, const FaceRef& ref) {
  FaceTarget f;
  f.ref = ref;
  f.triangle_id = scene.global_triangle(ref);
  f.triangle = scene.triangle(f.triangle_id);
  f.plane = Plane3::from_triangle(f.triangle);
  const auto& idx = scene.obstacles()[ref.obstacle].triangles[ref.triangle];
  const int offset = scene.vertex_offset(ref.obstacle);
  for (int k = 0; k < 3; ++k) {
    const auto e = scene.find_edge(idx[k] + offset, idx[(k + 1) % 3] + offset);
    f.edges[k] = e.value_or(-1);
  }
  return f;
}

std::vector<int> validate_source(const Scene& scene, const Point3& s) {
  if (!s.finite()) throw ValidationError("source: coordinates must be finite");
  std::vector<int> unchecked;
  for (int o = 0; o < scene.obstacle_count(); ++o) {
    if (!scene.obstacle_closed(o)) {
      unchecked.push_back(o);
      continue;
    }
    if (scene.point_inside(o, s)) {
      throw SourceInsideObstacle("source lies inside obstacle " + std::to_string(o));
    }
  }
  return unchecked;
}

}  // namespace facepath
