#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "facepath/scene.hpp"

// Reference solvers. They rely on geom and scene only, so they stay
// independent of the Steiner, graph and solver code they are used to check.

namespace facepath {

class Blocked : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NoFeasibleSequence : public Error {
 public:
  using Error::Error;
};

class OracleUnreachable : public Error {
 public:
  using Error::Error;
};

enum class OracleKind { Exact, UpperBound };

struct OracleEstimate {
  double length = 0.0;
  OracleKind kind = OracleKind::Exact;
  double epsilon_o = 0.0;  // UpperBound only
  std::vector<Point3> witness;
};

/// |sh| when s sees the closest face point h; throws Blocked otherwise.
OracleEstimate oracle_unobstructed(const Point3& s, const FaceTarget& face, const Scene& scene);

/// Locally shortest path s -> t touching the given edges in order (at most
/// three). Throws Infeasible when a contact falls off its edge or a link is
/// blocked.
OracleEstimate oracle_unfold(const Point3& s, const Point3& t, std::span<const int> edges, const Scene& scene);

struct FineOptions {
  double split = 1.0;             // edge pitch is eps_o * |sh| / (4 * split)
  std::size_t max_nodes = 6000;   // caps the edge subdivision by coarsening the pitch
  std::size_t max_face_points = 4000;
};

/// Dense uniform subdivision of every edge with complete visibility; an upper
/// bound on the optimum.
OracleEstimate oracle_fine(const Point3& s, const FaceTarget& face, const Scene& scene, double eps_o,
                           const FineOptions& opt = {});

/// Minimum over direct, single-edge and (for max_seq_len >= 2) ordered
/// two-edge contact sequences.
OracleEstimate oracle_exhaustive_sequences(const Point3& s, const FaceTarget& face, const Scene& scene,
                                           int max_seq_len = 2);

}  // namespace facepath
