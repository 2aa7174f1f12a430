#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadflip::maps {

struct InvalidEdge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidMap : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MalformedCode : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateRotation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Dart = std::uint32_t;

inline Dart alpha(Dart h) { return h ^ 1u; }
inline std::uint32_t edge_of(Dart h) { return h >> 1; }

/// Rooted quadrangulation of the sphere as a rotation system: sigma is the
/// counterclockwise successor around the origin vertex of each dart, alpha
/// is the fixed xor pairing, faces are the orbits of sigma∘alpha (read in
/// the clockwise face-contour direction). n faces, 2n edges, 4n darts.
struct Quadrangulation {
  std::vector<Dart> sigma;
  Dart root = 0;

  int n() const { return static_cast<int>(sigma.size()) / 4; }
  Dart next_in_face(Dart h) const { return sigma[alpha(h)]; }
  Dart sigma_inv(Dart h) const;

  bool operator==(const Quadrangulation& o) const { return sigma == o.sigma && root == o.root; }
};

/// point is a dart anchored at the distinguished vertex.
struct PointedQuadrangulation {
  Quadrangulation q;
  Dart point = 0;
};

struct FlipMove {
  std::uint32_t edge;
  int sign;  // +1 clockwise, -1 counterclockwise
};

void validate(const Quadrangulation& q);

/// True if both sides of edge e lie on the same face (e is a double edge
/// of a degenerate face).
bool is_double_edge(const Quadrangulation& q, std::uint32_t e);

Quadrangulation flip(const Quadrangulation& q, FlipMove m);
PointedQuadrangulation flip_pointed(const PointedQuadrangulation& pq, FlipMove m);

/// The quadrangulation with n degenerate faces whose origin has degree 2n;
/// root oriented from the origin to the degree-n vertex.
Quadrangulation make_q0(int n);
PointedQuadrangulation make_q0_pointed(int n);

/// Vertices as orbits of sigma. vertex_of gives the smallest dart of the
/// orbit through h, a stable representative for a fixed map.
Dart vertex_of(const Quadrangulation& q, Dart h);
std::vector<Dart> vertex_reps(const Quadrangulation& q);
int degree(const Quadrangulation& q, Dart h);
int face_count(const Quadrangulation& q);

/// BFS distances from the vertex of h over the underlying multigraph.
std::vector<int> distances_from(const Quadrangulation& q, Dart h);
int graph_distance(const Quadrangulation& q, Dart v, Dart w);
int radius(const Quadrangulation& q);
int ball_size(const Quadrangulation& q, int rad);
/// Number of vertices at distance >= radius-1 from the origin.
int far_set_size(const Quadrangulation& q);

/// Canonical code: root-anchored traversal renumbering darts so that alpha
/// stays the xor pairing; equal codes iff isomorphic rooted (pointed) maps.
/// Text form "QM v1 n=<n> root=<h> point=<v|-> sigma=<ints>".
std::string canonical_code(const Quadrangulation& q);
std::string canonical_code(const PointedQuadrangulation& pq);

/// Canonical dart renumbering (maps internal dart -> canonical dart).
std::vector<Dart> canonical_dart_map(const Quadrangulation& q);

struct DecodedCode {
  Quadrangulation q;
  std::optional<Dart> point;
};
DecodedCode decode(const std::string& code);

/// Flip sequence that turns q into make_q0(n) (pointed: into the pointed
/// q0 with the distinguished vertex as origin), following the constructive
/// procedure behind irreducibility.
std::vector<FlipMove> flips_to_q0(const Quadrangulation& q);
std::vector<FlipMove> flips_to_q0(const PointedQuadrangulation& pq);

/// Reverses the root-edge orientation in place via flips (3 clockwise
/// flips, or the 5-flip variant when the root is a double edge). Returns
/// the applied moves.
std::vector<FlipMove> root_reversal_moves(const Quadrangulation& q);

}  // namespace quadflip::maps
