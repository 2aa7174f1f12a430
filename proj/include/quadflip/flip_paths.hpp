#pragma once

#include <map>
#include <string>
#include <vector>

#include "quadflip/maps.hpp"
#include "quadflip/schaeffer.hpp"
#include "quadflip/trees.hpp"

namespace quadflip::flip_paths {

/// A validated flip sequence between pointed quadrangulations.
struct FlipPath {
  maps::PointedQuadrangulation start;
  std::vector<maps::FlipMove> moves;
  int length() const { return static_cast<int>(moves.size()); }
};

/// Replays the path; with validate_each set every intermediate state is
/// fully validated.
maps::PointedQuadrangulation replay(const FlipPath& path, bool validate_each = false);

/// Move-wise reverse with signs negated; starts at the original endpoint.
FlipPath reverse_path(const FlipPath& path);

/// Root reversal: from phi(t, +1) to phi(t, -1); length 3, or 5 when the
/// root is a double edge.
FlipPath path_root_reversal(const trees::ColouredTree& t);

/// Rotates the root of pq onto the edge clockwise-after it around the
/// endpoint anchored by around_dart (a dart of the root edge); 5 flips.
FlipPath path_root_rotation(const maps::PointedQuadrangulation& pq, maps::Dart around_dart);

/// From phi(t, eps) to phi(t^{v,x}, eps) where x is a colour in 1..3.
FlipPath path_colour_change(const trees::ColouredTree& t, int v, int x, int eps);

/// From phi(t, eps) to phi(t^{v,dir}, eps).
FlipPath path_leaf_translation(const trees::ColouredTree& t, int v, trees::Dir dir, int eps);

/// Occurrence counts of (state, edge, sign) triples across the path
/// families at size n, keyed by canonical code plus canonical edge index.
struct CongestionAudit {
  std::map<std::string, long long> root_reversal;
  std::map<std::string, long long> colour_change;
  std::map<std::string, long long> translation;
  long long max_root_reversal = 0;
  long long max_colour_change = 0;
  long long max_translation = 0;
  long long paths = 0;
};
CongestionAudit audit_flip_congestion(int n);

/// Key used by the audit: canonical code of the pointed state, canonical
/// edge index of the flipped edge, and the sign.
std::string occurrence_key(const maps::PointedQuadrangulation& pq, std::uint32_t edge, int sign);

}  // namespace quadflip::flip_paths
