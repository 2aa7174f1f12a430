#pragma once

#include "quadflip/maps.hpp"
#include "quadflip/trees.hpp"

namespace quadflip::schaeffer {

struct SignedTree {
  trees::ColouredTree tree;  // r = 3
  int eps;                   // +1 or -1
};

/// phi(t, eps) together with the corner bookkeeping used to address map
/// edges from tree corners: edge i is drawn from contour corner i (0-based,
/// c_{i+1} in 1-based terms); its darts are 2i (at the corner's vertex) and
/// 2i+1 (at the target corner's vertex, or at delta).
struct PhiResult {
  maps::PointedQuadrangulation pq;
  std::vector<int> corner_vertex;   // tree vertex of corner i
  std::vector<int> corner_label;    // label of that vertex
  std::vector<int> corner_target;   // target corner index, or -1 for delta
  int min_label = 0;

  maps::Dart out_dart(int corner) const { return 2 * static_cast<maps::Dart>(corner); }
  maps::Dart in_dart(int corner) const { return 2 * static_cast<maps::Dart>(corner) + 1; }
};

PhiResult phi_with_tables(const SignedTree& st);
maps::PointedQuadrangulation phi(const SignedTree& st);

SignedTree phi_inverse(const maps::PointedQuadrangulation& pq);

/// The pointed-at-origin variant: a bijection between nonnegative labelled
/// trees and rooted quadrangulations.
maps::Quadrangulation phi_origin_pointed(const trees::ColouredTree& t);
trees::ColouredTree phi_origin_pointed_inverse(const maps::Quadrangulation& q);

/// All of Q^bullet_n as canonical codes (sorted, deduplicated — the
/// construction is bijective so duplicates are a defect).
std::vector<std::string> enumerate_pointed_codes(int n);
/// All of Q_n as canonical codes via the origin-pointed bijection.
std::vector<std::string> enumerate_rooted_codes(int n);

}  // namespace quadflip::schaeffer
