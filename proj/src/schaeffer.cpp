#include "quadflip/schaeffer.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace quadflip::schaeffer {

using maps::alpha;
using maps::Dart;

PhiResult phi_with_tables(const SignedTree& st) {
  const trees::ColouredTree& t = st.tree;
  if (t.r != 3) throw std::invalid_argument("phi: tree must be 3-coloured");
  if (st.eps != 1 && st.eps != -1) throw std::invalid_argument("phi: eps must be +-1");
  const int n = t.edge_count();
  if (n < 1) throw std::invalid_argument("phi: empty tree");
  const auto cs = trees::contour(t);
  const auto lab = trees::labels(t);
  const int m = 2 * n;

  PhiResult res;
  res.corner_vertex.resize(m);
  res.corner_label.resize(m);
  for (int i = 0; i < m; ++i) {
    res.corner_vertex[i] = cs[i].vertex;
    res.corner_label[i] = lab[cs[i].vertex];
  }
  res.min_label = *std::min_element(res.corner_label.begin(), res.corner_label.end());

  // Targets: first corner cyclically after i with label one less.
  res.corner_target.assign(m, -1);
  std::map<int, std::vector<int>> by_label;
  for (int i = 0; i < m; ++i) by_label[res.corner_label[i]].push_back(i);
  for (int i = 0; i < m; ++i) {
    const int want = res.corner_label[i] - 1;
    if (want < res.min_label) continue;  // minimum-label corner: joins delta
    const auto& pos = by_label[want];
    auto it = std::upper_bound(pos.begin(), pos.end(), i);
    res.corner_target[i] = (it == pos.end()) ? pos.front() : *it;
  }

  // Sources per corner, ordered by cyclic forward distance from the corner.
  std::vector<std::vector<int>> sources(m);
  for (int i = 0; i < m; ++i)
    if (res.corner_target[i] >= 0) sources[res.corner_target[i]].push_back(i);
  for (int i = 0; i < m; ++i)
    std::sort(sources[i].begin(), sources[i].end(),
              [&](int a, int b) { return (a - i + m) % m < (b - i + m) % m; });

  // Corners of each tree vertex in contour order.
  std::vector<std::vector<int>> corners_of(t.vertex_count());
  for (int i = 0; i < m; ++i) corners_of[cs[i].vertex].push_back(i);

  // Rotation: around each tree vertex, corners in reverse contour order;
  // within a corner, the issued dart first, then arriving darts by cyclic
  // source order. Around delta, arriving darts in reverse contour order of
  // the minimum-label corners.
  maps::Quadrangulation q;
  q.sigma.assign(2 * m, 0);
  auto wire = [&](const std::vector<Dart>& cyc) {
    for (size_t k = 0; k < cyc.size(); ++k) q.sigma[cyc[k]] = cyc[(k + 1) % cyc.size()];
  };
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (corners_of[v].empty()) continue;
    std::vector<Dart> cyc;
    for (auto it = corners_of[v].rbegin(); it != corners_of[v].rend(); ++it) {
      const int c = *it;
      cyc.push_back(res.out_dart(c));
      for (int s : sources[c]) cyc.push_back(res.in_dart(s));
    }
    wire(cyc);
  }
  {
    std::vector<Dart> dcyc;
    for (int i = m - 1; i >= 0; --i)
      if (res.corner_target[i] < 0) dcyc.push_back(res.in_dart(i));
    if (dcyc.empty()) throw std::logic_error("phi: no minimum-label corner");
    wire(dcyc);
    res.pq.point = dcyc.front();
  }

  q.root = (st.eps == -1) ? res.out_dart(0) : res.in_dart(0);
  res.pq.q = std::move(q);
  maps::validate(res.pq.q);
  return res;
}

maps::PointedQuadrangulation phi(const SignedTree& st) { return phi_with_tables(st).pq; }

SignedTree phi_inverse(const maps::PointedQuadrangulation& pq) {
  const maps::Quadrangulation& q = pq.q;
  maps::validate(q);
  const size_t nd = q.sigma.size();
  const auto dist = maps::distances_from(q, pq.point);

  // One new edge per face, joining its two down-step corners. A corner slot
  // is named by its anchor dart x; the new end sits between x and sigma[x].
  struct End {
    Dart anchor;
    int face;
  };
  std::vector<std::array<Dart, 2>> face_slots;
  std::vector<char> seen(nd, 0);
  for (Dart h0 = 0; h0 < nd; ++h0) {
    if (seen[h0]) continue;
    std::array<Dart, 4> walk;
    Dart g = h0;
    for (int k = 0; k < 4; ++k) {
      walk[k] = g;
      seen[g] = 1;
      g = q.next_in_face(g);
    }
    std::array<Dart, 2> slots;
    int found = 0;
    for (int k = 0; k < 4; ++k) {
      const Dart hk = walk[k], hk1 = walk[(k + 1) % 4];
      if (dist[hk1] == dist[alpha(hk)] - 1) {
        // corner after step hk (at the head of hk) is a down-step corner
        if (found == 2) throw maps::InvalidMap("phi_inverse: more than 2 down-steps");
        slots[found++] = alpha(hk);
      }
    }
    if (found != 2) throw maps::InvalidMap("phi_inverse: face without 2 down-steps");
    face_slots.push_back(slots);
  }

  // Tree adjacency: per map vertex, the new ends anchored there in ccw order.
  std::map<Dart, std::pair<int, int>> anchor_to_edge;  // anchor -> (face, side)
  for (size_t f = 0; f < face_slots.size(); ++f) {
    anchor_to_edge[face_slots[f][0]] = {static_cast<int>(f), 0};
    anchor_to_edge[face_slots[f][1]] = {static_cast<int>(f), 1};
  }

  // Root rule: e_- is the root tail, e_+ the head.
  const Dart root = q.root;
  const int l_minus = dist[root], l_plus = dist[alpha(root)];
  int eps;
  Dart root_slot;  // anchor of the new root end, at the e_+/- vertex
  if (l_minus < l_plus) {
    eps = 1;
    // f_l contains the traversal e_+ -> e_- i.e. the step alpha(root);
    // the corner just before that step has anchor sigma^{-1}(alpha(root)).
    root_slot = q.sigma_inv(alpha(root));
  } else {
    eps = -1;
    root_slot = q.sigma_inv(root);
  }
  if (!anchor_to_edge.count(root_slot))
    throw maps::InvalidMap("phi_inverse: root slot hosts no drawn edge");

  const int base = (eps == 1) ? l_plus : l_minus;

  // Build the plane tree by DFS from the root end; children read clockwise.
  trees::ColouredTree tree;
  tree.r = 3;
  tree.root = 0;
  tree.parent = {-1};
  tree.first_child = {-1};
  tree.next_sibling = {-1};
  tree.colour = {0};

  // ends at each vertex, in ccw anchor order around the vertex
  auto ends_ccw = [&](Dart vertex_dart) {
    std::vector<Dart> anchors;
    Dart g = vertex_dart;
    do {
      if (anchor_to_edge.count(g)) anchors.push_back(g);
      g = q.sigma[g];
    } while (g != vertex_dart);
    return anchors;
  };

  auto other_slot = [&](Dart anchor) {
    auto [f, side] = anchor_to_edge.at(anchor);
    return face_slots[f][1 - side];
  };

  struct Item {
    Dart entry_anchor;  // the end at this vertex leading to the parent
                        // (or the root end at the root vertex)
    int tree_vertex;
    bool is_root;
  };
  std::vector<Item> stack;
  stack.push_back({root_slot, 0, true});
  int labelled_root = dist[root_slot] - base;
  if (labelled_root != 0) throw maps::InvalidMap("phi_inverse: origin label not zero");

  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    std::vector<Dart> anchors = ends_ccw(it.entry_anchor);
    // rotate so the entry anchor is first, then read clockwise
    auto pos = std::find(anchors.begin(), anchors.end(), it.entry_anchor);
    std::rotate(anchors.begin(), pos, anchors.end());
    std::vector<Dart> order;  // child ends in contour order
    if (it.is_root) {
      order.push_back(anchors[0]);
      for (size_t k = anchors.size(); k-- > 1;) order.push_back(anchors[k]);
    } else {
      for (size_t k = anchors.size(); k-- > 1;) order.push_back(anchors[k]);
    }
    int last = -1;
    for (Dart a : order) {
      Dart far = other_slot(a);
      int child = tree.vertex_count();
      tree.parent.push_back(it.tree_vertex);
      tree.first_child.push_back(-1);
      tree.next_sibling.push_back(-1);
      const int inc = dist[far] - dist[a];
      tree.colour.push_back(inc == 1 ? 1 : (inc == 0 ? 2 : 3));
      if (last == -1)
        tree.first_child[it.tree_vertex] = child;
      else
        tree.next_sibling[last] = child;
      last = child;
      stack.push_back({far, child, false});
    }
  }

  if (tree.edge_count() != q.n()) throw maps::InvalidMap("phi_inverse: tree edge count");
  return SignedTree{tree, eps};
}

maps::Quadrangulation phi_origin_pointed(const trees::ColouredTree& t) {
  if (!trees::all_labels_nonnegative(t))
    throw trees::NegativeLabel("phi_origin_pointed: tree has negative labels");
  auto pq = phi(SignedTree{t, 1});
  if (maps::vertex_of(pq.q, pq.q.root) != maps::vertex_of(pq.q, pq.point))
    throw std::logic_error("phi_origin_pointed: point is not the origin");
  return pq.q;
}

trees::ColouredTree phi_origin_pointed_inverse(const maps::Quadrangulation& q) {
  maps::PointedQuadrangulation pq{q, q.root};
  SignedTree st = phi_inverse(pq);
  if (st.eps != 1) throw std::logic_error("phi_origin_pointed_inverse: eps is not +1");
  if (!trees::all_labels_nonnegative(st.tree))
    throw std::logic_error("phi_origin_pointed_inverse: negative label");
  return st.tree;
}

std::vector<std::string> enumerate_pointed_codes(int n) {
  std::vector<std::string> out;
  for (const auto& t : trees::enumerate_trees(n, 3))
    for (int eps : {1, -1}) out.push_back(maps::canonical_code(phi(SignedTree{t, eps})));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> enumerate_rooted_codes(int n) {
  std::vector<std::string> out;
  for (const auto& t : trees::enumerate_trees(n, 3)) {
    if (!trees::all_labels_nonnegative(t)) continue;
    out.push_back(maps::canonical_code(phi_origin_pointed(t)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace quadflip::schaeffer
