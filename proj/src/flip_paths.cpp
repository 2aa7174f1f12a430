#include "quadflip/flip_paths.hpp"

#include <algorithm>
#include <cassert>

namespace quadflip::flip_paths {

using maps::alpha;
using maps::Dart;
using maps::edge_of;
using schaeffer::SignedTree;

namespace {

// Fixed orientation choices, validated against the exhaustive endpoint
// checks for the whole family of constructions.
constexpr int kEqualToPlusSign = 1;     // the double-edge flip for '=' -> '+'
constexpr int kTranslateEqualSign = -1;  // 1-flip translation onto an equal label
constexpr int kTranslatePlusSign1 = -1;  // 3-flip translation onto label+1
constexpr int kTranslatePlusSign2 = -1;
constexpr int kTranslatePlusSign3 = -1;

}  // namespace

maps::PointedQuadrangulation replay(const FlipPath& path, bool validate_each) {
  maps::PointedQuadrangulation cur = path.start;
  if (validate_each) maps::validate(cur.q);
  for (const auto& m : path.moves) {
    cur = maps::flip_pointed(cur, m);
    if (validate_each) maps::validate(cur.q);
  }
  return cur;
}

FlipPath reverse_path(const FlipPath& path) {
  FlipPath out;
  out.start = replay(path);
  for (auto it = path.moves.rbegin(); it != path.moves.rend(); ++it)
    out.moves.push_back({it->edge, -it->sign});
  return out;
}

FlipPath path_root_reversal(const trees::ColouredTree& t) {
  FlipPath out;
  out.start = schaeffer::phi(SignedTree{t, 1});
  out.moves = maps::root_reversal_moves(out.start.q);
  auto end = replay(out);
  if (maps::canonical_code(end) != maps::canonical_code(schaeffer::phi(SignedTree{t, -1})))
    throw std::logic_error("path_root_reversal: endpoint mismatch");
  return out;
}

FlipPath path_root_rotation(const maps::PointedQuadrangulation& pq, Dart around_dart) {
  const std::uint32_t e = edge_of(pq.q.root);
  if (edge_of(around_dart) != e)
    throw std::invalid_argument("path_root_rotation: dart not on the root edge");
  const Dart eta_dart = pq.q.sigma_inv(around_dart);
  if (edge_of(eta_dart) == e)
    throw maps::DegenerateRotation("path_root_rotation: no distinct edge after the root");
  const std::uint32_t eta = edge_of(eta_dart);
  FlipPath out;
  out.start = pq;
  out.moves = {{eta, 1}, {e, 1}, {eta, 1}, {e, -1}, {eta, -1}};
  return out;
}

namespace {

// Shared state for building colour-change / translation paths on top of
// the corner tables of phi.
struct Builder {
  schaeffer::PhiResult phi;
  maps::PointedQuadrangulation cur;
  FlipPath path;

  explicit Builder(const SignedTree& st) : phi(schaeffer::phi_with_tables(st)) {
    cur = phi.pq;
    path.start = phi.pq;
  }

  void apply(std::uint32_t edge, int sign) {
    path.moves.push_back({edge, sign});
    cur = maps::flip_pointed(cur, {edge, sign});
  }

  // Counterclockwise flips of the w-incident edges listed by their darts at
  // w, in clockwise order, injecting a root rotation when the root edge
  // comes up. After a rotation the root edge index and the previously
  // flipped edge index have swapped geometric places, so the flip targeting
  // the old root position is issued on the swapped index.
  void peel(const std::vector<Dart>& w_darts) {
    for (size_t j = 0; j < w_darts.size(); ++j) {
      Dart g = w_darts[j];
      std::uint32_t e = edge_of(g);
      if (e == edge_of(cur.q.root)) {
        // rotate the root around the endpoint that is not w
        const Dart rv = alpha(g);
        const Dart eta_dart = cur.q.sigma_inv(rv);
        const std::uint32_t eta = edge_of(eta_dart);
        if (eta == e)
          throw maps::DegenerateRotation("peel: degenerate root rotation");
        for (auto m : std::vector<maps::FlipMove>{{eta, 1}, {e, 1}, {eta, 1}, {e, -1}, {eta, -1}})
          apply(m.edge, m.sign);
        e = eta;  // the swapped index now occupies the old root position
      }
      apply(e, -1);
    }
  }
};

int corner_count(const schaeffer::PhiResult& pr) {
  return static_cast<int>(pr.corner_vertex.size());
}

// 0-based contour corner of leaf v.
int leaf_corner0(const schaeffer::PhiResult& pr, int v) {
  for (int i = 0; i < corner_count(pr); ++i)
    if (pr.corner_vertex[i] == v) return i;
  throw std::logic_error("leaf_corner0: corner not found");
}

// Darts at w strictly between from (exclusive) and upto (exclusive), read
// clockwise (against sigma).
std::vector<Dart> cw_between(const maps::Quadrangulation& q, Dart from, Dart upto) {
  std::vector<Dart> out;
  Dart g = q.sigma_inv(from);
  while (g != upto) {
    out.push_back(g);
    g = q.sigma_inv(g);
    if (out.size() > q.sigma.size()) throw std::logic_error("cw_between: no endpoint");
  }
  return out;
}

FlipPath finish(Builder& b, const trees::ColouredTree& target, int eps, const char* who) {
  auto want = maps::canonical_code(schaeffer::phi(SignedTree{target, eps}));
  if (maps::canonical_code(b.cur) != want)
    throw std::logic_error(std::string(who) + ": endpoint mismatch");
  return b.path;
}

// Core '+' -> '-' construction (l(v) = l(p(v)) + 1 in t).
FlipPath colour_plus_to_minus(const trees::ColouredTree& t, int v, int eps) {
  Builder b(SignedTree{t, eps});
  const int m = corner_count(b.phi);
  const int il = leaf_corner0(b.phi, v);
  const int c = (il + 1) % m;  // corner of p(v) right after v
  const int tc = b.phi.corner_target[c];
  std::vector<Dart> w_darts;
  if (tc >= 0) {
    const Dart h_e = b.phi.in_dart(c);
    const Dart h_ep = b.phi.out_dart(tc);
    w_darts = cw_between(b.phi.pq.q, h_e, h_ep);
  } else {
    // target is delta: all edges at delta, clockwise, ending with the edge
    // drawn from the corner c itself
    const Dart h_e = b.phi.in_dart(c);
    Dart g = b.phi.pq.q.sigma_inv(h_e);
    while (g != h_e) {
      w_darts.push_back(g);
      g = b.phi.pq.q.sigma_inv(g);
    }
    w_darts.push_back(h_e);
  }
  b.peel(w_darts);
  return finish(b, trees::recolour_leaf(t, v, 3), eps, "colour_plus_to_minus");
}

// Core translation right over an equal label (l(w) = l(v) = l(p(v))).
FlipPath translate_over_equal(const trees::ColouredTree& t, int v, int eps) {
  Builder b(SignedTree{t, eps});
  const int m = corner_count(b.phi);
  const int il = leaf_corner0(b.phi, v);
  const std::uint32_t e = edge_of(b.phi.out_dart((il + 1) % m));
  b.apply(e, kTranslateEqualSign);
  return finish(b, trees::translate_leaf(t, v, trees::Dir::Right), eps, "translate_over_equal");
}

// Core translation right onto label+1 (l(w) = l(v) + 1): three flips.
FlipPath translate_over_plus(const trees::ColouredTree& t, int v, int eps) {
  Builder b(SignedTree{t, eps});
  const int m = corner_count(b.phi);
  const int il = leaf_corner0(b.phi, v);
  const std::uint32_t e1 = edge_of(b.phi.out_dart((il + 1) % m));
  const std::uint32_t e2 = edge_of(b.phi.out_dart(il));
  b.apply(e1, kTranslatePlusSign1);
  b.apply(e2, kTranslatePlusSign2);
  b.apply(e1, kTranslatePlusSign3);
  return finish(b, trees::translate_leaf(t, v, trees::Dir::Right), eps, "translate_over_plus");
}

// Core translation right onto label-1: the long peel.
FlipPath translate_over_minus(const trees::ColouredTree& t, int v, int eps) {
  Builder b(SignedTree{t, eps});
  const int m = corner_count(b.phi);
  const int il = leaf_corner0(b.phi, v);
  const int wc = (il + 2) % m;  // corner of w
  if (b.phi.corner_target[il] != wc)
    throw std::logic_error("translate_over_minus: v does not target c_{l+2}");
  const Dart h_ek = b.phi.in_dart(il);     // w-end of the edge from v
  const Dart h_ep = b.phi.out_dart(wc);    // w-end of the edge from c_{l+2}
  std::vector<Dart> w_darts = cw_between(b.phi.pq.q, h_ek, h_ep);
  w_darts.push_back(h_ek);  // flip order: e_1..e_{k-1}, then e_k = v's edge
  b.peel(w_darts);
  return finish(b, trees::translate_leaf(t, v, trees::Dir::Right), eps, "translate_over_minus");
}

FlipPath concat(const FlipPath& a, const FlipPath& bpath) {
  FlipPath out = a;
  out.moves.insert(out.moves.end(), bpath.moves.begin(), bpath.moves.end());
  return out;
}

FlipPath empty_path(const trees::ColouredTree& t, int eps) {
  FlipPath out;
  out.start = schaeffer::phi(SignedTree{t, eps});
  return out;
}

}  // namespace

FlipPath path_colour_change(const trees::ColouredTree& t, int v, int x, int eps) {
  if (!t.is_leaf(v)) throw trees::NotALeaf("path_colour_change: not a leaf");
  if (x < 1 || x > 3) throw trees::BadColour("path_colour_change: bad colour");
  const int cur = t.colour[v];
  if (cur == x) return empty_path(t, eps);
  if (cur == 2 && x == 1) {
    // '=' -> '+': flip the double edge at v
    Builder b(SignedTree{t, eps});
    const int il = leaf_corner0(b.phi, v);
    b.apply(edge_of(b.phi.out_dart(il)), kEqualToPlusSign);
    return finish(b, trees::recolour_leaf(t, v, 1), eps, "colour_equal_to_plus");
  }
  if (cur == 1 && x == 2)  // '+' -> '=': reverse of the above from t^{v,=}
    return reverse_path(path_colour_change(trees::recolour_leaf(t, v, 2), v, 1, eps));
  if (cur == 1 && x == 3) return colour_plus_to_minus(t, v, eps);
  if (cur == 3 && x == 1)  // '-' -> '+': reverse of '+' -> '-'
    return reverse_path(colour_plus_to_minus(trees::recolour_leaf(t, v, 1), v, eps));
  if (cur == 2 && x == 3)  // '=' -> '-': via '+'
    return concat(path_colour_change(t, v, 1, eps),
                  path_colour_change(trees::recolour_leaf(t, v, 1), v, 3, eps));
  // cur == 3 && x == 2: '-' -> '=': reverse of '=' -> '-'
  return reverse_path(path_colour_change(trees::recolour_leaf(t, v, 2), v, 3, eps));
}

FlipPath path_leaf_translation(const trees::ColouredTree& t, int v, trees::Dir dir, int eps) {
  if (!t.is_leaf(v)) throw trees::NotALeaf("path_leaf_translation: not a leaf");
  const auto target = trees::translate_leaf(t, v, dir);
  if (target == t) return empty_path(t, eps);
  if (dir == trees::Dir::Left)
    return reverse_path(path_leaf_translation(target, v, trees::Dir::Right, eps));

  const int cur_colour = t.colour[v];
  if (cur_colour != 2) {
    // restore-colour sandwich around the '=' core
    const auto teq = trees::recolour_leaf(t, v, 2);
    FlipPath p = path_colour_change(t, v, 2, eps);
    p = concat(p, path_leaf_translation(teq, v, trees::Dir::Right, eps));
    const auto moved = trees::translate_leaf(teq, v, trees::Dir::Right);
    p = concat(p, path_colour_change(moved, v, cur_colour, eps));
    auto end = replay(p);
    if (maps::canonical_code(end) !=
        maps::canonical_code(schaeffer::phi(SignedTree{target, eps})))
      throw std::logic_error("path_leaf_translation: composite endpoint mismatch");
    return p;
  }

  // '=' core: dispatch on the label of the vertex of c_{l+2}
  const auto pr = schaeffer::phi_with_tables(SignedTree{t, eps});
  const int m = static_cast<int>(pr.corner_vertex.size());
  int il = -1;
  for (int i = 0; i < m; ++i)
    if (pr.corner_vertex[i] == v) il = i;
  const int a = pr.corner_label[il];
  const int lw = pr.corner_label[(il + 2) % m];
  if (lw == a) return translate_over_equal(t, v, eps);
  if (lw == a + 1) return translate_over_plus(t, v, eps);
  return translate_over_minus(t, v, eps);
}

std::string occurrence_key(const maps::PointedQuadrangulation& pq, std::uint32_t edge, int sign) {
  auto perm = maps::canonical_dart_map(pq.q);
  return maps::canonical_code(pq) + "#" + std::to_string(perm[2 * edge] >> 1) +
         (sign > 0 ? "+" : "-");
}

namespace {

void count_path(const FlipPath& p, std::map<std::string, long long>& acc) {
  maps::PointedQuadrangulation cur = p.start;
  for (const auto& mv : p.moves) {
    ++acc[occurrence_key(cur, mv.edge, mv.sign)];
    cur = maps::flip_pointed(cur, mv);
  }
}

}  // namespace

CongestionAudit audit_flip_congestion(int n) {
  CongestionAudit audit;
  for (const auto& t : trees::enumerate_trees(n, 3)) {
    {
      count_path(path_root_reversal(t), audit.root_reversal);
      ++audit.paths;
    }
    for (int v = 0; v < t.vertex_count(); ++v) {
      if (!t.is_leaf(v)) continue;
      for (int eps : {1, -1}) {
        for (int x = 1; x <= 3; ++x) {
          count_path(path_colour_change(t, v, x, eps), audit.colour_change);
          ++audit.paths;
        }
        for (trees::Dir d : {trees::Dir::Right, trees::Dir::Left}) {
          count_path(path_leaf_translation(t, v, d, eps), audit.translation);
          ++audit.paths;
        }
      }
    }
  }
  auto maxof = [](const std::map<std::string, long long>& m) {
    long long best = 0;
    for (const auto& [k, v] : m) best = std::max(best, v);
    return best;
  };
  audit.max_root_reversal = maxof(audit.root_reversal);
  audit.max_colour_change = maxof(audit.colour_change);
  audit.max_translation = maxof(audit.translation);
  return audit;
}

}  // namespace quadflip::flip_paths
