#include "quadflip/maps.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>

namespace quadflip::maps {

Dart Quadrangulation::sigma_inv(Dart h) const {
  Dart g = h;
  while (sigma[g] != h) g = sigma[g];
  return g;
}

void validate(const Quadrangulation& q) {
  const size_t nd = q.sigma.size();
  if (nd == 0 || nd % 4 != 0) throw InvalidMap("map: dart count not 4n");
  const int n = static_cast<int>(nd) / 4;
  std::vector<char> hit(nd, 0);
  for (Dart h = 0; h < nd; ++h) {
    if (q.sigma[h] >= nd) throw InvalidMap("map: sigma out of range");
    hit[q.sigma[h]] = 1;
  }
  for (Dart h = 0; h < nd; ++h)
    if (!hit[h]) throw InvalidMap("map: sigma not a permutation");
  if (q.root >= nd) throw InvalidMap("map: root out of range");

  // connectivity over <sigma, alpha>
  std::vector<char> seen(nd, 0);
  std::vector<Dart> stack = {0};
  seen[0] = 1;
  size_t cnt = 0;
  while (!stack.empty()) {
    Dart h = stack.back();
    stack.pop_back();
    ++cnt;
    for (Dart g : {q.sigma[h], alpha(h)})
      if (!seen[g]) {
        seen[g] = 1;
        stack.push_back(g);
      }
  }
  if (cnt != nd) throw InvalidMap("map: not connected");

  // every face orbit has length 4
  std::fill(seen.begin(), seen.end(), 0);
  int faces = 0;
  for (Dart h = 0; h < nd; ++h) {
    if (seen[h]) continue;
    int len = 0;
    Dart g = h;
    do {
      seen[g] = 1;
      ++len;
      g = q.next_in_face(g);
    } while (g != h);
    if (len != 4) throw InvalidMap("map: face degree != 4");
    ++faces;
  }
  if (faces != n) throw InvalidMap("map: face count != n");

  // Euler: vertex orbits must number n+2
  std::fill(seen.begin(), seen.end(), 0);
  int verts = 0;
  for (Dart h = 0; h < nd; ++h) {
    if (seen[h]) continue;
    Dart g = h;
    do {
      seen[g] = 1;
      g = q.sigma[g];
    } while (g != h);
    ++verts;
  }
  if (verts != n + 2) throw InvalidMap("map: vertex count != n+2");

  // bipartite (2-colourable); also certifies no loops
  std::vector<int> colour(nd, -1);
  std::deque<Dart> bfs;
  bfs.push_back(0);
  colour[0] = 0;
  auto paint_orbit = [&](Dart h, int c) {
    Dart g = h;
    do {
      colour[g] = c;
      g = q.sigma[g];
    } while (g != h);
  };
  paint_orbit(0, 0);
  while (!bfs.empty()) {
    Dart h = bfs.front();
    bfs.pop_front();
    Dart g = h;
    do {
      Dart other = alpha(g);
      if (colour[other] == -1) {
        paint_orbit(other, colour[h] ^ 1);
        bfs.push_back(other);
      } else if (colour[other] == colour[h]) {
        throw InvalidMap("map: not bipartite");
      }
      g = q.sigma[g];
    } while (g != h);
  }
}

bool is_double_edge(const Quadrangulation& q, std::uint32_t e) {
  if (e >= q.sigma.size() / 2) throw InvalidEdge("is_double_edge: edge out of range");
  const Dart a = 2 * e, b = 2 * e + 1;
  Dart g = a;
  do {
    g = q.next_in_face(g);
    if (g == b) return true;
  } while (g != a);
  return false;
}

namespace {

// Remove dart h from the rotation at its vertex.
void rot_remove(Quadrangulation& q, Dart h) {
  Dart p = q.sigma_inv(h);
  q.sigma[p] = q.sigma[h];
  q.sigma[h] = h;
}

// Insert dart h immediately after dart anchor in ccw order.
void rot_insert_after(Quadrangulation& q, Dart anchor, Dart h) {
  q.sigma[h] = q.sigma[anchor];
  q.sigma[anchor] = h;
}

}  // namespace

Quadrangulation flip(const Quadrangulation& q, FlipMove m) {
  if (m.edge >= q.sigma.size() / 2) throw InvalidEdge("flip: edge out of range");
  if (m.sign != 1 && m.sign != -1) throw InvalidEdge("flip: bad sign");
  Quadrangulation out = q;
  const Dart a = 2 * m.edge, b = a + 1;

  if (is_double_edge(q, m.edge)) {
    // q^{e,+} = q^{e,-}: the dart at the degree-1 tip w stays; the other
    // end moves to the face vertex that is not an endpoint of e.
    Dart hw, hx;
    if (q.sigma[a] == a)
      hw = a, hx = b;
    else if (q.sigma[b] == b)
      hw = b, hx = a;
    else
      throw InvalidMap("flip: double edge without degree-1 endpoint");
    // degenerate face orbit: (hx, hw, B, C) with B from x to v, C from v to x
    Dart B = q.sigma[hx];
    rot_remove(out, hx);
    rot_insert_after(out, alpha(B), hx);
    return out;
  }

  if (m.sign == 1) {
    const Dart m1 = q.sigma[a], n1 = q.sigma[b];
    rot_remove(out, a);
    rot_remove(out, b);
    rot_insert_after(out, alpha(m1), a);
    rot_insert_after(out, alpha(n1), b);
  } else {
    const Dart pa = q.sigma_inv(a), pb = q.sigma_inv(b);
    rot_remove(out, a);
    rot_remove(out, b);
    // new sigma[a] must be alpha(pa): insert before it
    rot_insert_after(out, out.sigma_inv(alpha(pa)), a);
    rot_insert_after(out, out.sigma_inv(alpha(pb)), b);
  }
  return out;
}

PointedQuadrangulation flip_pointed(const PointedQuadrangulation& pq, FlipMove m) {
  PointedQuadrangulation out;
  Dart point = pq.point;
  const Dart a = 2 * m.edge, b = a + 1;
  if (point == a || point == b) {
    // Re-anchor to a dart of the same vertex that the flip does not move.
    if (is_double_edge(pq.q, m.edge)) {
      Dart hw = (pq.q.sigma[a] == a) ? a : b;
      if (point == hw) {
        // tip vertex keeps its only dart
      } else {
        point = pq.q.sigma[point];
        if (point == a || point == b) point = pq.q.sigma[point];
      }
    } else {
      point = pq.q.sigma[point];
      if (point == a || point == b) point = pq.q.sigma[point];
    }
  }
  out.q = flip(pq.q, m);
  out.point = point;
  return out;
}

Quadrangulation make_q0(int n) {
  if (n < 1) throw std::invalid_argument("make_q0: n must be >= 1");
  // Edge 2i: parallel edge P_i (origin -> v); edge 2i+1: pendant D_i.
  // ccw at origin: P_0, D_0, P_1, D_1, ...; ccw at v: P_{n-1}, ..., P_0.
  Quadrangulation q;
  q.sigma.assign(4 * n, 0);
  for (int i = 0; i < n; ++i) {
    Dart p = 4 * i;      // P_i at origin
    Dart d = 4 * i + 2;  // D_i at origin
    q.sigma[p] = d;
    q.sigma[d] = 4 * ((i + 1) % n);      // next parallel
    q.sigma[d + 1] = d + 1;              // pendant tip
  }
  for (int i = 0; i < n; ++i) {
    Dart pv = 4 * i + 1;  // P_i at v
    q.sigma[pv] = 4 * ((i + n - 1) % n) + 1;
  }
  q.root = 0;
  validate(q);
  return q;
}

PointedQuadrangulation make_q0_pointed(int n) {
  PointedQuadrangulation pq;
  pq.q = make_q0(n);
  pq.point = pq.q.root;  // pointed in the origin
  return pq;
}

Dart vertex_of(const Quadrangulation& q, Dart h) {
  Dart best = h, g = q.sigma[h];
  while (g != h) {
    best = std::min(best, g);
    g = q.sigma[g];
  }
  return best;
}

std::vector<Dart> vertex_reps(const Quadrangulation& q) {
  std::vector<char> seen(q.sigma.size(), 0);
  std::vector<Dart> reps;
  for (Dart h = 0; h < q.sigma.size(); ++h) {
    if (seen[h]) continue;
    Dart g = h;
    do {
      seen[g] = 1;
      g = q.sigma[g];
    } while (g != h);
    reps.push_back(h);
  }
  return reps;
}

int degree(const Quadrangulation& q, Dart h) {
  int d = 1;
  for (Dart g = q.sigma[h]; g != h; g = q.sigma[g]) ++d;
  return d;
}

int face_count(const Quadrangulation& q) { return q.n(); }

std::vector<int> distances_from(const Quadrangulation& q, Dart h) {
  // distance per dart (constant on vertex orbits)
  std::vector<int> dist(q.sigma.size(), -1);
  auto paint = [&](Dart s, int d) {
    Dart g = s;
    do {
      dist[g] = d;
      g = q.sigma[g];
    } while (g != s);
  };
  paint(h, 0);
  std::deque<Dart> bfs = {h};
  while (!bfs.empty()) {
    Dart v = bfs.front();
    bfs.pop_front();
    Dart g = v;
    do {
      Dart w = alpha(g);
      if (dist[w] == -1) {
        paint(w, dist[v] + 1);
        bfs.push_back(w);
      }
      g = q.sigma[g];
    } while (g != v);
  }
  return dist;
}

int graph_distance(const Quadrangulation& q, Dart v, Dart w) { return distances_from(q, v)[w]; }

int radius(const Quadrangulation& q) {
  auto d = distances_from(q, q.root);
  return *std::max_element(d.begin(), d.end());
}

int ball_size(const Quadrangulation& q, int rad) {
  if (rad < 0) throw std::invalid_argument("ball_size: negative radius");
  auto d = distances_from(q, q.root);
  int count = 0;
  for (Dart rep : vertex_reps(q))
    if (d[rep] <= rad) ++count;
  return count;
}

int far_set_size(const Quadrangulation& q) {
  auto d = distances_from(q, q.root);
  const int r = *std::max_element(d.begin(), d.end());
  int count = 0;
  for (Dart rep : vertex_reps(q))
    if (d[rep] >= r - 1) ++count;
  return count;
}

std::vector<Dart> canonical_dart_map(const Quadrangulation& q) {
  const size_t nd = q.sigma.size();
  std::vector<Dart> perm(nd, UINT32_MAX);
  std::vector<Dart> order;
  order.reserve(nd);
  std::uint32_t next_edge = 0;
  auto assign = [&](Dart h) {
    if (perm[h] != UINT32_MAX) return;
    perm[h] = 2 * next_edge;
    perm[alpha(h)] = 2 * next_edge + 1;
    ++next_edge;
    order.push_back(h);
    order.push_back(alpha(h));
  };
  assign(q.root);
  for (size_t i = 0; i < order.size(); ++i) {
    Dart h = order[i];
    for (Dart g = q.sigma[h]; g != h; g = q.sigma[g]) assign(g);
  }
  return perm;
}

namespace {

std::string code_text(const Quadrangulation& q, std::optional<Dart> point) {
  auto perm = canonical_dart_map(q);
  const size_t nd = q.sigma.size();
  std::vector<Dart> canon_sigma(nd);
  for (Dart h = 0; h < nd; ++h) canon_sigma[perm[h]] = perm[q.sigma[h]];
  std::ostringstream os;
  os << "QM v1 n=" << q.n() << " root=" << perm[q.root] << " point=";
  if (point) {
    // canonical vertex id: min canonical dart over the orbit
    Dart best = perm[*point];
    for (Dart g = q.sigma[*point]; g != *point; g = q.sigma[g]) best = std::min(best, perm[g]);
    os << best;
  } else {
    os << "-";
  }
  os << " sigma=";
  for (size_t i = 0; i < nd; ++i) os << (i ? "," : "") << canon_sigma[i];
  return os.str();
}

}  // namespace

std::string canonical_code(const Quadrangulation& q) { return code_text(q, std::nullopt); }

std::string canonical_code(const PointedQuadrangulation& pq) { return code_text(pq.q, pq.point); }

DecodedCode decode(const std::string& code) {
  try {
    std::istringstream is(code);
    std::string magic, ver, tok;
    is >> magic >> ver;
    if (magic != "QM" || ver != "v1") throw MalformedCode("decode: bad header");
    long n = -1, root = -1;
    std::string point_s, sigma_s;
    while (is >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw MalformedCode("decode: bad token");
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "n")
        n = std::stol(val);
      else if (key == "root")
        root = std::stol(val);
      else if (key == "point")
        point_s = val;
      else if (key == "sigma")
        sigma_s = val;
      else
        throw MalformedCode("decode: unknown key");
    }
    if (n < 1 || root < 0 || sigma_s.empty()) throw MalformedCode("decode: missing fields");
    DecodedCode out;
    out.q.sigma.clear();
    std::istringstream ss(sigma_s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw MalformedCode("decode: empty sigma entry");
      out.q.sigma.push_back(static_cast<Dart>(std::stoul(item)));
    }
    if (out.q.sigma.size() != static_cast<size_t>(4 * n)) throw MalformedCode("decode: sigma size");
    if (root >= static_cast<long>(out.q.sigma.size())) throw MalformedCode("decode: root range");
    out.q.root = static_cast<Dart>(root);
    try {
      validate(out.q);
    } catch (const InvalidMap& e) {
      throw MalformedCode(std::string("decode: ") + e.what());
    }
    if (point_s != "-") {
      unsigned long p = std::stoul(point_s);
      if (p >= out.q.sigma.size()) throw MalformedCode("decode: point range");
      out.point = static_cast<Dart>(p);
    }
    return out;
  } catch (const MalformedCode&) {
    throw;
  } catch (const std::exception& e) {
    throw MalformedCode(std::string("decode: ") + e.what());
  }
}

std::vector<FlipMove> root_reversal_moves(const Quadrangulation& q) {
  const std::uint32_t e = edge_of(q.root);
  if (!is_double_edge(q, e)) return {{e, 1}, {e, 1}, {e, 1}};
  // e' is the edge before the root in the clockwise contour of the
  // degenerate face: the face orbit is (hx, hw, B, C); the edge before hx
  // is C's edge.
  const Dart a = 2 * e, b = a + 1;
  Dart hw = (q.sigma[a] == a) ? a : b;
  Dart hx = alpha(hw);
  Dart B = q.sigma[hx];
  Dart C = q.next_in_face(B);
  std::uint32_t ep = edge_of(C);
  return {{ep, 1}, {e, 1}, {e, 1}, {e, 1}, {ep, -1}};
}

namespace {

bool face_is_degenerate(const Quadrangulation& q, Dart side) {
  std::uint32_t e[4];
  int k = 0;
  Dart walk = side;
  do {
    e[k++] = edge_of(walk);
    walk = q.next_in_face(walk);
  } while (walk != side);
  return e[0] == e[1] || e[0] == e[2] || e[0] == e[3] || e[1] == e[2] || e[1] == e[3] ||
         e[2] == e[3];
}

// One flip increasing deg(target vertex, anchored by dart t0); returns the
// move. Preconditions: deg(target) < 2n.
FlipMove degree_raising_move(const Quadrangulation& q, Dart t0) {
  // neighbours of the target vertex, in rotation order
  Dart g = t0;
  do {
    Dart v = alpha(g);  // a neighbour anchor
    // v qualifies if it has a neighbour other than the target
    Dart target_rep = vertex_of(q, t0);
    bool ok = false;
    Dart h = v;
    do {
      if (vertex_of(q, alpha(h)) != target_rep) ok = true;
      h = q.sigma[h];
    } while (h != v);
    if (ok) {
      // scan darts at v in clockwise order: find d with head != target
      // followed (clockwise) by a dart with head == target
      h = v;
      do {
        Dart d = h;
        Dart d_next_cw = q.sigma_inv(d);
        if (vertex_of(q, alpha(d)) != target_rep && vertex_of(q, alpha(d_next_cw)) == target_rep)
          return {edge_of(d), -1};
        h = q.sigma[h];
      } while (h != v);
    }
    g = q.sigma[g];
  } while (g != t0);
  throw std::logic_error("degree_raising_move: no move found");
}

}  // namespace

std::vector<FlipMove> flips_to_q0(const Quadrangulation& q) {
  std::vector<FlipMove> log;
  Quadrangulation cur = q;
  const int n = q.n();
  // Phase 1: raise the origin degree to 2n.
  while (degree(cur, cur.root) < 2 * n) {
    int before = degree(cur, cur.root);
    FlipMove m = degree_raising_move(cur, cur.root);
    cur = flip(cur, m);
    log.push_back(m);
    if (degree(cur, cur.root) != before + 1)
      throw std::logic_error("flips_to_q0: origin degree did not increase");
  }
  // Phase 2: raise the degree of the root's second endpoint to n without
  // touching the origin degree.
  for (;;) {
    Dart v = alpha(cur.root);
    if (degree(cur, v) == n) break;
    int dv = degree(cur, v), dr = degree(cur, cur.root);
    Dart v_rep = vertex_of(cur, v);
    // find a non-degenerate face at v and an edge of it avoiding v
    bool applied = false;
    Dart g = v;
    do {
      Dart side = cur.sigma[g];  // a dart of the face containing this corner
      if (!face_is_degenerate(cur, side)) {
        Dart walk = side;
        do {
          Dart e0 = walk;
          if (vertex_of(cur, e0) != v_rep && vertex_of(cur, alpha(e0)) != v_rep) {
            for (int s : {-1, 1}) {
              Quadrangulation cand = flip(cur, {edge_of(e0), s});
              if (degree(cand, v) == dv + 1 && degree(cand, cand.root) == dr) {
                cur = cand;
                log.push_back({edge_of(e0), s});
                applied = true;
                break;
              }
            }
          }
          if (applied) break;
          walk = cur.next_in_face(walk);
        } while (walk != side);
      }
      if (applied) break;
      g = cur.sigma[g];
    } while (g != v);
    if (!applied) throw std::logic_error("flips_to_q0: stuck raising second endpoint degree");
  }
  if (canonical_code(cur) != canonical_code(make_q0(n)))
    throw std::logic_error("flips_to_q0: endpoint is not q0");
  return log;
}

std::vector<FlipMove> flips_to_q0(const PointedQuadrangulation& pq) {
  std::vector<FlipMove> log;
  PointedQuadrangulation cur = pq;
  const int n = cur.q.n();
  auto apply = [&](FlipMove m) {
    cur = flip_pointed(cur, m);
    log.push_back(m);
  };
  // Phase a: raise deg(delta) to 2n.
  while (degree(cur.q, cur.point) < 2 * n) {
    int before = degree(cur.q, cur.point);
    FlipMove m = degree_raising_move(cur.q, cur.point);
    apply(m);
    if (degree(cur.q, cur.point) != before + 1)
      throw std::logic_error("flips_to_q0 pointed: delta degree did not increase");
  }
  // Phase b: make delta the origin (reverse the root if needed).
  if (vertex_of(cur.q, cur.q.root) != vertex_of(cur.q, cur.point)) {
    if (vertex_of(cur.q, alpha(cur.q.root)) != vertex_of(cur.q, cur.point))
      throw std::logic_error("flips_to_q0 pointed: root not incident to delta");
    for (auto m : root_reversal_moves(cur.q)) apply(m);
    if (vertex_of(cur.q, cur.q.root) != vertex_of(cur.q, cur.point))
      throw std::logic_error("flips_to_q0 pointed: root reversal failed");
  }
  // Phase c: raise the second endpoint degree as in the unpointed case.
  for (;;) {
    Dart v = alpha(cur.q.root);
    if (degree(cur.q, v) == n) break;
    int dv = degree(cur.q, v), dr = degree(cur.q, cur.q.root);
    Dart v_rep = vertex_of(cur.q, v);
    bool applied = false;
    Dart g = v;
    do {
      Dart side = cur.q.sigma[g];
      if (!face_is_degenerate(cur.q, side)) {
        Dart walk = side;
        do {
          Dart e0 = walk;
          if (vertex_of(cur.q, e0) != v_rep && vertex_of(cur.q, alpha(e0)) != v_rep) {
            for (int s : {-1, 1}) {
              Quadrangulation cand = flip(cur.q, {edge_of(e0), s});
              if (degree(cand, v) == dv + 1 && degree(cand, cand.root) == dr) {
                apply({edge_of(e0), s});
                applied = true;
                break;
              }
            }
          }
          if (applied) break;
          walk = cur.q.next_in_face(walk);
        } while (walk != side);
      }
      if (applied) break;
      g = cur.q.sigma[g];
    } while (g != v);
    if (!applied) throw std::logic_error("flips_to_q0 pointed: stuck in phase c");
  }
  if (canonical_code(cur) != canonical_code(make_q0_pointed(n)))
    throw std::logic_error("flips_to_q0 pointed: endpoint is not pointed q0");
  return log;
}

}  // namespace quadflip::maps
