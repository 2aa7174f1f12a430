#include "quadflip/trees.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace quadflip::trees {

std::vector<int> ColouredTree::children(int v) const {
  std::vector<int> out;
  for (int u = first_child[v]; u != -1; u = next_sibling[u]) out.push_back(u);
  return out;
}

bool ColouredTree::operator==(const ColouredTree& o) const {
  return r == o.r && root == o.root && parent == o.parent && first_child == o.first_child &&
         next_sibling == o.next_sibling && colour == o.colour;
}

ColouredTree single_vertex(int r) {
  ColouredTree t;
  t.r = r;
  t.root = 0;
  t.parent = {-1};
  t.first_child = {-1};
  t.next_sibling = {-1};
  t.colour = {0};
  return t;
}

void validate(const ColouredTree& t) {
  const int nv = t.vertex_count();
  if (nv == 0) throw std::invalid_argument("tree: empty");
  if (t.root < 0 || t.root >= nv || t.parent[t.root] != -1)
    throw std::invalid_argument("tree: bad root");
  std::vector<char> seen(nv, 0);
  std::vector<int> stack = {t.root};
  int count = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (seen[v]) throw std::invalid_argument("tree: cycle");
    seen[v] = 1;
    ++count;
    for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) {
      if (t.parent[u] != v) throw std::invalid_argument("tree: parent link mismatch");
      if (u != t.root && (t.colour[u] < 1 || t.colour[u] > t.r))
        throw std::invalid_argument("tree: colour out of range");
      stack.push_back(u);
    }
  }
  if (count != nv) throw std::invalid_argument("tree: not connected");
}

std::vector<Corner> contour(const ColouredTree& t) {
  std::vector<Corner> out;
  out.reserve(2 * t.edge_count());
  // Iterative clockwise contour: children visited left to right.
  struct Frame {
    int v;
    int child;  // next child to descend into
    int gap;
  };
  const int root = t.root;
  if (t.first_child[root] == -1) return out;  // single vertex: no corners
  std::vector<Frame> st;
  st.push_back({root, t.first_child[root], 0});
  out.push_back({root, 0});
  while (!st.empty()) {
    Frame& f = st.back();
    if (f.child != -1) {
      int u = f.child;
      f.child = t.next_sibling[u];
      ++f.gap;
      out.push_back({u, 0});
      if (t.first_child[u] != -1) {
        st.push_back({u, t.first_child[u], 0});
      } else {
        // leaf: single corner already emitted; emit the gap back at parent
        Frame& g = st.back();
        if (!(g.v == root && g.child == -1)) out.push_back({g.v, g.gap});
      }
    } else {
      st.pop_back();
      if (!st.empty()) {
        Frame& g = st.back();
        if (!(g.v == root && g.child == -1)) out.push_back({g.v, g.gap});
      }
    }
  }
  return out;
}

int leaf_corner_index(const ColouredTree& t, int v) {
  if (!t.is_leaf(v)) throw NotALeaf("leaf_corner_index: not a leaf");
  auto cs = contour(t);
  for (size_t i = 0; i < cs.size(); ++i)
    if (cs[i].vertex == v) return static_cast<int>(i) + 1;
  throw std::logic_error("leaf_corner_index: corner not found");
}

char colour_char(int c, int r) {
  if (c < 1 || c > r) throw BadColour("colour_char: out of range");
  if (r == 3) return c == 1 ? '+' : (c == 2 ? '=' : '-');
  if (r > 9) throw BadColour("colour_char: r > 9 unsupported in codes");
  return static_cast<char>('0' + c);
}

int colour_from_char(char ch, int r) {
  if (r == 3) {
    if (ch == '+') return 1;
    if (ch == '=') return 2;
    if (ch == '-') return 3;
    throw BadTreeCode("colour_from_char: bad labelled-tree colour");
  }
  int c = ch - '0';
  if (c < 1 || c > r) throw BadTreeCode("colour_from_char: bad colour digit");
  return c;
}

static void code_rec(const ColouredTree& t, int v, std::string& out) {
  for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) {
    out.push_back('(');
    out.push_back(colour_char(t.colour[u], t.r));
    code_rec(t, u, out);
    out.push_back(')');
  }
}

std::string tree_code(const ColouredTree& t) {
  std::string out;
  out.reserve(2 * t.vertex_count());
  code_rec(t, t.root, out);
  return out;
}

namespace {

struct CodeParser {
  const std::string& s;
  int r;
  size_t pos = 0;
  ColouredTree t;

  explicit CodeParser(const std::string& code, int rr) : s(code), r(rr) {
    t.r = r;
    t.root = 0;
    t.parent = {-1};
    t.first_child = {-1};
    t.next_sibling = {-1};
    t.colour = {0};
  }

  int new_vertex(int par, int col) {
    int id = t.vertex_count();
    t.parent.push_back(par);
    t.first_child.push_back(-1);
    t.next_sibling.push_back(-1);
    t.colour.push_back(col);
    return id;
  }

  void parse_children(int v) {
    int last = -1;
    while (pos < s.size() && s[pos] == '(') {
      ++pos;
      if (pos >= s.size()) throw BadTreeCode("tree code: truncated");
      int col = colour_from_char(s[pos++], r);
      int u = new_vertex(v, col);
      if (last == -1)
        t.first_child[v] = u;
      else
        t.next_sibling[last] = u;
      last = u;
      parse_children(u);
      if (pos >= s.size() || s[pos] != ')') throw BadTreeCode("tree code: missing ')'");
      ++pos;
    }
  }
};

}  // namespace

ColouredTree parse_tree_code(const std::string& code, int r) {
  CodeParser p(code, r);
  p.parse_children(0);
  if (p.pos != code.size()) throw BadTreeCode("tree code: trailing characters");
  return p.t;
}

namespace {

void gen_shapes(int n, std::vector<std::vector<std::string>>& memo) {
  if (static_cast<int>(memo.size()) > n) return;
  memo.resize(n + 1);
  memo[0] = {""};
  for (int m = 1; m <= n; ++m) {
    if (!memo[m].empty()) continue;
    for (int k = 0; k < m; ++k)
      for (const auto& a : memo[k])
        for (const auto& b : memo[m - 1 - k]) memo[m].push_back("(" + a + ")" + b);
  }
}

}  // namespace

std::vector<ColouredTree> enumerate_trees(int n, int r) {
  std::vector<std::string> codes;
  for_each_tree(n, r, [&](const ColouredTree& t) { codes.push_back(tree_code(t)); });
  std::sort(codes.begin(), codes.end());
  std::vector<ColouredTree> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.push_back(parse_tree_code(c, r));
  return out;
}

void for_each_tree(int n, int r, const std::function<void(const ColouredTree&)>& fn) {
  if (n == 0) {
    fn(single_vertex(r));
    return;
  }
  std::vector<std::vector<std::string>> memo;
  gen_shapes(n, memo);
  for (const auto& shape : memo[n]) {
    // Build the shape once, then run a colour odometer over non-root vertices.
    ColouredTree t = parse_tree_code(
        [&] {
          std::string s;
          for (char ch : shape)
            if (ch == '(') {
              s.push_back('(');
              s.push_back(colour_char(1, r));
            } else {
              s.push_back(')');
            }
          return s;
        }(),
        r);
    const int nv = t.vertex_count();
    for (;;) {
      fn(t);
      int v = 1;
      while (v < nv && t.colour[v] == r) t.colour[v++] = 1;
      if (v >= nv) break;
      ++t.colour[v];
    }
  }
}

namespace {

// Unlink leaf v in place; v keeps its id but is detached.
void unlink_leaf(ColouredTree& t, int v) {
  int p = t.parent[v];
  if (t.first_child[p] == v) {
    t.first_child[p] = t.next_sibling[v];
  } else {
    int w = t.first_child[p];
    while (t.next_sibling[w] != v) w = t.next_sibling[w];
    t.next_sibling[w] = t.next_sibling[v];
  }
  t.parent[v] = -1;
  t.next_sibling[v] = -1;
}

// Attach detached leaf v as the child of u at 0-based position idx.
void link_leaf(ColouredTree& t, int v, int u, int idx, int c) {
  t.parent[v] = u;
  t.colour[v] = c;
  if (idx == 0) {
    t.next_sibling[v] = t.first_child[u];
    t.first_child[u] = v;
  } else {
    int w = t.first_child[u];
    for (int i = 1; i < idx; ++i) w = t.next_sibling[w];
    t.next_sibling[v] = t.next_sibling[w];
    t.next_sibling[w] = v;
  }
}

int child_count(const ColouredTree& t, int u) {
  int k = 0;
  for (int w = t.first_child[u]; w != -1; w = t.next_sibling[w]) ++k;
  return k;
}

}  // namespace

ColouredTree replant_leaf(const ColouredTree& t, int v, int k, int c) {
  if (!t.is_leaf(v)) throw NotALeaf("replant_leaf: not a leaf");
  if (c < 1 || c > t.r) throw BadColour("replant_leaf: bad colour");
  const int n = t.edge_count();
  if (k < 1 || k > 2 * n - 1) throw BadCorner("replant_leaf: corner index out of range");
  ColouredTree out = t;
  unlink_leaf(out, v);
  if (k == 1) {
    link_leaf(out, v, out.root, 0, c);
    return out;
  }
  if (k == 2 * n - 1) {
    link_leaf(out, v, out.root, child_count(out, out.root), c);
    return out;
  }
  auto cs = contour(out);  // 2n-2 corners of the reduced tree
  Corner at = cs[k - 1];
  link_leaf(out, v, at.vertex, at.gap, c);
  return out;
}

ColouredTree translate_leaf(const ColouredTree& t, int v, Dir d) {
  if (!t.is_leaf(v)) throw NotALeaf("translate_leaf: not a leaf");
  const int n = t.edge_count();
  const int l = leaf_corner_index(t, v);
  if (d == Dir::Right) {
    if (l == 2 * n) return t;
    return replant_leaf(t, v, l, t.colour[v]);
  }
  if (l == 2) return t;  // (v, p(v)) is the root edge
  return replant_leaf(t, v, l - 2, t.colour[v]);
}

ColouredTree recolour_leaf(const ColouredTree& t, int v, int c) {
  if (!t.is_leaf(v)) throw NotALeaf("recolour_leaf: not a leaf");
  if (c < 1 || c > t.r) throw BadColour("recolour_leaf: bad colour");
  ColouredTree out = t;
  out.colour[v] = c;
  return out;
}

int colour_increment(int c) {
  if (c == 1) return 1;
  if (c == 2) return 0;
  if (c == 3) return -1;
  throw BadColour("colour_increment: labelled trees use colours 1..3");
}

std::vector<int> labels(const ColouredTree& t) {
  if (t.r != 3) throw std::invalid_argument("labels: tree is not 3-coloured");
  std::vector<int> l(t.vertex_count(), 0);
  std::vector<int> stack = {t.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) {
      l[u] = l[v] + colour_increment(t.colour[u]);
      stack.push_back(u);
    }
  }
  return l;
}

int label_of(const ColouredTree& t, int v) {
  int l = 0;
  for (int w = v; w != t.root; w = t.parent[w]) l += colour_increment(t.colour[w]);
  return l;
}

bool all_labels_nonnegative(const ColouredTree& t) {
  auto l = labels(t);
  return std::all_of(l.begin(), l.end(), [](int x) { return x >= 0; });
}

int height(const ColouredTree& t) {
  int best = 0;
  std::vector<std::pair<int, int>> stack = {{t.root, 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) stack.push_back({u, d + 1});
  }
  return best;
}

namespace {

void dyck_rec(const ColouredTree& t, int v, std::vector<int>& d) {
  for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) {
    d.push_back(d.back() + 1);
    dyck_rec(t, u, d);
    d.push_back(d.back() - 1);
  }
}

}  // namespace

std::vector<int> to_dyck(const ColouredTree& t) {
  std::vector<int> d = {0};
  dyck_rec(t, t.root, d);
  return d;
}

bool is_peak(const std::vector<int>& d, int i) {
  const int len = static_cast<int>(d.size()) - 1;
  return i >= 1 && i <= len - 1 && d[i] == d[i - 1] + 1 && d[i + 1] == d[i] - 1;
}

std::vector<int> peak_shift(const std::vector<int>& d, int i, Dir dir) {
  const int len = static_cast<int>(d.size()) - 1;
  if (!is_peak(d, i)) throw NotAPeak("peak_shift: not a peak");
  std::vector<int> out = d;
  if (dir == Dir::Right) {
    if (i > len - 2) return out;  // boundary: no move
    out[i] = d[i + 2];
    out[i + 1] = d[i + 2] + 1;
  } else {
    if (i < 2) return out;
    out[i] = d[i - 2];
    out[i - 1] = d[i - 2] + 1;
  }
  return out;
}

namespace {

// Copy the subtree of src rooted at v into dst (dst root must exist).
void copy_subtree(const ColouredTree& src, int v, ColouredTree& dst, int dv) {
  int last = -1;
  for (int u = src.first_child[v]; u != -1; u = src.next_sibling[u]) {
    int du = dst.vertex_count();
    dst.parent.push_back(dv);
    dst.first_child.push_back(-1);
    dst.next_sibling.push_back(-1);
    dst.colour.push_back(src.colour[u]);
    if (last == -1)
      dst.first_child[dv] = du;
    else
      dst.next_sibling[last] = du;
    last = du;
    copy_subtree(src, u, dst, du);
  }
}

}  // namespace

SplitLR split_lr(const ColouredTree& t) {
  if (t.edge_count() == 0) throw EmptyTree("split_lr: single vertex");
  const int u = t.first_child[t.root];
  SplitLR out;
  out.root_colour = t.colour[u];
  out.left = single_vertex(t.r);
  copy_subtree(t, u, out.left, 0);
  // Right part: t minus the root edge and the subtree of u.
  ColouredTree rest = t;
  unlink_leaf(rest, u);  // works for non-leaf u too: unlink only touches links
  out.right = single_vertex(t.r);
  copy_subtree(rest, rest.root, out.right, 0);
  return out;
}

ColouredTree join_lr(const ColouredTree& left, const ColouredTree& right, int root_colour) {
  if (left.r != right.r) throw std::invalid_argument("join_lr: colour count mismatch");
  if (root_colour < 1 || root_colour > left.r) throw BadColour("join_lr: bad root colour");
  ColouredTree out = single_vertex(left.r);
  // first child: root of left with the given colour
  out.parent.push_back(0);
  out.first_child.push_back(-1);
  out.next_sibling.push_back(-1);
  out.colour.push_back(root_colour);
  out.first_child[0] = 1;
  copy_subtree(left, left.root, out, 1);
  // then the children of right's root
  int last = 1;
  for (int u = right.first_child[right.root]; u != -1; u = right.next_sibling[u]) {
    int du = out.vertex_count();
    out.parent.push_back(0);
    out.first_child.push_back(-1);
    out.next_sibling.push_back(-1);
    out.colour.push_back(right.colour[u]);
    out.next_sibling[last] = du;
    last = du;
    copy_subtree(right, u, out, du);
  }
  return out;
}

ColouredTree delete_leaf(const ColouredTree& t, int v) {
  if (!t.is_leaf(v)) throw NotALeaf("delete_leaf: not a leaf");
  ColouredTree tmp = t;
  unlink_leaf(tmp, v);
  ColouredTree out = single_vertex(t.r);
  copy_subtree(tmp, tmp.root, out, 0);
  return out;
}

ColouredTree insert_leaf_at_corner(const ColouredTree& t, Corner at, int c,
                                   bool root_corner_as_last) {
  ColouredTree out = t;
  int v = out.vertex_count();
  out.parent.push_back(-1);
  out.first_child.push_back(-1);
  out.next_sibling.push_back(-1);
  out.colour.push_back(0);
  int idx = at.gap;
  if (at.vertex == t.root && at.gap == 0 && root_corner_as_last) idx = child_count(out, at.vertex);
  link_leaf(out, v, at.vertex, idx, c);
  return out;
}

std::vector<ColouredTree> leaf_insertions(const ColouredTree& t) {
  std::vector<ColouredTree> out;
  std::vector<Corner> cs = contour(t);
  if (cs.empty()) cs.push_back({t.root, 0});  // the single-vertex tree
  for (int c = 1; c <= t.r; ++c) {
    for (const Corner& at : cs) out.push_back(insert_leaf_at_corner(t, at, c));
    if (t.edge_count() > 0) out.push_back(insert_leaf_at_corner(t, {t.root, 0}, c, true));
  }
  return out;
}

namespace {

// Cyclic neighbour list in contour order: children then parent.
std::vector<std::vector<int>> neighbour_lists(const ColouredTree& t) {
  std::vector<std::vector<int>> nbr(t.vertex_count());
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (t.parent[v] == -1 && v != t.root) continue;  // detached
    for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) nbr[v].push_back(u);
    if (v != t.root) nbr[v].push_back(t.parent[v]);
  }
  return nbr;
}

ColouredTree reroot_at_corner(const ColouredTree& t, Corner at, const std::vector<int>& new_label) {
  auto nbr = neighbour_lists(t);
  ColouredTree out;
  out.r = t.r;
  out.root = 0;
  // Map old vertex ids to new dense ids as we DFS from the new root.
  std::vector<int> id(t.vertex_count(), -1);
  auto alloc = [&](int old, int par, int col) {
    int nid = out.vertex_count();
    id[old] = nid;
    out.parent.push_back(par);
    out.first_child.push_back(-1);
    out.next_sibling.push_back(-1);
    out.colour.push_back(col);
    return nid;
  };
  struct Item {
    int v;        // old id
    int from;     // old id we entered from (-1 at root)
    int start;    // index into nbr[v] of the first child
  };
  // At the new root, children start at child index at.gap (gap g = before
  // child g+1); elsewhere, children start right after the entry edge.
  alloc(at.vertex, -1, 0);
  std::vector<Item> stack;
  stack.push_back({at.vertex, -1, at.gap});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const auto& ns = nbr[it.v];
    const int deg = static_cast<int>(ns.size());
    int last = -1;
    for (int j = 0; j < deg; ++j) {
      int u = ns[(it.start + j) % deg];
      if (u == it.from) continue;
      int inc = new_label[u] - new_label[it.v];
      int col = inc == 1 ? 1 : (inc == 0 ? 2 : 3);
      int du = alloc(u, id[it.v], col);
      if (last == -1)
        out.first_child[id[it.v]] = du;
      else
        out.next_sibling[last] = du;
      last = du;
      // children of u start right after the edge back to it.v
      int back = 0;
      for (int j2 = 0; j2 < static_cast<int>(nbr[u].size()); ++j2)
        if (nbr[u][j2] == it.v) back = j2;
      stack.push_back({u, it.v, back + 1});
    }
  }
  return out;
}

}  // namespace

ColouredTree reroot_max_label(const ColouredTree& t) {
  auto l = labels(t);
  if (*std::min_element(l.begin(), l.end()) < 0)
    throw NegativeLabel("reroot_max_label: labels must be nonnegative");
  if (t.edge_count() == 0) return t;
  const int m = *std::max_element(l.begin(), l.end());
  auto cs = contour(t);
  Corner at{t.root, 0};
  for (const Corner& c : cs)
    if (l[c.vertex] == m) {
      at = c;
      break;
    }
  std::vector<int> nl(l.size());
  for (size_t i = 0; i < l.size(); ++i) nl[i] = m - l[i];
  return reroot_at_corner(t, at, nl);
}

ColouredTree reroot_max_label_inverse(const ColouredTree& t) {
  auto l = labels(t);
  if (*std::min_element(l.begin(), l.end()) < 0)
    throw NegativeLabel("reroot_max_label_inverse: labels must be nonnegative");
  if (t.edge_count() == 0) return t;
  const int m = *std::max_element(l.begin(), l.end());
  auto cs = contour(t);
  Corner at{t.root, 0};
  for (auto it = cs.rbegin(); it != cs.rend(); ++it)
    if (l[it->vertex] == m) {
      at = *it;
      break;
    }
  std::vector<int> nl(l.size());
  for (size_t i = 0; i < l.size(); ++i) nl[i] = m - l[i];
  return reroot_at_corner(t, at, nl);
}

std::string to_json(const ColouredTree& t) {
  // Canonical (contour-DFS) ids.
  ColouredTree c = single_vertex(t.r);
  copy_subtree(t, t.root, c, 0);
  std::ostringstream os;
  os << "{\"parent\":[";
  for (int v = 0; v < c.vertex_count(); ++v) os << (v ? "," : "") << c.parent[v];
  os << "],\"colour\":[";
  for (int v = 0; v < c.vertex_count(); ++v) os << (v ? "," : "") << c.colour[v];
  os << "]}";
  return os.str();
}

}  // namespace quadflip::trees
