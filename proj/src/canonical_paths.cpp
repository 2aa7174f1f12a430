#include "quadflip/canonical_paths.hpp"

#include <algorithm>
#include <map>

namespace quadflip::canonical_paths {

using trees::ColouredTree;

std::vector<Rational> constants(int n) {
  if (n < 2) throw std::invalid_argument("constants: defined for n >= 2");
  std::vector<Rational> out(n);
  const Rational den = Rational(n - 1) * n * (n + 1);
  for (int i = 0; i < n; ++i)
    out[i] = Rational(static_cast<long long>(i) * (i + 1) * (3 * n - 2 * i - 1)) / den;
  return out;
}

namespace {

// #edges in the subtree hanging from each vertex.
std::vector<int> subtree_sizes(const ColouredTree& t) {
  std::vector<int> size(t.vertex_count(), 0);
  // process children before parents: DFS order then reverse
  std::vector<int> order;
  order.reserve(t.vertex_count());
  std::vector<int> stack = {t.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) stack.push_back(u);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    for (int u = t.first_child[v]; u != -1; u = t.next_sibling[u]) size[v] += 1 + size[u];
  }
  return size;
}

bool is_ancestor_or_self(const ColouredTree& t, int anc, int v) {
  for (int w = v; w != -1; w = t.parent[w])
    if (w == anc) return true;
  return false;
}

}  // namespace

Hierarchy::Hierarchy(int r, int max_n) : r_(r), cache_(max_n + 1) {
  for (int m = 2; m <= max_n; ++m) cache_[m] = constants(m);
}

const std::vector<Rational>& Hierarchy::consts(int m) const {
  if (m < 2 || m >= static_cast<int>(cache_.size()))
    throw std::invalid_argument("Hierarchy: size beyond precomputed constants");
  return cache_[m];
}

Rational Hierarchy::weight_of_leaf(const ColouredTree& t, int v) const {
  if (!t.is_leaf(v)) throw trees::NotALeaf("weight_of_leaf: not a leaf");
  auto size = subtree_sizes(t);
  Rational acc = 1;
  int vr = t.root;
  int skip = 0;  // leading children of vr excluded from the current view
  int m = t.edge_count();
  while (m > 1) {
    // u = first child of the current view
    int u = t.first_child[vr];
    for (int i = 0; i < skip; ++i) u = t.next_sibling[u];
    const int left = size[u];  // |L| of the view
    const auto& cs = consts(m);
    if (is_ancestor_or_self(t, u, v)) {
      if (left == 0) return 0;  // deleting the root-edge leaf carries C_0 = 0
      acc *= cs[left];
      vr = u;
      skip = 0;
      m = left;
    } else {
      const int right = m - 1 - left;
      acc *= cs[right];
      ++skip;
      m = right;
    }
  }
  return acc;
}

Rational Hierarchy::weight_pair(const ColouredTree& t, const ColouredTree& tp) const {
  if (tp.edge_count() != t.edge_count() - 1) return 0;
  // locate a leaf v of t with t \ v == tp
  const std::string want = trees::tree_code(tp);
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v)) continue;
    if (trees::tree_code(trees::delete_leaf(t, v)) == want) return weight_of_leaf(t, v);
  }
  return 0;
}

std::vector<Hierarchy::Deletion> Hierarchy::deletions(const ColouredTree& t) const {
  std::map<std::string, Deletion> acc;
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v)) continue;
    std::string code = trees::tree_code(trees::delete_leaf(t, v));
    if (acc.count(code)) continue;
    Rational w = weight_of_leaf(t, v);
    if (w == 0) continue;
    acc[code] = Deletion{code, v, w};
  }
  std::vector<Deletion> out;
  out.reserve(acc.size());
  for (auto& [code, d] : acc) out.push_back(std::move(d));
  return out;
}

FiberMap::FiberMap(int n, int r) : n_(n), r_(r) {
  for (const auto& t : trees::enumerate_trees(n, r)) codes_n_.push_back(trees::tree_code(t));
  for (const auto& t : trees::enumerate_trees(n - 1, r)) codes_prev_.push_back(trees::tree_code(t));
}

int FiberMap::index_n(const std::string& code) const {
  auto it = std::lower_bound(codes_n_.begin(), codes_n_.end(), code);
  if (it == codes_n_.end() || *it != code) throw std::invalid_argument("FiberMap: unknown code");
  return static_cast<int>(it - codes_n_.begin());
}

int FiberMap::map_index(int a, int b) const {
  return (a + b) % static_cast<int>(codes_prev_.size());
}

ColouredTree FiberMap::map(const ColouredTree& x, const ColouredTree& y) const {
  const int a = index_n(trees::tree_code(x));
  const int b = index_n(trees::tree_code(y));
  return trees::parse_tree_code(codes_prev_[map_index(a, b)], r_);
}

DeletionSequence sample_deletion(const ColouredTree& t, const Hierarchy& h, RngStream& rng) {
  DeletionSequence seq = {t};
  ColouredTree cur = t;
  while (cur.edge_count() > 0) {
    auto opts = h.deletions(cur);
    // draw by cumulative mass from a dyadic uniform in [0,1)
    const Rational x(rng.next() >> 11, 9007199254740992ULL);  // / 2^53
    Rational cum = 0;
    std::string pick_code = opts.back().code;
    for (const auto& d : opts) {
      cum += d.mass;
      if (x < cum) {
        pick_code = d.code;
        break;
      }
    }
    cur = trees::parse_tree_code(pick_code, cur.r);
    seq.push_back(cur);
  }
  return seq;
}

Rational deletion_mass(const DeletionSequence& seq, const Hierarchy& h) {
  Rational m = 1;
  for (size_t i = 0; i + 1 < seq.size(); ++i) m *= h.weight_pair(seq[i], seq[i + 1]);
  return m;
}

std::vector<DeletionSequence> enumerate_deletions(const ColouredTree& t) {
  std::vector<DeletionSequence> out;
  if (t.edge_count() == 0) {
    out.push_back({t});
    return out;
  }
  std::map<std::string, ColouredTree> nexts;
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v)) continue;
    auto tp = trees::delete_leaf(t, v);
    nexts.emplace(trees::tree_code(tp), tp);
  }
  for (const auto& [code, tp] : nexts)
    for (auto& tail : enumerate_deletions(tp)) {
      DeletionSequence seq = {t};
      seq.insert(seq.end(), tail.begin(), tail.end());
      out.push_back(std::move(seq));
    }
  return out;
}

namespace {
constexpr int kPathRootColour = 1;
}

ReplantPath assemble_path(const ColouredTree& x, const ColouredTree& y,
                          const DeletionSequence& r1, const DeletionSequence& r2,
                          const DeletionSequence& l1, const DeletionSequence& l2) {
  const int n = x.edge_count();
  ReplantPath g;
  g.states.resize(2 * n + 1, trees::single_vertex(x.r));
  g.states[0] = x;
  g.states[2 * n] = y;
  for (int i = 1; i <= n; ++i)
    g.states[i] = trees::join_lr(l1[n - i], r1[i], kPathRootColour);
  for (int i = 1; i < n; ++i)
    g.states[2 * n - i] = trees::join_lr(l2[n - i], r2[i], kPathRootColour);
  // consistency at the midpoint: both halves give the same t_n
  if (trees::tree_code(trees::join_lr(l2[0], r2[static_cast<size_t>(n)], kPathRootColour)) !=
      trees::tree_code(g.states[n]))
    throw std::logic_error("assemble_path: halves disagree at the midpoint");
  return g;
}

PathParts disassemble_path(const ReplantPath& g) {
  const int n = (static_cast<int>(g.states.size()) - 1) / 2;
  PathParts p;
  p.r1.push_back(g.states[0]);
  for (int i = 1; i <= n; ++i) p.r1.push_back(trees::split_lr(g.states[i]).right);
  p.r2.push_back(g.states[2 * n]);
  for (int i = 1; i <= n; ++i) p.r2.push_back(trees::split_lr(g.states[2 * n - i]).right);
  for (int i = n; i >= 1; --i) p.l1.push_back(trees::split_lr(g.states[i]).left);
  for (int i = n; i >= 1; --i) p.l2.push_back(trees::split_lr(g.states[2 * n - i]).left);
  return p;
}

ReplantPath sample_gamma(const ColouredTree& x, const ColouredTree& y, const Hierarchy& h,
                         const FiberMap& f, RngStream& rng) {
  auto z = f.map(x, y);
  auto r1 = sample_deletion(x, h, rng);
  auto r2 = sample_deletion(y, h, rng);
  auto l1 = sample_deletion(z, h, rng);
  auto l2 = sample_deletion(z, h, rng);
  auto g = assemble_path(x, y, r1, r2, l1, l2);
  validate_gamma(g, x, y, f);
  return g;
}

Rational gamma_mass(const ReplantPath& g, const ColouredTree& x, const ColouredTree& y,
                    const Hierarchy& h, const FiberMap& f) {
  (void)x;
  (void)y;
  (void)f;
  auto parts = disassemble_path(g);
  return deletion_mass(parts.r1, h) * deletion_mass(parts.r2, h) * deletion_mass(parts.l1, h) *
         deletion_mass(parts.l2, h);
}

std::vector<ReplantPath> enumerate_gammas(const ColouredTree& x, const ColouredTree& y,
                                          const FiberMap& f) {
  auto z = f.map(x, y);
  std::vector<ReplantPath> out;
  auto r1s = enumerate_deletions(x);
  auto r2s = enumerate_deletions(y);
  auto ls = enumerate_deletions(z);
  for (const auto& r1 : r1s)
    for (const auto& r2 : r2s)
      for (const auto& l1 : ls)
        for (const auto& l2 : ls) out.push_back(assemble_path(x, y, r1, r2, l1, l2));
  return out;
}

namespace {

// True when tp == t^{v,k,c} for some admissible (v,k,c).
bool is_replant_of(const ColouredTree& t, const ColouredTree& tp) {
  const std::string want = trees::tree_code(tp);
  const int n = t.edge_count();
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v)) continue;
    for (int k = 1; k <= 2 * n - 1; ++k)
      for (int c = 1; c <= t.r; ++c)
        if (trees::tree_code(trees::replant_leaf(t, v, k, c)) == want) return true;
  }
  return false;
}

}  // namespace

void validate_gamma(const ReplantPath& g, const ColouredTree& x, const ColouredTree& y,
                    const FiberMap& f) {
  const int n = x.edge_count();
  if (static_cast<int>(g.states.size()) != 2 * n + 1)
    throw std::logic_error("gamma: wrong length");
  if (trees::tree_code(g.states[0]) != trees::tree_code(x) ||
      trees::tree_code(g.states[2 * n]) != trees::tree_code(y))
    throw std::logic_error("gamma: endpoints");
  for (int i = 1; i < 2 * n; ++i) {
    const int expect = (i <= n) ? i - 1 : 2 * n - 1 - i;
    auto parts = trees::split_lr(g.states[i]);
    if (parts.left.edge_count() != expect) throw std::logic_error("gamma: left component size");
  }
  auto z = f.map(x, y);
  if (trees::tree_code(trees::split_lr(g.states[n]).left) != trees::tree_code(z))
    throw std::logic_error("gamma: midpoint left component");
  for (int i = 0; i < 2 * n; ++i)
    if (!is_replant_of(g.states[i], g.states[i + 1]))
      throw std::logic_error("gamma: step is not a replanting move");
}

TranslationPath expand_translations(const ReplantPath& g) {
  TranslationPath out;
  out.start = g.states[0];
  ColouredTree cur = g.states[0];
  const int n = cur.edge_count();
  for (size_t step = 0; step + 1 < g.states.size(); ++step) {
    const ColouredTree& target = g.states[step + 1];
    const std::string want = trees::tree_code(target);
    // leftmost leaf v (by corner index) admitting t' = t^{v,k,c}; minimal k.
    auto cs = trees::contour(cur);
    int v = -1, kk = -1, cc = -1;
    for (const auto& corner : cs) {
      int cand = corner.vertex;
      if (!cur.is_leaf(cand)) continue;
      for (int k = 1; k <= 2 * n - 1 && kk == -1; ++k)
        for (int c = 1; c <= cur.r; ++c)
          if (trees::tree_code(trees::replant_leaf(cur, cand, k, c)) == want) {
            v = cand;
            kk = k;
            cc = c;
            break;
          }
      if (v != -1) break;
    }
    if (v == -1) throw std::logic_error("expand_translations: step is not a replant");
    const int l = trees::leaf_corner_index(cur, v);
    if (kk >= l) {
      for (int j = 0; j < kk - l + 1; ++j) {
        cur = trees::translate_leaf(cur, v, trees::Dir::Right);
        out.moves.push_back({v, 0});
      }
    } else {
      for (int j = 0; j < l - 1 - kk; ++j) {
        cur = trees::translate_leaf(cur, v, trees::Dir::Left);
        out.moves.push_back({v, 1});
      }
    }
    cur = trees::recolour_leaf(cur, v, cc);
    out.moves.push_back({v, 1 + cc});
    if (trees::tree_code(cur) != want)
      throw std::logic_error("expand_translations: expansion endpoint mismatch");
  }
  return out;
}

ReplantPath contract_translations(const TranslationPath& p) {
  ReplantPath g;
  g.states.push_back(p.start);
  ColouredTree cur = p.start;
  for (const auto& mv : p.moves) {
    if (mv.op == 0)
      cur = trees::translate_leaf(cur, mv.vertex, trees::Dir::Right);
    else if (mv.op == 1)
      cur = trees::translate_leaf(cur, mv.vertex, trees::Dir::Left);
    else {
      cur = trees::recolour_leaf(cur, mv.vertex, mv.op - 1);
      g.states.push_back(cur);
    }
  }
  return g;
}

namespace {

// Distribution of the state after `steps` deletions started from t.
std::map<std::string, Rational> deletion_distribution(const ColouredTree& t, const Hierarchy& h,
                                                      int steps) {
  std::map<std::string, Rational> cur;
  cur[trees::tree_code(t)] = 1;
  for (int s = 0; s < steps; ++s) {
    std::map<std::string, Rational> next;
    for (const auto& [code, mass] : cur) {
      auto tt = trees::parse_tree_code(code, t.r);
      for (const auto& d : h.deletions(tt)) next[d.code] += mass * d.mass;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

CongestionReport audit_congestion(int n, int r, int i) {
  if (i < 0 || i > 2 * n) throw std::invalid_argument("audit_congestion: bad position");
  Hierarchy h(r);
  FiberMap f(n, r);
  const auto& codes = f.codes_n();
  const int sz = static_cast<int>(codes.size());
  const int mprev = static_cast<int>(f.codes_prev().size());

  CongestionReport rep;
  rep.bound = 2;
  for (int j = 0; j <= n; ++j) rep.bound *= 4 * r;
  rep.max_mass = 0;

  std::vector<ColouredTree> all;
  all.reserve(sz);
  for (const auto& c : codes) all.push_back(trees::parse_tree_code(c, r));

  auto account = [&](const std::string& code, const Rational& mass) {
    rep.per_state.push_back({code, mass});
    rep.max_mass = std::max(rep.max_mass, mass);
  };

  if (i == 0 || i == 2 * n) {
    // gamma(0) = t iff x = t: total mass over x,y is |T_n| (one unit per y).
    for (const auto& c : codes) account(c, sz);
    return rep;
  }

  if (i == n) {
    // t_n is determined by F(x,y): count pairs with F(x,y) = L(t).
    std::vector<long long> fiber_count(mprev, 0);
    for (int a = 0; a < sz; ++a)
      for (int b = 0; b < sz; ++b) ++fiber_count[f.map_index(a, b)];
    for (const auto& t : all) {
      auto s = trees::split_lr(t);
      Rational total = 0;
      if (s.left.edge_count() == n - 1 && s.root_colour == kPathRootColour) {
        const std::string zl = trees::tree_code(s.left);
        for (int j = 0; j < mprev; ++j)
          if (f.codes_prev()[j] == zl) total = fiber_count[j];
      }
      account(trees::tree_code(t), total);
    }
    return rep;
  }

  const int ii = (i < n) ? i : 2 * n - i;  // deletion depth on the R side
  const int wsteps = n - ii;               // depth from F(x,y) down to L(t)
  const int want_left = ii - 1;
  std::vector<std::map<std::string, Rational>> distA(sz), distW(mprev);
  for (int a = 0; a < sz; ++a) distA[a] = deletion_distribution(all[a], h, ii);
  for (int z = 0; z < mprev; ++z)
    distW[z] = deletion_distribution(trees::parse_tree_code(f.codes_prev()[z], r), h, wsteps);

  for (const auto& t : all) {
    auto s = trees::split_lr(t);
    if (s.left.edge_count() != want_left || s.root_colour != kPathRootColour) {
      account(trees::tree_code(t), 0);
      continue;
    }
    const std::string rt = trees::tree_code(s.right);
    const std::string lt = trees::tree_code(s.left);
    std::vector<Rational> A(sz), W(mprev);
    for (int a = 0; a < sz; ++a) {
      auto it = distA[a].find(rt);
      A[a] = (it == distA[a].end()) ? Rational(0) : it->second;
    }
    for (int z = 0; z < mprev; ++z) {
      auto it = distW[z].find(lt);
      W[z] = (it == distW[z].end()) ? Rational(0) : it->second;
    }
    Rational total = 0;
    for (int a = 0; a < sz; ++a) {
      if (A[a] == 0) continue;
      Rational inner = 0;
      for (int b = 0; b < sz; ++b) inner += W[f.map_index(a, b)];
      total += A[a] * inner;
    }
    account(trees::tree_code(t), total);
  }
  return rep;
}

Rational partial_sum_mass(int n, int r, int i, const ColouredTree& t) {
  Hierarchy h(r);
  Rational total = 0;
  const std::string want = trees::tree_code(t);
  trees::for_each_tree(n, r, [&](const ColouredTree& x) {
    auto dist = deletion_distribution(x, h, i);
    auto it = dist.find(want);
    if (it != dist.end()) total += it->second;
  });
  return total;
}

Rational partial_sum_expected(int n, int r, int i) {
  Rational total = 1;
  for (int j = 0; j < i; ++j)
    total *= Rational(coloured_tree_count(n - j, r)) / Rational(coloured_tree_count(n - j - 1, r));
  return total;
}

}  // namespace quadflip::canonical_paths
