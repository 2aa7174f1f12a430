#include "quadflip/chains.hpp"

#include <algorithm>
#include <map>

#include "quadflip/schaeffer.hpp"

namespace quadflip::chains {

Rational Kernel::prob(int i, int j) const {
  for (const auto& [col, p] : rows[i])
    if (col == j) return p;
  return Rational(0);
}

void Kernel::check_stochastic() const {
  for (const auto& row : rows) {
    Rational s = 0;
    for (const auto& [col, p] : row) {
      if (p < 0) throw std::logic_error("kernel: negative entry");
      s += p;
    }
    if (s != 1) throw std::logic_error("kernel: row sum != 1");
  }
}

void Kernel::check_symmetric() const {
  for (int i = 0; i < size(); ++i)
    for (const auto& [j, p] : rows[i])
      if (prob(j, i) != p) throw std::logic_error("kernel: not symmetric");
}

namespace {

struct RowAccum {
  std::vector<std::map<int, Rational>> acc;
  explicit RowAccum(int n) : acc(n) {}
  void add(int i, int j, const Rational& p) { acc[i][j] += p; }
  std::vector<std::vector<std::pair<int, Rational>>> done() {
    std::vector<std::vector<std::pair<int, Rational>>> rows(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) rows[i].assign(acc[i].begin(), acc[i].end());
    return rows;
  }
};

int index_of(const std::vector<std::string>& states, const std::string& key) {
  auto it = std::lower_bound(states.begin(), states.end(), key);
  if (it == states.end() || *it != key) throw std::logic_error("kernel: unknown state " + key);
  return static_cast<int>(it - states.begin());
}

std::vector<int> nonroot_vertices(const trees::ColouredTree& t) {
  std::vector<int> out;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (v != t.root) out.push_back(v);
  return out;
}

}  // namespace

std::string xtilde_key(const std::string& tree_code, int eps) {
  return tree_code + (eps > 0 ? " +" : " -");
}

Kernel kernel_flip(int n, bool pointed, int ceiling) {
  Kernel k;
  k.states = pointed ? schaeffer::enumerate_pointed_codes(n) : schaeffer::enumerate_rooted_codes(n);
  if (k.size() > ceiling) throw TooLarge("kernel_flip: state space exceeds ceiling");
  RowAccum acc(k.size());
  const Rational unit(1, 6 * n);
  for (int i = 0; i < k.size(); ++i) {
    auto dec = maps::decode(k.states[i]);
    acc.add(i, i, Rational(1, 3));  // the per-edge hold option
    for (std::uint32_t e = 0; e < static_cast<std::uint32_t>(2 * n); ++e)
      for (int s : {1, -1}) {
        std::string code;
        if (pointed) {
          maps::PointedQuadrangulation pq{dec.q, *dec.point};
          code = maps::canonical_code(maps::flip_pointed(pq, {e, s}));
        } else {
          code = maps::canonical_code(maps::flip(dec.q, {e, s}));
        }
        acc.add(i, index_of(k.states, code), unit);
      }
  }
  k.rows = acc.done();
  k.check_stochastic();
  return k;
}

namespace {

std::vector<std::string> tree_state_codes(int n, int r, int ceiling, const char* who) {
  BigInt count = coloured_tree_count(n, r);
  if (count > ceiling) throw TooLarge(std::string(who) + ": state space exceeds ceiling");
  std::vector<std::string> codes;
  for (const auto& t : trees::enumerate_trees(n, r)) codes.push_back(trees::tree_code(t));
  return codes;
}

}  // namespace

Kernel kernel_leaf_translation(int n, int r, int ceiling) {
  Kernel k;
  k.states = tree_state_codes(n, r, ceiling, "kernel_leaf_translation");
  RowAccum acc(k.size());
  const Rational unit(1, static_cast<long long>(n) * (r + 2));
  for (int i = 0; i < k.size(); ++i) {
    auto t = trees::parse_tree_code(k.states[i], r);
    for (int v : nonroot_vertices(t)) {
      if (!t.is_leaf(v)) {
        acc.add(i, i, Rational(1, n));
        continue;
      }
      for (trees::Dir d : {trees::Dir::Right, trees::Dir::Left})
        acc.add(i, index_of(k.states, trees::tree_code(trees::translate_leaf(t, v, d))), unit);
      for (int c = 1; c <= r; ++c)
        acc.add(i, index_of(k.states, trees::tree_code(trees::recolour_leaf(t, v, c))), unit);
    }
  }
  k.rows = acc.done();
  k.check_stochastic();
  return k;
}

Kernel kernel_leaf_replanting(int n, int r, int ceiling) {
  Kernel k;
  k.states = tree_state_codes(n, r, ceiling, "kernel_leaf_replanting");
  RowAccum acc(k.size());
  const Rational unit(1, static_cast<long long>(n) * (2 * n - 1) * r);
  for (int i = 0; i < k.size(); ++i) {
    auto t = trees::parse_tree_code(k.states[i], r);
    for (int v : nonroot_vertices(t)) {
      if (!t.is_leaf(v)) {
        acc.add(i, i, Rational(1, n));
        continue;
      }
      for (int kk = 1; kk <= 2 * n - 1; ++kk)
        for (int c = 1; c <= r; ++c)
          acc.add(i, index_of(k.states, trees::tree_code(trees::replant_leaf(t, v, kk, c))), unit);
    }
  }
  k.rows = acc.done();
  k.check_stochastic();
  return k;
}

Kernel kernel_xtilde(int n, int ceiling) {
  Kernel k;
  auto codes = tree_state_codes(n, 3, ceiling / 2, "kernel_xtilde");
  for (const auto& c : codes)
    for (int eps : {1, -1}) k.states.push_back(xtilde_key(c, eps));
  std::sort(k.states.begin(), k.states.end());
  RowAccum acc(k.size());
  const Rational flip_p(1, n + 1);
  const Rational move_p(1, 5 * (n + 1));
  for (int i = 0; i < k.size(); ++i) {
    const std::string& key = k.states[i];
    const std::string code = key.substr(0, key.size() - 2);
    const int eps = key.back() == '+' ? 1 : -1;
    auto t = trees::parse_tree_code(code, 3);
    acc.add(i, index_of(k.states, xtilde_key(code, -eps)), flip_p);
    for (int v : nonroot_vertices(t)) {
      if (!t.is_leaf(v)) {
        acc.add(i, i, Rational(1, n + 1));
        continue;
      }
      for (trees::Dir d : {trees::Dir::Right, trees::Dir::Left})
        acc.add(i,
                index_of(k.states,
                         xtilde_key(trees::tree_code(trees::translate_leaf(t, v, d)), eps)),
                move_p);
      for (int c = 1; c <= 3; ++c)
        acc.add(
            i,
            index_of(k.states, xtilde_key(trees::tree_code(trees::recolour_leaf(t, v, c)), eps)),
            move_p);
    }
  }
  k.rows = acc.done();
  k.check_stochastic();
  return k;
}

maps::Quadrangulation step_flip(const maps::Quadrangulation& q, RngStream& rng) {
  const int n = q.n();
  const std::uint64_t u = rng.below(6ULL * n);
  const std::uint32_t e = static_cast<std::uint32_t>(u / 3);
  const int act = static_cast<int>(u % 3);
  if (act == 2) return q;
  return maps::flip(q, {e, act == 0 ? 1 : -1});
}

maps::PointedQuadrangulation step_flip_pointed(const maps::PointedQuadrangulation& pq,
                                               RngStream& rng) {
  const int n = pq.q.n();
  const std::uint64_t u = rng.below(6ULL * n);
  const std::uint32_t e = static_cast<std::uint32_t>(u / 3);
  const int act = static_cast<int>(u % 3);
  if (act == 2) return pq;
  return maps::flip_pointed(pq, {e, act == 0 ? 1 : -1});
}

namespace {

int nth_nonroot(const trees::ColouredTree& t, int i) { return i < t.root ? i : i + 1; }

}  // namespace

trees::ColouredTree step_translation(const trees::ColouredTree& t, RngStream& rng) {
  const int n = t.edge_count(), r = t.r;
  const std::uint64_t u = rng.below(static_cast<std::uint64_t>(n) * (r + 2));
  const int v = nth_nonroot(t, static_cast<int>(u / (r + 2)));
  const int act = static_cast<int>(u % (r + 2));
  if (!t.is_leaf(v)) return t;
  if (act == 0) return trees::translate_leaf(t, v, trees::Dir::Right);
  if (act == 1) return trees::translate_leaf(t, v, trees::Dir::Left);
  return trees::recolour_leaf(t, v, act - 1);
}

trees::ColouredTree step_replanting(const trees::ColouredTree& t, RngStream& rng) {
  const int n = t.edge_count(), r = t.r;
  const std::uint64_t u = rng.below(static_cast<std::uint64_t>(n) * (2 * n - 1) * r);
  const int v = nth_nonroot(t, static_cast<int>(u / ((2 * n - 1) * r)));
  if (!t.is_leaf(v)) return t;
  const int rest = static_cast<int>(u % ((2 * n - 1) * r));
  const int k = 1 + rest / r;
  const int c = 1 + rest % r;
  return trees::replant_leaf(t, v, k, c);
}

void step_xtilde(trees::ColouredTree& t, int& eps, RngStream& rng) {
  const int n = t.edge_count();
  const std::uint64_t u = rng.below(5ULL * n * (n + 1));
  if (u < 5ULL * n) {
    eps = -eps;
    return;
  }
  const std::uint64_t v = u - 5ULL * n;
  const int vert = nth_nonroot(t, static_cast<int>((v / 5) % n));
  const int act = static_cast<int>(v % 5);
  if (!t.is_leaf(vert)) return;
  switch (act) {
    case 0: t = trees::translate_leaf(t, vert, trees::Dir::Right); break;
    case 1: t = trees::translate_leaf(t, vert, trees::Dir::Left); break;
    case 2: t = trees::recolour_leaf(t, vert, 1); break;
    case 3: t = trees::recolour_leaf(t, vert, 3); break;
    default: t = trees::recolour_leaf(t, vert, 2); break;
  }
}

ChainKind chain_kind_from_name(const std::string& name) {
  if (name == "flip") return ChainKind::Flip;
  if (name == "flip-pointed") return ChainKind::FlipPointed;
  if (name == "translate") return ChainKind::Translate;
  if (name == "replant") return ChainKind::Replant;
  if (name == "xtilde") return ChainKind::Xtilde;
  throw std::invalid_argument("unknown chain: " + name);
}

namespace {

trees::ColouredTree star_tree(int n, int r) {
  // height-1 star with all edges coloured 1
  std::string code;
  for (int i = 0; i < n; ++i) {
    code += "(";
    code += trees::colour_char(1, r);
    code += ")";
  }
  return trees::parse_tree_code(code, r);
}

double observe_map(const std::string& name, const maps::Quadrangulation& q) {
  if (name == "radius") return maps::radius(q);
  if (name == "root_degree") return maps::degree(q, q.root);
  if (name == "ball2") return maps::ball_size(q, 2);
  if (name == "far_set") return maps::far_set_size(q);
  throw std::invalid_argument("unknown map observable: " + name);
}

double observe_tree(const std::string& name, const trees::ColouredTree& t) {
  if (name == "height") return trees::height(t);
  if (name == "leaves") {
    int c = 0;
    for (int v = 0; v < t.vertex_count(); ++v)
      if (t.is_leaf(v)) ++c;
    return c;
  }
  if (name == "max_label") {
    auto l = trees::labels(t);
    return *std::max_element(l.begin(), l.end());
  }
  throw std::invalid_argument("unknown tree observable: " + name);
}

}  // namespace

TrajectorySummary simulate(ChainKind kind, int n, int r, std::uint64_t steps, std::uint64_t seed,
                           const std::vector<std::string>& observables, std::uint64_t every) {
  TrajectorySummary out;
  out.observable_names = observables;
  RngStream rng(seed);
  if (every == 0) every = 1;

  const bool is_map = (kind == ChainKind::Flip || kind == ChainKind::FlipPointed);
  if (kind == ChainKind::Xtilde) r = 3;
  maps::PointedQuadrangulation pq;
  trees::ColouredTree t = star_tree(std::max(n, 1), is_map ? 3 : r);
  int eps = 1;
  if (is_map) pq = maps::make_q0_pointed(n);

  auto record = [&](std::uint64_t step) {
    TrajectoryRow row;
    row.step = step;
    for (const auto& name : observables)
      row.values.push_back(is_map ? observe_map(name, pq.q) : observe_tree(name, t));
    out.rows.push_back(std::move(row));
  };
  record(0);
  for (std::uint64_t s = 1; s <= steps; ++s) {
    switch (kind) {
      case ChainKind::Flip: pq.q = step_flip(pq.q, rng); break;
      case ChainKind::FlipPointed: pq = step_flip_pointed(pq, rng); break;
      case ChainKind::Translate: t = step_translation(t, rng); break;
      case ChainKind::Replant: t = step_replanting(t, rng); break;
      case ChainKind::Xtilde: step_xtilde(t, eps, rng); break;
    }
    if (s % every == 0 || s == steps) record(s);
  }
  if (is_map) {
    out.final_state = kind == ChainKind::FlipPointed ? maps::canonical_code(pq)
                                                     : maps::canonical_code(pq.q);
  } else {
    out.final_state = trees::tree_code(t);
    if (kind == ChainKind::Xtilde) out.final_state = xtilde_key(out.final_state, eps);
  }
  return out;
}

}  // namespace quadflip::chains
