#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadflip::trees {

struct NotALeaf : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BadColour : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BadCorner : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotAPeak : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmptyTree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NegativeLabel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BadTreeCode : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Rooted plane tree with r-coloured edges. Vertices carry dense ids that
/// survive leaf moves (the moved leaf keeps its id); child order is the
/// plane structure. colour[v] is the colour of the edge (v, parent[v]),
/// in 1..r; colour[root] is unused and kept 0.
struct ColouredTree {
  int r = 1;
  int root = 0;
  std::vector<int> parent;        // -1 at root
  std::vector<int> first_child;   // -1 if none
  std::vector<int> next_sibling;  // -1 if last
  std::vector<int> colour;

  int vertex_count() const { return static_cast<int>(parent.size()); }
  int edge_count() const { return vertex_count() - 1; }

  bool is_leaf(int v) const { return v != root && first_child[v] == -1; }
  std::vector<int> children(int v) const;

  bool operator==(const ColouredTree& o) const;
};

ColouredTree single_vertex(int r);

void validate(const ColouredTree& t);

/// Corner of the clockwise contour: the gap at `vertex` before its
/// (gap+1)-th child; gap == #children means the gap after the last child
/// (only at non-root vertices).
struct Corner {
  int vertex;
  int gap;
};

/// The 2n corners of the clockwise contour, c_1..c_2n, index 0 = c_1.
std::vector<Corner> contour(const ColouredTree& t);

/// 1-based contour index of the unique corner at leaf v.
int leaf_corner_index(const ColouredTree& t, int v);

/// Code over the grammar S -> eps | '(' colour S ')' S. Colour chars are
/// '+','=','-' for r = 3 and '1'..'9' otherwise.
std::string tree_code(const ColouredTree& t);
ColouredTree parse_tree_code(const std::string& code, int r);

char colour_char(int c, int r);
int colour_from_char(char ch, int r);

/// All of T^(r)_n in lexicographic tree-code order.
std::vector<ColouredTree> enumerate_trees(int n, int r);

/// Leaf replanting t^{v,k,c}: detach leaf v, re-attach it via corner c_k of
/// the reduced tree (k in 1..2n-1, with the k=1 / k=2n-1 re-rooting
/// conventions). The leaf keeps its vertex id.
ColouredTree replant_leaf(const ColouredTree& t, int v, int k, int c);

enum class Dir { Left, Right };

/// Leaf translation t^{v,->} / t^{v,<-}; colour preserved, identity at the
/// contour boundary cases.
ColouredTree translate_leaf(const ColouredTree& t, int v, Dir d);

ColouredTree recolour_leaf(const ColouredTree& t, int v, int c);

/// Labels for r = 3 trees: colour 1/2/3 increments +1/0/-1 along root paths.
int colour_increment(int c);
std::vector<int> labels(const ColouredTree& t);
int label_of(const ColouredTree& t, int v);
bool all_labels_nonnegative(const ColouredTree& t);

int height(const ColouredTree& t);

/// Dyck word view (shape only): D[i], i = 0..2n, D[0] = D[2n] = 0.
std::vector<int> to_dyck(const ColouredTree& t);
bool is_peak(const std::vector<int>& d, int i);
std::vector<int> peak_shift(const std::vector<int>& d, int i, Dir dir);

/// Root-edge decomposition t -> (L, R, root colour) and its inverse.
struct SplitLR {
  ColouredTree left;
  ColouredTree right;
  int root_colour;
};
SplitLR split_lr(const ColouredTree& t);
ColouredTree join_lr(const ColouredTree& left, const ColouredTree& right, int root_colour);

/// Delete leaf v (fresh dense ids in the result).
ColouredTree delete_leaf(const ColouredTree& t, int v);

/// Insert a new leaf of colour c at corner `at` of t; insertion into the
/// root corner attaches as first child unless root_corner_as_last is set.
/// Fresh ids; for callers that do not need id stability.
ColouredTree insert_leaf_at_corner(const ColouredTree& t, Corner at, int c,
                                   bool root_corner_as_last = false);

/// All single-leaf insertions of t: 2n+1 positions times r colours
/// (possibly with repeats as coloured trees).
std::vector<ColouredTree> leaf_insertions(const ColouredTree& t);

/// Visit every tree of T^(r)_n once (no ordering guarantee). The visited
/// tree is reused storage; callers must copy if they retain it.
void for_each_tree(int n, int r, const std::function<void(const ColouredTree&)>& fn);

/// Re-root a nonnegative labelled tree at its leftmost maximum-label corner
/// and relabel v -> M - l(v); the inverse uses the rightmost such corner.
ColouredTree reroot_max_label(const ColouredTree& t);
ColouredTree reroot_max_label_inverse(const ColouredTree& t);

/// JSON export {"parent": [...], "colour": [...]} with contour-DFS ids.
std::string to_json(const ColouredTree& t);

}  // namespace quadflip::trees
