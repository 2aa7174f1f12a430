#pragma once

#include <string>
#include <vector>

#include "quadflip/numeric.hpp"
#include "quadflip/rng.hpp"
#include "quadflip/trees.hpp"

namespace quadflip::canonical_paths {

/// The splitting constants C^(n)_i = i(i+1)(3n-2i-1) / ((n-1)n(n+1)),
/// i = 0..n-1, exact.
std::vector<Rational> constants(int n);

/// The recursive one-leaf-deletion weight family over r-coloured trees:
/// weight(t, t') is supported on leaf deletions, rows sum to 1 and columns
/// to |T_n|/|T_{n-1}|.
class Hierarchy {
 public:
  explicit Hierarchy(int r, int max_n = 64);
  int r() const { return r_; }

  /// weight via the pair decomposition; 0 when t' is not t minus a leaf.
  Rational weight_pair(const trees::ColouredTree& t, const trees::ColouredTree& tp) const;

  /// weight of the specific deletion t -> t \ v (v must be a leaf); equal
  /// to weight_pair(t, delete_leaf(t, v)).
  Rational weight_of_leaf(const trees::ColouredTree& t, int v) const;

  struct Deletion {
    std::string code;  // code of the reduced tree
    int leaf;          // a representative leaf realizing it
    Rational mass;
  };
  /// Distinct one-leaf deletions of t with their weights (masses sum to 1).
  std::vector<Deletion> deletions(const trees::ColouredTree& t) const;

 private:
  const std::vector<Rational>& consts(int m) const;

  int r_;
  std::vector<std::vector<Rational>> cache_;  // cache_[m] = constants(m), m >= 2
};

/// Deterministic pairing (t_a, t_b) -> tau_{(a+b) mod |T_{n-1}|} over the
/// lexicographic tree-code enumerations; each fiber slice has size <= 8r.
class FiberMap {
 public:
  FiberMap(int n, int r);
  int n() const { return n_; }
  int r() const { return r_; }
  const std::vector<std::string>& codes_n() const { return codes_n_; }
  const std::vector<std::string>& codes_prev() const { return codes_prev_; }

  int index_n(const std::string& code) const;
  int map_index(int a, int b) const;
  trees::ColouredTree map(const trees::ColouredTree& x, const trees::ColouredTree& y) const;

 private:
  int n_, r_;
  std::vector<std::string> codes_n_, codes_prev_;
};

/// Deletion sequence t_0, ..., t_m down to the single vertex.
using DeletionSequence = std::vector<trees::ColouredTree>;

DeletionSequence sample_deletion(const trees::ColouredTree& t, const Hierarchy& h, RngStream& rng);
Rational deletion_mass(const DeletionSequence& seq, const Hierarchy& h);
/// All deletion sequences of t (small n only).
std::vector<DeletionSequence> enumerate_deletions(const trees::ColouredTree& t);

/// A replanting path x = t_0, ..., t_2n = y whose left component grows to
/// F(x,y) at the midpoint and shrinks back; intermediate root colour fixed
/// to 1 so that paths correspond bijectively to quadruples of deletion
/// sequences.
struct ReplantPath {
  std::vector<trees::ColouredTree> states;
};

ReplantPath assemble_path(const trees::ColouredTree& x, const trees::ColouredTree& y,
                          const DeletionSequence& r1, const DeletionSequence& r2,
                          const DeletionSequence& l1, const DeletionSequence& l2);
struct PathParts {
  DeletionSequence r1, r2, l1, l2;
};
PathParts disassemble_path(const ReplantPath& g);

ReplantPath sample_gamma(const trees::ColouredTree& x, const trees::ColouredTree& y,
                         const Hierarchy& h, const FiberMap& f, RngStream& rng);
Rational gamma_mass(const ReplantPath& g, const trees::ColouredTree& x,
                    const trees::ColouredTree& y, const Hierarchy& h, const FiberMap& f);
std::vector<ReplantPath> enumerate_gammas(const trees::ColouredTree& x,
                                          const trees::ColouredTree& y, const FiberMap& f);

/// Check the structural constraints of a replanting path (throws on
/// violation): endpoints, left-component sizes, every step a legal replant.
void validate_gamma(const ReplantPath& g, const trees::ColouredTree& x,
                    const trees::ColouredTree& y, const FiberMap& f);

/// Expansion of a replanting path into single leaf translations plus one
/// recolouring marker per replant (markers kept even when trivial so the
/// contraction can split segments).
struct TranslationMove {
  int vertex;
  int op;  // 0 = right, 1 = left, >= 2: recolour to op-1
};
struct TranslationPath {
  trees::ColouredTree start;
  std::vector<TranslationMove> moves;
};
TranslationPath expand_translations(const ReplantPath& g);
ReplantPath contract_translations(const TranslationPath& p);

struct CongestionReport {
  Rational max_mass;                 // max over t of the audited sum
  Rational bound;                    // 2 (4r)^{n+1}
  std::vector<std::pair<std::string, Rational>> per_state;
};
/// Exact rational audit of sum_{x,y} P_{x->y}({gamma(i) = t}) over all t.
CongestionReport audit_congestion(int n, int r, int i);

/// sum_x Q^x({R : R_i = t}) for t in T^(r)_{n-i}; equals the telescoped
/// column-sum product for every t.
Rational partial_sum_mass(int n, int r, int i, const trees::ColouredTree& t);
Rational partial_sum_expected(int n, int r, int i);

}  // namespace quadflip::canonical_paths
