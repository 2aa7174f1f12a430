#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadflip/maps.hpp"
#include "quadflip/numeric.hpp"
#include "quadflip/rng.hpp"
#include "quadflip/trees.hpp"

namespace quadflip::chains {

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact transition kernel over an enumerated state space. Rows are sparse,
/// sorted by column, and sum to 1 in rational arithmetic.
struct Kernel {
  std::vector<std::string> states;  // sorted state keys
  std::vector<std::vector<std::pair<int, Rational>>> rows;

  int size() const { return static_cast<int>(states.size()); }
  Rational prob(int i, int j) const;
  void check_stochastic() const;
  void check_symmetric() const;
};

inline constexpr int kDefaultStateCeiling = 30000;

/// Edge-flip chain on Q_n (pointed = false) or on pointed quadrangulations
/// (pointed = true): p = 1/(6n) per (edge, {+,-,hold}).
Kernel kernel_flip(int n, bool pointed, int ceiling = kDefaultStateCeiling);

/// Leaf translation/recolouring chain on r-coloured trees.
Kernel kernel_leaf_translation(int n, int r, int ceiling = kDefaultStateCeiling);

/// Leaf replanting chain on r-coloured trees.
Kernel kernel_leaf_replanting(int n, int r, int ceiling = kDefaultStateCeiling);

/// The sign-augmented leaf move chain on labelled trees times {-1,+1}.
Kernel kernel_xtilde(int n, int ceiling = kDefaultStateCeiling);

/// State key helpers for the xtilde space.
std::string xtilde_key(const std::string& tree_code, int eps);

/// Single chain steps, reproducible from the stream contract: one uniform
/// draw decides (edge, action).
maps::Quadrangulation step_flip(const maps::Quadrangulation& q, RngStream& rng);
maps::PointedQuadrangulation step_flip_pointed(const maps::PointedQuadrangulation& q,
                                               RngStream& rng);
trees::ColouredTree step_translation(const trees::ColouredTree& t, RngStream& rng);
trees::ColouredTree step_replanting(const trees::ColouredTree& t, RngStream& rng);
void step_xtilde(trees::ColouredTree& t, int& eps, RngStream& rng);

enum class ChainKind { Flip, FlipPointed, Translate, Replant, Xtilde };
ChainKind chain_kind_from_name(const std::string& name);

struct TrajectoryRow {
  std::uint64_t step;
  std::vector<double> values;
};

struct TrajectorySummary {
  std::vector<std::string> observable_names;
  std::vector<TrajectoryRow> rows;
  std::string final_state;
};

/// Run `steps` steps from the canonical start state (q0 or the height-1
/// all-colour-1 star), recording observables every `every` steps.
TrajectorySummary simulate(ChainKind kind, int n, int r, std::uint64_t steps, std::uint64_t seed,
                           const std::vector<std::string>& observables, std::uint64_t every = 1);

}  // namespace quadflip::chains
