#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "quadflip/chains.hpp"
#include "quadflip/numeric.hpp"

namespace quadflip::spectral {

struct ConstantObservable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dense floating view of an exact symmetric kernel together with the gap
/// diagnostics from two independent eigensolvers.
struct GapResult {
  double gap = 0;
  double lambda2 = 0;
  double dense_residual = 0;   // ||P v - lambda2 v||_inf for the dense pair
  double solver_agreement = 0;  // |dense - power-iteration| estimate
  int states = 0;
};

inline constexpr double kSolverTolerance = 1e-8;
inline constexpr double kResidualTolerance = 1e-10;

/// 1 - lambda_2 via a dense symmetric eigensolver, cross-checked against a
/// deflated power iteration; throws if the two disagree beyond tolerance.
GapResult spectral_gap(const chains::Kernel& k);

/// Dirichlet form E(f, f) under the uniform-reversible kernel.
double dirichlet_form(const chains::Kernel& k, const std::vector<double>& f);
/// Variance under the uniform measure.
double variance(const std::vector<double>& f);
/// Rayleigh quotient E(f,f)/Var(f); throws ConstantObservable when Var = 0.
double rayleigh(const chains::Kernel& k, const std::vector<double>& f);

/// Observable evaluated per kernel state (decoded from the state key).
std::vector<double> observable_values(const chains::Kernel& k,
                                      const std::function<double(const std::string&)>& f);

struct InequalityCheck {
  std::string name;
  double lhs;
  double rhs;
  bool pass;
};
struct InequalityReport {
  int n;
  std::vector<InequalityCheck> checks;
  bool all_pass() const;
};

/// The finite-n inequality suite at size n: pointed gap below unpointed
/// gap, the Rayleigh principle for the radius and height observables, the
/// sign-decomposition bound for the augmented tree chain, and the full
/// comparison chain with measured path lengths and congestion.
InequalityReport verify_inequalities(int n);

struct LawIdentityReport {
  int n;
  std::map<int, long long> far_histogram;    // |S(q)| counts over Q_n
  std::map<int, long long> ball2_histogram;  // |B_2(q)| - 1 counts
  bool equal;
};
LawIdentityReport law_identity_check(int n);

/// Least-squares slope of log(gap) against log(n) over the given sizes;
/// descriptive only.
double log_log_slope(const std::vector<std::pair<int, double>>& points);

}  // namespace quadflip::spectral
