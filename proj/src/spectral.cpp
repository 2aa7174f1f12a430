#include "quadflip/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "quadflip/canonical_paths.hpp"
#include "quadflip/flip_paths.hpp"
#include "quadflip/schaeffer.hpp"

namespace quadflip::spectral {

namespace {

Eigen::MatrixXd dense_view(const chains::Kernel& k) {
  const int n = k.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (const auto& [j, pr] : k.rows[i])
      p(i, j) = static_cast<double>(Rational(pr).convert_to<double>());
  return p;
}

// Second-largest eigenvalue by power iteration on (P+I)/2 with the uniform
// direction projected out; the shift keeps the spectrum nonnegative so the
// iteration cannot lock onto a large negative eigenvalue.
double lambda2_power(const Eigen::MatrixXd& p, int iters = 20000, double tol = 1e-13) {
  const int n = static_cast<int>(p.rows());
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0 + n);
  v.array() -= v.mean();
  v.normalize();
  double prev = 0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd w = 0.5 * (p * v + v);
    w.array() -= w.mean();
    const double norm = w.norm();
    if (norm == 0) return -1;  // deflated space annihilated: lambda2 = -1
    w /= norm;
    const double est = w.dot(0.5 * (p * w + w));
    v = w;
    if (it > 10 && std::abs(est - prev) < tol) {
      prev = est;
      break;
    }
    prev = est;
  }
  return 2 * prev - 1;
}

}  // namespace

GapResult spectral_gap(const chains::Kernel& k) {
  GapResult out;
  out.states = k.size();
  Eigen::MatrixXd p = dense_view(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  const auto& ev = es.eigenvalues();
  const int n = k.size();
  out.lambda2 = n >= 2 ? ev(n - 2) : -1;
  out.gap = 1 - out.lambda2;
  if (n >= 2) {
    Eigen::VectorXd v2 = es.eigenvectors().col(n - 2);
    out.dense_residual = (p * v2 - out.lambda2 * v2).lpNorm<Eigen::Infinity>();
    const double power = lambda2_power(p);
    out.solver_agreement = std::abs(power - out.lambda2);
    if (out.solver_agreement > kSolverTolerance)
      throw std::runtime_error("spectral_gap: eigensolvers disagree");
    // top eigenvector must be uniform
    Eigen::VectorXd top = es.eigenvectors().col(n - 1);
    const double u = 1.0 / std::sqrt(static_cast<double>(n));
    double dev = 0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(std::abs(top(i)) - u));
    if (dev > 1e-7 || std::abs(ev(n - 1) - 1.0) > kResidualTolerance)
      throw std::runtime_error("spectral_gap: top eigenpair is not the uniform vector");
  }
  return out;
}

double dirichlet_form(const chains::Kernel& k, const std::vector<double>& f) {
  const int n = k.size();
  double e = 0;
  for (int i = 0; i < n; ++i)
    for (const auto& [j, pr] : k.rows[i]) {
      const double d = f[i] - f[j];
      e += Rational(pr).convert_to<double>() * d * d;
    }
  return 0.5 * e / n;  // pi uniform
}

double variance(const std::vector<double>& f) {
  const double n = static_cast<double>(f.size());
  double mean = 0;
  for (double x : f) mean += x;
  mean /= n;
  double var = 0;
  for (double x : f) var += (x - mean) * (x - mean);
  return var / n;
}

double rayleigh(const chains::Kernel& k, const std::vector<double>& f) {
  const double var = variance(f);
  if (var == 0) throw ConstantObservable("rayleigh: observable is constant");
  return dirichlet_form(k, f) / var;
}

std::vector<double> observable_values(const chains::Kernel& k,
                                      const std::function<double(const std::string&)>& f) {
  std::vector<double> out;
  out.reserve(k.size());
  for (const auto& s : k.states) out.push_back(f(s));
  return out;
}

bool InequalityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

namespace {

std::vector<double> second_eigenvector(const chains::Kernel& k) {
  Eigen::MatrixXd p = dense_view(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  Eigen::VectorXd v = es.eigenvectors().col(k.size() - 2);
  // normalize to unit variance under the uniform measure
  const double n = k.size();
  double mean = v.mean();
  double var = 0;
  for (int i = 0; i < k.size(); ++i) var += (v(i) - mean) * (v(i) - mean);
  var /= n;
  std::vector<double> out(k.size());
  for (int i = 0; i < k.size(); ++i) out[i] = (v(i) - mean) / std::sqrt(var);
  return out;
}

int state_index(const chains::Kernel& k, const std::string& key) {
  auto it = std::lower_bound(k.states.begin(), k.states.end(), key);
  if (it == k.states.end() || *it != key) throw std::logic_error("state_index: missing " + key);
  return static_cast<int>(it - k.states.begin());
}

}  // namespace

InequalityReport verify_inequalities(int n) {
  InequalityReport rep;
  rep.n = n;
  const double tol = 1e-9;
  auto add = [&](const std::string& name, double lhs, double rhs, bool pass) {
    rep.checks.push_back({name, lhs, rhs, pass});
  };

  auto flip = chains::kernel_flip(n, false);
  auto flip_pt = chains::kernel_flip(n, true);
  const double nu = spectral_gap(flip).gap;
  const double nu_pt = spectral_gap(flip_pt).gap;
  add("pointed_gap_le_gap", nu_pt, nu, nu_pt <= nu + tol);

  {
    auto radius = observable_values(flip, [](const std::string& code) {
      return static_cast<double>(maps::radius(maps::decode(code).q));
    });
    const double rq = rayleigh(flip, radius);
    add("rayleigh_radius", nu, rq, nu <= rq + tol);
  }
  {
    auto x1 = chains::kernel_leaf_translation(n, 1);
    auto height = observable_values(x1, [](const std::string& code) {
      return static_cast<double>(trees::height(trees::parse_tree_code(code, 1)));
    });
    const double gx1 = spectral_gap(x1).gap;
    const double rq = rayleigh(x1, height);
    add("rayleigh_height", gx1, rq, gx1 <= rq + tol);
  }

  auto xt = chains::kernel_xtilde(n);
  auto x3 = chains::kernel_leaf_translation(n, 3);
  const double gamma_tilde = spectral_gap(xt).gap;
  const double gamma_x3 = spectral_gap(x3).gap;
  {
    // sign decomposition evaluated on the gap-achieving eigenvector
    auto f = second_eigenvector(xt);
    const int half = xt.size() / 2;
    double mean_plus = 0, mean_minus = 0;
    double var_plus = 0, var_minus = 0;
    std::vector<double> fp, fm;
    for (int i = 0; i < xt.size(); ++i) {
      if (xt.states[i].back() == '+')
        fp.push_back(f[i]);
      else
        fm.push_back(f[i]);
    }
    for (double x : fp) mean_plus += x;
    mean_plus /= half;
    for (double x : fm) mean_minus += x;
    mean_minus /= half;
    for (double x : fp) var_plus += (x - mean_plus) * (x - mean_plus);
    var_plus /= half;
    for (double x : fm) var_minus += (x - mean_minus) * (x - mean_minus);
    var_minus /= half;
    const double e_var = 0.5 * (var_plus + var_minus);
    const double mu = 0.5 * (mean_plus + mean_minus);
    const double var_e =
        0.5 * ((mean_plus - mu) * (mean_plus - mu) + (mean_minus - mu) * (mean_minus - mu));
    const double rhs =
        (static_cast<double>(n) * gamma_x3 / (n + 1)) * e_var + (2.0 / (n + 1)) * var_e;
    add("xtilde_decomposition", gamma_tilde, rhs, gamma_tilde >= rhs - tol);
    const double min_form = std::min(static_cast<double>(n) * gamma_x3 / (n + 1), 2.0 / (n + 1));
    add("xtilde_min_form", gamma_tilde, min_form, gamma_tilde >= min_form - tol);
  }

  if (n <= 3) {
    // Full comparison chain with measured path lengths and congestion: the
    // pointed-gap eigenvector is pushed through the bijection and its
    // telescoped Dirichlet mass is dominated by the audited occurrence
    // counts.
    auto f = second_eigenvector(flip_pt);
    auto g_of = [&](const trees::ColouredTree& t, int eps) {
      return f[state_index(flip_pt,
                           maps::canonical_code(schaeffer::phi(schaeffer::SignedTree{t, eps})))];
    };
    const auto lt = trees::enumerate_trees(n, 3);
    const double sz_lt = static_cast<double>(lt.size());

    double e_moves = 0, e_signs = 0;         // exact Dirichlet components
    double cs_moves = 0, cs_signs = 0;       // Cauchy-Schwarz dominations
    long long len_moves = 0, len_signs = 0;  // measured maximal lengths
    auto delta2_sum = [&](const flip_paths::FlipPath& p) {
      double s = 0;
      maps::PointedQuadrangulation cur = p.start;
      for (const auto& mv : p.moves) {
        auto nxt = maps::flip_pointed(cur, mv);
        const double d = f[state_index(flip_pt, maps::canonical_code(cur))] -
                         f[state_index(flip_pt, maps::canonical_code(nxt))];
        s += d * d;
        cur = nxt;
      }
      return s;
    };
    for (const auto& t : lt) {
      {
        auto p = flip_paths::path_root_reversal(t);
        const double diff = g_of(t, 1) - g_of(t, -1);
        e_signs += diff * diff;
        cs_signs += p.length() * delta2_sum(p);
        len_signs = std::max<long long>(len_signs, p.length());
      }
      for (int v = 0; v < t.vertex_count(); ++v) {
        if (!t.is_leaf(v)) continue;
        for (int eps : {1, -1}) {
          for (int x = 1; x <= 3; ++x) {
            auto p = flip_paths::path_colour_change(t, v, x, eps);
            const double diff = g_of(t, eps) - g_of(trees::recolour_leaf(t, v, x), eps);
            e_moves += diff * diff;
            cs_moves += p.length() * delta2_sum(p);
            len_moves = std::max<long long>(len_moves, p.length());
          }
          for (trees::Dir d : {trees::Dir::Right, trees::Dir::Left}) {
            auto p = flip_paths::path_leaf_translation(t, v, d, eps);
            const double diff = g_of(t, eps) - g_of(trees::translate_leaf(t, v, d), eps);
            e_moves += diff * diff;
            cs_moves += p.length() * delta2_sum(p);
            len_moves = std::max<long long>(len_moves, p.length());
          }
        }
      }
    }
    const double move_w = 0.5 / (2 * sz_lt) / (5.0 * (n + 1));
    const double sign_w = 1.0 / (2 * sz_lt) / (n + 1);
    const double e_exact = move_w * e_moves + sign_w * e_signs;
    add("comparison_rayleigh", gamma_tilde, e_exact, gamma_tilde <= e_exact + tol);
    const double e_cs = move_w * cs_moves + sign_w * cs_signs;
    add("comparison_cauchy_schwarz", e_exact, e_cs, e_exact <= e_cs + tol);

    // audited congestion: per-key totals dominate the per-path sums
    auto audit = flip_paths::audit_flip_congestion(n);
    std::map<std::string, long long> merged = audit.colour_change;
    for (const auto& [k2, c] : audit.translation) merged[k2] += c;
    long long m_moves = 0, m_signs = audit.max_root_reversal, m_all = 0;
    for (const auto& [k2, c] : merged) m_moves = std::max(m_moves, c);
    {
      std::map<std::string, long long> all = merged;
      for (const auto& [k2, c] : audit.root_reversal) all[k2] += c;
      for (const auto& [k2, c] : all) m_all = std::max(m_all, c);
    }
    auto keyed_delta2 = [&](const std::map<std::string, long long>& occ) {
      double s = 0;
      for (const auto& [key, cnt] : occ) {
        const auto hash = key.find('#');
        const std::string code = key.substr(0, hash);
        const std::uint32_t e = std::stoul(key.substr(hash + 1, key.size() - hash - 2));
        const int sgn = key.back() == '+' ? 1 : -1;
        auto dec = maps::decode(code);
        maps::PointedQuadrangulation pq{dec.q, *dec.point};
        auto nxt = maps::flip_pointed(pq, {e, sgn});
        const double d = f[state_index(flip_pt, maps::canonical_code(pq))] -
                         f[state_index(flip_pt, maps::canonical_code(nxt))];
        s += static_cast<double>(cnt) * d * d;
      }
      return s;
    };
    const double occ_moves = keyed_delta2(merged);
    const double occ_signs = keyed_delta2(audit.root_reversal);
    const double e_occ =
        move_w * static_cast<double>(len_moves) * occ_moves +
        sign_w * static_cast<double>(len_signs) * occ_signs;
    add("comparison_congestion_assembly", e_cs, e_occ, e_cs <= e_occ + tol);

    // total dirichlet mass of the pointed chain: sum delta^2 = 12 n |states| nu_pt
    double total_delta2 = 0;
    for (int i = 0; i < flip_pt.size(); ++i) {
      auto dec = maps::decode(flip_pt.states[i]);
      maps::PointedQuadrangulation pq{dec.q, *dec.point};
      for (std::uint32_t e = 0; e < static_cast<std::uint32_t>(2 * n); ++e)
        for (int s : {1, -1}) {
          auto nxt = maps::flip_pointed(pq, {e, s});
          const double d = f[i] - f[state_index(flip_pt, maps::canonical_code(nxt))];
          total_delta2 += d * d;
        }
    }
    const double e_final = move_w * static_cast<double>(len_moves * m_moves) * total_delta2 +
                           sign_w * static_cast<double>(len_signs * m_signs) * total_delta2;
    add("comparison_congestion_bound", e_occ, e_final, e_occ <= e_final + tol);
    // and sum delta^2 relates back to the pointed gap
    const double dirichlet_identity = 12.0 * n * flip_pt.size() * nu_pt;
    add("comparison_dirichlet_identity", total_delta2, dirichlet_identity,
        std::abs(total_delta2 - dirichlet_identity) <= 1e-6 * std::max(1.0, dirichlet_identity));
    const double literal = 7.0 * n * static_cast<double>(m_all) * 6.0 * n * nu_pt;
    add("comparison_7n_form", gamma_tilde, literal, gamma_tilde <= literal + tol);
  }

  return rep;
}

LawIdentityReport law_identity_check(int n) {
  LawIdentityReport rep;
  rep.n = n;
  for (const auto& code : schaeffer::enumerate_rooted_codes(n)) {
    auto q = maps::decode(code).q;
    ++rep.far_histogram[maps::far_set_size(q)];
    ++rep.ball2_histogram[maps::ball_size(q, 2) - 1];
  }
  rep.equal = rep.far_histogram == rep.ball2_histogram;
  return rep;
}

double log_log_slope(const std::vector<std::pair<int, double>>& points) {
  const double n = static_cast<double>(points.size());
  if (points.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [k, v] : points) {
    const double x = std::log(static_cast<double>(k)), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace quadflip::spectral
