#include "m1sim/dressing.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace m1sim {

double vdw(const DressingLayer& layer, double r) {
  if (r <= 0.0) throw std::invalid_argument("vdw: r > 0 required");
  return layer.c6 / std::pow(r, 6);
}

double dressed_potential_pair(double omega_i, double omega_j, double delta, double c6, double r) {
  if (r <= 0.0) throw std::invalid_argument("dressed_potential: r > 0 required");
  const double v = c6 / std::pow(r, 6);
  const double oo = omega_i * omega_j;
  return 2.0 * oo * oo * v / (delta * delta * delta * (2.0 * delta + v));
}

double dressed_potential(const DressingLayer& layer, double r) {
  return dressed_potential_pair(layer.omega, layer.omega, layer.delta, layer.c6, r);
}

TwoAtomResult two_atom_oracle(double omega_i, double omega_j, double delta, double v) {
  TwoAtomResult res;
  res.closed_form = -2.0 * omega_i * omega_j * (2.0 * delta + v) /
                    (delta * (2.0 * delta + v) - 2.0 * omega_i * omega_j);
  // basis {gg, gr, rg, rr}
  double h[16] = {0.0,     omega_j, omega_i, 0.0,      //
                  omega_j, delta,   0.0,     omega_i,  //
                  omega_i, 0.0,     delta,   omega_j,  //
                  0.0,     omega_i, omega_j, 2.0 * delta + v};
  double w[4];
  const lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'U', 4, h, 4, w);
  if (info != 0) throw std::runtime_error("two_atom_oracle: dsyev failed");
  res.exact_ground = w[0];
  return res;
}

DressingLayer match_double_dressing(const DressingLayer& primary, double secondary_delta,
                                    double secondary_c6) {
  if (secondary_c6 >= 0.0 || secondary_delta >= 0.0)
    throw std::invalid_argument("match_double_dressing: attractive partner (c6, delta < 0) required");
  DressingLayer out;
  out.delta = secondary_delta;
  out.c6 = secondary_c6;
  out.omega = primary.omega * std::abs(secondary_delta / primary.delta) *
              std::pow(std::abs(primary.c6 / secondary_c6), 0.25);
  return out;
}

double PotentialDesign::total(double r) const {
  double acc = 0.0;
  for (const DressingLayer& l : layers) acc += dressed_potential(l, r);
  return acc;
}

double FredholmResult::target(double r_over_r0) const {
  const double n = r_over_r0;
  if (n <= 1.0) return suppression;
  if (n <= 2.0) return 1.0;
  if (n <= 3.0) return 1.0 / suppression;
  return (1.0 / suppression) * std::pow(3.0 / n, 6);
}

double FredholmResult::total(double r) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j)
    acc += amplitudes[j] / (std::pow(rho[j] * r, 6) + 1.0);
  return acc;
}

FredholmResult fredholm_design(double suppression, std::span<const double> rho_grid,
                               std::span<const double> fit_points, double rcond) {
  const int m = static_cast<int>(fit_points.size());
  const int n = static_cast<int>(rho_grid.size());
  if (m < 2 || n < 2) throw std::invalid_argument("fredholm_design: need >= 2 points and radii");
  for (double r : fit_points)
    if (r <= 0.0) throw std::invalid_argument("fredholm_design: fit points must be positive");
  for (double rho : rho_grid)
    if (rho <= 0.0) throw std::invalid_argument("fredholm_design: radii must be positive");

  FredholmResult res;
  res.suppression = suppression;
  res.rho.assign(rho_grid.begin(), rho_grid.end());

  std::vector<double> a(static_cast<std::size_t>(m) * n);  // column-major
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      a[static_cast<std::size_t>(j) * m + i] =
          1.0 / (std::pow(rho_grid[j] * fit_points[i], 6) + 1.0);
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = res.target(fit_points[i]);

  // SVD pseudoinverse with relative cutoff
  const int mn = std::min(m, n);
  std::vector<double> s(mn), u(static_cast<std::size_t>(m) * mn),
      vt(static_cast<std::size_t>(mn) * n);
  {
    std::vector<double> awork = a;
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, awork.data(), m, s.data(), u.data(), m,
                       vt.data(), mn);
    if (info != 0) throw std::runtime_error("fredholm_design: dgesdd failed");
  }
  const double cutoff = rcond * s[0];
  res.rank = 0;
  res.amplitudes.assign(n, 0.0);
  double dropped_sq = 0.0;
  for (int k = 0; k < mn; ++k) {
    double uk_dot = 0.0;
    for (int i = 0; i < m; ++i) uk_dot += u[static_cast<std::size_t>(k) * m + i] * rhs[i];
    if (s[k] > cutoff && s[k] > 0.0) {
      ++res.rank;
      const double c = uk_dot / s[k];
      for (int j = 0; j < n; ++j) res.amplitudes[j] += c * vt[static_cast<std::size_t>(j) * mn + k];
    } else {
      dropped_sq += uk_dot * uk_dot;
    }
  }
  if (res.rank < 2) throw std::runtime_error("fredholm_design: rank deficient (< 2)");
  // residual orthogonal to the retained singular space (plus any lsq remainder)
  double proj_sq = 0.0;
  for (int k = 0; k < mn; ++k) {
    double uk_dot = 0.0;
    for (int i = 0; i < m; ++i) uk_dot += u[static_cast<std::size_t>(k) * m + i] * rhs[i];
    proj_sq += uk_dot * uk_dot;
  }
  double rhs_sq = 0.0;
  for (double v : rhs) rhs_sq += v * v;
  // exact-arithmetic truncation residual plus a standard roundoff allowance
  double sig_min_kept = s[0];
  for (int k = 0; k < mn; ++k)
    if (s[k] > cutoff && s[k] > 0.0) sig_min_kept = std::min(sig_min_kept, s[k]);
  const double roundoff = 4.0 * mn * std::numeric_limits<double>::epsilon() *
                          (s[0] / sig_min_kept) * std::sqrt(rhs_sq);
  res.residual_estimate = std::sqrt(std::max(0.0, dropped_sq + (rhs_sq - proj_sq))) + roundoff;

  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    double fit = 0.0;
    for (int j = 0; j < n; ++j)
      fit += res.amplitudes[j] * a[static_cast<std::size_t>(j) * m + i];
    worst = std::max(worst, std::abs(fit - rhs[i]));
  }
  const double scale = std::abs(res.target(2.0));
  res.max_residual_rel = worst / scale;
  res.residual_estimate /= scale;
  return res;
}

OffcriticalPatterns offcritical_patterns(double lambda, int L, const Staggering& stagger) {
  if (stagger.sites != L) throw std::invalid_argument("offcritical_patterns: size mismatch");
  const Staggering st = stagger.with_lambda(lambda);
  OffcriticalPatterns out;
  out.bond_j.resize(L - 1);
  for (int i = 1; i < L; ++i) out.bond_j[i - 1] = st.coupling(i) * st.coupling(i + 1);
  out.w_nnn.resize(L - 2);
  for (int i = 1; i <= L - 2; ++i) {
    const double c = st.coupling(i + 1);
    out.w_nnn[i - 1] = c * c;
  }
  out.mu.assign(L, 0.0);
  for (int j = 1; j <= L; ++j) {
    double acc = 0.0;
    if (j - 1 >= 1) acc += st.coupling(j - 1) * st.coupling(j - 1);
    if (j + 1 <= L) acc += st.coupling(j + 1) * st.coupling(j + 1);
    out.mu[j - 1] = -acc;
  }
  out.omega.resize(L);
  for (int i = 1; i <= L; ++i) {
    const double li = st.coupling(i);
    // lambda / lambda_i realizes (Omega_i Omega_{i+2})^2 = lambda^2 lambda_{i+1}^2;
    // at extreme staggering the lambda slot keeps multiplier 1
    out.omega[i - 1] = li == 0.0 ? 0.0 : lambda / li;
    if (lambda == 0.0) out.omega[i - 1] = li == 0.0 ? 1.0 : 0.0;
  }
  return out;
}

DressedCouplings dressed_chain_couplings(double lambda, int L, const Staggering& stagger,
                                         const std::function<double(double)>& potential,
                                         double r0, bool include_tails) {
  OffcriticalPatterns pat = offcritical_patterns(lambda, L, stagger);
  DressedCouplings c;
  c.bond_j = pat.bond_j;
  c.mu = pat.mu;
  c.pair_w.assign(L - 1, {});
  c.pair_w[1].assign(L - 2, 0.0);
  for (int i = 1; i <= L - 2; ++i) c.pair_w[1][i - 1] = pat.w_nnn[i - 1];
  if (include_tails) {
    const double j_scale = lambda * lambda * potential(2.0 * r0);
    if (j_scale <= 0.0)
      throw std::invalid_argument("dressed_chain_couplings: W(2 r0) must be positive");
    for (int d = 3; d < L; ++d) {
      c.pair_w[d - 1].assign(L - d, 0.0);
      for (int i = 1; i + d <= L; ++i) {
        const double oo = pat.omega[i - 1] * pat.omega[i + d - 1];
        c.pair_w[d - 1][i - 1] = oo * oo * potential(d * r0) / j_scale;
      }
    }
  }
  return c;
}

TradeoffRatios tradeoff_ratios(const DressingLayer& layer, double r0, double gamma0) {
  if (r0 <= 0.0 || gamma0 < 0.0) throw std::invalid_argument("tradeoff_ratios: positive inputs");
  TradeoffRatios out;
  const double w2 = dressed_potential(layer, 2.0 * r0);
  const double w3 = dressed_potential(layer, 3.0 * r0);
  out.tail = w3 / w2;
  // quoted-frequency arithmetic: Omega, Delta in (non-angular) Hz
  const double om_raw = layer.omega / (2.0 * std::numbers::pi_v<double>);
  const double de_raw = layer.delta / (2.0 * std::numbers::pi_v<double>);
  const double w2_dimless = w2 / (std::pow(om_raw, 4) / std::pow(de_raw, 3));
  out.scatter = (de_raw / 1e6) * gamma0 / (w2_dimless * std::pow(om_raw / 1e6, 2));
  return out;
}

}  // namespace m1sim
