#include "m1sim/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace m1sim {

double Spectrum::max_residual(const SparseMatrix& h) const {
  std::vector<double> hv(dim);
  double worst = 0.0;
  for (int k = 0; k < count(); ++k) {
    h.apply(vec(k), std::span<double>(hv));
    double acc = 0.0;
    const double* v = vectors.data() + static_cast<std::size_t>(k) * dim;
    for (int i = 0; i < dim; ++i) {
      const double r = hv[i] - energies[k] * v[i];
      acc += r * r;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

double Spectrum::max_orthonormality_defect() const {
  double worst = 0.0;
  for (int a = 0; a < count(); ++a) {
    for (int b = a; b < count(); ++b) {
      double dot = 0.0;
      const double* va = vectors.data() + static_cast<std::size_t>(a) * dim;
      const double* vb = vectors.data() + static_cast<std::size_t>(b) * dim;
      for (int i = 0; i < dim; ++i) dot += va[i] * vb[i];
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

Spectrum diagonalize_dense(const SparseMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: square matrix required");
  Spectrum s;
  s.dim = h.rows();
  s.vectors = h.dense();
  s.energies.resize(s.dim);
  if (s.dim == 0) return s;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', s.dim, s.vectors.data(),
                                         s.dim, s.energies.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  return s;
}

Spectrum lanczos_lowest(const SparseMatrix& h, int k, double tol, int max_iter) {
  const int n = h.rows();
  if (k <= 0 || k > n) throw std::invalid_argument("lanczos: bad k");
  if (max_iter <= 0) max_iter = std::min(n, std::max(8 * k + 80, 200));
  // deterministic start vector
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.33 * std::sin(1.7 * i + 0.3);
  auto normalize = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    for (double& e : x) e /= s;
    return s;
  };
  normalize(v);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> w(n);
  Spectrum out;
  out.dim = n;
  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(v);
    h.apply(std::span<const double>(basis.back()), std::span<double>(w));
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += basis.back()[i] * w[i];
    alpha.push_back(a);
    for (int i = 0; i < n; ++i) w[i] -= a * basis.back()[i];
    if (!beta.empty())
      for (int i = 0; i < n; ++i) w[i] -= beta.back() * basis[basis.size() - 2][i];
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += u[i] * w[i];
        for (int i = 0; i < n; ++i) w[i] -= d * u[i];
      }
    }
    double b = 0.0;
    for (double e : w) b += e * e;
    b = std::sqrt(b);
    const int m = static_cast<int>(alpha.size());
    if (m >= k) {
      // tridiagonal eigenproblem
      std::vector<double> d = alpha, e(beta.begin(), beta.end());
      e.resize(m, 0.0);
      std::vector<double> z(static_cast<std::size_t>(m) * m);
      const lapack_int info =
          LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', m, d.data(), e.data(), z.data(), m);
      if (info != 0) throw std::runtime_error("dstev failed");
      // residual of Ritz pair j: beta_m * |z[m-1, j]|
      double worst = 0.0;
      for (int j = 0; j < k; ++j)
        worst = std::max(worst, b * std::abs(z[static_cast<std::size_t>(j) * m + m - 1]));
      if (worst < tol || b < 1e-14 || m == n) {
        out.energies.assign(d.begin(), d.begin() + k);
        out.vectors.assign(static_cast<std::size_t>(k) * n, 0.0);
        for (int j = 0; j < k; ++j) {
          double* dst = out.vectors.data() + static_cast<std::size_t>(j) * n;
          for (int q = 0; q < m; ++q) {
            const double zq = z[static_cast<std::size_t>(j) * m + q];
            const double* u = basis[q].data();
            for (int i = 0; i < n; ++i) dst[i] += zq * u[i];
          }
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += dst[i] * dst[i];
          s = std::sqrt(s);
          for (int i = 0; i < n; ++i) dst[i] /= s;
        }
        return out;
      }
    }
    if (b < 1e-14) {
      // invariant subspace hit before convergence target; restart direction
      for (int i = 0; i < n; ++i) w[i] = std::cos(0.7 * i + 1.1);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : basis) {
          double dd = 0.0;
          for (int i = 0; i < n; ++i) dd += u[i] * w[i];
          for (int i = 0; i < n; ++i) w[i] -= dd * u[i];
        }
      b = 0.0;
      for (double e2 : w) b += e2 * e2;
      b = std::sqrt(b);
      if (b < 1e-14) throw std::runtime_error("lanczos: basis exhausted");
    }
    beta.push_back(b);
    for (int i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  throw std::runtime_error("lanczos: no convergence within iteration budget");
}

Spectrum diagonalize(const SparseMatrix& h, const DiagOptions& opts) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: square matrix required");
  if (h.hermiticity_defect() > 1e-10 * std::max(1.0, h.max_abs()))
    throw std::invalid_argument("diagonalize: non-Hermitian input");
  if (opts.k_lowest < 0 || h.rows() <= opts.dense_threshold) {
    Spectrum s = diagonalize_dense(h);
    if (opts.k_lowest >= 0 && opts.k_lowest < s.count()) {
      s.energies.resize(opts.k_lowest);
      s.vectors.resize(static_cast<std::size_t>(opts.k_lowest) * s.dim);
    }
    return s;
  }
  return lanczos_lowest(h, opts.k_lowest, opts.tol, opts.max_iter);
}

DensityProfile ground_state_densities(int l, double lambda, bool with_energy) {
  const int L = 3 * l;
  HilbertSpace space = enumerate_space(L, l, Boundary::open, true);
  const Staggering st = stagger_1l1(L, lambda);
  SparseMatrix h = build_hq(space, st);
  Spectrum s = diagonalize(h);
  if (s.count() >= 2 && s.energies[1] - s.energies[0] < 1e-8)
    throw std::runtime_error("ground_state_densities: degenerate ground state");
  DensityProfile out;
  out.site_densities.resize(L);
  std::span<const double> g = s.vec(0);
  for (int site = 1; site <= L; ++site) {
    const std::vector<double> nd = number_diagonal(space, site);
    double acc = 0.0;
    for (int i = 0; i < space.dim(); ++i) acc += nd[i] * g[i] * g[i];
    out.site_densities[site - 1] = acc;
  }
  if (with_energy) {
    out.energy_densities.resize(L);
    std::vector<double> hv(space.dim());
    for (int site = 1; site <= L; ++site) {
      SparseMatrix hi = build_local_energy(space, st, site);
      hi.apply(g, std::span<double>(hv));
      double acc = 0.0;
      for (int i = 0; i < space.dim(); ++i) acc += g[i] * hv[i];
      out.energy_densities[site - 1] = acc;
    }
  }
  return out;
}

DensityProfile cft_densities(int L, double amplitude) {
  if (L % 3 != 0) throw std::invalid_argument("cft_densities: L must be a multiple of 3");
  const double lp = L + 3.0;
  const double pref = std::pow(std::numbers::pi / (2.0 * lp), 1.0 / 3.0);
  auto sfun = [&](double x) { return pref * std::sin(std::numbers::pi * x / (3.0 * lp)); };
  auto cfun = [&](double x) { return pref * std::cos(std::numbers::pi * x / (3.0 * lp)); };
  auto frak = [&](double x) { return std::pow(std::sin(std::numbers::pi * x / lp), 1.0 / 3.0); };
  DensityProfile out;
  out.site_densities.resize(L);
  for (int i = 1; i <= L; ++i) {
    const double x = i;
    double v;
    if (i % 3 == 1)
      v = 1.0 / 3.0 - (2.0 * amplitude / 3.0) * sfun(x) / frak(x);
    else if (i % 3 == 2)
      v = 1.0 / 3.0 + (2.0 * amplitude / 3.0) * cfun(x - lp / 2.0) / frak(x);
    else
      v = 1.0 / 3.0 + (2.0 * amplitude / 3.0) * sfun(x - lp) / frak(x);
    out.site_densities[i - 1] = v;
  }
  return out;
}

PairingReport susy_pairing_report(int L, const Staggering& stagger, Boundary boundary) {
  PairingReport rep;
  const int nmax = boundary == Boundary::open ? (L + 1) / 2 : L / 2;
  for (int n = 0; n <= nmax; ++n) {
    HilbertSpace sp = enumerate_space(L, n, boundary, true);
    if (sp.dim() == 0) continue;
    Spectrum s = diagonalize(build_hq(sp, stagger));
    rep.sectors.push_back({n, s.energies});
  }
  auto matched_in = [&](double e, const std::vector<double>& list) {
    auto it = std::lower_bound(list.begin(), list.end(), e - rep.match_tol);
    return it != list.end() && *it <= e + rep.match_tol;
  };
  for (std::size_t si = 0; si < rep.sectors.size(); ++si) {
    for (double e : rep.sectors[si].energies) {
      if (e < rep.zero_tol) {
        ++rep.zero_modes;
        continue;  // zero modes are supersymmetry singlets
      }
      const bool up = si + 1 < rep.sectors.size() && matched_in(e, rep.sectors[si + 1].energies);
      const bool down = si > 0 && matched_in(e, rep.sectors[si - 1].energies);
      if (!up && !down) rep.unmatched.emplace_back(rep.sectors[si].n, e);
    }
  }
  return rep;
}

}  // namespace m1sim
