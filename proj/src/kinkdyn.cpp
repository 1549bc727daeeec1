#include "m1sim/kinkdyn.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace m1sim {

namespace {

constexpr double kPi = std::numbers::pi;

// Expand the triplet/II-tail structure of a bare kink. If `extra_site` is
// positive that site is filled on top (skink).
std::vector<double> bare_state_impl(int l, int j, bool skink) {
  const int L = 3 * l + 1;
  const int n = l + (skink ? 1 : 0);
  HilbertSpace space = enumerate_space(L, n, Boundary::open, true);
  std::vector<double> v(space.dim(), 0.0);
  const int kink_site = 3 * j - 2;
  std::uint32_t tail = 0;
  for (int m = j; m <= l; ++m) tail |= 1u << (3 * m - 1);  // II part: sites 3m
  if (skink) tail |= 1u << (kink_site - 1);
  const double amp = std::pow(1.0 / std::sqrt(2.0), j - 1);
  // each I-cell m < j holds one particle on site 3m-2 or 3m-1
  const int cells = j - 1;
  for (std::uint32_t choice = 0; choice < (1u << cells); ++choice) {
    std::uint32_t bits = tail;
    for (int m = 1; m <= cells; ++m)
      bits |= 1u << (3 * m - 3 + ((choice >> (m - 1)) & 1u));
    const int idx = space.index_of(bits);
    if (idx < 0) throw std::logic_error("bare state outside the constrained space");
    v[idx] = amp;
  }
  return v;
}

double sine_coeff(int l, int k, int j) {
  return std::sqrt(2.0 / (l + 2)) * std::sin(kPi * k * j / (l + 2));
}

}  // namespace

std::vector<double> bare_kink_state(int l, int j) {
  if (j < 1 || j > l + 1) throw std::invalid_argument("bare_kink_state: j out of range");
  return bare_state_impl(l, j, false);
}

std::vector<double> bare_skink_state(int l, int j) {
  if (j < 1 || j > l + 1) throw std::invalid_argument("bare_skink_state: j out of range");
  return bare_state_impl(l, j, true);
}

std::vector<double> build_kinks(const KinkBasis& basis) {
  const int l = basis.l;
  const int dim = basis.space_dim;
  std::vector<double> kinks(static_cast<std::size_t>(dim) * (l + 1), 0.0);
  for (int j = 1; j <= l + 1; ++j) {
    double* dst = kinks.data() + static_cast<std::size_t>(j - 1) * dim;
    for (int k = 1; k <= l + 1; ++k) {
      const double c = sine_coeff(l, k, j);
      std::span<const double> vk = basis.band_vec(k);
      for (int i = 0; i < dim; ++i) dst[i] += c * vk[i];
    }
  }
  return kinks;
}

KinkBasis extract_kink_band(int l, double lambda, bool skink_sector, const BandOptions& opts) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("extract_kink_band: lambda in [0,1]");
  const int L = 3 * l + 1;
  const int n = l + (skink_sector ? 1 : 0);
  const int nb = l + 1;
  HilbertSpace space = enumerate_space(L, n, Boundary::open, true);
  const int dim = space.dim();

  KinkBasis out;
  out.l = l;
  out.lambda = lambda;
  out.skink_sector = skink_sector;
  out.space_dim = dim;

  // bare manifold (lambda = 0 band) spans the continuation start and fixes phases
  std::vector<std::vector<double>> bare(nb);
  for (int j = 1; j <= nb; ++j)
    bare[j - 1] = skink_sector ? bare_skink_state(l, j) : bare_kink_state(l, j);

  if (lambda == 0.0) {
    out.energies.assign(nb, 1.0);
    out.band.assign(static_cast<std::size_t>(dim) * nb, 0.0);
    for (int k = 1; k <= nb; ++k) {
      double* dst = out.band.data() + static_cast<std::size_t>(k - 1) * dim;
      for (int j = 1; j <= nb; ++j) {
        const double c = sine_coeff(l, k, j);
        for (int i = 0; i < dim; ++i) dst[i] += c * bare[j - 1][i];
      }
    }
    out.kinks = build_kinks(out);
    return out;
  }

  std::vector<double> band(static_cast<std::size_t>(dim) * nb);
  for (int j = 0; j < nb; ++j)
    std::copy(bare[j].begin(), bare[j].end(), band.begin() + static_cast<std::size_t>(j) * dim);

  const int steps = std::max(1, static_cast<int>(std::ceil(lambda / opts.lambda_step)));
  std::vector<double> overlaps;
  Spectrum spec;
  for (int m = 1; m <= steps; ++m) {
    const double lam = lambda * m / steps;
    const Staggering st = stagger_11l(L, lam);
    spec = diagonalize(build_hq(space, st));
    // subspace overlap of each eigenvector with the previous band
    overlaps.assign(spec.count(), 0.0);
    for (int e = 0; e < spec.count(); ++e) {
      std::span<const double> v = spec.vec(e);
      double acc = 0.0;
      for (int j = 0; j < nb; ++j) {
        const double* bj = band.data() + static_cast<std::size_t>(j) * dim;
        double d = 0.0;
        for (int i = 0; i < dim; ++i) d += bj[i] * v[i];
        acc += d * d;
      }
      overlaps[e] = acc;
    }
    std::vector<int> idx(spec.count());
    for (int e = 0; e < spec.count(); ++e) idx[e] = e;
    std::partial_sort(idx.begin(), idx.begin() + nb, idx.end(),
                      [&](int a, int b) { return overlaps[a] > overlaps[b]; });
    idx.resize(nb);
    std::sort(idx.begin(), idx.end());
    double min_ov = 1.0;
    for (int e : idx) min_ov = std::min(min_ov, overlaps[e]);
    out.tracking_quality = std::min(out.tracking_quality, min_ov);
    if (min_ov < opts.min_subspace_overlap)
      throw std::runtime_error("extract_kink_band: band tracking lost (overlap " +
                               std::to_string(min_ov) + ")");
    for (int k = 0; k < nb; ++k)
      std::copy(spec.vec(idx[k]).begin(), spec.vec(idx[k]).end(),
                band.begin() + static_cast<std::size_t>(k) * dim);
    if (m == steps) {
      out.energies.resize(nb);
      for (int k = 0; k < nb; ++k) out.energies[k] = spec.energies[idx[k]];
      out.band_separated = idx[nb - 1] == nb - 1;
    }
  }

  // phase fixing: sum_j sin(k~ j) <bare_j|v_k> > 0
  for (int k = 1; k <= nb; ++k) {
    double s = 0.0;
    double* vk = band.data() + static_cast<std::size_t>(k - 1) * dim;
    for (int j = 1; j <= nb; ++j) {
      double d = 0.0;
      for (int i = 0; i < dim; ++i) d += bare[j - 1][i] * vk[i];
      s += std::sin(kPi * k * j / (l + 2)) * d;
    }
    if (s < 0.0)
      for (int i = 0; i < dim; ++i) vk[i] = -vk[i];
  }
  out.band = std::move(band);
  out.kinks = build_kinks(out);
  return out;
}

std::vector<double> skinks_from_supercharge(const KinkBasis& kinks, const SparseMatrix& q,
                                            int dim_up) {
  const int nb = kinks.l + 1;
  std::vector<double> out(static_cast<std::size_t>(dim_up) * nb);
  std::vector<double> tmp(dim_up);
  for (int j = 1; j <= nb; ++j) {
    q.apply(kinks.kink(j), std::span<double>(tmp));
    double nrm = 0.0;
    for (double v : tmp) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-14) throw std::runtime_error("skinks_from_supercharge: Q annihilated a kink");
    double* dst = out.data() + static_cast<std::size_t>(j - 1) * dim_up;
    for (int i = 0; i < dim_up; ++i) dst[i] = tmp[i] / nrm;
  }
  return out;
}

std::vector<cplx> overlap_amplitude(const KinkBasis& basis, std::span<const double> times) {
  const int l = basis.l;
  std::vector<cplx> out(times.size(), cplx{0.0, 0.0});
  for (int k = 1; k <= l + 1; ++k) {
    const double kt = kPi * k / (l + 2);
    const double w = (2.0 / (l + 2)) * std::sin(kt) * std::sin(kt * (l + 1));
    const double ek = basis.energies[k - 1];
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double ph = -ek * times[i];
      out[i] += w * cplx{std::cos(ph), std::sin(ph)};
    }
  }
  return out;
}

namespace {

void record_observables(const std::map<std::string, std::vector<double>>& obs,
                        std::span<const cplx> psi, QuenchSeries& series) {
  for (const auto& [name, diag] : obs)
    series.observables[name].push_back(kernels::weighted_abs2(diag, psi));
}

}  // namespace

QuenchSeries propagate_eigen(const Spectrum& spec, std::span<const cplx> psi0,
                             std::span<const double> times,
                             const std::map<std::string, std::vector<double>>& diag_observables,
                             std::span<const cplx> overlap_target) {
  const int dim = spec.dim;
  const int m = spec.count();
  if (m != dim)
    throw std::invalid_argument("propagate_eigen: full spectral decomposition required");
  QuenchSeries series;
  series.times.assign(times.begin(), times.end());
  // c = V^T psi0
  std::vector<cplx> c(m), ct(m);
  for (int k = 0; k < m; ++k) {
    std::span<const double> v = spec.vec(k);
    double re = 0.0, im = 0.0;
    for (int i = 0; i < dim; ++i) {
      re += v[i] * psi0[i].real();
      im += v[i] * psi0[i].imag();
    }
    c[k] = {re, im};
  }
  std::vector<cplx> psi(dim);
  for (double t : times) {
    kernels::phase_apply(c, spec.energies, t, ct);
    // psi = V ct
    std::fill(psi.begin(), psi.end(), cplx{0.0, 0.0});
    for (int k = 0; k < m; ++k) {
      std::span<const double> v = spec.vec(k);
      const cplx a = ct[k];
      for (int i = 0; i < dim; ++i) psi[i] += a * v[i];
    }
    series.norm_drift =
        std::max(series.norm_drift, std::abs(std::sqrt(kernels::nrm2sq(psi)) - 1.0));
    if (!overlap_target.empty()) {
      const cplx o = kernels::dotc(overlap_target, psi);
      series.overlap_sq.push_back(std::norm(o));
    }
    record_observables(diag_observables, psi, series);
  }
  return series;
}

namespace {

using ETriplet = Eigen::Triplet<cplx>;
using ESparse = Eigen::SparseMatrix<cplx>;

ESparse cayley_matrix(const SparseMatrix& h, double dt, double sign) {
  // I + sign * (i dt / 2) H
  std::vector<ETriplet> trips;
  trips.reserve(h.nnz() + h.rows());
  const cplx f = cplx{0.0, sign * dt / 2.0};
  for (int r = 0; r < h.rows(); ++r) {
    auto cols = h.row_cols(r);
    auto vals = h.row_vals(r);
    for (std::size_t p = 0; p < cols.size(); ++p) trips.emplace_back(r, cols[p], f * vals[p]);
  }
  for (int r = 0; r < h.rows(); ++r) trips.emplace_back(r, r, cplx{1.0, 0.0});
  ESparse m(h.rows(), h.cols());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

QuenchSeries propagate_cn(const SparseMatrix& h, std::span<const cplx> psi0, double t_max,
                          double dt, const std::map<std::string, std::vector<double>>& diag_observables,
                          std::span<const cplx> overlap_target) {
  const int dim = h.rows();
  const int steps = static_cast<int>(std::llround(t_max / dt));
  QuenchSeries series;
  ESparse plus = cayley_matrix(h, dt, +1.0);
  Eigen::SparseLU<ESparse> lu;
  lu.compute(plus);
  if (lu.info() != Eigen::Success) throw std::runtime_error("propagate_cn: factorization failed");
  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = psi0[i];
  auto record = [&](double t) {
    series.times.push_back(t);
    std::span<const cplx> view(psi.data(), static_cast<std::size_t>(dim));
    series.norm_drift =
        std::max(series.norm_drift, std::abs(std::sqrt(kernels::nrm2sq(view)) - 1.0));
    if (!overlap_target.empty())
      series.overlap_sq.push_back(std::norm(kernels::dotc(overlap_target, view)));
    record_observables(diag_observables, view, series);
  };
  record(0.0);
  std::vector<cplx> tmp(dim);
  for (int s = 1; s <= steps; ++s) {
    std::span<const cplx> view(psi.data(), static_cast<std::size_t>(dim));
    h.apply(view, std::span<cplx>(tmp));
    Eigen::VectorXcd rhs(dim);
    const cplx f{0.0, -dt / 2.0};
    for (int i = 0; i < dim; ++i) rhs(i) = psi(i) + f * tmp[i];
    psi = lu.solve(rhs);
    record(s * dt);
  }
  return series;
}

namespace {

// Dense lookup of one CSR row (rows are short here).
double csr_entry(const SparseMatrix& m, int r, int c) {
  auto cols = m.row_cols(r);
  auto vals = m.row_vals(r);
  for (std::size_t p = 0; p < cols.size(); ++p)
    if (cols[p] == c) return vals[p];
  return 0.0;
}

}  // namespace

PrepareResult adiabatic_prepare(const SweepProtocol& protocol, std::span<const double> psi0,
                                std::span<const double> target, int gap_checks,
                                double gap_threshold) {
  const int dim = protocol.h_initial.rows();
  const double T = protocol.duration;
  const double dt = protocol.dt;
  const int steps = static_cast<int>(std::llround(T / dt));
  auto schedule = protocol.schedule
                      ? protocol.schedule
                      : [T](double t) { return 0.5 * (1.0 - std::cos(kPi * t / T)); };

  // union sparsity pattern, built once; per-step refill in Eigen's own order
  SparseMatrix pattern = add(protocol.h_initial, protocol.h_final);
  ESparse plus = cayley_matrix(pattern, dt, +1.0);
  plus.makeCompressed();
  const int nnz = static_cast<int>(plus.nonZeros());
  std::vector<double> hi_u(nnz), hf_u(nnz);
  std::vector<char> diag_u(nnz, 0);
  {
    int p = 0;
    for (int outer = 0; outer < plus.outerSize(); ++outer) {
      for (ESparse::InnerIterator it(plus, outer); it; ++it, ++p) {
        hi_u[p] = csr_entry(protocol.h_initial, it.row(), it.col());
        hf_u[p] = csr_entry(protocol.h_final, it.row(), it.col());
        diag_u[p] = it.row() == it.col();
      }
    }
  }
  Eigen::SparseLU<ESparse> lu;
  lu.analyzePattern(plus);

  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = cplx{psi0[i], 0.0};

  PrepareResult res;
  res.min_gap = std::numeric_limits<double>::infinity();
  std::vector<cplx> tmp(dim);
  Eigen::VectorXcd rhs(dim);
  const std::size_t check_every =
      gap_checks > 0 ? std::max<std::size_t>(1, steps / gap_checks) : 0;
  cplx* vals = plus.valuePtr();
  for (int s = 0; s < steps; ++s) {
    const double t_eval = protocol.endpoint == CnEndpoint::left ? s * dt : (s + 0.5) * dt;
    const double f = schedule(t_eval);
    const double a = 1.0 - f, b = f;
    for (int p = 0; p < nnz; ++p) {
      const double h = a * hi_u[p] + b * hf_u[p];
      vals[p] = cplx{diag_u[p] ? 1.0 : 0.0, 0.5 * dt * h};
    }
    if (check_every && s % static_cast<int>(check_every) == 0 && dim <= 2048) {
      SparseMatrix ht = add(protocol.h_initial, protocol.h_final, a, b);
      Spectrum sp = diagonalize_dense(ht);
      if (sp.count() >= 2) {
        const double gap = sp.energies[1] - sp.energies[0];
        res.min_gap = std::min(res.min_gap, gap);
        if (gap < gap_threshold) res.gap_warning = true;
      }
    }
    lu.factorize(plus);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("adiabatic_prepare: factorization failed");
    // rhs = (1 - i H dt/2) psi, assembled from the same union values
    for (int i = 0; i < dim; ++i) tmp[i] = cplx{0.0, 0.0};
    {
      int p = 0;
      for (int outer = 0; outer < plus.outerSize(); ++outer) {
        for (ESparse::InnerIterator it(plus, outer); it; ++it, ++p) {
          const double h = a * hi_u[p] + b * hf_u[p];
          tmp[it.row()] += h * psi(it.col());
        }
      }
    }
    const cplx fc{0.0, -dt / 2.0};
    for (int i = 0; i < dim; ++i) rhs(i) = psi(i) + fc * tmp[i];
    psi = lu.solve(rhs);
  }
  std::span<const cplx> view(psi.data(), static_cast<std::size_t>(dim));
  res.norm_drift = std::abs(std::sqrt(kernels::nrm2sq(view)) - 1.0);
  cplx ov{0.0, 0.0};
  for (int i = 0; i < dim; ++i) ov += target[i] * psi(i);
  res.fidelity = std::abs(ov);
  res.state.assign(psi.data(), psi.data() + dim);
  return res;
}

std::vector<double> pinning_diagonal(const HilbertSpace& space, std::span<const int> pinned_sites,
                                     double mu, double mu0, double alpha) {
  std::vector<double> d(space.dim(), 0.0);
  for (int site = 1; site <= space.sites; ++site) {
    const std::vector<double> nd = number_diagonal(space, site);
    const double w = -(alpha * site + mu0);
    for (int i = 0; i < space.dim(); ++i) d[i] += w * nd[i];
  }
  for (int site : pinned_sites) {
    const std::vector<double> nd = number_diagonal(space, site);
    for (int i = 0; i < space.dim(); ++i) d[i] -= mu * nd[i];
  }
  return d;
}

std::vector<double> product_state(const HilbertSpace& space, std::span<const int> occupied) {
  std::uint32_t bits = 0;
  for (int s : occupied) bits |= 1u << (s - 1);
  const int idx = space.index_of(bits);
  if (idx < 0) throw std::invalid_argument("product_state: configuration not in space");
  std::vector<double> v(space.dim(), 0.0);
  v[idx] = 1.0;
  return v;
}

}  // namespace m1sim
