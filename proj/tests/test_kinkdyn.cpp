#include <doctest.h>

#include <cmath>
#include <numbers>

#include "m1sim/kinkdyn.hpp"

using namespace m1sim;
using kernels::cplx;

namespace {

double overlap(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

TEST_CASE("localized kinks at extreme staggering are the bare kinks") {
  const int l = 3;
  KinkBasis basis = extract_kink_band(l, 0.0);
  for (int j = 1; j <= l + 1; ++j) {
    std::vector<double> bare = bare_kink_state(l, j);
    double diff = 0.0;
    for (int i = 0; i < basis.space_dim; ++i)
      diff = std::max(diff, std::abs(bare[i] - basis.kink(j)[i]));
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("kinks stay orthonormal for all staggering") {
  for (double lam : {0.2, 1.0}) {
    KinkBasis basis = extract_kink_band(3, lam);
    for (int i = 1; i <= 4; ++i)
      for (int j = i; j <= 4; ++j)
        CHECK(overlap(basis.kink(i), basis.kink(j)) ==
              doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
  }
}

TEST_CASE("weak staggering keeps kinks near the bare ones") {
  const int l = 3;
  KinkBasis basis = extract_kink_band(l, 1e-4);
  for (int j = 1; j <= l + 1; ++j) {
    std::vector<double> bare = bare_kink_state(l, j);
    CHECK(std::abs(overlap(bare, basis.kink(j))) > 0.999);
  }
}

TEST_CASE("band tracking survives the unavoided crossings") {
  KinkBasis basis = extract_kink_band(4, 1.0);
  CHECK(basis.tracking_quality > 0.99);
  CHECK(!basis.band_separated);  // multikink states dive below the band top
  // frozen from an independent diagonalization of the l=4 sector
  const double expected[] = {0.257261882551, 0.995288405083, 1.640589761824, 2.142373259335,
                             2.460526100787};
  for (int k = 0; k < 5; ++k)
    CHECK(basis.energies[k] == doctest::Approx(expected[k]).epsilon(1e-6));
}

TEST_CASE("kink energy density concentrates at the kink and sums to <H>") {
  const int l = 4, L = 13;
  KinkBasis basis = extract_kink_band(l, 1.0);
  HilbertSpace sp = enumerate_space(L, l);
  const Staggering st = stagger_11l(L, 1.0);
  std::vector<double> k1(basis.kink(1).begin(), basis.kink(1).end());
  double total = 0.0, left = 0.0;
  for (int i = 1; i <= L; ++i) {
    SparseMatrix hi = build_local_energy(sp, st, i);
    auto hv = hi.apply(std::span<const double>(k1));
    const double e = overlap(k1, hv);
    total += e;
    if (i <= 4) left += e;
  }
  double eband = 0.0;
  for (int k = 1; k <= l + 1; ++k) {
    const double kt = std::numbers::pi * k / (l + 2);
    eband += 2.0 / (l + 2) * std::sin(kt) * std::sin(kt) * basis.energies[k - 1];
  }
  CHECK(total == doctest::Approx(eband).epsilon(1e-10));
  CHECK(left / total > 0.5);  // most of the energy sits at the kink position
}

TEST_CASE("closed-form overlap matches eigen propagation") {
  const int l = 3;
  KinkBasis basis = extract_kink_band(l, 1.0);
  HilbertSpace sp = enumerate_space(10, l);
  Spectrum full = diagonalize(build_hq(sp, stagger_11l(10, 1.0)));
  std::vector<double> times;
  for (int i = 0; i <= 300; ++i) times.push_back(0.1 * i);
  std::vector<cplx> o = overlap_amplitude(basis, times);
  CHECK(std::abs(o[0]) < 1e-12);  // o(0) = 0 by orthonormality
  std::vector<cplx> psi0(sp.dim()), target(sp.dim());
  for (int i = 0; i < sp.dim(); ++i) {
    psi0[i] = basis.kink(1)[i];
    target[i] = basis.kink(l + 1)[i];
  }
  QuenchSeries series = propagate_eigen(full, psi0, times, {}, target);
  CHECK(series.norm_drift < 1e-9);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(series.overlap_sq[i] - std::norm(o[i])) < 1e-12);
}

TEST_CASE("crank-nicolson cross-validates the eigen path and conserves the norm") {
  const int l = 2, L = 7;
  HilbertSpace sp = enumerate_space(L, l);
  SparseMatrix h = build_hq(sp, stagger_11l(L, 0.9));
  Spectrum full = diagonalize(h);
  KinkBasis basis = extract_kink_band(l, 0.9);
  std::vector<cplx> psi0(sp.dim()), target(sp.dim());
  for (int i = 0; i < sp.dim(); ++i) {
    psi0[i] = basis.kink(1)[i];
    target[i] = basis.kink(l + 1)[i];
  }
  const double t_max = 50.0, dt = 0.01;
  QuenchSeries cn = propagate_cn(h, psi0, t_max, dt, {}, target);
  CHECK(cn.norm_drift < 1e-9);
  std::vector<double> times = cn.times;
  QuenchSeries eig = propagate_eigen(full, psi0, times, {}, target);
  const double hnorm = 4.0;  // spectral bound for this sector
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    worst = std::max(worst, std::abs(cn.overlap_sq[i] - eig.overlap_sq[i]));
  CHECK(worst < dt * dt * hnorm * hnorm * t_max);
}

TEST_CASE("skinks from the supercharge reduce to bare skinks at lambda=0") {
  const int l = 3, L = 10;
  KinkBasis basis = extract_kink_band(l, 0.0);
  HilbertSpace a = enumerate_space(L, l);
  HilbertSpace b = enumerate_space(L, l + 1);
  SparseMatrix q = build_supercharge(a, b, stagger_11l(L, 0.0));
  std::vector<double> sk = skinks_from_supercharge(basis, q, b.dim());
  for (int j = 1; j <= l + 1; ++j) {
    std::vector<double> bare = bare_skink_state(l, j);
    double ov = 0.0;
    for (int i = 0; i < b.dim(); ++i) ov += bare[i] * sk[static_cast<std::size_t>(j - 1) * b.dim() + i];
    CHECK(std::abs(std::abs(ov) - 1.0) < 1e-12);
  }
}

TEST_CASE("kink and skink bands share their energies") {
  for (double lam : {0.4, 0.9}) {
    KinkBasis k = extract_kink_band(3, lam);
    KinkBasis s = extract_kink_band(3, lam, /*skink_sector=*/true);
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(k.energies[i] - s.energies[i]) < 1e-10);
  }
}

TEST_CASE("adiabatic preparation: exact at extreme staggering, improves with T") {
  const int l = 2, L = 7;
  HilbertSpace sp = enumerate_space(L, l);
  const std::vector<int> pin{3, 6};
  std::vector<double> hi_diag = pinning_diagonal(sp, pin);
  std::vector<double> psi0 = product_state(sp, pin);

  SUBCASE("lambda = 0") {
    KinkBasis basis = extract_kink_band(l, 0.0);
    SparseMatrix hq = build_hq(sp, stagger_11l(L, 0.0));
    std::vector<double> mu_pin(sp.dim(), 0.0);
    auto n1 = number_diagonal(sp, 1), n2 = number_diagonal(sp, 2);
    for (int i = 0; i < sp.dim(); ++i) mu_pin[i] = 100.0 * (n1[i] + n2[i]);
    SweepProtocol prot;
    prot.h_initial = SparseMatrix::diagonal(hi_diag);
    prot.h_final = add(hq, SparseMatrix::diagonal(mu_pin));
    prot.duration = 5.0;
    prot.dt = 0.005;
    std::vector<double> target(basis.kink(1).begin(), basis.kink(1).end());
    PrepareResult res = adiabatic_prepare(prot, psi0, target);
    CHECK(res.fidelity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.norm_drift < 1e-9);
  }

  SUBCASE("lambda = 0.5 fidelity grows with duration") {
    KinkBasis basis = extract_kink_band(l, 0.5);
    SparseMatrix hq = build_hq(sp, stagger_11l(L, 0.5));
    std::vector<double> mu_pin(sp.dim(), 0.0);
    auto n1 = number_diagonal(sp, 1), n2 = number_diagonal(sp, 2);
    for (int i = 0; i < sp.dim(); ++i) mu_pin[i] = 100.0 * (n1[i] + n2[i]);
    std::vector<double> target(basis.kink(1).begin(), basis.kink(1).end());
    double prev = 0.0;
    for (double T : {5.0, 10.0, 20.0}) {
      SweepProtocol prot;
      prot.h_initial = SparseMatrix::diagonal(hi_diag);
      prot.h_final = add(hq, SparseMatrix::diagonal(mu_pin));
      prot.duration = T;
      prot.dt = 0.005;
      PrepareResult res = adiabatic_prepare(prot, psi0, target, /*gap_checks=*/8);
      CHECK(res.fidelity >= prev - 1e-9);
      CHECK(res.min_gap > 0.0);
      prev = res.fidelity;
    }
    CHECK(prev > 0.9);
  }
}

TEST_CASE("rydberg embedding lands in the all-ground block") {
  const int L = 7, n = 2;
  HilbertSpace con = enumerate_space(L, n);
  RydbergSpace ryd = enumerate_rydberg(L, n);
  KinkBasis basis = extract_kink_band(2, 1.0);
  std::vector<cplx> emb(ryd.dim(), cplx{0, 0});
  for (int i = 0; i < con.dim(); ++i)
    emb[ryd.index_of(RydbergSpace::pack(con.states[i], 0))] = basis.kink(1)[i];
  CHECK(kernels::nrm2sq(std::span<const cplx>(emb)) == doctest::Approx(1.0).epsilon(1e-12));
  auto nr = rydberg_diagonal(ryd, 1);
  CHECK(kernels::weighted_abs2(nr, emb) == doctest::Approx(0.0));
}
