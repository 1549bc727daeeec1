#include <doctest.h>

#include <bit>
#include <cmath>

#include "m1sim/dressing.hpp"
#include "m1sim/kinkdyn.hpp"
#include "m1sim/operators.hpp"
#include "m1sim/spectra.hpp"

using namespace m1sim;

TEST_CASE("single-site supercharge is the 1x1 matrix [-1]") {
  HilbertSpace s0 = enumerate_space(1, 0);
  HilbertSpace s1 = enumerate_space(1, 1);
  SparseMatrix q = build_supercharge(s0, s1, stagger_11l(1, 0.5));
  auto y = q.apply(std::vector<double>{1.0});
  CHECK(y[0] == doctest::Approx(-1.0));
}

TEST_CASE("supercharge is nilpotent across sectors") {
  const int L = 7;
  const Staggering st = stagger_11l(L, 0.7);
  for (int n = 0; n <= 2; ++n) {
    HilbertSpace a = enumerate_space(L, n);
    HilbertSpace b = enumerate_space(L, n + 1);
    HilbertSpace c = enumerate_space(L, n + 2);
    SparseMatrix q1 = build_supercharge(a, b, st);
    SparseMatrix q2 = build_supercharge(b, c, st);
    CHECK(multiply(q2, q1).max_abs() < 1e-12);
  }
}

TEST_CASE("supercharge maps bare kinks onto bare skinks at extreme staggering") {
  const int l = 2;  // L = 7
  HilbertSpace a = enumerate_space(7, l);
  HilbertSpace b = enumerate_space(7, l + 1);
  SparseMatrix q = build_supercharge(a, b, stagger_11l(7, 0.0));
  for (int j = 1; j <= l + 1; ++j) {
    std::vector<double> k = bare_kink_state(l, j);
    std::vector<double> kb = bare_skink_state(l, j);
    auto qk = q.apply(std::span<const double>(k));
    double ov = 0.0;
    for (int i = 0; i < b.dim(); ++i) ov += kb[i] * qk[i];
    CHECK(std::abs(std::abs(ov) - 1.0) < 1e-12);  // unit magnitude
    CHECK(ov == doctest::Approx(-1.0));           // sign fixed by the JW convention
  }
}

TEST_CASE("H_Q is Hermitian and positive semidefinite") {
  HilbertSpace sp = enumerate_space(10, 3);
  for (double lam : {0.0, 0.4, 1.0}) {
    SparseMatrix h = build_hq(sp, stagger_11l(10, lam));
    CHECK(h.hermiticity_defect() < 1e-12);
    Spectrum s = diagonalize(h);
    CHECK(s.energies.front() > -1e-10);
  }
}

TEST_CASE("extreme staggering low-energy data for L=13") {
  HilbertSpace sp = enumerate_space(13, 4);
  Spectrum s = diagonalize(build_hq(sp, stagger_11l(13, 0.0)));
  for (int k = 0; k < 5; ++k) CHECK(s.energies[k] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.energies[5] == doctest::Approx(3.0).epsilon(1e-12));  // gap 2
}

TEST_CASE("supercharge changes particle number by exactly one") {
  HilbertSpace a = enumerate_space(9, 2);
  HilbertSpace b = enumerate_space(9, 3);
  SparseMatrix q = build_supercharge(a, b, stagger_11l(9, 0.8));
  // every nonzero entry connects an n-particle column to an (n+1)-particle row
  for (int r = 0; r < q.rows(); ++r) {
    auto cols = q.row_cols(r);
    for (int c : cols) {
      CHECK(std::popcount(b.states[r]) == 3);
      CHECK(std::popcount(a.states[c]) == 2);
    }
  }
}

TEST_CASE("local energy densities sum to H_Q") {
  HilbertSpace sp = enumerate_space(13, 4);
  const Staggering st = stagger_11l(13, 0.5);
  SparseMatrix h = build_hq(sp, st);
  SparseMatrix acc(sp.dim(), sp.dim());
  for (int i = 1; i <= 13; ++i) {
    SparseMatrix hi = build_local_energy(sp, st, i);
    CHECK(hi.hermiticity_defect() < 1e-12);
    acc = add(acc, hi);
  }
  CHECK(add(acc, h, 1.0, -1.0).max_abs() < 1e-12);
}

TEST_CASE("bare leftmost kink has its energy at the left end") {
  const int l = 3, L = 10;
  HilbertSpace sp = enumerate_space(L, l);
  const Staggering st = stagger_11l(L, 0.0);
  std::vector<double> k1 = bare_kink_state(l, 1);
  int argmax = 0;
  double best = -1.0;
  for (int i = 1; i <= L; ++i) {
    SparseMatrix hi = build_local_energy(sp, st, i);
    auto hv = hi.apply(std::span<const double>(k1));
    double e = 0.0;
    for (int a = 0; a < sp.dim(); ++a) e += k1[a] * hv[a];
    if (e > best) {
      best = e;
      argmax = i;
    }
  }
  CHECK(argmax <= 3);
}

TEST_CASE("detector values on bare kinks at extreme staggering") {
  const int l = 3, L = 10;
  HilbertSpace kink_sp = enumerate_space(L, l);
  HilbertSpace skink_sp = enumerate_space(L, l + 1);
  auto expect = [](const std::vector<double>& diag, const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += diag[i] * v[i] * v[i];
    return acc;
  };
  std::vector<double> k1 = bare_kink_state(l, 1);
  std::vector<double> k4 = bare_kink_state(l, l + 1);
  std::vector<double> s1 = bare_skink_state(l, 1);
  std::vector<double> s4 = bare_skink_state(l, l + 1);

  auto dn = build_observable(ObservableKind::dn, kink_sp, 1.0, 1.0);
  CHECK(expect(dn, k1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(expect(dn, k4) == doctest::Approx(1.0));
  auto dn3 = build_observable(ObservableKind::dn3, kink_sp, 2.0, 1.0);
  CHECK(expect(dn3, k1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(expect(dn3, k4) == doctest::Approx(1.0));
  auto dnb = build_observable(ObservableKind::dnbar, skink_sp, 2.0, 1.0);
  CHECK(expect(dnb, s1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(expect(dnb, s4) == doctest::Approx(1.0));
}

TEST_CASE("coefficient fit: extreme staggering closed forms and the singular case") {
  // site sums on bare states: kinks (1, 0), dn3 (1, 1/2), skinks (1, 3/2)
  ObservableFit f = fit_observable_coeffs(ObservableKind::dn, 1.0, 0.0);
  CHECK(f.ok);
  CHECK(f.alpha == doctest::Approx(1.0));
  CHECK(f.beta == doctest::Approx(1.0));
  f = fit_observable_coeffs(ObservableKind::dn3, 1.0, 0.5);
  CHECK(f.alpha == doctest::Approx(2.0));
  CHECK(f.beta == doctest::Approx(1.0));
  f = fit_observable_coeffs(ObservableKind::dnbar, 1.0, 1.5);
  CHECK(f.alpha == doctest::Approx(2.0));
  CHECK(f.beta == doctest::Approx(1.0));
  CHECK(!fit_observable_coeffs(ObservableKind::dn, 0.7, 0.7).ok);
}

TEST_CASE("detector fit converges to the closed forms as lambda -> 0+") {
  const int l = 3, L = 10;
  KinkBasis basis = extract_kink_band(l, 1e-3);
  HilbertSpace sp = enumerate_space(L, l);
  std::vector<double> m = observable_site_sum(ObservableKind::dn, sp);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < sp.dim(); ++i) {
    m1 += m[i] * basis.kink(1)[i] * basis.kink(1)[i];
    m2 += m[i] * basis.kink(l + 1)[i] * basis.kink(l + 1)[i];
  }
  ObservableFit f = fit_observable_coeffs(ObservableKind::dn, m1, m2);
  CHECK(f.alpha == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(f.beta == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("rydberg chain: decoupled sector, hermiticity, range cut") {
  const int L = 6, n = 2;
  RydbergSpace sp = enumerate_rydberg(L, n);
  RydbergParams p;
  p.hopping = 1.0;
  p.mu.assign(L, 0.0);
  p.mu[0] = 0.3;
  p.omega.assign(L, 0.0);
  p.delta = 50.0;
  p.c6 = 200.0;
  p.r0 = 1.0;
  SparseMatrix h = build_rydberg(sp, p);
  CHECK(h.hermiticity_defect() < 1e-12);

  // Omega = 0: the all-g block is plain tight binding with mu
  HilbertSpace free_sp = enumerate_space(L, n, Boundary::open, false);
  SparseBuilder tb(free_sp.dim(), free_sp.dim());
  for (int a = 0; a < free_sp.dim(); ++a) {
    const std::uint32_t bits = free_sp.states[a];
    for (int s = 1; s <= L; ++s)
      if (bits >> (s - 1) & 1u) tb.add(a, a, p.mu[s - 1]);
    for (int s = 1; s < L; ++s) {
      const bool o1 = bits >> (s - 1) & 1u, o2 = bits >> s & 1u;
      if (o1 == o2) continue;
      const int to = free_sp.index_of(bits ^ (1u << (s - 1)) ^ (1u << s));
      tb.add(to, a, -1.0);
    }
  }
  SparseMatrix href = tb.build();
  Spectrum se = diagonalize(href);
  // embed each free eigenvector into the all-g block and check eigen-relation
  std::vector<cplx> x(sp.dim(), cplx{0, 0});
  for (int k = 0; k < 3; ++k) {
    std::fill(x.begin(), x.end(), cplx{0, 0});
    for (int i = 0; i < free_sp.dim(); ++i)
      x[sp.index_of(RydbergSpace::pack(free_sp.states[i], 0))] = se.vec(k)[i];
    auto hx = h.apply(std::span<const cplx>(x));
    for (int i = 0; i < sp.dim(); ++i)
      CHECK(std::abs(hx[i] - se.energies[k] * x[i]) < 1e-10);
  }

  // truncation changes the spectrum by no more than the dropped pair terms
  RydbergParams pt = p;
  pt.omega.assign(L, 0.4);
  p.omega.assign(L, 0.4);
  pt.range_cut = 2;
  Spectrum full = diagonalize(build_rydberg(sp, p));
  Spectrum trunc = diagonalize(build_rydberg(sp, pt));
  const double v3 = p.c6 / std::pow(3.0 * p.r0, 6);
  double worst = 0.0;
  for (int k = 0; k < full.count(); ++k)
    worst = std::max(worst, std::abs(full.energies[k] - trunc.energies[k]));
  CHECK(worst > 0.0);
  CHECK(worst <= n * (n - 1) / 2.0 * v3 + 1e-9);
}

TEST_CASE("dressed chain at criticality without tails reproduces H_Q up to a constant") {
  const int l = 3, L = 10;
  HilbertSpace sp = enumerate_space(L, l);
  const Staggering st = stagger_11l(L, 1.0);
  DressedCouplings c = dressed_chain_couplings(1.0, L, st, [](double) { return 1.0; }, 1.0,
                                               /*include_tails=*/false);
  Spectrum a = diagonalize(build_hq_dressed(sp, c));
  Spectrum b = diagonalize(build_hq(sp, st));
  const double shift = b.energies[0] - a.energies[0];
  for (int k = 0; k < a.count(); ++k)
    CHECK(a.energies[k] + shift == doctest::Approx(b.energies[k]).epsilon(1e-10));
}
