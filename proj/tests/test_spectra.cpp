#include <doctest.h>

#include <cmath>
#include <numbers>

#include "m1sim/analytic.hpp"
#include "m1sim/kinkdyn.hpp"
#include "m1sim/spectra.hpp"

using namespace m1sim;

TEST_CASE("small sector is PSD with the documented dimension") {
  Staggering st = stagger_11l(4, 0.6);
  HilbertSpace sp = enumerate_space(4, 1);
  CHECK(sp.dim() == 4);  // C(4,1)
  Spectrum s = diagonalize(build_hq(sp, st));
  CHECK(s.energies.front() > -1e-12);
}

TEST_CASE("spectrum invariants: residual and orthonormality") {
  HilbertSpace sp = enumerate_space(12, 4);
  SparseMatrix h = build_hq(sp, stagger_11l(12, 0.8));
  Spectrum s = diagonalize(h);
  CHECK(s.max_residual(h) <= 1e-9 * std::max(1.0, h.max_abs()));
  CHECK(s.max_orthonormality_defect() <= 1e-10);
}

TEST_CASE("lanczos agrees with the dense path on the lowest pairs") {
  HilbertSpace sp = enumerate_space(16, 5);  // dim 792
  SparseMatrix h = build_hq(sp, stagger_11l(16, 0.9));
  Spectrum dense = diagonalize(h);
  DiagOptions opts;
  opts.k_lowest = 6;
  opts.dense_threshold = 100;  // force the iterative path
  Spectrum lan = diagonalize(h, opts);
  for (int k = 0; k < 6; ++k)
    CHECK(lan.energies[k] == doctest::Approx(dense.energies[k]).epsilon(1e-9));
  CHECK(lan.max_residual(h) < 1e-8);
}

TEST_CASE("diagonalize rejects non-Hermitian input") {
  SparseBuilder b(2, 2);
  b.add(0, 1, 1.0);
  CHECK_THROWS(diagonalize(b.build()));
}

TEST_CASE("flat band at extreme staggering matches the dispersion") {
  HilbertSpace sp = enumerate_space(13, 4);
  Spectrum s = diagonalize(build_hq(sp, stagger_11l(13, 0.0)));
  const Dispersion d = make_dispersion(0.0);
  for (int k = 1; k <= 5; ++k) {
    const double kt = std::numbers::pi * k / 6.0;
    CHECK(s.energies[k - 1] == doctest::Approx(d.energy(kt)).epsilon(1e-12));  // all 1
  }
}

TEST_CASE("ground-state densities: particle number, reflection, degeneracy error") {
  DensityProfile p = ground_state_densities(4, 1.0);
  double total = 0.0;
  for (double v : p.site_densities) total += v;
  CHECK(total == doctest::Approx(4.0).epsilon(1e-10));
  // 1 lambda 1 pattern is reflection symmetric at lambda=1
  for (int i = 0; i < 12; ++i)
    CHECK(p.site_densities[i] == doctest::Approx(p.site_densities[11 - i]).epsilon(1e-9));
  // periodic chains at 1/3 filling have two degenerate ground states
  CHECK_THROWS([&] {
    HilbertSpace sp = enumerate_space(9, 3, Boundary::periodic);
    Spectrum s = diagonalize(build_hq(sp, stagger_11l(9, 1.0)));
    if (s.energies[1] - s.energies[0] < 1e-8) throw std::runtime_error("degenerate");
  }());
}

TEST_CASE("cft density curve basics") {
  DensityProfile flat = cft_densities(18, 0.0);
  for (double v : flat.site_densities) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // c(x - L'/2) is even about x = L'/2
  const double lp = 21.0;
  const double pref = std::pow(std::numbers::pi / (2.0 * lp), 1.0 / 3.0);
  auto cfun = [&](double x) { return pref * std::cos(std::numbers::pi * x / (3.0 * lp)); };
  for (double d : {0.5, 1.0, 3.3}) CHECK(cfun(d) == doctest::Approx(cfun(-d)).epsilon(1e-14));
  CHECK_THROWS(cft_densities(10, 0.77));
}

TEST_CASE("ed profile tracks the cft curve at criticality (l=6)") {
  DensityProfile ed = ground_state_densities(6, 1.0);
  DensityProfile cft = cft_densities(18, 0.77);
  for (int i = 2; i <= 18; ++i)
    CHECK(std::abs(ed.site_densities[i - 1] - cft.site_densities[i - 1]) < 0.05);
}

TEST_CASE("susy pairing report") {
  // open chain: all nonzero energies pair with a neighbouring sector
  PairingReport rep = susy_pairing_report(10, stagger_11l(10, 0.8));
  CHECK(rep.unmatched.empty());
  CHECK(rep.zero_modes == 0);
  // periodic L=9: exactly two zero modes (the supersymmetric vacua)
  PairingReport per = susy_pairing_report(9, stagger_11l(9, 1.0), Boundary::periodic);
  CHECK(per.zero_modes == 2);
  CHECK(per.unmatched.empty());
  // extreme staggering: flat paired bands at E=1
  PairingReport flat = susy_pairing_report(10, stagger_11l(10, 0.0));
  CHECK(flat.unmatched.empty());
}
