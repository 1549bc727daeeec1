#include "m1sim/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace m1sim {

namespace {
constexpr double kPi = std::numbers::pi;
}

double fermi_velocity() { return 3.0 * std::sqrt(3.0) / 4.0; }

double Dispersion::energy(double k) const {
  const double sh = std::sin(k / 2.0), ch = std::cos(k / 2.0);
  return prefactor * std::sqrt(sh * sh + a_flat * ch * ch);
}

double Dispersion::deriv(double k) const {
  const double sh = std::sin(k / 2.0), ch = std::cos(k / 2.0);
  const double g = std::sqrt(sh * sh + a_flat * ch * ch);
  if (g == 0.0) return prefactor * (1.0 - a_flat) / 2.0;  // a=0, k->0 limit
  return prefactor * (1.0 - a_flat) * sh * ch / (2.0 * g);
}

double Dispersion::deriv2(double k) const {
  const double sh = std::sin(k / 2.0), ch = std::cos(k / 2.0);
  const double g = std::sqrt(sh * sh + a_flat * ch * ch);
  if (g == 0.0) return 0.0;
  const double sk = std::sin(k);
  return prefactor * (1.0 - a_flat) / 4.0 *
         (std::cos(k) / g - (1.0 - a_flat) * sk * sk / (4.0 * g * g * g));
}

double Dispersion::gap() const {
  const double s = s_aux;
  return std::pow(s - 3.0 * lambda, 1.5) / (2.0 * std::sqrt(2.0) * std::sqrt(s - lambda));
}

Dispersion make_dispersion(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("make_dispersion: lambda in [0,1] required");
  Dispersion d;
  d.lambda = lambda;
  d.s_aux = std::sqrt(8.0 + lambda * lambda);
  const double s = d.s_aux;
  d.a_flat = std::pow(s - 3.0 * lambda, 3) * (lambda + s) /
             ((s - lambda) * std::pow(3.0 * lambda + s, 3));
  d.prefactor = std::pow(3.0 * lambda + s, 1.5) / (2.0 * std::sqrt(2.0) * std::sqrt(lambda + s));
  return d;
}

double v_max(double lambda) {
  const Dispersion d = make_dispersion(lambda);
  if (lambda >= 1.0 - 1e-14) return fermi_velocity();
  if (lambda <= 0.0) return 0.0;
  // grid bracket, then golden section
  const int ngrid = 2048;
  int best = 1;
  double best_v = -1.0;
  for (int i = 1; i < ngrid; ++i) {
    const double k = kPi * i / ngrid;
    const double v = d.deriv(k);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = kPi * (best - 1) / ngrid;
  double b = kPi * (best + 1) / ngrid;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  while (b - a > 1e-12) {
    const double c = b - phi * (b - a);
    const double e = a + phi * (b - a);
    if (d.deriv(c) > d.deriv(e))
      b = e;
    else
      a = c;
  }
  return d.deriv(0.5 * (a + b));
}

namespace {

// argmax of E' on (0, pi); 0 at criticality where E' is monotone decreasing.
double vmax_location(const Dispersion& d, double lambda) {
  if (lambda >= 1.0 - 1e-14) return 0.0;
  const int ngrid = 2048;
  int best = 0;
  double best_v = d.deriv(1e-14);
  for (int i = 1; i < ngrid; ++i) {
    const double k = kPi * i / ngrid;
    const double v = d.deriv(k);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = kPi * std::max(0, best - 1) / ngrid;
  double b = kPi * std::min(ngrid, best + 1) / ngrid;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  while (b - a > 1e-12) {
    const double c = b - phi * (b - a);
    const double e = a + phi * (b - a);
    if (d.deriv(c) > d.deriv(e))
      b = e;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

// bisection for E'(k) = target on [lo, hi] where E' is monotone
double solve_deriv(const Dispersion& d, double target, double lo, double hi, bool decreasing) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = d.deriv(mid) > target;
    if (above == decreasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

cplx saddle_overlap(int l, double lambda, double t, int max_saddles) {
  if (t <= 0.0) return {0.0, 0.0};
  const Dispersion d = make_dispersion(lambda);
  const double vm = v_max(lambda);
  const double lp2 = l + 2;
  const double kstar = vmax_location(d, lambda);
  cplx out{0.0, 0.0};
  for (int s = 1; s <= max_saddles; ++s) {
    const double target = (2.0 * s - 1.0) * lp2 / t;
    if (target >= vm) continue;  // Heaviside gate closed
    // decreasing branch [kstar, pi]
    {
      const double ks = solve_deriv(d, target, std::max(kstar, 1e-14), kPi - 1e-14, true);
      const double gpp = -d.deriv2(ks) * t * (kPi / lp2) * (kPi / lp2);
      if (gpp > 0.0) {
        const double amp =
            (2.0 / lp2) * std::sin(ks) * std::sin(ks) * std::sqrt(2.0 * kPi / gpp);
        const double k_index = lp2 * ks / kPi;
        const double phase = (2.0 * s - 1.0) * kPi * k_index - d.energy(ks) * t + kPi / 4.0;
        out += amp * cplx{std::cos(phase), std::sin(phase)};
      }
    }
    // mirror branch (0, kstar] exists only off criticality
    if (kstar > 1e-12) {
      const double ks = solve_deriv(d, target, 1e-14, kstar, false);
      const double gpp = d.deriv2(ks) * t * (kPi / lp2) * (kPi / lp2);  // g'' < 0 here
      if (gpp > 0.0) {
        const double amp =
            (2.0 / lp2) * std::sin(ks) * std::sin(ks) * std::sqrt(2.0 * kPi / gpp);
        const double k_index = lp2 * ks / kPi;
        const double phase = (2.0 * s - 1.0) * kPi * k_index - d.energy(ks) * t - kPi / 4.0;
        out += amp * cplx{std::cos(phase), std::sin(phase)};
      }
    }
  }
  return out;
}

std::vector<cplx> overlap_continuum(int l, double lambda, std::span<const double> times) {
  const Dispersion d = make_dispersion(lambda);
  std::vector<cplx> out(times.size(), cplx{0.0, 0.0});
  for (int k = 1; k <= l + 1; ++k) {
    const double kt = kPi * k / (l + 2);
    const double w = (2.0 / (l + 2)) * std::sin(kt) * std::sin(kt * (l + 1));
    const double ek = d.energy(kt);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double ph = -ek * times[i];
      out[i] += w * cplx{std::cos(ph), std::sin(ph)};
    }
  }
  return out;
}

double gap_scaling(int L, double w2) {
  const int m = L % 3;
  if (m != 0 && m != 1) throw std::invalid_argument("gap_scaling: L mod 3 must be 0 or 1");
  const double e_scft = m == 1 ? 1.0 / 3.0 : 2.0 / 3.0;
  return 2.0 * kPi * e_scft * 3.0 * fermi_velocity() * w2 / L;
}

double coherence_budget(const BudgetParams& p, bool include_preparation) {
  if (p.omega <= 0.0 || p.delta <= 0.0 || p.c6 <= 0.0 || p.r0 <= 0.0 || p.tau0 <= 0.0)
    throw std::invalid_argument("coherence_budget: positive physical parameters required");
  const double v2 = p.c6 / std::pow(2.0 * p.r0, 6);
  double inner = 2.0 * p.tau0 * fermi_velocity() / (p.delta * (1.0 + 2.0 * p.delta / v2));
  if (include_preparation)
    inner /= p.e_scft * p.kappa * p.p_bar / (2.0 * kPi) + 1.0;
  return 3.0 * p.omega * std::sqrt(inner);
}

}  // namespace m1sim
