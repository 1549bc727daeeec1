#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace m1sim {

using cplx = std::complex<double>;

// Fermi velocity at criticality, 3*sqrt(3)/4 in model units.
double fermi_velocity();

// Continuum kink dispersion. Internally E(k) = C * sqrt(sin^2(k/2) + a cos^2(k/2))
// with a in [0,1]; a=0 at criticality (pure sine), a=1 at extreme staggering
// (flat band E=1). Derivatives are closed forms of the same expression.
struct Dispersion {
  double lambda = 0.0;
  double s_aux = 0.0;      // sqrt(8 + lambda^2)
  double a_flat = 0.0;     // flatness ratio
  double prefactor = 0.0;  // C

  double energy(double k) const;
  double deriv(double k) const;   // dE/dk
  double deriv2(double k) const;  // d^2E/dk^2
  double gap() const;             // E(0) closed form
};

Dispersion make_dispersion(double lambda);

// Maximum group velocity over (0, pi]; golden-section refinement of a grid
// bracket, except at criticality where the maximum sits at k=0.
double v_max(double lambda);

// Saddle-point approximation of the boundary overlap. Contributions are gated
// by theta(v_max t / (l+2) - (2s-1)); each saddle solves E'(k) matching on the
// decreasing branch of the group velocity (plus the mirror branch off
// criticality, where the group velocity peaks in the interior).
cplx saddle_overlap(int l, double lambda, double t, int max_saddles);

// Overlap sum with the continuum energies E(k~) in place of the exact band.
std::vector<cplx> overlap_continuum(int l, double lambda, std::span<const double> times);

// Finite-size gap estimate at criticality; E_SCFT = 1/3 for L=3l+1, 2/3 for L=3l.
double gap_scaling(int L, double w2);

struct BudgetParams {
  double omega = 0.0;    // Rabi (angular convention, see dressing.hpp)
  double delta = 0.0;    // detuning (angular convention)
  double c6 = 0.0;       // as tabulated, energy*length^6
  double r0 = 0.0;       // lattice spacing (length)
  double tau0 = 0.0;     // Rydberg lifetime (s)
  double kappa = 0.0;    // sweep length in units of the inverse gap
  double e_scft = 1.0 / 3.0;
  double p_bar = 2.0 / std::numbers::pi_v<double>;  // cosine ramp average
};

// Achievable system size for coherent evolution; with include_preparation the
// sweep cost enters through kappa (kappa = 0 reduces to the plain formula).
double coherence_budget(const BudgetParams& p, bool include_preparation);

}  // namespace m1sim
