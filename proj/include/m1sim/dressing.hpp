#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "m1sim/operators.hpp"

namespace m1sim {

// Unit convention (fixed by reproducing the tabulated potential anchors):
// Rabi frequencies and detunings are stored as angular values, i.e.
// 2*pi*(value in Hz); the van der Waals coefficient is used exactly as
// tabulated (GHz um^6 -> Hz um^6 without a 2*pi). Potentials then come out
// in plain Hz. Lengths are in um.
struct DressingLayer {
  double omega = 0.0;  // Rabi amplitude (angular)
  double delta = 0.0;  // detuning (angular, signed)
  double c6 = 0.0;     // as tabulated (signed)
};

inline double angular(double hz) { return 2.0 * std::numbers::pi_v<double> * hz; }

// Perturbative-validity flag: |Omega/Delta| < 1. A false value is a warning
// for the caller, not an error; the formulas still evaluate.
inline bool perturbative_regime(const DressingLayer& layer) {
  return std::abs(layer.omega) < std::abs(layer.delta);
}

// Bare van der Waals interaction at distance r.
double vdw(const DressingLayer& layer, double r);

// Flat-top potential W(r) = 2 (Om_i Om_j)^2 V / (Delta^3 (2 Delta + V)).
double dressed_potential(const DressingLayer& layer, double r);
double dressed_potential_pair(double omega_i, double omega_j, double delta, double c6, double r);

// Two-atom check: closed-form W'(r) from eliminating the fast components vs
// the exact ground-level energy of the 4x4 two-atom Hamiltonian.
struct TwoAtomResult {
  double closed_form = 0.0;   // W'(r)
  double exact_ground = 0.0;  // lowest eigenvalue of the 4x4 block
};
TwoAtomResult two_atom_oracle(double omega_i, double omega_j, double delta, double v);

// Secondary layer whose long-range tail cancels the primary's. Requires an
// attractive partner state (c6 < 0) and delta < 0 to stay off resonance.
DressingLayer match_double_dressing(const DressingLayer& primary, double secondary_delta,
                                    double secondary_c6);

struct PotentialDesign {
  std::vector<DressingLayer> layers;
  double total(double r) const;
};

// Discrete first-kind design: W_target(r_i) = sum_j A_j / ((rho_j r_i)^6 + 1),
// solved by truncated-SVD pseudoinverse with relative cutoff rcond.
struct FredholmResult {
  std::vector<double> amplitudes;     // A(rho_j)
  std::vector<double> rho;            // inverse radii (in 1/r0 units)
  double max_residual_rel = 0.0;      // at the fit points, relative to |W_target(2 r0)|
  double residual_estimate = 0.0;     // SVD truncation prediction of the same quantity
  int rank = 0;
  double suppression = 0.0;

  double total(double r) const;           // r in units of r0
  double target(double r_over_r0) const;  // step-like target profile
};

FredholmResult fredholm_design(double suppression, std::span<const double> rho_grid,
                               std::span<const double> fit_points, double rcond);

// Per-site coupling patterns realizing the staggered chain with dressed
// interactions; all entries in units of J = lambda^2 * W(2 r0). The Omega
// pattern is the per-site Rabi multiplier (lambda / lambda_i).
struct OffcriticalPatterns {
  std::vector<double> bond_j;   // size L-1
  std::vector<double> w_nnn;    // size L-2, pair (i, i+2)
  std::vector<double> mu;       // size L
  std::vector<double> omega;    // size L, relative multipliers
};

OffcriticalPatterns offcritical_patterns(double lambda, int L, const Staggering& stagger);

// Dressed couplings for build_hq_dressed: the ideal staggered chain plus
// interaction tails W(n r0), n >= 3, generated by the Omega pattern. The
// potential is a callable so single/double/designed layers all fit.
DressedCouplings dressed_chain_couplings(double lambda, int L, const Staggering& stagger,
                                         const std::function<double(double)>& potential,
                                         double r0, bool include_tails);

// (t gamma)/(t J) prefactor and W(3 r0)/W(2 r0). The scatter ratio follows the
// quoted-frequency arithmetic: Omega and Delta enter as plain (non-angular)
// frequencies while gamma0 is a plain rate in 1/s.
struct TradeoffRatios {
  double scatter = 0.0;
  double tail = 0.0;
};
TradeoffRatios tradeoff_ratios(const DressingLayer& layer, double r0, double gamma0);

}  // namespace m1sim
