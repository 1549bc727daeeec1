#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "m1sim/operators.hpp"
#include "m1sim/spectra.hpp"

namespace m1sim {

// 1-(s)kink band of an open chain L=3l+1 with pattern 11lambda: the l+1 band
// eigenpairs plus the localized states obtained by the sine transform.
// Away from lambda=0 the band members are identified by adiabatic subspace
// continuation from the extreme-staggering manifold; unavoided crossings move
// multikink states below parts of the band, so the l+1 lowest eigenpairs are
// not the band once lambda grows.
struct KinkBasis {
  int l = 0;
  double lambda = 0.0;
  bool skink_sector = false;  // true: sector n=l+1 (skinks)
  int space_dim = 0;
  std::vector<double> energies;  // l+1 ascending
  std::vector<double> band;      // space_dim x (l+1), column-major, phase-fixed
  std::vector<double> kinks;     // localized |K_j>, same layout, j=1..l+1

  std::span<const double> band_vec(int k) const {  // k = 1..l+1
    return {band.data() + static_cast<std::size_t>(k - 1) * space_dim,
            static_cast<std::size_t>(space_dim)};
  }
  std::span<const double> kink(int j) const {  // j = 1..l+1
    return {kinks.data() + static_cast<std::size_t>(j - 1) * space_dim,
            static_cast<std::size_t>(space_dim)};
  }
  double tracking_quality = 1.0;  // min per-step subspace overlap during continuation
  bool band_separated = true;     // lowest l+1 eigenpairs coincide with the band
};

// Bare (extreme-staggering) localized states, expressed in the constrained
// basis of L=3l+1 sites. j = 1..l+1 counts kink positions left to right.
std::vector<double> bare_kink_state(int l, int j);
std::vector<double> bare_skink_state(int l, int j);

struct BandOptions {
  double lambda_step = 0.05;          // continuation step
  double min_subspace_overlap = 0.8;  // per-step tracking quality floor
};

// Band extraction via continuation from lambda=0. The staggering pattern is
// fixed to 11lambda (offset 0) as in the kink construction.
KinkBasis extract_kink_band(int l, double lambda, bool skink_sector = false,
                            const BandOptions& opts = {});

// Localized kinks from band eigenpairs (the inverse sine transform). Already
// invoked by extract_kink_band; exposed for bands obtained elsewhere.
std::vector<double> build_kinks(const KinkBasis& basis);

// |Kbar_j> = Q|K_j>/||Q|K_j>||; exact bare skinks at lambda=0. Returns the
// matrix of columns j=1..l+1 in the (l+1)-particle sector basis.
std::vector<double> skinks_from_supercharge(const KinkBasis& kinks, const SparseMatrix& q,
                                            int dim_up);

// Closed-form boundary-to-boundary overlap o(t) from the band energies.
std::vector<cplx> overlap_amplitude(const KinkBasis& basis, std::span<const double> times);

struct QuenchSeries {
  std::vector<double> times;       // units of 1/J
  std::vector<double> overlap_sq;  // |o(t)|^2, empty when no target given
  std::map<std::string, std::vector<double>> observables;
  double norm_drift = 0.0;  // max | ||psi(t)|| - 1 |
};

// Exact propagation through a precomputed spectral decomposition.
QuenchSeries propagate_eigen(const Spectrum& spec, std::span<const cplx> psi0,
                             std::span<const double> times,
                             const std::map<std::string, std::vector<double>>& diag_observables,
                             std::span<const cplx> overlap_target = {});

enum class CnEndpoint { left, midpoint };

// Crank-Nicolson propagation for a time-independent Hamiltonian on a uniform
// grid; used as the cross-validation path against propagate_eigen.
QuenchSeries propagate_cn(const SparseMatrix& h, std::span<const cplx> psi0,
                          double t_max, double dt,
                          const std::map<std::string, std::vector<double>>& diag_observables,
                          std::span<const cplx> overlap_target = {});

// H(t) = (1 - F(t)) H_i + F(t) H_f with the cosine ramp by default.
struct SweepProtocol {
  SparseMatrix h_initial;
  SparseMatrix h_final;
  double duration = 0.0;
  double dt = 0.01;
  CnEndpoint endpoint = CnEndpoint::left;
  std::function<double(double)> schedule;  // default: (1 - cos(pi t/T))/2
};

struct PrepareResult {
  std::vector<cplx> state;
  double fidelity = 0.0;
  double min_gap = 0.0;   // smallest instantaneous gap seen at the checkpoints
  bool gap_warning = false;
  double norm_drift = 0.0;
};

// Crank-Nicolson sweep from psi0; fidelity is |<target|psi(T)>|. Gap is
// monitored at a fixed number of checkpoints when gap_checks > 0.
PrepareResult adiabatic_prepare(const SweepProtocol& protocol, std::span<const double> psi0,
                                std::span<const double> target, int gap_checks = 0,
                                double gap_threshold = 1e-3);

// Pinning Hamiltonian diagonal: -(alpha i + mu0) n_i - mu sum_{i in pinned} n_i.
std::vector<double> pinning_diagonal(const HilbertSpace& space, std::span<const int> pinned_sites,
                                     double mu = 100.0, double mu0 = 1.0, double alpha = 0.1);

// The product state with the given occupied sites (1-based).
std::vector<double> product_state(const HilbertSpace& space, std::span<const int> occupied);

}  // namespace m1sim
