#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "m1sim/operators.hpp"
#include "m1sim/sparse.hpp"

namespace m1sim {

// Eigenpairs in ascending energy order. Vectors are column-major, one column
// per eigenpair, each of length dim.
struct Spectrum {
  int dim = 0;
  std::vector<double> energies;
  std::vector<double> vectors;

  int count() const { return static_cast<int>(energies.size()); }
  std::span<const double> vec(int k) const {
    return {vectors.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
  // max_k ||H v_k - E_k v_k||_2
  double max_residual(const SparseMatrix& h) const;
  double max_orthonormality_defect() const;
};

struct DiagOptions {
  int k_lowest = -1;           // -1: all eigenpairs
  int dense_threshold = 4096;  // dense solver below, Lanczos above
  double tol = 1e-10;          // Lanczos residual target
  int max_iter = 0;            // 0: automatic
};

// Dense symmetric eigensolve (LAPACK dsyevd).
Spectrum diagonalize_dense(const SparseMatrix& h);
// Routes to the dense solver below the threshold, Lanczos with full
// reorthogonalization above. Throws on non-Hermitian input or non-convergence.
Spectrum diagonalize(const SparseMatrix& h, const DiagOptions& opts = {});
// k lowest eigenpairs by Lanczos with full reorthogonalization.
Spectrum lanczos_lowest(const SparseMatrix& h, int k, double tol = 1e-10, int max_iter = 0);

struct DensityProfile {
  std::vector<double> site_densities;
  std::vector<double> energy_densities;  // empty unless requested
};

// Ground state of the open chain L=3l, pattern 1 lambda 1, sector n=l.
// Throws when the ground state is degenerate.
DensityProfile ground_state_densities(int l, double lambda, bool with_energy = false);

// Critical ground-state densities from the scaling functions; valid on
// x in [2, L], evaluated at integer sites 1..L (site 1 is extrapolation).
DensityProfile cft_densities(int L, double amplitude);

struct PairingReport {
  struct Sector {
    int n = 0;
    std::vector<double> energies;
  };
  std::vector<Sector> sectors;
  // (sector, energy) pairs with no partner in the neighbouring sectors
  std::vector<std::pair<int, double>> unmatched;
  double zero_tol = 1e-10;
  double match_tol = 1e-9;
  int zero_modes = 0;
};

PairingReport susy_pairing_report(int L, const Staggering& stagger,
                                  Boundary boundary = Boundary::open);

}  // namespace m1sim
