#pragma once

#include <array>
#include <string>
#include <vector>

#include "m1sim/hilbert.hpp"
#include "m1sim/sparse.hpp"

namespace m1sim {

// Period-3 coupling pattern. coupling(i) is 1 except at sites whose pattern
// slot carries the staggering parameter lambda. Sites are 1-based.
struct Staggering {
  int sites = 0;
  double lambda = 1.0;
  int lambda_slot = 2;  // 0-based slot within the period; 11L has the L at slot 2
  int offset = 0;       // pattern slot occupied by site 1

  double coupling(int site) const {
    return (site - 1 + offset) % 3 == lambda_slot ? lambda : 1.0;
  }
  std::array<double, 3> pattern() const {
    std::array<double, 3> p{};
    for (int s = 0; s < 3; ++s) p[s] = s == lambda_slot ? lambda : 1.0;
    return p;
  }
  Staggering with_lambda(double lam) const {
    Staggering s = *this;
    s.lambda = lam;
    return s;
  }
  std::vector<double> expand() const {
    std::vector<double> v(sites);
    for (int i = 1; i <= sites; ++i) v[i - 1] = coupling(i);
    return v;
  }
};

inline Staggering stagger_11l(int L, double lambda) { return {L, lambda, 2, 0}; }
inline Staggering stagger_1l1(int L, double lambda) { return {L, lambda, 1, 0}; }
inline Staggering stagger_l11(int L, double lambda) { return {L, lambda, 0, 0}; }

// Q = sum_i (-1)^i lambda_i c^dag_i P_<i>, mapping the n-particle sector to
// n+1. Both spaces must agree on L, boundary and the M1 constraint.
SparseMatrix build_supercharge(const HilbertSpace& from, const HilbertSpace& to,
                               const Staggering& stagger);
// Single term Q_i (1-based site); used by the local energy density.
SparseMatrix build_supercharge_site(const HilbertSpace& from, const HilbertSpace& to,
                                    const Staggering& stagger, int site);

// H_Q = {Q, Qdag} restricted to the given particle-number sector.
SparseMatrix build_hq(const HilbertSpace& space, const Staggering& stagger);

// h_i = 1/2 ({Q, Qdag_i} + {Qdag, Q_i}); sum_i h_i == H_Q entrywise.
SparseMatrix build_local_energy(const HilbertSpace& space, const Staggering& stagger, int site);

// Diagonal of n_site in the given basis (1-based site).
std::vector<double> number_diagonal(const HilbertSpace& space, int site);
std::vector<double> number_diagonal(const RydbergSpace& space, int site);  // atom present (g or r)
std::vector<double> rydberg_diagonal(const RydbergSpace& space, int site); // atom in r
std::vector<double> ground_diagonal(const RydbergSpace& space, int site);  // atom in g
// sum over nearest-neighbour pairs of ground-state atoms
std::vector<double> nn_ground_pairs_diagonal(const RydbergSpace& space);

enum class ObservableKind { dn, dn3, dnbar };

// Diagonal kink/skink detector. dn uses n_{L-1}+n_L; dn3 and dnbar use
// n_{L-2}+n_{L-1}+n_L. dnbar carries the overall minus sign.
std::vector<double> build_observable(ObservableKind kind, const HilbertSpace& space,
                                     double alpha, double beta);
std::vector<double> observable_site_sum(ObservableKind kind, const HilbertSpace& space);
double observable_value(ObservableKind kind, double alpha, double beta, double site_sum);

// Rydberg-dressed chain, Eq-of-motion convention: energies are plain numbers
// in one consistent unit system (see dressing.hpp for the unit convention).
struct RydbergParams {
  double hopping = 0.0;            // J > 0, acts on ground-state atoms
  std::vector<double> mu;          // per-site chemical potential, size L
  std::vector<double> omega;       // per-site Rabi coupling, size L
  double delta = 0.0;              // detuning
  double c6 = 0.0;                 // van der Waals coefficient (energy * length^6)
  double r0 = 1.0;                 // lattice spacing (length)
  int range_cut = -1;              // max interaction distance in lattice units; -1 = unlimited
  bool rydberg_hops = false;       // sensitivity toggle; default: only g atoms hop
};

SparseMatrix build_rydberg(const RydbergSpace& space, const RydbergParams& params);

// Effective ground-state-atom Hamiltonian with explicit coupling vectors, in
// units of J. Kinetic terms carry the M1 projectors when projected_hops is
// set (automatic in a constrained space).
struct DressedCouplings {
  std::vector<double> bond_j;              // size L-1; hop amplitude on bond (i, i+1)
  std::vector<double> mu;                  // size L
  std::vector<std::vector<double>> pair_w; // pair_w[d-1][i-1]: n_i n_{i+d} coupling
  bool projected_hops = true;
};

SparseMatrix build_hq_dressed(const HilbertSpace& space, const DressedCouplings& c);

// Solves <K_1|obs|K_1> = 0, <K_{l+1}|obs|K_{l+1}> = 1 for (alpha, beta) given
// the two boundary expectation values of the bare site sum.
struct ObservableFit {
  double alpha = 0.0;
  double beta = 0.0;
  bool ok = false;
};
ObservableFit fit_observable_coeffs(ObservableKind kind, double sum_k1, double sum_klast);

}  // namespace m1sim
