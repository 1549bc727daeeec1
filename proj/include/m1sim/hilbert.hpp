#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace m1sim {

enum class Boundary { open, periodic };

// Occupation-number basis of spinless fermions on a chain. Site 1 is the
// lowest bit. With `constrained` set, configurations with two adjacent
// occupied sites are excluded (periodic chains also exclude the (L,1) pair).
struct HilbertSpace {
  int sites = 0;
  int particles = 0;
  Boundary boundary = Boundary::open;
  bool constrained = true;
  std::vector<std::uint32_t> states;  // ascending bitmask order

  int dim() const { return static_cast<int>(states.size()); }
  // Ordinal of a basis state, or -1 if not in the space.
  int index_of(std::uint32_t bits) const;
};

HilbertSpace enumerate_space(int L, int n, Boundary boundary = Boundary::open,
                             bool constrained = true);

// Dimension of the constrained open chain, C(L-n+1, n); enumeration oracle in tests.
long constrained_open_dimension(int L, int n);

// c^dag_site with the Jordan-Wigner sign (-1)^(#particles left of site).
// Sites are 1-based. Returns nothing when the site is already occupied.
std::optional<std::pair<std::uint32_t, int>> apply_c_dag(std::uint32_t bits, int site);
// Adjoint of apply_c_dag. Returns nothing when the site is empty.
std::optional<std::pair<std::uint32_t, int>> apply_c(std::uint32_t bits, int site);

// True when both neighbours of `site` are empty (projector P_<i>).
bool neighbors_empty(std::uint32_t bits, int site, int L, Boundary boundary);

// Product space of n atoms on L sites, each atom carrying a two-level internal
// state (g/r). Internal bit k refers to the k-th atom in ascending site order.
// No kinematic adjacency constraint; the blockade is energetic.
struct RydbergSpace {
  int sites = 0;
  int atoms = 0;
  std::vector<std::uint64_t> states;  // packed: pos | internal << 32, ascending

  int dim() const { return static_cast<int>(states.size()); }
  int index_of(std::uint64_t key) const;

  static std::uint64_t pack(std::uint32_t pos, std::uint32_t internal) {
    return static_cast<std::uint64_t>(pos) << 32 | internal;
  }
  static std::uint32_t position(std::uint64_t key) { return static_cast<std::uint32_t>(key >> 32); }
  static std::uint32_t internal(std::uint64_t key) { return static_cast<std::uint32_t>(key); }
};

RydbergSpace enumerate_rydberg(int L, int n);

}  // namespace m1sim
