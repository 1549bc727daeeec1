#include "m1sim/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace m1sim {

namespace {

// All L-bit masks with n bits set, ascending (Gosper's hack).
template <typename F>
void for_each_combination(int L, int n, F&& fn) {
  if (n == 0) {
    fn(0u);
    return;
  }
  if (n > L) return;
  std::uint32_t v = (1u << n) - 1;
  const std::uint32_t limit = 1u << L;
  while (v < limit) {
    fn(v);
    std::uint32_t t = v | (v - 1);
    std::uint32_t next = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    if (next <= v) break;  // wrapped
    v = next;
  }
}

bool has_adjacent_pair(std::uint32_t bits, int L, Boundary boundary) {
  if (bits & (bits >> 1)) return true;
  if (boundary == Boundary::periodic && L >= 2 && (bits & 1u) && (bits >> (L - 1) & 1u))
    return true;
  return false;
}

}  // namespace

int HilbertSpace::index_of(std::uint32_t bits) const {
  auto it = std::lower_bound(states.begin(), states.end(), bits);
  if (it == states.end() || *it != bits) return -1;
  return static_cast<int>(it - states.begin());
}

HilbertSpace enumerate_space(int L, int n, Boundary boundary, bool constrained) {
  if (L < 1 || L > 31) throw std::invalid_argument("enumerate_space: L out of range");
  if (n < 0 || n > L) throw std::invalid_argument("enumerate_space: n out of range");
  HilbertSpace sp;
  sp.sites = L;
  sp.particles = n;
  sp.boundary = boundary;
  sp.constrained = constrained;
  for_each_combination(L, n, [&](std::uint32_t bits) {
    if (constrained && has_adjacent_pair(bits, L, boundary)) return;
    sp.states.push_back(bits);
  });
  return sp;
}

long constrained_open_dimension(int L, int n) {
  if (n == 0) return 1;
  const int m = L - n + 1;
  if (m < n) return 0;
  long num = 1;
  for (int i = 0; i < n; ++i) num = num * (m - i) / (i + 1);
  return num;
}

std::optional<std::pair<std::uint32_t, int>> apply_c_dag(std::uint32_t bits, int site) {
  const std::uint32_t mask = 1u << (site - 1);
  if (bits & mask) return std::nullopt;
  const int parity = std::popcount(bits & (mask - 1)) & 1;
  return std::pair{bits | mask, parity ? -1 : 1};
}

std::optional<std::pair<std::uint32_t, int>> apply_c(std::uint32_t bits, int site) {
  const std::uint32_t mask = 1u << (site - 1);
  if (!(bits & mask)) return std::nullopt;
  const int parity = std::popcount(bits & (mask - 1)) & 1;
  return std::pair{bits & ~mask, parity ? -1 : 1};
}

bool neighbors_empty(std::uint32_t bits, int site, int L, Boundary boundary) {
  for (int d : {-1, 1}) {
    int j = site + d;
    if (boundary == Boundary::periodic) {
      j = (j - 1 + L) % L + 1;
    } else if (j < 1 || j > L) {
      continue;
    }
    if (bits >> (j - 1) & 1u) return false;
  }
  return true;
}

int RydbergSpace::index_of(std::uint64_t key) const {
  auto it = std::lower_bound(states.begin(), states.end(), key);
  if (it == states.end() || *it != key) return -1;
  return static_cast<int>(it - states.begin());
}

RydbergSpace enumerate_rydberg(int L, int n) {
  if (L < 1 || L > 31) throw std::invalid_argument("enumerate_rydberg: L out of range");
  if (n < 0 || n > L) throw std::invalid_argument("enumerate_rydberg: n out of range");
  RydbergSpace sp;
  sp.sites = L;
  sp.atoms = n;
  // position-major packing: combinations ascend, internal configs ascend
  for_each_combination(L, n, [&](std::uint32_t pos) {
    for (std::uint32_t ib = 0; ib < (1u << n); ++ib)
      sp.states.push_back(RydbergSpace::pack(pos, ib));
  });
  return sp;
}

}  // namespace m1sim
