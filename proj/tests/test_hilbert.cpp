#include <doctest.h>

#include <random>

#include "m1sim/hilbert.hpp"

using namespace m1sim;

TEST_CASE("constrained dimensions") {
  CHECK(enumerate_space(1, 0).dim() == 1);
  CHECK(enumerate_space(10, 3).dim() == 56);  // C(8,3)
  CHECK(enumerate_space(6, 2, Boundary::periodic).dim() == 9);
  // empty space is a valid result, not an error
  CHECK(enumerate_space(5, 4).dim() == 0);
}

TEST_CASE("dimension formula vs enumeration for all L <= 20") {
  for (int L = 1; L <= 20; ++L)
    for (int n = 0; n <= L; ++n)
      CHECK(enumerate_space(L, n).dim() == constrained_open_dimension(L, n));
}

TEST_CASE("states sorted and index round-trips") {
  HilbertSpace sp = enumerate_space(12, 4);
  for (int k = 0; k < sp.dim(); ++k) {
    CHECK(sp.index_of(sp.states[k]) == k);
    if (k) CHECK(sp.states[k - 1] < sp.states[k]);
  }
  CHECK(sp.index_of(0b11u) == -1);  // adjacent pair is outside the space
}

TEST_CASE("apply_c_dag examples and signs") {
  // |000>, site 2 -> (|010>, +1)
  auto r = apply_c_dag(0b000, 2);
  REQUIRE(r.has_value());
  CHECK(r->first == 0b010u);
  CHECK(r->second == 1);
  // |100> (site 1 occupied), site 3 -> (|101>, -1): one particle to the left
  r = apply_c_dag(0b001, 3);
  REQUIRE(r.has_value());
  CHECK(r->first == 0b101u);
  CHECK(r->second == -1);
  // Pauli exclusion
  CHECK(!apply_c_dag(0b010, 2).has_value());
}

TEST_CASE("c after c_dag returns the original state with sign +1") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t bits = rng() & 0xFFFu;  // 12 sites
    const int site = 1 + static_cast<int>(rng() % 12);
    auto up = apply_c_dag(bits, site);
    if (!up) continue;
    auto down = apply_c(up->first, site);
    REQUIRE(down.has_value());
    CHECK(down->first == bits);
    CHECK(up->second * down->second == 1);
  }
}

TEST_CASE("creation operators anticommute") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t bits = rng() & 0x3FFu;  // 10 sites
    const int i = 1 + static_cast<int>(rng() % 10);
    const int j = 1 + static_cast<int>(rng() % 10);
    if (i == j) continue;
    auto a1 = apply_c_dag(bits, i);
    auto b1 = apply_c_dag(bits, j);
    if (!a1 || !b1) continue;
    auto a2 = apply_c_dag(a1->first, j);
    auto b2 = apply_c_dag(b1->first, i);
    REQUIRE(a2.has_value());
    REQUIRE(b2.has_value());
    CHECK(a2->first == b2->first);
    CHECK(a1->second * a2->second == -b1->second * b2->second);
  }
}

TEST_CASE("neighbors_empty respects the boundary") {
  CHECK(neighbors_empty(0b100, 1, 3, Boundary::open));
  CHECK(!neighbors_empty(0b100, 1, 3, Boundary::periodic));  // site 3 wraps to 1
  CHECK(!neighbors_empty(0b010, 1, 3, Boundary::open));
}

TEST_CASE("rydberg space dimensions and packing") {
  CHECK(enumerate_rydberg(10, 3).dim() == 960);  // C(10,3) * 2^3
  CHECK(enumerate_rydberg(2, 0).dim() == 1);
  CHECK(enumerate_rydberg(3, 1).dim() == 6);
  RydbergSpace sp = enumerate_rydberg(6, 2);
  CHECK(sp.dim() == 15 * 4);
  for (int k = 0; k < sp.dim(); ++k) CHECK(sp.index_of(sp.states[k]) == k);
  const std::uint64_t key = RydbergSpace::pack(0b101u, 0b10u);
  CHECK(RydbergSpace::position(key) == 0b101u);
  CHECK(RydbergSpace::internal(key) == 0b10u);
}
