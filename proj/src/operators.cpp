#include "m1sim/operators.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace m1sim {

namespace {

void check_sector_pair(const HilbertSpace& from, const HilbertSpace& to) {
  if (from.sites != to.sites || from.boundary != to.boundary || !from.constrained ||
      !to.constrained || to.particles != from.particles + 1)
    throw std::invalid_argument("supercharge: sectors must share L/boundary and differ by one particle");
}

SparseMatrix build_q_impl(const HilbertSpace& from, const HilbertSpace& to,
                          const Staggering& stagger, int only_site) {
  check_sector_pair(from, to);
  const int L = from.sites;
  SparseBuilder b(to.dim(), from.dim());
  for (int col = 0; col < from.dim(); ++col) {
    const std::uint32_t bits = from.states[col];
    const int lo = only_site > 0 ? only_site : 1;
    const int hi = only_site > 0 ? only_site : L;
    for (int site = lo; site <= hi; ++site) {
      const double lam = stagger.coupling(site);
      if (lam == 0.0) continue;
      if (bits >> (site - 1) & 1u) continue;
      if (!neighbors_empty(bits, site, L, from.boundary)) continue;
      auto created = apply_c_dag(bits, site);
      const int row = to.index_of(created->first);
      if (row < 0) continue;  // cannot happen in a constrained space
      const double sign_i = site % 2 ? -1.0 : 1.0;  // (-1)^i, 1-based
      b.add(row, col, sign_i * lam * created->second);
    }
  }
  return b.build();
}

}  // namespace

SparseMatrix build_supercharge(const HilbertSpace& from, const HilbertSpace& to,
                               const Staggering& stagger) {
  return build_q_impl(from, to, stagger, 0);
}

SparseMatrix build_supercharge_site(const HilbertSpace& from, const HilbertSpace& to,
                                    const Staggering& stagger, int site) {
  if (site < 1 || site > from.sites) throw std::invalid_argument("supercharge site out of range");
  return build_q_impl(from, to, stagger, site);
}

SparseMatrix build_hq(const HilbertSpace& space, const Staggering& stagger) {
  if (!space.constrained) throw std::invalid_argument("build_hq: constrained space required");
  const int L = space.sites;
  const int n = space.particles;
  SparseMatrix h(space.dim(), space.dim());
  if (n < L) {
    HilbertSpace up = enumerate_space(L, n + 1, space.boundary, true);
    SparseMatrix q = build_supercharge(space, up, stagger);
    h = add(h, multiply(q.transposed(), q));
  }
  if (n > 0) {
    HilbertSpace down = enumerate_space(L, n - 1, space.boundary, true);
    SparseMatrix qm = build_supercharge(down, space, stagger);
    h = add(h, multiply(qm, qm.transposed()));
  }
  return h;
}

SparseMatrix build_local_energy(const HilbertSpace& space, const Staggering& stagger, int site) {
  if (site < 1 || site > space.sites) throw std::invalid_argument("local energy: site out of range");
  const int L = space.sites;
  const int n = space.particles;
  SparseMatrix h(space.dim(), space.dim());
  if (n < L) {
    HilbertSpace up = enumerate_space(L, n + 1, space.boundary, true);
    SparseMatrix q = build_supercharge(space, up, stagger);
    SparseMatrix qi = build_supercharge_site(space, up, stagger, site);
    // 1/2 (Qdag Q_i + Q_i^dag Q) on this sector
    h = add(h, add(multiply(q.transposed(), qi), multiply(qi.transposed(), q), 0.5, 0.5));
  }
  if (n > 0) {
    HilbertSpace down = enumerate_space(L, n - 1, space.boundary, true);
    SparseMatrix qm = build_supercharge(down, space, stagger);
    SparseMatrix qim = build_supercharge_site(down, space, stagger, site);
    // 1/2 (Q Q_i^dag + Q_i Qdag) on this sector
    h = add(h, add(multiply(qm, qim.transposed()), multiply(qim, qm.transposed()), 0.5, 0.5));
  }
  return h;
}

std::vector<double> number_diagonal(const HilbertSpace& space, int site) {
  std::vector<double> d(space.dim());
  for (int i = 0; i < space.dim(); ++i) d[i] = space.states[i] >> (site - 1) & 1u;
  return d;
}

std::vector<double> number_diagonal(const RydbergSpace& space, int site) {
  std::vector<double> d(space.dim());
  for (int i = 0; i < space.dim(); ++i)
    d[i] = RydbergSpace::position(space.states[i]) >> (site - 1) & 1u;
  return d;
}

namespace {

// Internal-state bit index of the atom at `site` (atoms counted in site order).
inline int atom_rank(std::uint32_t pos, int site) {
  return std::popcount(pos & ((1u << (site - 1)) - 1));
}

}  // namespace

std::vector<double> rydberg_diagonal(const RydbergSpace& space, int site) {
  std::vector<double> d(space.dim(), 0.0);
  for (int i = 0; i < space.dim(); ++i) {
    const std::uint32_t pos = RydbergSpace::position(space.states[i]);
    if (!(pos >> (site - 1) & 1u)) continue;
    const std::uint32_t ib = RydbergSpace::internal(space.states[i]);
    d[i] = ib >> atom_rank(pos, site) & 1u;
  }
  return d;
}

std::vector<double> ground_diagonal(const RydbergSpace& space, int site) {
  std::vector<double> d(space.dim(), 0.0);
  for (int i = 0; i < space.dim(); ++i) {
    const std::uint32_t pos = RydbergSpace::position(space.states[i]);
    if (!(pos >> (site - 1) & 1u)) continue;
    const std::uint32_t ib = RydbergSpace::internal(space.states[i]);
    d[i] = (ib >> atom_rank(pos, site) & 1u) ? 0.0 : 1.0;
  }
  return d;
}

std::vector<double> nn_ground_pairs_diagonal(const RydbergSpace& space) {
  std::vector<double> d(space.dim(), 0.0);
  for (int i = 0; i < space.dim(); ++i) {
    const std::uint32_t pos = RydbergSpace::position(space.states[i]);
    const std::uint32_t ib = RydbergSpace::internal(space.states[i]);
    int rank = -1;
    for (int s = 1; s <= space.sites; ++s) {
      if (!(pos >> (s - 1) & 1u)) continue;
      ++rank;
      if (s < space.sites && (pos >> s & 1u)) {
        const bool g1 = !(ib >> rank & 1u);
        const bool g2 = !(ib >> (rank + 1) & 1u);
        if (g1 && g2) d[i] += 1.0;
      }
    }
  }
  return d;
}

std::vector<double> observable_site_sum(ObservableKind kind, const HilbertSpace& space) {
  const int L = space.sites;
  if (L < 3) throw std::invalid_argument("observable: L >= 3 required");
  std::vector<double> m = number_diagonal(space, L - 1);
  const std::vector<double> nl = number_diagonal(space, L);
  for (int i = 0; i < space.dim(); ++i) m[i] += nl[i];
  if (kind != ObservableKind::dn) {
    const std::vector<double> n2 = number_diagonal(space, L - 2);
    for (int i = 0; i < space.dim(); ++i) m[i] += n2[i];
  }
  return m;
}

double observable_value(ObservableKind kind, double alpha, double beta, double site_sum) {
  const double v = alpha * (1.0 - beta * site_sum);
  return kind == ObservableKind::dnbar ? -v : v;
}

std::vector<double> build_observable(ObservableKind kind, const HilbertSpace& space,
                                     double alpha, double beta) {
  std::vector<double> m = observable_site_sum(kind, space);
  for (double& v : m) v = observable_value(kind, alpha, beta, v);
  return m;
}

ObservableFit fit_observable_coeffs(ObservableKind kind, double sum_k1, double sum_klast) {
  ObservableFit fit;
  const double denom = kind == ObservableKind::dnbar ? sum_klast - sum_k1 : sum_k1 - sum_klast;
  if (std::abs(denom) < 1e-12) return fit;  // degenerate expectation values
  const double v = 1.0 / denom;
  const double u = v * sum_k1;
  if (std::abs(u) < 1e-12) return fit;
  fit.alpha = u;
  fit.beta = v / u;
  fit.ok = true;
  return fit;
}

SparseMatrix build_rydberg(const RydbergSpace& space, const RydbergParams& p) {
  const int L = space.sites;
  if (static_cast<int>(p.mu.size()) != L || static_cast<int>(p.omega.size()) != L)
    throw std::invalid_argument("build_rydberg: mu/omega must have one entry per site");
  if (p.hopping <= 0.0 || p.r0 <= 0.0) throw std::invalid_argument("build_rydberg: J, r0 > 0");
  SparseBuilder b(space.dim(), space.dim());
  std::vector<double> vtab(L, 0.0);  // V(d*r0)
  for (int d = 1; d < L; ++d) {
    if (p.range_cut >= 1 && d > p.range_cut) continue;
    vtab[d] = p.c6 / std::pow(p.r0 * d, 6);
  }
  for (int a = 0; a < space.dim(); ++a) {
    const std::uint32_t pos = RydbergSpace::position(space.states[a]);
    const std::uint32_t ib = RydbergSpace::internal(space.states[a]);
    double diag = 0.0;
    int rank = -1;
    int prev_r_site[32];
    int n_r = 0;
    for (int s = 1; s <= L; ++s) {
      if (!(pos >> (s - 1) & 1u)) continue;
      ++rank;
      diag += p.mu[s - 1];
      const bool r_state = ib >> rank & 1u;
      if (r_state) {
        diag += p.delta;
        for (int k = 0; k < n_r; ++k) {
          const int d = s - prev_r_site[k];
          if (d < L) diag += vtab[d];
        }
        prev_r_site[n_r++] = s;
      }
      // sigma^x flips the atom at this site
      b.add(space.index_of(RydbergSpace::pack(pos, ib ^ (1u << rank))), a, p.omega[s - 1]);
      // hopping; nearest-neighbour moves keep the atom ordering
      if (!r_state || p.rydberg_hops) {
        for (int dd : {-1, 1}) {
          const int t = s + dd;
          if (t < 1 || t > L) continue;
          if (pos >> (t - 1) & 1u) continue;
          const std::uint32_t npos = (pos ^ (1u << (s - 1))) | (1u << (t - 1));
          b.add(space.index_of(RydbergSpace::pack(npos, ib)), a, -p.hopping);
        }
      }
    }
    b.add(a, a, diag);
  }
  return b.build();
}

SparseMatrix build_hq_dressed(const HilbertSpace& space, const DressedCouplings& c) {
  const int L = space.sites;
  if (space.boundary != Boundary::open)
    throw std::invalid_argument("build_hq_dressed: open chains only");
  if (static_cast<int>(c.bond_j.size()) != L - 1 || static_cast<int>(c.mu.size()) != L)
    throw std::invalid_argument("build_hq_dressed: coupling vector sizes");
  SparseBuilder b(space.dim(), space.dim());
  for (int a = 0; a < space.dim(); ++a) {
    const std::uint32_t bits = space.states[a];
    double diag = 0.0;
    for (int s = 1; s <= L; ++s)
      if (bits >> (s - 1) & 1u) diag += c.mu[s - 1];
    for (std::size_t dm1 = 0; dm1 < c.pair_w.size(); ++dm1) {
      if (c.pair_w[dm1].empty()) continue;
      const int d = static_cast<int>(dm1) + 1;
      for (int s = 1; s + d <= L; ++s) {
        if ((bits >> (s - 1) & 1u) && (bits >> (s + d - 1) & 1u)) diag += c.pair_w[dm1][s - 1];
      }
    }
    b.add(a, a, diag);
    // hops s -> s+1 and back; JW signs are trivial for nearest neighbours
    for (int s = 1; s < L; ++s) {
      const bool occ_s = bits >> (s - 1) & 1u;
      const bool occ_t = bits >> s & 1u;
      if (occ_s == occ_t) continue;
      if (c.projected_hops && !space.constrained) {
        // P_{s-1} P_{s+2}: both outer neighbours of the bond must be empty
        const int left = s - 1, right = s + 2;
        if (left >= 1 && (bits >> (left - 1) & 1u)) continue;
        if (right <= L && (bits >> (right - 1) & 1u)) continue;
      }
      const std::uint32_t flipped = bits ^ (1u << (s - 1)) ^ (1u << s);
      const int row = space.index_of(flipped);
      if (row < 0) continue;  // target violates the constraint (projected automatically)
      b.add(row, a, -c.bond_j[s - 1]);
    }
  }
  return b.build();
}

}  // namespace m1sim
