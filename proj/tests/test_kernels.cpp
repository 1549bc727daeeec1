#include <doctest.h>

#include <random>

#include "m1sim/kernels.hpp"
#include "m1sim/sparse.hpp"

using namespace m1sim;
using kernels::cplx;

namespace {

std::vector<cplx> random_cvec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

std::vector<double> random_rvec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

SparseMatrix random_sparse(int rows, int cols, double fill, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SparseBuilder b(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (u(rng) > 1.0 - 2.0 * fill) b.add(r, c, u(rng));
  return b.build();
}

// run fn under both backends, return results
template <typename F>
auto both(F&& fn) {
  const std::string saved = kernels::active_backend();
  kernels::force_backend("scalar");
  auto a = fn();
  struct Guard {
    std::string name;
    ~Guard() { kernels::force_backend(name); }
  } guard{saved};
  if (saved == "scalar") return std::pair{a, a};
  kernels::force_backend(saved);
  auto bres = fn();
  return std::pair{a, bres};
}

}  // namespace

TEST_CASE("kernel backends agree: axpy / dotc / nrm2sq") {
  for (int n : {1, 2, 3, 17, 256, 1001}) {
    auto x = random_cvec(n, 11 + n);
    auto y0 = random_cvec(n, 23 + n);
    const cplx a{0.7, -1.3};
    auto [ys, yv] = both([&] {
      auto y = y0;
      kernels::axpy(a, x, y);
      return y;
    });
    for (int i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) < 1e-13);

    auto [ds, dv] = both([&] { return kernels::dotc(x, y0); });
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + std::abs(ds)));

    auto [ns, nv] = both([&] { return kernels::nrm2sq(x); });
    CHECK(ns == doctest::Approx(nv).epsilon(1e-13));
  }
}

TEST_CASE("kernel backends agree: weighted_abs2 and spmv") {
  for (int n : {1, 5, 64, 333}) {
    auto w = random_rvec(n, 7 + n);
    auto psi = random_cvec(n, 31 + n);
    auto [as, av] = both([&] { return kernels::weighted_abs2(w, psi); });
    CHECK(as == doctest::Approx(av).epsilon(1e-13));

    SparseMatrix m = random_sparse(n, n, 0.15, 101 + n);
    auto [ss, sv] = both([&] { return m.apply(std::span<const cplx>(psi)); });
    for (int i = 0; i < n; ++i) CHECK(std::abs(ss[i] - sv[i]) < 1e-13);

    auto xr = random_rvec(n, 77 + n);
    auto [rs, rv] = both([&] { return m.apply(std::span<const double>(xr)); });
    for (int i = 0; i < n; ++i) CHECK(rs[i] == doctest::Approx(rv[i]).epsilon(1e-13));
  }
}

TEST_CASE("spmv matches a dense reference") {
  const int n = 40;
  SparseMatrix m = random_sparse(n, n, 0.2, 5);
  auto x = random_cvec(n, 6);
  auto dense = m.dense();  // column-major
  std::vector<cplx> ref(n, cplx{0, 0});
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) ref[r] += dense[static_cast<std::size_t>(c) * n + r] * x[c];
  auto y = m.apply(std::span<const cplx>(x));
  for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - ref[i]) < 1e-12);
}

TEST_CASE("phase_apply rotates by exp(-iEt)") {
  auto c = random_cvec(9, 42);
  std::vector<double> e = random_rvec(9, 43);
  std::vector<cplx> out(9);
  kernels::phase_apply(c, e, 0.37, out);
  for (int i = 0; i < 9; ++i) {
    const cplx expect = c[i] * std::exp(cplx{0.0, -e[i] * 0.37});
    CHECK(std::abs(out[i] - expect) < 1e-14);
  }
}

TEST_CASE("triplet assembly coalesces duplicates") {
  SparseBuilder b(3, 3);
  b.add(1, 2, 0.5);
  b.add(1, 2, 0.25);
  b.add(0, 0, 1.0);
  b.add(2, 1, -1.0);
  b.add(2, 1, 1.0);  // cancels away
  SparseMatrix m = b.build();
  CHECK(m.nnz() == 2);
  std::vector<double> x{1.0, 1.0, 1.0};
  auto y = m.apply(std::span<const double>(x));
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(0.75));
  CHECK(y[2] == doctest::Approx(0.0));
}
