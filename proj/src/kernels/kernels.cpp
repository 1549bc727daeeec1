#include "kernels_internal.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace m1sim::kernels {

namespace {

using detail::Backend;

const Backend* pick_default() {
  if (const char* env = std::getenv("M1SIM_KERNELS")) {
    std::string v(env);
    if (v == "scalar") return &detail::scalar_backend();
    if (v == "avx2" && detail::avx2_supported()) return &detail::avx2_backend();
  }
  return detail::avx2_supported() ? &detail::avx2_backend() : &detail::scalar_backend();
}

std::atomic<const Backend*>& current() {
  static std::atomic<const Backend*> b{pick_default()};
  return b;
}

}  // namespace

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  current().load()->axpy(a, x, y);
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return current().load()->dotc(x, y);
}

double nrm2sq(std::span<const cplx> x) { return current().load()->nrm2sq(x); }

double weighted_abs2(std::span<const double> w, std::span<const cplx> psi) {
  return current().load()->weighted_abs2(w, psi);
}

void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  current().load()->spmv_c(a, x, y);
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  current().load()->spmv_r(a, x, y);
}

void phase_apply(std::span<const cplx> c, std::span<const double> e, double t,
                 std::span<cplx> out) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = -e[i] * t;
    out[i] = c[i] * cplx{std::cos(ph), std::sin(ph)};
  }
}

std::string active_backend() { return current().load()->name; }

void force_backend(const std::string& name) {
  if (name == "scalar") {
    current().store(&detail::scalar_backend());
  } else if (name == "avx2") {
    if (!detail::avx2_supported()) throw std::runtime_error("avx2 not supported on this cpu");
    current().store(&detail::avx2_backend());
  } else {
    throw std::runtime_error("unknown kernel backend: " + name);
  }
}

}  // namespace m1sim::kernels
