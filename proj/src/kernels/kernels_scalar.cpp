#include "kernels_internal.hpp"

namespace m1sim::kernels::detail {
namespace {

void axpy_s(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx dotc_s(std::span<const cplx> x, std::span<const cplx> y) {
  double re = 0.0, im = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2sq_s(std::span<const cplx> x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

double weighted_abs2_s(std::span<const double> w, std::span<const cplx> psi) {
  double acc = 0.0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i)
    acc += w[i] * (psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag());
  return acc;
}

void spmv_c_s(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  for (int r = 0; r < a.rows; ++r) {
    double re = 0.0, im = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      const cplx& xv = x[a.col[p]];
      re += a.val[p] * xv.real();
      im += a.val[p] * xv.imag();
    }
    y[r] = {re, im};
  }
}

void spmv_r_s(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) acc += a.val[p] * x[a.col[p]];
    y[r] = acc;
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{axpy_s, dotc_s, nrm2sq_s, weighted_abs2_s, spmv_c_s, spmv_r_s, "scalar"};
  return b;
}

}  // namespace m1sim::kernels::detail
