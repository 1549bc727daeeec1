#include "kernels_internal.hpp"

#if defined(__x86_64__)
#include <immintrin.h>

namespace m1sim::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// y += a*x, complex doubles stored interleaved (re,im)
void axpy_v(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const std::size_t n = x.size();
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);              // (xi, xr, ...)
    __m256d t = _mm256_mul_pd(ai, xs);                    // (ai*xi, ai*xr, ...)
    __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);         // (ar*xr - ai*xi, ar*xi + ai*xr)
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cplx dotc_v(std::span<const cplx> x, std::span<const cplx> y) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  const double* yp = reinterpret_cast<const double*>(y.data());
  const std::size_t n = x.size();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    __m256d ys = _mm256_permute_pd(yv, 0x5);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);   // xr*yr + xi*yi pairwise
    acc_im = _mm256_fmadd_pd(xv, ys, acc_im);   // xr*yi + xi*yr pairwise (need xr*yi - xi*yr)
  }
  // acc_re lanes: (xr*yr, xi*yi, ...) -> sum all
  double re = hsum(acc_re);
  // acc_im lanes: (xr*yi, xi*yr, ...) -> signed sum: even lanes +, odd lanes -
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc_im);
  double im = lanes[0] - lanes[1] + lanes[2] - lanes[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2sq_v(std::span<const cplx> x) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return out;
}

double weighted_abs2_v(std::span<const double> w, std::span<const cplx> psi) {
  const double* pp = reinterpret_cast<const double*>(psi.data());
  const std::size_t n = w.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d c01 = _mm256_loadu_pd(pp + 2 * i);      // r0 i0 r1 i1
    __m256d c23 = _mm256_loadu_pd(pp + 2 * i + 4);  // r2 i2 r3 i3
    __m256d s01 = _mm256_mul_pd(c01, c01);
    __m256d s23 = _mm256_mul_pd(c23, c23);
    // hadd -> (|c0|^2, |c2|^2, |c1|^2, |c3|^2)
    __m256d mag = _mm256_hadd_pd(s01, s23);
    __m256d wv = _mm256_loadu_pd(w.data() + i);     // w0 w1 w2 w3
    wv = _mm256_permute4x64_pd(wv, 0xD8);           // w0 w2 w1 w3
    acc = _mm256_fmadd_pd(wv, mag, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i)
    out += w[i] * (psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag());
  return out;
}

void spmv_c_v(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  for (int r = 0; r < a.rows; ++r) {
    const int b = a.row_ptr[r], e = a.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();  // (re0, im0, re1, im1) two partial sums
    int p = b;
    for (; p + 2 <= e; p += 2) {
      __m128d x0 = _mm_loadu_pd(xp + 2 * a.col[p]);
      __m128d x1 = _mm_loadu_pd(xp + 2 * a.col[p + 1]);
      __m256d xv = _mm256_set_m128d(x1, x0);
      __m256d av = _mm256_setr_pd(a.val[p], a.val[p], a.val[p + 1], a.val[p + 1]);
      acc = _mm256_fmadd_pd(av, xv, acc);
    }
    __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double re = _mm_cvtsd_f64(s);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; p < e; ++p) {
      re += a.val[p] * x[a.col[p]].real();
      im += a.val[p] * x[a.col[p]].imag();
    }
    y[r] = {re, im};
  }
}

void spmv_r_v(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    const int b = a.row_ptr[r], e = a.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    int p = b;
    for (; p + 4 <= e; p += 4) {
      __m256d av = _mm256_loadu_pd(a.val + p);
      __m256d xv = _mm256_setr_pd(x[a.col[p]], x[a.col[p + 1]], x[a.col[p + 2]], x[a.col[p + 3]]);
      acc = _mm256_fmadd_pd(av, xv, acc);
    }
    double out = hsum(acc);
    for (; p < e; ++p) out += a.val[p] * x[a.col[p]];
    y[r] = out;
  }
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend b{axpy_v, dotc_v, nrm2sq_v, weighted_abs2_v, spmv_c_v, spmv_r_v, "avx2"};
  return b;
}

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace m1sim::kernels::detail

#else  // non-x86: no vector variant, fall back to scalar

namespace m1sim::kernels::detail {
const Backend& avx2_backend() { return scalar_backend(); }
bool avx2_supported() { return false; }
}  // namespace m1sim::kernels::detail

#endif
