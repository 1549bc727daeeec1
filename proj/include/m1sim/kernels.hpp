#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops used by the solvers. A scalar reference
// implementation always exists; an AVX2/FMA variant is selected at runtime
// when the CPU supports it. Set M1SIM_KERNELS=scalar|avx2 to override.
namespace m1sim::kernels {

using cplx = std::complex<double>;

// Read-only view of a real-valued CSR matrix.
struct CsrView {
  const int* row_ptr = nullptr;  // size rows+1
  const int* col = nullptr;      // size nnz
  const double* val = nullptr;   // size nnz
  int rows = 0;
};

// y += a*x
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
// sum_i conj(x_i) * y_i
cplx dotc(std::span<const cplx> x, std::span<const cplx> y);
// sum_i |x_i|^2
double nrm2sq(std::span<const cplx> x);
// sum_i w_i * |psi_i|^2
double weighted_abs2(std::span<const double> w, std::span<const cplx> psi);
// y = A x  (real matrix, complex vector)
void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);
// y = A x  (real matrix, real vector)
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
// out_k = c_k * exp(-i e_k t); transcendental-bound, scalar on all backends
void phase_apply(std::span<const cplx> c, std::span<const double> e, double t,
                 std::span<cplx> out);

// Name of the backend in use ("scalar" or "avx2").
std::string active_backend();
// Force a backend by name; throws on unknown name. Intended for tests.
void force_backend(const std::string& name);

}  // namespace m1sim::kernels
