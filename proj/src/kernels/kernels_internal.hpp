#pragma once

#include "m1sim/kernels.hpp"

namespace m1sim::kernels::detail {

struct Backend {
  void (*axpy)(cplx, std::span<const cplx>, std::span<cplx>);
  cplx (*dotc)(std::span<const cplx>, std::span<const cplx>);
  double (*nrm2sq)(std::span<const cplx>);
  double (*weighted_abs2)(std::span<const double>, std::span<const cplx>);
  void (*spmv_c)(const CsrView&, std::span<const cplx>, std::span<cplx>);
  void (*spmv_r)(const CsrView&, std::span<const double>, std::span<double>);
  const char* name;
};

const Backend& scalar_backend();
const Backend& avx2_backend();
bool avx2_supported();

}  // namespace m1sim::kernels::detail
