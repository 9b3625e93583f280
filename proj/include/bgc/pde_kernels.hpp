#pragma once

#include <cstddef>

namespace bgc {

/// Per-row weights of the fused stencil. w[0..4] act along q on offsets
/// -2..2 (transport + q-diffusion + p-diffusion centre), kp scales the
/// off-centre p-diffusion taps (-1,16,_,16,-1).
struct RowStencil {
    double w[5] = {0, 0, 0, 0, 0};
    double kp = 0.0;
};

/// One RK4 stage for one row: k = L(in); acc = (init ? y0 : acc) + b k;
/// if next: next = y0 + a k.
struct StageCoeffs {
    double a_next = 0.0;
    double b_acc = 0.0;
    bool init_acc = false;
};

/// rows[k] points at the first interior element of input row i+k-2; each row
/// has two readable ghost cells on both sides.
using RowKernel = void (*)(const double* const rows[5], const double* y0, double* acc, double* next,
                           std::size_t n, const RowStencil& st, const StageCoeffs& sc);

void row_kernel_scalar(const double* const rows[5], const double* y0, double* acc, double* next,
                       std::size_t n, const RowStencil& st, const StageCoeffs& sc);
#if defined(BGC_HAVE_AVX2_TU) || defined(BGC_DECLARE_AVX2)
void row_kernel_avx2(const double* const rows[5], const double* y0, double* acc, double* next,
                     std::size_t n, const RowStencil& st, const StageCoeffs& sc);
#endif

enum class KernelBackend { Scalar, Avx2 };

bool avx2_available();
/// Scalar unless the CPU has AVX2+FMA and the AVX2 unit was compiled in;
/// BGC_FORCE_SCALAR=1 in the environment pins the scalar path.
KernelBackend default_backend();
KernelBackend active_backend();
void set_backend(KernelBackend backend);
RowKernel row_kernel(KernelBackend backend);
const char* backend_name(KernelBackend backend);

} // namespace bgc
