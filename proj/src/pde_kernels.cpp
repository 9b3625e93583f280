#include "bgc/pde_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace bgc {

void row_kernel_scalar(const double* const rows[5], const double* y0, double* acc, double* next,
                       std::size_t n, const RowStencil& st, const StageCoeffs& sc)
{
    const double* r0 = rows[2];
    for (std::size_t j = 0; j < n; ++j) {
        double k = st.w[0] * r0[j - 2] + st.w[1] * r0[j - 1] + st.w[2] * r0[j] + st.w[3] * r0[j + 1] +
                   st.w[4] * r0[j + 2];
        k += st.kp * (16.0 * (rows[1][j] + rows[3][j]) - (rows[0][j] + rows[4][j]));
        acc[j] = (sc.init_acc ? y0[j] : acc[j]) + sc.b_acc * k;
        if (next) next[j] = y0[j] + sc.a_next * k;
    }
}

namespace {

RowKernel resolve(KernelBackend b)
{
#if defined(BGC_HAVE_AVX2_TU)
    if (b == KernelBackend::Avx2 && avx2_available()) return row_kernel_avx2;
#else
    (void)b;
#endif
    return row_kernel_scalar;
}

std::atomic<int>& backend_slot()
{
    static std::atomic<int> slot{static_cast<int>(default_backend())};
    return slot;
}

} // namespace

bool avx2_available()
{
#if defined(BGC_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

KernelBackend default_backend()
{
    const char* env = std::getenv("BGC_FORCE_SCALAR");
    if (env && std::strcmp(env, "0") != 0 && env[0] != '\0') return KernelBackend::Scalar;
    return avx2_available() ? KernelBackend::Avx2 : KernelBackend::Scalar;
}

KernelBackend active_backend()
{
    return static_cast<KernelBackend>(backend_slot().load());
}

void set_backend(KernelBackend backend)
{
    if (backend == KernelBackend::Avx2 && !avx2_available()) backend = KernelBackend::Scalar;
    backend_slot().store(static_cast<int>(backend));
}

RowKernel row_kernel(KernelBackend backend)
{
    return resolve(backend);
}

const char* backend_name(KernelBackend backend)
{
    return backend == KernelBackend::Avx2 ? "avx2" : "scalar";
}

} // namespace bgc
