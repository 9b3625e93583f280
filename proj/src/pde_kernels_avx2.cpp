#include "bgc/pde_kernels.hpp"

#include <immintrin.h>

namespace bgc {

void row_kernel_avx2(const double* const rows[5], const double* y0, double* acc, double* next,
                     std::size_t n, const RowStencil& st, const StageCoeffs& sc)
{
    const double* r0 = rows[2];
    const double* rm2 = rows[0];
    const double* rm1 = rows[1];
    const double* rp1 = rows[3];
    const double* rp2 = rows[4];
    const __m256d w0 = _mm256_set1_pd(st.w[0]);
    const __m256d w1 = _mm256_set1_pd(st.w[1]);
    const __m256d w2 = _mm256_set1_pd(st.w[2]);
    const __m256d w3 = _mm256_set1_pd(st.w[3]);
    const __m256d w4 = _mm256_set1_pd(st.w[4]);
    const __m256d kp = _mm256_set1_pd(st.kp);
    const __m256d sixteen = _mm256_set1_pd(16.0);
    const __m256d b = _mm256_set1_pd(sc.b_acc);
    const __m256d a = _mm256_set1_pd(sc.a_next);

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d k = _mm256_mul_pd(w0, _mm256_loadu_pd(r0 + j - 2));
        k = _mm256_fmadd_pd(w1, _mm256_loadu_pd(r0 + j - 1), k);
        k = _mm256_fmadd_pd(w2, _mm256_loadu_pd(r0 + j), k);
        k = _mm256_fmadd_pd(w3, _mm256_loadu_pd(r0 + j + 1), k);
        k = _mm256_fmadd_pd(w4, _mm256_loadu_pd(r0 + j + 2), k);
        const __m256d inner = _mm256_add_pd(_mm256_loadu_pd(rm1 + j), _mm256_loadu_pd(rp1 + j));
        const __m256d outer = _mm256_add_pd(_mm256_loadu_pd(rm2 + j), _mm256_loadu_pd(rp2 + j));
        const __m256d pd = _mm256_fmsub_pd(sixteen, inner, outer);
        k = _mm256_fmadd_pd(kp, pd, k);

        const __m256d y = _mm256_loadu_pd(y0 + j);
        const __m256d base = sc.init_acc ? y : _mm256_loadu_pd(acc + j);
        _mm256_storeu_pd(acc + j, _mm256_fmadd_pd(b, k, base));
        if (next) _mm256_storeu_pd(next + j, _mm256_fmadd_pd(a, k, y));
    }
    if (j < n) {
        const double* tail[5] = {rm2 + j, rm1 + j, r0 + j, rp1 + j, rp2 + j};
        row_kernel_scalar(tail, y0 + j, acc + j, next ? next + j : nullptr, n - j, st, sc);
    }
}

} // namespace bgc
