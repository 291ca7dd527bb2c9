#include "rbffd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RBFFD_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define RBFFD_HAVE_AVX2_BUILD 0
#endif

#include <cmath>

namespace rbffd::kernels {

#if RBFFD_HAVE_AVX2_BUILD
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void dist2_batch_avx2(const double* xs, const double* ys, const double* zs,
                      std::size_t count, double qx, double qy, double qz, double* out) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    const __m256d vqz = _mm256_set1_pd(qz);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs + i));
        const __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys + i));
        const __m256d dz = _mm256_sub_pd(vqz, _mm256_loadu_pd(zs + i));
        __m256d acc = _mm256_mul_pd(dx, dx);
        acc = _mm256_fmadd_pd(dy, dy, acc);
        acc = _mm256_fmadd_pd(dz, dz, acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < count; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        const double dz = qz - zs[i];
        out[i] = dx * dx + dy * dy + dz * dz;
    }
}

void phs_value_batch_avx2(const double* r2, std::size_t count, int k, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d v = _mm256_loadu_pd(r2 + i);
        __m256d acc = _mm256_sqrt_pd(v);
        for (int j = 1; j < k; ++j) acc = _mm256_mul_pd(acc, v);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < count; ++i) {
        double acc = std::sqrt(r2[i]);
        for (int j = 1; j < k; ++j) acc *= r2[i];
        out[i] = acc;
    }
}

void phs_rscale_batch_avx2(const double* r2, std::size_t count, int k, double coeff,
                           double* out) {
    const __m256d vc = _mm256_set1_pd(coeff);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d v = _mm256_loadu_pd(r2 + i);
        __m256d acc = _mm256_sqrt_pd(v);
        for (int j = 2; j < k; ++j) acc = _mm256_mul_pd(acc, v);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vc, acc));
    }
    for (; i < count; ++i) {
        double acc = std::sqrt(r2[i]);
        for (int j = 2; j < k; ++j) acc *= r2[i];
        out[i] = coeff * acc;
    }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double nrm2sq_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void csr_matvec_avx2(std::size_t rows, const std::int64_t* row_ptr,
                     const std::int32_t* cols, const double* vals, const double* x,
                     double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const std::int64_t begin = row_ptr[r];
        const std::int64_t end = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        std::int64_t j = begin;
        for (; j + 4 <= end; j += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + j));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + j), xv, acc);
        }
        double s = hsum(acc);
        for (; j < end; ++j) s += vals[j] * x[cols[j]];
        y[r] = s;
    }
}

const Ops avx2_table = {
    dist2_batch_avx2, phs_value_batch_avx2, phs_rscale_batch_avx2,
    dot_avx2,         nrm2sq_avx2,          axpy_avx2,
    csr_matvec_avx2,
};

}  // namespace

const Ops* avx2_ops() { return &avx2_table; }

#else

const Ops* avx2_ops() { return nullptr; }

#endif  // RBFFD_HAVE_AVX2_BUILD

}  // namespace rbffd::kernels
