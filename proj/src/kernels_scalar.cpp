#include "rbffd/kernels.hpp"

#include <cmath>

namespace rbffd::kernels {
namespace {

void dist2_batch_scalar(const double* xs, const double* ys, const double* zs,
                        std::size_t count, double qx, double qy, double qz, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        const double dz = qz - zs[i];
        out[i] = dx * dx + dy * dy + dz * dz;
    }
}

void phs_value_batch_scalar(const double* r2, std::size_t count, int k, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        double acc = std::sqrt(r2[i]);
        for (int j = 1; j < k; ++j) acc *= r2[i];
        out[i] = acc;
    }
}

void phs_rscale_batch_scalar(const double* r2, std::size_t count, int k, double coeff,
                             double* out) {
    // r^(2k-3) = r2^(k-2) * sqrt(r2); finite at r=0 for k >= 2
    for (std::size_t i = 0; i < count; ++i) {
        double acc = std::sqrt(r2[i]);
        for (int j = 2; j < k; ++j) acc *= r2[i];
        out[i] = coeff * acc;
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double nrm2sq_scalar(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void csr_matvec_scalar(std::size_t rows, const std::int64_t* row_ptr,
                       const std::int32_t* cols, const double* vals, const double* x,
                       double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::int64_t j = row_ptr[r]; j < row_ptr[r + 1]; ++j)
            s += vals[j] * x[cols[j]];
        y[r] = s;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        dist2_batch_scalar, phs_value_batch_scalar, phs_rscale_batch_scalar,
        dot_scalar,         nrm2sq_scalar,          axpy_scalar,
        csr_matvec_scalar,
    };
    return table;
}

}  // namespace rbffd::kernels
