#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used across the solver: squared-distance batches
// (neighbor search, snapping, fill-distance probes), polyharmonic kernel
// batches (local system assembly), CSR products and BLAS-1 pieces (power
// iterations, residuals). Each kernel has a scalar reference implementation
// and an AVX2 variant; the active set is chosen once at runtime from CPU
// capabilities and can be pinned for equivalence testing.

namespace rbffd::kernels {

enum class Isa { Scalar, Avx2 };

/// Highest ISA the running CPU supports.
Isa detect_isa();

/// Currently active ISA.
Isa active_isa();

/// Pin the active ISA (tests compare Scalar vs Avx2 outputs). Requesting an
/// unsupported ISA falls back to Scalar. The RBFFD_KERNELS=scalar environment
/// variable applies the same pin at startup.
void set_isa(Isa isa);

struct Ops {
    // out[i] = (qx-xs[i])^2 + (qy-ys[i])^2 + (qz-zs[i])^2
    void (*dist2_batch)(const double* xs, const double* ys, const double* zs,
                        std::size_t count, double qx, double qy, double qz, double* out);
    // out[i] = r2[i]^(k-1) * sqrt(r2[i])  (PHS value r^(2k-1) from squared radius)
    void (*phs_value_batch)(const double* r2, std::size_t count, int k, double* out);
    // out[i] = coeff * r2[i]^(k-2) * sqrt(r2[i])  (radial profile r^(2k-3) scaled;
    // callers pass coeff = (2k-1)(2k-3+d) for the Laplacian or (2k-1) for gradients)
    void (*phs_rscale_batch)(const double* r2, std::size_t count, int k, double coeff,
                             double* out);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*nrm2sq)(const double* a, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = A x for CSR (row_ptr int64, cols int32)
    void (*csr_matvec)(std::size_t rows, const std::int64_t* row_ptr,
                       const std::int32_t* cols, const double* vals, const double* x,
                       double* y);
};

/// Active dispatch table.
const Ops& ops();

/// Reference (scalar) table, exported for equivalence tests.
const Ops& scalar_ops();

/// AVX2 table; null entries when the binary was built without x86 support.
const Ops* avx2_ops();

}  // namespace rbffd::kernels
