#include "rbffd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rbffd::kernels {
namespace {

Isa g_active = Isa::Scalar;
bool g_initialized = false;

void init_once() {
    if (g_initialized) return;
    Isa isa = detect_isa();
    const char* env = std::getenv("RBFFD_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) isa = Isa::Scalar;
    g_active = isa;
    g_initialized = true;
}

}  // namespace

Isa detect_isa() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") && avx2_ops())
        return Isa::Avx2;
#endif
    return Isa::Scalar;
}

Isa active_isa() {
    init_once();
    return g_active;
}

void set_isa(Isa isa) {
    init_once();
    if (isa == Isa::Avx2 && (detect_isa() != Isa::Avx2)) isa = Isa::Scalar;
    g_active = isa;
}

const Ops& ops() {
    init_once();
    if (g_active == Isa::Avx2) return *avx2_ops();
    return scalar_ops();
}

}  // namespace rbffd::kernels
