#include "mlnheat/kernels/dispatch.hpp"

#include <cstdlib>
#include <cstring>

#include "mlnheat/errors.hpp"

namespace mlnheat::kernels {
namespace {

Isa g_isa = Isa::scalar;
const Ops* g_ops = nullptr;

void select_default() {
    const Ops* avx2 = avx2_available() ? avx2_ops() : nullptr;
    const char* env = std::getenv("MLNHEAT_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        g_isa = Isa::scalar;
        g_ops = &scalar_ops();
        return;
    }
    if (env != nullptr && std::strcmp(env, "avx2") == 0 && avx2 == nullptr)
        throw Error("MLNHEAT_KERNELS=avx2 requested but AVX2 is not available");
    if (avx2 != nullptr) {
        g_isa = Isa::avx2;
        g_ops = avx2;
    } else {
        g_isa = Isa::scalar;
        g_ops = &scalar_ops();
    }
}

} // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
           avx2_ops() != nullptr;
#else
    return false;
#endif
}

const Ops& ops() {
    if (g_ops == nullptr) select_default();
    return *g_ops;
}

Isa active_isa() {
    if (g_ops == nullptr) select_default();
    return g_isa;
}

void force_isa(Isa isa) {
    if (isa == Isa::avx2) {
        if (!avx2_available()) throw Error("AVX2 kernels are not available on this machine");
        g_isa = Isa::avx2;
        g_ops = avx2_ops();
    } else {
        g_isa = Isa::scalar;
        g_ops = &scalar_ops();
    }
}

} // namespace mlnheat::kernels
