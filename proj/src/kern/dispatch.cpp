#include "tbp/kern/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "tbp/errors.hpp"

namespace tbp::kern {

const Kernels& scalar_kernels();
#ifdef TBP_HAVE_AVX2
const Kernels& avx2_kernels();
#endif

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#ifdef TBP_HAVE_AVX2
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() {
    static const Backend chosen = [] {
        if (const char* env = std::getenv("TBP_KERNEL")) {
            if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
            if (std::strcmp(env, "avx2") == 0 && backend_available(Backend::avx2)) return Backend::avx2;
        }
        return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
    }();
    return chosen;
}

const Kernels& kernels(Backend b) {
    switch (b) {
        case Backend::scalar:
            return scalar_kernels();
        case Backend::avx2:
#ifdef TBP_HAVE_AVX2
            if (backend_available(Backend::avx2)) return avx2_kernels();
#endif
            throw ValidationError("kernel backend avx2 is not available on this CPU/build");
    }
    return scalar_kernels();
}

const Kernels& active() { return kernels(active_backend()); }

} // namespace tbp::kern
